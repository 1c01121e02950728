mod common;

use common::{dsl, gen, TRIANGLE};
use kplanar::families::Family;
use kplanar::metrics::{
    alpha, epsilon_of, verify_angle_identity, verify_density_bound, verify_edge_count_identity, verify_euler,
    verify_planar_side_identity, MetricsError,
};
use kplanar::{counts, Restrictions, StyleSpec};
use num_rational::Rational64;

/// Planar K4: a centre joined to an outer triangle.
const K4: &str = "kplanar-dsl 1
real a : ab ac ad
real b : bc ba bd
real c : cd ca cb
real d : db da dc
segment ab ba e0
segment ac ca e1
segment ad da e2
segment bc cb e3
segment bd db e4
segment cd dc e5
";

const SINGLE_EDGE: &str = "kplanar-dsl 1
real a : x
real b : y
segment x y e
";

fn r(a: i64, b: i64) -> Rational64 {
    Rational64::new(a, b)
}

#[test]
fn triangle_counts() {
    let p = dsl(TRIANGLE);
    let c = counts(&p, 4).unwrap();
    assert_eq!((c.n, c.m, c.m_p, c.m_x, c.cr, c.c_3, c.cells), (3, 3, 3, 0, 0, 2, 2));
    assert_eq!(c.epsilon, r(2, 1));
    let id = verify_edge_count_identity(&p, 4).unwrap();
    assert_eq!((id.lhs, id.rhs), (r(3, 1), r(3, 1)));
    assert!(verify_angle_identity(&p).unwrap());
    assert!(verify_planar_side_identity(&p).unwrap());
    assert!(verify_euler(&p).unwrap());
    assert!(verify_density_bound(&p, &StyleSpec::new(4, Restrictions::NONE)).unwrap());
}

#[test]
fn identity_at_other_k_counts_planar_edges_with_half_weight() {
    // triangle at k = 6: epsilon = (6-4)/2 * 3 + c_3 = 5 and m = 2/4 * (3 - 2 + 5) = 3
    let p = dsl(TRIANGLE);
    assert_eq!(counts(&p, 6).unwrap().epsilon, r(5, 1));
    for k in 3..=12 {
        assert!(verify_edge_count_identity(&p, k).unwrap().holds, "k={k}");
    }
}

#[test]
fn planar_k4() {
    let p = dsl(K4);
    let c = counts(&p, 4).unwrap();
    assert_eq!((c.n, c.m, c.m_p, c.c_3, c.cells), (4, 6, 6, 4, 4));
    for k in 3..=9 {
        assert!(verify_edge_count_identity(&p, k).unwrap().holds, "k={k}");
    }
    assert!(verify_angle_identity(&p).unwrap());
    assert!(verify_planar_side_identity(&p).unwrap());
}

#[test]
fn star_with_isolated_vertex() {
    let p = gen(Family::Star, 4);
    let c = counts(&p, 4).unwrap();
    assert_eq!((c.n, c.m, c.m_x, c.m_p, c.cr, c.iso), (5, 3, 3, 0, 6, 1));
    assert_eq!(c.epsilon, r(0, 1));
}

#[test]
fn spiral_identity() {
    let p = gen(Family::Spiral, 4);
    let c = counts(&p, 4).unwrap();
    assert_eq!((c.m, c.n, c.c_0), (1, 3, 0));
    let id = verify_edge_count_identity(&p, 4).unwrap();
    assert!(id.holds);
    assert_eq!(id.rhs, r(1, 1));
}

#[test]
fn tight_drawings_have_zero_error_term() {
    for (f, k) in [(Family::Cycle, 5), (Family::Weave, 6), (Family::ImMatching, 6), (Family::SimMatching, 7)] {
        let c = counts(&gen(f, k), k).unwrap();
        assert_eq!((c.c_0, c.m_p, c.c2_prime, c.c_3), (0, 0, 0, 0));
        assert_eq!(2 * c.cr, k as usize * c.m_x);
        assert_eq!(c.epsilon, r(0, 1));
    }
}

#[test]
fn euler_on_generated_drawings() {
    for (f, k) in [(Family::Spiral, 8), (Family::Star, 6), (Family::Im4, 4), (Family::OddPair, 7)] {
        let p = gen(f, k);
        assert!(verify_euler(&p).unwrap());
        assert!(verify_angle_identity(&p).unwrap());
        assert!(verify_planar_side_identity(&p).unwrap());
    }
}

#[test]
fn identity_preconditions() {
    let edge = dsl(SINGLE_EDGE);
    assert!(matches!(verify_edge_count_identity(&edge, 4), Err(MetricsError::PreconditionFailed(_))));
    let p = dsl(TRIANGLE);
    assert!(matches!(verify_edge_count_identity(&p, 2), Err(MetricsError::PreconditionFailed(_))));
}

#[test]
fn alpha_values() {
    let s = |k, x: &str| StyleSpec::new(k, x.parse().unwrap());
    assert_eq!(alpha(&s(4, "s,m")).unwrap(), r(5, 6));
    assert_eq!(alpha(&s(8, "s,i,m,h")).unwrap(), r(9, 28));
    assert_eq!(alpha(&s(4, "")).unwrap(), r(1, 2));
    assert_eq!(alpha(&s(5, "s")).unwrap(), r(1, 2));
    assert_eq!(alpha(&s(4, "m")).unwrap(), r(3, 4));
    assert_eq!(alpha(&s(4, "i,m")).unwrap(), r(4, 5));
    assert!(matches!(alpha(&s(5, "s,i,m")), Err(MetricsError::Unresolved(_))));
    assert!(matches!(alpha(&s(3, "")), Err(MetricsError::BadK(3))));
}

#[test]
fn epsilon_formula() {
    // (k/2 m_x - cr) + (k-4)/2 m_p + c'_2 + c_3
    assert_eq!(epsilon_of(6, 2, 5, 1, 1, 1), r(6 - 5 + 1 + 1 + 1, 1));
    assert_eq!(epsilon_of(5, 1, 2, 0, 0, 0), r(1, 2));
}

mod common;

use common::{gen, private_cells};
use kplanar::families::{glue, glue_chain, private_cell, Family, FamilyError};
use kplanar::metrics::{alpha, verify_edge_count_identity, MetricsError};
use kplanar::{canon, check_style, counts, is_tight, NodeKind, Planarization, StyleSpec};
use num_rational::Rational64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn glue_first(d1: &Planarization, d2: &Planarization) -> Planarization {
    let (v1, host) = private_cells(d1)[0];
    let (v2, _) = private_cells(d2)[0];
    glue(d1, v1, d2, v2, host).unwrap()
}

#[test]
fn two_small_cycles() {
    let c = gen(Family::Cycle, 4);
    let g = glue_first(&c, &c);
    let r = counts(&g, 4).unwrap();
    assert_eq!((r.n, r.m), (13, 10));
    assert!(is_tight(&g, 4).unwrap());
    let s = StyleSpec::new(4, Family::Cycle.styles()[0]);
    assert!(check_style(&g, &s).unwrap().in_style);
    // m = (5/6)(n - 1)
    assert_eq!(Rational64::from_integer(10), alpha(&s).unwrap() * Rational64::from_integer(12));
}

#[test]
fn gluing_a_lone_vertex_changes_nothing() {
    let d1 = gen(Family::Weave, 5);
    let mut lone = Planarization::new();
    let v2 = lone.add_node(NodeKind::IsolatedVertex, None);
    let (v1, host) = private_cells(&d1)[0];
    let g = glue(&d1, v1, &lone, v2, host).unwrap();
    let (a, b) = (counts(&d1, 5).unwrap(), counts(&g, 5).unwrap());
    assert_eq!((a.n, a.m, a.cr), (b.n, b.m, b.cr));
    assert!(canon::equivalent(&d1, &g).unwrap());
}

#[test]
fn host_cell_must_belong_to_the_vertex() {
    let d = gen(Family::Star, 4);
    let cm = d.cells().unwrap();
    let (v1, _) = private_cells(&d)[0];
    let other = cm.cells.iter().find(|c| !c.incident_vertices.contains(&v1)).unwrap();
    let err = glue(&d, v1, &d, v1, other.id).unwrap_err();
    assert!(matches!(err, FamilyError::NotIncident { .. }));
}

#[test]
fn glued_vertex_is_a_drawing_cut_vertex() {
    let c = gen(Family::Cycle, 4);
    let g = glue_first(&c, &c);
    let err = verify_edge_count_identity(&g, 4).unwrap_err();
    assert!(matches!(err, MetricsError::PreconditionFailed(_)));
}

#[test]
fn chains_keep_density() {
    for (family, k) in [(Family::Cycle, 4), (Family::Weave, 4), (Family::Star, 5), (Family::Spiral, 6)] {
        let d = gen(family, k);
        let s = StyleSpec::new(k, family.styles()[0]);
        let a = alpha(&s).unwrap();
        for t in 1..=6 {
            let g = glue_chain(&d, t).unwrap();
            let c = counts(&g, k).unwrap();
            assert!(is_tight(&g, k).unwrap(), "{family} t={t}");
            assert!(check_style(&g, &s).unwrap().in_style);
            assert_eq!(Rational64::from_integer(c.m as i64), a * Rational64::from_integer(c.n as i64 - 1));
        }
    }
}

#[test]
fn random_gluings_stay_tight() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let pieces = [gen(Family::Cycle, 4), gen(Family::Weave, 4), gen(Family::Spiral, 4), gen(Family::Star, 4)];
    for _ in 0..40 {
        let mut g = pieces.choose(&mut rng).unwrap().clone();
        for _ in 0..rng.gen_range(1..4) {
            let d2 = pieces.choose(&mut rng).unwrap();
            let (v1, host) = *private_cells(&g).choose(&mut rng).unwrap();
            let (v2, _) = *private_cells(d2).choose(&mut rng).unwrap();
            let n_before = counts(&g, 4).unwrap().n + counts(d2, 4).unwrap().n;
            g = glue(&g, v1, d2, v2, host).unwrap();
            assert_eq!(counts(&g, 4).unwrap().n, n_before - 1);
            assert!(is_tight(&g, 4).unwrap());
        }
    }
}

#[test]
fn private_cell_exists_in_tight_drawings() {
    let d = gen(Family::Cycle, 5);
    for v in d.vertices().filter(|&v| d.degree(v) > 0) {
        assert!(private_cell(&d, v).unwrap().is_some());
    }
}

mod common;

use std::time::{Duration, Instant};

use common::{dsl, gen};
use kplanar::families::Family;
use kplanar::layout::layout_or_circular;
use kplanar::{check_topology, layout, render_svg, Layout64};

const NESTED: &str = "kplanar-dsl 1
real a : a1 a2
real b : b1 b2
real c : c1 c2
real x : x1 x2
real y : y1 y2
real z : z1 z2
isolated w
segment a2 b1 ab
segment b2 c1 bc
segment c2 a1 ca
segment x2 y1 xy
segment y2 z1 yz
segment z2 x1 zx
anchor x via x1 in a1
anchor w in a2
";

const SINGLE_EDGE: &str = "kplanar-dsl 1
real a : x
real b : y
segment x y e
";

#[test]
fn nested_components_keep_rotations() {
    let p = dsl(NESTED);
    let l: Layout64 = layout(&p).unwrap();
    assert!(!l.fallback);
    check_topology(&p, &l).unwrap();
}

#[test]
fn single_edge_renders_two_disks_and_one_curve() {
    let p = dsl(SINGLE_EDGE);
    let l: Layout64 = layout(&p).unwrap();
    let svg = render_svg(&p, &l);
    assert_eq!(svg.matches("<circle").count(), 2);
    assert_eq!(svg.matches("<polyline").count(), 1);
}

#[test]
fn generated_drawings_round_trip_through_coordinates() {
    for (f, k) in [(Family::Spiral, 8), (Family::OddPair, 7), (Family::Weave, 7), (Family::Star, 7), (Family::Im4, 4)] {
        let p = gen(f, k);
        let l: Layout64 = layout(&p).unwrap();
        check_topology(&p, &l).unwrap_or_else(|e| panic!("{f} k={k}: {e}"));
    }
}

#[test]
fn deleted_drawings_with_several_components() {
    let p = gen(Family::Cycle, 5);
    let e = p.edges().next().unwrap();
    let v = p.vertices().find(|&v| p.degree(v) > 0).unwrap();
    for q in [p.delete_edges(&[e].into()).unwrap(), p.delete_vertex(v).unwrap()] {
        let l: Layout64 = layout(&q).unwrap();
        check_topology(&q, &l).unwrap();
    }
}

#[test]
fn rendering_is_deterministic_and_fast() {
    let p = gen(Family::Cycle, 7);
    let t = Instant::now();
    let (l, err) = layout_or_circular::<f64>(&p).unwrap();
    let svg = render_svg(&p, &l);
    assert!(t.elapsed() < Duration::from_secs(5));
    assert!(err.is_none());
    assert_eq!(svg, render_svg(&p, &layout(&p).unwrap()));
}

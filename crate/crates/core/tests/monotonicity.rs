mod common;

use std::collections::BTreeSet;
use std::sync::OnceLock;

use common::{dsl, gen, private_cells};
use kplanar::families::{glue, Family};
use kplanar::{check_style, EdgeId, Planarization, Restriction, Restrictions, StyleSpec};
use proptest::prelude::*;

/// In-style drawings with the styles (subsets of S, I, M) they belong to.
fn pool() -> &'static Vec<(Planarization, Vec<StyleSpec>)> {
    static POOL: OnceLock<Vec<(Planarization, Vec<StyleSpec>)>> = OnceLock::new();
    POOL.get_or_init(|| {
        let sim = Restrictions::new(&[Restriction::S, Restriction::I, Restriction::M]);
        let mut out = Vec::new();
        let members = [
            (Family::Spiral, 4),
            (Family::Spiral, 6),
            (Family::OddPair, 5),
            (Family::Weave, 4),
            (Family::Weave, 6),
            (Family::Star, 4),
            (Family::Star, 6),
            (Family::Cycle, 4),
            (Family::Cycle, 6),
            (Family::Im4, 4),
            (Family::ImMatching, 5),
            (Family::SimMatching, 7),
        ];
        for (f, k) in members {
            let styles: Vec<StyleSpec> =
                f.styles().into_iter().filter(|x| x.is_subset(sim)).map(|x| StyleSpec::new(k, x)).collect();
            let p = gen(f, k);
            let (v, host) = private_cells(&p)[0];
            let glued = glue(&p, v, &p, v, host).unwrap();
            out.push((p, styles.clone()));
            out.push((glued, styles));
        }
        for (p, styles) in &out {
            for s in styles {
                assert!(check_style(p, s).unwrap().in_style);
            }
        }
        out
    })
}

fn delete(p: &Planarization, edge: bool, pick: usize) -> Planarization {
    let vertices: Vec<_> = p.vertices().collect();
    if edge && p.edge_count() > 0 || vertices.is_empty() {
        let edges: Vec<EdgeId> = p.edges().collect();
        let e = edges[pick % edges.len()];
        p.delete_edges(&BTreeSet::from([e])).unwrap()
    } else {
        p.delete_vertex(vertices[pick % vertices.len()]).unwrap()
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, ..ProptestConfig::default() })]

    #[test]
    fn deletions_stay_in_style(which in 0usize..1000, steps in prop::collection::vec((any::<bool>(), 0usize..1000), 1..4)) {
        let (p, styles) = &pool()[which % pool().len()];
        let mut q = p.clone();
        for &(edge, pick) in &steps {
            if q.vertices().next().is_none() {
                break;
            }
            q = delete(&q, edge, pick);
            q.ensure_valid().unwrap();
            for s in styles {
                prop_assert!(check_style(&q, s).unwrap().in_style, "left {} after deletions {:?}", s, steps);
            }
        }
    }
}

/// Two parallel uncrossed edges with an isolated vertex on each side.
pub const LENS: &str = "kplanar-dsl 1
real a : a1 a2
real b : b1 b2
isolated c
isolated d
segment a1 b2 e
segment a2 b1 f
anchor c in a1
anchor d in a2
";

#[test]
fn homotopy_freeness_is_not_monotone() {
    let p = dsl(LENS);
    let h = StyleSpec::new(4, Restrictions::new(&[Restriction::H]));
    assert!(check_style(&p, &h).unwrap().in_style);
    let c = p.nodes().find(|&v| p.node(v).label.is_none() && p.degree(v) == 0).unwrap();
    let q = p.delete_vertex(c).unwrap();
    let v = check_style(&q, &h).unwrap();
    assert!(!v.in_style);
    assert!(v.violations.iter().all(|x| x.edges.len() == 2));
}

#![allow(dead_code)]

use kplanar::families::{generate, Family, FamilyId};
use kplanar::{parse_drawing, CellId, NodeId, Planarization};

pub fn gen(family: Family, k: u32) -> Planarization {
    generate(FamilyId { family, k }).unwrap_or_else(|e| panic!("{family} k={k}: {e}"))
}

pub fn dsl(text: &str) -> Planarization {
    parse_drawing(text).unwrap()
}

/// n choose 2.
pub fn c2(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Expected (m, n, cr) of a family member, from the closed formulas.
pub fn expected_counts(family: Family, k: u32) -> (usize, usize, usize) {
    let k = k as usize;
    match family {
        Family::Spiral => (1, (k + 2) / 2, k / 2),
        Family::OddPair | Family::Weave => (2, k, k),
        Family::Star | Family::ImMatching => (k - 1, c2(k - 1) + 2, c2(k - 1) + (k - 1)),
        Family::Cycle | Family::SimMatching => (k + 1, c2(k) + 1, c2(k + 1)),
        Family::Im4 => (4, 6, 8),
    }
}

/// Real vertices of `p` with the cells whose only vertex they are.
pub fn private_cells(p: &Planarization) -> Vec<(NodeId, CellId)> {
    let cm = p.cells().unwrap();
    let mut out = Vec::new();
    for c in &cm.cells {
        if c.incident_vertices.len() == 1 {
            let v = *c.incident_vertices.iter().next().unwrap();
            if p.degree(v) > 0 {
                out.push((v, c.id));
            }
        }
    }
    out
}

/// A planar triangle.
pub const TRIANGLE: &str = "kplanar-dsl 1
real a : a1 a2
real b : b1 b2
real c : c1 c2
segment a2 b1 ab
segment b2 c1 bc
segment c2 a1 ca
";

mod common;

use common::gen;
use kplanar::canon::canonical_code;
use kplanar::families::Family;
use kplanar::search::search_tight;
use kplanar::{Restrictions, StyleSpec};

fn style(k: u32, x: &str) -> StyleSpec {
    StyleSpec::new(k, x.parse::<Restrictions>().unwrap())
}

const BUDGET: u64 = 500_000_000;

#[test]
fn no_single_selfcrossing_free_edge() {
    let r = search_tight(&style(4, "s"), 1, BUDGET).unwrap();
    assert!(r.exhaustive);
    assert!(r.found.is_empty());
}

#[test]
fn no_two_edges_in_single_crossing_style() {
    let r = search_tight(&style(4, "m"), 2, BUDGET).unwrap();
    assert!(r.exhaustive);
    assert!(r.found.is_empty());
}

#[test]
fn one_edge_finds_the_spiral() {
    let r = search_tight(&style(4, ""), 1, BUDGET).unwrap();
    let spiral = canonical_code(&gen(Family::Spiral, 4)).unwrap();
    let codes: Vec<_> = r.found.iter().map(|p| canonical_code(p).unwrap()).collect();
    assert!(codes.contains(&spiral));
}

#[test]
fn two_edges_find_the_weave() {
    let r = search_tight(&style(4, "s"), 2, BUDGET).unwrap();
    let weave = canonical_code(&gen(Family::Weave, 4)).unwrap();
    assert!(r.found.iter().any(|p| canonical_code(p).unwrap() == weave));
}

#[test]
fn star_is_the_smallest_single_crossing_drawing() {
    let r = search_tight(&style(4, "m"), 3, BUDGET).unwrap();
    let star = canonical_code(&gen(Family::Star, 4)).unwrap();
    assert!(!r.found.is_empty());
    assert!(r.found.iter().all(|p| p.edge_count() == 3));
    assert!(r.found.iter().any(|p| canonical_code(p).unwrap() == star));
}

#[test]
fn tiny_budget_is_reported() {
    assert!(search_tight(&style(4, ""), 2, 10).is_err());
}

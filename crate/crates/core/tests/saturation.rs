mod common;

use common::{dsl, gen, TRIANGLE};
use kplanar::families::Family;
use kplanar::saturation::verify_saturated_implies_filled;
use kplanar::{check_saturated, is_filled, is_tight, Restriction, Restrictions, SaturationError, StyleSpec};

fn tight_instances() -> Vec<(Family, u32)> {
    vec![
        (Family::Spiral, 4),
        (Family::Spiral, 6),
        (Family::OddPair, 5),
        (Family::Weave, 4),
        (Family::Weave, 5),
        (Family::Star, 4),
        (Family::Star, 5),
        (Family::Cycle, 4),
        (Family::Cycle, 5),
        (Family::Im4, 4),
        (Family::ImMatching, 5),
        (Family::SimMatching, 7),
    ]
}

#[test]
fn tight_drawings_are_saturated_at_their_k() {
    for (f, k) in tight_instances() {
        let p = gen(f, k);
        for x in f.styles() {
            let s = StyleSpec::new(k, x);
            let v = check_saturated(&p, &s).unwrap();
            assert!(v.is_saturated(), "{f} k={k} {s}: {:?}", v.status);
        }
    }
}

#[test]
fn one_more_crossing_allows_an_edge() {
    for (f, k) in tight_instances() {
        let p = gen(f, k);
        for x in f.styles() {
            let s = StyleSpec::new(k + 1, x);
            let v = check_saturated(&p, &s).unwrap();
            if f == Family::Spiral && x.contains(Restriction::I) {
                // Every new edge would have to cross the spiral edge, which
                // shares an endpoint with it unless both ends are isolated.
                assert!(v.is_saturated(), "{f} k={k} {s}: {:?}", v.status);
                continue;
            }
            let w = v.witness().unwrap_or_else(|| panic!("{f} k={k} {s}: {:?}", v.status));
            assert!(w.walk.len() <= (k + 1) as usize);
        }
    }
}

#[test]
fn saturated_implies_filled() {
    for (f, k) in tight_instances() {
        let p = gen(f, k);
        assert!(is_filled(&p).unwrap().filled);
        for x in f.styles() {
            assert!(verify_saturated_implies_filled(&p, &StyleSpec::new(k, x)).unwrap());
        }
    }
    let t = dsl(TRIANGLE);
    for k in 4..=6 {
        assert!(verify_saturated_implies_filled(&t, &StyleSpec::new(k, Restrictions::NONE)).unwrap());
    }
}

#[test]
fn triangle_is_filled_but_not_tight() {
    let t = dsl(TRIANGLE);
    assert!(is_filled(&t).unwrap().filled);
    assert!(!is_tight(&t, 4).unwrap());
    let v = check_saturated(&t, &StyleSpec::new(4, Restrictions::NONE)).unwrap();
    assert!(v.witness().is_some());
}

#[test]
fn out_of_style_input_is_rejected() {
    let p = gen(Family::Spiral, 4);
    let s = StyleSpec::new(4, "s".parse().unwrap());
    assert!(matches!(check_saturated(&p, &s), Err(SaturationError::NotInStyle { .. })));
}

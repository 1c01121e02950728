mod common;

use common::gen;
use kplanar::canon::canonical_code;
use kplanar::families::{catalog_texts, Family};
use kplanar::{counts, emit, parse, DslError, Restrictions};

#[test]
fn catalog_is_a_fixed_point() {
    for (id, text) in catalog_texts() {
        let doc = parse(text).unwrap();
        assert_eq!(doc.k, Some(id.k));
        let once = emit(&doc.drawing, doc.k, doc.restrictions);
        let again = parse(&once).unwrap();
        assert_eq!(emit(&again.drawing, again.k, again.restrictions), once, "{id}");
        assert_eq!(canonical_code(&again.drawing).unwrap(), canonical_code(&doc.drawing).unwrap());
    }
}

#[test]
fn generated_drawings_round_trip() {
    for (f, k) in [(Family::Spiral, 4), (Family::Star, 5), (Family::Cycle, 4), (Family::Weave, 6)] {
        let p = gen(f, k);
        let text = emit(&p, Some(k), Some(f.styles()[0]));
        let q = parse(&text).unwrap();
        assert_eq!(q.restrictions, Some(f.styles()[0]));
        assert_eq!(canonical_code(&q.drawing).unwrap(), canonical_code(&p).unwrap());
        assert_eq!(emit(&q.drawing, Some(k), Some(f.styles()[0])), text);
    }
}

#[test]
fn cycle_file_counts() {
    let text = emit(&gen(Family::Cycle, 4), Some(4), None);
    let c = counts(&parse(&text).unwrap().drawing, 4).unwrap();
    assert_eq!((c.m, c.n), (5, 7));
}

#[test]
fn empty_body() {
    let doc = parse("kplanar-dsl 1\n").unwrap();
    assert_eq!(doc.drawing.node_count(), 0);
    assert_eq!(emit(&doc.drawing, None, None), "kplanar-dsl 1\n");
}

#[test]
fn restrictions_line() {
    let doc = parse("kplanar-dsl 1\nk 5\nrestrict s,i\n").unwrap();
    assert_eq!(doc.restrictions, Some("s,i".parse::<Restrictions>().unwrap()));
    assert!(parse("kplanar-dsl 1\nrestrict q\n").is_err());
}

#[test]
fn dangling_dart_is_a_syntax_error() {
    let text = "kplanar-dsl 1\nreal a : x y\nreal b : z\nsegment x z e\n";
    match parse(text) {
        Err(DslError::Syntax { line, msg, .. }) => {
            assert_eq!(line, 2);
            assert!(msg.contains("`y`"), "{msg}");
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn wrong_header() {
    assert!(matches!(parse("kplanar-dsl 2\n"), Err(DslError::Syntax { line: 1, .. })));
}

#[test]
fn inconsistent_rotations_fail_validation() {
    // three darts at a node of degree two would need a fourth segment end
    let text = "kplanar-dsl 1\ncrossing x : a b\nreal u : c\nreal v : d\nsegment a c e0\nsegment b d e1\n";
    assert!(matches!(parse(text), Err(DslError::Validation(_)) | Err(DslError::Planarization(_))));
}

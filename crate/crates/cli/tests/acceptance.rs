//! Runs every acceptance criterion and prints one PASS/FAIL line each.
//!
//! Parts that cannot hold as stated are reported as FAIL with the reason,
//! and do not make the run exit with an error; everything else must pass.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use kplanar::canon::canonical_code;
use kplanar::families::{catalog, catalog_texts, generate, glue, Family, FamilyId};
use kplanar::metrics::{
    alpha, verify_angle_identity, verify_edge_count_identity, verify_euler, verify_planar_side_identity, MetricsError,
};
use kplanar::saturation::verify_saturated_implies_filled;
use kplanar::search::search_tight;
use kplanar::{
    check_saturated, check_style, check_topology, components_and_cuts, counts, emit, is_filled, is_tight, layout,
    parse, parse_drawing, CellId, EdgeId, Layout64, NodeId, Planarization, Restriction, Restrictions, StyleSpec,
};
use kplanar_cli::table::{self, Status};
use num_rational::Rational64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TRIANGLE: &str = "kplanar-dsl 1
real a : a1 a2
real b : b1 b2
real c : c1 c2
segment a2 b1 ab
segment b2 c1 bc
segment c2 a1 ca
";

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

const LENS: &str = "kplanar-dsl 1
real a : a1 a2
real b : b1 b2
isolated c
isolated d
segment a1 b2 e
segment a2 b1 f
anchor c in a1
anchor d in a2
";

/// Outcome of one criterion. `known` holds parts that cannot be met as
/// stated; they turn the line into FAIL without failing the run.
struct Outcome {
    problems: Vec<String>,
    known: Vec<String>,
    detail: String,
}

impl Outcome {
    fn new() -> Self {
        Outcome { problems: Vec::new(), known: Vec::new(), detail: String::new() }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.problems.push(what());
        }
    }
}

fn r(x: usize) -> Rational64 {
    Rational64::from_integer(x as i64)
}

struct Instances(BTreeMap<FamilyId, Planarization>);

impl Instances {
    fn get(&mut self, id: FamilyId) -> Result<Planarization, String> {
        if let Some(p) = self.0.get(&id) {
            return Ok(p.clone());
        }
        let p = generate(id).map_err(|e| e.to_string())?;
        self.0.insert(id, p.clone());
        Ok(p)
    }

    fn all(&mut self, ks: std::ops::RangeInclusive<u32>) -> Vec<(FamilyId, Planarization)> {
        let mut out = Vec::new();
        for family in Family::ALL {
            for k in ks.clone().filter(|&k| family.accepts(k)) {
                let id = FamilyId { family, k };
                if let Ok(p) = self.get(id) {
                    out.push((id, p));
                }
            }
        }
        out
    }
}

fn anchors_ok(o: &mut Outcome, rows: &[table::Row]) {
    use Restriction::*;
    let want: [(u32, &[Restriction], usize, usize); 6] = [
        (4, &[], 1, 3),
        (5, &[S], 2, 5),
        (4, &[M], 3, 5),
        (4, &[S, M], 5, 7),
        (4, &[I, M], 4, 6),
        (7, &[S, I, M], 8, 22),
    ];
    for (k, x, m, n) in want {
        let s = StyleSpec::new(k, Restrictions::new(x));
        let row = rows.iter().find(|row| row.style == s);
        o.check(row.is_some_and(|row| row.m == Some(m) && row.n == Some(n) && row.status == Status::Pass), || {
            format!("{s}: expected m={m}, n={n}, PASS")
        });
    }
}

fn criterion_1(inst: &mut Instances) -> Outcome {
    let mut o = Outcome::new();
    let rows = table::rows_with(4..=12, &mut |id| inst.get(id));
    let (mut pass, mut open) = (0, 0);
    for row in &rows {
        match &row.status {
            Status::Pass => pass += 1,
            Status::Open => {
                open += 1;
                let expected_open = row.style.restrictions.contains(Restriction::S)
                    && row.style.restrictions.contains(Restriction::I)
                    && row.style.restrictions.contains(Restriction::M)
                    && row.style.k < 7;
                o.check(expected_open, || format!("{} k={} is OPEN", row.style.restrictions, row.style.k));
            }
            Status::Fail(why) => o.problems.push(format!("{}: {why}", row.style)),
        }
    }
    anchors_ok(&mut o, &rows);
    o.detail = format!("{pass} cells with m = alpha(n-1) exactly, {open} open");
    o
}

fn identity_holds(p: &Planarization, k: u32) -> bool {
    verify_edge_count_identity(p, k).is_ok_and(|id| id.holds)
}

/// Indices of real vertices with a cell of their own.
fn private_cells(p: &Planarization) -> Vec<(NodeId, CellId)> {
    let cm = p.cells().unwrap();
    cm.cells
        .iter()
        .filter(|c| c.incident_vertices.len() == 1)
        .map(|c| (*c.incident_vertices.iter().next().unwrap(), c.id))
        .filter(|&(v, _)| p.degree(v) > 0)
        .collect()
}

fn criterion_2(inst: &mut Instances) -> Outcome {
    let mut o = Outcome::new();
    let all = inst.all(4..=12);
    for (id, p) in &all {
        o.check(identity_holds(p, id.k), || format!("{id}"));
    }
    for e in catalog().unwrap() {
        o.check(identity_holds(&e.drawing, e.family.k), || format!("catalog {}", e.family));
    }
    let tri = parse_drawing(TRIANGLE).unwrap();
    let k4 = parse_drawing(K4).unwrap();
    for k in 3..=12 {
        o.check(identity_holds(&tri, k), || format!("triangle k={k}"));
        o.check(identity_holds(&k4, k), || format!("planar K4 k={k}"));
    }
    let c = counts(&tri, 4).unwrap();
    o.check(c.epsilon == r(2) && c.m_p == 3 && c.c_3 == 2, || "triangle counts".into());

    // Random gluings of tight pieces with equal k.
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut refused = 0;
    let pieces: Vec<(u32, Vec<Planarization>)> = (4..=6)
        .map(|k| {
            let ps = all.iter().filter(|(id, _)| id.k == k && id.family != Family::Cycle || id.k == k && k == 4);
            (k, ps.map(|(_, p)| p.clone()).collect())
        })
        .collect();
    for _ in 0..1000 {
        let (k, ps) = pieces.choose(&mut rng).unwrap();
        let mut g = ps.choose(&mut rng).unwrap().clone();
        let t = rng.gen_range(1..=3);
        for _ in 0..t {
            let d2 = ps.choose(&mut rng).unwrap();
            let (v1, host) = *private_cells(&g).choose(&mut rng).unwrap();
            let (v2, _) = *private_cells(d2).choose(&mut rng).unwrap();
            g = glue(&g, v1, d2, v2, host).unwrap();
        }
        let c = counts(&g, *k).unwrap();
        // Tight pieces satisfy m = 2(n-2)/(k-2) each; each gluing shifts the
        // right-hand side by 2/(k-2).
        let rhs = Rational64::new(2, *k as i64 - 2) * (r(c.n) + r(c.c_0) - r(2) + c.epsilon);
        o.check(rhs - r(c.m) == Rational64::new(2 * t as i64, *k as i64 - 2), || "gluing offset".into());
        match verify_edge_count_identity(&g, *k) {
            Err(MetricsError::PreconditionFailed(_)) => refused += 1,
            other => o.problems.push(format!("glued drawing not refused: {other:?}")),
        }
    }
    o.known.push(format!(
        "(b) glued compositions are not essentially 2-connected; the identity is refused on {refused}/1000 and off by exactly 2t/(k-2)"
    ));
    o.detail = format!("{} generated instances, catalog, triangle and K4 for k=3..12", all.len());
    o
}

fn criterion_3(inst: &mut Instances) -> Outcome {
    let mut o = Outcome::new();
    let mut checked = 0;
    for (id, p) in inst.all(4..=12) {
        for x in id.family.styles() {
            let s = StyleSpec::new(id.k, x);
            match check_saturated(&p, &s) {
                Ok(v) => o.check(v.is_saturated(), || format!("{id} {s}: {:?}", v.status)),
                Err(e) => o.problems.push(format!("{id} {s}: {e}")),
            }
            let up = StyleSpec::new(id.k + 1, x);
            match check_saturated(&p, &up) {
                Ok(v) if v.witness().is_some() => {}
                Ok(v) if id.family == Family::Spiral && x.contains(Restriction::I) && v.is_saturated() => {
                    o.known.push(format!("{id} stays saturated at {up}"));
                }
                Ok(v) => o.problems.push(format!("{id} {up}: {:?}", v.status)),
                Err(e) => o.problems.push(format!("{id} {up}: {e}")),
            }
            o.check(verify_saturated_implies_filled(&p, &s).unwrap_or(false), || format!("{id} {s} filled"));
            checked += 1;
        }
    }
    let tri = parse_drawing(TRIANGLE).unwrap();
    for k in 4..=6 {
        let s = StyleSpec::new(k, Restrictions::NONE);
        o.check(verify_saturated_implies_filled(&tri, &s).unwrap_or(false), || format!("triangle {s}"));
    }
    o.detail = format!("{checked} (instance, style) pairs at k and k+1");
    o
}

fn criterion_4(inst: &mut Instances) -> Outcome {
    let mut o = Outcome::new();
    let seeds = [
        FamilyId { family: Family::Cycle, k: 4 },
        FamilyId { family: Family::Star, k: 5 },
        FamilyId { family: Family::Weave, k: 6 },
        FamilyId { family: Family::Im4, k: 4 },
        FamilyId { family: Family::SimMatching, k: 7 },
    ];
    for id in seeds {
        let d = inst.get(id).unwrap();
        let s = StyleSpec::new(id.k, id.family.styles()[0]);
        let a = alpha(&s).unwrap();
        let (v2, _) = private_cells(&d)[0];
        let mut g = d.clone();
        for t in 1..=50 {
            // glue the next copy at a vertex of the newest copy
            let (v1, host) = *private_cells(&g).iter().max_by_key(|(v, _)| *v).unwrap();
            g = glue(&g, v1, &d, v2, host).unwrap();
            let c = counts(&g, id.k).unwrap();
            o.check(r(c.m) == a * (r(c.n) - r(1)), || format!("{id} t={t}: m != alpha(n-1)"));
            o.check(is_tight(&g, id.k).unwrap(), || format!("{id} t={t}: not tight"));
        }
    }
    o.detail = "t = 1..50 for cycle, star, weave, im4 and sim-matching seeds".into();
    o
}

fn criterion_5() -> Outcome {
    let mut o = Outcome::new();
    let cases = [(4, "s", 1), (4, "m", 2), (4, "s,m", 4)];
    let mut times = Vec::new();
    for (k, x, m) in cases {
        let s = StyleSpec::new(k, x.parse().unwrap());
        let t = Instant::now();
        let res = search_tight(&s, m, u64::MAX);
        let el = t.elapsed();
        match res {
            Ok(rep) => {
                o.check(rep.exhaustive && rep.found.is_empty(), || format!("{s} m<={m}: found {}", rep.found.len()))
            }
            Err(e) => o.problems.push(format!("{s} m<={m}: {e}")),
        }
        o.check(el < Duration::from_secs(300), || format!("{s} m<={m} took {el:?}"));
        times.push(format!("{s} m<={m} in {:.2}s", el.as_secs_f64()));
    }
    o.detail = times.join(", ");
    o
}

fn deletion_pool(inst: &mut Instances) -> Vec<(Planarization, Vec<StyleSpec>)> {
    let sim = Restrictions::new(&[Restriction::S, Restriction::I, Restriction::M]);
    let mut pool = Vec::new();
    for (id, p) in inst.all(4..=8) {
        let styles: Vec<StyleSpec> =
            id.family.styles().into_iter().filter(|x| x.is_subset(sim)).map(|x| StyleSpec::new(id.k, x)).collect();
        let (v, host) = private_cells(&p)[0];
        let glued = glue(&p, v, &p, v, host).unwrap();
        pool.push((glued, styles.clone()));
        pool.push((p, styles));
    }
    pool
}

fn criterion_6(inst: &mut Instances) -> Outcome {
    let mut o = Outcome::new();
    let pool = deletion_pool(inst);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut deletions = 0;
    while deletions < 1000 {
        let (p, styles) = pool.choose(&mut rng).unwrap();
        let mut q = p.clone();
        for _ in 0..rng.gen_range(1..=3) {
            let vertices: Vec<NodeId> = q.vertices().collect();
            if vertices.is_empty() {
                break;
            }
            q = if rng.gen_bool(0.5) && q.edge_count() > 0 {
                let edges: Vec<EdgeId> = q.edges().collect();
                q.delete_edges(&BTreeSet::from([*edges.choose(&mut rng).unwrap()])).unwrap()
            } else {
                q.delete_vertex(*vertices.choose(&mut rng).unwrap()).unwrap()
            };
            deletions += 1;
            o.check(q.ensure_valid().is_ok(), || "deletion result invalid".into());
            for s in styles {
                o.check(check_style(&q, s).is_ok_and(|v| v.in_style), || format!("deletion left {s}"));
            }
        }
    }
    let lens = parse_drawing(LENS).unwrap();
    let h = StyleSpec::new(4, Restrictions::new(&[Restriction::H]));
    let c = lens.isolated_vertices().next().unwrap();
    let before = check_style(&lens, &h).is_ok_and(|v| v.in_style);
    let after = check_style(&lens.delete_vertex(c).unwrap(), &h).is_ok_and(|v| v.in_style);
    o.check(before && !after, || "H witness".into());
    o.detail = format!("{deletions} random deletions over {} drawings, H lost after deleting a lens vertex", pool.len());
    o
}

fn criterion_7(inst: &mut Instances) -> Outcome {
    let mut o = Outcome::new();
    let mut drawings: Vec<(String, Planarization)> =
        inst.all(4..=12).into_iter().map(|(id, p)| (id.to_string(), p)).collect();
    drawings.push(("triangle".into(), parse_drawing(TRIANGLE).unwrap()));
    drawings.push(("K4".into(), parse_drawing(K4).unwrap()));
    let mut counted = 0;
    for (name, p) in &drawings {
        o.check(verify_euler(p).unwrap_or(false), || format!("{name}: Euler"));
        let eligible = components_and_cuts(p).unwrap().essentially_2_connected && is_filled(p).unwrap().filled;
        if eligible {
            counted += 1;
            o.check(verify_angle_identity(p).unwrap_or(false), || format!("{name}: angle count"));
            o.check(verify_planar_side_identity(p).unwrap_or(false), || format!("{name}: planar sides"));
        }
    }
    o.detail = format!("{counted} filled essentially 2-connected drawings");
    o
}

fn criterion_8(inst: &mut Instances) -> Outcome {
    let mut o = Outcome::new();
    for (id, text) in catalog_texts() {
        let doc = parse(text).unwrap();
        let once = emit(&doc.drawing, doc.k, doc.restrictions);
        let again = parse(&once).unwrap();
        o.check(emit(&again.drawing, again.k, again.restrictions) == once, || format!("{id}: emit not stable"));
        o.check(canonical_code(&again.drawing).unwrap() == canonical_code(&doc.drawing).unwrap(), || {
            format!("{id}: canonical form changed")
        });
    }
    let all = inst.all(4..=9);
    for (id, p) in &all {
        match layout::<f64>(p) {
            Ok(l) => {
                let l: Layout64 = l;
                if let Err(e) = check_topology(p, &l) {
                    o.problems.push(format!("{id}: {e}"));
                }
            }
            Err(e) => o.problems.push(format!("{id}: {e}")),
        }
    }
    o.detail = format!("{} catalog files, {} layouts up to k=9", catalog_texts().count(), all.len());
    o
}

fn main() -> ExitCode {
    let mut inst = Instances(BTreeMap::new());
    let criteria: [(&str, fn(&mut Instances) -> Outcome); 8] = [
        ("table reproduction", criterion_1),
        ("edge-count identity", criterion_2),
        ("saturation", criterion_3),
        ("gluing t=1..50", criterion_4),
        ("exhaustive non-existence", |_| criterion_5()),
        ("style monotonicity", criterion_6),
        ("Euler and counting identities", criterion_7),
        ("serialization and SVG topology", criterion_8),
    ];
    let mut failed = false;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let o = f(&mut inst);
        let verdict = if o.problems.is_empty() && o.known.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {} ({name}): {verdict} [{:.1}s] {}", i + 1, t.elapsed().as_secs_f64(), o.detail);
        for k in &o.known {
            println!("    not attainable as stated: {k}");
        }
        for p in o.problems.iter().take(10) {
            println!("    problem: {p}");
        }
        failed |= !o.problems.is_empty();
    }
    if failed {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

//! Tight drawings for every resolved style, and gluing them at vertices.
//!
//! Small instances come from the edge-by-edge search in [`crate::search`];
//! larger ones are grown from a smaller instance by adding edges that cross
//! everything once. Some instances are slow to find and are stored in the
//! catalog (text files in the drawing format); extensions beyond the catalog
//! are checked before they are returned.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::dsl::{self, DslError};
use crate::planarization::{
    Anchor, CellId, DartId, EdgeId, Host, NodeId, NodeKind, Planarization, PlanarizationError,
};
use crate::saturation::is_tight;
use crate::search::{grow, grow_filled, Budget, EdgePlan, End, Flow, SearchError};
use crate::styles::{check_style, Restriction, Restrictions, StyleError, StyleSpec};

/// Step budget for one search run inside a generator.
const GEN_BUDGET: u64 = 50_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    /// One edge with k/2 selfcrossings (even k).
    Spiral,
    /// Two independent edges, each with selfcrossings (odd k).
    OddPair,
    /// Two independent edges crossing each other k times.
    Weave,
    /// k-1 edges at a common vertex, each selfcrossing once, pairwise crossing once.
    Star,
    /// A (k+1)-cycle whose edges pairwise cross once.
    Cycle,
    /// Two paths of length two for k = 4, incident edges uncrossed.
    Im4,
    /// (k-1)-matching, each edge selfcrossing once, pairwise crossing once.
    ImMatching,
    /// (k+1)-matching whose edges pairwise cross once.
    SimMatching,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Spiral,
        Family::OddPair,
        Family::Weave,
        Family::Star,
        Family::Cycle,
        Family::Im4,
        Family::ImMatching,
        Family::SimMatching,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Spiral => "spiral",
            Family::OddPair => "odd-pair",
            Family::Weave => "weave",
            Family::Star => "star",
            Family::Cycle => "cycle",
            Family::Im4 => "im4",
            Family::ImMatching => "im-matching",
            Family::SimMatching => "sim-matching",
        }
    }

    /// Whether `k` is in the range the family is defined for.
    pub fn accepts(self, k: u32) -> bool {
        match self {
            Family::Spiral => k >= 4 && k % 2 == 0,
            Family::OddPair => k >= 5 && k % 2 == 1,
            Family::Weave | Family::Star | Family::Cycle => k >= 4,
            Family::Im4 => k == 4,
            Family::ImMatching => k >= 5,
            Family::SimMatching => k >= 7,
        }
    }

    /// The restriction sets under which the family is extremal.
    pub fn styles(self) -> Vec<Restrictions> {
        use Restriction::*;
        match self {
            Family::Spiral | Family::OddPair => vec![Restrictions::NONE, Restrictions::new(&[I])],
            Family::Weave => vec![Restrictions::new(&[S]), Restrictions::new(&[S, I])],
            Family::Star => vec![Restrictions::new(&[M])],
            Family::Cycle => vec![Restrictions::new(&[S, M])],
            Family::Im4 | Family::ImMatching => vec![Restrictions::new(&[I, M])],
            Family::SimMatching => vec![Restrictions::new(&[S, I, M]), Restrictions::new(&[S, I, M, H])],
        }
    }

    /// The family providing the extremal drawing for style `s`, if resolved.
    pub fn for_style(s: &StyleSpec) -> Option<FamilyId> {
        let x = s.restrictions;
        // Families sharing a style split the range of k between them.
        let fam = Family::ALL.into_iter().find(|f| f.styles().contains(&x) && f.accepts(s.k))?;
        Some(FamilyId { family: fam, k: s.k })
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("unknown family `{0}`")]
pub struct ParseFamilyError(String);

impl FromStr for Family {
    type Err = ParseFamilyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim().to_ascii_lowercase().replace('_', "-");
        Family::ALL.into_iter().find(|f| f.name() == t).ok_or(ParseFamilyError(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FamilyId {
    pub family: Family,
    pub k: u32,
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} k={}", self.family, self.k)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum FamilyError {
    #[error("{family} needs {expected} k, got {k}")]
    BadParity { family: Family, k: u32, expected: &'static str },
    #[error("{family} is not defined for k={k}")]
    OutOfRange { family: Family, k: u32 },
    #[error("{id}: extension beyond the catalog failed verification: {reason}")]
    GeneralizationUnverified { id: FamilyId, reason: String },
    #[error("cell {cell} is not incident to {vertex} alone")]
    NotIncident { cell: CellId, vertex: NodeId },
    #[error("{0} is not a vertex")]
    NotVertex(NodeId),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("search for {id} found nothing")]
    NotFound { id: FamilyId },
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Style(#[from] StyleError),
    #[error(transparent)]
    Dsl(#[from] DslError),
    #[error(transparent)]
    Planarization(#[from] PlanarizationError),
}

/// A stored instance with its exact expected counts.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub family: FamilyId,
    /// Where the instance came from.
    pub source: &'static str,
    pub drawing: Planarization,
    /// Expected (m, n, cr).
    pub expected: (usize, usize, usize),
}

macro_rules! catalog_files {
    ($($fam:ident $k:literal $file:literal ($m:literal, $n:literal, $cr:literal);)*) => {
        const CATALOG: &[(Family, u32, &str, (usize, usize, usize))] = &[
            $((Family::$fam, $k, include_str!(concat!("../catalog/", $file)), ($m, $n, $cr)),)*
        ];
    };
}

catalog_files! {
    OddPair 5 "odd-pair-k5.kpd" (2, 5, 5);
    OddPair 7 "odd-pair-k7.kpd" (2, 7, 7);
    OddPair 9 "odd-pair-k9.kpd" (2, 9, 9);
    OddPair 11 "odd-pair-k11.kpd" (2, 11, 11);
    Im4 4 "im4-k4.kpd" (4, 6, 8);
    ImMatching 5 "im-matching-k5.kpd" (4, 8, 10);
    ImMatching 6 "im-matching-k6.kpd" (5, 12, 15);
    SimMatching 7 "sim-matching-k7.kpd" (8, 22, 28);
    SimMatching 8 "sim-matching-k8.kpd" (9, 29, 36);
    SimMatching 9 "sim-matching-k9.kpd" (10, 37, 45);
    SimMatching 10 "sim-matching-k10.kpd" (11, 46, 55);
    SimMatching 11 "sim-matching-k11.kpd" (12, 56, 66);
}

/// All catalog entries, parsed.
pub fn catalog() -> Result<Vec<CatalogEntry>, FamilyError> {
    CATALOG
        .iter()
        .map(|&(family, k, text, expected)| {
            Ok(CatalogEntry {
                family: FamilyId { family, k },
                source: "stored search result",
                drawing: dsl::parse_drawing(text)?,
                expected,
            })
        })
        .collect()
}

/// The raw text of every catalog entry.
pub fn catalog_texts() -> impl Iterator<Item = (FamilyId, &'static str)> {
    CATALOG.iter().map(|&(family, k, text, _)| (FamilyId { family, k }, text))
}

fn catalog_entry(family: Family, k: u32) -> Result<Option<Planarization>, FamilyError> {
    match CATALOG.iter().find(|e| e.0 == family && e.1 == k) {
        Some(&(_, _, text, _)) => Ok(Some(dsl::parse_drawing(text)?)),
        None => Ok(None),
    }
}

fn largest_catalog_k(family: Family) -> Option<u32> {
    CATALOG.iter().filter(|e| e.0 == family).map(|e| e.1).max()
}

fn new(label: &str) -> End {
    End::New(label.to_string())
}

fn at(label: &str) -> End {
    End::At(label.to_string())
}

fn tight_in_style(p: &Planarization, id: FamilyId) -> Result<Result<(), String>, FamilyError> {
    if !is_tight(p, id.k)? {
        return Ok(Err("not tight".into()));
    }
    for x in id.family.styles() {
        let s = StyleSpec::new(id.k, x);
        let v = check_style(p, &s)?;
        if !v.in_style {
            let msg = v.violations.first().map(|v| v.message.clone()).unwrap_or_default();
            return Ok(Err(format!("not in style {x}: {msg}")));
        }
    }
    Ok(Ok(()))
}

/// Grows `base` by `plans` and returns the first completion that is tight
/// and in the family's styles once isolated vertices fill the empty cells.
fn first_tight(base: &Planarization, plans: &[EdgePlan], id: FamilyId) -> Result<Planarization, FamilyError> {
    let budget = Budget::new(GEN_BUDGET);
    let mut found = None;
    let mut check = |q: &Planarization| -> Result<Flow, SearchError> {
        let f = q.add_isolated_in_empty_cells()?;
        match tight_in_style(&f, id) {
            Ok(Ok(())) => {
                found = Some(f);
                Ok(Flow::Stop)
            }
            Ok(Err(_)) => Ok(Flow::Continue),
            Err(FamilyError::Planarization(e)) => Err(SearchError::Planarization(e)),
            Err(FamilyError::Style(e)) => Err(SearchError::Style(e)),
            Err(e) => Err(SearchError::Planarization(PlanarizationError::Invalid(e.to_string()))),
        }
    };
    grow_filled(base, plans, &budget, &mut check)?;
    found.ok_or(FamilyError::NotFound { id })
}

/// Plans for drawing a family instance from scratch.
pub fn seed_plans(id: FamilyId) -> Vec<EdgePlan> {
    let k = id.k;
    match id.family {
        Family::Spiral => {
            let s = (k / 2) as u8;
            vec![EdgePlan::new(new("a"), new("b"), k).selfcrossings(s, s)]
        }
        Family::OddPair => {
            let s = ((k - 1) / 2) as u8;
            vec![
                EdgePlan::new(new("a"), new("b"), k).selfcrossings(s, s),
                EdgePlan::new(new("c"), new("d"), k).selfcrossings(s, s).each_existing(1, 1),
            ]
        }
        Family::Weave => vec![
            EdgePlan::new(new("a"), new("b"), k),
            EdgePlan::new(new("c"), new("d"), k).each_existing(k as u8, k as u8),
        ],
        Family::Star => {
            let mut plans = vec![EdgePlan::new(new("c"), new("x0"), k).selfcrossings(1, 1)];
            for i in 1..k - 1 {
                plans.push(EdgePlan::new(at("c"), new(&format!("x{i}")), k).selfcrossings(1, 1).each_existing(1, 1));
            }
            plans
        }
        Family::Cycle => {
            let mut plans = vec![EdgePlan::new(new("v0"), new("v1"), k)];
            for i in 1..k {
                plans.push(EdgePlan::new(at(&format!("v{i}")), new(&format!("v{}", i + 1)), k).each_existing(1, 1));
            }
            plans.push(EdgePlan::new(at(&format!("v{k}")), at("v0"), k).each_existing(1, 1));
            plans
        }
        Family::Im4 => {
            let mut last = EdgePlan::new(at("b2"), new("b3"), k).selfcrossings(1, 1);
            last.with = vec![(1, 1), (1, 1), (0, 0)];
            vec![
                EdgePlan::new(new("a1"), new("a2"), k).selfcrossings(1, 1),
                EdgePlan::new(at("a2"), new("a3"), k).selfcrossings(1, 1),
                EdgePlan::new(new("b1"), new("b2"), k).selfcrossings(1, 1).each_existing(1, 1),
                last,
            ]
        }
        Family::ImMatching => (0..k - 1)
            .map(|i| {
                EdgePlan::new(new(&format!("a{i}")), new(&format!("b{i}")), k).selfcrossings(1, 1).each_existing(1, 1)
            })
            .collect(),
        Family::SimMatching => (0..k + 1)
            .map(|i| EdgePlan::new(new(&format!("a{i}")), new(&format!("b{i}")), k).each_existing(1, 1))
            .collect(),
    }
}

fn check_k(id: FamilyId) -> Result<(), FamilyError> {
    let (family, k) = (id.family, id.k);
    if family.accepts(k) {
        return Ok(());
    }
    match family {
        Family::Spiral if k >= 4 => Err(FamilyError::BadParity { family, k, expected: "even" }),
        Family::OddPair if k >= 5 => Err(FamilyError::BadParity { family, k, expected: "odd" }),
        _ => Err(FamilyError::OutOfRange { family, k }),
    }
}

/// Searches for a family instance from scratch.
pub fn seed_search(id: FamilyId) -> Result<Planarization, FamilyError> {
    check_k(id)?;
    first_tight(&Planarization::new(), &seed_plans(id), id)
}

/// Adds one edge that crosses every existing edge once (and itself
/// `selfx` times), starting at `start` and ending at a new vertex.
fn extend_by_one(
    p: &Planarization,
    start: End,
    label: &str,
    selfx: u8,
    id: FamilyId,
) -> Result<Planarization, FamilyError> {
    let base = p.without_isolated();
    let plan = EdgePlan::new(start, new(label), id.k).selfcrossings(selfx, selfx).each_existing(1, 1);
    first_tight(&base, &[plan], id)
}

fn fresh_label(p: &Planarization, stem: &str) -> String {
    let used: BTreeSet<&str> = p.nodes().filter_map(|n| p.node(n).label.as_deref()).collect();
    (0..).map(|i| format!("{stem}{i}")).find(|l| !used.contains(l.as_str())).expect("unbounded")
}

/// One step from a k-instance to a (k+1)-instance for the families that
/// grow by a single edge crossing everything once.
pub fn step_up(p: &Planarization, from: FamilyId) -> Result<Planarization, FamilyError> {
    let to = FamilyId { family: from.family, k: from.k + 1 };
    match from.family {
        Family::Star => {
            let label = fresh_label(p, "x");
            extend_by_one(p, at("c"), &label, 1, to)
        }
        Family::ImMatching => {
            let a = fresh_label(p, "a");
            let b = fresh_label(p, "b");
            let q = p.without_isolated();
            let plan = EdgePlan::new(new(&a), new(&b), to.k).selfcrossings(1, 1).each_existing(1, 1);
            first_tight(&q, &[plan], to)
        }
        Family::SimMatching => {
            let a = fresh_label(p, "a");
            let b = fresh_label(p, "b");
            let q = p.without_isolated();
            let plan = EdgePlan::new(new(&a), new(&b), to.k).each_existing(1, 1);
            first_tight(&q, &[plan], to)
        }
        Family::Cycle => {
            // Cut one cycle edge loose from one of its ends at a new vertex
            // and close the cycle again with one edge that crosses
            // everything, the cut edge included, once. Cut positions are
            // tried in edge order until one works.
            let base = p.without_isolated();
            let traces = base.trace_edges()?;
            let cut = "cut".to_string();
            for t in &traces {
                for end in [0, 1] {
                    let (dart, other) = if end == 0 {
                        (t.segments[0], t.endpoints.0)
                    } else {
                        (base.twin(*t.segments.last().expect("edge has segments")), t.endpoints.1)
                    };
                    let mut q = base.clone();
                    let other_label = q.node(other).label.clone();
                    q.set_label(other, Some("end".into()));
                    let z = q.split_endpoint(dart, Some(cut.clone()));
                    let plan = EdgePlan::new(at(&cut), at("end"), to.k).each_existing(1, 1);
                    match first_tight(&q, &[plan], to) {
                        Ok(mut r) => {
                            r.set_label(other, other_label);
                            label_cycle(&mut r, z)?;
                            return Ok(r);
                        }
                        Err(FamilyError::NotFound { .. }) => continue,
                        Err(e) => return Err(e),
                    }
                }
            }
            Err(FamilyError::NotFound { id: to })
        }
        _ => Err(FamilyError::Unsupported(format!("{} does not grow edge by edge", from.family))),
    }
}

/// Names the vertices of a cycle `v0, v1, ...` starting at `start`.
fn label_cycle(p: &mut Planarization, start: NodeId) -> Result<(), FamilyError> {
    let traces = p.trace_edges()?;
    let mut order = vec![start];
    let mut used = vec![false; traces.len()];
    loop {
        let cur = *order.last().expect("nonempty");
        let Some(t) = traces.iter().find(|t| !used[t.edge.index()] && (t.endpoints.0 == cur || t.endpoints.1 == cur)) else {
            break;
        };
        used[t.edge.index()] = true;
        let nxt = if t.endpoints.0 == cur { t.endpoints.1 } else { t.endpoints.0 };
        if nxt == start {
            break;
        }
        order.push(nxt);
    }
    for (i, v) in order.into_iter().enumerate() {
        p.set_label(v, Some(format!("v{i}")));
    }
    Ok(())
}

/// Builds the tight drawing of family `id`, with isolated vertices in all
/// otherwise empty cells.
pub fn generate(id: FamilyId) -> Result<Planarization, FamilyError> {
    check_k(id)?;
    let fam = id.family;
    if let Some(p) = catalog_entry(fam, id.k)? {
        return Ok(p);
    }
    match fam {
        Family::Spiral | Family::Weave => seed_search(id),
        Family::Star | Family::Cycle => {
            let mut cur = seed_search(FamilyId { family: fam, k: 4 })?;
            for k in 4..id.k {
                cur = step_up(&cur, FamilyId { family: fam, k })?;
            }
            Ok(cur)
        }
        Family::OddPair | Family::ImMatching | Family::SimMatching => {
            // Beyond the catalog: direct search for the pair, edge-by-edge
            // growth for the matchings; both verified before returning.
            let from = largest_catalog_k(fam).unwrap_or(id.k);
            let result = if fam == Family::OddPair {
                seed_search(id)
            } else {
                let mut cur = catalog_entry(fam, from)?.expect("catalog covers the family");
                let mut res = Ok(());
                for k in from..id.k {
                    match step_up(&cur, FamilyId { family: fam, k }) {
                        Ok(q) => cur = q,
                        Err(e) => {
                            res = Err(e);
                            break;
                        }
                    }
                }
                res.map(|_| cur)
            };
            let p = result.map_err(|e| FamilyError::GeneralizationUnverified { id, reason: e.to_string() })?;
            match tight_in_style(&p, id)? {
                Ok(()) => Ok(p),
                Err(reason) => Err(FamilyError::GeneralizationUnverified { id, reason }),
            }
        }
        Family::Im4 => Err(FamilyError::OutOfRange { family: fam, k: id.k }),
    }
}

/// Identifies `v2` of `d2` with `v1` of `d1`, placing all of `d2` inside
/// `host`, a cell of `d1` whose only incident vertex is `v1`.
///
/// On the `d2` side the glued region is the first cell at `v2` whose only
/// vertex is `v2` (or any cell at `v2` if there is none). The component of
/// `v2` becomes part of the component of `v1`.
pub fn glue(
    d1: &Planarization,
    v1: NodeId,
    d2: &Planarization,
    v2: NodeId,
    host: CellId,
) -> Result<Planarization, FamilyError> {
    for (p, v) in [(d1, v1), (d2, v2)] {
        if v.index() >= p.node_count() || !p.kind(v).is_vertex() {
            return Err(FamilyError::NotVertex(v));
        }
    }
    let cm1 = d1.cells()?;
    let cell = cm1.cells.get(host.index()).ok_or(FamilyError::NotIncident { cell: host, vertex: v1 })?;
    if cell.incident_vertices.iter().copied().collect::<Vec<_>>() != vec![v1] {
        return Err(FamilyError::NotIncident { cell: host, vertex: v1 });
    }
    let c1: Option<DartId> = d1.darts_at(v1).find(|&d| cm1.left(d) == host);
    let mut d2 = d2.clone();
    d2.reroot(v2)?;
    let cm2 = d2.cells()?;
    let c2: Option<DartId> = {
        let at_v2: Vec<DartId> = d2.darts_at(v2).collect();
        at_v2
            .iter()
            .copied()
            .find(|&d| cm2.cells[cm2.left(d).index()].incident_vertices.len() == 1)
            .or(at_v2.first().copied())
    };

    let mut out = d1.clone();
    let node_off = d1.node_count() as u32;
    let dart_off = d1.dart_count() as u32;
    let edge_off = d1.edge_count() as u32;
    let map_node = |n: NodeId| -> NodeId {
        if n == v2 {
            v1
        } else if n.0 < v2.0 {
            NodeId(node_off + n.0)
        } else {
            NodeId(node_off + n.0 - 1)
        }
    };
    let map_dart = |d: DartId| DartId(dart_off + d.0);
    for n in d2.nodes() {
        if n != v2 {
            out.add_node(d2.kind(n), d2.node(n).label.clone());
        }
    }
    for _ in 0..d2.edge_count() {
        out.new_edge();
    }
    for d in d2.darts() {
        let dd = out.push_dart(map_node(d2.dart(d).node), EdgeId(edge_off + d2.edge_of(d).0));
        debug_assert_eq!(dd, map_dart(d));
    }
    for d in d2.darts() {
        out.set_twin(map_dart(d), map_dart(d2.twin(d)));
    }
    for n in d2.nodes() {
        if n == v2 {
            continue;
        }
        let rot: Vec<DartId> = d2.darts_at(n).map(map_dart).collect();
        out.set_rotation(map_node(n), &rot);
    }
    // Splice the rotation at v2 into the host corner at v1.
    if let Some(c2) = c2 {
        let mut seq: Vec<DartId> = Vec::new();
        let mut d = d2.next(c2);
        loop {
            seq.push(map_dart(d));
            if d == c2 {
                break;
            }
            d = d2.next(d);
        }
        let mut rot: Vec<DartId> = Vec::new();
        match c1 {
            Some(c1) => {
                let mut d = d1.next(c1);
                loop {
                    rot.push(d);
                    if d == c1 {
                        break;
                    }
                    d = d1.next(d);
                }
                rot.extend(seq);
            }
            None => rot = seq,
        }
        out.set_rotation(v1, &rot);
        if out.kind(v1) == NodeKind::IsolatedVertex {
            out.set_kind(v1, NodeKind::RealVertex);
        }
    }
    // Anchors of d2's other components keep their faces; those hosted by
    // the outer face of a dartless v2 move into the host cell.
    let glued_face = c2.map(map_dart);
    for (&key, a) in d2.anchors() {
        let host = match a.host {
            Host::Face(h) => Host::Face(map_dart(h)),
            Host::Outer => match (c1, glued_face) {
                (Some(c1), _) => Host::Face(c1),
                (None, Some(g)) => Host::Face(g),
                (None, None) => {
                    return Err(FamilyError::Unsupported("gluing two dartless vertices with nested components".into()))
                }
            },
        };
        out.set_anchor(map_node(key), Anchor { inner: a.inner.map(map_dart), host });
    }
    if let (None, Some(g)) = (c1, glued_face) {
        // v1 had no darts: its own anchor now needs a dart, and when it was
        // the root, whatever sat in its outer face moves to the glued face.
        match d1.anchors().get(&v1) {
            Some(a) => out.set_anchor(v1, Anchor { inner: Some(g), host: a.host }),
            None => {
                for (&key, a) in d1.anchors() {
                    if a.host == Host::Outer {
                        out.set_anchor(key, Anchor { inner: a.inner, host: Host::Face(g) });
                    }
                }
            }
        }
    }
    out.normalize_anchors();
    out.ensure_valid()?;
    Ok(out)
}

/// Finds a cell of `p` whose only incident vertex is `v`.
pub fn private_cell(p: &Planarization, v: NodeId) -> Result<Option<CellId>, PlanarizationError> {
    let cm = p.cells()?;
    Ok(cm.cells.iter().find(|c| c.incident_vertices.len() == 1 && c.incident_vertices.contains(&v)).map(|c| c.id))
}

/// Glues `t` copies of `d` in a chain: each copy is attached at a vertex of
/// the previous one through a cell that vertex has to itself.
pub fn glue_chain(d: &Planarization, t: usize) -> Result<Planarization, FamilyError> {
    let (v2, _) = pick_fresh(d, None)?;
    let mut out = d.clone();
    let mut newest: Option<NodeId> = None;
    for _ in 1..t {
        let (v1, host) = pick_fresh(&out, newest)?;
        let before = out.node_count();
        out = glue(&out, v1, d, v2, host)?;
        newest = Some(NodeId(before as u32));
    }
    Ok(out)
}

fn pick_fresh(p: &Planarization, newest: Option<NodeId>) -> Result<(NodeId, CellId), FamilyError> {
    // Prefer vertices of the most recent copy so the chain stays a path.
    let mut order: Vec<NodeId> = p.vertices().filter(|&v| p.kind(v) == NodeKind::RealVertex).collect();
    if let Some(n) = newest {
        order.sort_by_key(|&v| (v < n, v));
    }
    for v in order {
        if let Some(c) = private_cell(p, v)? {
            return Ok((v, c));
        }
    }
    Err(FamilyError::Unsupported("no vertex with a private cell".into()))
}

/// Grows `base` by `plans` without the filling restriction, returning every
/// completion. Used to build small witnesses in tests and the command line.
pub fn grow_all(base: &Planarization, plans: &[EdgePlan], budget: u64) -> Result<Vec<Planarization>, FamilyError> {
    let b = Budget::new(budget);
    let mut out = Vec::new();
    grow(base, plans, &b, &mut |q: &Planarization| {
        out.push(q.clone());
        Ok(Flow::Continue)
    })?;
    Ok(out)
}

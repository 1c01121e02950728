//! Drawing styles: k-planarity combined with any subset of the restrictions
//! S (selfcrossing-free), I (locally starlike), M (single-crossing) and
//! H (homotopy-free).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::planarization::{CellMap, EdgeId, EdgeTrace, NodeId, Planarization, PlanarizationError, UnionFind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Restriction {
    S,
    I,
    M,
    H,
}

impl Restriction {
    pub const ALL: [Restriction; 4] = [Restriction::S, Restriction::I, Restriction::M, Restriction::H];

    fn bit(self) -> u8 {
        1 << (self as u8)
    }
}

impl fmt::Display for Restriction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = match self {
            Restriction::S => "S",
            Restriction::I => "I",
            Restriction::M => "M",
            Restriction::H => "H",
        };
        f.write_str(c)
    }
}

/// A subset of {S, I, M, H}.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Restrictions(u8);

impl Restrictions {
    pub const NONE: Restrictions = Restrictions(0);

    pub fn new(items: &[Restriction]) -> Self {
        Restrictions(items.iter().fold(0, |acc, r| acc | r.bit()))
    }

    pub fn contains(self, r: Restriction) -> bool {
        self.0 & r.bit() != 0
    }

    pub fn with(self, r: Restriction) -> Self {
        Restrictions(self.0 | r.bit())
    }

    pub fn without(self, r: Restriction) -> Self {
        Restrictions(self.0 & !r.bit())
    }

    pub fn is_subset(self, other: Restrictions) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Restriction> {
        Restriction::ALL.into_iter().filter(move |r| self.contains(*r))
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// All 16 subsets, ordered by bit pattern.
    pub fn all_subsets() -> impl Iterator<Item = Restrictions> {
        (0u8..16).map(Restrictions)
    }
}

impl fmt::Display for Restrictions {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.iter().map(|r| r.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

impl Serialize for Restrictions {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("unknown restriction `{0}` (expected a comma separated subset of s,i,m,h)")]
pub struct ParseRestrictionsError(pub String);

impl FromStr for Restrictions {
    type Err = ParseRestrictionsError;

    /// Parses `"s,i,m"`, `"{S,M}"`, `""` or `"none"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let trimmed = s.trim().trim_start_matches('{').trim_end_matches('}');
        let mut out = Restrictions::NONE;
        if trimmed.is_empty() || trimmed.eq_ignore_ascii_case("none") {
            return Ok(out);
        }
        for part in trimmed.split(',') {
            let r = match part.trim().to_ascii_lowercase().as_str() {
                "s" => Restriction::S,
                "i" => Restriction::I,
                "m" => Restriction::M,
                "h" => Restriction::H,
                other => return Err(ParseRestrictionsError(other.to_string())),
            };
            out = out.with(r);
        }
        Ok(out)
    }
}

/// The drawing style given by a crossing budget and a set of restrictions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct StyleSpec {
    pub k: u32,
    pub restrictions: Restrictions,
}

impl StyleSpec {
    pub fn new(k: u32, restrictions: Restrictions) -> Self {
        StyleSpec { k, restrictions }
    }

    pub fn has(&self, r: Restriction) -> bool {
        self.restrictions.contains(r)
    }
}

impl fmt::Display for StyleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "k={} X={}", self.k, self.restrictions)
    }
}

/// Which rule a violation breaks.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum Rule {
    KPlanar,
    Restriction(Restriction),
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rule::KPlanar => f.write_str("k-planar"),
            Rule::Restriction(r) => write!(f, "{r}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StyleViolation {
    pub restriction: Rule,
    pub edges: Vec<EdgeId>,
    pub nodes: Vec<NodeId>,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StyleVerdict {
    pub in_style: bool,
    pub violations: Vec<StyleViolation>,
}

impl StyleVerdict {
    fn from_violations(violations: Vec<StyleViolation>) -> Self {
        StyleVerdict { in_style: violations.is_empty(), violations }
    }

    fn merge(mut self, other: StyleVerdict) -> Self {
        self.violations.extend(other.violations);
        self.in_style = self.violations.is_empty();
        self
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum StyleError {
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Planarization(#[from] PlanarizationError),
}

pub fn check_k_planar(p: &Planarization, k: u32) -> Result<StyleVerdict, StyleError> {
    let traces = p.trace_edges()?;
    Ok(k_planar_from(&traces, k))
}

fn k_planar_from(traces: &[EdgeTrace], k: u32) -> StyleVerdict {
    let v = traces
        .iter()
        .filter(|t| t.crossing_count > k as usize)
        .map(|t| StyleViolation {
            restriction: Rule::KPlanar,
            edges: vec![t.edge],
            nodes: vec![],
            message: format!("{} is crossed {} > {k} times", t.edge, t.crossing_count),
        })
        .collect();
    StyleVerdict::from_violations(v)
}

/// Edges passing through each crossing node (one or two distinct edges).
fn crossing_edges(traces: &[EdgeTrace]) -> BTreeMap<NodeId, Vec<EdgeId>> {
    let mut at: BTreeMap<NodeId, Vec<EdgeId>> = BTreeMap::new();
    for t in traces {
        for &x in &t.crossings {
            at.entry(x).or_default().push(t.edge);
        }
    }
    at
}

pub fn check_single_crossing(p: &Planarization) -> Result<StyleVerdict, StyleError> {
    let traces = p.trace_edges()?;
    Ok(single_crossing_from(&traces))
}

fn single_crossing_from(traces: &[EdgeTrace]) -> StyleVerdict {
    let mut v = Vec::new();
    for t in traces {
        let selfx = t.selfcrossings();
        if selfx.len() > 1 {
            v.push(StyleViolation {
                restriction: Rule::Restriction(Restriction::M),
                edges: vec![t.edge],
                nodes: selfx.into_iter().collect(),
                message: format!("{} crosses itself more than once", t.edge),
            });
        }
    }
    let mut pairs: BTreeMap<(EdgeId, EdgeId), Vec<NodeId>> = BTreeMap::new();
    for (x, es) in crossing_edges(traces) {
        if es[0] != es[1] {
            let key = (es[0].min(es[1]), es[0].max(es[1]));
            pairs.entry(key).or_default().push(x);
        }
    }
    for ((a, b), xs) in pairs {
        if xs.len() > 1 {
            v.push(StyleViolation {
                restriction: Rule::Restriction(Restriction::M),
                edges: vec![a, b],
                nodes: xs,
                message: format!("{a} and {b} cross more than once"),
            });
        }
    }
    StyleVerdict::from_violations(v)
}

pub fn check_locally_starlike(p: &Planarization) -> Result<StyleVerdict, StyleError> {
    let traces = p.trace_edges()?;
    Ok(locally_starlike_from(&traces))
}

fn locally_starlike_from(traces: &[EdgeTrace]) -> StyleVerdict {
    let ends: BTreeMap<EdgeId, [NodeId; 2]> =
        traces.iter().map(|t| (t.edge, [t.endpoints.0, t.endpoints.1])).collect();
    let mut v = Vec::new();
    for (x, es) in crossing_edges(traces) {
        let (a, b) = (es[0], es[1]);
        if a == b {
            continue;
        }
        let shared: Vec<NodeId> = ends[&a].iter().copied().filter(|n| ends[&b].contains(n)).collect();
        if !shared.is_empty() {
            v.push(StyleViolation {
                restriction: Rule::Restriction(Restriction::I),
                edges: vec![a.min(b), a.max(b)],
                nodes: vec![x],
                message: format!("incident edges {a} and {b} cross at {x}"),
            });
        }
    }
    StyleVerdict::from_violations(v)
}

pub fn check_selfcrossing_free(p: &Planarization) -> Result<StyleVerdict, StyleError> {
    let traces = p.trace_edges()?;
    Ok(selfcrossing_free_from(&traces))
}

fn selfcrossing_free_from(traces: &[EdgeTrace]) -> StyleVerdict {
    let v = traces
        .iter()
        .filter_map(|t| {
            let selfx = t.selfcrossings();
            (!selfx.is_empty()).then(|| StyleViolation {
                restriction: Rule::Restriction(Restriction::S),
                edges: vec![t.edge],
                nodes: selfx.into_iter().collect(),
                message: format!("{} crosses itself", t.edge),
            })
        })
        .collect();
    StyleVerdict::from_violations(v)
}

/// Homotopy test for parallel edges. Only defined when no edge crosses
/// itself and no incident edges cross, so that two parallel edges always
/// form a simple closed curve.
pub fn check_homotopy_free(p: &Planarization) -> Result<StyleVerdict, StyleError> {
    let traces = p.trace_edges()?;
    if !selfcrossing_free_from(&traces).in_style || !locally_starlike_from(&traces).in_style {
        return Err(StyleError::Unsupported(
            "homotopy test needs a selfcrossing-free, locally starlike drawing".into(),
        ));
    }
    let cm = p.cells()?;
    Ok(homotopy_free_from(p, &traces, &cm))
}

fn homotopy_free_from(p: &Planarization, traces: &[EdgeTrace], cm: &CellMap) -> StyleVerdict {
    let mut by_ends: BTreeMap<(NodeId, NodeId), Vec<&EdgeTrace>> = BTreeMap::new();
    for t in traces {
        let (a, b) = t.endpoints;
        by_ends.entry((a.min(b), a.max(b))).or_default().push(t);
    }
    let mut v = Vec::new();
    for ((a, b), group) in by_ends {
        for i in 0..group.len() {
            for j in i + 1..group.len() {
                let (e, f) = (group[i].edge, group[j].edge);
                let sides = sides_of_closed_curve(p, cm, &[e, f]);
                let empty = sides.iter().any(|cells| {
                    cells.iter().all(|c| cm.cells[*c].incident_vertices.iter().all(|&n| n == a || n == b))
                });
                if empty {
                    v.push(StyleViolation {
                        restriction: Rule::Restriction(Restriction::H),
                        edges: vec![e, f],
                        nodes: vec![a, b],
                        message: format!("parallel edges {e} and {f} bound a region without other vertices"),
                    });
                }
            }
        }
    }
    StyleVerdict::from_violations(v)
}

/// Groups cells into the regions separated by the segments of `edges`.
pub(crate) fn sides_of_closed_curve(p: &Planarization, cm: &CellMap, edges: &[EdgeId]) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(cm.cells.len());
    for d in p.darts() {
        if !edges.contains(&p.edge_of(d)) {
            uf.union(cm.left(d).index(), cm.left(p.twin(d)).index());
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for c in 0..cm.cells.len() {
        groups.entry(uf.find(c)).or_default().push(c);
    }
    groups.into_values().collect()
}

/// k-planarity together with every restriction in `s`.
pub fn check_style(p: &Planarization, s: &StyleSpec) -> Result<StyleVerdict, StyleError> {
    let traces = p.trace_edges()?;
    let mut verdict = k_planar_from(&traces, s.k);
    if s.has(Restriction::S) {
        verdict = verdict.merge(selfcrossing_free_from(&traces));
    }
    if s.has(Restriction::I) {
        verdict = verdict.merge(locally_starlike_from(&traces));
    }
    if s.has(Restriction::M) {
        verdict = verdict.merge(single_crossing_from(&traces));
    }
    if s.has(Restriction::H) {
        if !selfcrossing_free_from(&traces).in_style || !locally_starlike_from(&traces).in_style {
            return Err(StyleError::Unsupported(
                "homotopy test needs a selfcrossing-free, locally starlike drawing".into(),
            ));
        }
        let cm = p.cells()?;
        verdict = verdict.merge(homotopy_free_from(p, &traces, &cm));
    }
    Ok(verdict)
}

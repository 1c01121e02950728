//! Filled, tight and saturated drawings.
//!
//! Saturation is decided by searching dual walks: a new edge from `u` to `v`
//! with at most `k` crossings induces a walk through the cells that crosses
//! one planarization segment per step. If no walk respects the budgets of
//! the style, no edge can be added. A walk that does exist is turned into a
//! concrete drawing with the pen and checked against the full style.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::planarization::{
    CellId, CellMap, Corner, DartId, EdgeId, Host, NodeId, Planarization, PlanarizationError,
};
use crate::styles::{check_style, Restriction, StyleError, StyleSpec, StyleVerdict};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FilledViolation {
    pub cell: CellId,
    pub u: NodeId,
    pub v: NodeId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FilledReport {
    pub filled: bool,
    pub violations: Vec<FilledViolation>,
}

pub fn is_filled(p: &Planarization) -> Result<FilledReport, PlanarizationError> {
    let traces = p.trace_edges()?;
    let cm = p.cells()?;
    let mut joined: BTreeSet<(CellId, NodeId, NodeId)> = BTreeSet::new();
    for t in traces.iter().filter(|t| t.crossing_count == 0) {
        let (a, b) = (t.endpoints.0.min(t.endpoints.1), t.endpoints.0.max(t.endpoints.1));
        let d = t.segments[0];
        joined.insert((cm.left(d), a, b));
        joined.insert((cm.left(p.twin(d)), a, b));
    }
    let mut violations = Vec::new();
    for cell in &cm.cells {
        let vs: Vec<NodeId> = cell.incident_vertices.iter().copied().collect();
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                if !joined.contains(&(cell.id, vs[i], vs[j])) {
                    violations.push(FilledViolation { cell: cell.id, u: vs[i], v: vs[j] });
                }
            }
        }
    }
    Ok(FilledReport { filled: violations.is_empty(), violations })
}

/// Every edge crossed exactly `k` times, every cell with exactly one
/// incident vertex, and at least one edge.
pub fn is_tight(p: &Planarization, k: u32) -> Result<bool, PlanarizationError> {
    let traces = p.trace_edges()?;
    if traces.is_empty() || traces.iter().any(|t| t.crossing_count != k as usize) {
        return Ok(false);
    }
    let cm = p.cells()?;
    Ok(cm.cells.iter().all(|c| c.incident_vertices.len() == 1))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RealizationStatus {
    Simple,
    NotCheckedSimple,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct WalkStep {
    /// Crossed segment, entered from its left side.
    pub dart: DartId,
    pub edge: EdgeId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InsertionWitness {
    pub endpoints: (NodeId, NodeId),
    pub walk: Vec<WalkStep>,
    pub start_cell: CellId,
    pub end_cell: CellId,
    pub needs_simple_realization: bool,
    pub realization_status: RealizationStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum SaturationStatus {
    #[serde(rename = "SATURATED")]
    Saturated,
    #[serde(rename = "INSERTABLE")]
    Insertable(InsertionWitness),
    #[serde(rename = "UNKNOWN")]
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SaturationVerdict {
    pub status: SaturationStatus,
    pub notes: Vec<String>,
}

impl SaturationVerdict {
    pub fn is_saturated(&self) -> bool {
        matches!(self.status, SaturationStatus::Saturated)
    }

    pub fn witness(&self) -> Option<&InsertionWitness> {
        match &self.status {
            SaturationStatus::Insertable(w) => Some(w),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum SaturationError {
    #[error("drawing is not in style {spec}: {} violation(s)", verdict.violations.len())]
    NotInStyle { spec: StyleSpec, verdict: StyleVerdict },
    #[error(transparent)]
    Style(#[from] StyleError),
    #[error(transparent)]
    Planarization(#[from] PlanarizationError),
}

/// Shared data for all insertion queries on one drawing.
struct Oracle<'a> {
    p: &'a Planarization,
    s: StyleSpec,
    cm: CellMap,
    /// Remaining crossing budget of every existing edge.
    budget: Vec<usize>,
    ends: Vec<(NodeId, NodeId)>,
    /// Crossable darts per cell that lead into a different cell.
    exits: Vec<Vec<DartId>>,
}

impl<'a> Oracle<'a> {
    fn new(p: &'a Planarization, s: StyleSpec) -> Result<Self, PlanarizationError> {
        let traces = p.trace_edges()?;
        let cm = p.cells()?;
        let budget = traces.iter().map(|t| (s.k as usize).saturating_sub(t.crossing_count)).collect();
        let ends = traces.iter().map(|t| t.endpoints).collect();
        let mut exits = vec![Vec::new(); cm.cells.len()];
        for d in p.darts() {
            let (a, b) = (cm.left(d), cm.left(p.twin(d)));
            if a != b {
                exits[a.index()].push(d);
            }
        }
        Ok(Oracle { p, s, cm, budget, ends, exits })
    }

    fn edge_allowed(&self, e: EdgeId, used: u8, u: NodeId, v: NodeId) -> bool {
        let next = used as usize + 1;
        if next > self.budget[e.index()] {
            return false;
        }
        if self.s.has(Restriction::M) && next > 1 {
            return false;
        }
        if self.s.has(Restriction::I) {
            let (a, b) = self.ends[e.index()];
            if a == u || a == v || b == u || b == v {
                return false;
            }
        }
        true
    }

    /// Shortest admissible dual walk from a cell of `u` to a cell of `v`.
    fn shortest_walk(&self, u: NodeId, v: NodeId) -> Option<(CellId, Vec<DartId>)> {
        let starts = self.cm.cells_of(self.p, u);
        let goals = self.cm.cells_of(self.p, v);
        if let Some(&c) = starts.iter().find(|c| goals.contains(c)) {
            return Some((c, Vec::new()));
        }
        let m = self.budget.len();
        type State = (CellId, Vec<u8>);
        let mut seen: BTreeMap<CellId, Vec<Vec<u8>>> = BTreeMap::new();
        let mut states: Vec<(State, Option<(usize, DartId)>)> = Vec::new();
        let mut queue = VecDeque::new();
        for &c in &starts {
            seen.entry(c).or_default().push(vec![0; m]);
            states.push(((c, vec![0; m]), None));
            queue.push_back((states.len() - 1, 0usize));
        }
        while let Some((si, len)) = queue.pop_front() {
            if len >= self.s.k as usize {
                continue;
            }
            let (cell, used) = states[si].0.clone();
            for &d in &self.exits[cell.index()] {
                let e = self.p.edge_of(d);
                if !self.edge_allowed(e, used[e.index()], u, v) {
                    continue;
                }
                let to = self.cm.left(self.p.twin(d));
                let mut nu = used.clone();
                nu[e.index()] += 1;
                let bucket = seen.entry(to).or_default();
                if bucket.iter().any(|old| old.iter().zip(&nu).all(|(a, b)| a <= b)) {
                    continue;
                }
                bucket.push(nu.clone());
                states.push(((to, nu), Some((si, d))));
                let ni = states.len() - 1;
                if goals.contains(&to) {
                    let mut walk = Vec::new();
                    let mut cur = ni;
                    while let Some((prev, dd)) = states[cur].1 {
                        walk.push(dd);
                        cur = prev;
                    }
                    walk.reverse();
                    return Some((states[cur].0 .0, walk));
                }
                queue.push_back((ni, len + 1));
            }
        }
        None
    }
}

/// Draws the new edge `u`-`v` along `walk` and checks the result.
fn realize(
    o: &Oracle<'_>,
    u: NodeId,
    v: NodeId,
    start_cell: CellId,
    walk: &[DartId],
    notes: &mut Vec<String>,
) -> Option<Planarization> {
    let p = o.p;
    let start_corners: Vec<Corner> = p
        .corners_of(u)
        .into_iter()
        .filter(|c| corner_cell(&o.cm, *c) == start_cell)
        .collect();
    let check_h = o.s.has(Restriction::H) && walk.is_empty();
    let spec = if o.s.has(Restriction::H) && !walk.is_empty() {
        StyleSpec::new(o.s.k, o.s.restrictions.without(Restriction::H))
    } else {
        o.s
    };
    for sc in start_corners {
        let mut w = p.clone();
        let mut origin: Vec<Option<DartId>> = p.darts().map(Some).collect();
        let mut pen = w.pen_start(sc);
        origin.extend([None, None]);
        if let Some(result) = realize_steps(&mut w, &mut origin, &mut pen, walk, v, &spec, check_h, notes) {
            return Some(result);
        }
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn realize_steps(
    w: &mut Planarization,
    origin: &mut Vec<Option<DartId>>,
    pen: &mut crate::insert::Pen,
    walk: &[DartId],
    v: NodeId,
    spec: &StyleSpec,
    check_h: bool,
    notes: &mut Vec<String>,
) -> Option<Planarization> {
    let opts = w.pen_options(pen);
    match walk.split_first() {
        Some((&target, rest)) => {
            for d in opts.darts.iter().copied().filter(|&d| origin[d.index()] == Some(target)) {
                let mut w2 = w.clone();
                let mut o2 = origin.clone();
                let mut pen2 = pen.clone();
                let dt = w2.twin(d);
                let (od, odt) = (o2[d.index()], o2[dt.index()]);
                w2.pen_cross(&mut pen2, d);
                o2.extend([odt, od, None, None]);
                if let Some(r) = realize_steps(&mut w2, &mut o2, &mut pen2, rest, v, spec, check_h, notes) {
                    return Some(r);
                }
            }
            None
        }
        None => {
            for c in opts.corners.iter().copied().filter(|c| c.node(w) == v) {
                let mut w2 = w.clone();
                w2.pen_finish(pen.clone(), c);
                let candidates = if check_h { side_assignments(&w2) } else { vec![w2] };
                for cand in candidates {
                    match check_style(&cand, spec) {
                        Ok(verdict) if verdict.in_style => return Some(cand),
                        Ok(_) => {}
                        Err(e) => notes.push(format!("style check failed on realization: {e}")),
                    }
                }
            }
            None
        }
    }
}

/// Alternative placements of the components hosted by the two faces beside
/// the newest edge, for at most ten hosted components.
fn side_assignments(p: &Planarization) -> Vec<Planarization> {
    let e = EdgeId(p.edge_count() as u32 - 1);
    let d = p.darts().find(|&d| p.edge_of(d) == e).expect("new edge has a dart");
    let (faces, face_of) = p.faces();
    let (fa, fb) = (face_of[d.index()], face_of[p.twin(d).index()]);
    if fa == fb {
        return vec![p.clone()];
    }
    let hosted: Vec<NodeId> = p
        .anchors()
        .iter()
        .filter_map(|(&k, a)| match a.host {
            Host::Face(h) if face_of[h.index()] == fa || face_of[h.index()] == fb => Some(k),
            _ => None,
        })
        .collect();
    let count = hosted.len().min(10);
    let (ha, hb) = (faces[fa][0], faces[fb][0]);
    let mut out = Vec::new();
    for mask in 0u32..(1 << count) {
        let mut q = p.clone();
        for (i, &key) in hosted.iter().take(count).enumerate() {
            let mut a = q.anchors()[&key];
            a.host = Host::Face(if mask & (1 << i) == 0 { ha } else { hb });
            q.set_anchor(key, a);
        }
        out.push(q);
    }
    out
}

fn corner_cell(cm: &CellMap, c: Corner) -> CellId {
    match c {
        Corner::After(d) => cm.left(d),
        Corner::Bare(n) => cm.node_cell[&n],
    }
}

/// Decides whether an edge can be added to `p` while staying in style `s`.
pub fn check_saturated(p: &Planarization, s: &StyleSpec) -> Result<SaturationVerdict, SaturationError> {
    let verdict = check_style(p, s)?;
    if !verdict.in_style {
        return Err(SaturationError::NotInStyle { spec: *s, verdict });
    }
    let oracle = Oracle::new(p, *s)?;
    let vertices: Vec<NodeId> = p.vertices().collect();
    let mut notes = Vec::new();
    let mut unknown = 0usize;
    for (i, &u) in vertices.iter().enumerate() {
        for &v in &vertices[i + 1..] {
            let Some((start_cell, walk)) = oracle.shortest_walk(u, v) else { continue };
            match realize(&oracle, u, v, start_cell, &walk, &mut notes) {
                Some(_) => {
                    let end_cell = match walk.last() {
                        Some(&d) => oracle.cm.left(p.twin(d)),
                        None => start_cell,
                    };
                    let steps = walk.iter().map(|&d| WalkStep { dart: d, edge: p.edge_of(d) }).collect();
                    let witness = InsertionWitness {
                        endpoints: (u, v),
                        walk: steps,
                        start_cell,
                        end_cell,
                        needs_simple_realization: s.has(Restriction::S),
                        realization_status: RealizationStatus::Simple,
                    };
                    return Ok(SaturationVerdict { status: SaturationStatus::Insertable(witness), notes });
                }
                None => {
                    unknown += 1;
                    notes.push(format!("walk from {u} to {v} found but no realization stays in style"));
                }
            }
        }
    }
    let status = if unknown > 0 { SaturationStatus::Unknown } else { SaturationStatus::Saturated };
    Ok(SaturationVerdict { status, notes })
}

/// Saturated drawings must be filled; `Ok(false)` signals a kernel bug.
pub fn verify_saturated_implies_filled(p: &Planarization, s: &StyleSpec) -> Result<bool, SaturationError> {
    let v = check_saturated(p, s)?;
    if !v.is_saturated() {
        return Ok(true);
    }
    Ok(is_filled(p)?.filled)
}

//! Enumeration of drawings edge by edge with the pen.
//!
//! Every edge is drawn as a sequence of crossings of segments that are on
//! the boundary of the cell the pen is in, which reaches every drawing of
//! the edge up to homeomorphism. Partial drawings are deduplicated by their
//! canonical code after each completed edge.

use std::collections::HashSet;

use thiserror::Error;

use crate::canon::{canonical_code, canonical_code_with_labels};
use crate::connectivity::components_and_cuts;
use crate::insert::Pen;
use crate::planarization::{Corner, NodeId, Planarization, PlanarizationError};
use crate::saturation::is_tight;
use crate::styles::{check_style, Restriction, StyleError, StyleSpec};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("search budget of {budget} steps exceeded ({found} result(s) so far)")]
    BudgetExceeded { budget: u64, found: usize },
    #[error(transparent)]
    Planarization(#[from] PlanarizationError),
    #[error(transparent)]
    Style(#[from] StyleError),
}

/// Where an edge starts or ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum End {
    /// A new vertex with this label.
    New(String),
    /// The existing vertex with this label.
    At(String),
    /// A new unlabelled vertex or any existing vertex.
    Any,
}

/// Constraints for drawing one more edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgePlan {
    pub start: End,
    pub end: End,
    /// Bounds (min, max) on crossings with each existing edge, by index;
    /// edges past the end of the list use `default_with`.
    pub with: Vec<(u8, u8)>,
    pub default_with: (u8, u8),
    /// Bounds on the number of selfcrossing points of the new edge.
    pub selfx: (u8, u8),
    /// Crossing budget of every edge, old and new.
    pub k: u32,
    /// Require the new edge to share a vertex or a crossing with the drawing.
    pub connected: bool,
}

impl EdgePlan {
    pub fn new(start: End, end: End, k: u32) -> Self {
        EdgePlan { start, end, with: Vec::new(), default_with: (0, 0), selfx: (0, 0), k, connected: true }
    }

    pub fn each_existing(mut self, lo: u8, hi: u8) -> Self {
        self.default_with = (lo, hi);
        self
    }

    pub fn selfcrossings(mut self, lo: u8, hi: u8) -> Self {
        self.selfx = (lo, hi);
        self
    }

    fn bounds(&self, e: usize) -> (u8, u8) {
        self.with.get(e).copied().unwrap_or(self.default_with)
    }
}

/// Step counter shared by a whole search.
#[derive(Debug)]
pub struct Budget {
    pub limit: u64,
    used: std::cell::Cell<u64>,
}

impl Budget {
    pub fn new(limit: u64) -> Self {
        Budget { limit, used: std::cell::Cell::new(0) }
    }

    pub fn used(&self) -> u64 {
        self.used.get()
    }

    fn tick(&self) -> bool {
        self.used.set(self.used.get() + 1);
        self.used.get() <= self.limit
    }
}

pub(crate) fn find_label(p: &Planarization, label: &str) -> Option<NodeId> {
    p.nodes().find(|&n| p.node(n).label.as_deref() == Some(label))
}

/// Outcome of a visitor callback.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Stop,
}

struct EdgeDrawer<'a> {
    plan: &'a EdgePlan,
    existing: usize,
    /// Remaining crossing budget of each existing edge.
    room: Vec<u32>,
}

impl EdgeDrawer<'_> {
    fn cap(&self, e: usize) -> u8 {
        (self.plan.bounds(e).1 as u32).min(self.room[e]) as u8
    }

    fn run(
        &self,
        p: &Planarization,
        pen: &Pen,
        used: &mut Vec<u8>,
        selfx: u8,
        fresh_start: bool,
        budget: &Budget,
        visit: &mut dyn FnMut(Planarization) -> Result<Flow, SearchError>,
    ) -> Result<Flow, SearchError> {
        if !budget.tick() {
            return Err(SearchError::BudgetExceeded { budget: budget.limit, found: 0 });
        }
        let k = self.plan.k as usize;
        let missing: usize = (0..self.existing)
            .map(|e| self.plan.bounds(e).0.saturating_sub(used[e]) as usize)
            .sum::<usize>()
            + 2 * self.plan.selfx.0.saturating_sub(selfx) as usize;
        if pen.crossings + missing > k {
            return Ok(Flow::Continue);
        }
        let opts = p.pen_options(pen);
        if missing == 0 {
            let touches = self.existing == 0 || used.iter().any(|&u| u > 0) || !fresh_start;
            match &self.plan.end {
                End::New(label) => {
                    if touches || !self.plan.connected {
                        let mut q = p.clone();
                        let v = q.pen_finish_new_vertex(pen.clone());
                        q.set_label(v, Some(label.clone()));
                        if visit(q)? == Flow::Stop {
                            return Ok(Flow::Stop);
                        }
                    }
                }
                End::At(label) => {
                    let target = find_label(p, label);
                    for &c in opts.corners.iter().filter(|c| Some(c.node(p)) == target) {
                        let mut q = p.clone();
                        q.pen_finish(pen.clone(), c);
                        if visit(q)? == Flow::Stop {
                            return Ok(Flow::Stop);
                        }
                    }
                }
                End::Any => {
                    if touches || !self.plan.connected {
                        let mut q = p.clone();
                        q.pen_finish_new_vertex(pen.clone());
                        if visit(q)? == Flow::Stop {
                            return Ok(Flow::Stop);
                        }
                    }
                    for &c in &opts.corners {
                        if fresh_start && !touches && c.node(p) == pen.start {
                            continue;
                        }
                        let mut q = p.clone();
                        q.pen_finish(pen.clone(), c);
                        if visit(q)? == Flow::Stop {
                            return Ok(Flow::Stop);
                        }
                    }
                }
            }
        }
        for &d in &opts.darts {
            let e = p.edge_of(d).index();
            let mut q = p.clone();
            let mut pen2 = pen.clone();
            if e == pen.edge.index() {
                if selfx >= self.plan.selfx.1 || pen.crossings + 2 > k {
                    continue;
                }
                q.pen_cross(&mut pen2, d);
                if self.run(&q, &pen2, used, selfx + 1, fresh_start, budget, visit)? == Flow::Stop {
                    return Ok(Flow::Stop);
                }
            } else {
                if used[e] >= self.cap(e) || pen.crossings + 1 > k {
                    continue;
                }
                q.pen_cross(&mut pen2, d);
                used[e] += 1;
                let flow = self.run(&q, &pen2, used, selfx, fresh_start, budget, visit)?;
                used[e] -= 1;
                if flow == Flow::Stop {
                    return Ok(Flow::Stop);
                }
            }
        }
        Ok(Flow::Continue)
    }
}

/// Draws one more edge into `p` in every admissible way.
pub fn draw_edge(
    p: &Planarization,
    plan: &EdgePlan,
    budget: &Budget,
    visit: &mut dyn FnMut(Planarization) -> Result<Flow, SearchError>,
) -> Result<Flow, SearchError> {
    let traces = p.trace_edges()?;
    let room: Vec<u32> = traces.iter().map(|t| plan.k.saturating_sub(t.crossing_count as u32)).collect();
    let drawer = EdgeDrawer { plan, existing: traces.len(), room };
    let mut starts: Vec<(Planarization, Pen, bool)> = Vec::new();
    let new_vertex_starts = |label: Option<&String>, starts: &mut Vec<(Planarization, Pen, bool)>| {
        let cm = match p.cells() {
            Ok(cm) => cm,
            Err(_) => return,
        };
        if p.node_count() == 0 {
            let mut q = p.clone();
            let pen = q.pen_start_new_vertex(None);
            q.set_label(pen.start, label.cloned());
            starts.push((q, pen, true));
            return;
        }
        for cell in &cm.cells {
            let host = cell.boundary_walks.first().map(|w| w[0]);
            let mut q = p.clone();
            let pen = match host {
                Some(h) => q.pen_start_new_vertex(Some(h)),
                None => q.pen_start_new_vertex(None),
            };
            q.set_label(pen.start, label.cloned());
            starts.push((q, pen, true));
        }
    };
    let existing_corners = |v: NodeId| -> Vec<Corner> { p.corners_of(v) };
    match &plan.start {
        End::New(label) => new_vertex_starts(Some(label), &mut starts),
        End::At(label) => {
            if let Some(v) = find_label(p, label) {
                for c in existing_corners(v) {
                    let mut q = p.clone();
                    let pen = q.pen_start(c);
                    starts.push((q, pen, false));
                }
            }
        }
        End::Any => {
            new_vertex_starts(None, &mut starts);
            for v in p.vertices().collect::<Vec<_>>() {
                for c in existing_corners(v) {
                    let mut q = p.clone();
                    let pen = q.pen_start(c);
                    starts.push((q, pen, false));
                }
            }
        }
    }
    for (q, pen, fresh) in starts {
        let mut used = vec![0u8; traces.len()];
        if drawer.run(&q, &pen, &mut used, 0, fresh, budget, visit)? == Flow::Stop {
            return Ok(Flow::Stop);
        }
    }
    Ok(Flow::Continue)
}

/// Draws the planned edges one after another, deduplicating partial
/// drawings (with labels) after each edge, and calls `visit` on every
/// complete drawing.
pub fn grow(
    base: &Planarization,
    plans: &[EdgePlan],
    budget: &Budget,
    visit: &mut dyn FnMut(&Planarization) -> Result<Flow, SearchError>,
) -> Result<Flow, SearchError> {
    let mut seen: Vec<HashSet<Vec<u32>>> = vec![HashSet::new(); plans.len() + 1];
    grow_level(base, plans, 0, false, budget, &mut seen, visit)
}

/// Like [`grow`], but only for targets that end up connected and filled:
/// partial drawings that cannot reach enough cells to separate their
/// vertices are cut off (see [`filling_slack`]).
pub fn grow_filled(
    base: &Planarization,
    plans: &[EdgePlan],
    budget: &Budget,
    visit: &mut dyn FnMut(&Planarization) -> Result<Flow, SearchError>,
) -> Result<Flow, SearchError> {
    let mut seen: Vec<HashSet<Vec<u32>>> = vec![HashSet::new(); plans.len() + 1];
    grow_level(base, plans, 0, true, budget, &mut seen, visit)
}

/// Upper bound on the cells of a connected completion of `p` by `plans`
/// minus the cells needed to give every vertex its own cell. Negative means
/// no completion is filled.
///
/// Euler's formula on the planarization gives the final cell count exactly
/// from the number of new crossing points, edges and vertices; the crossing
/// counts are bounded from above by the plans. Every current cell keeps at
/// least one cell, and every vertex on its boundary (or placed into it)
/// needs a separate one.
pub fn filling_slack(p: &Planarization, plans: &[EdgePlan]) -> Result<i64, SearchError> {
    let cm = p.cells()?;
    let comps = p.components();
    let with_darts = comps.members.iter().filter(|m| m.iter().any(|&v| p.degree(v) > 0)).count() as i64;
    let traces = p.trace_edges()?;
    let existing = traces.len();
    let mut new_crossings: i64 = 0;
    let mut new_vertices: i64 = 0;
    for (i, plan) in plans.iter().enumerate() {
        // Crossings with earlier edges are new points counted here once.
        let with_old: i64 = (0..existing)
            .map(|e| (plan.bounds(e).1 as i64).min(plan.k as i64 - traces[e].crossing_count as i64))
            .sum();
        let with_new: i64 = (existing..existing + i).map(|e| plan.bounds(e).1 as i64).sum();
        let points = (with_old + with_new + plan.selfx.1 as i64).min(plan.k as i64 - plan.selfx.0 as i64);
        new_crossings += points.max(0);
        new_vertices += [&plan.start, &plan.end].iter().filter(|e| matches!(e, End::New(_))).count() as i64;
    }
    let final_cells =
        cm.cells.len() as i64 + new_crossings + plans.len() as i64 - new_vertices + (1 - with_darts);
    let mut need: i64 = 0;
    let mut empty: i64 = 0;
    for cell in &cm.cells {
        let v = cell.incident_vertices.len() as i64;
        need += v.max(1);
        if v == 0 {
            empty += 1;
        }
    }
    need += (new_vertices - empty).max(0);
    Ok(final_cells - need)
}

fn grow_level(
    p: &Planarization,
    plans: &[EdgePlan],
    level: usize,
    filled: bool,
    budget: &Budget,
    seen: &mut Vec<HashSet<Vec<u32>>>,
    visit: &mut dyn FnMut(&Planarization) -> Result<Flow, SearchError>,
) -> Result<Flow, SearchError> {
    if level == plans.len() {
        return visit(p);
    }
    draw_edge(p, &plans[level], budget, &mut |q: Planarization| {
        if filled && filling_slack(&q, &plans[level + 1..])? < 0 {
            return Ok(Flow::Continue);
        }
        let code = canonical_code_with_labels(&q)?;
        if !seen[level + 1].insert(code) {
            return Ok(Flow::Continue);
        }
        grow_level(&q, plans, level + 1, filled, budget, seen, visit)
    })
}

/// Result of [`search_tight`].
#[derive(Clone, Debug)]
pub struct SearchReport {
    pub found: Vec<Planarization>,
    pub exhaustive: bool,
    pub steps: u64,
}

/// Largest edge count for which [`search_tight`] enumerates exhaustively.
pub const EXHAUSTIVE_MAX_EDGES: usize = 4;

/// Enumerates tight drawings in style `s` with at most `m_max` edges, up to
/// homeomorphism of the sphere. Each found drawing is essentially
/// 2-connected, has isolated vertices in all otherwise empty cells, and is
/// tight for `s.k` and in style `s`.
///
/// Up to [`EXHAUSTIVE_MAX_EDGES`] edges the enumeration is complete within
/// the step budget. Larger bounds run the same enumeration but the report
/// is flagged as not exhaustive, since the budget is then expected to cut
/// the search short.
pub fn search_tight(s: &StyleSpec, m_max: usize, budget: u64) -> Result<SearchReport, SearchError> {
    let exhaustive = m_max <= EXHAUSTIVE_MAX_EDGES;
    let budget = Budget::new(budget);
    let mut found: Vec<Planarization> = Vec::new();
    let mut found_codes: HashSet<Vec<u32>> = HashSet::new();
    let selfx_max: u8 = if s.has(Restriction::S) {
        0
    } else if s.has(Restriction::M) {
        1
    } else {
        (s.k / 2) as u8
    };
    let pair_max: u8 = if s.has(Restriction::M) { 1 } else { s.k.min(255) as u8 };
    let mut seen: Vec<HashSet<Vec<u32>>> = vec![HashSet::new(); m_max + 1];
    let plan = EdgePlan {
        start: End::Any,
        end: End::Any,
        with: Vec::new(),
        default_with: (0, pair_max),
        selfx: (0, selfx_max),
        k: s.k,
        connected: true,
    };
    let mut visit = |q: &Planarization| -> Result<Flow, SearchError> {
        let filled = q.add_isolated_in_empty_cells()?;
        if is_tight(&filled, s.k)?
            && components_and_cuts(&filled)?.essentially_2_connected
            && check_style(&filled, s)?.in_style
        {
            let code = canonical_code(&filled)?;
            if found_codes.insert(code) {
                found.push(filled);
            }
        }
        Ok(Flow::Continue)
    };
    let result = search_level(&Planarization::new(), &plan, m_max, &budget, &mut seen, &mut visit);
    match result {
        Ok(_) => Ok(SearchReport { found, exhaustive, steps: budget.used() }),
        Err(SearchError::BudgetExceeded { budget: b, .. }) => {
            Err(SearchError::BudgetExceeded { budget: b, found: found.len() })
        }
        Err(e) => Err(e),
    }
}

fn search_level(
    p: &Planarization,
    plan: &EdgePlan,
    remaining: usize,
    budget: &Budget,
    seen: &mut Vec<HashSet<Vec<u32>>>,
    visit: &mut dyn FnMut(&Planarization) -> Result<Flow, SearchError>,
) -> Result<Flow, SearchError> {
    if p.edge_count() > 0 && visit(p)? == Flow::Stop {
        return Ok(Flow::Stop);
    }
    if remaining == 0 {
        return Ok(Flow::Continue);
    }
    let level = p.edge_count() + 1;
    draw_edge(p, plan, budget, &mut |q: Planarization| {
        let code = canonical_code(&q)?;
        if !seen[level].insert(code) {
            return Ok(Flow::Continue);
        }
        search_level(&q, plan, remaining - 1, budget, seen, visit)
    })
}

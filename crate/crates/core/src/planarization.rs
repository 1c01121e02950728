//! Combinatorial drawings represented by their planarization.
//!
//! A drawing is stored as a rotation system over typed nodes: real vertices,
//! crossing points (degree 4, straight-through pairing by opposite position)
//! and isolated vertices. Every segment of the planarization is a pair of
//! twin darts labelled with the original edge it belongs to. Rotations are
//! counterclockwise and faces are traced with the face on the left of each
//! dart.
//!
//! Drawings with several connected components are placed on the sphere by
//! anchors: every component except one root component names the face that
//! hosts it.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident, $prefix:literal) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
        pub struct $name(pub u32);

        impl $name {
            #[inline]
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, concat!($prefix, "{}"), self.0)
            }
        }
    };
}

id_type!(
    /// Node of the planarization.
    NodeId, "n"
);
id_type!(
    /// Half of a planarization segment, emanating from a node.
    DartId, "d"
);
id_type!(
    /// Original edge of the drawn multigraph.
    EdgeId, "e"
);
id_type!(CellId, "c");

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum NodeKind {
    RealVertex,
    Crossing,
    IsolatedVertex,
}

impl NodeKind {
    pub fn is_vertex(self) -> bool {
        !matches!(self, NodeKind::Crossing)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub kind: NodeKind,
    pub label: Option<String>,
    /// Some dart emanating from this node, `None` for degree zero.
    pub(crate) first: Option<DartId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Dart {
    pub node: NodeId,
    pub twin: DartId,
    /// Counterclockwise successor around `node`.
    pub next: DartId,
    pub(crate) prev: DartId,
    pub edge: EdgeId,
}

/// Face hosting a nested component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Host {
    /// The outer face of the root component: the left face of its
    /// lowest-numbered dart, or the root itself when it has no darts.
    Outer,
    /// The face on the left of this dart.
    Face(DartId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Anchor {
    /// A dart of the anchored component whose left face faces the host.
    /// `None` for components without darts.
    pub inner: Option<DartId>,
    pub host: Host,
}

/// Position for inserting a new dart at a node.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Corner {
    /// Between `d` and its counterclockwise successor, i.e. in the left face of `d`.
    After(DartId),
    /// At a node without darts.
    Bare(NodeId),
}

impl Corner {
    pub fn node(self, p: &Planarization) -> NodeId {
        match self {
            Corner::After(d) => p.dart(d).node,
            Corner::Bare(n) => n,
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PlanarizationError {
    #[error("edge {edge} does not trace between two vertices (stuck at {at})")]
    TraceBroken { edge: EdgeId, at: NodeId },
    #[error("anchors form a cycle through component of {0}")]
    AnchorCycle(NodeId),
    #[error("invalid planarization: {0}")]
    Invalid(String),
}

/// One invariant violation found by [`Planarization::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Violation {
    TwinNotInvolution(DartId),
    RotationNotPermutation(DartId),
    RotationLeavesNode(DartId),
    NodeDartMismatch(NodeId),
    EdgeLabelMismatch(DartId),
    EdgeOutOfRange(DartId),
    CrossingDegree { node: NodeId, degree: usize },
    ImproperCrossing(NodeId),
    IsolatedWithDarts(NodeId),
    Loop(EdgeId),
    BrokenTrace(EdgeId),
    EdgeWithoutSegments(EdgeId),
    UnanchoredComponent(NodeId),
    DoubleAnchor(NodeId),
    BadAnchor(NodeId),
    AnchorCycle(NodeId),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::TwinNotInvolution(d) => write!(f, "twin of {d} is not an involution"),
            Violation::RotationNotPermutation(d) => write!(f, "rotation at {d} is not a permutation"),
            Violation::RotationLeavesNode(d) => write!(f, "rotation successor of {d} sits at another node"),
            Violation::NodeDartMismatch(n) => write!(f, "darts of {n} do not form one rotation cycle"),
            Violation::EdgeLabelMismatch(d) => write!(f, "segment of {d} has two edge labels"),
            Violation::EdgeOutOfRange(d) => write!(f, "{d} refers to an unknown edge"),
            Violation::CrossingDegree { node, degree } => {
                write!(f, "crossing degree ≠ 4 at {node} (degree {degree})")
            }
            Violation::ImproperCrossing(n) => write!(f, "improper crossing at {n}"),
            Violation::IsolatedWithDarts(n) => write!(f, "isolated vertex {n} has darts"),
            Violation::Loop(e) => write!(f, "edge {e} is a loop"),
            Violation::BrokenTrace(e) => write!(f, "edge {e} does not trace between two vertices"),
            Violation::EdgeWithoutSegments(e) => write!(f, "edge {e} has no segments"),
            Violation::UnanchoredComponent(n) => write!(f, "component of {n} has no anchor"),
            Violation::DoubleAnchor(n) => write!(f, "component of {n} is anchored twice"),
            Violation::BadAnchor(n) => write!(f, "anchor of {n} refers to an invalid dart"),
            Violation::AnchorCycle(n) => write!(f, "anchor cycle through {n}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// An original edge recovered as its walk through the planarization.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeTrace {
    pub edge: EdgeId,
    pub endpoints: (NodeId, NodeId),
    /// Forward darts of the segments, from the first endpoint to the second.
    pub segments: Vec<DartId>,
    /// Interior crossing nodes in walk order; a selfcrossing appears twice.
    pub crossings: Vec<NodeId>,
    pub crossing_count: usize,
}

impl EdgeTrace {
    pub fn selfcrossings(&self) -> BTreeSet<NodeId> {
        let mut seen = BTreeSet::new();
        let mut twice = BTreeSet::new();
        for &x in &self.crossings {
            if !seen.insert(x) {
                twice.insert(x);
            }
        }
        twice
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Cell {
    pub id: CellId,
    /// Closed boundary walks, one per component touching the cell.
    pub boundary_walks: Vec<Vec<DartId>>,
    /// Degree-zero vertices lying inside the cell.
    pub isolated: Vec<NodeId>,
    /// Vertices (not crossings) on the boundary or inside the cell.
    pub incident_vertices: BTreeSet<NodeId>,
}

/// Cells of a drawing together with lookup tables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellMap {
    pub cells: Vec<Cell>,
    /// Cell on the left of each dart.
    pub dart_cell: Vec<CellId>,
    /// Cell of each degree-zero node.
    pub node_cell: BTreeMap<NodeId, CellId>,
}

impl CellMap {
    pub fn left(&self, d: DartId) -> CellId {
        self.dart_cell[d.index()]
    }

    /// Cells a vertex is incident to.
    pub fn cells_of(&self, p: &Planarization, v: NodeId) -> BTreeSet<CellId> {
        match self.node_cell.get(&v) {
            Some(&c) => [c].into_iter().collect(),
            None => p.darts_at(v).map(|d| self.left(d)).collect(),
        }
    }
}

/// The single source of truth for a drawing.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Planarization {
    pub(crate) nodes: Vec<Node>,
    pub(crate) darts: Vec<Dart>,
    pub(crate) anchors: BTreeMap<NodeId, Anchor>,
    pub(crate) edge_count: u32,
}

impl Planarization {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn dart_count(&self) -> usize {
        self.darts.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count as usize
    }

    pub fn node(&self, n: NodeId) -> &Node {
        &self.nodes[n.index()]
    }

    pub fn dart(&self, d: DartId) -> &Dart {
        &self.darts[d.index()]
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len() as u32).map(NodeId)
    }

    pub fn darts(&self) -> impl Iterator<Item = DartId> + '_ {
        (0..self.darts.len() as u32).map(DartId)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edge_count).map(EdgeId)
    }

    pub fn anchors(&self) -> &BTreeMap<NodeId, Anchor> {
        &self.anchors
    }

    pub fn kind(&self, n: NodeId) -> NodeKind {
        self.nodes[n.index()].kind
    }

    pub fn twin(&self, d: DartId) -> DartId {
        self.darts[d.index()].twin
    }

    pub fn next(&self, d: DartId) -> DartId {
        self.darts[d.index()].next
    }

    pub fn prev(&self, d: DartId) -> DartId {
        self.darts[d.index()].prev
    }

    pub fn edge_of(&self, d: DartId) -> EdgeId {
        self.darts[d.index()].edge
    }

    /// Node at the far end of `d`.
    pub fn head(&self, d: DartId) -> NodeId {
        self.dart(self.twin(d)).node
    }

    /// Next dart along the left face of `d`.
    pub fn face_next(&self, d: DartId) -> DartId {
        self.prev(self.twin(d))
    }

    /// Dart opposite `d` at a crossing node.
    pub fn opposite(&self, d: DartId) -> DartId {
        self.next(self.next(d))
    }

    /// Darts around `n` in counterclockwise order.
    pub fn darts_at(&self, n: NodeId) -> RotationIter<'_> {
        let first = self.nodes[n.index()].first;
        RotationIter { p: self, first, cur: first }
    }

    pub fn degree(&self, n: NodeId) -> usize {
        self.darts_at(n).count()
    }

    /// Vertices (real or isolated) of the drawn multigraph.
    pub fn vertices(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes().filter(|&n| self.kind(n).is_vertex())
    }

    pub fn crossing_nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes().filter(|&n| self.kind(n) == NodeKind::Crossing)
    }

    /// Degree-zero vertices: isolated vertices and edgeless real vertices.
    pub fn isolated_vertices(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes()
            .filter(|&n| self.kind(n).is_vertex() && self.nodes[n.index()].first.is_none())
    }

    // ----- construction -------------------------------------------------

    pub fn add_node(&mut self, kind: NodeKind, label: Option<String>) -> NodeId {
        let id = NodeId(self.nodes.len() as u32);
        self.nodes.push(Node { kind, label, first: None });
        id
    }

    pub fn set_label(&mut self, n: NodeId, label: Option<String>) {
        self.nodes[n.index()].label = label;
    }

    pub(crate) fn set_kind(&mut self, n: NodeId, kind: NodeKind) {
        self.nodes[n.index()].kind = kind;
    }

    pub fn new_edge(&mut self) -> EdgeId {
        let e = EdgeId(self.edge_count);
        self.edge_count += 1;
        e
    }

    pub fn set_anchor(&mut self, key: NodeId, anchor: Anchor) {
        self.anchors.insert(key, anchor);
    }

    pub fn remove_anchor(&mut self, key: NodeId) -> Option<Anchor> {
        self.anchors.remove(&key)
    }

    pub(crate) fn push_dart(&mut self, node: NodeId, edge: EdgeId) -> DartId {
        let d = DartId(self.darts.len() as u32);
        self.darts.push(Dart { node, twin: d, next: d, prev: d, edge });
        d
    }

    /// Splices dart `d` (currently alone) into the rotation at `corner`.
    pub(crate) fn attach(&mut self, d: DartId, corner: Corner) {
        match corner {
            Corner::After(a) => {
                let node = self.darts[a.index()].node;
                let b = self.darts[a.index()].next;
                self.darts[d.index()].node = node;
                self.darts[d.index()].prev = a;
                self.darts[d.index()].next = b;
                self.darts[a.index()].next = d;
                self.darts[b.index()].prev = d;
            }
            Corner::Bare(n) => {
                debug_assert!(self.nodes[n.index()].first.is_none());
                self.darts[d.index()].node = n;
                self.darts[d.index()].next = d;
                self.darts[d.index()].prev = d;
                self.nodes[n.index()].first = Some(d);
            }
        }
    }

    /// Removes dart `d` from its rotation, leaving it dangling.
    pub(crate) fn detach(&mut self, d: DartId) {
        let Dart { node, next, prev, .. } = self.darts[d.index()];
        if next == d {
            self.nodes[node.index()].first = None;
        } else {
            self.darts[prev.index()].next = next;
            self.darts[next.index()].prev = prev;
            if self.nodes[node.index()].first == Some(d) {
                self.nodes[node.index()].first = Some(next);
            }
        }
        self.darts[d.index()].next = d;
        self.darts[d.index()].prev = d;
    }

    /// Adds a segment of `edge` between two corners, returning the dart at
    /// the first corner.
    pub fn add_segment(&mut self, a: Corner, b: Corner, edge: EdgeId) -> DartId {
        let na = a.node(self);
        let nb = b.node(self);
        let da = self.push_dart(na, edge);
        let db = self.push_dart(nb, edge);
        self.darts[da.index()].twin = db;
        self.darts[db.index()].twin = da;
        self.attach(da, a);
        // `b` may name the corner just used at the same node.
        self.attach(db, b);
        da
    }

    /// Builds a node whose rotation is exactly `darts` (already created,
    /// dangling), in counterclockwise order.
    pub(crate) fn set_rotation(&mut self, n: NodeId, darts: &[DartId]) {
        let len = darts.len();
        for (i, &d) in darts.iter().enumerate() {
            let dd = &mut self.darts[d.index()];
            dd.node = n;
            dd.next = darts[(i + 1) % len];
            dd.prev = darts[(i + len - 1) % len];
        }
        self.nodes[n.index()].first = darts.first().copied();
    }

    /// Moves dart `d` off its node onto a new real vertex, so its edge now
    /// ends there instead.
    pub fn split_endpoint(&mut self, d: DartId, label: Option<String>) -> NodeId {
        self.detach(d);
        let v = self.add_node(NodeKind::RealVertex, label);
        self.attach(d, Corner::Bare(v));
        v
    }

    pub(crate) fn set_twin(&mut self, a: DartId, b: DartId) {
        self.darts[a.index()].twin = b;
        self.darts[b.index()].twin = a;
    }

    /// Creates a dangling twin pair labelled with `edge`.
    pub(crate) fn new_segment_pair(&mut self, edge: EdgeId) -> (DartId, DartId) {
        let placeholder = NodeId(0);
        let a = self.push_dart(placeholder, edge);
        let b = self.push_dart(placeholder, edge);
        self.darts[a.index()].twin = b;
        self.darts[b.index()].twin = a;
        (a, b)
    }

    /// Low-level constructor from raw parts; run [`Planarization::validate`]
    /// afterwards.
    pub fn from_rotations(
        kinds: Vec<(NodeKind, Option<String>)>,
        rotations: Vec<Vec<u32>>,
        twins: Vec<(u32, u32, u32)>,
        anchors: BTreeMap<NodeId, Anchor>,
    ) -> Result<Self, PlanarizationError> {
        let dart_total = twins.len() * 2;
        let mut p = Planarization::new();
        for (kind, label) in kinds {
            p.add_node(kind, label);
        }
        let mut edge_count = 0;
        let mut seen = vec![false; dart_total];
        p.darts = (0..dart_total as u32)
            .map(|i| Dart {
                node: NodeId(0),
                twin: DartId(i),
                next: DartId(i),
                prev: DartId(i),
                edge: EdgeId(0),
            })
            .collect();
        for &(a, b, e) in &twins {
            for x in [a, b] {
                if x as usize >= dart_total || seen[x as usize] {
                    return Err(PlanarizationError::Invalid(format!("dart d{x} used twice or out of range")));
                }
                seen[x as usize] = true;
            }
            p.darts[a as usize].twin = DartId(b);
            p.darts[b as usize].twin = DartId(a);
            p.darts[a as usize].edge = EdgeId(e);
            p.darts[b as usize].edge = EdgeId(e);
            edge_count = edge_count.max(e + 1);
        }
        p.edge_count = edge_count;
        if rotations.len() != p.nodes.len() {
            return Err(PlanarizationError::Invalid("rotation count differs from node count".into()));
        }
        let mut placed = vec![false; dart_total];
        for (i, rot) in rotations.iter().enumerate() {
            let ds: Vec<DartId> = rot.iter().map(|&x| DartId(x)).collect();
            for d in &ds {
                if d.index() >= dart_total || placed[d.index()] {
                    return Err(PlanarizationError::Invalid(format!("dart {d} placed twice or unknown")));
                }
                placed[d.index()] = true;
            }
            p.set_rotation(NodeId(i as u32), &ds);
        }
        if let Some(i) = placed.iter().position(|x| !x) {
            return Err(PlanarizationError::Invalid(format!("dart d{i} is not placed at any node")));
        }
        p.anchors = anchors;
        Ok(p)
    }

    /// Raw rotation lists as dart indices, one per node.
    pub fn rotation_lists(&self) -> Vec<Vec<u32>> {
        self.nodes().map(|n| self.darts_at(n).map(|d| d.0).collect()).collect()
    }

    // ----- validation ---------------------------------------------------

    pub fn validate(&self) -> ValidationReport {
        let mut v = Vec::new();
        let nd = self.darts.len();
        for d in self.darts() {
            let dd = self.dart(d);
            if dd.twin.index() >= nd || dd.twin == d || self.twin(dd.twin) != d {
                v.push(Violation::TwinNotInvolution(d));
                continue;
            }
            if dd.edge.0 >= self.edge_count {
                v.push(Violation::EdgeOutOfRange(d));
            }
            if self.edge_of(dd.twin) != dd.edge && d < dd.twin {
                v.push(Violation::EdgeLabelMismatch(d));
            }
            if dd.next.index() >= nd || self.prev(dd.next) != d {
                v.push(Violation::RotationNotPermutation(d));
                continue;
            }
            if self.dart(dd.next).node != dd.node {
                v.push(Violation::RotationLeavesNode(d));
            }
        }
        if !v.is_empty() {
            return ValidationReport { violations: v };
        }
        // rotation cycles partition darts by node
        let mut counted = vec![false; nd];
        for n in self.nodes() {
            let mut steps = 0;
            for d in self.darts_at(n) {
                if self.dart(d).node != n || counted[d.index()] || steps > nd {
                    v.push(Violation::NodeDartMismatch(n));
                    break;
                }
                counted[d.index()] = true;
                steps += 1;
            }
        }
        if counted.iter().any(|c| !c) {
            for d in self.darts() {
                if !counted[d.index()] {
                    v.push(Violation::NodeDartMismatch(self.dart(d).node));
                }
            }
        }
        if !v.is_empty() {
            v.dedup();
            return ValidationReport { violations: v };
        }
        for n in self.nodes() {
            let deg = self.degree(n);
            match self.kind(n) {
                NodeKind::Crossing => {
                    if deg != 4 {
                        v.push(Violation::CrossingDegree { node: n, degree: deg });
                    } else {
                        let ds: Vec<DartId> = self.darts_at(n).collect();
                        let e = |i: usize| self.edge_of(ds[i]);
                        let selfx = e(0) == e(1) && e(1) == e(2) && e(2) == e(3);
                        // Same-edge darts must sit opposite each other.
                        if !selfx && (e(0) != e(2) || e(1) != e(3)) {
                            v.push(Violation::ImproperCrossing(n));
                        }
                    }
                }
                NodeKind::IsolatedVertex => {
                    if deg != 0 {
                        v.push(Violation::IsolatedWithDarts(n));
                    }
                }
                NodeKind::RealVertex => {}
            }
        }
        let mut has_segment = vec![false; self.edge_count as usize];
        for d in self.darts() {
            has_segment[self.edge_of(d).index()] = true;
        }
        for e in self.edges() {
            if !has_segment[e.index()] {
                v.push(Violation::EdgeWithoutSegments(e));
            }
        }
        if v.iter().all(|x| !matches!(x, Violation::ImproperCrossing(_) | Violation::CrossingDegree { .. })) {
            match self.trace_edges() {
                Ok(traces) => {
                    for t in traces {
                        if t.endpoints.0 == t.endpoints.1 {
                            v.push(Violation::Loop(t.edge));
                        }
                    }
                }
                Err(PlanarizationError::TraceBroken { edge, .. }) => v.push(Violation::BrokenTrace(edge)),
                Err(_) => {}
            }
        }
        v.extend(self.anchor_violations());
        ValidationReport { violations: v }
    }

    fn anchor_violations(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        let comps = self.components();
        let mut anchored: BTreeMap<usize, NodeId> = BTreeMap::new();
        for (&key, anchor) in &self.anchors {
            if key.index() >= self.nodes.len() {
                v.push(Violation::BadAnchor(key));
                continue;
            }
            let c = comps.node_comp[key.index()];
            if anchored.insert(c, key).is_some() {
                v.push(Violation::DoubleAnchor(key));
            }
            let has_darts = comps.members[c].iter().any(|&n| self.nodes[n.index()].first.is_some());
            match anchor.inner {
                Some(d) => {
                    if d.index() >= self.darts.len() || comps.node_comp[self.dart(d).node.index()] != c {
                        v.push(Violation::BadAnchor(key));
                    }
                }
                None => {
                    if has_darts {
                        v.push(Violation::BadAnchor(key));
                    }
                }
            }
            if let Host::Face(h) = anchor.host {
                if h.index() >= self.darts.len() || comps.node_comp[self.dart(h).node.index()] == c {
                    v.push(Violation::BadAnchor(key));
                }
            }
        }
        let unanchored: Vec<usize> = (0..comps.members.len()).filter(|c| !anchored.contains_key(c)).collect();
        if unanchored.len() > 1 {
            for &c in &unanchored[1..] {
                v.push(Violation::UnanchoredComponent(comps.members[c][0]));
            }
        }
        if unanchored.is_empty() && !comps.members.is_empty() {
            v.push(Violation::AnchorCycle(comps.members[0][0]));
        }
        if v.is_empty() {
            if let Err(PlanarizationError::AnchorCycle(n)) = self.root_component(&comps) {
                v.push(Violation::AnchorCycle(n));
            }
        }
        v
    }

    /// Checks validity and converts the report into an error.
    pub fn ensure_valid(&self) -> Result<(), PlanarizationError> {
        let r = self.validate();
        match r.violations.first() {
            None => Ok(()),
            Some(first) => Err(PlanarizationError::Invalid(format!(
                "{first}{}",
                if r.violations.len() > 1 { format!(" (+{} more)", r.violations.len() - 1) } else { String::new() }
            ))),
        }
    }

    // ----- traces -------------------------------------------------------

    pub fn trace_edges(&self) -> Result<Vec<EdgeTrace>, PlanarizationError> {
        let mut ends: Vec<Vec<DartId>> = vec![Vec::new(); self.edge_count as usize];
        for d in self.darts() {
            if self.kind(self.dart(d).node) != NodeKind::Crossing {
                ends[self.edge_of(d).index()].push(d);
            }
        }
        let mut used = vec![false; self.darts.len()];
        let mut out = Vec::with_capacity(ends.len());
        for e in self.edges() {
            let Some(&start) = ends[e.index()].iter().min() else {
                let at = self.darts().find(|&d| self.edge_of(d) == e).map(|d| self.dart(d).node);
                return Err(PlanarizationError::TraceBroken { edge: e, at: at.unwrap_or(NodeId(0)) });
            };
            let mut segments = Vec::new();
            let mut crossings = Vec::new();
            let mut cur = start;
            loop {
                if used[cur.index()] || segments.len() > self.darts.len() {
                    return Err(PlanarizationError::TraceBroken { edge: e, at: self.dart(cur).node });
                }
                used[cur.index()] = true;
                used[self.twin(cur).index()] = true;
                segments.push(cur);
                let back = self.twin(cur);
                let at = self.dart(back).node;
                if self.kind(at) != NodeKind::Crossing {
                    break;
                }
                let nxt = self.opposite(back);
                if self.edge_of(nxt) != e {
                    return Err(PlanarizationError::TraceBroken { edge: e, at });
                }
                crossings.push(at);
                cur = nxt;
            }
            let last = self.head(*segments.last().unwrap());
            let first = self.dart(start).node;
            out.push(EdgeTrace {
                edge: e,
                endpoints: (first, last),
                crossing_count: crossings.len(),
                segments,
                crossings,
            });
        }
        if let Some(d) = self.darts().find(|d| !used[d.index()]) {
            return Err(PlanarizationError::TraceBroken { edge: self.edge_of(d), at: self.dart(d).node });
        }
        Ok(out)
    }

    // ----- faces and cells ----------------------------------------------

    /// Faces of the individual components: dart cycles under `face_next`.
    pub fn faces(&self) -> (Vec<Vec<DartId>>, Vec<usize>) {
        let mut face_of = vec![usize::MAX; self.darts.len()];
        let mut faces = Vec::new();
        for d in self.darts() {
            if face_of[d.index()] != usize::MAX {
                continue;
            }
            let id = faces.len();
            let mut walk = Vec::new();
            let mut cur = d;
            while face_of[cur.index()] == usize::MAX {
                face_of[cur.index()] = id;
                walk.push(cur);
                cur = self.face_next(cur);
            }
            faces.push(walk);
        }
        (faces, face_of)
    }

    pub fn components(&self) -> Components {
        let n = self.nodes.len();
        let mut uf = UnionFind::new(n);
        for d in self.darts() {
            uf.union(self.dart(d).node.index(), self.head(d).index());
        }
        let mut comp_of_root = BTreeMap::new();
        let mut node_comp = vec![0; n];
        let mut members: Vec<Vec<NodeId>> = Vec::new();
        for i in 0..n {
            let r = uf.find(i);
            let c = *comp_of_root.entry(r).or_insert_with(|| {
                members.push(Vec::new());
                members.len() - 1
            });
            node_comp[i] = c;
            members[c].push(NodeId(i as u32));
        }
        Components { node_comp, members }
    }

    /// Index of the unanchored component, checking that anchors are acyclic.
    fn root_component(&self, comps: &Components) -> Result<Option<usize>, PlanarizationError> {
        let k = comps.members.len();
        let mut parent: Vec<Option<usize>> = vec![None; k];
        let mut anchored = vec![false; k];
        for (&key, a) in &self.anchors {
            let c = comps.node_comp[key.index()];
            anchored[c] = true;
            if let Host::Face(h) = a.host {
                parent[c] = Some(comps.node_comp[self.dart(h).node.index()]);
            }
        }
        let root = (0..k).find(|&c| !anchored[c]);
        for start in 0..k {
            let mut cur = start;
            let mut steps = 0;
            while let Some(p) = parent[cur] {
                cur = p;
                steps += 1;
                if steps > k {
                    return Err(PlanarizationError::AnchorCycle(comps.members[start][0]));
                }
            }
        }
        Ok(root)
    }

    /// Cells of the drawing: faces of the components merged across anchors.
    pub fn cells(&self) -> Result<CellMap, PlanarizationError> {
        let comps = self.components();
        let root = self.root_component(&comps)?;
        let (faces, face_of) = self.faces();
        // Pseudo-faces for components without darts.
        let mut pseudo: BTreeMap<usize, usize> = BTreeMap::new();
        let mut total = faces.len();
        for (c, m) in comps.members.iter().enumerate() {
            if m.iter().all(|&n| self.nodes[n.index()].first.is_none()) {
                pseudo.insert(c, total);
                total += 1;
            }
        }
        let comp_face = |c: usize, inner: Option<DartId>| -> usize {
            match inner {
                Some(d) => face_of[d.index()],
                None => pseudo[&c],
            }
        };
        let outer_face = root.map(|r| {
            let min_dart = comps.members[r].iter().filter_map(|&n| self.darts_at(n).min()).min();
            comp_face(r, min_dart)
        });
        let mut uf = UnionFind::new(total);
        for (&key, a) in &self.anchors {
            let c = comps.node_comp[key.index()];
            let inner_face = match a.inner {
                Some(d) => face_of[d.index()],
                None => match pseudo.get(&c) {
                    Some(&f) => f,
                    None => return Err(PlanarizationError::Invalid(format!("anchor of {key} lacks a dart"))),
                },
            };
            let host_face = match a.host {
                Host::Face(h) => face_of[h.index()],
                Host::Outer => match outer_face {
                    Some(f) => f,
                    None => return Err(PlanarizationError::AnchorCycle(key)),
                },
            };
            uf.union(inner_face, host_face);
        }
        let mut cell_index: BTreeMap<usize, usize> = BTreeMap::new();
        let mut cells: Vec<Cell> = Vec::new();
        let mut face_cell = vec![0usize; total];
        for f in 0..total {
            let r = uf.find(f);
            let next = cell_index.len();
            let ci = *cell_index.entry(r).or_insert(next);
            if ci == cells.len() {
                cells.push(Cell {
                    id: CellId(ci as u32),
                    boundary_walks: Vec::new(),
                    isolated: Vec::new(),
                    incident_vertices: BTreeSet::new(),
                });
            }
            face_cell[f] = ci;
        }
        for (f, walk) in faces.iter().enumerate() {
            let cell = &mut cells[face_cell[f]];
            for &d in walk {
                let n = self.dart(d).node;
                if self.kind(n).is_vertex() {
                    cell.incident_vertices.insert(n);
                }
            }
            cell.boundary_walks.push(walk.clone());
        }
        let mut node_cell = BTreeMap::new();
        for (&c, &f) in &pseudo {
            let ci = face_cell[f];
            for &n in &comps.members[c] {
                node_cell.insert(n, CellId(ci as u32));
                if self.kind(n).is_vertex() {
                    cells[ci].isolated.push(n);
                    cells[ci].incident_vertices.insert(n);
                }
            }
        }
        let dart_cell = face_of.iter().map(|&f| CellId(face_cell[f] as u32)).collect();
        Ok(CellMap { cells, dart_cell, node_cell })
    }

    // ----- editing ------------------------------------------------------

    /// Adds one isolated vertex to every cell without incident vertices.
    pub fn add_isolated_in_empty_cells(&self) -> Result<Planarization, PlanarizationError> {
        let cm = self.cells()?;
        let mut out = self.clone();
        let has_darts = self.darts.len() > 0;
        for cell in &cm.cells {
            if !cell.incident_vertices.is_empty() {
                continue;
            }
            let v = out.add_node(NodeKind::IsolatedVertex, None);
            let host = match cell.boundary_walks.first().and_then(|w| w.first()) {
                Some(&d) => Host::Face(d),
                None => Host::Outer,
            };
            if has_darts || !out.anchors.is_empty() || out.nodes.len() > 1 {
                out.anchors.insert(v, Anchor { inner: None, host });
            }
        }
        Ok(out)
    }

    /// Removes all degree-zero nodes of kind [`NodeKind::IsolatedVertex`].
    pub fn without_isolated(&self) -> Planarization {
        let keep: Vec<bool> = self.nodes().map(|n| self.kind(n) != NodeKind::IsolatedVertex).collect();
        self.retain_nodes(&keep)
    }

    /// Keeps the nodes flagged in `keep`, which must all have degree zero
    /// when dropped. Node ids are compacted.
    pub(crate) fn retain_nodes(&self, keep: &[bool]) -> Planarization {
        let mut map = vec![None; self.nodes.len()];
        let mut out = Planarization { edge_count: self.edge_count, ..Default::default() };
        for n in self.nodes() {
            if keep[n.index()] {
                map[n.index()] = Some(NodeId(out.nodes.len() as u32));
                out.nodes.push(self.nodes[n.index()].clone());
            } else {
                debug_assert!(self.nodes[n.index()].first.is_none());
            }
        }
        out.darts = self.darts.clone();
        for d in out.darts.iter_mut() {
            d.node = map[d.node.index()].expect("dropped node with darts");
        }
        for (&k, a) in &self.anchors {
            if let Some(nk) = map[k.index()] {
                out.anchors.insert(nk, *a);
            }
        }
        out
    }

    /// The drawing with the given edges removed. Crossings on removed edges
    /// disappear; components that come apart are re-anchored in the merged
    /// cells.
    pub fn delete_edges(&self, removed: &BTreeSet<EdgeId>) -> Result<Planarization, PlanarizationError> {
        if removed.is_empty() {
            return Ok(self.clone());
        }
        let cm = self.cells()?;
        let mut uf = UnionFind::new(cm.cells.len());
        for d in self.darts() {
            if removed.contains(&self.edge_of(d)) {
                uf.union(cm.left(d).index(), cm.left(self.twin(d)).index());
            }
        }
        let region_of_dart = |d: DartId| uf.clone_find(cm.left(d).index());
        let mut region_dart: Vec<usize> = self.darts().map(|d| region_of_dart(d)).collect();
        let mut region_node: BTreeMap<NodeId, usize> =
            cm.node_cell.iter().map(|(&n, &c)| (n, uf.clone_find(c.index()))).collect();

        let mut work = self.clone();
        let mut dead_dart = vec![false; self.darts.len()];
        for d in self.darts() {
            if removed.contains(&self.edge_of(d)) {
                dead_dart[d.index()] = true;
            }
        }
        // Detach removed darts.
        for d in self.darts() {
            if dead_dart[d.index()] {
                work.detach(d);
            }
        }
        // Smooth crossings left with two darts of a surviving edge.
        let mut dead_node = vec![false; self.nodes.len()];
        for x in self.crossing_nodes() {
            let ds: Vec<DartId> = work.darts_at(x).collect();
            match ds.len() {
                0 => dead_node[x.index()] = true,
                2 => {
                    let (a, b) = (ds[0], ds[1]);
                    let ta = work.twin(a);
                    let tb = work.twin(b);
                    work.detach(a);
                    work.detach(b);
                    dead_dart[a.index()] = true;
                    dead_dart[b.index()] = true;
                    work.darts[ta.index()].twin = tb;
                    work.darts[tb.index()].twin = ta;
                    dead_node[x.index()] = true;
                }
                4 => {}
                _ => return Err(PlanarizationError::Invalid(format!("crossing {x} left with odd degree"))),
            }
        }
        for v in self.nodes() {
            if self.kind(v) == NodeKind::RealVertex && work.nodes[v.index()].first.is_none() {
                work.nodes[v.index()].kind = NodeKind::IsolatedVertex;
                region_node.insert(v, uf.clone_find(region_dart_of_vertex(self, &cm, v, &uf)));
            }
        }
        // Compact darts.
        let mut dmap = vec![None; self.darts.len()];
        let mut new_darts = Vec::new();
        let mut new_region = Vec::new();
        for d in self.darts() {
            if !dead_dart[d.index()] {
                dmap[d.index()] = Some(DartId(new_darts.len() as u32));
                new_darts.push(work.darts[d.index()]);
                new_region.push(region_dart[d.index()]);
            }
        }
        region_dart = new_region;
        for dd in new_darts.iter_mut() {
            dd.twin = dmap[dd.twin.index()].unwrap();
            dd.next = dmap[dd.next.index()].unwrap();
            dd.prev = dmap[dd.prev.index()].unwrap();
        }
        // Compact edges.
        let mut emap = vec![None; self.edge_count as usize];
        let mut ec = 0;
        for e in self.edges() {
            if !removed.contains(&e) {
                emap[e.index()] = Some(EdgeId(ec));
                ec += 1;
            }
        }
        for dd in new_darts.iter_mut() {
            dd.edge = emap[dd.edge.index()].unwrap();
        }
        let mut out = Planarization { edge_count: ec, ..Default::default() };
        let mut nmap = vec![None; self.nodes.len()];
        for n in self.nodes() {
            if !dead_node[n.index()] {
                nmap[n.index()] = Some(NodeId(out.nodes.len() as u32));
                let mut node = work.nodes[n.index()].clone();
                node.first = node.first.and_then(|f| dmap[f.index()]);
                out.nodes.push(node);
            }
        }
        for dd in new_darts.iter_mut() {
            dd.node = nmap[dd.node.index()].unwrap();
        }
        out.darts = new_darts;
        let region_node: BTreeMap<NodeId, usize> =
            region_node.into_iter().filter_map(|(n, r)| nmap[n.index()].map(|m| (m, r))).collect();
        out.reanchor(&region_dart, &region_node);
        Ok(out)
    }

    /// Removes a vertex together with its incident edges.
    pub fn delete_vertex(&self, v: NodeId) -> Result<Planarization, PlanarizationError> {
        let traces = self.trace_edges()?;
        let removed: BTreeSet<EdgeId> = traces
            .iter()
            .filter(|t| t.endpoints.0 == v || t.endpoints.1 == v)
            .map(|t| t.edge)
            .collect();
        // Keep track of the vertex through edge deletion by its label slot.
        let mut marked = self.clone();
        let tag = "\u{0}delete-me".to_string();
        marked.nodes[v.index()].label = Some(tag.clone());
        let stripped = marked.delete_edges(&removed)?;
        let target = stripped
            .nodes()
            .find(|&n| stripped.node(n).label.as_deref() == Some(tag.as_str()))
            .expect("vertex survives edge deletion");
        let cm = stripped.cells()?;
        let region_dart: Vec<usize> = stripped.darts().map(|d| cm.left(d).index()).collect();
        let region_node: BTreeMap<NodeId, usize> =
            cm.node_cell.iter().filter(|(&n, _)| n != target).map(|(&n, &c)| (n, c.index())).collect();
        let keep: Vec<bool> = stripped.nodes().map(|n| n != target).collect();
        let mut out = stripped.retain_nodes(&keep);
        let region_node = region_node
            .into_iter()
            .map(|(n, r)| (if n > target { NodeId(n.0 - 1) } else { n }, r))
            .collect();
        out.reanchor(&region_dart, &region_node);
        Ok(out)
    }

    /// Rebuilds all anchors from a region assignment: `region_dart[d]` is the
    /// region on the left of `d`, `region_node[v]` the region of each
    /// degree-zero node.
    pub(crate) fn reanchor(&mut self, region_dart: &[usize], region_node: &BTreeMap<NodeId, usize>) {
        self.anchors.clear();
        let comps = self.components();
        let (faces, _) = self.faces();
        // Per component, the faces touching each region.
        let k = comps.members.len();
        let mut comp_regions: Vec<BTreeMap<usize, DartId>> = vec![BTreeMap::new(); k];
        for walk in &faces {
            let d = *walk.iter().min().unwrap();
            let c = comps.node_comp[self.dart(d).node.index()];
            comp_regions[c].entry(region_dart[d.index()]).or_insert(d);
        }
        let mut region_comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let mut bare: Vec<Option<usize>> = vec![None; k];
        for c in 0..k {
            if comp_regions[c].is_empty() {
                let n = comps.members[c][0];
                let r = region_node.get(&n).copied().unwrap_or(usize::MAX);
                bare[c] = Some(r);
                region_comps.entry(r).or_default().push(c);
            } else {
                for &r in comp_regions[c].keys() {
                    region_comps.entry(r).or_default().push(c);
                }
            }
        }
        if k == 0 {
            return;
        }
        // Root: the component holding the lowest dart, else component 0.
        let root = (0..k).find(|&c| !comp_regions[c].is_empty()).unwrap_or(0);
        let mut visited = vec![false; k];
        let mut seen_region = BTreeSet::new();
        let mut queue = VecDeque::from([root]);
        visited[root] = true;
        while let Some(c) = queue.pop_front() {
            let regions: Vec<(usize, Option<DartId>)> = match bare[c] {
                Some(r) => vec![(r, None)],
                None => comp_regions[c].iter().map(|(&r, &d)| (r, Some(d))).collect(),
            };
            for (r, host_dart) in regions {
                if !seen_region.insert(r) {
                    continue;
                }
                for &child in region_comps.get(&r).map(|v| v.as_slice()).unwrap_or(&[]) {
                    if visited[child] {
                        continue;
                    }
                    visited[child] = true;
                    let inner = comp_regions[child].get(&r).copied();
                    let host = match host_dart {
                        Some(h) => Host::Face(h),
                        None => Host::Outer,
                    };
                    self.anchors.insert(comps.members[child][0], Anchor { inner, host });
                    queue.push_back(child);
                }
            }
        }
        // Anything unreached floats in the outer region.
        for c in 0..k {
            if !visited[c] {
                let inner = comp_regions[c].values().next().copied();
                let host = faces_first_dart(self, &comps, root).map(Host::Face).unwrap_or(Host::Outer);
                self.anchors.insert(comps.members[c][0], Anchor { inner, host });
            }
        }
        self.normalize_anchors();
    }

    /// Re-roots the anchor tree at the component of `node`, keeping every
    /// cell the same. Fails when a component without darts would have to
    /// host another one.
    pub fn reroot(&mut self, node: NodeId) -> Result<(), PlanarizationError> {
        self.normalize_anchors();
        let comps = self.components();
        let target = comps.node_comp[node.index()];
        let Some(root) = self.root_component(&comps)? else { return Ok(()) };
        if root == target {
            return Ok(());
        }
        let k = comps.members.len();
        // A link joins the face of `a` in one component with the face of
        // `b` in another; `None` stands for a dartless component itself.
        let mut links: Vec<Vec<(usize, Option<DartId>, Option<DartId>)>> = vec![Vec::new(); k];
        let root_dart = faces_first_dart(self, &comps, root);
        for (&key, a) in &self.anchors {
            let c = comps.node_comp[key.index()];
            let (host_comp, host_dart) = match a.host {
                Host::Face(h) => (comps.node_comp[self.dart(h).node.index()], Some(h)),
                Host::Outer => (root, root_dart),
            };
            links[c].push((host_comp, a.inner, host_dart));
            links[host_comp].push((c, host_dart, a.inner));
        }
        let mut anchors = BTreeMap::new();
        let mut seen = vec![false; k];
        seen[target] = true;
        let mut queue = VecDeque::from([target]);
        while let Some(c) = queue.pop_front() {
            for &(o, here, there) in &links[c] {
                if seen[o] {
                    continue;
                }
                seen[o] = true;
                let host = match here {
                    Some(h) => Host::Face(h),
                    None if c == target => Host::Outer,
                    None => {
                        return Err(PlanarizationError::Invalid(format!(
                            "component of {} would be hosted by a component without darts",
                            comps.members[o][0]
                        )))
                    }
                };
                anchors.insert(comps.members[o][0], Anchor { inner: there, host });
                queue.push_back(o);
            }
        }
        self.anchors = anchors;
        Ok(())
    }

    /// Rewrites `Host::Outer` into an explicit face when the root has darts.
    pub fn normalize_anchors(&mut self) {
        let comps = self.components();
        let Ok(Some(root)) = self.root_component(&comps) else { return };
        if let Some(d) = faces_first_dart(self, &comps, root) {
            for a in self.anchors.values_mut() {
                if a.host == Host::Outer {
                    a.host = Host::Face(d);
                }
            }
        }
    }

    /// Darts of real-vertex corners, useful for locating vertices in cells.
    pub fn corners_of(&self, v: NodeId) -> Vec<Corner> {
        if self.nodes[v.index()].first.is_none() {
            vec![Corner::Bare(v)]
        } else {
            self.darts_at(v).map(Corner::After).collect()
        }
    }
}

fn faces_first_dart(p: &Planarization, comps: &Components, c: usize) -> Option<DartId> {
    comps.members[c].iter().filter_map(|&n| p.darts_at(n).min()).min()
}

fn region_dart_of_vertex(p: &Planarization, cm: &CellMap, v: NodeId, _uf: &UnionFind) -> usize {
    match cm.node_cell.get(&v) {
        Some(c) => c.index(),
        None => cm.left(p.darts_at(v).next().expect("vertex had darts")).index(),
    }
}

pub struct RotationIter<'a> {
    p: &'a Planarization,
    first: Option<DartId>,
    cur: Option<DartId>,
}

impl Iterator for RotationIter<'_> {
    type Item = DartId;

    fn next(&mut self) -> Option<DartId> {
        let cur = self.cur?;
        let nxt = self.p.darts[cur.index()].next;
        self.cur = if Some(nxt) == self.first { None } else { Some(nxt) };
        Some(cur)
    }
}

#[derive(Clone, Debug)]
pub struct Components {
    pub node_comp: Vec<usize>,
    pub members: Vec<Vec<NodeId>>,
}

#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut c = x;
        while self.parent[c] != r {
            let n = self.parent[c];
            self.parent[c] = r;
            c = n;
        }
        r
    }

    pub(crate) fn clone_find(&self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        r
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

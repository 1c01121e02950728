//! Drawing a new edge into an existing planarization one crossing at a time.
//!
//! A [`Pen`] is an edge under construction. Its free end is a temporary tip
//! node of degree one that sits inside some cell. Each [`Planarization::pen_cross`]
//! splits a segment on the boundary of that cell with a new crossing node and
//! moves the tip to the other side. Crossing segments of the pen's own edge
//! yields selfcrossings.

use crate::planarization::{Anchor, Corner, DartId, EdgeId, Host, NodeId, NodeKind, Planarization};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pen {
    pub edge: EdgeId,
    /// Node where the edge starts.
    pub start: NodeId,
    /// Temporary degree-one node at the free end.
    pub tip: NodeId,
    /// Number of crossings placed so far, selfcrossings counted twice.
    pub crossings: usize,
}

/// Darts created by one pen crossing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CrossingSplit {
    pub node: NodeId,
    /// Dart from the crossing back towards the tail of the crossed dart.
    pub back: DartId,
    /// Dart from the crossing on towards the head of the crossed dart.
    pub ahead: DartId,
}

/// Where the pen may go next.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PenOptions {
    /// Crossable darts: the pen sits on their left.
    pub darts: Vec<DartId>,
    /// Corners of vertices the pen can finish at.
    pub corners: Vec<Corner>,
}

impl Planarization {
    /// Starts a new edge at a corner of an existing vertex.
    pub fn pen_start(&mut self, at: Corner) -> Pen {
        let w = at.node(self);
        let was_bare = matches!(at, Corner::Bare(_));
        let edge = self.new_edge();
        let tip = self.add_node(NodeKind::RealVertex, None);
        let d = self.add_segment(at, Corner::Bare(tip), edge);
        if self.kind(w) == NodeKind::IsolatedVertex {
            self.set_kind(w, NodeKind::RealVertex);
        }
        if was_bare {
            // The component of `w` now has darts; anchors must name one.
            let comps = self.components();
            let c = comps.node_comp[w.index()];
            let keys: Vec<NodeId> =
                self.anchors.keys().copied().filter(|k| comps.node_comp[k.index()] == c).collect();
            for k in keys {
                if let Some(a) = self.anchors.get_mut(&k) {
                    a.inner = Some(d);
                }
            }
            self.normalize_anchors();
        }
        Pen { edge, start: w, tip, crossings: 0 }
    }

    /// Starts a new edge at a new vertex placed in the cell left of `host`
    /// (or the outer cell).
    pub fn pen_start_new_vertex(&mut self, host: Option<DartId>) -> Pen {
        let empty = self.node_count() == 0;
        let v = self.add_node(NodeKind::RealVertex, None);
        if !empty {
            let host = match host {
                Some(h) => Host::Face(h),
                None => Host::Outer,
            };
            self.anchors.insert(v, Anchor { inner: None, host });
        }
        self.pen_start(Corner::Bare(v))
    }

    fn tip_dart(&self, pen: &Pen) -> DartId {
        self.darts_at(pen.tip).next().expect("pen tip has a dart")
    }

    /// Crossable darts and finishing corners in the cell of the pen tip.
    pub fn pen_options(&self, pen: &Pen) -> PenOptions {
        let r = self.tip_dart(pen);
        let Ok(cm) = self.cells() else { return PenOptions::default() };
        let cell = &cm.cells[cm.left(r).index()];
        let mut out = PenOptions::default();
        for walk in &cell.boundary_walks {
            for &d in walk {
                out.darts.push(d);
                let n = self.dart(d).node;
                if n != pen.tip && n != pen.start && self.kind(n).is_vertex() {
                    out.corners.push(Corner::After(d));
                }
            }
        }
        for &v in cell.isolated.iter().filter(|&&v| v != pen.start) {
            out.corners.push(Corner::Bare(v));
        }
        out.darts.sort();
        out.corners.sort();
        out
    }

    /// Merges anchor bookkeeping for two components about to be joined.
    fn merge_components(&mut self, a: NodeId, b: NodeId) {
        let comps = self.components();
        let (ca, cb) = (comps.node_comp[a.index()], comps.node_comp[b.index()]);
        if ca == cb {
            return;
        }
        let key_of = |c: usize, p: &Planarization| p.anchors.keys().copied().find(|k| comps.node_comp[k.index()] == c);
        if let Some(k) = key_of(ca, self) {
            self.anchors.remove(&k);
        } else if let Some(k) = key_of(cb, self) {
            self.anchors.remove(&k);
        }
    }

    /// Crosses dart `d`, which must lie in the cell of the pen tip with the
    /// pen on its left.
    pub fn pen_cross(&mut self, pen: &mut Pen, d: DartId) -> CrossingSplit {
        let r = self.tip_dart(pen);
        // Crossing the tip segment makes a loop; `r` and its twin select
        // the two orientations of that loop.
        let loop_back = d == r;
        let d = if loop_back { self.twin(r) } else { d };
        let dnode = self.dart(d).node;
        self.merge_components(pen.tip, dnode);
        let dt = self.twin(d);
        let e_d = self.edge_of(d);
        let x = self.add_node(NodeKind::Crossing, None);
        let back = self.push_dart(x, e_d);
        let ahead = self.push_dart(x, e_d);
        self.darts[back.index()].twin = d;
        self.darts[d.index()].twin = back;
        self.darts[ahead.index()].twin = dt;
        self.darts[dt.index()].twin = ahead;
        self.detach(r);
        let (q, r2) = self.new_segment_pair(pen.edge);
        if loop_back {
            self.set_rotation(x, &[back, r, ahead, q]);
        } else {
            self.set_rotation(x, &[ahead, r, back, q]);
        }
        self.attach(r2, Corner::Bare(pen.tip));
        pen.crossings += if e_d == pen.edge { 2 } else { 1 };
        CrossingSplit { node: x, back, ahead }
    }

    /// Completes the edge at an existing corner in the pen's cell.
    pub fn pen_finish(&mut self, pen: Pen, at: Corner) {
        let w = at.node(self);
        self.merge_components(pen.tip, w);
        let r = self.tip_dart(&pen);
        self.detach(r);
        self.attach(r, at);
        if self.kind(w) == NodeKind::IsolatedVertex {
            self.set_kind(w, NodeKind::RealVertex);
        }
        self.remove_bare_node(pen.tip);
        self.normalize_anchors();
    }

    /// Completes the edge at the tip, which becomes a new vertex.
    pub fn pen_finish_new_vertex(&mut self, pen: Pen) -> NodeId {
        self.normalize_anchors();
        pen.tip
    }

    /// Removes a degree-zero node, moving the last node into its slot.
    pub(crate) fn remove_bare_node(&mut self, n: NodeId) {
        debug_assert!(self.nodes[n.index()].first.is_none());
        if let Some(a) = self.anchors.remove(&n) {
            // Re-key the anchor of a multi-node component, if any.
            let comps = self.components();
            let c = comps.node_comp[n.index()];
            if let Some(&other) = comps.members[c].iter().find(|&&m| m != n) {
                self.anchors.insert(other, a);
            }
        }
        let last = NodeId(self.nodes.len() as u32 - 1);
        self.nodes.swap_remove(n.index());
        if last != n {
            for d in self.darts.iter_mut() {
                if d.node == last {
                    d.node = n;
                }
            }
            if let Some(a) = self.anchors.remove(&last) {
                self.anchors.insert(n, a);
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge_between_new_vertices() {
        let mut p = Planarization::new();
        let pen = p.pen_start_new_vertex(None);
        p.pen_finish_new_vertex(pen);
        assert!(p.validate().is_valid(), "{:?}", p.validate());
        assert_eq!(p.node_count(), 2);
        assert_eq!(p.dart_count(), 2);
        assert_eq!(p.cells().unwrap().cells.len(), 1);
    }

    #[test]
    fn two_crossing_edges() {
        let mut p = Planarization::new();
        let pen = p.pen_start_new_vertex(None);
        p.pen_finish_new_vertex(pen);
        let mut pen = p.pen_start_new_vertex(Some(DartId(0)));
        let opts = p.pen_options(&pen);
        let other: Vec<DartId> = opts.darts.iter().copied().filter(|&d| p.edge_of(d) != pen.edge).collect();
        assert_eq!(other.len(), 2);
        p.pen_cross(&mut pen, other[0]);
        p.pen_finish_new_vertex(pen);
        assert!(p.validate().is_valid(), "{:?}", p.validate());
        let t = p.trace_edges().unwrap();
        assert_eq!(t.len(), 2);
        assert!(t.iter().all(|t| t.crossing_count == 1));
        assert_eq!(p.cells().unwrap().cells.len(), 1);
        assert!(p.anchors().is_empty());
    }

    #[test]
    fn loops_on_the_tip_segment() {
        for side in 0..2 {
            let mut p = Planarization::new();
            let mut pen = p.pen_start_new_vertex(None);
            let opts = p.pen_options(&pen);
            assert_eq!(opts.darts.len(), 2);
            p.pen_cross(&mut pen, opts.darts[side]);
            p.pen_finish_new_vertex(pen);
            assert!(p.validate().is_valid(), "{:?}", p.validate());
            let t = p.trace_edges().unwrap();
            assert_eq!(t[0].crossing_count, 2);
            assert_eq!(p.cells().unwrap().cells.len(), 2);
        }
    }

    #[test]
    fn selfcrossing_after_crossing_another_edge() {
        let mut q = Planarization::new();
        let pen0 = q.pen_start_new_vertex(None);
        q.pen_finish_new_vertex(pen0);
        let mut pen = q.pen_start_new_vertex(Some(DartId(0)));
        let d0 = q.pen_options(&pen).darts.into_iter().find(|&d| q.edge_of(d) != pen.edge).unwrap();
        q.pen_cross(&mut pen, d0);
        let opts = q.pen_options(&pen);
        let tip = q.darts_at(pen.tip).next().unwrap();
        let own: Vec<DartId> = opts
            .darts
            .iter()
            .copied()
            .filter(|&d| q.edge_of(d) == pen.edge && d != tip && d != q.twin(tip))
            .collect();
        assert!(!own.is_empty());
        q.pen_cross(&mut pen, own[0]);
        q.pen_finish_new_vertex(pen);
        assert!(q.validate().is_valid(), "{:?}", q.validate());
        let t = q.trace_edges().unwrap();
        assert_eq!(t[1].crossing_count, 3);
        assert_eq!(t[1].selfcrossings().len(), 1);
    }
}

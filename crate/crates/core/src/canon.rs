//! Canonical codes for drawings up to homeomorphisms of the sphere.
//!
//! Each connected component is encoded by a breadth-first labelling of its
//! darts from a chosen root dart, in either orientation. Components nested
//! in a face are encoded recursively and sorted, and the whole code is
//! minimised over the choice of root component. Node labels are ignored.

use std::collections::HashMap;

use crate::planarization::{DartId, NodeKind, Planarization, PlanarizationError};

const BARE: u32 = u32::MAX;
const PARENT: u32 = u32::MAX - 1;
const CHILDREN: u32 = u32::MAX - 2;

fn kind_token(k: NodeKind) -> u32 {
    match k {
        NodeKind::RealVertex => 0,
        NodeKind::Crossing => 1,
        NodeKind::IsolatedVertex => 2,
    }
}

struct Ctx<'a> {
    p: &'a Planarization,
    /// Rank of each node label among the distinct labels, when labels count.
    label_rank: Option<HashMap<String, u32>>,
    comp_darts: Vec<Vec<DartId>>,
    comp_bare_kind: Vec<Option<NodeKind>>,
    comp_members_first: Vec<crate::planarization::NodeId>,
    face_of: Vec<usize>,
    face_cell: Vec<usize>,
    /// Components touching each cell.
    cell_comps: Vec<Vec<usize>>,
    memo: HashMap<(usize, Option<usize>), Vec<u32>>,
    /// Per-dart and per-edge labels, reset to `u32::MAX` after each use.
    scratch_label: Vec<u32>,
    scratch_edge: Vec<u32>,
}

impl Ctx<'_> {
    fn node_token(&self, n: crate::planarization::NodeId) -> u32 {
        let base = kind_token(self.p.kind(n));
        match (&self.label_rank, &self.p.node(n).label) {
            (Some(ranks), Some(l)) => base + 3 * (1 + ranks[l]),
            _ => base,
        }
    }

    fn code(&mut self, c: usize, parent: Option<usize>) -> Vec<u32> {
        if let Some(code) = self.memo.get(&(c, parent)) {
            return code.clone();
        }
        let code = match self.comp_bare_kind[c] {
            Some(_) => vec![BARE, self.node_token(self.comp_members_first[c])],
            None => {
                let darts = self.comp_darts[c].clone();
                let mut best: Option<Vec<u32>> = None;
                for &d0 in &darts {
                    for mirror in [false, true] {
                        let f = self.oriented_face(d0, mirror);
                        if let Some(pc) = parent {
                            if self.face_cell[f] != pc {
                                continue;
                            }
                        }
                        if let Some(code) = self.encode_from(c, d0, mirror, parent, best.as_deref()) {
                            best = Some(code);
                        }
                    }
                }
                best.expect("component has a dart on its parent face")
            }
        };
        self.memo.insert((c, parent), code.clone());
        code
    }

    fn oriented_face(&self, d: DartId, mirror: bool) -> usize {
        if mirror {
            self.face_of[self.p.twin(d).index()]
        } else {
            self.face_of[d.index()]
        }
    }

    /// Encodes component `c` from root dart `d0`; returns `None` as soon as
    /// the code is known to be larger than `bound`.
    fn encode_from(
        &mut self,
        c: usize,
        d0: DartId,
        mirror: bool,
        parent: Option<usize>,
        bound: Option<&[u32]>,
    ) -> Option<Vec<u32>> {
        let p = self.p;
        let rot = |d: DartId| if mirror { p.prev(d) } else { p.next(d) };
        let n = self.comp_darts[c].len();
        let mut label = std::mem::take(&mut self.scratch_label);
        let mut edge_label = std::mem::take(&mut self.scratch_edge);
        let mut order: Vec<DartId> = Vec::with_capacity(n);
        order.push(d0);
        label[d0.index()] = 0;
        let mut code: Vec<u32> = Vec::with_capacity(n * 4 + 8);
        code.push(n as u32);
        // `Equal` while the prefix matches the bound, `Less` once below it.
        let mut state = match bound {
            Some(b) => (n as u32).cmp(&b[0]),
            None => std::cmp::Ordering::Less,
        };
        let mut next_edge = 0u32;
        let mut i = 0;
        let mut aborted = state == std::cmp::Ordering::Greater;
        while i < order.len() && !aborted {
            let x = order[i];
            let mut lab = [0u32; 2];
            for (slot, y) in lab.iter_mut().zip([p.twin(x), rot(x)]) {
                if label[y.index()] == u32::MAX {
                    label[y.index()] = order.len() as u32;
                    order.push(y);
                }
                *slot = label[y.index()];
            }
            let e = p.edge_of(x).index();
            if edge_label[e] == u32::MAX {
                edge_label[e] = next_edge;
                next_edge += 1;
            }
            let toks = [lab[0], lab[1], self.node_token(p.dart(x).node), edge_label[e]];
            for t in toks {
                if state == std::cmp::Ordering::Equal {
                    let b = bound.expect("equal implies a bound");
                    match b.get(code.len()) {
                        Some(&bt) => state = t.cmp(&bt),
                        None => state = std::cmp::Ordering::Greater,
                    }
                    if state == std::cmp::Ordering::Greater {
                        aborted = true;
                    }
                }
                code.push(t);
            }
            i += 1;
        }
        for &x in &order {
            label[x.index()] = u32::MAX;
            edge_label[p.edge_of(x).index()] = u32::MAX;
        }
        self.scratch_label = label;
        self.scratch_edge = edge_label;
        if aborted {
            return None;
        }
        let mut seen_face: Vec<usize> = Vec::new();
        for &x in &order {
            let f = self.oriented_face(x, mirror);
            if seen_face.contains(&f) {
                continue;
            }
            seen_face.push(f);
            let cell = self.face_cell[f];
            if Some(cell) == parent {
                code.push(PARENT);
                continue;
            }
            let others: Vec<usize> = self.cell_comps[cell].iter().copied().filter(|&o| o != c).collect();
            let mut kids: Vec<Vec<u32>> = others.into_iter().map(|o| self.code(o, Some(cell))).collect();
            kids.sort();
            code.push(CHILDREN);
            code.push(kids.len() as u32);
            for k in kids {
                code.push(k.len() as u32);
                code.extend(k);
            }
        }
        match bound {
            Some(b) if code.as_slice() >= b => None,
            _ => Some(code),
        }
    }
}

/// Canonical code: equal for two drawings iff they are equivalent on the
/// sphere (including mirror images), ignoring labels and ids.
pub fn canonical_code(p: &Planarization) -> Result<Vec<u32>, PlanarizationError> {
    code_impl(p, false)
}

/// Like [`canonical_code`] but node labels are part of the code.
pub fn canonical_code_with_labels(p: &Planarization) -> Result<Vec<u32>, PlanarizationError> {
    code_impl(p, true)
}

fn code_impl(p: &Planarization, with_labels: bool) -> Result<Vec<u32>, PlanarizationError> {
    let label_rank = with_labels.then(|| {
        let mut ls: Vec<String> = p.nodes().filter_map(|n| p.node(n).label.clone()).collect();
        ls.sort();
        ls.dedup();
        ls.into_iter().enumerate().map(|(i, l)| (l, i as u32)).collect::<HashMap<_, _>>()
    });
    let comps = p.components();
    let cm = p.cells()?;
    let (faces, face_of) = p.faces();
    let k = comps.members.len();
    let mut comp_darts = vec![Vec::new(); k];
    for d in p.darts() {
        comp_darts[comps.node_comp[p.dart(d).node.index()]].push(d);
    }
    let comp_bare_kind: Vec<Option<NodeKind>> = (0..k)
        .map(|c| comp_darts[c].is_empty().then(|| p.kind(comps.members[c][0])))
        .collect();
    let face_cell: Vec<usize> = faces.iter().map(|w| cm.left(w[0]).index()).collect();
    let mut cell_comps = vec![Vec::new(); cm.cells.len()];
    for (f, w) in faces.iter().enumerate() {
        let c = comps.node_comp[p.dart(w[0]).node.index()];
        cell_comps[face_cell[f]].push(c);
    }
    for (&n, &cell) in &cm.node_cell {
        cell_comps[cell.index()].push(comps.node_comp[n.index()]);
    }
    for v in cell_comps.iter_mut() {
        v.sort();
        v.dedup();
    }
    let comp_members_first = comps.members.iter().map(|m| m[0]).collect();
    let mut ctx = Ctx {
        p,
        label_rank,
        comp_darts,
        comp_bare_kind,
        comp_members_first,
        face_of,
        face_cell,
        cell_comps,
        memo: HashMap::new(),
        scratch_label: vec![u32::MAX; p.dart_count()],
        scratch_edge: vec![u32::MAX; p.edge_count()],
    };
    if k == 0 {
        return Ok(Vec::new());
    }
    // Rooting at a bare component whose cell has other components would lose
    // them, so only components with darts act as roots unless none exist.
    let roots: Vec<usize> = match (0..k).filter(|&c| ctx.comp_bare_kind[c].is_none()).collect::<Vec<_>>() {
        v if v.is_empty() => (0..k).collect(),
        v => v,
    };
    let mut best: Option<Vec<u32>> = None;
    for c in roots {
        let mut code = ctx.code(c, None);
        if ctx.comp_bare_kind[c].is_some() {
            // Only isolated vertices: the code is their multiset of kinds.
            let mut kinds: Vec<u32> = (0..k).map(|o| ctx.node_token(ctx.comp_members_first[o])).collect();
            kinds.sort();
            code = [vec![BARE, k as u32], kinds].concat();
        }
        if best.as_ref().map_or(true, |b| code < *b) {
            best = Some(code);
        }
    }
    Ok(best.unwrap())
}

pub fn equivalent(a: &Planarization, b: &Planarization) -> Result<bool, PlanarizationError> {
    Ok(canonical_code(a)? == canonical_code(b)?)
}

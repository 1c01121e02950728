//! Components and cut-vertices of a drawing.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::planarization::{NodeId, Planarization, PlanarizationError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectivityReport {
    /// Components of the planarization, each sorted.
    pub components: Vec<Vec<NodeId>>,
    /// Cut-vertices of the abstract multigraph.
    pub graph_cut_vertices: BTreeSet<NodeId>,
    /// Cut-vertices of the planarization (may include crossings).
    pub planarization_cut_vertices: BTreeSet<NodeId>,
    /// Vertices that are cut-vertices of both.
    pub drawing_cut_vertices: BTreeSet<NodeId>,
    pub essentially_2_connected: bool,
}

/// Articulation points of a multigraph on `n` vertices. Parallel edges are
/// kept, so a doubled edge never makes its ends articulation points.
pub(crate) fn articulation_points(n: usize, edges: &[(usize, usize)]) -> BTreeSet<usize> {
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, &(a, b)) in edges.iter().enumerate() {
        if a != b {
            adj[a].push((b, i));
            adj[b].push((a, i));
        }
    }
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut out = BTreeSet::new();
    let mut time = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        // iterative DFS: (vertex, parent edge, next adjacency index)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        disc[root] = time;
        low[root] = time;
        time += 1;
        let mut root_children = 0;
        while let Some(&mut (v, pe, ref mut idx)) = stack.last_mut() {
            if *idx < adj[v].len() {
                let (w, ei) = adj[v][*idx];
                *idx += 1;
                if ei == pe {
                    continue;
                }
                if disc[w] == usize::MAX {
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    if v == root {
                        root_children += 1;
                    }
                    stack.push((w, ei, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(u, _, _)) = stack.last() {
                    low[u] = low[u].min(low[v]);
                    if u != root && low[v] >= disc[u] {
                        out.insert(u);
                    }
                }
            }
        }
        if root_children > 1 {
            out.insert(root);
        }
    }
    out
}

pub fn components_and_cuts(p: &Planarization) -> Result<ConnectivityReport, PlanarizationError> {
    let traces = p.trace_edges()?;
    let n = p.node_count();
    let graph_edges: Vec<(usize, usize)> =
        traces.iter().map(|t| (t.endpoints.0.index(), t.endpoints.1.index())).collect();
    // Crossing nodes do not belong to the abstract graph; they have no graph
    // edges and are never reported.
    let graph_cuts: BTreeSet<NodeId> = articulation_points(n, &graph_edges)
        .into_iter()
        .map(|i| NodeId(i as u32))
        .filter(|&v| p.kind(v).is_vertex())
        .collect();
    let seg_edges: Vec<(usize, usize)> = p
        .darts()
        .filter(|&d| d < p.twin(d))
        .map(|d| (p.dart(d).node.index(), p.head(d).index()))
        .collect();
    let planar_cuts: BTreeSet<NodeId> =
        articulation_points(n, &seg_edges).into_iter().map(|i| NodeId(i as u32)).collect();
    let drawing_cuts: BTreeSet<NodeId> = graph_cuts.intersection(&planar_cuts).copied().collect();
    let comps = p.components();
    let with_edges = comps
        .members
        .iter()
        .filter(|m| m.iter().any(|&v| p.degree(v) > 0))
        .count();
    let essentially = p.edge_count() >= 1 && drawing_cuts.is_empty() && with_edges <= 1;
    Ok(ConnectivityReport {
        components: comps.members,
        graph_cut_vertices: graph_cuts,
        planarization_cut_vertices: planar_cuts,
        drawing_cut_vertices: drawing_cuts,
        essentially_2_connected: essentially,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_has_middle_cut() {
        let cuts = articulation_points(3, &[(0, 1), (1, 2)]);
        assert_eq!(cuts.into_iter().collect::<Vec<_>>(), vec![1]);
    }

    #[test]
    fn doubled_edge_is_not_a_bridge() {
        let cuts = articulation_points(3, &[(0, 1), (0, 1), (1, 2)]);
        assert_eq!(cuts.into_iter().collect::<Vec<_>>(), vec![1]);
        let cuts = articulation_points(3, &[(0, 1), (1, 2), (2, 0)]);
        assert!(cuts.is_empty());
    }
}

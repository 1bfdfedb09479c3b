use std::collections::VecDeque;

use super::{Hypergraph, RootedHypertree};
use crate::error::{Error, Result};

/// A depth-bounded neighborhood, re-indexed so that the root is vertex 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    pub sub: Hypergraph,
    pub depth: usize,
    /// `vertex_map[local] = global`, in breadth-first order.
    pub vertex_map: Vec<usize>,
    /// Global indices of the retained edges.
    pub edge_map: Vec<usize>,
    pub is_tree: bool,
}

impl Ball {
    pub fn root(&self) -> usize {
        0
    }

    pub fn into_tree(self) -> Option<RootedHypertree> {
        self.is_tree
            .then(|| RootedHypertree::from_parts_unchecked(self.sub, 0, self.depth))
    }
}

pub(super) fn ball(h: &Hypergraph, root: usize, d: usize) -> Result<Ball> {
    if root >= h.n() {
        return Err(Error::VertexOutOfRange { vertex: root, n: h.n() });
    }
    let mut dist = vec![usize::MAX; h.n()];
    let mut order = vec![root];
    let mut queue = VecDeque::from([root]);
    dist[root] = 0;
    while let Some(u) = queue.pop_front() {
        if dist[u] == d {
            continue;
        }
        for &e in h.incident(u) {
            for &w in h.edge(e) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    order.push(w);
                    queue.push_back(w);
                }
            }
        }
    }
    let (sub, edge_map) = h.induced(&order);
    let is_tree = sub.is_hypertree();
    Ok(Ball { sub, depth: d, vertex_map: order, edge_map, is_tree })
}

//! Hypergraph data model.
//!
//! Vertices are dense indices `0..n`. Edges keep the vertex order they were
//! given in; allocations are stored in that same order.

mod ball;
mod canon;

pub use ball::Ball;
pub use canon::canonical_code;

use std::collections::{HashMap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite simple hypergraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    edges: Vec<Vec<usize>>,
    incident: Vec<Vec<usize>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct HypergraphFile {
    n: usize,
    edges: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    multi: bool,
}

fn check_indices(n: usize, edges: &[Vec<usize>]) -> Result<()> {
    for (ei, e) in edges.iter().enumerate() {
        if e.len() < 2 {
            return Err(Error::EdgeTooSmall { edge: ei, size: e.len() });
        }
        if let Some(&v) = e.iter().find(|&&v| v >= n) {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
    }
    Ok(())
}

fn sorted_key(e: &[usize]) -> Vec<usize> {
    let mut k = e.to_vec();
    k.sort_unstable();
    k
}

impl Hypergraph {
    /// Validates and builds a simple hypergraph.
    pub fn new(n: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        check_indices(n, &edges)?;
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::with_capacity(edges.len());
        for (ei, e) in edges.iter().enumerate() {
            let key = sorted_key(e);
            if let Some(w) = key.windows(2).find(|w| w[0] == w[1]) {
                return Err(Error::RepeatedVertex { edge: ei, vertex: w[0] });
            }
            if let Some(&first) = seen.get(&key) {
                return Err(Error::DuplicateEdge { first, second: ei });
            }
            seen.insert(key, ei);
        }
        Ok(Self::from_valid(n, edges))
    }

    fn from_valid(n: usize, edges: Vec<Vec<usize>>) -> Self {
        let mut incident = vec![Vec::new(); n];
        for (ei, e) in edges.iter().enumerate() {
            for &v in e {
                incident[v].push(ei);
            }
        }
        Hypergraph { n, edges, incident }
    }

    pub fn edgeless(n: usize) -> Self {
        Self::from_valid(n, Vec::new())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &[usize] {
        &self.edges[e]
    }

    /// Edges containing `v`, in increasing edge order.
    pub fn incident(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incident[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.incident.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn max_edge_size(&self) -> usize {
        self.edges.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Number of edge-vertex pairs, `Σ_e |e|`.
    pub fn num_pairs(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    /// Position of `v` inside edge `e`.
    pub fn position(&self, e: usize, v: usize) -> Option<usize> {
        self.edges[e].iter().position(|&u| u == v)
    }

    /// Copy with one more edge appended.
    pub fn with_edge(&self, edge: Vec<usize>) -> Result<Self> {
        let mut edges = self.edges.clone();
        edges.push(edge);
        Self::new(self.n, edges)
    }

    /// Keeps edges with `|e| <= delta` whose vertices all have degree `<= delta`.
    pub fn truncate(&self, delta: usize) -> Self {
        let edges = self
            .edges
            .iter()
            .filter(|e| e.len() <= delta && e.iter().all(|&v| self.degree(v) <= delta))
            .cloned()
            .collect();
        Self::from_valid(self.n, edges)
    }

    /// True iff the bipartite vertex-edge incidence graph is a forest.
    pub fn is_hypertree(&self) -> bool {
        let mut uf = UnionFind::new(self.n + self.edges.len());
        for (ei, e) in self.edges.iter().enumerate() {
            for &v in e {
                if !uf.union(v, self.n + ei) {
                    return false;
                }
            }
        }
        true
    }

    /// Hop distances from `root`; `None` for unreachable vertices.
    pub fn distances(&self, root: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.n];
        let mut queue = VecDeque::new();
        dist[root] = Some(0);
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            let du = dist[u].unwrap();
            for &e in &self.incident[u] {
                for &w in &self.edges[e] {
                    if dist[w].is_none() {
                        dist[w] = Some(du + 1);
                        queue.push_back(w);
                    }
                }
            }
        }
        dist
    }

    /// Depth-`d` neighborhood of `root`: the sub-hypergraph induced on the
    /// vertices within distance `d`, re-indexed with `root` at 0.
    pub fn ball(&self, root: usize, d: usize) -> Result<Ball> {
        ball::ball(self, root, d)
    }

    /// Vertex sets of the connected components, each sorted, in order of smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.n);
        for e in &self.edges {
            for w in e.windows(2) {
                uf.union(w[0], w[1]);
            }
        }
        let mut by_root: HashMap<usize, usize> = HashMap::new();
        let mut out: Vec<Vec<usize>> = Vec::new();
        for v in 0..self.n {
            let r = uf.find(v);
            let idx = *by_root.entry(r).or_insert_with(|| {
                out.push(Vec::new());
                out.len() - 1
            });
            out[idx].push(v);
        }
        out
    }

    /// Sub-hypergraph induced on `vertices` (re-indexed in the given order),
    /// keeping edges entirely inside the set, in original edge order.
    pub fn induced(&self, vertices: &[usize]) -> (Hypergraph, Vec<usize>) {
        let mut local = vec![usize::MAX; self.n];
        for (i, &v) in vertices.iter().enumerate() {
            local[v] = i;
        }
        let mut kept = Vec::new();
        let mut edges = Vec::new();
        for (ei, e) in self.edges.iter().enumerate() {
            if e.iter().all(|&v| local[v] != usize::MAX) {
                kept.push(ei);
                edges.push(e.iter().map(|&v| local[v]).collect());
            }
        }
        (Self::from_valid(vertices.len(), edges), kept)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: HypergraphFile = serde_json::from_str(text)?;
        Self::new(f.n, f.edges)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&HypergraphFile { n: self.n, edges: self.edges.clone(), multi: false })
            .expect("hypergraph serializes")
    }
}

/// A finite multihypergraph: edges are multisets and may repeat.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiHypergraph {
    n: usize,
    edges: Vec<Vec<usize>>,
}

impl MultiHypergraph {
    pub fn new(n: usize, edges: Vec<Vec<usize>>) -> Result<Self> {
        check_indices(n, &edges)?;
        Ok(MultiHypergraph { n, edges })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }

    /// Number of edges of size `k` containing `v`, counted with multiplicity.
    pub fn multidegree(&self, v: usize, k: usize) -> usize {
        self.edges
            .iter()
            .filter(|e| e.len() == k)
            .map(|e| e.iter().filter(|&&u| u == v).count())
            .sum()
    }

    /// Drops self loops, then deletes every edge whose vertex set occurs more than once.
    pub fn erase(&self) -> Hypergraph {
        let loopless: Vec<&Vec<usize>> = self
            .edges
            .iter()
            .filter(|e| sorted_key(e).windows(2).all(|w| w[0] != w[1]))
            .collect();
        let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
        for e in &loopless {
            *counts.entry(sorted_key(e)).or_default() += 1;
        }
        let edges = loopless
            .into_iter()
            .filter(|e| counts[&sorted_key(e)] == 1)
            .cloned()
            .collect();
        Hypergraph::from_valid(self.n, edges)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let f: HypergraphFile = serde_json::from_str(text)?;
        Self::new(f.n, f.edges)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&HypergraphFile { n: self.n, edges: self.edges.clone(), multi: true })
            .expect("multihypergraph serializes")
    }
}

/// Exogenous per-vertex load.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Baseload {
    pub b: Vec<f64>,
}

impl Baseload {
    pub fn zeros(n: usize) -> Self {
        Baseload { b: vec![0.0; n] }
    }

    pub fn new(b: Vec<f64>) -> Result<Self> {
        if let Some(x) = b.iter().find(|x| !x.is_finite()) {
            return Err(Error::InvalidParam(format!("non-finite baseload {x}")));
        }
        Ok(Baseload { b })
    }

    /// Zero everywhere except `t` at vertex `i`.
    pub fn point(n: usize, i: usize, t: f64) -> Self {
        let mut b = vec![0.0; n];
        b[i] = t;
        Baseload { b }
    }

    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.b.iter().sum()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: Baseload = serde_json::from_str(text)?;
        Self::new(raw.b)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("baseload serializes")
    }
}

/// A connected rooted hypertree, every vertex within `depth` of the root.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootedHypertree {
    graph: Hypergraph,
    root: usize,
    depth: usize,
}

impl RootedHypertree {
    pub fn new(graph: Hypergraph, root: usize, depth: usize) -> Result<Self> {
        if root >= graph.n() {
            return Err(Error::VertexOutOfRange { vertex: root, n: graph.n() });
        }
        if !graph.is_hypertree() {
            return Err(Error::NotHypertree);
        }
        if graph.distances(root).iter().any(|d| d.is_none_or(|d| d > depth)) {
            return Err(Error::InvalidParam(format!("vertex beyond depth {depth} of root")));
        }
        Ok(RootedHypertree { graph, root, depth })
    }

    /// Roots a connected hypertree at `root`, with depth its eccentricity.
    pub fn spanning(graph: Hypergraph, root: usize) -> Result<Self> {
        if root >= graph.n() {
            return Err(Error::VertexOutOfRange { vertex: root, n: graph.n() });
        }
        let depth = graph
            .distances(root)
            .iter()
            .try_fold(0, |m, d| d.map(|d| m.max(d)))
            .ok_or_else(|| Error::InvalidParam("hypertree is not connected".into()))?;
        Self::new(graph, root, depth)
    }

    pub(crate) fn from_parts_unchecked(graph: Hypergraph, root: usize, depth: usize) -> Self {
        RootedHypertree { graph, root, depth }
    }

    pub fn graph(&self) -> &Hypergraph {
        &self.graph
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn into_graph(self) -> Hypergraph {
        self.graph
    }
}

struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), rank: vec![0; n] }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn triangle() -> Hypergraph {
        Hypergraph::from_json(r#"{"n":3,"edges":[[0,1],[1,2],[0,2]]}"#).unwrap()
    }

    pub(crate) fn kite() -> Hypergraph {
        Hypergraph::new(4, vec![vec![0, 1, 2], vec![1, 3], vec![2, 3]]).unwrap()
    }

    #[test]
    fn parse_examples() {
        let t = triangle();
        assert_eq!(t.n(), 3);
        assert_eq!(t.num_edges(), 3);
        let empty = Hypergraph::from_json(r#"{"n":2,"edges":[]}"#).unwrap();
        assert_eq!(empty.num_edges(), 0);
        assert!(matches!(
            Hypergraph::from_json(r#"{"n":2,"edges":[[0,0]]}"#),
            Err(Error::RepeatedVertex { .. })
        ));
        assert!(matches!(
            Hypergraph::from_json(r#"{"n":2,"edges":[[0,2]]}"#),
            Err(Error::VertexOutOfRange { vertex: 2, n: 2 })
        ));
        assert!(matches!(
            Hypergraph::from_json(r#"{"n":3,"edges":[[0,1],[1,0]]}"#),
            Err(Error::DuplicateEdge { first: 0, second: 1 })
        ));
        assert!(matches!(Hypergraph::from_json(r#"{"n":3,"edges":[[0]]}"#), Err(Error::EdgeTooSmall { .. })));
        assert!(matches!(Hypergraph::from_json("{\"n\":3"), Err(Error::Parse(_))));
    }

    #[test]
    fn json_roundtrip() {
        let h = kite();
        assert_eq!(Hypergraph::from_json(&h.to_json()).unwrap(), h);
        let m = MultiHypergraph::new(3, vec![vec![0, 0], vec![0, 1], vec![1, 0]]).unwrap();
        assert!(m.to_json().contains("\"multi\":true"));
        assert_eq!(MultiHypergraph::from_json(&m.to_json()).unwrap(), m);
    }

    #[test]
    fn degree_examples() {
        assert_eq!(triangle().degree(0), 2);
        assert_eq!(Hypergraph::edgeless(2).degree(0), 0);
        assert_eq!(kite().degree(3), 2);
    }

    #[test]
    fn hypertree_examples() {
        assert!(!triangle().is_hypertree());
        assert!(Hypergraph::new(3, vec![vec![0, 1, 2]]).unwrap().is_hypertree());
        assert!(!Hypergraph::new(4, vec![vec![0, 1, 2], vec![0, 1, 3]]).unwrap().is_hypertree());
        assert!(Hypergraph::edgeless(5).is_hypertree());
    }

    #[test]
    fn truncate_examples() {
        let t = triangle();
        assert_eq!(t.truncate(2), t);
        assert_eq!(t.truncate(1).num_edges(), 0);
        assert_eq!(kite().truncate(2).edges(), &[vec![1, 3], vec![2, 3]]);
    }

    #[test]
    fn baseload_json() {
        let b = Baseload::from_json(r#"{"b":[0.5,-1.0]}"#).unwrap();
        assert_eq!(b.b, vec![0.5, -1.0]);
        assert_eq!(Baseload::from_json(&b.to_json()).unwrap(), b);
    }

    #[test]
    fn erase_rules() {
        let simple = kite();
        let m = MultiHypergraph::new(4, simple.edges().to_vec()).unwrap();
        assert_eq!(m.erase(), simple);
        let twins = MultiHypergraph::new(3, vec![vec![0, 1, 2], vec![2, 1, 0]]).unwrap();
        assert_eq!(twins.erase().num_edges(), 0);
    }

    #[test]
    fn rooted_tree_validation() {
        let star = Hypergraph::new(3, vec![vec![0, 1], vec![0, 2]]).unwrap();
        assert!(RootedHypertree::new(star.clone(), 1, 1).is_err());
        assert_eq!(RootedHypertree::spanning(star, 1).unwrap().depth(), 2);
        assert!(matches!(RootedHypertree::spanning(triangle(), 0), Err(Error::NotHypertree)));
        assert!(RootedHypertree::spanning(Hypergraph::edgeless(2), 0).is_err());
    }

    pub(crate) fn arb_hypergraph(max_n: usize, max_edges: usize) -> impl Strategy<Value = Hypergraph> {
        (2..=max_n).prop_flat_map(move |n| {
            let edge = proptest::sample::subsequence((0..n).collect::<Vec<_>>(), 2..=n.min(4));
            proptest::collection::vec(edge, 0..=max_edges).prop_map(move |mut es| {
                let mut seen = std::collections::HashSet::new();
                es.retain(|e| seen.insert(e.clone()));
                Hypergraph::new(n, es).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn handshake(h in arb_hypergraph(12, 15)) {
            let lhs: usize = h.edges().iter().map(Vec::len).sum();
            let rhs: usize = (0..h.n()).map(|v| h.degree(v)).sum();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn truncation_idempotent_and_monotone(h in arb_hypergraph(10, 15), d in 1usize..5) {
            let t = h.truncate(d);
            prop_assert_eq!(t.truncate(d), t.clone());
            let wider = h.truncate(d + 1);
            for e in t.edges() {
                prop_assert!(wider.edges().contains(e));
            }
        }
    }
}

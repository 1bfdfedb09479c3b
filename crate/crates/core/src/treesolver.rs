//! Exact balanced loads on finite hypertrees.
//!
//! For a directed subtree `T_{e→i}` (the component of `i` once edge `e` is
//! cut) the inverse response function satisfies
//!
//! ```text
//! ρ⁻¹_{T_{e→i}}(t) = t − Σ_{e'∋i, e'≠e} [1 − Σ_{j∈e', j≠i} (ρ⁻¹_{T_{e'→j}}(t))⁺]₀¹
//! ```
//!
//! and the balanced load at `i` exceeds `t` exactly when
//! `Σ_{e∋i} [1 − Σ_{j∈e, j≠i} (ρ⁻¹_{T_{e→j}}(t))⁺]₀¹ > t`. Loads follow by
//! bisection on that threshold test.

use crate::error::{Error, Result};
use crate::hypercore::{Hypergraph, RootedHypertree};

/// `T_{e→i}`: the part of a hypertree hanging off vertex `i` away from edge `e`.
/// With `cut_edge = None` this is the whole tree rooted at `i`.
#[derive(Debug, Clone, Copy)]
pub struct DirectedSubtree<'a> {
    pub tree: &'a Hypergraph,
    pub cut_edge: Option<usize>,
    pub vertex: usize,
}

impl<'a> DirectedSubtree<'a> {
    pub fn new(tree: &'a Hypergraph, cut_edge: Option<usize>, vertex: usize) -> Result<Self> {
        if vertex >= tree.n() {
            return Err(Error::VertexOutOfRange { vertex, n: tree.n() });
        }
        if let Some(e) = cut_edge {
            if e >= tree.num_edges() || tree.position(e, vertex).is_none() {
                return Err(Error::InvalidParam(format!("vertex {vertex} is not in edge {e}")));
            }
        }
        if !tree.is_hypertree() {
            return Err(Error::NotHypertree);
        }
        Ok(DirectedSubtree { tree, cut_edge, vertex })
    }
}

#[inline]
fn clamp01(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

/// Share of edge `e` that flows to `i` at level `t`: `[1 − Σ_{j∈e, j≠i} (ρ⁻¹_{T_{e→j}}(t))⁺]₀¹`.
fn edge_share(g: &Hypergraph, e: usize, i: usize, t: f64) -> f64 {
    let taken: f64 = g.edge(e).iter().filter(|&&j| j != i).map(|&j| inverse_rec(g, e, j, t).max(0.0)).sum();
    clamp01(1.0 - taken)
}

fn inverse_rec(g: &Hypergraph, from_edge: usize, i: usize, t: f64) -> f64 {
    t - g.incident(i).iter().filter(|&&e| e != from_edge).map(|&e| edge_share(g, e, i, t)).sum::<f64>()
}

/// `ρ⁻¹_{T_{e→i}}(t)` by bottom-up recursion. A vertex with no other edges returns `t`.
pub fn response_inverse(sub: &DirectedSubtree<'_>, t: f64) -> f64 {
    inverse_rec(sub.tree, sub.cut_edge.unwrap_or(usize::MAX), sub.vertex, t)
}

fn exceeds(g: &Hypergraph, i: usize, t: f64) -> bool {
    g.incident(i).iter().map(|&e| edge_share(g, e, i, t)).sum::<f64>() > t
}

/// Whether the balanced load at the root is strictly above `t`.
pub fn root_load_exceeds(tree: &RootedHypertree, t: f64) -> bool {
    exceeds(tree.graph(), tree.root(), t)
}

/// Balanced load of every vertex of a finite hypertree (a forest is fine),
/// each within `precision` and rounded up.
pub fn forest_loads(g: &Hypergraph, precision: f64) -> Result<Vec<f64>> {
    if !g.is_hypertree() {
        return Err(Error::NotHypertree);
    }
    if !(precision > 0.0) {
        return Err(Error::InvalidParam(format!("precision must be positive, got {precision}")));
    }
    Ok((0..g.n())
        .map(|v| {
            // the load lies in [0, deg]; exceeds(-1) always holds
            let (mut lo, mut hi) = (-1.0, g.degree(v) as f64);
            while hi - lo > precision {
                let mid = 0.5 * (lo + hi);
                if exceeds(g, v, mid) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            hi.max(0.0)
        })
        .collect())
}

/// Balanced loads of a rooted hypertree, indexed like its vertices.
pub fn tree_loads(tree: &RootedHypertree, precision: f64) -> Result<Vec<f64>> {
    forest_loads(tree.graph(), precision)
}

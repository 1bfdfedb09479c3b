//! Maximum balanced load and the densest sub-hypergraph.
//!
//! The largest balanced load equals `max_{S≠∅} |E_H(S)| / |S|`, where
//! `E_H(S)` is the set of edges lying entirely inside `S`. Two exact solvers
//! for the right-hand side are provided (subset enumeration and min-cut);
//! [`rho_finite`] reads the left-hand side off the balanced loads.

mod flow;

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::balancer::{self, SolveParams};
use crate::error::{Error, Result};
use crate::hypercore::{Baseload, Hypergraph};

pub use flow::Dinic;

pub const BRUTE_FORCE_MAX_N: usize = 22;

/// A densest vertex set with its exact density `edges / size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityResult {
    pub best_set: Vec<usize>,
    pub edges: u64,
    pub size: u64,
}

impl DensityResult {
    fn of_set(h: &Hypergraph, best_set: Vec<usize>) -> Self {
        let edges = edges_inside(h, &best_set);
        let size = best_set.len() as u64;
        DensityResult { best_set, edges, size }
    }

    pub fn rho(&self) -> f64 {
        self.edges as f64 / self.size as f64
    }

    /// Compares densities exactly.
    pub fn cmp_density(&self, other: &DensityResult) -> Ordering {
        (self.edges * other.size).cmp(&(other.edges * self.size))
    }

    /// Density in lowest terms, `(p, q)`.
    pub fn reduced(&self) -> (u64, u64) {
        let g = gcd(self.edges, self.size).max(1);
        (self.edges / g, self.size / g)
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Out<'a> {
            rho: f64,
            density: String,
            set: &'a [usize],
        }
        let (p, q) = self.reduced();
        serde_json::to_string(&Out { rho: self.rho(), density: format!("{p}/{q}"), set: &self.best_set })
            .expect("density result serializes")
    }
}

impl fmt::Display for DensityResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (p, q) = self.reduced();
        write!(f, "{p}/{q}")
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `|E_H(S)|` for a vertex set `S`.
pub fn edges_inside(h: &Hypergraph, set: &[usize]) -> u64 {
    let mut inside = vec![false; h.n()];
    for &v in set {
        inside[v] = true;
    }
    h.edges().iter().filter(|e| e.iter().all(|&v| inside[v])).count() as u64
}

fn require_vertices(h: &Hypergraph) -> Result<()> {
    if h.n() == 0 {
        return Err(Error::InvalidParam("hypergraph has no vertices".into()));
    }
    Ok(())
}

/// Exhaustive search over all nonempty vertex subsets. Among densest sets
/// the smallest wins, then the lexicographically smallest.
pub fn max_density_bruteforce(h: &Hypergraph) -> Result<DensityResult> {
    require_vertices(h)?;
    let n = h.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::TooLarge { n, max: BRUTE_FORCE_MAX_N });
    }
    let masks: Vec<u32> = h.edges().iter().map(|e| e.iter().fold(0u32, |m, &v| m | (1 << v))).collect();
    let members = |mask: u32| -> Vec<usize> { (0..n).filter(|&v| mask & (1 << v) != 0).collect() };
    let mut best_mask = 1u32;
    let mut best = (masks.iter().filter(|&&em| em & !1 == 0).count() as u64, 1u64);
    for mask in 2u32..(1u32 << n) {
        let size = mask.count_ones() as u64;
        let edges = masks.iter().filter(|&&em| em & !mask == 0).count() as u64;
        let better = match (edges * best.1).cmp(&(best.0 * size)) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => size < best.1 || (size == best.1 && members(mask) < members(best_mask)),
        };
        if better {
            best = (edges, size);
            best_mask = mask;
        }
    }
    Ok(DensityResult { best_set: members(best_mask), edges: best.0, size: best.1 })
}

/// Densest set through parametric min-cut.
///
/// With `D = 2n²`, integer capacities `source→edge = D`, `edge→member = ∞`,
/// `vertex→sink = a` give a cut below `m·D` exactly when some `S` has
/// `|E(S)|/|S| > a/D`. Binary search finds the last such `a`; the source side
/// of that cut is then a densest set, because two distinct densities with
/// denominators at most `n` differ by more than `1/D`.
pub fn max_density_flow(h: &Hypergraph) -> Result<DensityResult> {
    require_vertices(h)?;
    let (n, m) = (h.n() as i64, h.num_edges() as i64);
    if m == 0 {
        return Ok(DensityResult { best_set: vec![0], edges: 0, size: 1 });
    }
    let scale = 2 * n * n;
    let cut_set = |a: i64| -> Option<Vec<usize>> {
        let (net, source, sink) = build_network(h, scale, a);
        let mut net = net;
        let flow = net.max_flow(source, sink);
        (flow < m * scale).then(|| {
            let reach = net.reachable(source);
            (0..h.n()).filter(|&v| reach[v]).collect()
        })
    };
    let (mut lo, mut hi) = (0i64, m * scale);
    let mut best = cut_set(0).expect("an edge gives positive density");
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        match cut_set(mid) {
            Some(set) => {
                lo = mid;
                best = set;
            }
            None => hi = mid,
        }
    }
    Ok(DensityResult::of_set(h, best))
}

fn build_network(h: &Hypergraph, scale: i64, a: i64) -> (Dinic, usize, usize) {
    // vertices 0..n, edge nodes n..n+m, then source and sink
    let (n, m) = (h.n(), h.num_edges());
    let (source, sink) = (n + m, n + m + 1);
    let mut net = Dinic::new(n + m + 2);
    for (ei, e) in h.edges().iter().enumerate() {
        net.add_edge(source, n + ei, scale);
        for &v in e {
            net.add_edge(n + ei, v, flow::INF);
        }
    }
    for v in 0..n {
        net.add_edge(v, sink, a);
    }
    (net, source, sink)
}

/// Largest coordinate of the balanced load vector.
pub fn rho_finite(h: &Hypergraph, params: &SolveParams) -> Result<f64> {
    require_vertices(h)?;
    let (_, loads) = balancer::balance(h, &Baseload::zeros(h.n()), params)?;
    Ok(loads.max())
}

//! Neighborhood census and local-weak-convergence statistics.
//!
//! A census is the law of the depth-`d` neighborhood of a uniform root,
//! keyed by canonical code. Neighborhoods that are not hypertrees share the
//! single key [`NON_TREE`].

use std::collections::{BTreeMap, VecDeque};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::genmodel::{sample_ugwt, TypeDistribution, TypeSampler};
use crate::hypercore::{canonical_code, Ball, Hypergraph};
use crate::seed;

pub const NON_TREE: &str = "non-tree";

#[derive(Debug, Clone, PartialEq)]
pub struct Census {
    pub masses: BTreeMap<String, f64>,
    pub samples: usize,
}

impl Census {
    /// Normalizes class counts.
    pub fn from_counts(counts: BTreeMap<String, usize>) -> Self {
        let samples: usize = counts.values().sum();
        let masses = counts.into_iter().map(|(k, c)| (k, c as f64 / samples as f64)).collect();
        Census { masses, samples }
    }

    pub fn mass(&self, key: &str) -> f64 {
        self.masses.get(key).copied().unwrap_or(0.0)
    }

    pub fn non_tree_mass(&self) -> f64 {
        self.mass(NON_TREE)
    }

    /// `code,mass` rows under a header, sorted by code.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("code,mass\n");
        for (k, m) in &self.masses {
            writeln!(out, "{k},{m}").unwrap();
        }
        out
    }
}

/// Breadth-first exploration of the depth-`d` neighborhood of `root`.
///
/// Touches only the neighborhood itself, so cost does not grow with the size
/// of `h`. Output is identical to [`Hypergraph::ball`].
pub fn explore(h: &Hypergraph, root: usize, d: usize) -> Result<Ball> {
    if root >= h.n() {
        return Err(Error::VertexOutOfRange { vertex: root, n: h.n() });
    }
    let mut local: std::collections::HashMap<usize, (usize, usize)> = std::collections::HashMap::new();
    local.insert(root, (0, 0));
    let mut order = vec![root];
    let mut found: Vec<usize> = Vec::new();
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        let du = local[&u].1;
        for &e in h.incident(u) {
            if du == d {
                // boundary vertex: keep only edges already inside the ball
                if h.edge(e).iter().all(|w| local.contains_key(w)) {
                    found.push(e);
                }
                continue;
            }
            found.push(e);
            for &w in h.edge(e) {
                if let std::collections::hash_map::Entry::Vacant(slot) = local.entry(w) {
                    slot.insert((order.len(), du + 1));
                    order.push(w);
                    queue.push_back(w);
                }
            }
        }
    }
    found.sort_unstable();
    found.dedup();
    let edges = found.iter().map(|&e| h.edge(e).iter().map(|w| local[w].0).collect()).collect();
    let sub = Hypergraph::new(order.len(), edges).expect("sub-hypergraph of a simple hypergraph");
    let is_tree = sub.is_hypertree();
    Ok(Ball { sub, depth: d, vertex_map: order, edge_map: found, is_tree })
}

fn class_of(ball: Ball) -> String {
    match ball.into_tree() {
        Some(t) => canonical_code(&t).expect("tree balls have codes"),
        None => NON_TREE.to_string(),
    }
}

fn tally(keys: Vec<String>) -> Census {
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for k in keys {
        *counts.entry(k).or_default() += 1;
    }
    Census::from_counts(counts)
}

/// Exact census over every vertex of `h`.
pub fn neighborhood_census(h: &Hypergraph, d: usize, exec: Exec) -> Census {
    let keys = exec.map_indexed(h.n(), |v| class_of(explore(h, v, d).expect("vertex in range")));
    tally(keys)
}

/// Empirical census of `samples` independent `UGWT(P)` draws at depth `d`.
/// Draw `i` uses the stream derived from `(seed, i)`.
pub fn ugwt_census(p: &TypeDistribution, d: usize, samples: usize, seed: u64, exec: Exec) -> Result<Census> {
    if samples == 0 {
        return Err(Error::InvalidParam("census needs at least one sample".into()));
    }
    let sampler = TypeSampler::new(p);
    let keys = exec.map_indexed(samples, |i| {
        let mut rng = seed::rng_at(seed, &[i as u64]);
        canonical_code(&sample_ugwt(&sampler, d, &mut rng)).expect("Galton-Watson samples are trees")
    });
    Ok(tally(keys))
}

/// `½ Σ |a − b|` over the union of classes.
pub fn tv_distance(a: &Census, b: &Census) -> f64 {
    let mut total = 0.0;
    for (k, &m) in &a.masses {
        total += (m - b.mass(k)).abs();
    }
    for (k, &m) in &b.masses {
        if !a.masses.contains_key(k) {
            total += m;
        }
    }
    (0.5 * total).min(1.0)
}

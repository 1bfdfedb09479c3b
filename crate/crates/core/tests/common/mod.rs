//! Independent oracles and instance generators shared by the integration
//! tests. Nothing here calls into the solvers under test.
#![allow(dead_code)]

use std::collections::BTreeSet;

use hyperbalance::{Baseload, Hypergraph};
use rand::seq::SliceRandom;
use rand::Rng;

/// `n ∈ [2, n_max]` vertices, up to `2n` distinct edges of sizes 2..=4.
pub fn random_hypergraph<R: Rng>(rng: &mut R, n_max: usize) -> Hypergraph {
    let n = rng.gen_range(2..=n_max);
    let target = rng.gen_range(1..=2 * n);
    let mut seen = BTreeSet::new();
    let mut edges = Vec::new();
    for _ in 0..target {
        let k = rng.gen_range(2..=4.min(n));
        let mut e = rand::seq::index::sample(rng, n, k).into_vec();
        let mut key = e.clone();
        key.sort_unstable();
        if seen.insert(key) {
            e.shuffle(rng);
            edges.push(e);
        }
    }
    Hypergraph::new(n, edges).unwrap()
}

/// A connected hypertree with at most `max_n` vertices and edges of size 2..=4,
/// randomly relabelled.
pub fn random_hypertree<R: Rng>(rng: &mut R, max_n: usize) -> Hypergraph {
    let target = rng.gen_range(1..=max_n);
    let mut n = 1;
    let mut edges = Vec::new();
    while n < target {
        let k = rng.gen_range(2..=4).min(target - n + 1);
        let mut e = vec![rng.gen_range(0..n)];
        e.extend(n..n + k - 1);
        n += k - 1;
        edges.push(e);
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut edges: Vec<Vec<usize>> = edges.into_iter().map(|e| e.into_iter().map(|v| perm[v]).collect()).collect();
    edges.shuffle(rng);
    Hypergraph::new(n, edges).unwrap()
}

pub fn random_baseload<R: Rng>(rng: &mut R, n: usize) -> Baseload {
    Baseload::new((0..n).map(|_| rng.gen_range(0.0..2.0)).collect()).unwrap()
}

/// Euclidean projection onto the probability simplex, `(y − τ)⁺` with `τ`
/// found by bisection.
pub fn project_simplex(y: &[f64]) -> Vec<f64> {
    let mass = |tau: f64| y.iter().map(|&v| (v - tau).max(0.0)).sum::<f64>();
    let mut lo = y.iter().copied().fold(f64::INFINITY, f64::min) - 1.0;
    let mut hi = y.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mass(mid) > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let tau = 0.5 * (lo + hi);
    y.iter().map(|&v| (v - tau).max(0.0)).collect()
}

/// Loads minimizing `½ Σ_i ℓ_i²` over allocations, by projected gradient with
/// step `1 / max degree`, stopped once no entry moves by more than `tol`.
pub fn qp_loads(h: &Hypergraph, b: &Baseload, tol: f64) -> Vec<f64> {
    let step = 1.0 / h.max_degree().max(1) as f64;
    let mut theta: Vec<Vec<f64>> = h.edges().iter().map(|e| vec![1.0 / e.len() as f64; e.len()]).collect();
    let loads_of = |theta: &[Vec<f64>]| {
        let mut l = b.b.clone();
        for (e, row) in h.edges().iter().zip(theta) {
            for (&v, &x) in e.iter().zip(row) {
                l[v] += x;
            }
        }
        l
    };
    for _ in 0..5_000_000 {
        let l = loads_of(&theta);
        let mut moved: f64 = 0.0;
        for (e, row) in h.edges().iter().zip(theta.iter_mut()) {
            let y: Vec<f64> = e.iter().zip(row.iter()).map(|(&v, &x)| x - step * l[v]).collect();
            let p = project_simplex(&y);
            for (x, nx) in row.iter_mut().zip(p) {
                moved = moved.max((*x - nx).abs());
                *x = nx;
            }
        }
        if moved < tol {
            break;
        }
    }
    loads_of(&theta)
}

/// Looks for a Berge cycle `v₁ e₁ v₂ … v_k e_k v₁` (k ≥ 2, distinct vertices
/// and edges) by exhaustive search; a hypergraph is a hyperforest iff none exists.
pub fn has_closed_path(h: &Hypergraph) -> bool {
    fn extend(h: &Hypergraph, start: usize, v: usize, used_v: &mut Vec<bool>, used_e: &mut Vec<bool>, len: usize) -> bool {
        for &e in h.incident(v) {
            if used_e[e] {
                continue;
            }
            used_e[e] = true;
            for &w in h.edge(e) {
                if w == v {
                    continue;
                }
                if w == start && len >= 1 {
                    return true;
                }
                if !used_v[w] {
                    used_v[w] = true;
                    if extend(h, start, w, used_v, used_e, len + 1) {
                        return true;
                    }
                    used_v[w] = false;
                }
            }
            used_e[e] = false;
        }
        false
    }
    (0..h.n()).any(|s| {
        let mut used_v = vec![false; h.n()];
        let mut used_e = vec![false; h.num_edges()];
        used_v[s] = true;
        extend(h, s, s, &mut used_v, &mut used_e, 0)
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

fn edge_set(h: &Hypergraph, relabel: &[usize]) -> BTreeSet<Vec<usize>> {
    h.edges()
        .iter()
        .map(|e| {
            let mut s: Vec<usize> = e.iter().map(|&v| relabel[v]).collect();
            s.sort_unstable();
            s
        })
        .collect()
}

/// Rooted isomorphism by trying every vertex bijection; only for tiny graphs.
pub fn rooted_isomorphic(a: &Hypergraph, ra: usize, b: &Hypergraph, rb: usize) -> bool {
    if a.n() != b.n() || a.num_edges() != b.num_edges() {
        return false;
    }
    assert!(a.n() <= 8, "brute-force isomorphism is factorial");
    let target = edge_set(b, &(0..b.n()).collect::<Vec<_>>());
    permutations(a.n()).into_iter().any(|p| p[ra] == rb && edge_set(a, &p) == target)
}

pub fn sup_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}

/// Vertices of `T_{e→i}`: everything reachable from `i` without using `e`.
pub fn side_of(h: &Hypergraph, e: usize, i: usize) -> Vec<usize> {
    let mut seen = vec![false; h.n()];
    seen[i] = true;
    let mut stack = vec![i];
    while let Some(v) = stack.pop() {
        for &f in h.incident(v) {
            if f == e {
                continue;
            }
            for &w in h.edge(f) {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    (0..h.n()).filter(|&v| seen[v]).collect()
}

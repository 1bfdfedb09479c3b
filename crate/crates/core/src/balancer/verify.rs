use serde::Serialize;

use super::{Allocation, LoadVector};
use crate::error::Result;
use crate::hypercore::{Baseload, Hypergraph};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BalanceReport {
    /// `max_{e; i,j∈e} θ(e,i)·(∂_bθ(i) − ∂_bθ(j))⁺`.
    pub max_violation: f64,
    /// `(edge, i, j)` attaining the maximum, when it is positive.
    pub witness: Option<(usize, usize, usize)>,
    pub passed: bool,
}

/// Checks that no edge sends load to a vertex strictly more loaded than
/// another vertex of the same edge.
pub fn verify_balanced(h: &Hypergraph, theta: &Allocation, b: &Baseload, tol: f64) -> BalanceReport {
    let ld = match super::loads(h, theta, b) {
        Ok(l) => l.loads,
        Err(_) => return BalanceReport { max_violation: f64::INFINITY, witness: None, passed: false },
    };
    let mut max_violation = 0.0;
    let mut witness = None;
    for (ei, (e, row)) in h.edges().iter().zip(&theta.theta).enumerate() {
        let (jmin, lmin) = e
            .iter()
            .map(|&v| (v, ld[v]))
            .fold((usize::MAX, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
        for (&i, &x) in e.iter().zip(row) {
            let v = x * (ld[i] - lmin).max(0.0);
            if v > max_violation {
                max_violation = v;
                witness = Some((ei, i, jmin));
            }
        }
    }
    BalanceReport { max_violation, witness, passed: max_violation < tol }
}

/// `(1/n) Σ_i (ℓ_i − t)⁺`.
pub fn mean_excess_finite(loads: &LoadVector, t: f64) -> f64 {
    let n = loads.loads.len();
    if n == 0 {
        return 0.0;
    }
    loads.loads.iter().map(|&l| (l - t).max(0.0)).sum::<f64>() / n as f64
}

/// `(1/n)[Σ_e min_{j∈e} f(j) − t Σ_i f(i)]` for a test function `f: V → [0,1]`.
/// Never exceeds the mean excess of the balanced loads.
pub fn variational_rhs(h: &Hypergraph, f: &[f64], t: f64) -> f64 {
    if h.n() == 0 {
        return 0.0;
    }
    let edge_term: f64 = h.edges().iter().map(|e| e.iter().map(|&j| f[j]).fold(f64::INFINITY, f64::min)).sum();
    (edge_term - t * f.iter().sum::<f64>()) / h.n() as f64
}

/// Mean excess of the (zero-baseload) loads of `theta` minus the variational
/// value at the maximizer `f = 1{ℓ > t}`. Zero when `theta` is balanced.
pub fn variational_gap(h: &Hypergraph, theta: &Allocation, t: f64) -> Result<f64> {
    let ld = super::loads(h, theta, &Baseload::zeros(h.n()))?;
    let f: Vec<f64> = ld.loads.iter().map(|&l| if l > t { 1.0 } else { 0.0 }).collect();
    Ok(mean_excess_finite(&ld, t) - variational_rhs(h, &f, t))
}

//! Balanced and ε-balanced allocations on finite hypergraphs.
//!
//! Exact balancing minimizes `Σ_i ∂_bθ(i)²` by block-coordinate descent: each
//! block is one edge, re-split exactly by water-filling. The ε-balanced
//! allocation is the unique minimizer of the entropy-regularized objective
//! `½ Σ_i ∂_bθ(i)² + ε Σ_{(e,i)} θ(e,i) ln θ(e,i)`, whose stationarity
//! condition is exactly the softmax fixed-point equation; it is solved by the
//! same edge-by-edge descent, or by damped simultaneous fixed-point iteration.

mod allocation;
mod entropic;
mod exact;
mod verify;

pub use allocation::{loads, Allocation, LoadVector};
pub use entropic::{entropic_fill, epsilon_balance, epsilon_balance_from, epsilon_residual, response_epsilon};
pub use exact::{balance, balance_from, rebalance_edge, water_fill};
pub use verify::{mean_excess_finite, variational_gap, variational_rhs, verify_balanced, BalanceReport};

use crate::error::{Error, Result};

/// Order in which edges are visited within one sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Sweep {
    /// Edges `0..m` in order, every sweep (Gauss-Seidel).
    #[default]
    Cyclic,
    /// Forward on even sweeps, backward on odd ones.
    Symmetric,
    /// All edges updated simultaneously from the previous loads, mixed in
    /// with weight `damping`. Only meaningful for ε-balancing.
    Jacobi,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveParams {
    pub epsilon: f64,
    pub damping: f64,
    /// Stop once the sup-norm change of the load vector over one sweep is below this.
    pub tol: f64,
    pub max_iters: usize,
    pub sweep: Sweep,
}

impl Default for SolveParams {
    fn default() -> Self {
        SolveParams { epsilon: 1e-2, damping: 0.5, tol: 1e-10, max_iters: 1_000_000, sweep: Sweep::Cyclic }
    }
}

impl SolveParams {
    pub fn exact() -> Self {
        Self::default()
    }

    pub fn with_epsilon(epsilon: f64) -> Self {
        SolveParams { epsilon, tol: 1e-12, ..Self::default() }
    }

    pub fn tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn sweep(mut self, sweep: Sweep) -> Self {
        self.sweep = sweep;
        self
    }

    pub fn max_iters(mut self, max_iters: usize) -> Self {
        self.max_iters = max_iters;
        self
    }

    pub(crate) fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidParam(format!("tol must be positive, got {}", self.tol)));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidParam("max_iters must be at least 1".into()));
        }
        if !(self.damping > 0.0 && self.damping <= 1.0) {
            return Err(Error::InvalidParam(format!("damping must lie in (0, 1], got {}", self.damping)));
        }
        Ok(())
    }

    pub(crate) fn edge_order(&self, m: usize, sweep_index: usize) -> Box<dyn Iterator<Item = usize>> {
        match (self.sweep, sweep_index % 2) {
            (Sweep::Symmetric, 1) => Box::new((0..m).rev()),
            _ => Box::new(0..m),
        }
    }
}

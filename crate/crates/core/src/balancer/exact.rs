use super::allocation::loads_into;
use super::{Allocation, LoadVector, SolveParams, Sweep};
use crate::error::{Error, Result};
use crate::hypercore::{Baseload, Hypergraph};

/// Splits one unit over `r.len()` slots as `out[i] = (λ - r[i])⁺` with
/// `Σ out = 1`, returning the level `λ`. Exact: `λ` comes from scanning the
/// sorted breakpoints, no inner iteration.
pub fn water_fill(r: &[f64], out: &mut [f64]) -> f64 {
    debug_assert_eq!(r.len(), out.len());
    let mut sorted: Vec<f64> = r.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let mut prefix = 0.0;
    let mut level = f64::NAN;
    for m in 1..=sorted.len() {
        prefix += sorted[m - 1];
        level = (1.0 + prefix) / m as f64;
        if m == sorted.len() || level <= sorted[m] {
            break;
        }
    }
    for (o, &ri) in out.iter_mut().zip(r) {
        *o = (level - ri).max(0.0);
    }
    level
}

/// Re-splits edge `e` to minimize `Σ_i ∂_bθ(i)²` with every other edge held fixed.
pub fn rebalance_edge(theta: &Allocation, h: &Hypergraph, b: &Baseload, e: usize) -> Result<Allocation> {
    let current = super::loads(h, theta, b)?;
    if e >= h.num_edges() {
        return Err(Error::InvalidParam(format!("edge {e} out of range")));
    }
    let mut out = theta.clone();
    let mut ld = current.loads;
    fill_edge_in_place(h, e, &mut out.theta[e], &mut ld, &mut Vec::new());
    Ok(out)
}

pub(super) fn fill_edge_in_place(h: &Hypergraph, e: usize, row: &mut [f64], ld: &mut [f64], scratch: &mut Vec<f64>) {
    let edge = h.edge(e);
    scratch.clear();
    scratch.extend(edge.iter().zip(row.iter()).map(|(&v, &x)| ld[v] - x));
    water_fill(scratch, row);
    for ((&v, &x), &r) in edge.iter().zip(row.iter()).zip(scratch.iter()) {
        ld[v] = r + x;
    }
}

/// Balanced allocation from the uniform start.
pub fn balance(h: &Hypergraph, b: &Baseload, params: &SolveParams) -> Result<(Allocation, LoadVector)> {
    balance_from(h, b, Allocation::uniform(h), params)
}

/// Balanced allocation by edge water-filling sweeps from `init`, stopping once
/// a full sweep moves no load by more than `params.tol`.
pub fn balance_from(
    h: &Hypergraph,
    b: &Baseload,
    init: Allocation,
    params: &SolveParams,
) -> Result<(Allocation, LoadVector)> {
    params.validate()?;
    if params.sweep == Sweep::Jacobi {
        return Err(Error::InvalidParam("Jacobi sweeps are only defined for ε-balancing".into()));
    }
    super::loads(h, &init, b)?;
    let mut theta = init;
    let mut ld = vec![0.0; h.n()];
    loads_into(h, &theta.theta, &b.b, &mut ld);
    let mut prev = ld.clone();
    let mut scratch = Vec::new();
    let mut delta = f64::INFINITY;
    for sweep in 0..params.max_iters {
        for e in params.edge_order(h.num_edges(), sweep) {
            fill_edge_in_place(h, e, &mut theta.theta[e], &mut ld, &mut scratch);
        }
        // fresh sums each sweep so rounding does not accumulate
        loads_into(h, &theta.theta, &b.b, &mut ld);
        delta = ld.iter().zip(&prev).map(|(a, p)| (a - p).abs()).fold(0.0, f64::max);
        if delta < params.tol {
            return Ok((theta, LoadVector { loads: ld }));
        }
        prev.copy_from_slice(&ld);
    }
    Err(Error::NoConvergence { iterations: params.max_iters, residual: delta })
}

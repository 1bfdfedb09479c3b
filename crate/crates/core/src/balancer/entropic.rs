use super::allocation::loads_into;
use super::{Allocation, SolveParams, Sweep};
use crate::error::{Error, Result};
use crate::hypercore::{Baseload, Hypergraph};

/// Solves `x + ε ln x = y` for `x > 0`.
fn inverse_entropic(y: f64, eps: f64) -> f64 {
    // u = ln x solves e^u + εu = y; start to the right of the root so the
    // Newton iterates of this convex increasing map decrease monotonically.
    let mut u = ((y - 1.0) / (1.0 + eps)).min(y / eps);
    if y > 0.0 {
        u = u.min(y.ln().max(0.0));
    }
    for _ in 0..200 {
        let eu = u.exp();
        let step = (eu + eps * u - y) / (eu + eps);
        u -= step;
        if step.abs() <= 1e-15 * (1.0 + u.abs()) {
            break;
        }
    }
    u.exp()
}

/// The entropic analogue of [`super::water_fill`]: finds `x` on the simplex with
/// `x_i = exp(-(r_i + x_i)/ε) / Σ_j exp(-(r_j + x_j)/ε)`, i.e. the exact
/// ε-balanced split of one edge whose other loads `r` are held fixed.
pub fn entropic_fill(r: &[f64], eps: f64, out: &mut [f64]) {
    let k = r.len();
    let g_uniform = 1.0 / k as f64 + eps * (1.0 / k as f64).ln();
    let (rmin, rmax) = r.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)));
    let (mut lo, mut hi) = (rmin + g_uniform, rmax + g_uniform);
    let mut level = hi;
    for _ in 0..300 {
        let mut s = -1.0;
        let mut ds = 0.0;
        for (o, &ri) in out.iter_mut().zip(r) {
            let x = inverse_entropic(level - ri, eps);
            *o = x;
            s += x;
            ds += x / (x + eps);
        }
        if s == 0.0 {
            break;
        }
        if s > 0.0 {
            hi = level;
        } else {
            lo = level;
        }
        let newton = level - s / ds;
        level = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if s.abs() < 1e-15 || hi - lo <= 4.0 * f64::EPSILON * (1.0 + level.abs()) {
            break;
        }
    }
    let total: f64 = out.iter().sum();
    for o in out.iter_mut() {
        *o /= total;
    }
}

fn softmax_row(edge: &[usize], ld: &[f64], eps: f64, out: &mut [f64]) {
    let m = edge.iter().map(|&v| ld[v]).fold(f64::INFINITY, f64::min);
    let mut s = 0.0;
    for (o, &v) in out.iter_mut().zip(edge) {
        *o = (-(ld[v] - m) / eps).exp();
        s += *o;
    }
    for o in out.iter_mut() {
        *o /= s;
    }
}

/// Largest deviation from the ε-balance equation over all edge-vertex pairs.
pub fn epsilon_residual(h: &Hypergraph, theta: &Allocation, b: &Baseload, eps: f64) -> Result<f64> {
    let ld = super::loads(h, theta, b)?.loads;
    let mut row = Vec::new();
    let mut worst: f64 = 0.0;
    for (e, cur) in h.edges().iter().zip(&theta.theta) {
        row.resize(e.len(), 0.0);
        softmax_row(e, &ld, eps, &mut row);
        worst = cur.iter().zip(&row).map(|(a, b)| (a - b).abs()).fold(worst, f64::max);
    }
    Ok(worst)
}

/// The ε-balanced allocation with baseload `b`, from the uniform start.
pub fn epsilon_balance(h: &Hypergraph, b: &Baseload, params: &SolveParams) -> Result<Allocation> {
    epsilon_balance_from(h, b, Allocation::uniform(h), params)
}

pub fn epsilon_balance_from(h: &Hypergraph, b: &Baseload, init: Allocation, params: &SolveParams) -> Result<Allocation> {
    params.validate()?;
    let eps = params.epsilon;
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::InvalidParam(format!("epsilon must be positive, got {eps}")));
    }
    super::loads(h, &init, b)?;
    let mut theta = init;
    let mut ld = vec![0.0; h.n()];
    loads_into(h, &theta.theta, &b.b, &mut ld);
    let mut prev = ld.clone();
    let mut scratch = Vec::new();
    let mut target = Vec::new();
    let mut delta = f64::INFINITY;
    for sweep in 0..params.max_iters {
        if params.sweep == Sweep::Jacobi {
            let alpha = params.damping;
            for (e, row) in h.edges().iter().zip(theta.theta.iter_mut()) {
                target.resize(e.len(), 0.0);
                softmax_row(e, &prev, eps, &mut target);
                for (x, t) in row.iter_mut().zip(&target) {
                    *x = (1.0 - alpha) * *x + alpha * t;
                }
            }
        } else {
            for e in params.edge_order(h.num_edges(), sweep) {
                let edge = h.edge(e);
                let row = &mut theta.theta[e];
                scratch.clear();
                scratch.extend(edge.iter().zip(row.iter()).map(|(&v, &x)| ld[v] - x));
                entropic_fill(&scratch, eps, row);
                for ((&v, &x), &r) in edge.iter().zip(row.iter()).zip(scratch.iter()) {
                    ld[v] = r + x;
                }
            }
        }
        loads_into(h, &theta.theta, &b.b, &mut ld);
        delta = ld.iter().zip(&prev).map(|(a, p)| (a - p).abs()).fold(0.0, f64::max);
        if delta < params.tol {
            return Ok(theta);
        }
        prev.copy_from_slice(&ld);
    }
    Err(Error::NoConvergence { iterations: params.max_iters, residual: delta })
}

/// Load at `i` under the ε-balanced allocation when `t` is injected at `i` as baseload.
pub fn response_epsilon(h: &Hypergraph, i: usize, t: f64, params: &SolveParams) -> Result<f64> {
    if i >= h.n() {
        return Err(Error::VertexOutOfRange { vertex: i, n: h.n() });
    }
    let b = Baseload::point(h.n(), i, t);
    let theta = epsilon_balance(h, &b, params)?;
    Ok(super::loads(h, &theta, &b)?.loads[i])
}

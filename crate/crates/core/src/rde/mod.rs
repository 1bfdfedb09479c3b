//! Population dynamics for the limiting distributional fixed point.
//!
//! For a type law `P` and level `t`, the laws `{Q_k}` (one per edge size with
//! `E[Γ(k)] > 0`) satisfy `Q_k = law of t − Σ_{k'} Σ_{i≤Γ(k')} [1 − X⁺_{k',i,1} − … − X⁺_{k',i,k'−1}]₀¹`
//! with `Γ ~ P̂_k` and independent `X_{k',·,·} ~ Q_{k'}`. Each `Q_k` is
//! represented by a pool of samples that is fully resampled every iteration,
//! starting from the point mass at `t`. The mean-excess function of
//! `UGWT(P)` is then
//!
//! ```text
//! Φ(t) = Σ_k E[Γ(k)]/k · P(X⁺_{k,1} + … + X⁺_{k,k} < 1) − t · P(Σ_k Σ_{i≤Γ(k)} Y_{k,i} > t)
//! ```
//!
//! with `Γ ~ P` and `Y_{k,i} = [1 − (Z⁺_1 + … + Z⁺_{k−1})]₀¹`, `Z ~ Q_k`.

mod ks;

pub use ks::kolmogorov_distance;

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::genmodel::{TypeDistribution, TypeSampler, TypeVector};
use crate::seed;

/// Sample pools approximating `{Q_k}`.
#[derive(Debug, Clone, PartialEq)]
pub struct RdePool {
    pub pools: BTreeMap<usize, Vec<f64>>,
    pub iterations: usize,
}

impl RdePool {
    /// Every pool is the point mass at `t`.
    pub fn constant(p: &TypeDistribution, t: f64, size: usize) -> Self {
        let pools = p.sizes().into_iter().map(|k| (k, vec![t; size])).collect();
        RdePool { pools, iterations: 0 }
    }

    pub fn size(&self) -> usize {
        self.pools.values().next().map_or(0, Vec::len)
    }

    /// `k,value` rows under a header.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,value\n");
        for (k, pool) in &self.pools {
            for v in pool {
                writeln!(out, "{k},{v}").unwrap();
            }
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut pools: BTreeMap<usize, Vec<f64>> = BTreeMap::new();
        for (ln, line) in text.lines().enumerate().skip(1) {
            if line.trim().is_empty() {
                continue;
            }
            let (k, v) = line.split_once(',').ok_or_else(|| Error::Parse(format!("line {}: expected k,value", ln + 1)))?;
            let k: usize = k.trim().parse().map_err(|_| Error::Parse(format!("line {}: bad size", ln + 1)))?;
            let v: f64 = v.trim().parse().map_err(|_| Error::Parse(format!("line {}: bad value", ln + 1)))?;
            pools.entry(k).or_default().push(v);
        }
        Ok(RdePool { pools, iterations: 0 })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RdeParams {
    pub pool_size: usize,
    pub max_iterations: usize,
    /// Stop once successive pools are this close in Kolmogorov distance.
    pub threshold: f64,
    /// Monte-Carlo draws per term of the mean-excess estimate.
    pub samples: usize,
    /// Bisection width for the limiting maximum load.
    pub rho_tol: f64,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for RdeParams {
    fn default() -> Self {
        RdeParams {
            pool_size: 100_000,
            max_iterations: 200,
            threshold: 5e-3,
            samples: 100_000,
            rho_tol: 1e-2,
            seed: 0,
            exec: Exec::Parallel,
        }
    }
}

impl RdeParams {
    fn validate(&self) -> Result<()> {
        if self.pool_size == 0 || self.max_iterations == 0 || self.samples == 0 {
            return Err(Error::InvalidParam("pool size, iterations and samples must be positive".into()));
        }
        if !(self.threshold > 0.0) || !(self.rho_tol > 0.0) {
            return Err(Error::InvalidParam("threshold and rho_tol must be positive".into()));
        }
        Ok(())
    }
}

#[inline]
fn clamp01(x: f64) -> f64 {
    x.clamp(0.0, 1.0)
}

fn draw<R: Rng + ?Sized>(pool: &[f64], rng: &mut R) -> f64 {
    pool[rng.gen_range(0..pool.len())]
}

/// Share of one size-`k` edge left for the vertex: `[1 − Σ_{j<k} X_j⁺]₀¹`.
fn edge_share<R: Rng + ?Sized>(pool: &[f64], k: usize, rng: &mut R) -> f64 {
    let taken: f64 = (1..k).map(|_| draw(pool, rng).max(0.0)).sum();
    clamp01(1.0 - taken)
}

fn total_share<R: Rng + ?Sized>(pools: &RdePool, ty: &TypeVector, rng: &mut R) -> f64 {
    ty.iter()
        .map(|(k, c)| {
            let pool = &pools.pools[&k];
            (0..c).map(|_| edge_share(pool, k, rng)).sum::<f64>()
        })
        .sum()
}

/// One population-dynamics step. Entry `j` of the new size-`k` pool uses the
/// stream derived from `(seed, iteration, k, j)`, so the result is the same
/// sequentially and in parallel.
pub fn rde_iterate(p: &TypeDistribution, t: f64, pools: &RdePool, seed: u64, exec: Exec) -> RdePool {
    let sampler = TypeSampler::new(p);
    rde_iterate_with(&sampler, t, pools, seed, exec)
}

fn rde_iterate_with(sampler: &TypeSampler, t: f64, pools: &RdePool, seed: u64, exec: Exec) -> RdePool {
    let it = pools.iterations as u64;
    let next = pools
        .pools
        .iter()
        .map(|(&k, old)| {
            let mut fresh = vec![0.0; old.len()];
            exec.fill_indexed(&mut fresh, |j| {
                let mut rng = seed::rng_at(seed, &[it, k as u64, j as u64]);
                let gamma = sampler.sample_biased(k, &mut rng);
                t - total_share(pools, &gamma, &mut rng)
            });
            (k, fresh)
        })
        .collect();
    RdePool { pools: next, iterations: pools.iterations + 1 }
}

/// Initial pool state. The update map is monotone (larger inputs leave less
/// of each edge, hence larger outputs) and every value lies in
/// `[t − max degree, t]`, so the top start converges to the largest fixed
/// point and the bottom start to the smallest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Start {
    Top,
    Bottom,
}

impl Start {
    fn value(self, p: &TypeDistribution, t: f64) -> f64 {
        match self {
            Start::Top => t,
            Start::Bottom => t - p.max_degree() as f64,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RdeDiagnostics {
    pub start: Start,
    pub iterations: usize,
    /// Largest per-pool Kolmogorov distance after each iteration.
    pub trajectory: Vec<f64>,
    pub converged: bool,
}

/// Iterates from the point mass at `t` until successive pools are within
/// `params.threshold` in Kolmogorov distance or the iteration cap is hit.
/// Hitting the cap is reported in the diagnostics, not as an error.
pub fn rde_solve(p: &TypeDistribution, t: f64, params: &RdeParams) -> Result<(RdePool, RdeDiagnostics)> {
    rde_solve_from(p, t, Start::Top, params)
}

pub fn rde_solve_from(p: &TypeDistribution, t: f64, start: Start, params: &RdeParams) -> Result<(RdePool, RdeDiagnostics)> {
    params.validate()?;
    let sampler = TypeSampler::new(p);
    let mut pools = RdePool::constant(p, start.value(p, t), params.pool_size);
    let mut trajectory = Vec::new();
    let mut converged = pools.pools.is_empty();
    while !converged && pools.iterations < params.max_iterations {
        let next = rde_iterate_with(&sampler, t, &pools, params.seed, params.exec);
        let dist = pools
            .pools
            .iter()
            .map(|(k, old)| kolmogorov_distance(old, &next.pools[k]))
            .fold(0.0, f64::max);
        trajectory.push(dist);
        pools = next;
        converged = dist <= params.threshold;
    }
    let diag = RdeDiagnostics { start, iterations: pools.iterations, trajectory, converged };
    Ok((pools, diag))
}

/// Monte-Carlo estimate of the mean-excess function at `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeanExcess {
    pub t: f64,
    pub phi: f64,
    pub stderr: f64,
    pub term1: f64,
    pub term2: f64,
}

impl MeanExcess {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("mean excess serializes")
    }

    /// Positive beyond three standard errors.
    pub fn is_positive(&self) -> bool {
        self.phi > 3.0 * self.stderr
    }
}

fn bernoulli_estimate(hits: usize, m: usize) -> (f64, f64) {
    let p = hits as f64 / m as f64;
    (p, p * (1.0 - p) / m as f64)
}

/// Evaluates both terms of the mean-excess formula with `samples` draws each.
pub fn mean_excess(p: &TypeDistribution, t: f64, pools: &RdePool, samples: usize, seed: u64, exec: Exec) -> Result<MeanExcess> {
    if samples == 0 {
        return Err(Error::InvalidParam("samples must be positive".into()));
    }
    let sampler = TypeSampler::new(p);
    let mut term1 = 0.0;
    let mut var1 = 0.0;
    for (&k, pool) in &pools.pools {
        let weight = p.mean(k) / k as f64;
        let hits = exec
            .map_indexed(samples, |j| {
                let mut rng = seed::rng_at(seed, &[1, k as u64, j as u64]);
                let s: f64 = (0..k).map(|_| draw(pool, &mut rng).max(0.0)).sum();
                s < 1.0
            })
            .into_iter()
            .filter(|&h| h)
            .count();
        let (prob, var) = bernoulli_estimate(hits, samples);
        term1 += weight * prob;
        var1 += weight * weight * var;
    }
    for k in p.sizes() {
        if !pools.pools.contains_key(&k) {
            return Err(Error::Shape(format!("no pool for edge size {k}")));
        }
    }
    let hits = exec
        .map_indexed(samples, |j| {
            let mut rng = seed::rng_at(seed, &[2, j as u64]);
            let gamma = sampler.sample(&mut rng).clone();
            total_share(pools, &gamma, &mut rng) > t
        })
        .into_iter()
        .filter(|&h| h)
        .count();
    let (term2, var2) = bernoulli_estimate(hits, samples);
    Ok(MeanExcess { t, phi: term1 - t * term2, stderr: (var1 + t * t * var2).sqrt(), term1, term2 })
}

/// Solves from both extremal starts and keeps the one with the larger
/// mean excess: `Φ(t)` is a maximum over all fixed points, and the all-`t`
/// start alone can land on a non-maximizing one (e.g. regular hypertrees).
pub fn solve_best(p: &TypeDistribution, t: f64, params: &RdeParams) -> Result<(RdePool, RdeDiagnostics, MeanExcess)> {
    let mut best: Option<(RdePool, RdeDiagnostics, MeanExcess)> = None;
    for start in [Start::Top, Start::Bottom] {
        let (pools, diag) = rde_solve_from(p, t, start, params)?;
        let me = mean_excess(p, t, &pools, params.samples, seed::derive(params.seed, &[0xE5]), params.exec)?;
        if best.as_ref().is_none_or(|b| me.phi > b.2.phi) {
            best = Some((pools, diag, me));
        }
    }
    Ok(best.expect("two starts"))
}

/// [`solve_best`] without the pools.
pub fn mean_excess_at(p: &TypeDistribution, t: f64, params: &RdeParams) -> Result<(MeanExcess, RdeDiagnostics)> {
    let (_, diag, me) = solve_best(p, t, params)?;
    Ok((me, diag))
}

/// `sup{t : Φ(t) > 0}` by bisection on `[0, max degree]`, declaring
/// `Φ(t) > 0` when the estimate exceeds three standard errors.
pub fn rho_limit(p: &TypeDistribution, params: &RdeParams) -> Result<f64> {
    params.validate()?;
    let positive = |t: f64, step: u64| -> Result<bool> {
        let local = RdeParams { seed: seed::derive(params.seed, &[0x70, step]), ..*params };
        Ok(mean_excess_at(p, t, &local)?.0.is_positive())
    };
    let (mut lo, mut hi) = (0.0, p.max_degree() as f64);
    if hi == 0.0 || !positive(lo, 0)? {
        return Ok(0.0);
    }
    let mut step = 1;
    while hi - lo > params.rho_tol {
        let mid = 0.5 * (lo + hi);
        if positive(mid, step)? {
            lo = mid;
        } else {
            hi = mid;
        }
        step += 1;
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64) -> RdeParams {
        RdeParams { pool_size: 20_000, samples: 20_000, seed, ..RdeParams::default() }
    }

    fn two_point_2() -> TypeDistribution {
        TypeDistribution::new(vec![(TypeVector::unit(2), 0.5), (TypeVector::from_counts([(2, 2)]), 0.5)]).unwrap()
    }

    #[test]
    fn degenerate_law_is_fixed_after_one_step() {
        let p = TypeDistribution::point(TypeVector::unit(2));
        let start = RdePool { pools: BTreeMap::from([(2, vec![-3.0, 0.4, 9.0])]), iterations: 0 };
        let next = rde_iterate(&p, 0.3, &start, 1, Exec::Sequential);
        assert_eq!(next.pools[&2], vec![0.3; 3]);
        let (pools, diag) = rde_solve(&p, 0.3, &small(1)).unwrap();
        assert!(pools.pools[&2].iter().all(|&x| x == 0.3));
        assert_eq!(diag.iterations, 1);
        assert!(diag.converged);
        let (pools, _) = rde_solve_from(&p, 0.3, Start::Bottom, &small(1)).unwrap();
        assert!(pools.pools[&2].iter().all(|&x| x == 0.3));
    }

    #[test]
    fn regular_hypertree_needs_the_bottom_start() {
        // every vertex in three size-5 edges: loads are 3/5, Φ(t) = (3/5 − t)⁺
        let p = TypeDistribution::point(TypeVector::from_counts([(5, 3)]));
        let (top, _) = rde_solve_from(&p, 0.4, Start::Top, &small(5)).unwrap();
        assert!(top.pools[&5].iter().all(|&x| x == 0.4));
        let (bottom, _) = rde_solve_from(&p, 0.4, Start::Bottom, &small(5)).unwrap();
        assert!(bottom.pools[&5].iter().all(|&x| (x + 1.6).abs() < 1e-12));
        for t in [0.0, 0.3, 0.5, 0.7] {
            let (me, _) = mean_excess_at(&p, t, &small(5)).unwrap();
            assert!((me.phi - (0.6f64 - t).max(0.0)).abs() < 1e-12, "t={t}: {me:?}");
        }
        assert!((rho_limit(&p, &small(5)).unwrap() - 0.6).abs() < 0.02);
    }

    #[test]
    fn one_step_matches_enumeration() {
        // P̂_2 puts 1/3 on Γ = 0 and 2/3 on Γ = e_2; from the pool δ_0 at t = 0
        // the update is 0 − Γ(2)·[1 − 0]₀¹ ∈ {0, −1}.
        let p = two_point_2();
        let start = RdePool::constant(&p, 0.0, 60_000);
        let next = rde_iterate(&p, 0.0, &start, 4, Exec::Parallel);
        let pool = &next.pools[&2];
        assert!(pool.iter().all(|&x| x == 0.0 || x == -1.0));
        let zeros = pool.iter().filter(|&&x| x == 0.0).count() as f64 / pool.len() as f64;
        let sigma = (1.0 / 3.0 * 2.0 / 3.0 / pool.len() as f64).sqrt();
        assert!((zeros - 1.0 / 3.0).abs() < 3.0 * sigma, "{zeros}");
    }

    #[test]
    fn iterate_is_worker_independent() {
        let p = two_point_2();
        let start = RdePool::constant(&p, 0.2, 5_000);
        let a = rde_iterate(&p, 0.2, &start, 8, Exec::Sequential);
        let b = rde_iterate(&p, 0.2, &start, 8, Exec::Parallel);
        assert_eq!(a, b);
    }

    #[test]
    fn threshold_one_stops_after_one_iteration() {
        let p = two_point_2();
        let params = RdeParams { threshold: 1.0, ..small(2) };
        let (_, diag) = rde_solve(&p, 0.1, &params).unwrap();
        assert_eq!(diag.iterations, 1);
    }

    #[test]
    fn closed_form_single_edge() {
        let p = TypeDistribution::point(TypeVector::unit(2));
        let (me, _) = mean_excess_at(&p, 0.2, &small(3)).unwrap();
        assert!((me.phi - 0.3).abs() < 1e-12 && me.stderr == 0.0);
        let (me, _) = mean_excess_at(&p, 0.8, &small(3)).unwrap();
        assert_eq!(me.phi, 0.0);
        let (me, _) = mean_excess_at(&p, -2.0, &small(3)).unwrap();
        assert!((me.phi - 2.5).abs() < 1e-12);
    }

    #[test]
    fn rho_limit_closed_forms() {
        let zero = TypeDistribution::point(TypeVector::zero());
        assert_eq!(rho_limit(&zero, &small(4)).unwrap(), 0.0);
        for k in [2, 3, 4] {
            let p = TypeDistribution::point(TypeVector::unit(k));
            let r = rho_limit(&p, &small(4)).unwrap();
            assert!((r - 1.0 / k as f64).abs() < 0.02, "k={k}: {r}");
        }
    }

    #[test]
    fn pool_csv_roundtrip() {
        let pools = RdePool { pools: BTreeMap::from([(2, vec![0.5, -1.25]), (3, vec![0.0])]), iterations: 0 };
        let csv = pools.to_csv();
        assert_eq!(csv, "k,value\n2,0.5\n2,-1.25\n3,0\n");
        assert_eq!(RdePool::from_csv(&csv).unwrap(), pools);
        assert!(RdePool::from_csv("k,value\n2;3\n").is_err());
    }

    #[test]
    fn rejects_bad_params() {
        let p = two_point_2();
        assert!(rde_solve(&p, 0.0, &RdeParams { pool_size: 0, ..small(0) }).is_err());
        assert!(mean_excess(&p, 0.0, &RdePool::constant(&p, 0.0, 10), 0, 0, Exec::Sequential).is_err());
    }

    #[test]
    fn pool_law_is_seed_invariant() {
        let p = two_point_2();
        let a = rde_solve(&p, 0.4, &small(11)).unwrap().0;
        let b = rde_solve(&p, 0.4, &small(12)).unwrap().0;
        let again = rde_solve(&p, 0.4, &small(11)).unwrap().0;
        assert_eq!(a, again);
        // two-sample KS at level 0.01: c(α)·sqrt(2/N) with c = 1.628
        let crit = 1.628 * (2.0 / a.size() as f64).sqrt();
        assert!(kolmogorov_distance(&a.pools[&2], &b.pools[&2]) < crit);
    }

    #[test]
    fn symmetric_two_point_converges() {
        let p = two_point_2();
        let (_, diag) = rde_solve(&p, 0.5, &small(13)).unwrap();
        assert!(diag.converged, "{:?}", diag.trajectory);
    }

    #[test]
    fn phi_is_nonincreasing_convex_with_slope_at_least_minus_one() {
        let p = TypeDistribution::new(vec![(TypeVector::unit(2), 0.5), (TypeVector::from_counts([(2, 1), (3, 1)]), 0.5)]).unwrap();
        let grid: Vec<f64> = (0..9).map(|i| -0.4 + 0.15 * i as f64).collect();
        let est: Vec<MeanExcess> = grid.iter().map(|&t| mean_excess_at(&p, t, &small(14)).unwrap().0).collect();
        for w in est.windows(2) {
            let slack = 3.0 * (w[0].stderr + w[1].stderr) + 1e-12;
            assert!(w[1].phi <= w[0].phi + slack, "{w:?}");
            assert!(w[1].phi - w[0].phi >= -(w[1].t - w[0].t) - slack, "{w:?}");
        }
        for w in est.windows(3) {
            let slack = 3.0 * (w[0].stderr + 2.0 * w[1].stderr + w[2].stderr) + 1e-12;
            assert!(w[0].phi + w[2].phi - 2.0 * w[1].phi >= -slack, "{w:?}");
        }
    }
}

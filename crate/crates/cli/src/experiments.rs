use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::bail;
use clap::Args;
use serde::Serialize;
use serde_json::json;

use hyperbalance::exec::Exec;
use hyperbalance::genmodel::{sample_erased, TypeDistribution, TypeSampler};
use hyperbalance::lwc::{neighborhood_census, tv_distance, ugwt_census};
use hyperbalance::maxload::max_density_flow;
use hyperbalance::rde::{mean_excess_at, rho_limit, solve_best, RdeParams};
use hyperbalance::{seed, Hypergraph};

use crate::commands::read_distribution;
use crate::output::RunDir;
use crate::{AssertionFailed, Global};

/// The erased configuration sample for grid point `n`, replicate `rep`.
/// Shared by `lwc` and `experiment-maxload` so both see the same graphs.
fn replicate(sampler: &TypeSampler, n: usize, rep: usize, base: u64) -> hyperbalance::Result<Hypergraph> {
    sample_erased(sampler, n, &mut seed::rng_at(base, &[1, n as u64, rep as u64]))
}

fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let m = s.len() / 2;
    if s.len().is_multiple_of(2) {
        0.5 * (s[m - 1] + s[m])
    } else {
        s[m]
    }
}

fn nonincreasing(v: &[f64]) -> bool {
    v.windows(2).all(|w| w[1] <= w[0])
}

/// Runs `f` over the `(n, rep)` grid, replicates in parallel when asked.
fn over_grid<T: Send, F>(grid: &[usize], reps: usize, exec: Exec, f: F) -> anyhow::Result<Vec<Vec<T>>>
where
    F: Fn(usize, usize) -> hyperbalance::Result<T> + Sync + Send,
{
    grid.iter()
        .map(|&n| exec.map_indexed(reps, |r| f(n, r)).into_iter().collect::<hyperbalance::Result<Vec<T>>>())
        .collect::<hyperbalance::Result<_>>()
        .map_err(Into::into)
}

fn check_grid(grid: &[usize], reps: usize) -> anyhow::Result<()> {
    if grid.is_empty() || reps == 0 {
        bail!("--n-grid must be non-empty and --reps positive");
    }
    Ok(())
}

#[derive(Args, Debug, Serialize)]
pub struct LwcArgs {
    /// Type distribution JSON.
    pub p: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "200,800,3200")]
    pub n_grid: Vec<usize>,
    #[arg(long, default_value_t = 2)]
    pub depth: usize,
    #[arg(long, default_value_t = 10)]
    pub reps: usize,
    /// UGWT draws for the reference census.
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    /// Exit 3 unless medians are non-increasing in n and the last median
    /// TV distance and non-tree mass are below 0.05.
    #[arg(long)]
    pub assert: bool,
}

pub fn lwc(a: &LwcArgs, g: &Global, run: &mut RunDir) -> anyhow::Result<()> {
    check_grid(&a.n_grid, a.reps)?;
    let p = read_distribution(&a.p)?;
    let sampler = TypeSampler::new(&p);
    let reference = ugwt_census(&p, a.depth, a.samples, seed::derive(g.seed, &[2]), g.exec())?;
    let rows = over_grid(&a.n_grid, a.reps, g.exec(), |n, rep| {
        let h = replicate(&sampler, n, rep, g.seed)?;
        let census = neighborhood_census(&h, a.depth, Exec::Sequential);
        Ok((tv_distance(&census, &reference), census.non_tree_mass()))
    })?;

    let mut detail = String::from("n[vertices],rep,tv[prob],non_tree[prob],seed\n");
    let mut summary = String::from("n[vertices],median_tv[prob],median_non_tree[prob],reps,seed\n");
    let mut medians = Vec::new();
    let mut non_tree = Vec::new();
    for (&n, per_rep) in a.n_grid.iter().zip(&rows) {
        for (rep, (tv, nt)) in per_rep.iter().enumerate() {
            writeln!(detail, "{n},{rep},{tv},{nt},{}", g.seed)?;
        }
        let tv: Vec<f64> = per_rep.iter().map(|r| r.0).collect();
        let nt: Vec<f64> = per_rep.iter().map(|r| r.1).collect();
        medians.push(median(&tv));
        non_tree.push(median(&nt));
        writeln!(summary, "{n},{},{},{},{}", medians.last().unwrap(), non_tree.last().unwrap(), a.reps, g.seed)?;
    }
    let mut census = String::from("code,mass[prob],seed\n");
    for (code, mass) in &reference.masses {
        writeln!(census, "{code},{mass},{}", g.seed)?;
    }
    run.write("tv.csv", &detail)?;
    run.write("summary.csv", &summary)?;
    run.write("ugwt_census.csv", &census)?;
    print!("{summary}");

    if a.assert {
        let (last_tv, last_nt) = (*medians.last().unwrap(), *non_tree.last().unwrap());
        if !nonincreasing(&medians) || last_tv >= 0.05 || last_nt >= 0.05 {
            return Err(AssertionFailed(format!("median TV {medians:?}, non-tree {non_tree:?}")).into());
        }
    }
    Ok(())
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct RdeOpts {
    /// Samples per pool.
    #[arg(long, default_value_t = 100_000)]
    pub pool_size: usize,
    /// Iteration cap.
    #[arg(long, default_value_t = 200)]
    pub iterations: usize,
    /// Kolmogorov distance at which successive pools count as converged.
    #[arg(long, default_value_t = 5e-3)]
    pub threshold: f64,
    /// Monte-Carlo draws per mean-excess term.
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    /// Bisection width for the limiting maximum load.
    #[arg(long, default_value_t = 1e-2)]
    pub rho_tol: f64,
}

impl RdeOpts {
    fn params(&self, seed: u64, exec: Exec) -> RdeParams {
        RdeParams {
            pool_size: self.pool_size,
            max_iterations: self.iterations,
            threshold: self.threshold,
            samples: self.samples,
            rho_tol: self.rho_tol,
            seed,
            exec,
        }
    }
}

#[derive(Args, Debug, Serialize)]
#[group(id = "mode", required = true, multiple = false, args = ["t", "t_grid", "rho"])]
pub struct RdeArgs {
    /// Type distribution JSON.
    pub p: PathBuf,
    /// Single level: writes pools, diagnostics and the mean excess.
    #[arg(long, allow_negative_numbers = true)]
    pub t: Option<f64>,
    /// `start:stop:count`, inclusive on both ends.
    #[arg(long, allow_hyphen_values = true)]
    pub t_grid: Option<String>,
    /// Limiting maximum load by bisection.
    #[arg(long)]
    pub rho: bool,
    #[command(flatten)]
    pub opts: RdeOpts,
}

fn parse_grid(spec: &str) -> anyhow::Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let [a, b, c] = parts[..] else { bail!("--t-grid expects start:stop:count, got {spec:?}") };
    let (start, stop): (f64, f64) = (a.parse()?, b.parse()?);
    let count: usize = c.parse()?;
    if count == 0 || !start.is_finite() || !stop.is_finite() {
        bail!("--t-grid needs finite ends and a positive count");
    }
    if count == 1 {
        return Ok(vec![start]);
    }
    Ok((0..count).map(|i| start + (stop - start) * i as f64 / (count - 1) as f64).collect())
}

pub fn rde(a: &RdeArgs, g: &Global, run: &mut RunDir) -> anyhow::Result<()> {
    let p: TypeDistribution = read_distribution(&a.p)?;
    let exec = g.exec();
    if let Some(t) = a.t {
        let params = a.opts.params(g.seed, exec);
        let (pools, diag, me) = solve_best(&p, t, &params)?;
        if !diag.converged {
            eprintln!("warning: pools did not converge within {} iterations", diag.iterations);
        }
        run.write("pools.csv", &pools.to_csv())?;
        run.write_json("diagnostics.json", &diag)?;
        run.write("phi.json", &(me.to_json() + "\n"))?;
        println!("{}", me.to_json());
    } else if let Some(spec) = &a.t_grid {
        let mut csv = String::from("t[load],phi[load],stderr[load],term1[load],term2[prob],iterations,converged,seed\n");
        for (i, t) in parse_grid(spec)?.into_iter().enumerate() {
            let params = a.opts.params(seed::derive(g.seed, &[i as u64]), exec);
            let (me, diag) = mean_excess_at(&p, t, &params)?;
            writeln!(
                csv,
                "{t},{},{},{},{},{},{},{}",
                me.phi, me.stderr, me.term1, me.term2, diag.iterations, diag.converged, g.seed
            )?;
        }
        run.write("phi.csv", &csv)?;
        print!("{csv}");
    } else {
        let rho = rho_limit(&p, &a.opts.params(g.seed, exec))?;
        let out = json!({ "rho": rho, "rho_tol": a.opts.rho_tol });
        run.write("rho.json", &(out.to_string() + "\n"))?;
        println!("{out}");
    }
    Ok(())
}

#[derive(Args, Debug, Serialize)]
pub struct MaxloadExperimentArgs {
    /// Type distribution JSON.
    pub p: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "200,800,3200")]
    pub n_grid: Vec<usize>,
    #[arg(long, default_value_t = 10)]
    pub reps: usize,
    /// Exit 3 unless |median − limit| is non-increasing in n and below 0.1 at the last n.
    #[arg(long)]
    pub assert: bool,
    #[command(flatten)]
    pub opts: RdeOpts,
}

pub fn experiment_maxload(a: &MaxloadExperimentArgs, g: &Global, run: &mut RunDir) -> anyhow::Result<()> {
    check_grid(&a.n_grid, a.reps)?;
    let p = read_distribution(&a.p)?;
    let sampler = TypeSampler::new(&p);
    let limit = rho_limit(&p, &a.opts.params(seed::derive(g.seed, &[3]), g.exec()))?;
    let rows = over_grid(&a.n_grid, a.reps, g.exec(), |n, rep| {
        Ok(max_density_flow(&replicate(&sampler, n, rep, g.seed)?)?.rho())
    })?;

    let mut detail = String::from("n[vertices],rep,rho_finite[load],seed\n");
    let mut summary = String::from("n[vertices],median_rho_finite[load],rho_limit[load],abs_gap[load],reps,seed\n");
    let mut gaps = Vec::new();
    for (&n, per_rep) in a.n_grid.iter().zip(&rows) {
        for (rep, rho) in per_rep.iter().enumerate() {
            writeln!(detail, "{n},{rep},{rho},{}", g.seed)?;
        }
        let m = median(per_rep);
        gaps.push((m - limit).abs());
        writeln!(summary, "{n},{m},{limit},{},{},{}", gaps.last().unwrap(), a.reps, g.seed)?;
    }
    run.write("maxload.csv", &detail)?;
    run.write("summary.csv", &summary)?;
    print!("{summary}");

    if a.assert && (!nonincreasing(&gaps) || *gaps.last().unwrap() >= 0.1) {
        return Err(AssertionFailed(format!("|median − limit| over the grid: {gaps:?}")).into());
    }
    Ok(())
}

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::Args;
use serde::Serialize;
use serde_json::json;

use hyperbalance::balancer::{self, verify_balanced, SolveParams};
use hyperbalance::genmodel::{sample_config, sample_gwt_k, sample_ugwt, TypeDistribution, TypeSampler, TypeSequence};
use hyperbalance::maxload::{self, max_density_bruteforce, max_density_flow};
use hyperbalance::{seed, Baseload, Hypergraph, MultiHypergraph};

use crate::output::{read, RunDir};
use crate::{Global, MaxloadMethod, Model};

/// Verification tolerance for the balance report.
const VERIFY_TOL: f64 = 1e-8;

pub fn read_hypergraph(path: &Path) -> anyhow::Result<Hypergraph> {
    let text = read(path)?;
    let multi = serde_json::from_str::<serde_json::Value>(&text).is_ok_and(|v| v["multi"] == true);
    let parsed = if multi {
        // configuration-model output: balance its erased version
        MultiHypergraph::from_json(&text).map(|m| m.erase())
    } else {
        Hypergraph::from_json(&text)
    };
    parsed.with_context(|| format!("parsing hypergraph {}", path.display()))
}

pub fn read_distribution(path: &Path) -> anyhow::Result<TypeDistribution> {
    TypeDistribution::from_json(&read(path)?).with_context(|| format!("parsing type distribution {}", path.display()))
}

#[derive(Args, Debug, Serialize)]
pub struct BalanceArgs {
    /// Hypergraph JSON (`{"n":..,"edges":[..]}`).
    pub hypergraph: PathBuf,
    /// Baseload JSON (`{"b":[..]}`); zero when omitted.
    #[arg(long)]
    pub baseload: Option<PathBuf>,
    /// Entropy weight; omit for the exact balanced allocation.
    #[arg(long)]
    pub eps: Option<f64>,
    /// Sweep-to-sweep tolerance.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 1_000_000)]
    pub max_iters: usize,
}

pub fn balance(a: &BalanceArgs, _g: &Global, run: &mut RunDir) -> anyhow::Result<()> {
    let h = read_hypergraph(&a.hypergraph)?;
    let b = match &a.baseload {
        Some(p) => Baseload::from_json(&read(p)?).context("parsing baseload")?,
        None => Baseload::zeros(h.n()),
    };
    let params = match a.eps {
        Some(eps) => SolveParams::with_epsilon(eps),
        None => SolveParams::exact(),
    }
    .tol(a.tol)
    .max_iters(a.max_iters);
    let (theta, loads) = match a.eps {
        Some(_) => {
            let theta = balancer::epsilon_balance(&h, &b, &params)?;
            let loads = balancer::loads(&h, &theta, &b)?;
            (theta, loads)
        }
        None => balancer::balance(&h, &b, &params)?,
    };
    run.write("allocation.json", &(theta.to_json() + "\n"))?;
    run.write("loads.json", &(loads.to_json() + "\n"))?;
    let report = match a.eps {
        Some(eps) => json!({
            "kind": "epsilon-balanced",
            "epsilon": eps,
            "residual": balancer::epsilon_residual(&h, &theta, &b, eps)?,
            "max_load": loads.max(),
        }),
        None => {
            let r = verify_balanced(&h, &theta, &b, VERIFY_TOL);
            json!({ "kind": "balanced", "tol": VERIFY_TOL, "report": r, "max_load": loads.max() })
        }
    };
    run.write_json("report.json", &report)?;
    println!("{}", loads.to_json());
    Ok(())
}

#[derive(Args, Debug, Serialize)]
pub struct MaxloadArgs {
    pub hypergraph: PathBuf,
    #[arg(long, value_enum, default_value_t = MaxloadMethod::Flow)]
    pub method: MaxloadMethod,
}

pub fn maxload(a: &MaxloadArgs, _g: &Global, run: &mut RunDir) -> anyhow::Result<()> {
    let h = read_hypergraph(&a.hypergraph)?;
    let text = match a.method {
        MaxloadMethod::Brute => max_density_bruteforce(&h)?.to_json(),
        MaxloadMethod::Flow => max_density_flow(&h)?.to_json(),
        MaxloadMethod::Allocation => {
            json!({ "rho": maxload::rho_finite(&h, &SolveParams::exact())? }).to_string()
        }
    };
    run.write("density.json", &(text.clone() + "\n"))?;
    println!("{text}");
    Ok(())
}

#[derive(Args, Debug, Serialize)]
pub struct SampleArgs {
    #[arg(long, value_enum)]
    pub model: Model,
    /// Type distribution JSON (`{"types":[{"counts":{..},"p":..}]}`).
    #[arg(long, conflicts_with = "types")]
    pub p: Option<PathBuf>,
    /// Explicit type sequence JSON (`{"types":[{"2":1,"3":1},..]}`), config model only.
    #[arg(long)]
    pub types: Option<PathBuf>,
    /// Vertices when drawing the type sequence from `--p`.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 2)]
    pub depth: usize,
    /// Size of the distinguished root edge for `gwtk`.
    #[arg(long)]
    pub k: Option<usize>,
    /// Drop self loops and all copies of repeated edges.
    #[arg(long)]
    pub erase: bool,
}

pub fn sample(a: &SampleArgs, g: &Global, run: &mut RunDir) -> anyhow::Result<()> {
    let mut rng = seed::rng(g.seed);
    let text = match a.model {
        Model::Config => {
            let seq = match (&a.types, &a.p, a.n) {
                (Some(path), _, _) => TypeSequence::from_json(&read(path)?).context("parsing type sequence")?,
                (None, Some(path), Some(n)) => {
                    let sampler = TypeSampler::new(&read_distribution(path)?);
                    hyperbalance::genmodel::draw_type_sequence(&sampler, n, &mut rng)?
                }
                _ => bail!("config model needs --types, or --p with --n"),
            };
            let multi = sample_config(&seq, &mut rng)?;
            if a.erase {
                multi.erase().to_json()
            } else {
                multi.to_json()
            }
        }
        Model::Ugwt | Model::Gwtk => {
            let Some(path) = &a.p else { bail!("{:?} needs --p", a.model) };
            let sampler = TypeSampler::new(&read_distribution(path)?);
            let tree = if a.model == Model::Ugwt {
                sample_ugwt(&sampler, a.depth, &mut rng)
            } else {
                let Some(k) = a.k else { bail!("gwtk needs --k") };
                sample_gwt_k(&sampler, k, a.depth, &mut rng)
            };
            tree.graph().to_json()
        }
    };
    run.write("hypergraph.json", &(text.clone() + "\n"))?;
    println!("{text}");
    Ok(())
}

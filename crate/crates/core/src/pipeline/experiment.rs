//! Integrality-gap experiments on random graph families.

use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{run_pipeline, PipelineConfig};
use crate::copies::DEFAULT_COPY_CAP;
use crate::error::{Error, Result};
use crate::exact::{exact_packing, greedy_packing, SearchStatus, DEFAULT_NODE_BUDGET};
use crate::family::{parse_family_spec, Family};
use crate::graph::Graph;
use crate::lp::{solve_fractional_packing, Arithmetic};
use crate::seed::{derive_seed, rng_from};
use crate::Rational;

pub const CSV_HEADER: &str = "n,seed,model,family,nu_star,nu_exact,exact_status,greedy,pipeline,\
gap_star_exact_over_n2,gap_star_pipeline_over_n2,runtime_ms";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GraphModel {
    Gnp { p: f64 },
    Complete,
}

impl GraphModel {
    pub fn label(&self) -> String {
        match self {
            GraphModel::Gnp { p } => format!("gnp({p})"),
            GraphModel::Complete => "complete".into(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            GraphModel::Gnp { p } if !(0.0..=1.0).contains(p) => {
                Err(Error::arg(format!("edge probability {p} is outside [0, 1]")))
            }
            _ => Ok(()),
        }
    }

    /// The graph for `(n, seed)`; independent of every other row.
    pub fn generate(&self, n: usize, seed: u64) -> Graph {
        match self {
            GraphModel::Gnp { p } => Graph::gnp(n, *p, &mut rng_from(seed, "graph", n as u64)),
            GraphModel::Complete => Graph::complete(n),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    NuStar,
    Exact,
    Greedy,
    Pipeline,
}

fn all_solvers() -> Vec<Solver> {
    vec![Solver::NuStar, Solver::Exact, Solver::Greedy, Solver::Pipeline]
}

fn default_budget() -> u64 {
    DEFAULT_NODE_BUDGET
}

fn default_lp() -> Arithmetic {
    Arithmetic::ExactRational
}

fn default_cap() -> usize {
    DEFAULT_COPY_CAP
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub model: GraphModel,
    /// Family spec, e.g. `K3` or `K3,C5`.
    pub family: String,
    pub n: Vec<usize>,
    pub seeds: Vec<u64>,
    #[serde(default = "all_solvers")]
    pub solvers: Vec<Solver>,
    #[serde(default = "default_budget")]
    pub exact_budget: u64,
    /// Skip the exact solver above this order.
    #[serde(default)]
    pub max_exact_n: Option<usize>,
    #[serde(default = "default_lp")]
    pub lp: Arithmetic,
    /// Defaults to [`default_pipeline_config`].
    #[serde(default)]
    pub pipeline: Option<PipelineConfig>,
    #[serde(default = "default_cap")]
    pub copy_cap: usize,
}

impl ExperimentSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Pipeline settings for experiment rows when the spec gives none: one
/// first-level class refined into three, γ = 0.5, δ = 0.2, β = 0.1.
pub fn default_pipeline_config() -> PipelineConfig {
    PipelineConfig::practical(1, 3, 0.5, 0.2, 0.1)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub n: usize,
    pub seed: u64,
    pub model: String,
    pub family: String,
    #[serde(skip)]
    pub nu_star: Option<Rational>,
    pub nu_star_f64: Option<f64>,
    pub nu_exact: Option<usize>,
    pub exact_status: Option<SearchStatus>,
    pub greedy: Option<usize>,
    pub pipeline: Option<usize>,
    pub gap_star_exact_over_n2: Option<f64>,
    pub gap_star_pipeline_over_n2: Option<f64>,
    pub runtime_ms: u64,
}

fn gap_over_n2(star: &Rational, integer: usize, n: usize) -> f64 {
    let gap = star - Rational::from_integer(BigInt::from(integer));
    (gap / Rational::from_integer(BigInt::from(n * n))).to_f64().unwrap_or(f64::NAN)
}

fn run_row(spec: &ExperimentSpec, family: &Family, n: usize, seed: u64, record_timing: bool) -> Result<ExperimentRow> {
    let started = Instant::now();
    let g = spec.model.generate(n, seed);
    let wants = |s| spec.solvers.contains(&s);
    let nu_star = if wants(Solver::NuStar) {
        Some(solve_fractional_packing(&g, family, spec.lp, spec.copy_cap)?.value)
    } else {
        None
    };
    let exact = if wants(Solver::Exact) && spec.max_exact_n.map_or(true, |max| n <= max) {
        Some(exact_packing(&g, family, spec.exact_budget, spec.copy_cap)?)
    } else {
        None
    };
    let greedy = if wants(Solver::Greedy) {
        Some(greedy_packing(&g, family, &mut rng_from(seed, "greedy", n as u64), spec.copy_cap)?.size())
    } else {
        None
    };
    let pipeline = if wants(Solver::Pipeline) {
        let config = spec.pipeline.clone().unwrap_or_else(default_pipeline_config);
        Some(run_pipeline(&g, family, &config, derive_seed(seed, "pipeline", n as u64))?.0.size())
    } else {
        None
    };
    let runtime_ms = if record_timing { started.elapsed().as_millis() as u64 } else { 0 };
    Ok(ExperimentRow {
        n,
        seed,
        model: spec.model.label(),
        family: family.label(),
        nu_star_f64: nu_star.as_ref().and_then(|v| v.to_f64()),
        gap_star_exact_over_n2: nu_star.as_ref().zip(exact.as_ref()).map(|(s, e)| gap_over_n2(s, e.size(), n)),
        gap_star_pipeline_over_n2: nu_star.as_ref().zip(pipeline).map(|(s, p)| gap_over_n2(s, p, n)),
        nu_star,
        nu_exact: exact.as_ref().map(|e| e.size()),
        exact_status: exact.as_ref().map(|e| e.status),
        greedy,
        pipeline,
        runtime_ms,
    })
}

/// One row per (n, seed), computed in parallel and returned in (n, seed)
/// order. With `record_timing` off the runtime column is zero, so output is
/// a pure function of the spec.
pub fn gap_experiment(spec: &ExperimentSpec, base: Option<&Path>, record_timing: bool) -> Result<Vec<ExperimentRow>> {
    spec.model.validate()?;
    let family = parse_family_spec(&spec.family, base)?;
    let mut jobs: Vec<(usize, u64)> = spec.n.iter().flat_map(|&n| spec.seeds.iter().map(move |&s| (n, s))).collect();
    jobs.sort_unstable();
    jobs.dedup();
    jobs.par_iter()
        .map(|&(n, seed)| run_row(spec, &family, n, seed, record_timing))
        .collect()
}

fn cell<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map_or_else(String::new, T::to_string)
}

pub fn rows_to_csv(rows: &[ExperimentRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let status = r.exact_status.map(|s| match s {
            SearchStatus::Optimal => "optimal",
            SearchStatus::LowerBound => "lower-bound",
        });
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.n,
            r.seed,
            r.model,
            r.family.replace(',', ";"),
            cell(&r.nu_star_f64),
            cell(&r.nu_exact),
            cell(&status),
            cell(&r.greedy),
            cell(&r.pipeline),
            cell(&r.gap_star_exact_over_n2),
            cell(&r.gap_star_pipeline_over_n2),
            r.runtime_ms
        );
    }
    out
}

/// A fresh seed for commands run without one.
pub fn draw_seed() -> u64 {
    rand::thread_rng().gen()
}

//! The randomized regularity-plus-nibble packing algorithm, end to end.
//!
//! Stages: LP → labeled weights ψ → first-level partition → random
//! refinement → ψ** (good copies) → G* and ψ* → ψ′ on the reduced graph R →
//! random coloring by R-copies → per color X_H, L_H and a nibble matching →
//! union, optional greedy pass over leftover edges, verification.

pub mod coloring;
pub mod constants;
pub mod experiment;

use std::collections::BTreeSet;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::copies::{enumerate_family_copies, for_each_partite_copy, Labeling, LabeledCopy, DEFAULT_COPY_CAP};
use crate::error::{Error, Result};
use crate::exact::{greedy_over, verify_integer_packing, IntegerPacking};
use crate::family::{Family, MaxOrder};
use crate::graph::{Edge, Graph, Vertex};
use crate::hypergraph::{
    check_pippenger_conditions, nibble_matching, NibbleParams, PippengerVerdict, UniformHypergraph,
    DEFAULT_BITE_FRACTION, DEFAULT_ROUND_CAP,
};
use crate::lp::{labeled_normalize, packing_weight, restrict_packing, solve_fractional_packing, Arithmetic, FractionalPacking};
use crate::partition::{equitable_partition, refine_partition, VertexPartition};
use crate::regularity::{
    build_reduced_graph, discard_edges, judge_pairs, project_packing_to_reduced, projection_identity_holds,
    projection_loads_ok, regularity_partition, DiscardReport, PartitionVerdict, Projection, ReducedGraph,
    RegularityMethod,
};
use crate::seed::{rng_from, Rng};
use crate::Rational;

pub use coloring::{
    build_color_subgraph, concentration_check, eligible_colors, random_coloring, restrict_to_good, ColorAssignment,
    ConcentrationReport,
};
pub use constants::{compute_constants, decimal_rational, psi_threshold, TheoreticalConstants};
pub use experiment::{
    default_pipeline_config, draw_seed, gap_experiment, rows_to_csv, ExperimentRow, ExperimentSpec, GraphModel, Solver, CSV_HEADER,
};

pub const DEFAULT_MU: f64 = 0.1;

fn default_mu() -> f64 {
    DEFAULT_MU
}

fn default_lp() -> Arithmetic {
    Arithmetic::ExactRational
}

fn default_bite() -> f64 {
    DEFAULT_BITE_FRACTION
}

fn default_rounds() -> usize {
    DEFAULT_ROUND_CAP
}

fn default_true() -> bool {
    true
}

fn default_cap() -> usize {
    DEFAULT_COPY_CAP
}

/// Either the paper's cascade from ε or direct overrides.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum Parameters {
    Theoretical {
        epsilon: f64,
        #[serde(default = "default_mu")]
        mu: f64,
        gamma: f64,
    },
    Practical {
        /// First-level class count m′; required with the equitable source.
        #[serde(default)]
        parts: Option<usize>,
        factor: usize,
        gamma: f64,
        delta: f64,
        beta: f64,
        #[serde(default = "default_mu")]
        mu: f64,
        /// Defaults to μ·δ^(k0²)/2.
        #[serde(default)]
        zeta: Option<f64>,
        /// Defaults to the largest pattern order.
        #[serde(default)]
        k0: Option<usize>,
    },
}

/// Where the first-level partition U_1..U_m′ comes from.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PartitionSource {
    #[default]
    Equitable,
    /// Iterative refinement at γ/factor, capped at `max_classes`.
    Regularity { max_classes: usize },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    #[serde(flatten)]
    pub parameters: Parameters,
    #[serde(default)]
    pub partition: PartitionSource,
    #[serde(default)]
    pub regularity_method: RegularityMethod,
    #[serde(default = "default_lp")]
    pub lp: Arithmetic,
    #[serde(default = "default_bite")]
    pub bite_fraction: f64,
    #[serde(default = "default_rounds")]
    pub round_cap: usize,
    /// Run a greedy pass over edges left unused by the color matchings.
    #[serde(default = "default_true")]
    pub leftover_greedy: bool,
    #[serde(default = "default_cap")]
    pub copy_cap: usize,
    /// Used when no seed is passed explicitly.
    #[serde(default)]
    pub seed: Option<u64>,
}

impl PipelineConfig {
    /// Practical configuration with the equitable first-level partition.
    pub fn practical(parts: usize, factor: usize, gamma: f64, delta: f64, beta: f64) -> Self {
        PipelineConfig {
            parameters: Parameters::Practical {
                parts: Some(parts),
                factor,
                gamma,
                delta,
                beta,
                mu: DEFAULT_MU,
                zeta: None,
                k0: None,
            },
            partition: PartitionSource::Equitable,
            regularity_method: RegularityMethod::default(),
            lp: Arithmetic::ExactRational,
            bite_fraction: DEFAULT_BITE_FRACTION,
            round_cap: DEFAULT_ROUND_CAP,
            leftover_greedy: true,
            copy_cap: DEFAULT_COPY_CAP,
            seed: None,
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Parameters actually used by a run.
#[derive(Clone, Debug, Serialize)]
pub struct ResolvedParameters {
    pub parts: Option<usize>,
    pub factor: usize,
    pub gamma: f64,
    /// Regularity parameter of the first-level partition (γ′).
    pub first_level_gamma: f64,
    #[serde(serialize_with = "crate::ratio::serialize")]
    pub delta: Rational,
    pub beta: f64,
    pub mu: f64,
    pub zeta: f64,
    pub k0: usize,
}

fn largest_order(family: &Family) -> usize {
    match family.max_order() {
        MaxOrder::Finite(k) => k,
        MaxOrder::Unbounded => family.patterns().iter().map(Graph::n).max().unwrap_or(0),
    }
}

fn resolve(config: &PipelineConfig, family: &Family) -> Result<(ResolvedParameters, Option<TheoreticalConstants>)> {
    match config.parameters {
        Parameters::Theoretical { epsilon, mu, gamma } => {
            let c = compute_constants(epsilon, family, mu, gamma)?;
            let factor = c.refinement_factor.ceil().to_integer().to_usize().unwrap_or(usize::MAX);
            let params = ResolvedParameters {
                parts: Some(c.min_parts()),
                factor,
                gamma,
                first_level_gamma: c.gamma_prime,
                delta: c.delta.clone(),
                beta: c.beta.to_f64().unwrap_or(0.0),
                mu,
                zeta: c.zeta,
                k0: c.k0,
            };
            Ok((params, Some(c)))
        }
        Parameters::Practical { parts, factor, gamma, delta, beta, mu, zeta, k0 } => {
            if factor == 0 {
                return Err(Error::arg("refinement factor must be at least 1"));
            }
            if !(gamma > 0.0 && gamma < 1.0) || !(delta >= 0.0 && delta <= 1.0) || !(beta > 0.0 && beta < 1.0) {
                return Err(Error::arg("need 0 < gamma < 1, 0 ≤ delta ≤ 1 and 0 < beta < 1"));
            }
            if config.partition == PartitionSource::Equitable && parts.is_none() {
                return Err(Error::arg("practical mode with the equitable partition needs `parts`"));
            }
            let k0 = k0.unwrap_or_else(|| largest_order(family));
            let zeta = zeta.unwrap_or_else(|| mu * delta.powi((k0 * k0) as i32) / 2.0);
            let params = ResolvedParameters {
                parts,
                factor,
                gamma,
                first_level_gamma: gamma / factor as f64,
                delta: decimal_rational(delta)?,
                beta,
                mu,
                zeta,
                k0,
            };
            Ok((params, None))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PipelineStatus {
    Completed,
    /// The refined partition would need more classes than vertices.
    InfeasibleParameters,
}

#[derive(Clone, Debug, Serialize)]
pub struct LpSummary {
    pub arithmetic: Arithmetic,
    #[serde(serialize_with = "crate::ratio::serialize")]
    pub value: Rational,
    pub value_f64: f64,
    pub copies: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct PartitionSummary {
    pub first_level_classes: usize,
    pub classes: usize,
    pub min_class_size: usize,
    pub max_class_size: usize,
    pub regularity: Option<PartitionVerdict>,
}

fn exact_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// w(ψ), w(ψ**), w(ψ*), w(ψ′) and the identities relating them.
#[derive(Clone, Debug, Serialize)]
pub struct StageWeights {
    #[serde(serialize_with = "crate::ratio::serialize")]
    pub psi: Rational,
    #[serde(serialize_with = "crate::ratio::serialize")]
    pub psi_good: Rational,
    #[serde(serialize_with = "crate::ratio::serialize")]
    pub psi_star: Rational,
    #[serde(serialize_with = "crate::ratio::serialize")]
    pub psi_prime: Rational,
    pub psi_f64: f64,
    pub psi_good_f64: f64,
    pub psi_star_f64: f64,
    pub psi_prime_f64: f64,
    /// Normaliser t_max² used by the projection.
    #[serde(serialize_with = "crate::ratio::serialize")]
    pub scale: Rational,
    #[serde(serialize_with = "crate::ratio::serialize")]
    pub n2_over_m2: Rational,
    /// w(ψ′)·scale = w(ψ*), exactly.
    pub identity_exact: bool,
    /// w(ψ′)·n²/m² = w(ψ*), exactly; coincides with the above when m | n.
    pub identity_n2_over_m2: bool,
    /// Every R-edge load of ψ′ is at most d(i, j), exactly.
    pub loads_within_density: bool,
    pub monotone: bool,
    /// Theoretical mode only: w(ψ**) ≥ (α − 0.07ε)n² with α = w(ψ)/n².
    pub good_weight_bound: Option<bool>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReducedSummary {
    pub vertices: usize,
    pub edges: usize,
    pub irregular_pairs: usize,
    pub labeled_colors: usize,
    #[serde(serialize_with = "crate::ratio::serialize")]
    pub threshold: Rational,
}

#[derive(Clone, Debug, Serialize)]
pub struct ColoringSummary {
    pub colored_edges: usize,
    pub uncolored_edges: usize,
    #[serde(serialize_with = "crate::ratio::serialize")]
    pub max_mass: Rational,
    pub mass_ok: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ColorReport {
    pub color: String,
    pub pattern: String,
    #[serde(serialize_with = "crate::ratio::serialize")]
    pub psi_prime: Rational,
    pub psi_prime_f64: f64,
    /// ψ′(H) at or below the threshold; no matching is attempted.
    pub skipped: bool,
    pub edges: usize,
    /// (1 − 2ζ)·r·(n²/m²)·ψ′(H).
    pub edge_bound: f64,
    pub edge_bound_ok: bool,
    pub concentration: Option<ConcentrationReport>,
    pub pippenger: Option<PippengerVerdict>,
    pub hyperedges: usize,
    pub matching: usize,
    pub nibble_rounds: usize,
    /// (1 − 2β)·ψ′(H)·n²/m².
    pub target: f64,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct PackingSummary {
    pub from_colors: usize,
    pub from_leftover: usize,
    pub total: usize,
    pub verified: bool,
    pub color_target: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct PipelineReport {
    pub status: PipelineStatus,
    pub mode: &'static str,
    pub seed: u64,
    pub n: usize,
    pub edges: usize,
    pub family: String,
    pub parameters: ResolvedParameters,
    pub constants: Option<TheoreticalConstants>,
    pub note: Option<String>,
    pub lp: Option<LpSummary>,
    pub partition: Option<PartitionSummary>,
    pub weights: Option<StageWeights>,
    pub discard: Option<DiscardReport>,
    pub reduced: Option<ReducedSummary>,
    pub coloring: Option<ColoringSummary>,
    pub colors: Vec<ColorReport>,
    pub packing: PackingSummary,
}

impl PipelineReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Intermediate objects of a completed run, kept for inspection.
#[derive(Clone, Debug)]
pub struct PipelineArtifacts {
    pub partition: VertexPartition,
    pub psi: FractionalPacking,
    pub psi_good: FractionalPacking,
    pub psi_star: FractionalPacking,
    pub g_star: Graph,
    pub reduced: ReducedGraph,
    pub projection: Projection,
    pub coloring: ColorAssignment,
}

#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub packing: IntegerPacking,
    pub report: PipelineReport,
    pub artifacts: Option<PipelineArtifacts>,
}

/// Run the pipeline and return the packing with its report.
pub fn run_pipeline(g: &Graph, family: &Family, config: &PipelineConfig, seed: u64) -> Result<(IntegerPacking, PipelineReport)> {
    let run = run_pipeline_detailed(g, family, config, seed)?;
    Ok((run.packing, run.report))
}

fn stage<T>(name: &'static str, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::stage(name, e))
}

/// Like [`run_pipeline`], also returning the intermediate packings, graphs
/// and the coloring.
pub fn run_pipeline_detailed(g: &Graph, family: &Family, config: &PipelineConfig, seed: u64) -> Result<PipelineRun> {
    let (params, constants) = stage("config", resolve(config, family))?;
    let mode = match config.parameters {
        Parameters::Theoretical { .. } => "theoretical",
        Parameters::Practical { .. } => "practical",
    };
    let mut report = PipelineReport {
        status: PipelineStatus::Completed,
        mode,
        seed,
        n: g.n(),
        edges: g.edge_count(),
        family: family.label(),
        parameters: params.clone(),
        constants: constants.clone(),
        note: None,
        lp: None,
        partition: None,
        weights: None,
        discard: None,
        reduced: None,
        coloring: None,
        colors: Vec::new(),
        packing: PackingSummary::default(),
    };

    if let Some(c) = &constants {
        let needed = c.min_vertices();
        if needed > g.n() as f64 {
            report.status = PipelineStatus::InfeasibleParameters;
            report.note = Some(format!(
                "parameters infeasible at this n: the refined partition needs at least {needed:.0} vertices, the \
                 graph has {}",
                g.n()
            ));
            report.packing.verified = true;
            return Ok(PipelineRun { packing: IntegerPacking::default(), report, artifacts: None });
        }
    }

    let lp = stage("lp", solve_fractional_packing(g, family, config.lp, config.copy_cap))?;
    report.lp = Some(LpSummary {
        arithmetic: lp.arithmetic,
        value_f64: lp.value_f64(),
        value: lp.value.clone(),
        copies: lp.copies,
    });
    let psi = stage("normalize", labeled_normalize(&lp.packing, family))?;

    let mut part_rng = rng_from(seed, "partition", 0);
    let (first, regularity) = match config.partition {
        PartitionSource::Equitable => {
            let parts = params.parts.expect("checked by resolve");
            (stage("partition", equitable_partition(g.n(), parts, &mut part_rng))?, None)
        }
        PartitionSource::Regularity { max_classes } => {
            let (p, v) = stage(
                "partition",
                regularity_partition(g, params.first_level_gamma, max_classes, config.regularity_method, &mut part_rng),
            )?;
            (p, Some(v))
        }
    };
    let refined = stage("refine", refine_partition(&first, params.factor, &mut rng_from(seed, "refine", 0)))?;
    let m = refined.len();
    report.partition = Some(PartitionSummary {
        first_level_classes: first.len(),
        classes: m,
        min_class_size: refined.min_class_size(),
        max_class_size: refined.max_class_size(),
        regularity,
    });

    let psi_good = restrict_to_good(&psi, family, &refined, params.k0);
    let table = stage(
        "pairs",
        judge_pairs(g, &refined, params.gamma, config.regularity_method, &mut rng_from(seed, "pairs", 0)),
    )?;
    let (g_star, discard) = discard_edges(g, &refined, &table, &params.delta);
    report.discard = Some(discard);
    let psi_star = restrict_packing(&psi_good, |c| {
        c.host_edges(family.pattern(c.pattern_id)).all(|Edge(u, v)| g_star.has_edge(u, v))
    });

    let reduced = stage("reduce", build_reduced_graph(&refined, &table, &params.delta))?;
    let projection = stage("project", project_packing_to_reduced(&psi_star, family, &reduced))?;
    let psi_prime = &projection.packing;

    let n2_over_m2 = Rational::new(BigInt::from(g.n() * g.n()), BigInt::from(m * m));
    let (w_psi, w_good, w_star, w_prime) =
        (packing_weight(&psi), packing_weight(&psi_good), packing_weight(&psi_star), packing_weight(psi_prime));
    let loads_ok = projection_loads_ok(psi_prime, family, &reduced);
    let good_weight_bound = constants.as_ref().map(|c| {
        // (α − 0.07ε)n² = w(ψ) − 0.07ε n².
        let slack = decimal_rational(0.07 * c.epsilon).unwrap_or_else(|_| Rational::zero())
            * Rational::from_integer(BigInt::from(g.n() * g.n()));
        w_good >= &w_psi - slack
    });
    report.weights = Some(StageWeights {
        psi_f64: exact_f64(&w_psi),
        psi_good_f64: exact_f64(&w_good),
        psi_star_f64: exact_f64(&w_star),
        psi_prime_f64: exact_f64(&w_prime),
        identity_exact: projection_identity_holds(&psi_star, &projection),
        identity_n2_over_m2: &w_prime * &n2_over_m2 == w_star,
        loads_within_density: loads_ok,
        monotone: w_psi >= w_good && w_good >= w_star,
        good_weight_bound,
        scale: projection.scale.clone(),
        n2_over_m2: n2_over_m2.clone(),
        psi: w_psi,
        psi_good: w_good,
        psi_star: w_star,
        psi_prime: w_prime,
    });
    if !loads_ok {
        return Err(Error::Stage { stage: "project", message: "projected load exceeds a pair density".into() });
    }

    let threshold = psi_threshold(m, params.k0);
    report.reduced = Some(ReducedSummary {
        vertices: m,
        edges: reduced.base.edge_count(),
        irregular_pairs: table.irregular_count(),
        labeled_colors: psi_prime.support_len(),
        threshold: threshold.clone(),
    });

    let coloring = stage(
        "color",
        random_coloring(&g_star, &reduced, psi_prime, family, &mut rng_from(seed, "color", 0)),
    )?;
    report.coloring = Some(ColoringSummary {
        colored_edges: coloring.colored_count(),
        uncolored_edges: g_star.edge_count() - coloring.colored_count(),
        mass_ok: coloring.max_mass <= Rational::from_integer(BigInt::from(1)),
        max_mass: coloring.max_mass.clone(),
    });

    let t = refined.max_class_size();
    let scale_f = exact_f64(&projection.scale);
    let nibble = NibbleParams { beta: params.beta, bite_fraction: config.bite_fraction, round_cap: config.round_cap };
    let per_color: Vec<(ColorReport, Vec<LabeledCopy>)> = coloring
        .colors
        .par_iter()
        .enumerate()
        .map(|(idx, h)| {
            let w = psi_prime.weight_of(h);
            process_color(ColorJob {
                g_star: &g_star,
                family,
                partition: &refined,
                coloring: &coloring,
                idx,
                h,
                weight: w.clone(),
                skipped: w <= threshold,
                params: &params,
                nibble,
                t,
                scale: scale_f,
                seed,
            })
        })
        .collect::<Result<_>>()?;

    let mut copies = Vec::new();
    for (rep, found) in per_color {
        report.colors.push(rep);
        copies.extend(found);
    }
    let from_colors = copies.len();
    let mut from_leftover = 0;
    if config.leftover_greedy {
        let mut used = FixedBitSet::with_capacity(g.edge_count());
        for c in &copies {
            for e in c.host_edge_ids(family.pattern(c.pattern_id), g).expect("copies come from a subgraph of G") {
                used.insert(e);
            }
        }
        let index = stage(
            "leftover",
            enumerate_family_copies(g, family, Labeling::Unlabeled, config.copy_cap)
                .and_then(|i| i.require_complete(config.copy_cap)),
        )?;
        let extra = greedy_over(&index, g.edge_count(), Some(&used), &mut rng_from(seed, "leftover", 0));
        from_leftover = extra.size();
        copies.extend(extra.copies);
    }
    let packing = IntegerPacking::new(copies);
    let verdict = verify_integer_packing(g, family, &packing);
    if !verdict.accepted {
        return Err(Error::Stage {
            stage: "verify",
            message: verdict.conflict.map_or_else(String::new, |c| c.to_string()),
        });
    }
    report.packing = PackingSummary {
        from_colors,
        from_leftover,
        total: packing.size(),
        verified: true,
        color_target: report.colors.iter().filter(|c| !c.skipped).map(|c| c.target).sum(),
    };
    Ok(PipelineRun {
        packing,
        report,
        artifacts: Some(PipelineArtifacts {
            partition: refined,
            psi,
            psi_good,
            psi_star,
            g_star,
            reduced,
            projection,
            coloring,
        }),
    })
}

struct ColorJob<'a> {
    g_star: &'a Graph,
    family: &'a Family,
    partition: &'a VertexPartition,
    coloring: &'a ColorAssignment,
    idx: usize,
    h: &'a LabeledCopy,
    weight: Rational,
    skipped: bool,
    params: &'a ResolvedParameters,
    nibble: NibbleParams,
    t: usize,
    scale: f64,
    seed: u64,
}

/// X_H, the two lemma diagnostics, L_H and its nibble matching for one color.
fn process_color(job: ColorJob<'_>) -> Result<(ColorReport, Vec<LabeledCopy>)> {
    let pattern = job.family.pattern(job.h.pattern_id);
    let r = pattern.edge_count();
    let w = exact_f64(&job.weight);
    let x_h = build_color_subgraph(job.g_star, job.coloring, job.idx);
    let edge_bound = (1.0 - 2.0 * job.params.zeta) * r as f64 * job.scale * w;
    let mut rep = ColorReport {
        color: job.h.dump_line(),
        pattern: job.family.names()[job.h.pattern_id].clone(),
        psi_prime: job.weight.clone(),
        psi_prime_f64: w,
        skipped: job.skipped,
        edges: x_h.edge_count(),
        edge_bound,
        edge_bound_ok: x_h.edge_count() as f64 > edge_bound,
        concentration: None,
        pippenger: None,
        hyperedges: 0,
        matching: 0,
        nibble_rounds: 0,
        target: (1.0 - 2.0 * job.params.beta) * w * job.scale,
    };
    if job.skipped {
        return Ok((rep, Vec::new()));
    }
    let classes: Vec<Vec<Vertex>> = job.h.map.iter().map(|&c| job.partition.class(c as usize).to_vec()).collect();
    let conc = stage("concentration", concentration_check(&x_h, pattern, &classes, &job.weight, job.params.mu, job.t))?;

    let mut seen = BTreeSet::new();
    let mut maps = Vec::new();
    let mut hyperedges = Vec::new();
    stage(
        "hypergraph",
        for_each_partite_copy(&x_h, pattern, &classes, |map| {
            let mut ids: Vec<u32> = pattern
                .edges()
                .iter()
                .map(|&Edge(i, j)| x_h.edge_id(map[i as usize], map[j as usize]).expect("copy edge") as u32)
                .collect();
            ids.sort_unstable();
            if seen.insert(ids.clone()) {
                maps.push(map.to_vec());
                hyperedges.push(ids);
            }
            true
        }),
    )?;
    let l_h = stage("hypergraph", UniformHypergraph::new(x_h.edge_count(), r, hyperedges))?;
    rep.pippenger = Some(check_pippenger_conditions(&l_h, job.params.mu, conc.target));
    rep.concentration = Some(conc);
    rep.hyperedges = l_h.edge_count();
    let mut rng: Rng = rng_from(job.seed, "nibble", job.idx as u64);
    let out = nibble_matching(&l_h, job.nibble, &mut rng);
    rep.matching = out.matching.size();
    rep.nibble_rounds = out.rounds;
    let copies = out
        .matching
        .edges
        .iter()
        .map(|&i| LabeledCopy::new(job.h.pattern_id, maps[i].clone()))
        .collect();
    Ok((rep, copies))
}

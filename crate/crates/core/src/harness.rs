//! Command-line surface: solve, pack, run the pipeline, run experiments and
//! verify packings. Every result file embeds a [`RunManifest`].

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use crate::copies::{parse_copy_dump, DEFAULT_COPY_CAP};
use crate::error::{Error, Result};
use crate::exact::{exact_packing, verify_integer_packing, IntegerPacking, SearchStatus, DEFAULT_NODE_BUDGET};
use crate::family::{parse_family_spec, Family};
use crate::graph::{parse_graph, Graph};
use crate::lp::{solve_fractional_packing, Arithmetic};
use crate::pipeline::{default_pipeline_config, draw_seed, gap_experiment, rows_to_csv, run_pipeline, ExperimentSpec, PipelineConfig};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REJECTED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Provenance of one result file. Equal manifests imply byte-identical
/// results; the wall clock is only filled in with `--record-timing`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub inputs: Vec<String>,
    /// SHA-256 over the command, its parameters and the input contents.
    pub config_hash: String,
    pub seed: Option<u64>,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_clock_ms: Option<u64>,
}

struct ManifestBuilder {
    command: String,
    inputs: Vec<String>,
    hasher: Sha256,
}

impl ManifestBuilder {
    fn new(command: &str) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(command.as_bytes());
        ManifestBuilder { command: command.into(), inputs: Vec::new(), hasher }
    }

    fn input(&mut self, path: &Path, contents: &str) {
        self.inputs.push(path.display().to_string());
        self.hasher.update(b"\0input\0");
        self.hasher.update(contents.as_bytes());
    }

    fn param(&mut self, key: &str, value: impl std::fmt::Display) {
        self.hasher.update(format!("\0{key}={value}").as_bytes());
    }

    fn finish(self, seed: Option<u64>, timer: Option<Instant>) -> RunManifest {
        let digest = self.hasher.finalize();
        let mut config_hash = String::with_capacity(64);
        for b in digest {
            let _ = write!(config_hash, "{b:02x}");
        }
        RunManifest {
            command: self.command,
            inputs: self.inputs,
            config_hash,
            seed,
            version: env!("CARGO_PKG_VERSION").into(),
            wall_clock_ms: timer.map(|t| t.elapsed().as_millis() as u64),
        }
    }
}

impl RunManifest {
    /// `# manifest: {...}` header line for text and CSV outputs.
    pub fn comment_line(&self) -> String {
        format!("# manifest: {}\n", serde_json::to_string(self).expect("manifest serializes"))
    }
}

/// What a command produced: text for stdout and the process exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub code: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Outcome { stdout, code: EXIT_OK }
    }
}

/// Exit code for a failed command.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::CapExceeded { .. } | Error::Budget(_) => EXIT_BUDGET,
        _ => EXIT_USAGE,
    }
}

#[derive(Debug, Parser)]
#[command(name = "graphpack", version, about = "Edge-disjoint packings of graph families")]
pub struct Cli {
    /// Record wall-clock times in manifests and experiment rows.
    #[arg(long, global = true)]
    pub record_timing: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fractional packing number ν* by linear programming.
    NuStar(NuStarArgs),
    /// Maximum integer packing by branch and bound.
    NuExact(NuExactArgs),
    /// Randomized packing via regularity partition, coloring and nibble.
    Pipeline(PipelineArgs),
    /// Check that a packing file is edge-disjoint and uses family copies.
    Verify(VerifyArgs),
    /// Integrality-gap experiment from a JSON spec, written as CSV.
    Experiment(ExperimentArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Inputs {
    /// Edge-list graph file: `n m` header, then one `u v` line per edge.
    pub graph: PathBuf,
    /// Family spec, e.g. `K3` or `K3,C5,path:pattern.g`.
    pub family: String,
}

#[derive(Debug, Clone, Args)]
pub struct NuStarArgs {
    #[command(flatten)]
    pub inputs: Inputs,
    /// Exact rational simplex (default).
    #[arg(long, conflicts_with = "float")]
    pub exact: bool,
    /// Floating-point simplex.
    #[arg(long)]
    pub float: bool,
    /// Write value, cover and optimal packing as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_COPY_CAP)]
    pub cap: usize,
}

#[derive(Debug, Clone, Args)]
pub struct NuExactArgs {
    #[command(flatten)]
    pub inputs: Inputs,
    /// Search-node budget; exhausting it yields a lower bound (exit 3).
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    pub budget: u64,
    /// Write the packing, one `pattern: v1 ... vk` line per copy.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_COPY_CAP)]
    pub cap: usize,
}

#[derive(Debug, Clone, Args)]
pub struct PipelineArgs {
    #[command(flatten)]
    pub inputs: Inputs,
    /// Pipeline configuration JSON; the practical defaults otherwise.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Master seed; drawn and printed when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Packing output file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Report output file (JSON).
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub inputs: Inputs,
    pub packing: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct ExperimentArgs {
    /// Experiment spec JSON.
    pub spec: PathBuf,
    /// CSV output file; stdout otherwise.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::stage("input", Error::arg(format!("{}: {e}", path.display()))))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|e| Error::stage("output", Error::arg(format!("{}: {e}", path.display()))))
}

struct Loaded {
    graph: Graph,
    family: Family,
    manifest: ManifestBuilder,
}

fn load(command: &str, inputs: &Inputs) -> Result<Loaded> {
    let text = read(&inputs.graph)?;
    let graph = parse_graph(&text).map_err(|e| Error::stage("input", e))?.graph;
    let family = parse_family_spec(&inputs.family, None).map_err(|e| Error::stage("input", e))?;
    let mut manifest = ManifestBuilder::new(command);
    manifest.input(&inputs.graph, &text);
    manifest.param("family", &inputs.family);
    for (name, pattern) in family.names().iter().zip(family.patterns()) {
        manifest.param(name, pattern.to_text());
    }
    Ok(Loaded { graph, family, manifest })
}

#[derive(Serialize)]
struct WeightedCopy {
    copy: String,
    weight: String,
}

pub fn cmd_nu_star(args: &NuStarArgs, record_timing: bool) -> Result<Outcome> {
    let timer = record_timing.then(Instant::now);
    let mut l = load("nu-star", &args.inputs)?;
    let mode = if args.float { Arithmetic::Float } else { Arithmetic::ExactRational };
    l.manifest.param("arithmetic", format!("{mode:?}"));
    l.manifest.param("cap", args.cap);
    let res = solve_fractional_packing(&l.graph, &l.family, mode, args.cap).map_err(|e| Error::stage("lp", e))?;
    let manifest = l.manifest.finish(None, timer);
    let mut out = format!("nu_star = {}\n", res.value);
    let _ = writeln!(out, "nu_star_f64 = {}", res.value_f64());
    let _ = writeln!(out, "dual_value = {}", res.dual_value);
    let _ = writeln!(out, "copies = {}", res.copies);
    if let Some(path) = &args.json {
        let packing: Vec<WeightedCopy> = res
            .packing
            .support()
            .map(|(c, w)| WeightedCopy { copy: c.dump_line(), weight: w.to_string() })
            .collect();
        let cover: Vec<_> = res.cover.iter().map(|(e, w)| json!({"edge": e.to_string(), "weight": w.to_string()})).collect();
        let doc = json!({
            "manifest": manifest,
            "arithmetic": mode,
            "value": res.value.to_string(),
            "value_f64": res.value_f64(),
            "dual_value": res.dual_value.to_string(),
            "copies": res.copies,
            "iterations": res.iterations,
            "packing": packing,
            "cover": cover,
        });
        write(path, &(serde_json::to_string_pretty(&doc)? + "\n"))?;
    }
    Ok(Outcome::ok(out))
}

/// Packing file: manifest comment, then the copy dump.
fn packing_file(manifest: &RunManifest, packing: &IntegerPacking) -> String {
    manifest.comment_line() + &packing.to_dump()
}

pub fn cmd_nu_exact(args: &NuExactArgs, record_timing: bool) -> Result<Outcome> {
    let timer = record_timing.then(Instant::now);
    let mut l = load("nu-exact", &args.inputs)?;
    l.manifest.param("budget", args.budget);
    l.manifest.param("cap", args.cap);
    let res = exact_packing(&l.graph, &l.family, args.budget, args.cap).map_err(|e| Error::stage("exact", e))?;
    let manifest = l.manifest.finish(None, timer);
    let status = match res.status {
        SearchStatus::Optimal => "optimal",
        SearchStatus::LowerBound => "lower-bound",
    };
    let out = format!("nu = {}\nstatus = {status}\nnodes = {}\n", res.size(), res.nodes);
    if let Some(path) = &args.out {
        write(path, &packing_file(&manifest, &res.packing))?;
    }
    let code = if res.status == SearchStatus::Optimal { EXIT_OK } else { EXIT_BUDGET };
    Ok(Outcome { stdout: out, code })
}

pub fn cmd_pipeline(args: &PipelineArgs, record_timing: bool) -> Result<Outcome> {
    let timer = record_timing.then(Instant::now);
    let mut l = load("pipeline", &args.inputs)?;
    let config = match &args.config {
        Some(path) => {
            let text = read(path)?;
            l.manifest.input(path, &text);
            PipelineConfig::from_json(&text).map_err(|e| Error::stage("config", e))?
        }
        None => {
            let config = default_pipeline_config();
            l.manifest.param("config", serde_json::to_string(&config)?);
            config
        }
    };
    let mut out = String::new();
    let seed = match args.seed.or(config.seed) {
        Some(s) => s,
        None => {
            let s = draw_seed();
            let _ = writeln!(out, "seed = {s} (drawn)");
            s
        }
    };
    let (packing, report) = run_pipeline(&l.graph, &l.family, &config, seed)?;
    let verdict = verify_integer_packing(&l.graph, &l.family, &packing);
    let manifest = l.manifest.finish(Some(seed), timer);
    let _ = writeln!(out, "packing = {}", packing.size());
    let _ = writeln!(out, "status = {}", serde_json::to_value(report.status)?.as_str().unwrap_or("?"));
    if let Some(note) = &report.note {
        let _ = writeln!(out, "note = {note}");
    }
    if let Some(path) = &args.out {
        write(path, &packing_file(&manifest, &packing))?;
    }
    if let Some(path) = &args.report {
        let doc = json!({ "manifest": manifest, "report": report });
        write(path, &(serde_json::to_string_pretty(&doc)? + "\n"))?;
    }
    if !verdict.accepted {
        let _ = writeln!(out, "verify = rejected");
        return Ok(Outcome { stdout: out, code: EXIT_REJECTED });
    }
    Ok(Outcome::ok(out))
}

pub fn cmd_verify(args: &VerifyArgs) -> Result<Outcome> {
    let l = load("verify", &args.inputs)?;
    let text = read(&args.packing)?;
    let copies = parse_copy_dump(&text).map_err(|e| Error::stage("input", e))?;
    let packing = IntegerPacking::new(copies);
    let verdict = verify_integer_packing(&l.graph, &l.family, &packing);
    Ok(match verdict.conflict {
        None => Outcome::ok(format!("ok: {} edge-disjoint copies\n", packing.size())),
        Some(c) => Outcome { stdout: format!("rejected: {c}\n"), code: EXIT_REJECTED },
    })
}

pub fn cmd_experiment(args: &ExperimentArgs, record_timing: bool) -> Result<Outcome> {
    let timer = record_timing.then(Instant::now);
    let text = read(&args.spec)?;
    let spec = ExperimentSpec::from_json(&text).map_err(|e| Error::stage("config", e))?;
    let mut manifest = ManifestBuilder::new("experiment");
    manifest.input(&args.spec, &text);
    let rows = gap_experiment(&spec, args.spec.parent(), record_timing).map_err(|e| Error::stage("experiment", e))?;
    let csv = manifest.finish(None, timer).comment_line() + &rows_to_csv(&rows);
    match &args.out {
        Some(path) => {
            write(path, &csv)?;
            Ok(Outcome::ok(format!("rows = {}\n", rows.len())))
        }
        None => Ok(Outcome::ok(csv)),
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::NuStar(a) => cmd_nu_star(a, cli.record_timing),
        Command::NuExact(a) => cmd_nu_exact(a, cli.record_timing),
        Command::Pipeline(a) => cmd_pipeline(a, cli.record_timing),
        Command::Verify(a) => cmd_verify(a),
        Command::Experiment(a) => cmd_experiment(a, cli.record_timing),
    }
}

/// Parse arguments, run, print, and return the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", outcome.stdout);
            outcome.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails. Run with
//! `cargo test -p graphpack --test acceptance`.

use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng as _;
use serde_json::Value;

use graphpack::copies::{partite_edge_counts, DEFAULT_COPY_CAP};
use graphpack::exact::{exact_packing, verify_integer_packing, SearchStatus, DEFAULT_NODE_BUDGET};
use graphpack::family::Family;
use graphpack::graph::{named_pattern, Edge, Graph, Vertex};
use graphpack::hypergraph::{nibble_matching, NibbleParams, UniformHypergraph};
use graphpack::lp::{packing_weight, solve_fractional_packing, verify_fractional, Arithmetic};
use graphpack::pipeline::{gap_experiment, run_pipeline_detailed, ExperimentSpec, GraphModel, PipelineConfig, PipelineRun, Solver};
use graphpack::seed::rng;
use graphpack::Rational;

type Verdict = Result<String, String>;

fn ratio(p: usize, q: usize) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

fn k3() -> Family {
    Family::single("K3").unwrap()
}

fn within(limit: Duration, started: Instant) -> Result<f64, String> {
    let secs = started.elapsed().as_secs_f64();
    if started.elapsed() > limit {
        Err(format!("took {secs:.2}s, limit {}s", limit.as_secs()))
    } else {
        Ok(secs)
    }
}

fn fractional_oracle() -> Verdict {
    let started = Instant::now();
    for n in 3..=9usize {
        let res = solve_fractional_packing(&Graph::complete(n), &k3(), Arithmetic::ExactRational, DEFAULT_COPY_CAP)
            .map_err(|e| e.to_string())?;
        let want = ratio(n * (n - 1), 6);
        if res.value != want || res.dual_value != want {
            return Err(format!("K{n}: value {} dual {}, want {want}", res.value, res.dual_value));
        }
        let check = verify_fractional(&res.packing, &k3(), 0.0);
        if !check.accepted || packing_weight(&res.packing) != want {
            return Err(format!("K{n}: returned packing is infeasible or has the wrong weight"));
        }
    }
    let secs = within(Duration::from_secs(10), started)?;
    Ok(format!("n = 3..9 exact, {secs:.2}s"))
}

/// Maximum number of edge-disjoint triangles by exhaustive include/exclude
/// search over an explicit triangle list.
fn brute_force_triangles(g: &Graph) -> usize {
    let n = g.n() as Vertex;
    let mut tris: Vec<u64> = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                if g.has_edge(a, b) && g.has_edge(a, c) && g.has_edge(b, c) {
                    let bit = |u, v| 1u64 << g.edge_id(u, v).unwrap();
                    tris.push(bit(a, b) | bit(a, c) | bit(b, c));
                }
            }
        }
    }
    fn search(tris: &[u64], used: u64, count: usize, best: &mut usize) {
        if count + tris.len() <= *best {
            return;
        }
        let Some((&t, rest)) = tris.split_first() else {
            *best = count;
            return;
        };
        if t & used == 0 {
            search(rest, used | t, count + 1, best);
        }
        search(rest, used, count, best);
    }
    let mut best = 0;
    search(&tris, 0, 0, &mut best);
    best
}

fn integer_oracle() -> Verdict {
    let started = Instant::now();
    for (n, want) in [(7, 7), (6, 4)] {
        let res = exact_packing(&Graph::complete(n), &k3(), DEFAULT_NODE_BUDGET, DEFAULT_COPY_CAP).map_err(|e| e.to_string())?;
        if res.size() != want || res.status != SearchStatus::Optimal {
            return Err(format!("K{n}: {} ({:?}), want {want} optimal", res.size(), res.status));
        }
    }
    let mut r = rng(2024);
    for i in 0..50 {
        let n = r.gen_range(4..=8);
        let p = r.gen_range(0.3..0.95);
        let g = Graph::gnp(n, p, &mut r);
        let res = exact_packing(&g, &k3(), DEFAULT_NODE_BUDGET, DEFAULT_COPY_CAP).map_err(|e| e.to_string())?;
        let oracle = brute_force_triangles(&g);
        if res.status != SearchStatus::Optimal || res.size() != oracle || !verify_integer_packing(&g, &k3(), &res.packing).accepted {
            return Err(format!("graph {i} (n = {n}, {} edges): solver {} vs brute force {oracle}", g.edge_count(), res.size()));
        }
    }
    let secs = within(Duration::from_secs(60), started)?;
    Ok(format!("K7 = 7, K6 = 4, 50 random graphs match brute force, {secs:.2}s"))
}

fn desk_trend() -> Verdict {
    let spec = ExperimentSpec {
        model: GraphModel::Gnp { p: 0.5 },
        family: "K3".into(),
        n: vec![10, 12, 14, 16],
        seeds: (1..=5).collect(),
        solvers: vec![Solver::NuStar, Solver::Exact, Solver::Greedy],
        exact_budget: DEFAULT_NODE_BUDGET,
        max_exact_n: None,
        lp: Arithmetic::ExactRational,
        pipeline: None,
        copy_cap: DEFAULT_COPY_CAP,
    };
    let rows = gap_experiment(&spec, None, false).map_err(|e| e.to_string())?;
    let mut gaps: BTreeMap<usize, Vec<Rational>> = BTreeMap::new();
    for row in &rows {
        let star = row.nu_star.clone().ok_or("missing nu*")?;
        let (nu, greedy) = (row.nu_exact.ok_or("missing nu")?, row.greedy.ok_or("missing greedy")?);
        if row.exact_status != Some(SearchStatus::Optimal) {
            return Err(format!("n = {}, seed {}: exact search not optimal", row.n, row.seed));
        }
        let nu_r = Rational::from_integer(BigInt::from(nu));
        if star < nu_r || nu < greedy {
            return Err(format!("n = {}, seed {}: nu* {star}, nu {nu}, greedy {greedy}", row.n, row.seed));
        }
        gaps.entry(row.n).or_default().push((star - nu_r) / Rational::from_integer(BigInt::from(row.n * row.n)));
    }
    let mean = |n: usize| {
        let v = &gaps[&n];
        v.iter().fold(Rational::zero(), |a, b| a + b) / Rational::from_integer(BigInt::from(v.len()))
    };
    let (m10, m16) = (mean(10), mean(16));
    let line: Vec<String> = [10, 12, 14, 16].iter().map(|&n| format!("{n}: {:.5}", mean(n).to_f64().unwrap())).collect();
    if m16 <= m10 {
        Ok(format!("mean gap/n^2 {}", line.join(", ")))
    } else {
        Err(format!("mean gap/n^2 rose: {}", line.join(", ")))
    }
}

fn nibble_guarantee() -> Verdict {
    let started = Instant::now();
    let params = NibbleParams { beta: 0.1, ..NibbleParams::default() };
    let mut summary = Vec::new();
    for q in [30usize, 60, 90] {
        let h = UniformHypergraph::complete(q, 3);
        let bound = q as f64 / 3.0 * (1.0 - params.beta);
        let mut hits = 0;
        for seed in 0..10 {
            let m = nibble_matching(&h, params, &mut rng(seed)).matching;
            if !m.is_valid_for(&h) {
                return Err(format!("q = {q}, seed {seed}: invalid matching"));
            }
            if m.size() as f64 >= bound {
                hits += 1;
            }
        }
        if hits < 9 {
            return Err(format!("q = {q}: only {hits}/10 runs reach {bound}"));
        }
        summary.push(format!("q = {q}: {hits}/10"));
    }
    let secs = within(Duration::from_secs(30), started)?;
    Ok(format!("{}, {secs:.2}s", summary.join(", ")))
}

fn counting_check() -> Verdict {
    let started = Instant::now();
    let t = 500u32;
    let mut r = rng(5);
    let edges: Vec<(u32, u32)> = (0..3 * t)
        .flat_map(|u| (u + 1..3 * t).map(move |v| (u, v)))
        .filter(|&(u, v)| u / t != v / t)
        .filter(|_| r.gen_bool(0.5))
        .collect();
    let g = Graph::from_edges(3 * t as usize, edges).map_err(|e| e.to_string())?;
    let classes: Vec<Vec<Vertex>> = (0..3).map(|i| (i * t..(i + 1) * t).collect()).collect();
    let counts = partite_edge_counts(&g, &named_pattern("K3").unwrap(), &classes).map_err(|e| e.to_string())?;

    // Independent count: common neighbours in the third class, by bit words.
    let words = (t as usize).div_ceil(64);
    let mut rows = vec![vec![0u64; 3 * words]; 3 * t as usize];
    for &Edge(u, v) in g.edges() {
        let (cu, cv) = (u / t, v / t);
        let (ou, ov) = ((u % t) as usize, (v % t) as usize);
        rows[u as usize][cv as usize * words + ov / 64] |= 1 << (ov % 64);
        rows[v as usize][cu as usize * words + ou / 64] |= 1 << (ou % 64);
    }
    let target = f64::from(t) / 4.0;
    let mut ok = 0usize;
    for (id, &Edge(u, v)) in g.edges().iter().enumerate() {
        let third = (3 - u / t - v / t) as usize;
        let range = third * words..(third + 1) * words;
        let c: u32 = rows[u as usize][range.clone()].iter().zip(&rows[v as usize][range]).map(|(a, b)| (a & b).count_ones()).sum();
        if u64::from(c) != counts[id] {
            return Err(format!("edge {u}-{v}: library count {} vs direct {c}", counts[id]));
        }
        if (f64::from(c) - target).abs() <= 0.25 * target {
            ok += 1;
        }
    }
    let fraction = ok as f64 / g.edge_count() as f64;
    let secs = within(Duration::from_secs(60), started)?;
    if fraction >= 0.99 {
        Ok(format!("{:.3}% of {} edges within 0.25 t/4, {secs:.2}s", 100.0 * fraction, g.edge_count()))
    } else {
        Err(format!("only {:.3}% of edges within 0.25 t/4", 100.0 * fraction))
    }
}

/// Projection identity and load check recomputed from a run's artifacts.
fn check_projection(run: &PipelineRun, n: usize) -> Result<(), String> {
    let a = run.artifacts.as_ref().ok_or("run produced no artifacts")?;
    let m = a.partition.len();
    let w_star = packing_weight(&a.psi_star);
    let w_prime = packing_weight(&a.projection.packing);
    let n2_over_m2 = ratio(n * n, m * m);
    if w_prime.clone() * n2_over_m2 != w_star {
        return Err(format!("w(psi') = {w_prime} but w(psi*) m^2/n^2 = {}", w_star * ratio(m * m, n * n)));
    }
    let family = k3();
    let mut loads: BTreeMap<Edge, Rational> = BTreeMap::new();
    for (h, w) in a.projection.packing.support() {
        for e in h.host_edges(family.pattern(h.pattern_id)) {
            *loads.entry(e).or_insert_with(Rational::zero) += w;
        }
    }
    for (e, load) in loads {
        let d = a.reduced.densities.get(&e).ok_or_else(|| format!("psi' uses {e}, not an edge of R"))?;
        if load > *d {
            return Err(format!("load {load} on {e} exceeds density {d}"));
        }
    }
    Ok(())
}

struct ColoringOutcome {
    verdict: Verdict,
    runs: Vec<(u64, PipelineRun)>,
}

fn coloring_frequencies() -> ColoringOutcome {
    let n = 60;
    let config = PipelineConfig { lp: Arithmetic::Float, ..PipelineConfig::practical(1, 3, 0.5, 0.2, 0.1) };
    let family = k3();
    let mut runs = Vec::new();
    let mut tested = 0usize;
    let mut worst: f64 = 0.0;
    let mut failure = None;
    for seed in 1..=5u64 {
        let g = Graph::gnp(n, 0.5, &mut rng(seed));
        let run = match run_pipeline_detailed(&g, &family, &config, seed) {
            Ok(run) => run,
            Err(e) => return ColoringOutcome { verdict: Err(format!("seed {seed}: {e}")), runs },
        };
        let Some(a) = run.artifacts.as_ref() else {
            return ColoringOutcome { verdict: Err(format!("seed {seed}: no artifacts")), runs };
        };
        let p = &a.partition;
        let pair_of = |Edge(u, v): Edge| {
            let (i, j) = (p.class_of(u) as Vertex, p.class_of(v) as Vertex);
            Edge::new(i, j)
        };
        // Eligible probability per (pair, color) recomputed from ψ′ and d.
        let mut eligible: BTreeMap<Edge, BTreeMap<usize, Rational>> = BTreeMap::new();
        for (idx, h) in a.coloring.colors.iter().enumerate() {
            let w = a.projection.packing.weight_of(h);
            for e in h.host_edges(family.pattern(h.pattern_id)) {
                let d = &a.reduced.densities[&e];
                eligible.entry(e).or_default().insert(idx, &w / d);
            }
        }
        for (pair, probs) in &eligible {
            let mass = probs.values().fold(Rational::zero(), |acc, x| acc + x);
            if mass > Rational::one() {
                failure.get_or_insert(format!("seed {seed}: mass {mass} > 1 on pair {pair}"));
            }
        }
        let mut totals: BTreeMap<Edge, usize> = BTreeMap::new();
        let mut observed: BTreeMap<(Edge, usize), usize> = BTreeMap::new();
        for (id, &e) in a.g_star.edges().iter().enumerate() {
            let pair = pair_of(e);
            *totals.entry(pair).or_default() += 1;
            if let Some(c) = a.coloring.edge_color[id] {
                let c = c as usize;
                if !eligible.get(&pair).is_some_and(|m| m.contains_key(&c)) {
                    failure.get_or_insert(format!("seed {seed}: edge {e} got ineligible color {c}"));
                }
                *observed.entry((pair, c)).or_default() += 1;
            }
        }
        for (pair, probs) in &eligible {
            let total = totals.get(pair).copied().unwrap_or(0);
            if total < 100 {
                continue;
            }
            for (&c, prob) in probs {
                let p = prob.to_f64().unwrap();
                let seen = observed.get(&(*pair, c)).copied().unwrap_or(0) as f64;
                let mean = total as f64 * p;
                let sd = (total as f64 * p * (1.0 - p)).sqrt();
                let z = if sd > 0.0 { (seen - mean).abs() / sd } else if seen == mean { 0.0 } else { f64::INFINITY };
                worst = worst.max(z);
                tested += 1;
                if z > 3.0 {
                    failure.get_or_insert(format!("seed {seed}: pair {pair} color {c}: {seen} of {total}, expected {mean:.1} (z = {z:.2})"));
                }
            }
        }
        runs.push((seed, run));
    }
    let verdict = match failure {
        Some(f) => Err(f),
        None if tested == 0 => Err("no pair with at least 100 edges".into()),
        None => Ok(format!("G(60, 1/2) x 5 seeds: mass <= 1 everywhere, {tested} (pair, color) frequencies, max |z| = {worst:.2}")),
    };
    ColoringOutcome { verdict, runs }
}

fn cli(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_graphpack")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn field<'a>(stdout: &'a str, key: &str) -> Option<&'a str> {
    stdout.lines().find_map(|l| l.strip_prefix(key)?.strip_prefix(" = "))
}

struct CliOutcome {
    verdict: Verdict,
    /// (label, identity flag, loads flag) from every pipeline report.
    reports: Vec<(String, bool, bool)>,
}

/// Node budget for CLI exact runs; truncated searches still emit a packing
/// that must verify.
const EXACT_BUDGET: &str = "2000";

const PIPELINE_CONFIG: &str =
    r#"{"mode":"practical","parts":1,"factor":3,"gamma":0.5,"delta":0.2,"beta":0.1,"lp":"exact-rational"}"#;

fn end_to_end(dir: &Path) -> CliOutcome {
    let mut reports = Vec::new();
    let mut instances: Vec<(String, Graph)> = vec![("K6".into(), Graph::complete(6)), ("K9".into(), Graph::complete(9))];
    for n in [12usize, 15, 18, 21, 24] {
        for seed in 1..=2u64 {
            instances.push((format!("G({n}) seed {seed}"), Graph::gnp(n, 0.5, &mut rng(seed))));
        }
    }
    let config = dir.join("pipeline.json");
    std::fs::write(&config, PIPELINE_CONFIG).unwrap();
    let run = |reports: &mut Vec<(String, bool, bool)>| -> Verdict {
        for (i, (label, g)) in instances.iter().enumerate() {
            let gp = dir.join(format!("g{i}.txt"));
            std::fs::write(&gp, g.to_text()).unwrap();
            let (code, out) = cli(&["nu-star", path_str(&gp), "K3", "--exact"]);
            let star: Rational = field(&out, "nu_star").and_then(|v| v.parse().ok()).ok_or(format!("{label}: nu-star failed ({code})"))?;

            let exact_out = dir.join(format!("exact{i}.txt"));
            let (code, _) = cli(&["nu-exact", path_str(&gp), "K3", "--budget", EXACT_BUDGET, "--out", path_str(&exact_out)]);
            if code != 0 && code != 3 {
                return Err(format!("{label}: nu-exact exited {code}"));
            }
            let (code, _) = cli(&["verify", path_str(&gp), "K3", path_str(&exact_out)]);
            if code != 0 {
                return Err(format!("{label}: nu-exact packing rejected by verify"));
            }

            let packing = dir.join(format!("pipe{i}.txt"));
            let report = dir.join(format!("report{i}.json"));
            let seed = (i + 1).to_string();
            let (code, out) = cli(&[
                "pipeline", path_str(&gp), "K3", "--config", path_str(&config), "--seed", &seed, "--out", path_str(&packing), "--report",
                path_str(&report),
            ]);
            if code != 0 {
                return Err(format!("{label}: pipeline exited {code}"));
            }
            let size: usize = field(&out, "packing").and_then(|v| v.parse().ok()).ok_or(format!("{label}: no packing size"))?;
            let (code, _) = cli(&["verify", path_str(&gp), "K3", path_str(&packing)]);
            if code != 0 {
                return Err(format!("{label}: pipeline packing rejected by verify"));
            }
            if Rational::from_integer(BigInt::from(size)) > star {
                return Err(format!("{label}: pipeline {size} exceeds nu* {star}"));
            }
            let doc: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).map_err(|e| e.to_string())?;
            let w = &doc["report"]["weights"];
            reports.push((
                label.clone(),
                w["identity_exact"] == Value::Bool(true) && w["identity_n2_over_m2"] == Value::Bool(true),
                w["loads_within_density"] == Value::Bool(true),
            ));
        }
        Ok(String::new())
    };
    let verdict = run(&mut reports)
        .map(|_| format!("{} instances: nu-exact and pipeline packings verified, pipeline <= exact nu*", instances.len()));
    CliOutcome { verdict, reports }
}

fn determinism(dir: &Path, repeat: Option<&(u64, PipelineRun)>) -> Verdict {
    let g = Graph::gnp(18, 0.5, &mut rng(77));
    let gp = dir.join("det_graph.txt");
    std::fs::write(&gp, g.to_text()).unwrap();
    let config = dir.join("det_config.json");
    std::fs::write(&config, PIPELINE_CONFIG).unwrap();
    let spec = dir.join("det_spec.json");
    std::fs::write(&spec, r#"{"model":{"kind":"gnp","p":0.5},"family":"K3","n":[10,12],"seeds":[1,2]}"#).unwrap();
    let g_s = path_str(&gp).to_string();
    let produce = |tag: &str| -> Vec<(String, String)> {
        let file = |name: &str| dir.join(format!("{tag}_{name}"));
        let mut out = Vec::new();
        let (_, s) = cli(&["nu-star", &g_s, "K3", "--exact", "--json", path_str(&file("star.json"))]);
        out.push(("nu-star stdout".into(), s));
        let (_, s) = cli(&["nu-star", &g_s, "K3", "--float"]);
        out.push(("nu-star float stdout".into(), s));
        let (_, s) = cli(&["nu-exact", &g_s, "K3", "--budget", EXACT_BUDGET, "--out", path_str(&file("exact.txt"))]);
        out.push(("nu-exact stdout".into(), s));
        let (_, s) = cli(&[
            "pipeline", &g_s, "K3", "--config", path_str(&config), "--seed", "31", "--out", path_str(&file("pipe.txt")), "--report",
            path_str(&file("report.json")),
        ]);
        out.push(("pipeline stdout".into(), s));
        let (_, s) = cli(&["verify", &g_s, "K3", path_str(&file("pipe.txt"))]);
        out.push(("verify stdout".into(), s));
        let (_, s) = cli(&["experiment", path_str(&spec), "--out", path_str(&file("exp.csv"))]);
        out.push(("experiment stdout".into(), s));
        let (_, s) = cli(&["experiment", path_str(&spec)]);
        out.push(("experiment csv".into(), s));
        for name in ["star.json", "exact.txt", "pipe.txt", "report.json", "exp.csv"] {
            out.push((name.into(), std::fs::read_to_string(file(name)).unwrap_or_default()));
        }
        out
    };
    let (first, second) = (produce("a"), produce("b"));
    for ((name, x), (_, y)) in first.iter().zip(&second) {
        if x != y {
            return Err(format!("{name} differs between runs"));
        }
        if x.is_empty() && !name.ends_with("stdout") {
            return Err(format!("{name} is empty"));
        }
    }
    let mut detail = format!("{} CLI outputs byte-identical", first.len());
    if let Some((seed, run)) = repeat {
        let g = Graph::gnp(60, 0.5, &mut rng(*seed));
        let config = PipelineConfig { lp: Arithmetic::Float, ..PipelineConfig::practical(1, 3, 0.5, 0.2, 0.1) };
        let again = run_pipeline_detailed(&g, &k3(), &config, *seed).map_err(|e| e.to_string())?;
        if again.report.to_json() != run.report.to_json() || again.packing != run.packing {
            return Err(format!("G(60) seed {seed}: repeated pipeline run differs"));
        }
        detail.push_str(", G(60) pipeline report repeated identically");
    }
    Ok(detail)
}

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let mut lines: Vec<(u8, &str, Verdict)> = vec![
        (1, "fractional oracle", fractional_oracle()),
        (2, "integer oracle", integer_oracle()),
        (3, "desk trend", desk_trend()),
        (4, "nibble guarantee", nibble_guarantee()),
        (5, "counting check", counting_check()),
    ];
    let coloring = coloring_frequencies();
    let e2e = end_to_end(dir.path());

    let mut projection: Verdict = Ok(String::new());
    for (seed, run) in &coloring.runs {
        if let Err(e) = check_projection(run, 60) {
            projection = Err(format!("G(60) seed {seed}: {e}"));
            break;
        }
    }
    if projection.is_ok() {
        if let Some((label, _, _)) = e2e.reports.iter().find(|(_, id, loads)| !(*id && *loads)) {
            projection = Err(format!("{label}: report flags identity or load failure"));
        }
    }
    let total = coloring.runs.len() + e2e.reports.len();
    let projection = projection.map(|_| format!("{total} pipeline runs: w(psi') n^2/m^2 = w(psi*) exactly, loads <= d(i,j)"));
    lines.push((6, "projection identity", projection));
    lines.push((7, "coloring legality and frequency", coloring.verdict));
    lines.push((8, "end-to-end validity", e2e.verdict));
    lines.push((9, "determinism", determinism(dir.path(), coloring.runs.first())));

    let mut failed = 0;
    for (id, name, verdict) in &lines {
        match verdict {
            Ok(detail) => println!("criterion {id} {name}: PASS ({detail})"),
            Err(why) => {
                failed += 1;
                println!("criterion {id} {name}: FAIL ({why})");
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}

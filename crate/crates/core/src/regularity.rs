//! Regular pairs, regularity-style partitions, the cleaned graph G*, the
//! reduced graph R, projection of packings onto R, and an empirical check of
//! the counting inequality for partite copies.
//!
//! Deciding γ-regularity exactly means looking at every subset pair, so two
//! heuristics are offered. Sampling searches for a violating pair and is
//! one-sided: "irregular" always comes with a witness, "regular" only means
//! none was found. The degree/codegree test bounds the largest singular
//! value of the centred bipartite adjacency matrix and reports "regular"
//! only when that bound proves it.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rand::seq::{IteratorRandom, SliceRandom};
use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::copies::{partite_edge_counts, LabeledCopy, Labeling};
use crate::error::{Error, Result};
use crate::family::Family;
use crate::graph::{Edge, Graph, Vertex};
use crate::lp::{packing_weight, FractionalPacking};
use crate::partition::{equitable_partition, PartitionOrigin, VertexPartition};
use crate::seed::{rng_from, Rng};
use crate::Rational;

pub const DEFAULT_SAMPLES: usize = 200;

/// Ratio of the discard bound to δn².
pub const DISCARD_BOUND_FACTOR: f64 = 0.72;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RegularityMethod {
    Sampling { samples: usize },
    DegreeCodegree,
}

impl Default for RegularityMethod {
    fn default() -> Self {
        RegularityMethod::Sampling { samples: DEFAULT_SAMPLES }
    }
}

impl RegularityMethod {
    pub fn tag(&self) -> &'static str {
        match self {
            RegularityMethod::Sampling { .. } => "sampling",
            RegularityMethod::DegreeCodegree => "degree-codegree",
        }
    }
}

/// Subsets X ⊂ A, Y ⊂ B with |X| > γ|A|, |Y| > γ|B| and
/// |d(X,Y) − d(A,B)| ≥ γ.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    pub x: Vec<Vertex>,
    pub y: Vec<Vertex>,
    #[serde(serialize_with = "crate::ratio::serialize")]
    pub density: Rational,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairVerdict {
    pub pair: (usize, usize),
    #[serde(serialize_with = "crate::ratio::serialize")]
    pub density: Rational,
    pub regular: bool,
    pub method: &'static str,
    pub witness: Option<Witness>,
}

impl PairVerdict {
    /// |d(X,Y) − d(A,B)| of the witness, zero without one.
    pub fn deviation(&self) -> f64 {
        self.witness
            .as_ref()
            .map_or(0.0, |w| (&w.density - &self.density).abs().to_f64().unwrap_or(0.0))
    }
}

fn check_gamma(gamma: f64) -> Result<()> {
    if gamma > 0.0 && gamma < 1.0 {
        Ok(())
    } else {
        Err(Error::arg(format!("gamma must lie in (0, 1), got {gamma}")))
    }
}

fn ratio(num: usize, den: usize) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Smallest subset size strictly above `gamma * size`.
fn threshold_size(gamma: f64, size: usize) -> usize {
    ((gamma * size as f64).floor() as usize + 1).min(size)
}

/// Bitset views of one pair, restricted to the other side.
struct PairView<'a> {
    g: &'a Graph,
    a: &'a [Vertex],
    b: &'a [Vertex],
    density: f64,
    gamma: f64,
    sx: usize,
    sy: usize,
}

impl PairView<'_> {
    fn mask(&self, set: &[Vertex]) -> FixedBitSet {
        let mut m = FixedBitSet::with_capacity(self.g.n());
        for &v in set {
            m.insert(v as usize);
        }
        m
    }

    fn degrees_into(&self, from: &[Vertex], into: &[Vertex]) -> Vec<usize> {
        let mask = self.mask(into);
        from.iter()
            .map(|&u| self.g.neighbor_row(u).intersection_count(&mask))
            .collect()
    }

    fn pair_density(&self, x: &[Vertex], y: &[Vertex]) -> f64 {
        self.g.edges_between(x, y) as f64 / (x.len() * y.len()) as f64
    }

    /// The `k` members of `from` with the largest `sign * deg(v, into)`.
    fn extreme(&self, from: &[Vertex], into: &[Vertex], k: usize, sign: f64) -> Vec<Vertex> {
        let deg = self.degrees_into(from, into);
        let mut order: Vec<usize> = (0..from.len()).collect();
        order.sort_by(|&i, &j| {
            (sign * deg[j] as f64)
                .total_cmp(&(sign * deg[i] as f64))
                .then(from[i].cmp(&from[j]))
        });
        let mut out: Vec<Vertex> = order[..k].iter().map(|&i| from[i]).collect();
        out.sort_unstable();
        out
    }

    /// Members of `from` whose density into `into` lies strictly on the
    /// `sign` side of d(A,B).
    fn above(&self, from: &[Vertex], into: &[Vertex], sign: f64) -> Vec<Vertex> {
        let deg = self.degrees_into(from, into);
        from.iter()
            .zip(deg)
            .filter(|&(_, d)| sign * (d as f64 / into.len() as f64 - self.density) > 0.0)
            .map(|(&v, _)| v)
            .collect()
    }

    fn violates(&self, x: &[Vertex], y: &[Vertex]) -> bool {
        x.len() >= self.sx
            && y.len() >= self.sy
            && (self.pair_density(x, y) - self.density).abs() >= self.gamma - 1e-12
    }

    /// Alternate best-response steps at threshold size from `(x, y)`, then
    /// try to grow a violating pair to all vertices on the deviating side.
    fn polish(&self, mut x: Vec<Vertex>, mut y: Vec<Vertex>, sign: f64) -> Option<(Vec<Vertex>, Vec<Vertex>)> {
        let mut found = self.violates(&x, &y).then(|| (x.clone(), y.clone()));
        for _ in 0..3 {
            if found.is_some() {
                break;
            }
            x = self.extreme(self.a, &y, self.sx, sign);
            y = self.extreme(self.b, &x, self.sy, sign);
            if self.violates(&x, &y) {
                found = Some((x.clone(), y.clone()));
            }
        }
        let (mut x, mut y) = found?;
        for _ in 0..2 {
            let gy = self.above(self.b, &x, sign);
            if !self.violates(&x, &gy) {
                break;
            }
            y = gy;
            let gx = self.above(self.a, &y, sign);
            if !self.violates(&gx, &y) {
                break;
            }
            x = gx;
        }
        Some((x, y))
    }

    fn sampling_witness(&self, samples: usize, rng: &mut Rng) -> Option<(Vec<Vertex>, Vec<Vertex>)> {
        for s in 0..samples {
            let (x, y) = if s % 2 == 0 {
                (
                    sorted(self.a.choose_multiple(rng, self.sx).copied()),
                    sorted(self.b.choose_multiple(rng, self.sy).copied()),
                )
            } else {
                // Seed Y inside or outside one vertex's neighbourhood.
                let &a0 = self.a.choose(rng).expect("non-empty class");
                let row = self.g.neighbor_row(a0);
                let (inside, outside): (Vec<Vertex>, Vec<Vertex>) =
                    self.b.iter().partition(|&&v| row.contains(v as usize));
                let pool = if (s / 2) % 2 == 0 && inside.len() >= self.sy || outside.len() < self.sy {
                    inside
                } else {
                    outside
                };
                let y = sorted(pool.iter().copied().choose_multiple(rng, self.sy));
                (self.extreme(self.a, &y, self.sx, 1.0), y)
            };
            if y.len() < self.sy {
                continue;
            }
            let dev = self.pair_density(&x, &y) - self.density;
            let sign = if dev > 0.0 || (dev == 0.0 && s % 4 < 2) { 1.0 } else { -1.0 };
            if let Some(w) = self.polish(x.clone(), y.clone(), sign) {
                return Some(w);
            }
            if dev != 0.0 {
                if let Some(w) = self.polish(x, y, -sign) {
                    return Some(w);
                }
            }
        }
        None
    }

    /// Upper bound on σ₁(N)² for N = M − dJ, from NNᵀ built out of degrees
    /// and codegrees: min(Frobenius norm, max absolute row sum).
    fn spectral_bound(&self) -> f64 {
        let mask = self.mask(self.b);
        let rows: Vec<FixedBitSet> = self
            .a
            .iter()
            .map(|&u| {
                let mut r = self.g.neighbor_row(u).clone();
                r.intersect_with(&mask);
                r
            })
            .collect();
        let deg: Vec<f64> = rows.iter().map(|r| r.count_ones(..) as f64).collect();
        let d = self.density;
        let b = self.b.len() as f64;
        let mut frob = 0.0;
        let mut max_row: f64 = 0.0;
        for i in 0..rows.len() {
            let mut row_sum = 0.0;
            for j in 0..rows.len() {
                let codeg = if i == j { deg[i] } else { rows[i].intersection_count(&rows[j]) as f64 };
                let entry = codeg - d * deg[i] - d * deg[j] + d * d * b;
                frob += entry * entry;
                row_sum += entry.abs();
            }
            max_row = max_row.max(row_sum);
        }
        frob.sqrt().min(max_row)
    }
}

fn sorted(it: impl IntoIterator<Item = Vertex>) -> Vec<Vertex> {
    let mut v: Vec<Vertex> = it.into_iter().collect();
    v.sort_unstable();
    v
}

/// Judge whether (A, B) is γ-regular with the chosen method.
pub fn check_regular_pair(
    g: &Graph,
    a: &[Vertex],
    b: &[Vertex],
    gamma: f64,
    method: RegularityMethod,
    rng: &mut Rng,
) -> Result<PairVerdict> {
    check_gamma(gamma)?;
    let density = g.density(a, b)?;
    let view = PairView {
        g,
        a,
        b,
        density: density.to_f64().unwrap_or(0.0),
        gamma,
        sx: threshold_size(gamma, a.len()),
        sy: threshold_size(gamma, b.len()),
    };
    let (regular, found) = match method {
        RegularityMethod::Sampling { samples } => {
            let w = view.sampling_witness(samples, rng);
            (w.is_none(), w)
        }
        RegularityMethod::DegreeCodegree => {
            let bound = view.spectral_bound();
            let certified = bound <= gamma.powi(4) * (a.len() * b.len()) as f64 * (1.0 - 1e-12);
            if certified {
                (true, None)
            } else {
                let mut w = None;
                for sign in [1.0, -1.0] {
                    let x = view.extreme(a, b, view.sx, sign);
                    let y = view.extreme(b, &x, view.sy, sign);
                    w = view.polish(x, y, sign);
                    if w.is_some() {
                        break;
                    }
                }
                (false, w)
            }
        }
    };
    let witness = found.map(|(x, y)| Witness { density: ratio(g.edges_between(&x, &y), x.len() * y.len()), x, y });
    Ok(PairVerdict { pair: (0, 1), density, regular, method: method.tag(), witness })
}

/// Verdicts for every class pair i < j of a partition, in lexicographic
/// pair order.
#[derive(Clone, Debug, Serialize)]
pub struct PairTable {
    pub classes: usize,
    pub gamma: f64,
    pub verdicts: Vec<PairVerdict>,
}

impl PairTable {
    fn slot(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        let m = self.classes;
        i * (2 * m - i - 1) / 2 + (j - i - 1)
    }

    pub fn get(&self, i: usize, j: usize) -> &PairVerdict {
        &self.verdicts[self.slot(i, j)]
    }

    pub fn irregular_count(&self) -> usize {
        self.verdicts.iter().filter(|v| !v.regular).count()
    }

    /// `i,j,density,regular,method` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("i,j,density,regular,method\n");
        for v in &self.verdicts {
            let _ = writeln!(out, "{},{},{},{},{}", v.pair.0, v.pair.1, v.density, v.regular, v.method);
        }
        out
    }
}

/// Judge every class pair. Each pair draws from its own stream derived from
/// one draw of `rng`, so the table does not depend on thread scheduling.
pub fn judge_pairs(
    g: &Graph,
    p: &VertexPartition,
    gamma: f64,
    method: RegularityMethod,
    rng: &mut Rng,
) -> Result<PairTable> {
    check_gamma(gamma)?;
    if p.n() != g.n() {
        return Err(Error::arg(format!("partition covers {} vertices, graph has {}", p.n(), g.n())));
    }
    let master: u64 = rng.gen();
    let m = p.len();
    let pairs: Vec<(usize, usize)> = (0..m).flat_map(|i| (i + 1..m).map(move |j| (i, j))).collect();
    let verdicts = pairs
        .par_iter()
        .enumerate()
        .map(|(idx, &(i, j))| {
            let mut r = rng_from(master, "pair", idx as u64);
            let mut v = check_regular_pair(g, p.class(i), p.class(j), gamma, method, &mut r)?;
            v.pair = (i, j);
            Ok(v)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PairTable { classes: m, gamma, verdicts })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PartitionVerdict {
    pub classes: usize,
    pub irregular_pairs: usize,
    pub total_pairs: usize,
    pub irregular_fraction: f64,
    /// At most γ·C(m,2) pairs were judged irregular.
    pub certified: bool,
    pub rounds: usize,
    pub method: &'static str,
}

/// Iterative refinement: start from ⌈1/γ⌉ equitable classes, judge all
/// pairs, and split each class at most once per round along the witness of
/// its most deviating irregular pair. Stops once at most γ·C(m,2) pairs are
/// irregular, or uncertified when no split fits under `max_classes`.
pub fn regularity_partition(
    g: &Graph,
    gamma: f64,
    max_classes: usize,
    method: RegularityMethod,
    rng: &mut Rng,
) -> Result<(VertexPartition, PartitionVerdict)> {
    check_gamma(gamma)?;
    let start = (1.0 / gamma).ceil() as usize;
    if start > max_classes {
        return Err(Error::arg(format!("max_classes {max_classes} is below ⌈1/γ⌉ = {start}")));
    }
    let mut p = equitable_partition(g.n(), start, rng)?.with_origin(PartitionOrigin::Regularized);
    let mut rounds = 0;
    loop {
        rounds += 1;
        let table = judge_pairs(g, &p, gamma, method, rng)?;
        let m = p.len();
        let total = m * (m - 1) / 2;
        let irregular = table.irregular_count();
        let verdict = |certified| PartitionVerdict {
            classes: m,
            irregular_pairs: irregular,
            total_pairs: total,
            irregular_fraction: if total == 0 { 0.0 } else { irregular as f64 / total as f64 },
            certified,
            rounds,
            method: method.tag(),
        };
        if irregular as f64 <= gamma * total as f64 {
            return Ok((p, verdict(true)));
        }
        let mut witnessed: Vec<&PairVerdict> = table.verdicts.iter().filter(|v| v.witness.is_some()).collect();
        witnessed.sort_by(|a, b| b.deviation().total_cmp(&a.deviation()).then(a.pair.cmp(&b.pair)));
        let mut split: Vec<Option<Vec<Vertex>>> = vec![None; m];
        let mut budget = max_classes - m;
        for v in witnessed {
            let w = v.witness.as_ref().expect("filtered");
            for (class, part, other) in [(v.pair.0, &w.x, &w.y), (v.pair.1, &w.y, &w.x)] {
                if budget > 0 && split[class].is_none() {
                    let inside = midpoint_split(g, p.class(class), part, other, v);
                    if inside.len() < p.class(class).len() {
                        split[class] = Some(inside);
                        budget -= 1;
                    }
                }
            }
        }
        if split.iter().all(Option::is_none) {
            return Ok((p, verdict(false)));
        }
        let mut classes = Vec::with_capacity(max_classes);
        for (i, part) in split.into_iter().enumerate() {
            match part {
                None => classes.push(p.class(i).to_vec()),
                Some(inside) => {
                    let rest: Vec<Vertex> = p.class(i).iter().copied().filter(|v| inside.binary_search(v).is_err()).collect();
                    classes.push(inside);
                    classes.push(rest);
                }
            }
        }
        p = VertexPartition::new(g.n(), classes, PartitionOrigin::Regularized)?;
    }
}

/// Vertices of `class` whose density into the witness's other side lies
/// beyond the midpoint between the witness density and the pair density,
/// on the witness's side. Falls back to the witness part itself when that
/// set is empty or the whole class.
fn midpoint_split(g: &Graph, class: &[Vertex], part: &[Vertex], other: &[Vertex], v: &PairVerdict) -> Vec<Vertex> {
    let w = v.witness.as_ref().expect("split needs a witness");
    let pair = v.density.to_f64().unwrap_or(0.0);
    let wd = w.density.to_f64().unwrap_or(0.0);
    let (sign, mid) = (if wd > pair { 1.0 } else { -1.0 }, (wd + pair) / 2.0);
    let mut mask = FixedBitSet::with_capacity(g.n());
    for &u in other {
        mask.insert(u as usize);
    }
    let inside: Vec<Vertex> = class
        .iter()
        .copied()
        .filter(|&x| {
            let d = g.neighbor_row(x).intersection_count(&mask) as f64 / other.len() as f64;
            sign * (d - mid) > 0.0
        })
        .collect();
    if inside.is_empty() || inside.len() == class.len() {
        part.to_vec()
    } else {
        inside
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscardReport {
    pub internal: usize,
    pub irregular: usize,
    pub sparse: usize,
    pub kept: usize,
    pub discarded: usize,
    /// 0.72·δ·n²; the count is compared against it as a diagnostic only.
    pub bound: f64,
    pub within_bound: bool,
}

fn dense_enough(v: &PairVerdict, delta: &Rational) -> bool {
    v.density >= *delta
}

/// G*: keep exactly the edges between distinct classes whose pair was
/// judged regular with density at least δ.
pub fn discard_edges(g: &Graph, p: &VertexPartition, table: &PairTable, delta: &Rational) -> (Graph, DiscardReport) {
    let (mut internal, mut irregular, mut sparse) = (0, 0, 0);
    let kept = g.spanning_subgraph(|Edge(u, v)| {
        let (i, j) = (p.class_of(u), p.class_of(v));
        if i == j {
            internal += 1;
            return false;
        }
        let verdict = table.get(i, j);
        if !dense_enough(verdict, delta) {
            sparse += 1;
            false
        } else if !verdict.regular {
            irregular += 1;
            false
        } else {
            true
        }
    });
    let n = g.n() as f64;
    let bound = DISCARD_BOUND_FACTOR * delta.to_f64().unwrap_or(0.0) * n * n;
    let discarded = internal + irregular + sparse;
    let report = DiscardReport {
        internal,
        irregular,
        sparse,
        kept: kept.edge_count(),
        discarded,
        bound,
        within_bound: (discarded as f64) < bound,
    };
    (kept, report)
}

/// One vertex per class; (i, j) is an edge iff the pair was judged regular
/// with density at least δ.
#[derive(Clone, Debug)]
pub struct ReducedGraph {
    pub base: Graph,
    pub densities: BTreeMap<Edge, Rational>,
    pub partition: VertexPartition,
    pub gamma: f64,
    pub delta: Rational,
}

impl ReducedGraph {
    pub fn density(&self, i: usize, j: usize) -> Option<&Rational> {
        self.densities.get(&Edge::new(i as Vertex, j as Vertex))
    }
}

pub fn build_reduced_graph(p: &VertexPartition, table: &PairTable, delta: &Rational) -> Result<ReducedGraph> {
    let mut densities = BTreeMap::new();
    for v in &table.verdicts {
        if v.regular && dense_enough(v, delta) {
            densities.insert(Edge::new(v.pair.0 as Vertex, v.pair.1 as Vertex), v.density.clone());
        }
    }
    let base = Graph::from_edges(p.len(), densities.keys().map(|e| (e.0, e.1)))?;
    Ok(ReducedGraph { base, densities, partition: p.clone(), gamma: table.gamma, delta: delta.clone() })
}

/// ψ′ together with the normaliser it was divided by.
#[derive(Clone, Debug)]
pub struct Projection {
    pub packing: FractionalPacking,
    /// t_max² where t_max is the largest class size; equals n²/m² when the
    /// classes have equal size.
    pub scale: Rational,
}

/// ψ′(H) = Σ ψ*(partite copies of H) / t_max² for every labeled copy H in R.
/// The support of ψ* must consist of labeled copies whose vertices lie in
/// distinct classes and whose edges all map to edges of R.
pub fn project_packing_to_reduced(
    psi_star: &FractionalPacking,
    family: &Family,
    r: &ReducedGraph,
) -> Result<Projection> {
    if psi_star.labeling() != Labeling::Labeled {
        return Err(Error::arg("projection needs a labeled packing"));
    }
    let p = &r.partition;
    let t = p.max_class_size();
    let scale = ratio(t * t, 1);
    let mut out = FractionalPacking::new(Labeling::Labeled);
    for (copy, w) in psi_star.support() {
        let classes: Vec<Vertex> = copy.map.iter().map(|&v| p.class_of(v) as Vertex).collect();
        let r_copy = LabeledCopy::new(copy.pattern_id, classes);
        let pattern = family.pattern(copy.pattern_id);
        if !r_copy.is_valid_in(pattern, &r.base) {
            return Err(Error::arg(format!(
                "copy `{}` is not good or uses a pair outside R",
                copy.dump_line()
            )));
        }
        out.add(r_copy, w / &scale);
    }
    Ok(Projection { packing: out, scale })
}

/// Exact check that the R-edge loads of ψ′ stay within the pair densities.
pub fn projection_loads_ok(psi_prime: &FractionalPacking, family: &Family, r: &ReducedGraph) -> bool {
    psi_prime
        .edge_loads(family)
        .iter()
        .all(|(e, load)| r.densities.get(e).is_some_and(|d| load <= d))
}

/// Exact w(ψ′)·scale == w(ψ*).
pub fn projection_identity_holds(psi_star: &FractionalPacking, proj: &Projection) -> bool {
    packing_weight(&proj.packing) * &proj.scale == packing_weight(psi_star)
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeCount {
    pub edge: Edge,
    pub count: u64,
    pub expected: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CountingReport {
    pub class_size: usize,
    pub edges_checked: usize,
    pub satisfied: usize,
    pub fraction: f64,
    /// max |c(e) − expected| / t^(k−2).
    pub max_relative_deviation: f64,
    /// Dropping the violating edges keeps at least (1 − ζ)|E(W)| edges.
    pub survivors_ok: bool,
    #[serde(skip)]
    pub per_edge: Vec<EdgeCount>,
}

/// For every edge e of W on a pattern-edge class pair (i, j), compare the
/// number c(e) of partite copies through e with
/// t^(k−2) · Π d(s,p) / d(i,j) and count how often the gap is below ζ t^(k−2).
pub fn counting_lemma_check(
    w: &Graph,
    pattern: &Graph,
    classes: &[Vec<Vertex>],
    zeta: f64,
    delta: &Rational,
) -> Result<CountingReport> {
    let k = pattern.n();
    if classes.len() != k {
        return Err(Error::arg(format!("pattern has {k} vertices but {} classes were given", classes.len())));
    }
    let t = classes[0].len();
    if classes.iter().any(|c| c.len() != t) {
        return Err(Error::arg("counting check needs classes of equal size"));
    }
    let mut dens = BTreeMap::new();
    for &Edge(s, q) in pattern.edges() {
        let d = w.density(&classes[s as usize], &classes[q as usize])?;
        if d < *delta {
            return Err(Error::arg(format!("classes {s} and {q} have density {d} below delta {delta}")));
        }
        dens.insert(Edge(s, q), d);
    }
    let product: Rational = dens.values().fold(ratio(1, 1), |acc, d| acc * d);
    let unit = (t as f64).powi(k as i32 - 2);
    let counts = partite_edge_counts(w, pattern, classes)?;

    let mut class_of = vec![usize::MAX; w.n()];
    for (i, c) in classes.iter().enumerate() {
        for &v in c {
            class_of[v as usize] = i;
        }
    }
    let mut per_edge = Vec::new();
    let mut satisfied = 0;
    let mut max_dev: f64 = 0.0;
    for (id, &e) in w.edges().iter().enumerate() {
        let (cu, cv) = (class_of[e.0 as usize], class_of[e.1 as usize]);
        if cu == usize::MAX || cv == usize::MAX || cu == cv {
            continue;
        }
        let Some(d) = dens.get(&Edge::new(cu as Vertex, cv as Vertex)) else {
            continue;
        };
        let expected = unit * (&product / d).to_f64().unwrap_or(0.0);
        let dev = (counts[id] as f64 - expected).abs();
        if dev < zeta * unit {
            satisfied += 1;
        }
        max_dev = max_dev.max(dev / unit);
        per_edge.push(EdgeCount { edge: e, count: counts[id], expected });
    }
    let checked = per_edge.len();
    let fraction = if checked == 0 { 1.0 } else { satisfied as f64 / checked as f64 };
    let survivors_ok = (w.edge_count() - (checked - satisfied)) as f64 >= (1.0 - zeta) * w.edge_count() as f64;
    Ok(CountingReport {
        class_size: t,
        edges_checked: checked,
        satisfied,
        fraction,
        max_relative_deviation: max_dev,
        survivors_ok,
        per_edge,
    })
}

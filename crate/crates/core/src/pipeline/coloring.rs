//! Good copies, the random edge coloring by R-copies, the per-color
//! subgraphs X_H, and the concentration check on them.

use std::collections::BTreeMap;

use num_traits::{One, ToPrimitive, Zero};
use rand::Rng as _;
use serde::Serialize;

use crate::copies::{partite_edge_counts, LabeledCopy};
use crate::error::{Error, Result};
use crate::family::Family;
use crate::graph::{Edge, Graph, Vertex};
use crate::lp::{restrict_packing, FractionalPacking};
use crate::partition::VertexPartition;
use crate::regularity::ReducedGraph;
use crate::seed::Rng;
use crate::Rational;

/// ψ**: keep copies with at most `k0` vertices lying in distinct classes.
pub fn restrict_to_good(psi: &FractionalPacking, family: &Family, p: &VertexPartition, k0: usize) -> FractionalPacking {
    restrict_packing(psi, |c| {
        let k = family.pattern(c.pattern_id).n();
        if k > k0 {
            return false;
        }
        let mut classes: Vec<usize> = c.map.iter().map(|&v| p.class_of(v)).collect();
        classes.sort_unstable();
        classes.windows(2).all(|w| w[0] != w[1])
    })
}

/// Colors of G* edges. Colors are labeled copies of family members in R,
/// indexed by their position in `colors`.
#[derive(Clone, Debug)]
pub struct ColorAssignment {
    pub colors: Vec<LabeledCopy>,
    /// Color index per G* edge id; `None` for uncolored edges.
    pub edge_color: Vec<Option<u32>>,
    /// Largest per-pair eligible probability mass Σ ψ′(H)/d(i,j).
    pub max_mass: Rational,
}

impl ColorAssignment {
    pub fn colored_count(&self) -> usize {
        self.edge_color.iter().filter(|c| c.is_some()).count()
    }

    pub fn edges_with(&self, color: usize) -> usize {
        self.edge_color.iter().filter(|&&c| c == Some(color as u32)).count()
    }
}

/// Per R-edge list of (color index, probability ψ′(H)/d(i,j)).
pub fn eligible_colors(
    psi_prime: &FractionalPacking,
    family: &Family,
    r: &ReducedGraph,
) -> Result<(Vec<LabeledCopy>, BTreeMap<Edge, Vec<(u32, Rational)>>)> {
    let mut colors = Vec::with_capacity(psi_prime.support_len());
    let mut by_pair: BTreeMap<Edge, Vec<(u32, Rational)>> = BTreeMap::new();
    for (idx, (h, w)) in psi_prime.support().enumerate() {
        colors.push(h.clone());
        for e in h.host_edges(family.pattern(h.pattern_id)) {
            let d = r
                .densities
                .get(&e)
                .ok_or_else(|| Error::arg(format!("color `{}` uses {e}, which is not an edge of R", h.dump_line())))?;
            by_pair.entry(e).or_default().push((idx as u32, w / d));
        }
    }
    Ok((colors, by_pair))
}

/// Each G* edge in pair (i, j) independently takes color H with
/// probability ψ′(H)/d(i, j), or stays uncolored with the residual
/// probability. Fails if some pair's total mass exceeds one.
pub fn random_coloring(
    g_star: &Graph,
    r: &ReducedGraph,
    psi_prime: &FractionalPacking,
    family: &Family,
    rng: &mut Rng,
) -> Result<ColorAssignment> {
    let (colors, by_pair) = eligible_colors(psi_prime, family, r)?;
    let mut max_mass = Rational::zero();
    let mut cumulative: BTreeMap<Edge, Vec<(u32, f64)>> = BTreeMap::new();
    for (pair, list) in &by_pair {
        let mass = list.iter().fold(Rational::zero(), |acc, (_, p)| acc + p);
        if mass > Rational::one() {
            return Err(Error::arg(format!("colour probabilities on pair {pair} sum to {mass} > 1")));
        }
        if mass > max_mass {
            max_mass = mass;
        }
        let mut acc = Rational::zero();
        let cum = list
            .iter()
            .map(|(c, p)| {
                acc += p;
                (*c, acc.to_f64().unwrap_or(0.0))
            })
            .collect();
        cumulative.insert(*pair, cum);
    }
    let p = &r.partition;
    let edge_color = g_star
        .edges()
        .iter()
        .map(|&Edge(u, v)| {
            let pair = Edge::new(p.class_of(u) as Vertex, p.class_of(v) as Vertex);
            let draw: f64 = rng.gen();
            let cum = cumulative.get(&pair)?;
            cum.iter().find(|&&(_, c)| draw < c).map(|&(idx, _)| idx)
        })
        .collect();
    Ok(ColorAssignment { colors, edge_color, max_mass })
}

/// X_H: the spanning subgraph of G* formed by the edges colored `color`.
pub fn build_color_subgraph(g_star: &Graph, assignment: &ColorAssignment, color: usize) -> Graph {
    let mut id = 0;
    g_star.spanning_subgraph(|_| {
        let keep = assignment.edge_color[id] == Some(color as u32);
        id += 1;
        keep
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ConcentrationReport {
    /// t^(k−2) ψ′(H)^(r−1).
    pub target: f64,
    pub edges: usize,
    pub satisfied: usize,
    pub fraction: f64,
    /// max |c_H(e) − target| / target.
    pub max_relative_deviation: f64,
}

/// For every edge e of X_H count the partite copies c_H(e) through it and
/// test |c_H(e) − t^(k−2)ψ′^(r−1)| < μ t^(k−2)ψ′^(r−1).
pub fn concentration_check(
    x_h: &Graph,
    pattern: &Graph,
    classes: &[Vec<Vertex>],
    psi_prime_h: &Rational,
    mu: f64,
    t: usize,
) -> Result<ConcentrationReport> {
    let counts = partite_edge_counts(x_h, pattern, classes)?;
    let k = pattern.n() as i32;
    let r = pattern.edge_count() as i32;
    let target = (t as f64).powi(k - 2) * psi_prime_h.to_f64().unwrap_or(0.0).powi(r - 1);
    let mut satisfied = 0;
    let mut max_dev: f64 = 0.0;
    for &c in &counts {
        let dev = (c as f64 - target).abs();
        if dev < mu * target {
            satisfied += 1;
        }
        if target > 0.0 {
            max_dev = max_dev.max(dev / target);
        }
    }
    let edges = counts.len();
    Ok(ConcentrationReport {
        target,
        edges,
        satisfied,
        fraction: if edges == 0 { 1.0 } else { satisfied as f64 / edges as f64 },
        max_relative_deviation: max_dev,
    })
}

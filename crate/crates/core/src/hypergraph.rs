//! Uniform hypergraphs and near-perfect matchings by the semi-random nibble.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::seed::Rng;

pub const DEFAULT_BITE_FRACTION: f64 = 0.1;
pub const DEFAULT_ROUND_CAP: usize = 200;

/// r-uniform hypergraph on vertices `0..q`, hyperedges stored flat with
/// sorted vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniformHypergraph {
    q: usize,
    r: usize,
    flat: Vec<u32>,
}

impl UniformHypergraph {
    /// Rejects wrong-sized, repeated-vertex, out-of-range and duplicate hyperedges.
    pub fn new(q: usize, r: usize, edges: impl IntoIterator<Item = Vec<u32>>) -> Result<Self> {
        Self::build(q, r, edges, false)
    }

    /// Like [`UniformHypergraph::new`] but silently drops duplicate hyperedges.
    pub fn new_dedup(q: usize, r: usize, edges: impl IntoIterator<Item = Vec<u32>>) -> Result<Self> {
        Self::build(q, r, edges, true)
    }

    fn build(q: usize, r: usize, edges: impl IntoIterator<Item = Vec<u32>>, dedup: bool) -> Result<Self> {
        if r == 0 {
            return Err(Error::arg("uniformity must be positive"));
        }
        let mut seen = BTreeSet::new();
        let mut flat = Vec::new();
        for mut e in edges {
            e.sort_unstable();
            if e.len() != r {
                return Err(Error::arg(format!("hyperedge {e:?} does not have {r} vertices")));
            }
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::arg(format!("hyperedge {e:?} repeats a vertex")));
            }
            if e.iter().any(|&v| v as usize >= q) {
                return Err(Error::arg(format!("hyperedge {e:?} leaves the vertex range 0..{q}")));
            }
            if !seen.insert(e.clone()) {
                if dedup {
                    continue;
                }
                return Err(Error::arg(format!("duplicate hyperedge {e:?}")));
            }
            flat.extend_from_slice(&e);
        }
        Ok(UniformHypergraph { q, r, flat })
    }

    /// Complete r-uniform hypergraph on q vertices.
    pub fn complete(q: usize, r: usize) -> Self {
        let mut flat = Vec::new();
        let mut comb: Vec<u32> = (0..r as u32).collect();
        if r <= q {
            loop {
                flat.extend_from_slice(&comb);
                let mut i = r;
                while i > 0 && comb[i - 1] as usize == q - r + i - 1 {
                    i -= 1;
                }
                if i == 0 {
                    break;
                }
                comb[i - 1] += 1;
                for j in i..r {
                    comb[j] = comb[j - 1] + 1;
                }
            }
        }
        UniformHypergraph { q, r, flat }
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn edge_count(&self) -> usize {
        self.flat.len() / self.r
    }

    pub fn edge(&self, i: usize) -> &[u32] {
        &self.flat[i * self.r..(i + 1) * self.r]
    }

    pub fn edges(&self) -> impl Iterator<Item = &[u32]> {
        self.flat.chunks_exact(self.r)
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.q];
        for &v in &self.flat {
            deg[v as usize] += 1;
        }
        deg
    }

    /// Text form: `q r` header, then one hyperedge per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.q, self.r);
        for e in self.edges() {
            let line: Vec<String> = e.iter().map(u32::to_string).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, message: "missing `q r` header".into() })?;
        let nums = parse_numbers(header, hline)?;
        let [q, r] = nums[..] else {
            return Err(Error::Parse { line: hline, message: "header must be `q r`".into() });
        };
        let mut edges = Vec::new();
        for (line, body) in lines {
            let e = parse_numbers(body, line)?;
            if e.len() != r as usize {
                return Err(Error::Parse { line, message: format!("expected {r} vertices") });
            }
            edges.push(e);
        }
        Self::new(q as usize, r as usize, edges)
    }
}

fn parse_numbers(body: &str, line: usize) -> Result<Vec<u32>> {
    body.split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::Parse { line, message: format!("bad integer `{t}`") }))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DegreeProfile {
    pub d_min: usize,
    pub d_max: usize,
    /// Largest co-degree over vertex pairs that share at least one hyperedge.
    pub max_codegree: usize,
    /// Average degree.
    pub suggested_d: f64,
}

/// Exact degree and co-degree statistics.
pub fn degree_profile(l: &UniformHypergraph) -> DegreeProfile {
    let deg = l.degrees();
    let mut incident: Vec<Vec<u32>> = vec![Vec::new(); l.q];
    for (i, e) in l.edges().enumerate() {
        for &v in e {
            incident[v as usize].push(i as u32);
        }
    }
    let mut counter = vec![0usize; l.q];
    let mut touched = Vec::new();
    let mut max_codegree = 0;
    for x in 0..l.q {
        for &ei in &incident[x] {
            for &y in l.edge(ei as usize) {
                if y as usize > x {
                    if counter[y as usize] == 0 {
                        touched.push(y as usize);
                    }
                    counter[y as usize] += 1;
                }
            }
        }
        for &y in &touched {
            max_codegree = max_codegree.max(counter[y]);
            counter[y] = 0;
        }
        touched.clear();
    }
    DegreeProfile {
        d_min: deg.iter().copied().min().unwrap_or(0),
        d_max: deg.iter().copied().max().unwrap_or(0),
        max_codegree,
        suggested_d: if l.q == 0 { 0.0 } else { (l.r * l.edge_count()) as f64 / l.q as f64 },
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PippengerVerdict {
    pub accepted: bool,
    /// (1−μ)d < deg(x) < (1+μ)d for every vertex.
    pub degrees_ok: bool,
    /// deg(x,y) < μd for every pair.
    pub codegrees_ok: bool,
    pub profile: DegreeProfile,
    pub mu: f64,
    pub d: f64,
}

/// Check the near-regularity and small co-degree conditions of the
/// Frankl–Rödl/Pippenger matching theorem for a given `d`.
pub fn check_pippenger_conditions(l: &UniformHypergraph, mu: f64, d: f64) -> PippengerVerdict {
    let profile = degree_profile(l);
    let lo = (1.0 - mu) * d;
    let hi = (1.0 + mu) * d;
    let degrees_ok = l.q == 0 || (lo < profile.d_min as f64 && (profile.d_max as f64) < hi);
    let codegrees_ok = (profile.max_codegree as f64) < mu * d;
    PippengerVerdict { accepted: degrees_ok && codegrees_ok, degrees_ok, codegrees_ok, profile, mu, d }
}

/// Vertex-disjoint hyperedges, by index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Matching {
    pub edges: Vec<usize>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    /// Independent disjointness check.
    pub fn is_valid_for(&self, l: &UniformHypergraph) -> bool {
        let mut seen = FixedBitSet::with_capacity(l.q);
        let mut ids = BTreeSet::new();
        self.edges.iter().all(|&i| {
            i < l.edge_count() && ids.insert(i) && l.edge(i).iter().all(|&v| !seen.put(v as usize))
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct NibbleOutcome {
    pub matching: Matching,
    pub rounds: usize,
    /// Hyperedges taken by nibble rounds; the rest came from the final sweep.
    pub from_nibble: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NibbleParams {
    pub beta: f64,
    pub bite_fraction: f64,
    pub round_cap: usize,
}

impl Default for NibbleParams {
    fn default() -> Self {
        NibbleParams { beta: 0.1, bite_fraction: DEFAULT_BITE_FRACTION, round_cap: DEFAULT_ROUND_CAP }
    }
}

/// Semi-random nibble followed by a greedy sweep.
///
/// Each round samples every surviving hyperedge with probability
/// `bite_fraction / D`, where D is the current average degree over
/// uncovered vertices that still lie in a surviving hyperedge, keeps the
/// sampled hyperedges that meet no other sampled one, and deletes the
/// covered vertices. Rounds stop once a (1 − β) fraction of the vertices
/// is covered, nothing survives, the sampling probability reaches one, or
/// the round cap is hit. A random greedy sweep then makes the matching
/// maximal.
pub fn nibble_matching(l: &UniformHypergraph, params: NibbleParams, rng: &mut Rng) -> NibbleOutcome {
    let r = l.r;
    let mut covered = FixedBitSet::with_capacity(l.q);
    let mut alive: Vec<u32> = (0..l.edge_count() as u32).collect();
    let mut matching = Vec::new();
    let mut hits = vec![0u32; l.q];
    let mut rounds = 0;
    let target = ((1.0 - params.beta) * l.q as f64).ceil() as usize;

    while rounds < params.round_cap && !alive.is_empty() && covered.count_ones(..) < target {
        let mut active = FixedBitSet::with_capacity(l.q);
        for &e in &alive {
            for &v in l.edge(e as usize) {
                active.insert(v as usize);
            }
        }
        let avg_degree = (r * alive.len()) as f64 / active.count_ones(..) as f64;
        let p = params.bite_fraction / avg_degree;
        if p >= 1.0 {
            break;
        }
        let sampled: Vec<u32> = alive.iter().copied().filter(|_| rng.gen::<f64>() < p).collect();
        for &e in &sampled {
            for &v in l.edge(e as usize) {
                hits[v as usize] += 1;
            }
        }
        for &e in &sampled {
            if l.edge(e as usize).iter().all(|&v| hits[v as usize] == 1) {
                matching.push(e as usize);
                for &v in l.edge(e as usize) {
                    covered.insert(v as usize);
                }
            }
        }
        for &e in &sampled {
            for &v in l.edge(e as usize) {
                hits[v as usize] = 0;
            }
        }
        alive.retain(|&e| l.edge(e as usize).iter().all(|&v| !covered.contains(v as usize)));
        rounds += 1;
    }
    let from_nibble = matching.len();
    alive.shuffle(rng);
    for e in alive {
        let verts = l.edge(e as usize);
        if verts.iter().all(|&v| !covered.contains(v as usize)) {
            for &v in verts {
                covered.insert(v as usize);
            }
            matching.push(e as usize);
        }
    }
    matching.sort_unstable();
    NibbleOutcome { matching: Matching { edges: matching }, rounds, from_nibble }
}

/// Maximal matching taking hyperedges in uniformly random order.
pub fn greedy_matching(l: &UniformHypergraph, rng: &mut Rng) -> Matching {
    let mut order: Vec<usize> = (0..l.edge_count()).collect();
    order.shuffle(rng);
    let mut covered = FixedBitSet::with_capacity(l.q);
    let mut edges = Vec::new();
    for e in order {
        if l.edge(e).iter().all(|&v| !covered.contains(v as usize)) {
            for &v in l.edge(e) {
                covered.insert(v as usize);
            }
            edges.push(e);
        }
    }
    edges.sort_unstable();
    Matching { edges }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng;

    fn perfect_matching() -> UniformHypergraph {
        UniformHypergraph::new(6, 3, vec![vec![0, 1, 2], vec![3, 4, 5]]).unwrap()
    }

    #[test]
    fn construction_checks() {
        assert!(UniformHypergraph::new(4, 3, vec![vec![0, 1]]).is_err());
        assert!(UniformHypergraph::new(4, 3, vec![vec![0, 1, 1]]).is_err());
        assert!(UniformHypergraph::new(4, 3, vec![vec![0, 1, 4]]).is_err());
        assert!(UniformHypergraph::new(4, 3, vec![vec![0, 1, 2], vec![2, 1, 0]]).is_err());
        assert_eq!(UniformHypergraph::new_dedup(4, 3, vec![vec![0, 1, 2], vec![2, 1, 0]]).unwrap().edge_count(), 1);
        assert_eq!(UniformHypergraph::complete(6, 3).edge_count(), 20);
        assert_eq!(UniformHypergraph::complete(2, 3).edge_count(), 0);
    }

    #[test]
    fn text_round_trip() {
        let h = UniformHypergraph::complete(5, 3);
        assert_eq!(UniformHypergraph::parse(&h.to_text()).unwrap(), h);
        assert!(UniformHypergraph::parse("3 2\n0 1 2").is_err());
    }

    #[test]
    fn profiles() {
        let p = degree_profile(&UniformHypergraph::complete(6, 3));
        assert_eq!((p.d_min, p.d_max, p.max_codegree), (10, 10, 4));
        assert_eq!(p.suggested_d, 10.0);

        let p = degree_profile(&perfect_matching());
        assert_eq!((p.d_min, p.d_max, p.max_codegree), (1, 1, 1));

        let lonely = UniformHypergraph::new(4, 3, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(degree_profile(&lonely).d_min, 0);
    }

    #[test]
    fn pippenger_cases() {
        let v = check_pippenger_conditions(&UniformHypergraph::complete(30, 3), 0.1, 406.0);
        assert!(v.accepted, "{v:?}");
        assert_eq!(v.profile.max_codegree, 28);

        let star = UniformHypergraph::new(7, 3, vec![vec![0, 1, 2], vec![0, 3, 4], vec![0, 5, 6]]).unwrap();
        let d = degree_profile(&star).suggested_d;
        let v = check_pippenger_conditions(&star, 0.1, d);
        assert!(!v.accepted);
        assert!(!v.codegrees_ok);

        let empty = UniformHypergraph::new(3, 3, Vec::<Vec<u32>>::new()).unwrap();
        assert!(!check_pippenger_conditions(&empty, 0.1, 0.0).accepted);
    }

    #[test]
    fn nibble_cases() {
        let h = UniformHypergraph::complete(30, 3);
        for seed in 0..10 {
            let out = nibble_matching(&h, NibbleParams::default(), &mut rng(seed));
            assert!(out.matching.is_valid_for(&h));
            assert!(out.matching.size() >= 9, "seed {seed}: {}", out.matching.size());
        }
        let pm = perfect_matching();
        assert_eq!(nibble_matching(&pm, NibbleParams::default(), &mut rng(1)).matching.size(), 2);
        let empty = UniformHypergraph::new(5, 3, Vec::<Vec<u32>>::new()).unwrap();
        assert_eq!(nibble_matching(&empty, NibbleParams::default(), &mut rng(1)).matching.size(), 0);
    }

    #[test]
    fn nibble_is_deterministic() {
        let h = UniformHypergraph::complete(24, 3);
        let a = nibble_matching(&h, NibbleParams::default(), &mut rng(5));
        let b = nibble_matching(&h, NibbleParams::default(), &mut rng(5));
        assert_eq!(a.matching, b.matching);
    }

    #[test]
    fn greedy_cases() {
        assert_eq!(greedy_matching(&perfect_matching(), &mut rng(0)).size(), 2);
        let tri = UniformHypergraph::new(3, 2, vec![vec![0, 1], vec![1, 2], vec![0, 2]]).unwrap();
        assert_eq!(greedy_matching(&tri, &mut rng(0)).size(), 1);
        let empty = UniformHypergraph::new(0, 2, Vec::<Vec<u32>>::new()).unwrap();
        assert_eq!(greedy_matching(&empty, &mut rng(0)).size(), 0);
    }
}

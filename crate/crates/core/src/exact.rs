//! Integer packings: branch-and-bound ground truth for ν_ℱ(G), a random
//! greedy baseline, and an independent verifier.

use std::collections::HashMap;

use fixedbitset::FixedBitSet;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::copies::{enumerate_family_copies, format_copy_dump, CopyIndex, Labeling, LabeledCopy};
use crate::error::Result;
use crate::family::Family;
use crate::graph::{Edge, Graph};
use crate::lp::simplex::{self, PackingLp, Pricing};
use crate::seed::Rng;

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

/// Margin added to floating LP bounds before flooring.
const LP_BOUND_MARGIN: f64 = 1e-6;

/// Pairwise edge-disjoint copies of family members.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntegerPacking {
    pub copies: Vec<LabeledCopy>,
}

impl IntegerPacking {
    pub fn new(mut copies: Vec<LabeledCopy>) -> Self {
        copies.sort_unstable();
        IntegerPacking { copies }
    }

    pub fn size(&self) -> usize {
        self.copies.len()
    }

    pub fn to_dump(&self) -> String {
        format_copy_dump(&self.copies)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchStatus {
    Optimal,
    /// Budget ran out; the packing is the best found, not proven optimal.
    LowerBound,
}

#[derive(Clone, Debug)]
pub struct ExactOutcome {
    pub packing: IntegerPacking,
    pub status: SearchStatus,
    pub nodes: u64,
}

impl ExactOutcome {
    pub fn size(&self) -> usize {
        self.packing.size()
    }
}

struct BranchAndBound<'a> {
    index: &'a CopyIndex,
    order: Vec<usize>,
    min_edges: usize,
    used: FixedBitSet,
    chosen: Vec<usize>,
    best: Vec<usize>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl BranchAndBound<'_> {
    fn is_free(&self, cid: usize) -> bool {
        self.index.edges_of(cid).iter().all(|&e| !self.used.contains(e as usize))
    }

    /// Upper bound on how many more copies fit, using the copies
    /// `order[pos..]` that avoid used edges.
    fn bound(&self, pos: usize) -> usize {
        let avail: Vec<usize> = self.order[pos..].iter().copied().filter(|&c| self.is_free(c)).collect();
        let mut rows: HashMap<u32, u32> = HashMap::new();
        for &c in &avail {
            for &e in self.index.edges_of(c) {
                let next = rows.len() as u32;
                rows.entry(e).or_insert(next);
            }
        }
        let cheap = rows.len() / self.min_edges;
        if self.chosen.len() + cheap <= self.best.len() {
            return cheap;
        }
        let lp = PackingLp {
            rows: rows.len(),
            columns: avail
                .iter()
                .map(|&c| self.index.edges_of(c).iter().map(|e| rows[e]).collect())
                .collect(),
        };
        let value = simplex::solve::<f64>(&lp, Pricing::DantzigThenBland).value;
        cheap.min((value + LP_BOUND_MARGIN).floor() as usize)
    }

    fn search(&mut self, mut pos: usize) {
        if self.nodes >= self.budget {
            self.exhausted = true;
            return;
        }
        self.nodes += 1;
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        while pos < self.order.len() && !self.is_free(self.order[pos]) {
            pos += 1;
        }
        if pos == self.order.len() {
            return;
        }
        if self.chosen.len() + self.bound(pos) <= self.best.len() {
            return;
        }
        let cid = self.order[pos];
        for &e in self.index.edges_of(cid) {
            self.used.insert(e as usize);
        }
        self.chosen.push(cid);
        self.search(pos + 1);
        self.chosen.pop();
        for &e in self.index.edges_of(cid) {
            self.used.set(e as usize, false);
        }
        if self.exhausted {
            return;
        }
        self.search(pos + 1);
    }
}

/// ν_ℱ(G) by branch and bound over copies ordered by (edge count desc,
/// canonical id), branching use/forbid and pruning with a remaining-edge
/// count bound and the LP bound. Deterministic.
pub fn exact_packing(g: &Graph, family: &Family, budget: u64, cap: usize) -> Result<ExactOutcome> {
    let index = enumerate_family_copies(g, family, Labeling::Unlabeled, cap)?.require_complete(cap)?;
    let mut order: Vec<usize> = (0..index.len()).collect();
    order.sort_by_key(|&c| (std::cmp::Reverse(index.edges_of(c).len()), c));
    let mut bb = BranchAndBound {
        index: &index,
        order,
        min_edges: family.min_edges().max(1),
        used: FixedBitSet::with_capacity(g.edge_count()),
        chosen: Vec::new(),
        best: Vec::new(),
        nodes: 0,
        budget,
        exhausted: false,
    };
    bb.search(0);
    let packing = IntegerPacking::new(bb.best.iter().map(|&c| index.copies()[c].clone()).collect());
    Ok(ExactOutcome {
        packing,
        status: if bb.exhausted { SearchStatus::LowerBound } else { SearchStatus::Optimal },
        nodes: bb.nodes,
    })
}

/// Random maximal packing: copies are taken in uniformly random order
/// whenever they avoid the edges already used.
pub fn greedy_packing(g: &Graph, family: &Family, rng: &mut Rng, cap: usize) -> Result<IntegerPacking> {
    let index = enumerate_family_copies(g, family, Labeling::Unlabeled, cap)?.require_complete(cap)?;
    Ok(greedy_over(&index, g.edge_count(), None, rng))
}

/// Greedy over an existing index, skipping copies that touch `blocked`.
pub(crate) fn greedy_over(index: &CopyIndex, edges: usize, blocked: Option<&FixedBitSet>, rng: &mut Rng) -> IntegerPacking {
    let mut used = blocked.cloned().unwrap_or_else(|| FixedBitSet::with_capacity(edges));
    let mut order: Vec<usize> = (0..index.len()).collect();
    order.shuffle(rng);
    let mut taken = Vec::new();
    for c in order {
        let es = index.edges_of(c);
        if es.iter().all(|&e| !used.contains(e as usize)) {
            for &e in es {
                used.insert(e as usize);
            }
            taken.push(index.copies()[c].clone());
        }
    }
    IntegerPacking::new(taken)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PackingConflict {
    UnknownPattern { copy: LabeledCopy },
    NotACopy { copy: LabeledCopy },
    SharedEdge { first: LabeledCopy, second: LabeledCopy, edge: Edge },
}

impl std::fmt::Display for PackingConflict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PackingConflict::UnknownPattern { copy } => write!(f, "`{}` names no family member", copy.dump_line()),
            PackingConflict::NotACopy { copy } => {
                write!(f, "`{}` is not a copy of its pattern in the graph", copy.dump_line())
            }
            PackingConflict::SharedEdge { first, second, edge } => write!(
                f,
                "`{}` and `{}` share edge {} {}",
                first.dump_line(),
                second.dump_line(),
                edge.0,
                edge.1
            ),
        }
    }
}

/// Verdict of [`verify_integer_packing`]; carries the first conflict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegerVerdict {
    pub accepted: bool,
    pub conflict: Option<PackingConflict>,
}

/// Check validity of every copy and pairwise edge-disjointness.
pub fn verify_integer_packing(g: &Graph, family: &Family, p: &IntegerPacking) -> IntegerVerdict {
    let reject = |conflict| IntegerVerdict { accepted: false, conflict: Some(conflict) };
    let mut owner: HashMap<Edge, &LabeledCopy> = HashMap::new();
    for copy in &p.copies {
        let Some(pattern) = family.patterns().get(copy.pattern_id) else {
            return reject(PackingConflict::UnknownPattern { copy: copy.clone() });
        };
        if !copy.is_valid_in(pattern, g) {
            return reject(PackingConflict::NotACopy { copy: copy.clone() });
        }
        for e in copy.host_edges(pattern) {
            if let Some(first) = owner.insert(e, copy) {
                return reject(PackingConflict::SharedEdge { first: first.clone(), second: copy.clone(), edge: e });
            }
        }
    }
    IntegerVerdict { accepted: true, conflict: None }
}

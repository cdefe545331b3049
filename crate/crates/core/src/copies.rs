//! Copies of patterns inside host graphs.
//!
//! All enumeration goes through one backtracking routine that places
//! pattern vertices in a connectivity-first, high-degree-first order and
//! intersects neighbourhood bitsets to get the candidates for the next
//! vertex. Labeled, unlabeled and partite enumeration differ only in the
//! candidate sets they start from and in the filter applied to each hit.

use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::Family;
use crate::graph::{Edge, Graph, Vertex};

/// Default cap on the number of copies kept by an enumeration.
pub const DEFAULT_COPY_CAP: usize = 10_000_000;

/// Largest pattern order accepted by automorphism enumeration.
pub const MAX_PATTERN_ORDER: usize = 10;

/// Injective map from the vertices of family member `pattern_id` into a host;
/// `map[i]` is the host vertex playing pattern vertex `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LabeledCopy {
    pub pattern_id: usize,
    pub map: Vec<Vertex>,
}

impl LabeledCopy {
    pub fn new(pattern_id: usize, map: Vec<Vertex>) -> Self {
        LabeledCopy { pattern_id, map }
    }

    /// Host edges covered by the copy, in pattern-edge order.
    pub fn host_edges<'a>(&'a self, pattern: &'a Graph) -> impl Iterator<Item = Edge> + 'a {
        pattern
            .edges()
            .iter()
            .map(move |&Edge(i, j)| Edge::new(self.map[i as usize], self.map[j as usize]))
    }

    /// Host edge ids, or `None` if some pattern edge is not a host edge.
    pub fn host_edge_ids(&self, pattern: &Graph, host: &Graph) -> Option<Vec<usize>> {
        self.host_edges(pattern).map(|Edge(u, v)| host.edge_id(u, v)).collect()
    }

    /// `true` if the map is injective, sized for the pattern, and every
    /// pattern edge lands on a host edge.
    pub fn is_valid_in(&self, pattern: &Graph, host: &Graph) -> bool {
        if self.map.len() != pattern.n() {
            return false;
        }
        let mut seen = FixedBitSet::with_capacity(host.n());
        for &v in &self.map {
            if v as usize >= host.n() || seen.put(v as usize) {
                return false;
            }
        }
        self.host_edges(pattern).all(|Edge(u, v)| host.has_edge(u, v))
    }

    pub fn dump_line(&self) -> String {
        let mut s = format!("{}:", self.pattern_id);
        for v in &self.map {
            let _ = write!(s, " {v}");
        }
        s
    }
}

/// Text dump, one `pattern_id: v1 v2 ... vk` line per copy.
pub fn format_copy_dump(copies: &[LabeledCopy]) -> String {
    let mut out = String::new();
    for c in copies {
        out.push_str(&c.dump_line());
        out.push('\n');
    }
    out
}

/// Parse a copy dump. Blank lines and `#` comments are skipped.
pub fn parse_copy_dump(text: &str) -> Result<Vec<LabeledCopy>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let bad = |message: String| Error::Parse { line: i + 1, message };
        let (head, tail) = line
            .split_once(':')
            .ok_or_else(|| bad(format!("expected `pattern_id: v1 ... vk`, got `{line}`")))?;
        let pattern_id = head.trim().parse().map_err(|_| bad(format!("bad pattern id `{head}`")))?;
        let map = tail
            .split_whitespace()
            .map(|t| t.parse::<Vertex>().map_err(|_| bad(format!("bad vertex `{t}`"))))
            .collect::<Result<Vec<_>>>()?;
        out.push(LabeledCopy { pattern_id, map });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Labeling {
    Labeled,
    Unlabeled,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnumerationStatus {
    Complete,
    /// The cap was hit; the index holds only the first `cap` copies found.
    Capped,
}

/// Copies of family members in a host together with the per-edge incidence.
#[derive(Clone, Debug)]
pub struct CopyIndex {
    copies: Vec<LabeledCopy>,
    copy_edges: Vec<Vec<u32>>,
    per_edge: Vec<Vec<u32>>,
    host_edges: Vec<Edge>,
    labeling: Labeling,
    status: EnumerationStatus,
}

impl CopyIndex {
    /// Index `copies` over `host`. Copies are sorted canonically first.
    pub fn build(
        host: &Graph,
        patterns: &[Graph],
        mut copies: Vec<LabeledCopy>,
        labeling: Labeling,
        status: EnumerationStatus,
    ) -> Result<Self> {
        copies.sort_unstable();
        copies.dedup();
        let mut per_edge = vec![Vec::new(); host.edge_count()];
        let mut copy_edges = Vec::with_capacity(copies.len());
        for (cid, c) in copies.iter().enumerate() {
            let pattern = patterns
                .get(c.pattern_id)
                .ok_or_else(|| Error::arg(format!("unknown pattern id {}", c.pattern_id)))?;
            if !c.is_valid_in(pattern, host) {
                return Err(Error::arg(format!("`{}` is not a copy in the host", c.dump_line())));
            }
            let ids = c.host_edge_ids(pattern, host).expect("validated above");
            for &e in &ids {
                per_edge[e].push(cid as u32);
            }
            copy_edges.push(ids.into_iter().map(|e| e as u32).collect());
        }
        Ok(CopyIndex {
            copies,
            copy_edges,
            per_edge,
            host_edges: host.edges().to_vec(),
            labeling,
            status,
        })
    }

    pub fn copies(&self) -> &[LabeledCopy] {
        &self.copies
    }

    pub fn len(&self) -> usize {
        self.copies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.copies.is_empty()
    }

    pub fn labeling(&self) -> Labeling {
        self.labeling
    }

    pub fn status(&self) -> EnumerationStatus {
        self.status
    }

    pub fn edge_count(&self) -> usize {
        self.host_edges.len()
    }

    /// Host edge ids used by copy `cid`.
    pub fn edges_of(&self, cid: usize) -> &[u32] {
        &self.copy_edges[cid]
    }

    /// Copy ids through the host edge with id `edge_id`.
    pub fn copies_through_edge_id(&self, edge_id: usize) -> &[u32] {
        &self.per_edge[edge_id]
    }

    /// Copy ids whose pattern-edge images include `e`; empty if `e` is
    /// not a host edge.
    pub fn copies_through_edge(&self, e: Edge) -> &[u32] {
        let e = Edge::new(e.0, e.1);
        match self.host_edges.binary_search(&e) {
            Ok(id) => &self.per_edge[id],
            Err(_) => &[],
        }
    }

    pub fn position(&self, copy: &LabeledCopy) -> Option<usize> {
        self.copies.binary_search(copy).ok()
    }

    /// Fails with [`Error::CapExceeded`] if the enumeration was truncated.
    pub fn require_complete(self, cap: usize) -> Result<Self> {
        match self.status {
            EnumerationStatus::Complete => Ok(self),
            EnumerationStatus::Capped => Err(Error::CapExceeded { cap }),
        }
    }
}

// ---------------------------------------------------------------------------
// backtracking core

struct Search<'a> {
    host: &'a Graph,
    pattern: &'a Graph,
    order: Vec<usize>,
    /// For each search depth, the positions (in `order`) of earlier
    /// pattern vertices adjacent to the vertex placed at that depth.
    back_neighbors: Vec<Vec<usize>>,
    candidates: &'a [FixedBitSet],
    map: Vec<Vertex>,
    placed: Vec<Vertex>,
    used: FixedBitSet,
    scratch: FixedBitSet,
    buffers: Vec<Vec<Vertex>>,
}

fn search_order(pattern: &Graph) -> Vec<usize> {
    let k = pattern.n();
    let mut order = Vec::with_capacity(k);
    let mut in_order = vec![false; k];
    let mut links = vec![0usize; k];
    for _ in 0..k {
        let next = (0..k)
            .filter(|&v| !in_order[v])
            .max_by_key(|&v| (links[v], pattern.degree(v as Vertex), std::cmp::Reverse(v)))
            .expect("unplaced vertex remains");
        in_order[next] = true;
        order.push(next);
        for w in pattern.neighbors(next as Vertex) {
            links[w as usize] += 1;
        }
    }
    order
}

impl<'a> Search<'a> {
    fn new(host: &'a Graph, pattern: &'a Graph, candidates: &'a [FixedBitSet]) -> Self {
        let order = search_order(pattern);
        let mut pos = vec![0; pattern.n()];
        for (d, &v) in order.iter().enumerate() {
            pos[v] = d;
        }
        let back_neighbors = order
            .iter()
            .enumerate()
            .map(|(d, &v)| {
                pattern
                    .neighbors(v as Vertex)
                    .map(|w| pos[w as usize])
                    .filter(|&p| p < d)
                    .collect()
            })
            .collect();
        Search {
            host,
            pattern,
            back_neighbors,
            candidates,
            map: vec![0; pattern.n()],
            placed: vec![0; pattern.n()],
            used: FixedBitSet::with_capacity(host.n()),
            scratch: FixedBitSet::with_capacity(host.n()),
            buffers: vec![Vec::new(); pattern.n()],
            order,
        }
    }

    /// Returns `false` if the visitor asked to stop.
    fn run(&mut self, visit: &mut dyn FnMut(&[Vertex]) -> bool) -> bool {
        if self.pattern.n() == 0 || self.pattern.n() > self.host.n() {
            return true;
        }
        self.descend(0, visit)
    }

    fn descend(&mut self, depth: usize, visit: &mut dyn FnMut(&[Vertex]) -> bool) -> bool {
        let v = self.order[depth];
        self.scratch.clone_from(&self.candidates[v]);
        for &p in &self.back_neighbors[depth] {
            self.scratch.intersect_with(self.host.neighbor_row(self.placed[p]));
        }
        self.scratch.difference_with(&self.used);
        let need = self.pattern.degree(v as Vertex);
        let mut buf = std::mem::take(&mut self.buffers[depth]);
        buf.clear();
        buf.extend(
            self.scratch
                .ones()
                .map(|w| w as Vertex)
                .filter(|&w| self.host.degree(w) >= need),
        );
        let last = depth + 1 == self.order.len();
        let mut keep_going = true;
        for &w in &buf {
            self.map[v] = w;
            self.placed[depth] = w;
            if last {
                if !visit(&self.map) {
                    keep_going = false;
                    break;
                }
            } else {
                self.used.insert(w as usize);
                let cont = self.descend(depth + 1, visit);
                self.used.set(w as usize, false);
                if !cont {
                    keep_going = false;
                    break;
                }
            }
        }
        self.buffers[depth] = buf;
        keep_going
    }
}

fn full_set(n: usize) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    s.insert_range(..);
    s
}

/// Visit every injective edge-preserving map `pattern -> host`.
/// The visitor returns `false` to stop early.
pub fn for_each_embedding(host: &Graph, pattern: &Graph, mut visit: impl FnMut(&[Vertex]) -> bool) {
    let all = vec![full_set(host.n()); pattern.n()];
    Search::new(host, pattern, &all).run(&mut visit);
}

/// All automorphisms of `pattern` as permutations (`perm[i]` is the image of `i`).
pub fn automorphisms(pattern: &Graph) -> Result<Vec<Vec<Vertex>>> {
    if pattern.n() > MAX_PATTERN_ORDER {
        return Err(Error::Budget(format!(
            "automorphism enumeration supports patterns with at most {MAX_PATTERN_ORDER} vertices, got {}",
            pattern.n()
        )));
    }
    let mut out = Vec::new();
    // Same vertex and edge count, so edge-preserving injections are automorphisms.
    for_each_embedding(pattern, pattern, |m| {
        out.push(m.to_vec());
        true
    });
    Ok(out)
}

pub fn automorphism_count(pattern: &Graph) -> Result<usize> {
    automorphisms(pattern).map(|a| a.len())
}

pub fn is_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.n() != b.n() || a.edge_count() != b.edge_count() {
        return false;
    }
    let mut da: Vec<usize> = (0..a.n() as Vertex).map(|v| a.degree(v)).collect();
    let mut db: Vec<usize> = (0..b.n() as Vertex).map(|v| b.degree(v)).collect();
    da.sort_unstable();
    db.sort_unstable();
    if da != db {
        return false;
    }
    let mut found = false;
    for_each_embedding(b, a, |_| {
        found = true;
        false
    });
    found
}

/// `true` if `map` is the lexicographically smallest member of its orbit
/// under the pattern automorphisms.
fn is_canonical(map: &[Vertex], autos: &[Vec<Vertex>]) -> bool {
    autos.iter().all(|sigma| {
        for (i, &s) in sigma.iter().enumerate() {
            let (a, b) = (map[i], map[s as usize]);
            if a != b {
                return a < b;
            }
        }
        true
    })
}

fn enumerate(
    host: &Graph,
    patterns: &[(usize, &Graph)],
    all_patterns: &[Graph],
    labeling: Labeling,
    cap: usize,
) -> Result<CopyIndex> {
    let mut copies = Vec::new();
    let mut status = EnumerationStatus::Complete;
    for &(pid, pattern) in patterns {
        let autos = match labeling {
            Labeling::Unlabeled => automorphisms(pattern)?,
            Labeling::Labeled => Vec::new(),
        };
        for_each_embedding(host, pattern, |m| {
            if labeling == Labeling::Unlabeled && !is_canonical(m, &autos) {
                return true;
            }
            if copies.len() >= cap {
                status = EnumerationStatus::Capped;
                return false;
            }
            copies.push(LabeledCopy::new(pid, m.to_vec()));
            true
        });
        if status == EnumerationStatus::Capped {
            break;
        }
    }
    CopyIndex::build(host, all_patterns, copies, labeling, status)
}

/// One representative per unlabeled copy of `pattern` (pattern id 0).
pub fn enumerate_unlabeled_copies(host: &Graph, pattern: &Graph, cap: usize) -> Result<CopyIndex> {
    enumerate(host, &[(0, pattern)], std::slice::from_ref(pattern), Labeling::Unlabeled, cap)
}

/// Every labeled copy of `pattern` (pattern id 0).
pub fn enumerate_labeled_copies(host: &Graph, pattern: &Graph, cap: usize) -> Result<CopyIndex> {
    enumerate(host, &[(0, pattern)], std::slice::from_ref(pattern), Labeling::Labeled, cap)
}

/// Copies of every family member, tagged with the member's index.
pub fn enumerate_family_copies(host: &Graph, family: &Family, labeling: Labeling, cap: usize) -> Result<CopyIndex> {
    let members: Vec<(usize, &Graph)> = family.patterns().iter().enumerate().collect();
    enumerate(host, &members, family.patterns(), labeling, cap)
}

fn class_sets(host: &Graph, pattern: &Graph, classes: &[Vec<Vertex>]) -> Result<Vec<FixedBitSet>> {
    if classes.len() != pattern.n() {
        return Err(Error::arg(format!(
            "pattern has {} vertices but {} classes were given",
            pattern.n(),
            classes.len()
        )));
    }
    let mut union = FixedBitSet::with_capacity(host.n());
    let mut sets = Vec::with_capacity(classes.len());
    for class in classes {
        let mut s = FixedBitSet::with_capacity(host.n());
        for &v in class {
            if v as usize >= host.n() {
                return Err(Error::arg(format!("vertex {v} out of range")));
            }
            if union.put(v as usize) {
                return Err(Error::arg(format!("classes overlap at vertex {v}")));
            }
            s.insert(v as usize);
        }
        sets.push(s);
    }
    Ok(sets)
}

/// Visit every partite-isomorphic copy: tuples with `map[i]` in
/// `classes[i]` and every pattern edge present in `host`.
pub fn for_each_partite_copy(
    host: &Graph,
    pattern: &Graph,
    classes: &[Vec<Vertex>],
    mut visit: impl FnMut(&[Vertex]) -> bool,
) -> Result<()> {
    let sets = class_sets(host, pattern, classes)?;
    Search::new(host, pattern, &sets).run(&mut visit);
    Ok(())
}

/// Partite-isomorphic copies of `pattern` (pattern id 0), labeled.
pub fn enumerate_partite_copies(host: &Graph, pattern: &Graph, classes: &[Vec<Vertex>]) -> Result<CopyIndex> {
    let mut copies = Vec::new();
    for_each_partite_copy(host, pattern, classes, |m| {
        copies.push(LabeledCopy::new(0, m.to_vec()));
        true
    })?;
    CopyIndex::build(
        host,
        std::slice::from_ref(pattern),
        copies,
        Labeling::Labeled,
        EnumerationStatus::Complete,
    )
}

/// c(e) for every host edge: the number of partite-isomorphic copies
/// through it, indexed by host edge id. Counts without storing copies.
pub fn partite_edge_counts(host: &Graph, pattern: &Graph, classes: &[Vec<Vertex>]) -> Result<Vec<u64>> {
    let mut counts = vec![0u64; host.edge_count()];
    let pattern_edges = pattern.edges().to_vec();
    for_each_partite_copy(host, pattern, classes, |m| {
        for &Edge(i, j) in &pattern_edges {
            let id = host
                .edge_id(m[i as usize], m[j as usize])
                .expect("partite copies use host edges");
            counts[id] += 1;
        }
        true
    })?;
    Ok(counts)
}

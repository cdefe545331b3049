//! Simple undirected graphs: hosts, patterns and reduced graphs alike.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seed::Rng;
use crate::Rational;

pub type Vertex = u32;

/// An unordered vertex pair stored with the smaller endpoint first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge(pub Vertex, pub Vertex);

impl Edge {
    pub fn new(u: Vertex, v: Vertex) -> Self {
        if u <= v {
            Edge(u, v)
        } else {
            Edge(v, u)
        }
    }
}

impl std::fmt::Display for Edge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}-{}", self.0, self.1)
    }
}

/// Loop-free simple graph on vertices `0..n`.
///
/// Edges are kept sorted; the edge id of an edge is its position in that
/// order. Adjacency is stored both as sorted lists (with edge ids) and as
/// bitset rows for fast intersection.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<(Vertex, u32)>>,
    rows: Vec<FixedBitSet>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for Graph {}

/// Result of [`parse_graph`]; duplicates are collapsed and counted.
#[derive(Clone, Debug)]
pub struct ParsedGraph {
    pub graph: Graph,
    pub duplicates: usize,
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Self::from_sorted_unique(n, Vec::new())
    }

    /// Build from any edge iterator. Loops and out-of-range endpoints are
    /// rejected; duplicate edges are collapsed.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut set = BTreeSet::new();
        for (i, (u, v)) in edges.into_iter().enumerate() {
            check_endpoints(n, u, v, i + 1)?;
            set.insert(Edge::new(u, v));
        }
        Ok(Self::from_sorted_unique(n, set.into_iter().collect()))
    }

    fn from_sorted_unique(n: usize, edges: Vec<Edge>) -> Self {
        let mut adj = vec![Vec::new(); n];
        let mut rows = vec![FixedBitSet::with_capacity(n); n];
        for (id, &Edge(u, v)) in edges.iter().enumerate() {
            adj[u as usize].push((v, id as u32));
            adj[v as usize].push((u, id as u32));
            rows[u as usize].insert(v as usize);
            rows[v as usize].insert(u as usize);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, edges, adj, rows }
    }

    pub fn complete(n: usize) -> Self {
        let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for u in 0..n as Vertex {
            for v in u + 1..n as Vertex {
                edges.push(Edge(u, v));
            }
        }
        Self::from_sorted_unique(n, edges)
    }

    pub fn cycle(n: usize) -> Self {
        let edges = (0..n as Vertex).map(|i| (i, (i + 1) % n as Vertex));
        Self::from_edges(n, edges).expect("cycle of length >= 3")
    }

    pub fn path(n: usize) -> Self {
        let edges = (1..n as Vertex).map(|i| (i - 1, i));
        Self::from_edges(n, edges).expect("path edges are valid")
    }

    /// Star with `leaves` leaves; vertex 0 is the centre.
    pub fn star(leaves: usize) -> Self {
        let edges = (1..=leaves as Vertex).map(|i| (0, i));
        Self::from_edges(leaves + 1, edges).expect("star edges are valid")
    }

    /// Erdős–Rényi G(n, p).
    pub fn gnp(n: usize, p: f64, rng: &mut Rng) -> Self {
        let mut edges = Vec::new();
        for u in 0..n as Vertex {
            for v in u + 1..n as Vertex {
                if rng.gen::<f64>() < p {
                    edges.push(Edge(u, v));
                }
            }
        }
        Self::from_sorted_unique(n, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> Edge {
        self.edges[id]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        (u as usize) < self.n && (v as usize) < self.n && self.rows[u as usize].contains(v as usize)
    }

    pub fn edge_id(&self, u: Vertex, v: Vertex) -> Option<usize> {
        let list = self.adj.get(u as usize)?;
        list.binary_search_by_key(&v, |&(w, _)| w)
            .ok()
            .map(|i| list[i].1 as usize)
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v as usize].len()
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.adj[v as usize].iter().map(|&(w, _)| w)
    }

    /// Neighbours of `v` paired with the connecting edge ids.
    pub fn incident(&self, v: Vertex) -> &[(Vertex, u32)] {
        &self.adj[v as usize]
    }

    pub fn neighbor_row(&self, v: Vertex) -> &FixedBitSet {
        &self.rows[v as usize]
    }

    pub fn isolated_vertices(&self) -> Vec<Vertex> {
        (0..self.n as Vertex).filter(|&v| self.degree(v) == 0).collect()
    }

    /// Spanning subgraph keeping the edges accepted by `keep`.
    pub fn spanning_subgraph(&self, mut keep: impl FnMut(Edge) -> bool) -> Graph {
        let edges = self.edges.iter().copied().filter(|&e| keep(e)).collect();
        Self::from_sorted_unique(self.n, edges)
    }

    /// Number of edges with one end in `a` and the other in `b`.
    /// The sets must be disjoint.
    pub fn edges_between(&self, a: &[Vertex], b: &[Vertex]) -> usize {
        let mut mask = FixedBitSet::with_capacity(self.n);
        for &v in b {
            mask.insert(v as usize);
        }
        a.iter()
            .map(|&u| self.rows[u as usize].intersection_count(&mask))
            .sum()
    }

    /// Edge density d(A, B) = e(A, B) / (|A| |B|), exact.
    pub fn density(&self, a: &[Vertex], b: &[Vertex]) -> Result<Rational> {
        check_disjoint_nonempty(self.n, a, b)?;
        let e = self.edges_between(a, b);
        Ok(Rational::new(BigInt::from(e), BigInt::from(a.len() * b.len())))
    }

    /// Edge-list text: first line `n m`, then one `u v` line per edge.
    pub fn to_text(&self) -> String {
        let mut out = String::with_capacity(8 * self.edges.len() + 16);
        let _ = writeln!(out, "{} {}", self.n, self.edges.len());
        for Edge(u, v) in &self.edges {
            let _ = writeln!(out, "{u} {v}");
        }
        out
    }
}

fn check_endpoints(n: usize, u: Vertex, v: Vertex, line: usize) -> Result<()> {
    for w in [u, v] {
        if w as usize >= n {
            return Err(Error::Range { line, vertex: w, n });
        }
    }
    if u == v {
        return Err(Error::Loop { line, vertex: u });
    }
    Ok(())
}

fn check_disjoint_nonempty(n: usize, a: &[Vertex], b: &[Vertex]) -> Result<()> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::arg("density needs two non-empty vertex sets"));
    }
    let mut seen = FixedBitSet::with_capacity(n);
    for &v in a {
        if v as usize >= n {
            return Err(Error::arg(format!("vertex {v} out of range")));
        }
        seen.insert(v as usize);
    }
    for &v in b {
        if v as usize >= n {
            return Err(Error::arg(format!("vertex {v} out of range")));
        }
        if seen.contains(v as usize) {
            return Err(Error::arg(format!("vertex sets overlap at {v}")));
        }
    }
    Ok(())
}

/// Parse the edge-list format produced by [`Graph::to_text`].
///
/// Blank lines and lines starting with `#` are ignored. The header's edge
/// count must match the number of edge lines.
pub fn parse_graph(text: &str) -> Result<ParsedGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing `n m` header".into(),
    })?;
    let (n, m) = parse_pair::<usize>(header, hline)?;

    let mut set = BTreeSet::new();
    let mut listed = 0usize;
    for (line, body) in lines {
        let (u, v) = parse_pair::<Vertex>(body, line)?;
        check_endpoints(n, u, v, line)?;
        set.insert(Edge::new(u, v));
        listed += 1;
    }
    if listed != m {
        return Err(Error::Parse {
            line: hline,
            message: format!("header announces {m} edges but {listed} were listed"),
        });
    }
    let duplicates = listed - set.len();
    Ok(ParsedGraph {
        graph: Graph::from_sorted_unique(n, set.into_iter().collect()),
        duplicates,
    })
}

fn parse_pair<T: std::str::FromStr>(body: &str, line: usize) -> Result<(T, T)> {
    let mut it = body.split_whitespace();
    let bad = || Error::Parse { line, message: format!("expected two integers, got `{body}`") };
    let a = it.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
    let b = it.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
    if it.next().is_some() {
        return Err(bad());
    }
    Ok((a, b))
}

/// Named pattern graphs: `K<k>`, `C<k>`, `P<k>` (path on k vertices) and
/// `S<k>` (star with k leaves).
pub fn named_pattern(name: &str) -> Result<Graph> {
    let name = name.trim();
    let unknown = || Error::UnknownPattern(name.to_string());
    let mut chars = name.chars();
    let kind = chars.next().ok_or_else(unknown)?.to_ascii_uppercase();
    let k: usize = chars.as_str().parse().map_err(|_| unknown())?;
    match kind {
        'K' if k >= 1 => Ok(Graph::complete(k)),
        'C' if k >= 3 => Ok(Graph::cycle(k)),
        'P' if k >= 1 => Ok(Graph::path(k)),
        'S' if k >= 1 => Ok(Graph::star(k)),
        _ => Err(unknown()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{One, Zero};

    #[test]
    fn parse_triangle() {
        let g = parse_graph("3 3\n0 1\n1 2\n0 2").unwrap().graph;
        assert_eq!(g, Graph::complete(3));
    }

    #[test]
    fn parse_k4() {
        let g = parse_graph("4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3").unwrap().graph;
        assert_eq!(g, Graph::complete(4));
    }

    #[test]
    fn parse_rejects_loop() {
        assert!(matches!(parse_graph("2 1\n0 0"), Err(Error::Loop { line: 2, vertex: 0 })));
    }

    #[test]
    fn parse_rejects_range_and_garbage() {
        assert!(matches!(parse_graph("2 1\n0 2"), Err(Error::Range { line: 2, vertex: 2, .. })));
        assert!(matches!(parse_graph("3 1\n0 x"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn parse_collapses_duplicates() {
        let p = parse_graph("3 3\n0 1\n1 0\n1 2").unwrap();
        assert_eq!(p.duplicates, 1);
        assert_eq!(p.graph.edge_count(), 2);
    }

    #[test]
    fn named_patterns() {
        assert_eq!(named_pattern("K3").unwrap(), Graph::complete(3));
        assert_eq!(named_pattern("K3").unwrap(), named_pattern("C3").unwrap());
        let c5 = named_pattern("C5").unwrap();
        assert_eq!((c5.n(), c5.edge_count()), (5, 5));
        let p3 = named_pattern("P3").unwrap();
        assert_eq!((p3.n(), p3.edge_count()), (3, 2));
        let s4 = named_pattern("S4").unwrap();
        assert_eq!((s4.n(), s4.edge_count()), (5, 4));
        let err = named_pattern("Q7").unwrap_err().to_string();
        assert!(err.contains("K<k>"), "{err}");
        assert!(named_pattern("C2").is_err());
    }

    #[test]
    fn density_cases() {
        // complete bipartite 3 x 4
        let a = [0, 1, 2];
        let b = [3, 4, 5, 6];
        let g = Graph::from_edges(7, a.iter().flat_map(|&u| b.iter().map(move |&v| (u, v)))).unwrap();
        assert!(g.density(&a, &b).unwrap().is_one());
        assert!(Graph::empty(7).density(&a, &b).unwrap().is_zero());

        let h = Graph::from_edges(5, [(0, 2), (0, 3), (1, 4)]).unwrap();
        assert_eq!(h.density(&[0, 1], &[2, 3, 4]).unwrap(), Rational::new(1.into(), 2.into()));

        assert!(h.density(&[0, 1], &[1, 2]).is_err());
        assert!(h.density(&[], &[1, 2]).is_err());
    }

    #[test]
    fn edge_ids_follow_sorted_order() {
        let g = Graph::complete(4);
        for (id, e) in g.edges().iter().enumerate() {
            assert_eq!(g.edge_id(e.0, e.1), Some(id));
            assert_eq!(g.edge_id(e.1, e.0), Some(id));
        }
        assert_eq!(Graph::cycle(5).edge_id(0, 2), None);
    }
}

//! Pattern families ℱ.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::copies::is_isomorphic;
use crate::error::{Error, Result};
use crate::graph::{named_pattern, parse_graph, Graph};

/// Largest pattern order in a family; `Unbounded` stands in for infinite
/// families supplied through a finite generator prefix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaxOrder {
    Finite(usize),
    Unbounded,
}

#[derive(Clone, Debug)]
pub struct Family {
    patterns: Vec<Graph>,
    names: Vec<String>,
    max_order: MaxOrder,
}

impl Family {
    /// Build a finite family. Rejects the single edge, edgeless patterns and
    /// pairs of isomorphic patterns.
    pub fn new(members: Vec<(String, Graph)>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::arg("a family needs at least one pattern"));
        }
        for (name, g) in &members {
            if g.edge_count() == 0 {
                return Err(Error::arg(format!("pattern {name} has no edges")));
            }
            if g.n() < 3 && g.edge_count() < 2 {
                return Err(Error::arg(format!("pattern {name} is K2, which cannot be a family member")));
            }
        }
        for i in 0..members.len() {
            for j in 0..i {
                if is_isomorphic(&members[i].1, &members[j].1) {
                    return Err(Error::arg(format!(
                        "patterns {} and {} are isomorphic",
                        members[j].0, members[i].0
                    )));
                }
            }
        }
        let max = members.iter().map(|(_, g)| g.n()).max().unwrap_or(0);
        let (names, patterns) = members.into_iter().unzip();
        Ok(Family { patterns, names, max_order: MaxOrder::Finite(max) })
    }

    /// Family given as a finite prefix of an infinite generator; its
    /// maximal order is treated as unbounded.
    pub fn unbounded_prefix(members: Vec<(String, Graph)>) -> Result<Self> {
        let mut family = Self::new(members)?;
        family.max_order = MaxOrder::Unbounded;
        Ok(family)
    }

    pub fn single(name: &str) -> Result<Self> {
        Self::new(vec![(name.to_string(), named_pattern(name)?)])
    }

    pub fn patterns(&self) -> &[Graph] {
        &self.patterns
    }

    pub fn pattern(&self, id: usize) -> &Graph {
        &self.patterns[id]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn max_order(&self) -> MaxOrder {
        self.max_order
    }

    pub fn min_edges(&self) -> usize {
        self.patterns.iter().map(Graph::edge_count).min().unwrap_or(1)
    }

    /// Canonical spec string, e.g. `K3,C5`.
    pub fn label(&self) -> String {
        self.names.join(",")
    }
}

/// Parse a comma list of named patterns and `path:<file>` entries, e.g.
/// `K3,C5,path:my_pattern.g`. Relative paths resolve against `base`.
pub fn parse_family_spec(spec: &str, base: Option<&Path>) -> Result<Family> {
    let mut members = Vec::new();
    for token in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        if let Some(file) = token.strip_prefix("path:") {
            let path = match base {
                Some(dir) => dir.join(file),
                None => Path::new(file).to_path_buf(),
            };
            let text = std::fs::read_to_string(&path)?;
            members.push((token.to_string(), parse_graph(&text)?.graph));
        } else {
            members.push((token.to_string(), named_pattern(token)?));
        }
    }
    Family::new(members)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_k2_and_isomorphic_members() {
        assert!(Family::single("K2").is_err());
        assert!(parse_family_spec("K3,C3", None).is_err());
        assert!(parse_family_spec("P2", None).is_err());
        // P3 has two edges, so it is allowed.
        assert!(parse_family_spec("P3", None).is_ok());
    }

    #[test]
    fn max_order() {
        let f = parse_family_spec("K3, C5", None).unwrap();
        assert_eq!(f.max_order(), MaxOrder::Finite(5));
        assert_eq!(f.min_edges(), 3);
        assert_eq!(f.label(), "K3,C5");
        let u = Family::unbounded_prefix(vec![("C4".into(), Graph::cycle(4))]).unwrap();
        assert_eq!(u.max_order(), MaxOrder::Unbounded);
    }

    #[test]
    fn pattern_from_file() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("tri.g"), "3 3\n0 1\n1 2\n0 2\n").unwrap();
        let f = parse_family_spec("path:tri.g,C4", Some(dir.path())).unwrap();
        assert_eq!(f.pattern(0), &Graph::complete(3));
        assert_eq!(f.len(), 2);
    }
}

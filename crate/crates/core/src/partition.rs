//! Vertex partitions V₁..V_m and their random construction.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Vertex;
use crate::seed::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionOrigin {
    Equitable,
    Refined,
    Regularized,
    Given,
}

/// Ordered, disjoint classes covering `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexPartition {
    classes: Vec<Vec<Vertex>>,
    class_of: Vec<u32>,
    origin: PartitionOrigin,
    /// For refined partitions: index of the class each class was split from.
    parents: Option<Vec<usize>>,
}

impl VertexPartition {
    pub fn new(n: usize, classes: Vec<Vec<Vertex>>, origin: PartitionOrigin) -> Result<Self> {
        let mut class_of = vec![u32::MAX; n];
        let mut classes = classes;
        for (i, class) in classes.iter_mut().enumerate() {
            if class.is_empty() {
                return Err(Error::arg(format!("class {i} is empty")));
            }
            class.sort_unstable();
            for &v in class.iter() {
                let slot = class_of
                    .get_mut(v as usize)
                    .ok_or_else(|| Error::arg(format!("vertex {v} out of range for n = {n}")))?;
                if *slot != u32::MAX {
                    return Err(Error::arg(format!("vertex {v} appears in two classes")));
                }
                *slot = i as u32;
            }
        }
        if let Some(v) = class_of.iter().position(|&c| c == u32::MAX) {
            return Err(Error::arg(format!("vertex {v} is not covered by the partition")));
        }
        Ok(VertexPartition { classes, class_of, origin, parents: None })
    }

    pub fn n(&self) -> usize {
        self.class_of.len()
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[Vec<Vertex>] {
        &self.classes
    }

    pub fn class(&self, i: usize) -> &[Vertex] {
        &self.classes[i]
    }

    pub fn class_of(&self, v: Vertex) -> usize {
        self.class_of[v as usize] as usize
    }

    pub fn origin(&self) -> PartitionOrigin {
        self.origin
    }

    pub fn parents(&self) -> Option<&[usize]> {
        self.parents.as_deref()
    }

    pub fn min_class_size(&self) -> usize {
        self.classes.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn max_class_size(&self) -> usize {
        self.classes.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn with_origin(mut self, origin: PartitionOrigin) -> Self {
        self.origin = origin;
        self
    }

    /// JSON array of arrays of vertex indices.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.classes).expect("vectors serialize")
    }

    pub fn from_json(text: &str, n: usize) -> Result<Self> {
        let classes: Vec<Vec<Vertex>> = serde_json::from_str(text)?;
        Self::new(n, classes, PartitionOrigin::Given)
    }
}

/// Random equitable partition of `0..n` into `m` classes whose sizes are
/// ⌈n/m⌉ (the first `n mod m` classes) or ⌊n/m⌋.
pub fn equitable_partition(n: usize, m: usize, rng: &mut Rng) -> Result<VertexPartition> {
    if m == 0 || m > n {
        return Err(Error::arg(format!("cannot split {n} vertices into {m} classes")));
    }
    let mut order: Vec<Vertex> = (0..n as Vertex).collect();
    order.shuffle(rng);
    let classes = split_near_equal(&order, m);
    VertexPartition::new(n, classes, PartitionOrigin::Equitable)
}

fn split_near_equal(items: &[Vertex], parts: usize) -> Vec<Vec<Vertex>> {
    let base = items.len() / parts;
    let extra = items.len() % parts;
    let mut out = Vec::with_capacity(parts);
    let mut start = 0;
    for i in 0..parts {
        let len = base + usize::from(i < extra);
        out.push(items[start..start + len].to_vec());
        start += len;
    }
    out
}

/// Split every class independently and uniformly at random into `factor`
/// near-equal parts. Output classes are grouped by parent, in parent order.
pub fn refine_partition(p: &VertexPartition, factor: usize, rng: &mut Rng) -> Result<VertexPartition> {
    if factor == 0 {
        return Err(Error::arg("refinement factor must be at least 1"));
    }
    if let Some((class, c)) = p.classes.iter().enumerate().find(|(_, c)| c.len() < factor) {
        return Err(Error::Refinement { class, size: c.len(), factor });
    }
    let mut classes = Vec::with_capacity(p.len() * factor);
    let mut parents = Vec::with_capacity(p.len() * factor);
    for (i, class) in p.classes.iter().enumerate() {
        let mut members = class.clone();
        members.shuffle(rng);
        for part in split_near_equal(&members, factor) {
            classes.push(part);
            parents.push(i);
        }
    }
    let mut out = VertexPartition::new(p.n(), classes, PartitionOrigin::Refined)?;
    out.parents = Some(parents);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::rng;
    use proptest::prelude::*;

    fn sizes(p: &VertexPartition) -> Vec<usize> {
        p.classes().iter().map(Vec::len).collect()
    }

    #[test]
    fn equitable_sizes() {
        let mut r = rng(1);
        assert_eq!(sizes(&equitable_partition(10, 3, &mut r).unwrap()), vec![4, 3, 3]);
        assert_eq!(sizes(&equitable_partition(9, 3, &mut r).unwrap()), vec![3, 3, 3]);
        assert_eq!(sizes(&equitable_partition(5, 5, &mut r).unwrap()), vec![1; 5]);
        assert!(equitable_partition(3, 4, &mut r).is_err());
        assert!(equitable_partition(3, 0, &mut r).is_err());
    }

    #[test]
    fn refine_cases() {
        let base = VertexPartition::new(12, vec![(0..6).collect(), (6..12).collect()], PartitionOrigin::Given).unwrap();
        let r = refine_partition(&base, 3, &mut rng(2)).unwrap();
        assert_eq!(sizes(&r), vec![2; 6]);
        assert_eq!(r.parents().unwrap(), &[0, 0, 0, 1, 1, 1]);

        let same = refine_partition(&base, 1, &mut rng(2)).unwrap();
        assert_eq!(same.classes(), base.classes());
        assert_eq!(same.origin(), PartitionOrigin::Refined);

        let tiny = VertexPartition::new(2, vec![vec![0, 1]], PartitionOrigin::Given).unwrap();
        assert!(matches!(
            refine_partition(&tiny, 3, &mut rng(0)),
            Err(Error::Refinement { class: 0, size: 2, factor: 3 })
        ));
    }

    #[test]
    fn json_round_trip_and_validation() {
        let p = equitable_partition(7, 2, &mut rng(3)).unwrap();
        let q = VertexPartition::from_json(&p.to_json(), 7).unwrap();
        assert_eq!(p.classes(), q.classes());
        assert!(VertexPartition::from_json("[[0,1],[1,2]]", 3).is_err());
        assert!(VertexPartition::from_json("[[0,1]]", 3).is_err());
    }

    proptest! {
        #[test]
        fn equitable_is_deterministic_and_balanced(n in 1usize..80, m in 1usize..20, seed in any::<u64>()) {
            prop_assume!(m <= n);
            let a = equitable_partition(n, m, &mut rng(seed)).unwrap();
            let b = equitable_partition(n, m, &mut rng(seed)).unwrap();
            prop_assert_eq!(&a, &b);
            prop_assert!(a.max_class_size() - a.min_class_size() <= 1);
        }

        #[test]
        fn refinement_partitions_each_parent(n in 4usize..60, m in 1usize..5, f in 1usize..4, seed in any::<u64>()) {
            prop_assume!(m * f <= n);
            let base = equitable_partition(n, m, &mut rng(seed)).unwrap();
            let fine = refine_partition(&base, f, &mut rng(seed ^ 1)).unwrap();
            prop_assert_eq!(fine.len(), m * f);
            for (i, parent) in base.classes().iter().enumerate() {
                let mut union: Vec<Vertex> = fine.classes().iter().zip(fine.parents().unwrap())
                    .filter(|(_, &p)| p == i).flat_map(|(c, _)| c.iter().copied()).collect();
                union.sort_unstable();
                prop_assert_eq!(&union, parent);
            }
        }
    }
}

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::simplex::{self, PackingLp, Pricing};
use crate::copies::{automorphisms, enumerate_family_copies, Labeling, LabeledCopy};
use crate::error::{Error, Result};
use crate::family::Family;
use crate::graph::{Edge, Graph};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Arithmetic {
    ExactRational,
    Float,
}

/// Weights on copies of family members with per-edge load at most one.
/// Only the support is stored; absent copies weigh zero.
#[derive(Clone, Debug, PartialEq)]
pub struct FractionalPacking {
    labeling: Labeling,
    weights: BTreeMap<LabeledCopy, Rational>,
}

impl FractionalPacking {
    pub fn new(labeling: Labeling) -> Self {
        FractionalPacking { labeling, weights: BTreeMap::new() }
    }

    pub fn from_weights(labeling: Labeling, weights: impl IntoIterator<Item = (LabeledCopy, Rational)>) -> Self {
        let mut p = Self::new(labeling);
        for (c, w) in weights {
            p.add(c, w);
        }
        p
    }

    /// Add `w` to the weight of `copy`; zero weights are not stored.
    pub fn add(&mut self, copy: LabeledCopy, w: Rational) {
        if w.is_zero() {
            return;
        }
        match self.weights.entry(copy) {
            Entry::Vacant(slot) => {
                slot.insert(w);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += w;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
        }
    }

    pub fn labeling(&self) -> Labeling {
        self.labeling
    }

    pub fn weight_of(&self, copy: &LabeledCopy) -> Rational {
        self.weights.get(copy).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = (&LabeledCopy, &Rational)> {
        self.weights.iter()
    }

    pub fn support_len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Per-edge load Σ_{H ∋ e} ψ(H) over edges touched by the support.
    pub fn edge_loads(&self, family: &Family) -> BTreeMap<Edge, Rational> {
        let mut loads: BTreeMap<Edge, Rational> = BTreeMap::new();
        for (c, w) in &self.weights {
            for e in c.host_edges(family.pattern(c.pattern_id)) {
                *loads.entry(e).or_insert_with(Rational::zero) += w;
            }
        }
        loads
    }
}

/// w(ψ) = Σ_H ψ(H).
pub fn packing_weight(psi: &FractionalPacking) -> Rational {
    psi.weights.values().fold(Rational::zero(), |acc, w| acc + w)
}

/// Spread each unlabeled copy's weight evenly over its |Aut| labeled
/// versions `map ∘ σ`.
pub fn labeled_normalize(psi: &FractionalPacking, family: &Family) -> Result<FractionalPacking> {
    if psi.labeling == Labeling::Labeled {
        return Err(Error::arg("packing is already labeled"));
    }
    let autos: Vec<Vec<Vec<u32>>> = family.patterns().iter().map(automorphisms).collect::<Result<_>>()?;
    let mut out = FractionalPacking::new(Labeling::Labeled);
    for (c, w) in &psi.weights {
        let group = &autos[c.pattern_id];
        let share = w / Rational::from_integer(BigInt::from(group.len()));
        for sigma in group {
            let map = sigma.iter().map(|&s| c.map[s as usize]).collect();
            out.add(LabeledCopy::new(c.pattern_id, map), share.clone());
        }
    }
    Ok(out)
}

/// Zero the weight of every copy rejected by `keep`.
pub fn restrict_packing(psi: &FractionalPacking, mut keep: impl FnMut(&LabeledCopy) -> bool) -> FractionalPacking {
    FractionalPacking {
        labeling: psi.labeling,
        weights: psi
            .weights
            .iter()
            .filter(|(c, _)| keep(c))
            .map(|(c, w)| (c.clone(), w.clone()))
            .collect(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FractionalVerdict {
    pub accepted: bool,
    pub max_load: f64,
    /// Edge with the largest load, if any edge is loaded.
    pub worst_edge: Option<Edge>,
    /// A copy whose weight lies outside [−tol, 1 + tol].
    pub bad_weight: Option<LabeledCopy>,
}

/// Accept iff every edge load is at most `1 + tol` and every weight lies
/// in `[−tol, 1 + tol]`.
pub fn verify_fractional(psi: &FractionalPacking, family: &Family, tol: f64) -> FractionalVerdict {
    let bad_weight = psi
        .weights
        .iter()
        .find(|(_, w)| {
            let w = w.to_f64().unwrap_or(f64::NAN);
            !(w >= -tol && w <= 1.0 + tol)
        })
        .map(|(c, _)| c.clone());
    let loads = psi.edge_loads(family);
    let worst = loads.iter().max_by(|a, b| a.1.cmp(b.1));
    let max_load = worst.map_or(0.0, |(_, l)| l.to_f64().unwrap_or(f64::NAN));
    FractionalVerdict {
        accepted: bad_weight.is_none() && max_load <= 1.0 + tol,
        max_load,
        worst_edge: worst.map(|(e, _)| *e),
        bad_weight,
    }
}

/// Optimum of the fractional packing LP together with its duality witness.
#[derive(Clone, Debug)]
pub struct LpResult {
    pub arithmetic: Arithmetic,
    /// ν*_ℱ(G). Exact in rational mode; the rational image of the
    /// floating optimum otherwise.
    pub value: Rational,
    /// Value of the optimal fractional edge cover returned as dual.
    pub dual_value: Rational,
    /// Unlabeled optimal packing. In float mode the weights are snapped to
    /// dyadic rationals that satisfy every edge constraint exactly.
    pub packing: FractionalPacking,
    /// Optimal dual weight per host edge (zeros omitted).
    pub cover: Vec<(Edge, Rational)>,
    pub copies: usize,
    pub iterations: usize,
}

impl LpResult {
    pub fn value_f64(&self) -> f64 {
        self.value.to_f64().unwrap_or(f64::NAN)
    }
}

/// ν*_ℱ(G) by simplex over all unlabeled copies of family members.
pub fn solve_fractional_packing(g: &Graph, family: &Family, mode: Arithmetic, cap: usize) -> Result<LpResult> {
    let index = enumerate_family_copies(g, family, Labeling::Unlabeled, cap)?.require_complete(cap)?;
    let lp = PackingLp {
        rows: g.edge_count(),
        columns: (0..index.len()).map(|c| index.edges_of(c).to_vec()).collect(),
    };
    let copies = index.copies();
    match mode {
        Arithmetic::ExactRational => {
            let sol = simplex::solve_exact_warm::<Rational>(&lp);
            let packing = FractionalPacking::from_weights(
                Labeling::Unlabeled,
                copies.iter().cloned().zip(sol.primal),
            );
            Ok(LpResult {
                arithmetic: mode,
                value: sol.value,
                dual_value: sol.dual_value,
                packing,
                cover: cover_of(g, &sol.dual),
                copies: copies.len(),
                iterations: sol.iterations,
            })
        }
        Arithmetic::Float => {
            let sol = simplex::solve::<f64>(&lp, Pricing::DantzigThenBland);
            let packing = snap_feasible(family, copies.iter().cloned().zip(sol.primal.iter().copied()));
            let dual: Vec<Rational> = sol
                .dual
                .iter()
                .map(|&y| Rational::from_float(y.max(0.0)).unwrap_or_else(Rational::zero))
                .collect();
            Ok(LpResult {
                arithmetic: mode,
                value: Rational::from_float(sol.value).unwrap_or_else(Rational::zero),
                dual_value: Rational::from_float(sol.dual_value).unwrap_or_else(Rational::zero),
                packing,
                cover: cover_of(g, &dual),
                copies: copies.len(),
                iterations: sol.iterations,
            })
        }
    }
}

fn cover_of(g: &Graph, dual: &[Rational]) -> Vec<(Edge, Rational)> {
    dual.iter()
        .enumerate()
        .filter(|(_, y)| !y.is_zero())
        .map(|(i, y)| (g.edge(i), y.clone()))
        .collect()
}

const SNAP_BITS: u32 = 40;

/// Turn floating weights into a packing that is feasible in exact
/// arithmetic: shrink by a relative 1e-9, round down to multiples of
/// 2^-40, and rescale by the worst load if rounding noise still overloads
/// an edge.
pub fn snap_feasible(family: &Family, weights: impl IntoIterator<Item = (LabeledCopy, f64)>) -> FractionalPacking {
    let scale = (1u64 << SNAP_BITS) as f64;
    let denom = BigInt::from(1u64 << SNAP_BITS);
    let mut psi = FractionalPacking::new(Labeling::Unlabeled);
    for (c, w) in weights {
        let w = w.clamp(0.0, 1.0) * (1.0 - 1e-9);
        let num = (w * scale).floor();
        if num > 0.0 {
            psi.add(c, Rational::new(BigInt::from(num as u64), denom.clone()));
        }
    }
    let max_load = psi.edge_loads(family).into_values().max().unwrap_or_else(Rational::zero);
    if max_load > Rational::one() {
        for w in psi.weights.values_mut() {
            *w = &*w / &max_load;
        }
    }
    debug_assert!(psi.weights.values().all(|w| !w.is_negative()));
    psi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::copies::DEFAULT_COPY_CAP;

    fn rat(p: i64, q: i64) -> Rational {
        Rational::new(BigInt::from(p), BigInt::from(q))
    }

    fn k3() -> Family {
        Family::single("K3").unwrap()
    }

    #[test]
    fn lp_examples() {
        let k4 = solve_fractional_packing(&Graph::complete(4), &k3(), Arithmetic::ExactRational, DEFAULT_COPY_CAP).unwrap();
        assert_eq!(k4.value, rat(2, 1));
        assert_eq!(k4.dual_value, k4.value);
        assert!(k4.packing.support().all(|(_, w)| *w == rat(1, 2)));

        let c5 = solve_fractional_packing(&Graph::cycle(5), &k3(), Arithmetic::ExactRational, DEFAULT_COPY_CAP).unwrap();
        assert!(c5.value.is_zero());
        assert!(c5.packing.is_empty());

        let k7 = solve_fractional_packing(&Graph::complete(7), &k3(), Arithmetic::ExactRational, DEFAULT_COPY_CAP).unwrap();
        assert_eq!(k7.value, rat(7, 1));
    }

    #[test]
    fn float_mode_snaps_to_feasible() {
        let r = solve_fractional_packing(&Graph::complete(7), &k3(), Arithmetic::Float, DEFAULT_COPY_CAP).unwrap();
        assert!((r.value_f64() - 7.0).abs() < 1e-9);
        assert!((r.dual_value.to_f64().unwrap() - 7.0).abs() < 1e-9);
        let v = verify_fractional(&r.packing, &k3(), 0.0);
        assert!(v.accepted, "{v:?}");
        let w = packing_weight(&r.packing).to_f64().unwrap();
        assert!((w - 7.0).abs() < 1e-6, "{w}");
    }

    #[test]
    fn cap_exceeded_is_an_error() {
        let r = solve_fractional_packing(&Graph::complete(6), &k3(), Arithmetic::Float, 3);
        assert!(matches!(r, Err(Error::CapExceeded { cap: 3 })));
    }

    #[test]
    fn weight_cases() {
        assert!(packing_weight(&FractionalPacking::new(Labeling::Unlabeled)).is_zero());
        let k4 = solve_fractional_packing(&Graph::complete(4), &k3(), Arithmetic::ExactRational, DEFAULT_COPY_CAP).unwrap();
        assert_eq!(packing_weight(&k4.packing), rat(2, 1));
        let integral = FractionalPacking::from_weights(
            Labeling::Unlabeled,
            [(LabeledCopy::new(0, vec![0, 1, 2]), rat(1, 1)), (LabeledCopy::new(0, vec![0, 3, 4]), rat(1, 1))],
        );
        assert_eq!(packing_weight(&integral), rat(2, 1));
    }

    #[test]
    fn normalize_cases() {
        let one = FractionalPacking::from_weights(Labeling::Unlabeled, [(LabeledCopy::new(0, vec![0, 1, 2]), rat(1, 1))]);
        let lab = labeled_normalize(&one, &k3()).unwrap();
        assert_eq!(lab.support_len(), 6);
        assert!(lab.support().all(|(_, w)| *w == rat(1, 6)));
        assert!(labeled_normalize(&lab, &k3()).is_err());

        let empty = labeled_normalize(&FractionalPacking::new(Labeling::Unlabeled), &k3()).unwrap();
        assert!(empty.is_empty());

        let k4 = solve_fractional_packing(&Graph::complete(4), &k3(), Arithmetic::ExactRational, DEFAULT_COPY_CAP).unwrap();
        let lab = labeled_normalize(&k4.packing, &k3()).unwrap();
        assert_eq!(packing_weight(&lab), packing_weight(&k4.packing));
        assert_eq!(lab.edge_loads(&k3()), k4.packing.edge_loads(&k3()));
    }

    #[test]
    fn restrict_cases() {
        let k4 = solve_fractional_packing(&Graph::complete(4), &k3(), Arithmetic::ExactRational, DEFAULT_COPY_CAP).unwrap();
        let psi = &k4.packing;
        assert_eq!(&restrict_packing(psi, |_| true), psi);
        assert!(restrict_packing(psi, |_| false).is_empty());
        let pattern = Graph::complete(3);
        let dropped = restrict_packing(psi, |c| c.host_edges(&pattern).all(|e| e != Edge(0, 1)));
        assert_eq!(packing_weight(&dropped), rat(1, 1));
    }

    #[test]
    fn verify_cases() {
        let k4 = solve_fractional_packing(&Graph::complete(4), &k3(), Arithmetic::ExactRational, DEFAULT_COPY_CAP).unwrap();
        let v = verify_fractional(&k4.packing, &k3(), 0.0);
        assert!(v.accepted);
        assert_eq!(v.max_load, 1.0);

        let heavy = FractionalPacking::from_weights(Labeling::Unlabeled, [(LabeledCopy::new(0, vec![0, 1, 2]), rat(3, 2))]);
        let v = verify_fractional(&heavy, &k3(), 1e-9);
        assert!(!v.accepted);
        assert!(v.bad_weight.is_some());

        assert!(verify_fractional(&FractionalPacking::new(Labeling::Unlabeled), &k3(), 0.0).accepted);
    }
}

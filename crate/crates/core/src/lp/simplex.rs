//! Revised simplex for packing LPs
//!
//! ```text
//! maximize   Σ_j x_j
//! subject to Σ_{j ∋ i} x_j ≤ 1   for every row i
//!            x ≥ 0
//! ```
//!
//! where column `j` lists the rows it covers with coefficient 1. The slack
//! basis is feasible, so no phase one is needed. The basis inverse is kept
//! explicitly and updated by elementary row operations. The solver is
//! generic over the scalar so the same code runs in exact rational
//! arithmetic and in `f64`.

use num_traits::{One, Zero};

use crate::Rational;

pub trait LpScalar: Clone + PartialOrd + std::fmt::Debug + Zero + One + std::ops::Sub<Output = Self> {
    /// Exact scalars never refactorize and compare without tolerance.
    const EXACT: bool;

    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn is_nonzero(&self) -> bool;
    /// `self -= a * b`
    fn sub_mul(&mut self, a: &Self, b: &Self);
    /// `self += a * b`
    fn add_mul(&mut self, a: &Self, b: &Self);
    fn div_by(&mut self, d: &Self);
    /// `dst -= a * src`, elementwise.
    fn axpy(dst: &mut [Self], a: &Self, src: &[Self]) {
        for (d, v) in dst.iter_mut().zip(src) {
            if v.is_nonzero() {
                d.sub_mul(a, v);
            }
        }
    }
    fn add_ref(&mut self, a: &Self);
    fn ratio(a: &Self, b: &Self) -> Self;
    fn to_f64(&self) -> f64;
    fn from_f64(x: f64) -> Self;
}

const F64_TOL: f64 = 1e-9;

impl LpScalar for f64 {
    const EXACT: bool = false;

    fn is_pos(&self) -> bool {
        *self > F64_TOL
    }
    fn is_neg(&self) -> bool {
        *self < -F64_TOL
    }
    fn is_nonzero(&self) -> bool {
        self.abs() > 1e-13
    }
    fn sub_mul(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    fn div_by(&mut self, d: &Self) {
        *self /= d;
    }
    fn axpy(dst: &mut [Self], a: &Self, src: &[Self]) {
        for (d, v) in dst.iter_mut().zip(src) {
            *d -= a * v;
        }
    }
    fn add_ref(&mut self, a: &Self) {
        *self += a;
    }
    fn ratio(a: &Self, b: &Self) -> Self {
        a / b
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn from_f64(x: f64) -> Self {
        x
    }
}

impl LpScalar for Rational {
    const EXACT: bool = true;

    fn is_pos(&self) -> bool {
        num_traits::Signed::is_positive(self)
    }
    fn is_neg(&self) -> bool {
        num_traits::Signed::is_negative(self)
    }
    fn is_nonzero(&self) -> bool {
        !self.is_zero()
    }
    fn sub_mul(&mut self, a: &Self, b: &Self) {
        *self -= a * b;
    }
    fn add_mul(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    fn div_by(&mut self, d: &Self) {
        *self /= d;
    }
    fn add_ref(&mut self, a: &Self) {
        *self += a;
    }
    fn ratio(a: &Self, b: &Self) -> Self {
        a / b
    }
    fn to_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn from_f64(x: f64) -> Self {
        Rational::from_float(x).unwrap_or_else(Rational::zero)
    }
}

/// Column-sparse 0/1 packing LP.
#[derive(Clone, Debug, Default)]
pub struct PackingLp {
    pub rows: usize,
    pub columns: Vec<Vec<u32>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pricing {
    /// Smallest-index entering and leaving variables; never cycles.
    Bland,
    /// Largest reduced cost, switching to Bland for good after a run of
    /// degenerate pivots.
    DantzigThenBland,
}

#[derive(Clone, Debug)]
pub struct LpSolution<T> {
    pub value: T,
    /// Optimal `x_j` per column.
    pub primal: Vec<T>,
    /// Optimal dual `y_i ≥ 0` per row: a fractional cover.
    pub dual: Vec<T>,
    pub dual_value: T,
    pub iterations: usize,
}

const REFACTOR_EVERY: usize = 400;
const DEGENERATE_RUN: usize = 64;

struct Tableau<'a, T> {
    lp: &'a PackingLp,
    m: usize,
    /// Row-major m x m basis inverse.
    binv: Vec<T>,
    basis: Vec<usize>,
    xb: Vec<T>,
    y: Vec<T>,
    is_basic: Vec<bool>,
}

impl<'a, T: LpScalar> Tableau<'a, T> {
    fn new(lp: &'a PackingLp) -> Self {
        let m = lp.rows;
        let ncols = lp.columns.len();
        let mut binv = vec![T::zero(); m * m];
        for i in 0..m {
            binv[i * m + i] = T::one();
        }
        let mut is_basic = vec![false; ncols + m];
        for flag in &mut is_basic[ncols..] {
            *flag = true;
        }
        Tableau {
            lp,
            m,
            binv,
            basis: (ncols..ncols + m).collect(),
            xb: vec![T::one(); m],
            y: vec![T::zero(); m],
            is_basic,
        }
    }

    fn ncols(&self) -> usize {
        self.lp.columns.len()
    }

    fn reduced_cost(&self, var: usize) -> T {
        if var < self.ncols() {
            let mut d = T::one();
            for &i in &self.lp.columns[var] {
                d = d - self.y[i as usize].clone();
            }
            d
        } else {
            T::zero() - self.y[var - self.ncols()].clone()
        }
    }

    fn entering(&self, pricing: Pricing) -> Option<(usize, T)> {
        let total = self.ncols() + self.m;
        match pricing {
            Pricing::Bland => (0..total)
                .filter(|&v| !self.is_basic[v])
                .map(|v| (v, self.reduced_cost(v)))
                .find(|(_, d)| d.is_pos()),
            Pricing::DantzigThenBland => {
                let mut best: Option<(usize, T)> = None;
                for v in (0..total).filter(|&v| !self.is_basic[v]) {
                    let d = self.reduced_cost(v);
                    if d.is_pos() && best.as_ref().map_or(true, |(_, b)| d > *b) {
                        best = Some((v, d));
                    }
                }
                best
            }
        }
    }

    fn column(&self, var: usize) -> Vec<T> {
        let m = self.m;
        let mut alpha = vec![T::zero(); m];
        if var < self.ncols() {
            for &i in &self.lp.columns[var] {
                for (r, a) in alpha.iter_mut().enumerate() {
                    a.add_ref(&self.binv[r * m + i as usize]);
                }
            }
        } else {
            let i = var - self.ncols();
            for (r, a) in alpha.iter_mut().enumerate() {
                *a = self.binv[r * m + i].clone();
            }
        }
        alpha
    }

    /// Ratio test with Bland tie-breaking on the leaving variable index.
    fn leaving(&self, alpha: &[T]) -> Option<usize> {
        let mut best: Option<(usize, T)> = None;
        for (r, a) in alpha.iter().enumerate() {
            if !a.is_pos() {
                continue;
            }
            let theta = T::ratio(&self.xb[r], a);
            let better = match &best {
                None => true,
                Some((br, bt)) => {
                    if T::EXACT {
                        theta < *bt || (theta == *bt && self.basis[r] < self.basis[*br])
                    } else {
                        let gap = theta.to_f64() - bt.to_f64();
                        gap < -F64_TOL || (gap.abs() <= F64_TOL && self.basis[r] < self.basis[*br])
                    }
                }
            };
            if better {
                best = Some((r, theta));
            }
        }
        best.map(|(r, _)| r)
    }

    fn pivot(&mut self, r: usize, var: usize, alpha: &[T], reduced: &T) {
        let m = self.m;
        let piv = alpha[r].clone();
        for c in 0..m {
            self.binv[r * m + c].div_by(&piv);
        }
        self.xb[r].div_by(&piv);
        let (pivot_row, xr) = (self.binv[r * m..(r + 1) * m].to_vec(), self.xb[r].clone());
        for (k, a) in alpha.iter().enumerate() {
            if k == r || !a.is_nonzero() {
                continue;
            }
            T::axpy(&mut self.binv[k * m..(k + 1) * m], a, &pivot_row);
            self.xb[k].sub_mul(a, &xr);
        }
        for (c, p) in pivot_row.iter().enumerate() {
            if p.is_nonzero() {
                self.y[c].add_mul(reduced, p);
            }
        }
        self.is_basic[self.basis[r]] = false;
        self.is_basic[var] = true;
        self.basis[r] = var;
    }

    /// Rebuild the inverse, primal and dual values from the basis (f64 only).
    /// A numerically singular basis keeps the updated inverse.
    fn refactor(&mut self) {
        if let Some(fresh) = Tableau::from_basis(self.lp, &self.basis) {
            *self = fresh;
        }
    }

    /// Tableau for a given basis, computed in `T`. Basic slack
    /// columns are unit vectors, so only the square block of basic
    /// structural columns on the remaining rows has to be inverted. Returns
    /// `None` if the basis is singular.
    fn from_basis(lp: &'a PackingLp, basis: &[usize]) -> Option<Self> {
        let m = lp.rows;
        let ncols = lp.columns.len();
        let mut is_basic = vec![false; ncols + m];
        let mut slack_row = vec![false; m];
        let mut structural = Vec::new();
        for (r, &var) in basis.iter().enumerate() {
            if is_basic[var] {
                return None;
            }
            is_basic[var] = true;
            if var < ncols {
                structural.push(r);
            } else {
                slack_row[var - ncols] = true;
            }
        }
        let tight: Vec<usize> = (0..m).filter(|&i| !slack_row[i]).collect();
        let s = structural.len();
        if tight.len() != s {
            return None;
        }
        let mut tight_pos = vec![usize::MAX; m];
        for (j, &i) in tight.iter().enumerate() {
            tight_pos[i] = j;
        }
        // Gauss-Jordan on [M | I], M[j][k] = 1 iff tight row j lies in the
        // k-th basic structural column.
        let mut a = vec![T::zero(); s * s];
        let mut inv = vec![T::zero(); s * s];
        for (k, &r) in structural.iter().enumerate() {
            for &i in &lp.columns[basis[r]] {
                if tight_pos[i as usize] != usize::MAX {
                    a[tight_pos[i as usize] * s + k] = T::one();
                }
            }
        }
        for j in 0..s {
            inv[j * s + j] = T::one();
        }
        for col in 0..s {
            let piv = if T::EXACT {
                (col..s).find(|&r| a[r * s + col].is_nonzero())?
            } else {
                let best = (col..s).max_by(|&x, &y| a[x * s + col].to_f64().abs().total_cmp(&a[y * s + col].to_f64().abs()))?;
                if a[best * s + col].to_f64().abs() < 1e-12 {
                    return None;
                }
                best
            };
            if piv != col {
                for c in 0..s {
                    a.swap(piv * s + c, col * s + c);
                    inv.swap(piv * s + c, col * s + c);
                }
            }
            let p = a[col * s + col].clone();
            for c in 0..s {
                a[col * s + c].div_by(&p);
                inv[col * s + c].div_by(&p);
            }
            let (prow, pinv) = (a[col * s..(col + 1) * s].to_vec(), inv[col * s..(col + 1) * s].to_vec());
            for r in 0..s {
                if r == col || !a[r * s + col].is_nonzero() {
                    continue;
                }
                let f = a[r * s + col].clone();
                for c in 0..s {
                    if prow[c].is_nonzero() {
                        a[r * s + c].sub_mul(&f, &prow[c]);
                    }
                    if pinv[c].is_nonzero() {
                        inv[r * s + c].sub_mul(&f, &pinv[c]);
                    }
                }
            }
        }
        // After elimination, row k of `inv` (for the k-th structural column)
        // maps tight-row right-hand sides to that column's value.
        let mut binv = vec![T::zero(); m * m];
        for (k, &r) in structural.iter().enumerate() {
            for (j, &i) in tight.iter().enumerate() {
                binv[r * m + i] = inv[k * s + j].clone();
            }
        }
        let mut in_column = vec![Vec::new(); m];
        for (k, &r) in structural.iter().enumerate() {
            for &i in &lp.columns[basis[r]] {
                in_column[i as usize].push(k);
            }
        }
        for (r, &var) in basis.iter().enumerate() {
            if var < ncols {
                continue;
            }
            let o = var - ncols;
            binv[r * m + o] = T::one();
            for &k in &in_column[o] {
                for (j, &i) in tight.iter().enumerate() {
                    let v = &inv[k * s + j];
                    if v.is_nonzero() {
                        let cell = &mut binv[r * m + i];
                        *cell = cell.clone() - v.clone();
                    }
                }
            }
        }
        let mut xb = vec![T::zero(); m];
        let mut y = vec![T::zero(); m];
        for r in 0..m {
            for c in 0..m {
                let v = &binv[r * m + c];
                if v.is_nonzero() {
                    xb[r].add_ref(v);
                    if basis[r] < ncols {
                        y[c].add_ref(v);
                    }
                }
            }
        }
        Some(Tableau { lp, m, binv, basis: basis.to_vec(), xb, y, is_basic })
    }
}

/// Solve the packing LP to optimality.
pub fn solve<T: LpScalar>(lp: &PackingLp, pricing: Pricing) -> LpSolution<T> {
    run(Tableau::<T>::new(lp), pricing).0
}

/// Exact optimum, started from the optimal basis of a floating-point solve.
/// The exact tableau of that basis is usually already optimal; otherwise
/// the exact simplex continues from it under Bland's rule, or starts cold
/// if the basis is singular or infeasible in exact arithmetic.
pub fn solve_exact_warm<T: LpScalar>(lp: &PackingLp) -> LpSolution<T> {
    let (float, basis) = run(Tableau::<f64>::new(lp), Pricing::DantzigThenBland);
    match Tableau::<T>::from_basis(lp, &basis) {
        Some(t) if t.xb.iter().all(|x| !x.is_neg()) => {
            let (mut sol, _) = run(t, Pricing::Bland);
            sol.iterations += float.iterations;
            sol
        }
        _ => solve(lp, Pricing::Bland),
    }
}

fn run<T: LpScalar>(mut t: Tableau<'_, T>, pricing: Pricing) -> (LpSolution<T>, Vec<usize>) {
    let lp = t.lp;
    let mut rule = pricing;
    let mut degenerate = 0usize;
    let mut iterations = 0usize;
    let mut since_refactor = 0usize;
    loop {
        let next = t.entering(rule);
        let Some((var, reduced)) = next else {
            if !T::EXACT && since_refactor > 0 {
                // Confirm optimality on a freshly factorized basis.
                t.refactor();
                since_refactor = 0;
                if t.entering(rule).is_some() {
                    continue;
                }
            }
            break;
        };
        let alpha = t.column(var);
        let r = t
            .leaving(&alpha)
            .expect("packing LPs are bounded: every column has a positive entry");
        if t.xb[r].is_pos() {
            degenerate = 0;
        } else {
            degenerate += 1;
            if degenerate > DEGENERATE_RUN {
                rule = Pricing::Bland;
            }
        }
        t.pivot(r, var, &alpha, &reduced);
        iterations += 1;
        since_refactor += 1;
        if !T::EXACT && since_refactor >= REFACTOR_EVERY {
            t.refactor();
            since_refactor = 0;
        }
    }

    let ncols = lp.columns.len();
    let mut primal = vec![T::zero(); ncols];
    let mut value = T::zero();
    for (r, &var) in t.basis.iter().enumerate() {
        if var < ncols {
            let x = if t.xb[r].is_neg() { T::zero() } else { t.xb[r].clone() };
            value.add_ref(&x);
            primal[var] = x;
        }
    }
    let mut dual_value = T::zero();
    for y in &t.y {
        dual_value.add_ref(y);
    }
    (LpSolution { value, primal, dual: t.y, dual_value, iterations }, t.basis)
}

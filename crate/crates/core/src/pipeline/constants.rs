//! The parameter cascade that drives the theoretical pipeline.

use num_bigint::BigInt;
use num_traits::{One, Pow, ToPrimitive};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::family::{Family, MaxOrder};
use crate::Rational;

/// Exact rational with the same shortest decimal expansion as `x`, so that
/// 0.1 becomes 1/10 rather than the nearest binary fraction.
pub fn decimal_rational(x: f64) -> Result<Rational> {
    if !x.is_finite() {
        return Err(Error::arg(format!("{x} is not a finite number")));
    }
    let text = format!("{x}");
    let (neg, digits) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.as_str()),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    let num: BigInt = format!("{int}{frac}").parse().expect("float display is decimal");
    let den = BigInt::from(10u32).pow(frac.len() as u32);
    let r = Rational::new(num, den);
    Ok(if neg { -r } else { r })
}

#[derive(Clone, Debug, Serialize)]
pub struct TheoreticalConstants {
    pub epsilon: f64,
    /// Largest pattern order; `None` for unbounded families.
    pub k_infinity: Option<usize>,
    pub k0: usize,
    #[serde(serialize_with = "crate::ratio::serialize")]
    pub delta: Rational,
    #[serde(serialize_with = "crate::ratio::serialize")]
    pub beta: Rational,
    pub mu: f64,
    /// μ·δ^(k0²)/2. Underflows to zero for large k0; see `zeta_log10`.
    pub zeta: f64,
    pub zeta_log10: f64,
    pub gamma: f64,
    /// 25·k0²/ε, the number of parts each first-level class is split into.
    #[serde(serialize_with = "crate::ratio::serialize")]
    pub refinement_factor: Rational,
    /// γ·ε/(25·k0²).
    pub gamma_prime: f64,
    pub caveats: Vec<String>,
}

impl TheoreticalConstants {
    pub fn delta_f64(&self) -> f64 {
        self.delta.to_f64().unwrap_or(0.0)
    }

    /// Colors with ψ′(H) at or below m^(1−k0) are skipped.
    pub fn psi_threshold(&self, m: usize) -> Rational {
        psi_threshold(m, self.k0)
    }

    /// Smallest first-level class count m′ with m′ > 1/γ′.
    pub fn min_parts(&self) -> usize {
        (1.0 / self.gamma_prime).floor() as usize + 1
    }

    /// Smallest n for which the refined partition has non-empty classes.
    pub fn min_vertices(&self) -> f64 {
        self.min_parts() as f64 * self.refinement_factor.ceil().to_f64().unwrap_or(f64::INFINITY)
    }
}

/// m^(1−k0) as an exact rational.
pub fn psi_threshold(m: usize, k0: usize) -> Rational {
    let m = BigInt::from(m.max(1));
    if k0 >= 1 {
        Rational::new(BigInt::one(), Pow::pow(&m, (k0 - 1) as u32))
    } else {
        Rational::from_integer(m)
    }
}

/// Derive k0, δ = β, ζ, the refinement factor and γ′ from ε, the family,
/// and the configured μ and γ.
pub fn compute_constants(epsilon: f64, family: &Family, mu: f64, gamma: f64) -> Result<TheoreticalConstants> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::arg(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    if !(mu > 0.0) || !(gamma > 0.0 && gamma < 1.0) {
        return Err(Error::arg("mu must be positive and gamma must lie in (0, 1)"));
    }
    let eps = decimal_rational(epsilon)?;
    let cap = (Rational::from_integer(BigInt::from(20)) / &eps).ceil().to_integer().to_usize().unwrap_or(usize::MAX);
    let k_infinity = match family.max_order() {
        MaxOrder::Finite(k) => Some(k),
        MaxOrder::Unbounded => None,
    };
    let k0 = k_infinity.map_or(cap, |k| k.min(cap));
    let delta = &eps / Rational::from_integer(BigInt::from(4));
    let delta_f = delta.to_f64().unwrap_or(0.0);
    let exponent = (k0 * k0) as i32;
    let zeta = mu * delta_f.powi(exponent) / 2.0;
    let zeta_log10 = mu.log10() + exponent as f64 * delta_f.log10() - 2f64.log10();
    let k0_sq = Rational::from_integer(BigInt::from(25 * k0 * k0));
    let refinement_factor = &k0_sq / &eps;
    let gamma_prime = gamma * epsilon / (25.0 * (k0 * k0) as f64);
    let mut caveats = vec![
        "M(γ′) from the regularity lemma and the threshold N are not constructive; the pipeline only runs when the \
         refined classes fit into n"
            .to_string(),
        "μ and γ are configuration values; the lemmas only assert that suitable values exist".to_string(),
    ];
    if !refinement_factor.is_integer() {
        caveats.push(format!("refinement factor {refinement_factor} is not an integer and is rounded up"));
    }
    Ok(TheoreticalConstants {
        epsilon,
        k_infinity,
        k0,
        beta: delta.clone(),
        delta,
        mu,
        zeta,
        zeta_log10,
        gamma,
        refinement_factor,
        gamma_prime,
        caveats,
    })
}

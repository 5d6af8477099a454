//! Generalized hypergeometric series `pFq`.
//!
//! `pFq(a₁..a_p; b₁..b_q; z) = Σ_k ∏(aᵢ)_k / ∏(bⱼ)_k · z^k / k!`
//!
//! Parameters are rational and the argument is a finite float, converted
//! exactly to the dyadic rational it represents. Each term is produced by the
//! exact recurrence `t_{k+1} = t_k · ∏(aᵢ + k) / ∏(bⱼ + k) · z / (k + 1)` and
//! only then rounded, so the floating-point error is confined to the
//! accumulation.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_core::{i_mn, rational_from_f64, BigRational};

pub const DEFAULT_MAX_TERMS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct PFQParams {
    upper: Vec<BigRational>,
    lower: Vec<BigRational>,
    z: f64,
}

fn non_positive_integer(x: &BigRational) -> bool {
    x.is_integer() && !x.is_positive()
}

impl PFQParams {
    /// Validates the parameters: no lower parameter may be a non-positive
    /// integer, and a non-terminating series with `p > q` must have `|z| < 1`
    /// (for `p = q + 1`) or `z = 0` (for `p > q + 1`).
    pub fn new(upper: Vec<BigRational>, lower: Vec<BigRational>, z: f64) -> Result<Self> {
        if !z.is_finite() {
            return Err(Error::Domain(format!("argument z = {z} is not finite")));
        }
        if let Some(b) = lower.iter().find(|b| non_positive_integer(b)) {
            return Err(Error::Domain(format!(
                "lower parameter {b} is a non-positive integer"
            )));
        }
        let params = Self { upper, lower, z };
        if !params.terminates() && z != 0.0 {
            let (p, q) = (params.upper.len(), params.lower.len());
            if p == q + 1 && z.abs() >= 1.0 {
                return Err(Error::Domain(format!(
                    "{p}F{q} series diverges at |z| = {} >= 1",
                    z.abs()
                )));
            }
            if p > q + 1 {
                return Err(Error::Domain(format!("{p}F{q} series diverges for z != 0")));
            }
        }
        Ok(params)
    }

    pub fn upper(&self) -> &[BigRational] {
        &self.upper
    }

    pub fn lower(&self) -> &[BigRational] {
        &self.lower
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    /// True when some upper parameter is a non-positive integer.
    pub fn terminates(&self) -> bool {
        self.upper.iter().any(non_positive_integer)
    }
}

/// Rising factorial `x (x + 1) ⋯ (x + k - 1)`.
pub fn pochhammer(x: &BigRational, k: u64) -> BigRational {
    let mut acc = BigRational::one();
    let mut factor = x.clone();
    for _ in 0..k {
        acc *= &factor;
        factor += BigRational::one();
    }
    acc
}

/// Sum of the series together with the number of terms used.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue {
    pub value: f64,
    pub terms: usize,
}

/// Evaluates the series, stopping once two consecutive terms are smaller than
/// `rel_tol · |partial sum|` or when a vanishing Pochhammer ends the series.
pub fn pfq_detailed(params: &PFQParams, rel_tol: f64, max_terms: usize) -> Result<SeriesValue> {
    if !(rel_tol > 0.0) {
        return Err(Error::Domain(format!("rel_tol must be positive, got {rel_tol}")));
    }
    let z = rational_from_f64(params.z)?;
    // A terminating series is summed to its last non-zero term.
    let use_stop_rule = !params.terminates();
    let mut term = BigRational::one();
    let mut sum = 0.0f64;
    let mut small_run = 0;
    let mut last_magnitude = 1.0;
    for k in 0..max_terms {
        if term.is_zero() {
            return Ok(SeriesValue { value: sum, terms: k });
        }
        let t = term.to_f64().unwrap_or(f64::NAN);
        if !t.is_finite() {
            return Err(Error::Overflow(format!("series term {k} is not representable")));
        }
        sum += t;
        last_magnitude = t.abs();
        if use_stop_rule && last_magnitude < rel_tol * sum.abs() {
            small_run += 1;
            if small_run == 2 {
                return Ok(SeriesValue { value: sum, terms: k + 1 });
            }
        } else {
            small_run = 0;
        }
        let kq = BigRational::from_integer(BigInt::from(k));
        for a in &params.upper {
            term *= a + &kq;
        }
        for b in &params.lower {
            term /= b + &kq;
        }
        term *= &z;
        term /= BigRational::from_integer(BigInt::from(k + 1));
    }
    if term.is_zero() {
        return Ok(SeriesValue { value: sum, terms: max_terms });
    }
    Err(Error::SeriesNonConvergence {
        partial_sum: sum,
        last_term: last_magnitude,
        terms: max_terms,
    })
}

pub fn pfq(params: &PFQParams, rel_tol: f64, max_terms: usize) -> Result<f64> {
    pfq_detailed(params, rel_tol, max_terms).map(|s| s.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub pass: bool,
}

/// Compares `2F1(2m, n - 1; m + n/2; 1/2)` with `I(m, n)`.
pub fn check_2f1_identity(m: u64, n: u64, rel_tol: f64) -> Result<IdentityCheck> {
    if n < 2 {
        return Err(Error::Domain("the 2F1 identity is checked for n >= 2".into()));
    }
    let int = |k: u64| BigRational::from_integer(BigInt::from(k));
    let params = PFQParams::new(
        vec![int(2 * m), int(n - 1)],
        vec![BigRational::new(BigInt::from(2 * m + n), BigInt::from(2))],
        0.5,
    )?;
    let lhs = pfq(&params, f64::EPSILON, DEFAULT_MAX_TERMS)?;
    let rhs = i_mn(m, n)?
        .to_f64()
        .ok_or_else(|| Error::Overflow(format!("I({m}, {n}) as f64")))?;
    let pass = (lhs - rhs).abs() <= rel_tol * rhs.abs();
    Ok(IdentityCheck { lhs, rhs, pass })
}

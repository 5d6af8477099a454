//! Partition function of a gas of `N` vortices on a sphere with the
//! `SO(3)`-invariant interaction `μ² ‖J‖²`.
//!
//! The moduli space volume and the moments `∫ J₃^(2m)` follow from
//! Duistermaat–Heckman localization for the circle action generated by `J₃`:
//!
//! ```text
//! ∫ J₃^(2m) = c(N, m) · Ã^(N+2m),
//! c(N, m)   = (2m)!/(N+2m)! · Σ_j (-1)^(N-j) (j - N/2)^(N+2m) / (j! (N-j)!)
//! ```
//!
//! with `Ã = 4π(R² - N)`. The alternating sum cancels catastrophically in
//! floating point, so `c` is kept as an exact rational.
//!
//! `Z` is evaluated twice: as the exponential series in `μ²` (using
//! `I(m, 3) = 2m + 1` to trade `‖J‖^(2m)` for `J₃^(2m)`), and in closed form as
//! a finite sum of `2F2` values.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_core::{factorial, BigRational};
use crate::hypergeometric::{pfq_detailed, PFQParams, DEFAULT_MAX_TERMS};

/// Physical inputs of the vortex gas. All quantities are dimensionless.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VortexParams {
    n: u32,
    r2: f64,
    mu2: f64,
    t: f64,
    hbar: f64,
}

impl VortexParams {
    /// Validates `N ≥ 1`, `R² > N`, `μ² ≥ 0`, `T > 0` and `ħ > 0`.
    pub fn new(n: u32, r2: f64, mu2: f64, t: f64, hbar: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("vortex number N must be at least 1".into()));
        }
        if !(r2 > n as f64) || !r2.is_finite() {
            return Err(Error::Domain(format!(
                "radius condition R^2 > N violated (R^2 = {r2}, N = {n})"
            )));
        }
        if !(mu2 >= 0.0) || !mu2.is_finite() {
            return Err(Error::Domain(format!("coupling mu^2 must be >= 0, got {mu2}")));
        }
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::Domain(format!("temperature must be > 0, got {t}")));
        }
        if !(hbar > 0.0) || !hbar.is_finite() {
            return Err(Error::Domain(format!("hbar must be > 0, got {hbar}")));
        }
        Ok(Self { n, r2, mu2, t, hbar })
    }

    /// Parameters with `μ²` chosen so that the dimensionless coupling
    /// `μ² Ã² / T` equals `coupling`.
    pub fn with_coupling(n: u32, r2: f64, coupling: f64, t: f64, hbar: f64) -> Result<Self> {
        let probe = Self::new(n, r2, 0.0, t, hbar)?;
        let area = probe.area();
        Self::new(n, r2, coupling * t / (area * area), t, hbar)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn r2(&self) -> f64 {
        self.r2
    }

    pub fn mu2(&self) -> f64 {
        self.mu2
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// Area available to the vortices, `Ã = 4π(R² - N)`.
    pub fn area(&self) -> f64 {
        4.0 * std::f64::consts::PI * (self.r2 - self.n as f64)
    }

    /// `μ² Ã² / T`.
    pub fn coupling(&self) -> f64 {
        let area = self.area();
        self.mu2 * area * area / self.t
    }

    fn momentum_factor(&self) -> f64 {
        self.t / (2.0 * self.hbar * self.hbar)
    }
}

/// `∫ J₃^(2m) = coeff · Ã^power`, with `power = N + 2m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DHMomentCoeff {
    pub coeff: BigRational,
    pub power: u64,
}

impl DHMomentCoeff {
    /// Exact value for a rational area.
    pub fn evaluate(&self, area: &BigRational) -> BigRational {
        &self.coeff * num_traits::pow(area.clone(), self.power as usize)
    }
}

fn q_int(k: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(k.into())
}

/// Exact localization coefficient of `∫ J₃^(2m)` on the `N`-vortex moduli space.
pub fn dh_moment_coeff(n: u32, m: u32) -> Result<DHMomentCoeff> {
    if n == 0 {
        return Err(Error::Domain("vortex number N must be at least 1".into()));
    }
    let (n, m) = (n as u64, m as u64);
    let power = n + 2 * m;
    let mut sum = BigRational::zero();
    for j in 0..=n {
        // j - N/2 = (2j - N)/2
        let offset = BigRational::new(BigInt::from(2 * j as i64 - n as i64), BigInt::from(2));
        let mut term = num_traits::pow(offset, power as usize)
            / q_int(factorial(j) * factorial(n - j));
        if (n - j) % 2 == 1 {
            term = -term;
        }
        sum += term;
    }
    let coeff = sum * q_int(factorial(2 * m)) / q_int(factorial(power));
    Ok(DHMomentCoeff { coeff, power })
}

/// `∫ J₃^(2m)` as a float.
pub fn dh_moment(params: &VortexParams, m: u32) -> Result<f64> {
    let c = dh_moment_coeff(params.n, m)?;
    let value = c.coeff.to_f64().unwrap_or(f64::NAN) * params.area().powi(c.power as i32);
    if !value.is_finite() {
        return Err(Error::Overflow(format!(
            "DH moment with N = {}, m = {m} exceeds the f64 range",
            params.n
        )));
    }
    Ok(value)
}

/// The `m`-th term of the exponential series for `Z`, given the moment
/// constant `I(m, 3)` used to replace `∫ ‖J‖^(2m)` by `∫ J₃^(2m)`.
///
/// The rational part `I(m, 3) c(N, m) / m!` is assembled exactly and rounded
/// once; the powers are grouped as `(μ²Ã²/T)^m Ã^N` to stay in range.
pub fn z_series_term(params: &VortexParams, m: u32, i_m3: &BigRational) -> Result<f64> {
    let c = dh_moment_coeff(params.n, m)?;
    let rational = i_m3 * &c.coeff / q_int(factorial(m as u64));
    let magnitude = rational.to_f64().unwrap_or(f64::NAN);
    let sign = if m % 2 == 1 { -1.0 } else { 1.0 };
    let value = sign
        * magnitude
        * params.coupling().powi(m as i32)
        * params.area().powi(params.n as i32)
        * params.momentum_factor().powi(params.n as i32);
    if !value.is_finite() {
        return Err(Error::Overflow(format!("Z series term {m} is not representable")));
    }
    Ok(value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZSeries {
    pub value: f64,
    pub terms_used: usize,
    /// Set when `|Z|` is below `1e-6` of the largest partial sum seen, i.e.
    /// most significant digits were lost to cancellation.
    pub precision_loss: bool,
}

pub const PRECISION_LOSS_RATIO: f64 = 1e-6;

/// `Z` from the exponential series, stopping when two consecutive terms fall
/// below `rel_tol · |partial sum|`.
pub fn z_series_detailed(params: &VortexParams, rel_tol: f64, max_m: u32) -> Result<ZSeries> {
    if !(rel_tol > 0.0) {
        return Err(Error::Domain(format!("rel_tol must be positive, got {rel_tol}")));
    }
    let mut sum = 0.0f64;
    let mut max_partial = 0.0f64;
    let mut small_run = 0;
    let mut last = 0.0f64;
    for m in 0..max_m {
        // I(m, 3) = 2m + 1
        let term = z_series_term(params, m, &q_int(2 * m as u64 + 1))?;
        sum += term;
        max_partial = max_partial.max(sum.abs());
        last = term.abs();
        if last < rel_tol * sum.abs() {
            small_run += 1;
            if small_run == 2 {
                return Ok(ZSeries {
                    value: sum,
                    terms_used: m as usize + 1,
                    precision_loss: sum.abs() < PRECISION_LOSS_RATIO * max_partial,
                });
            }
        } else {
            small_run = 0;
        }
    }
    Err(Error::SeriesNonConvergence {
        partial_sum: sum,
        last_term: last,
        terms: max_m as usize,
    })
}

pub fn z_series(params: &VortexParams, rel_tol: f64, max_m: u32) -> Result<f64> {
    z_series_detailed(params, rel_tol, max_m).map(|z| z.value)
}

/// `Z` in closed form:
///
/// ```text
/// Z = (1/N!) (ÃT/2ħ²)^N Σ_j (-1)^j/(j!(N-j)!) (N/2 - j)^N
///       · 2F2(1, 3/2; (N+1)/2, (N+2)/2; -(μÃ)² (N/2 - j)² / T)
/// ```
///
/// The central term `j = N/2` of an even `N` vanishes and is skipped.
pub fn z_closed(params: &VortexParams, rel_tol: f64) -> Result<f64> {
    let n = params.n as u64;
    let upper = vec![BigRational::one(), BigRational::new(3.into(), 2.into())];
    let lower = vec![
        BigRational::new(BigInt::from(n + 1), 2.into()),
        BigRational::new(BigInt::from(n + 2), 2.into()),
    ];
    let coupling = params.coupling();
    let mut sum = 0.0;
    for j in 0..=n {
        let offset = BigRational::new(BigInt::from(n as i64 - 2 * j as i64), 2.into());
        if offset.is_zero() {
            continue;
        }
        let mut weight = num_traits::pow(offset.clone(), n as usize)
            / q_int(factorial(j) * factorial(n - j));
        if j % 2 == 1 {
            weight = -weight;
        }
        let offset2 = (&offset * &offset).to_f64().unwrap_or(f64::NAN);
        let hyp = PFQParams::new(upper.clone(), lower.clone(), -coupling * offset2)?;
        let f = pfq_detailed(&hyp, rel_tol, DEFAULT_MAX_TERMS)?.value;
        sum += weight.to_f64().unwrap_or(f64::NAN) * f;
    }
    let scale = (params.area() * params.momentum_factor()).powi(params.n as i32)
        / factorial(n).to_f64().unwrap_or(f64::INFINITY);
    let value = scale * sum;
    if !value.is_finite() {
        return Err(Error::Overflow("closed-form Z is not representable".into()));
    }
    Ok(value)
}

/// One row of a parameter sweep comparing both evaluations of `Z`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "R2")]
    pub r2: f64,
    pub mu2: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub hbar: f64,
    #[serde(rename = "Z_series")]
    pub z_series: f64,
    #[serde(rename = "Z_closed")]
    pub z_closed: f64,
    pub rel_diff: f64,
    pub terms_used: usize,
}

pub const DEFAULT_SERIES_TOL: f64 = 1e-15;
pub const DEFAULT_MAX_M: u32 = 2_000;

/// Evaluates both forms of `Z` and their relative difference.
pub fn compare(params: &VortexParams) -> Result<SweepRow> {
    let series = z_series_detailed(params, DEFAULT_SERIES_TOL, DEFAULT_MAX_M)?;
    let closed = z_closed(params, DEFAULT_SERIES_TOL)?;
    let rel_diff = if series.value == closed {
        0.0
    } else {
        (series.value - closed).abs() / closed.abs()
    };
    Ok(SweepRow {
        n: params.n,
        r2: params.r2,
        mu2: params.mu2,
        t: params.t,
        hbar: params.hbar,
        z_series: series.value,
        z_closed: closed,
        rel_diff,
        terms_used: series.terms_used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_core::{binomial, i_mn};
    use num_traits::Signed;
    use std::f64::consts::PI;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn parameter_validation() {
        assert!(VortexParams::new(1, 2.0, 0.0, 1.0, 1.0).is_ok());
        assert!(VortexParams::new(1, 1.0, 0.0, 1.0, 1.0).is_err());
        assert!(VortexParams::new(0, 2.0, 0.0, 1.0, 1.0).is_err());
        assert!(VortexParams::new(1, 2.0, -1.0, 1.0, 1.0).is_err());
        assert!(VortexParams::new(1, 2.0, 0.0, 0.0, 1.0).is_err());
        assert!(VortexParams::new(1, 2.0, 0.0, 1.0, 0.0).is_err());
        let p = VortexParams::with_coupling(3, 7.0, 5.0, 2.0, 1.0).unwrap();
        assert!((p.coupling() - 5.0).abs() < 1e-12);
    }

    #[test]
    fn coefficient_reference_values() {
        assert_eq!(dh_moment_coeff(1, 0).unwrap().coeff, q(1, 1));
        assert_eq!(dh_moment_coeff(1, 1).unwrap(), DHMomentCoeff { coeff: q(1, 12), power: 3 });
        assert!(dh_moment_coeff(0, 0).is_err());
    }

    #[test]
    fn volume_coefficient_is_inverse_factorial() {
        for n in 1..=12u32 {
            // oracle: Σ (-1)^(N-j) C(N, j) (2j - N)^N = 2^N N!
            let mut brute = BigInt::zero();
            for j in 0..=n as u64 {
                let t = binomial(n as u64, j) * num_traits::pow(BigInt::from(2 * j as i64 - n as i64), n as usize);
                if (n as u64 - j) % 2 == 1 {
                    brute -= t;
                } else {
                    brute += t;
                }
            }
            assert_eq!(brute, (BigInt::one() << n as usize) * factorial(n as u64));
            let c = dh_moment_coeff(n, 0).unwrap();
            assert_eq!(c.coeff, BigRational::new(1.into(), factorial(n as u64)));
            assert_eq!(c.power, n as u64);
        }
    }

    #[test]
    fn coefficients_are_positive() {
        for n in 1..=8 {
            for m in 0..=8 {
                assert!(dh_moment_coeff(n, m).unwrap().coeff.is_positive(), "N = {n}, m = {m}");
            }
        }
    }

    #[test]
    fn homogeneity_in_area() {
        let area = q(7, 3);
        for (n, m) in [(1, 0), (2, 3), (5, 4)] {
            let c = dh_moment_coeff(n, m).unwrap();
            let doubled = c.evaluate(&(&area * q(2, 1)));
            let scale = BigRational::from_integer(BigInt::one() << c.power as usize);
            assert_eq!(doubled, c.evaluate(&area) * scale);
        }
    }

    #[test]
    fn moment_values() {
        let p = VortexParams::new(1, 2.0, 0.0, 1.0, 1.0).unwrap();
        assert!(rel(dh_moment(&p, 0).unwrap(), 4.0 * PI) < 1e-15);
        assert!(rel(dh_moment(&p, 1).unwrap(), (4.0 * PI).powi(3) / 12.0) < 1e-15);
        let p = VortexParams::new(2, 3.0, 0.0, 1.0, 1.0).unwrap();
        assert!(rel(dh_moment(&p, 0).unwrap(), 8.0 * PI * PI) < 1e-15);
        let p = VortexParams::new(1, 1e200, 0.0, 1.0, 1.0).unwrap();
        assert!(matches!(dh_moment(&p, 2), Err(Error::Overflow(_))));
    }

    #[test]
    fn free_gas_limit() {
        for n in 1..=5u32 {
            let p = VortexParams::new(n, n as f64 + 2.5, 0.0, 1.7, 0.9).unwrap();
            let z = z_series_detailed(&p, 1e-15, 100).unwrap();
            let expected = (p.t() / (2.0 * p.hbar() * p.hbar())).powi(n as i32)
                * p.area().powi(n as i32)
                / factorial(n as u64).to_f64().unwrap();
            assert!(rel(z.value, expected) < 1e-14);
            // only the m = 0 term is non-zero
            assert_eq!(z.terms_used, 3);
            assert!(rel(z_closed(&p, 1e-15).unwrap(), expected) < 1e-13);
        }
        let p = VortexParams::new(1, 2.0, 0.0, 1.0, 1.0).unwrap();
        assert!(rel(z_closed(&p, 1e-15).unwrap(), p.area() / 2.0) < 1e-15);
    }

    #[test]
    fn series_agrees_with_closed_form() {
        for n in 1..=4u32 {
            for extra in [1.0, 4.0] {
                for coupling in [0.1, 1.0, 5.0] {
                    let p = VortexParams::with_coupling(n, n as f64 + extra, coupling, 1.0, 1.0).unwrap();
                    let row = compare(&p).unwrap();
                    assert!(row.rel_diff < 1e-8, "{row:?}");
                }
            }
        }
    }

    #[test]
    fn decreasing_in_coupling() {
        let mut previous = f64::INFINITY;
        for k in 0..12 {
            let p = VortexParams::with_coupling(3, 5.0, 0.5 * k as f64, 1.0, 1.0).unwrap();
            let z = z_series(&p, 1e-15, 2000).unwrap();
            assert!(z < previous, "coupling {}: {z} >= {previous}", 0.5 * k as f64);
            previous = z;
        }
    }

    #[test]
    fn series_terms_match_theorem_constant() {
        let p = VortexParams::with_coupling(3, 4.0, 2.0, 1.0, 1.0).unwrap();
        for m in 0..40 {
            let literal = z_series_term(&p, m, &q(2 * m as i64 + 1, 1)).unwrap();
            let from_theorem = z_series_term(&p, m, &i_mn(m as u64, 3).unwrap()).unwrap();
            assert_eq!(literal.to_bits(), from_theorem.to_bits());
        }
    }

    #[test]
    fn non_convergence_is_reported() {
        let p = VortexParams::with_coupling(2, 3.0, 5.0, 1.0, 1.0).unwrap();
        assert!(matches!(
            z_series_detailed(&p, 1e-15, 3),
            Err(Error::SeriesNonConvergence { terms: 3, .. })
        ));
    }
}

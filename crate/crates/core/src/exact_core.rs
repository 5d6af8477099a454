//! Exact rational arithmetic, Gamma and Beta at half-integer arguments, and
//! the moment constant `I(m, n)`.
//!
//! Values of the form `q · π^(h/2)` are carried by [`PiScaled`], which keeps
//! `√π` symbolic. Every Gamma value at a positive half-integer is of that form
//! with `h ∈ {0, 1}`, so ratios of such values can be checked to be rational
//! rather than merely close to a rational.

use std::fmt;
use std::ops::{Div, Mul};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

pub use num_rational::BigRational;

use crate::error::{Error, Result};

/// A half-integer `p/2`, stored as `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfInteger {
    twice_value: i64,
}

impl HalfInteger {
    /// The half-integer `twice_value / 2`.
    pub const fn from_twice(twice_value: i64) -> Self {
        Self { twice_value }
    }

    pub const fn from_integer(k: i64) -> Self {
        Self {
            twice_value: 2 * k,
        }
    }

    pub const fn twice_value(self) -> i64 {
        self.twice_value
    }

    pub fn is_integer(self) -> bool {
        self.twice_value % 2 == 0
    }

    pub fn to_rational(self) -> BigRational {
        BigRational::new(BigInt::from(self.twice_value), BigInt::from(2))
    }
}

impl std::ops::Add for HalfInteger {
    type Output = HalfInteger;

    fn add(self, rhs: HalfInteger) -> HalfInteger {
        HalfInteger::from_twice(self.twice_value + rhs.twice_value)
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.twice_value / 2)
        } else {
            write!(f, "{}/2", self.twice_value)
        }
    }
}

/// An exact value `coeff · π^(half_pi_power / 2)`.
///
/// Zero is always stored with `half_pi_power == 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PiScaled {
    coeff: BigRational,
    half_pi_power: i32,
}

impl PiScaled {
    pub fn new(coeff: BigRational, half_pi_power: i32) -> Self {
        if coeff.is_zero() {
            Self::zero()
        } else {
            Self {
                coeff,
                half_pi_power,
            }
        }
    }

    pub fn rational(coeff: BigRational) -> Self {
        Self::new(coeff, 0)
    }

    pub fn zero() -> Self {
        Self {
            coeff: BigRational::zero(),
            half_pi_power: 0,
        }
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    /// `√π`, i.e. `Γ(1/2)`.
    pub fn sqrt_pi() -> Self {
        Self::new(BigRational::one(), 1)
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn half_pi_power(&self) -> i32 {
        self.half_pi_power
    }

    /// The rational value when no power of `√π` remains.
    pub fn as_rational(&self) -> Option<&BigRational> {
        (self.half_pi_power == 0).then_some(&self.coeff)
    }

    /// Sum of two values carrying the same power of `√π`.
    pub fn try_add(&self, other: &PiScaled) -> Result<PiScaled> {
        if self.coeff.is_zero() {
            return Ok(other.clone());
        }
        if other.coeff.is_zero() {
            return Ok(self.clone());
        }
        if self.half_pi_power != other.half_pi_power {
            return Err(Error::PiPowerMismatch {
                left: self.half_pi_power,
                right: other.half_pi_power,
            });
        }
        Ok(PiScaled::new(
            &self.coeff + &other.coeff,
            self.half_pi_power,
        ))
    }

    pub fn scale(&self, factor: &BigRational) -> PiScaled {
        PiScaled::new(&self.coeff * factor, self.half_pi_power)
    }

    pub fn to_f64(&self) -> f64 {
        let coeff = self.coeff.to_f64().unwrap_or(f64::NAN);
        let whole = self.half_pi_power.div_euclid(2);
        let rem = self.half_pi_power.rem_euclid(2);
        let mut value = coeff * std::f64::consts::PI.powi(whole);
        if rem == 1 {
            value *= std::f64::consts::PI.sqrt();
        }
        value
    }
}

impl Mul for &PiScaled {
    type Output = PiScaled;

    fn mul(self, rhs: &PiScaled) -> PiScaled {
        PiScaled::new(
            &self.coeff * &rhs.coeff,
            self.half_pi_power + rhs.half_pi_power,
        )
    }
}

impl Mul for PiScaled {
    type Output = PiScaled;

    fn mul(self, rhs: PiScaled) -> PiScaled {
        &self * &rhs
    }
}

impl Div for &PiScaled {
    type Output = PiScaled;

    /// Panics on division by zero, like the underlying rational type.
    fn div(self, rhs: &PiScaled) -> PiScaled {
        PiScaled::new(
            &self.coeff / &rhs.coeff,
            self.half_pi_power - rhs.half_pi_power,
        )
    }
}

impl Div for PiScaled {
    type Output = PiScaled;

    fn div(self, rhs: PiScaled) -> PiScaled {
        &self / &rhs
    }
}

impl fmt::Display for PiScaled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.half_pi_power {
            0 => write!(f, "{}", self.coeff),
            2 => write!(f, "{}*pi", self.coeff),
            h => write!(f, "{}*pi^({}/2)", self.coeff, h),
        }
    }
}

pub fn factorial(k: u64) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    // Each prefix product is itself a binomial coefficient, so the division is exact.
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

/// Exact `Γ(p/2)` for `p ≥ 1`.
///
/// Integer arguments give `(p/2 - 1)!`; odd `p` walks `Γ(z + 1) = z Γ(z)` up
/// from `Γ(1/2) = √π`.
pub fn gamma_half(a: HalfInteger) -> Result<PiScaled> {
    let p = a.twice_value();
    if p < 1 {
        return Err(Error::Domain(format!(
            "Gamma is only evaluated at positive half-integers, got {a}"
        )));
    }
    if p % 2 == 0 {
        let k = (p / 2 - 1) as u64;
        return Ok(PiScaled::rational(BigRational::from_integer(factorial(k))));
    }
    // Γ(p/2) = √π · ∏_{j=1}^{(p-1)/2} (2j - 1)/2
    let steps = (p - 1) / 2;
    let mut coeff = BigRational::one();
    for j in 1..=steps {
        coeff *= BigRational::new(BigInt::from(2 * j - 1), BigInt::from(2));
    }
    Ok(PiScaled::new(coeff, 1))
}

/// Exact Euler Beta function `Γ(a)Γ(b)/Γ(a + b)` at positive half-integers.
pub fn beta_half(a: HalfInteger, b: HalfInteger) -> Result<PiScaled> {
    let num = gamma_half(a)? * gamma_half(b)?;
    Ok(num / gamma_half(a + b)?)
}

fn check_mn(m: u64, n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("dimension n must be at least 1".into()));
    }
    if m > (i64::MAX / 4) as u64 || n > (i64::MAX / 4) as u64 {
        return Err(Error::Domain(format!("(m, n) = ({m}, {n}) too large")));
    }
    Ok(())
}

/// `I(m, n) = Γ(1/2) Γ(m + n/2) / (Γ(m + 1/2) Γ(n/2))`, evaluated exactly.
///
/// The powers of `√π` cancel; a leftover power is reported as an error rather
/// than silently discarded.
pub fn i_mn(m: u64, n: u64) -> Result<BigRational> {
    check_mn(m, n)?;
    let (m2, n2) = (2 * m as i64, n as i64);
    let num = &PiScaled::sqrt_pi() * &gamma_half(HalfInteger::from_twice(m2 + n2))?;
    let den = &gamma_half(HalfInteger::from_twice(m2 + 1))?
        * &gamma_half(HalfInteger::from_twice(n2))?;
    let ratio = num / den;
    match ratio.as_rational() {
        Some(q) => Ok(q.clone()),
        None => Err(Error::Domain(format!(
            "I({m}, {n}) retained a factor pi^({}/2)",
            ratio.half_pi_power()
        ))),
    }
}

fn fact_q(k: u64) -> BigRational {
    BigRational::from_integer(factorial(k))
}

/// `I(m, n)` from the explicit even/odd factorial formulas.
///
/// Those formulas contain `(m - 1)!`, so `m = 0` is delegated to [`i_mn`].
pub fn i_mn_closed(m: u64, n: u64) -> Result<BigRational> {
    check_mn(m, n)?;
    if m == 0 {
        return i_mn(m, n);
    }
    if n % 2 == 0 {
        // 2^(2m-1) (m + n/2 - 1)! (m - 1)! / ((2m - 1)! (n/2 - 1)!)
        let half_n = n / 2;
        let pow2 = BigRational::from_integer(BigInt::one() << (2 * m - 1) as usize);
        Ok(pow2 * fact_q(m + half_n - 1) * fact_q(m - 1)
            / (fact_q(2 * m - 1) * fact_q(half_n - 1)))
    } else {
        // (2m + n - 2)! (m - 1)! ((n - 3)/2)! / (2 (2m - 1)! (n - 2)! (m + (n - 3)/2)!)
        //
        // For n = 1 the factors ((n - 3)/2)! and (n - 2)! are both (-1)!; the
        // ratio Γ(ε)/Γ(2ε) tends to 2 and is substituted directly.
        let pole_ratio = if n == 1 {
            BigRational::from_integer(BigInt::from(2))
        } else {
            fact_q((n - 3) / 2) / fact_q(n - 2)
        };
        let upper = m + (n + 1) / 2 - 2;
        Ok(fact_q(2 * m + n - 2) * fact_q(m - 1) * pole_ratio
            / (BigRational::from_integer(BigInt::from(2)) * fact_q(2 * m - 1) * fact_q(upper)))
    }
}

/// Parses `"p/q"` or `"p"` into a rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let text = text.trim();
    let bad = || Error::Domain(format!("not a rational number: {text:?}"));
    match text.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(text.parse().map_err(|_| bad())?)),
    }
}

/// Exact conversion of a finite float to the rational it represents.
pub fn rational_from_f64(x: f64) -> Result<BigRational> {
    BigRational::from_float(x)
        .ok_or_else(|| Error::Domain(format!("{x} is not a finite number")))
}

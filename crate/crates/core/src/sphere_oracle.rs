//! The round sphere `S^(n-1)` as a model satisfying the isotropy hypothesis.
//!
//! With the cartesian coordinates as the functions `Jⱼ`, `∫ ‖J‖^(2m)` is the
//! sphere volume and the constant `C` is the axis moment `∫ Jₙ^(2m)`, so their
//! ratio is `I(m, n)`. The axis moment reduces to a one-dimensional integral of
//! `x^(2m) (1 - x²)^((n-3)/2)` against the volume of `S^(n-2)`.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact_core::{gamma_half, BigRational, HalfInteger, PiScaled};
use crate::quadrature;
use crate::sampling::mc_mean;

pub use crate::sampling::MCEstimate;

/// Norm tolerance accepted for a unit vector.
pub const UNIT_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnitVector {
    components: Vec<f64>,
}

impl UnitVector {
    /// Accepts `components` when their squared norm is within
    /// [`UNIT_TOLERANCE`] of one.
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::Domain("unit vector needs at least one component".into()));
        }
        let norm2: f64 = components.iter().map(|x| x * x).sum();
        if (norm2 - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::Domain(format!(
                "vector has squared norm {norm2}, expected 1"
            )));
        }
        Ok(Self { components })
    }

    /// Scales a non-zero vector onto the unit sphere.
    pub fn normalized(components: Vec<f64>) -> Result<Self> {
        let norm = components.iter().map(|x| x * x).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::Domain("cannot normalize a zero or non-finite vector".into()));
        }
        Self::new(components.into_iter().map(|x| x / norm).collect())
    }

    /// The `i`-th standard basis vector of `ℝⁿ`.
    pub fn basis(n: usize, i: usize) -> Result<Self> {
        if i >= n {
            return Err(Error::Domain(format!("basis index {i} out of range for n = {n}")));
        }
        let mut components = vec![0.0; n];
        components[i] = 1.0;
        Ok(Self { components })
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn dot(&self, x: &[f64]) -> f64 {
        self.components.iter().zip(x).map(|(a, b)| a * b).sum()
    }
}

/// Exact volume `2 π^(n/2) / Γ(n/2)` of `S^(n-1)`.
pub fn sphere_volume(n: u64) -> Result<PiScaled> {
    if n == 0 {
        return Err(Error::Domain("sphere_volume needs n >= 1".into()));
    }
    let two_pi_pow = PiScaled::new(BigRational::from_integer(2.into()), n as i32);
    Ok(two_pi_pow / gamma_half(HalfInteger::from_twice(n as i64))?)
}

/// Exact `∫_{S^(n-1)} Jₙ^(2m) = 2 π^((n-1)/2) Γ(m + 1/2) / Γ(m + n/2)`.
pub fn axis_moment(n: u64, m: u64) -> Result<PiScaled> {
    if n < 2 {
        return Err(Error::Domain("axis_moment needs n >= 2".into()));
    }
    let prefactor = PiScaled::new(BigRational::from_integer(2.into()), n as i32 - 1);
    let m2 = 2 * m as i64;
    let num = prefactor * gamma_half(HalfInteger::from_twice(m2 + 1))?;
    Ok(num / gamma_half(HalfInteger::from_twice(m2 + n as i64))?)
}

/// Axis moment by quadrature of the hat-box reduction.
///
/// The substitution `x = sin θ` turns `x^(2m) (1 - x²)^((n-3)/2) dx` into
/// `sin^(2m) θ · cos^(n-2) θ dθ` on `[-π/2, π/2]`, which is smooth for every
/// `n ≥ 2` (including the endpoint singularity at `n = 2`).
pub fn quad_axis_moment(n: u64, m: u64, tol: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Domain("quad_axis_moment needs n >= 2".into()));
    }
    let lower_volume = sphere_volume(n - 1)?.to_f64();
    let (sin_pow, cos_pow) = (2 * m as i32, n as i32 - 2);
    let integrand = move |theta: f64| theta.sin().powi(sin_pow) * theta.cos().powi(cos_pow);
    let half_pi = std::f64::consts::FRAC_PI_2;
    // The tolerance applies to the final product, not the bare integral.
    let integral = quadrature::integrate(integrand, -half_pi, half_pi, tol / lower_volume)
        .map_err(|err| match err {
            Error::QuadratureNonConvergence {
                best_estimate,
                last_change,
                nodes,
            } => Error::QuadratureNonConvergence {
                best_estimate: best_estimate * lower_volume,
                last_change: last_change * lower_volume,
                nodes,
            },
            other => other,
        })?;
    Ok(integral * lower_volume)
}

/// Uniform point on `S^(n-1)`: normalized standard Gaussian vector.
pub fn sample_sphere<R: Rng + ?Sized>(n: usize, rng: &mut R) -> UnitVector {
    assert!(n >= 1, "sample_sphere needs n >= 1");
    loop {
        let draw: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
        let norm2: f64 = draw.iter().map(|x| x * x).sum();
        if norm2 > 0.0 {
            let norm = norm2.sqrt();
            return UnitVector {
                components: draw.into_iter().map(|x| x / norm).collect(),
            };
        }
    }
}

/// Monte Carlo estimate of `E[⟨v, x⟩^(2m)]` for `x` uniform on `S^(n-1)`.
///
/// Under the normalized measure the expectation is `1 / I(m, n)` for every
/// unit `v`.
pub fn mc_projected_moment(
    n: usize,
    m: u32,
    v: &UnitVector,
    n_samples: usize,
    seed: u64,
) -> Result<MCEstimate> {
    if v.dim() != n {
        return Err(Error::Domain(format!(
            "direction has {} components, expected {n}",
            v.dim()
        )));
    }
    let power = 2 * m as i32;
    mc_mean(n_samples, seed, |rng| {
        let x = sample_sphere(n, rng);
        v.dot(x.components()).powi(power)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_core::i_mn;
    use crate::sampling::{mutually_consistent, sample_stream};
    use num_traits::ToPrimitive;
    use std::f64::consts::PI;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn sphere_volumes() {
        assert_eq!(sphere_volume(1).unwrap(), PiScaled::rational(q(2, 1)));
        assert_eq!(sphere_volume(2).unwrap(), PiScaled::new(q(2, 1), 2));
        assert_eq!(sphere_volume(3).unwrap(), PiScaled::new(q(4, 1), 2));
        assert_eq!(sphere_volume(4).unwrap(), PiScaled::new(q(2, 1), 4));
        assert!(sphere_volume(0).is_err());
    }

    #[test]
    fn axis_moments() {
        assert_eq!(axis_moment(3, 1).unwrap(), PiScaled::new(q(4, 3), 2));
        for n in 2..10 {
            assert_eq!(axis_moment(n, 0).unwrap(), sphere_volume(n).unwrap());
        }
        let ratio = sphere_volume(3).unwrap() / axis_moment(3, 1).unwrap();
        assert_eq!(ratio, PiScaled::rational(q(3, 1)));
        assert!(axis_moment(1, 2).is_err());
    }

    #[test]
    fn volume_over_axis_moment_is_i_mn() {
        for n in 2..=10 {
            for m in 0..=6 {
                let ratio = sphere_volume(n).unwrap() / axis_moment(n, m).unwrap();
                assert_eq!(ratio.as_rational().unwrap(), &i_mn(m, n).unwrap());
                let float_ratio = sphere_volume(n).unwrap().to_f64() / axis_moment(n, m).unwrap().to_f64();
                let exact = i_mn(m, n).unwrap().to_f64().unwrap();
                assert!((float_ratio / exact - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn quadrature_matches_closed_form() {
        let got = quad_axis_moment(3, 1, 1e-12).unwrap();
        assert!((got - 4.0 * PI / 3.0).abs() < 1e-12);
        let got = quad_axis_moment(2, 0, 1e-10).unwrap();
        assert!((got - 2.0 * PI).abs() < 1e-10);
        let got = quad_axis_moment(5, 2, 1e-12).unwrap();
        assert!((got - axis_moment(5, 2).unwrap().to_f64()).abs() < 1e-12);
        for n in 2..=10 {
            for m in 0..=6 {
                let got = quad_axis_moment(n, m, 1e-10).unwrap();
                let exact = axis_moment(n, m).unwrap().to_f64();
                assert!((got - exact).abs() < 1e-10, "n = {n}, m = {m}");
            }
        }
    }

    #[test]
    fn unit_vector_validation() {
        assert!(UnitVector::new(vec![0.6, 0.8]).is_ok());
        assert!(UnitVector::new(vec![1.0, 1.0]).is_err());
        assert!(UnitVector::new(vec![]).is_err());
        assert!(UnitVector::normalized(vec![0.0, 0.0]).is_err());
        let v = UnitVector::normalized(vec![3.0, 4.0]).unwrap();
        assert!((v.components()[0] - 0.6).abs() < 1e-15);
        assert!(UnitVector::basis(3, 3).is_err());
    }

    #[test]
    fn samples_lie_on_the_sphere() {
        for n in 1..8 {
            let mut rng = sample_stream(42, n as u64);
            for _ in 0..1000 {
                let x = sample_sphere(n, &mut rng);
                let norm2: f64 = x.components().iter().map(|c| c * c).sum();
                assert!((norm2 - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sample_moments() {
        let n = 5;
        let first = mc_mean(1_000_000, 3, |rng| sample_sphere(n, rng).components()[0]).unwrap();
        assert!(first.within_sigma(0.0, 4.0));
        let second =
            mc_mean(1_000_000, 4, |rng| sample_sphere(n, rng).components()[0].powi(2)).unwrap();
        assert!(second.within_sigma(1.0 / n as f64, 4.0));
    }

    #[test]
    fn projected_moment_zeroth_power_is_exact() {
        let v = UnitVector::basis(4, 2).unwrap();
        let est = mc_projected_moment(4, 0, &v, 1000, 9).unwrap();
        assert_eq!(est.mean, 1.0);
        assert_eq!(est.std_error, 0.0);
    }

    #[test]
    fn projected_moment_values() {
        let mut rng = sample_stream(77, 0);
        let v = sample_sphere(3, &mut rng);
        let est = mc_projected_moment(3, 1, &v, 1_000_000, 5).unwrap();
        assert!(est.within_sigma(1.0 / 3.0, 3.0), "{est:?}");
        let v = sample_sphere(6, &mut rng);
        let est = mc_projected_moment(6, 1, &v, 1_000_000, 6).unwrap();
        assert!(est.within_sigma(1.0 / 6.0, 3.0), "{est:?}");
        assert!(mc_projected_moment(5, 1, &v, 1000, 1).is_err());
    }

    #[test]
    fn projected_moment_is_direction_independent() {
        let mut rng = sample_stream(2024, 0);
        let estimates: Vec<_> = (0..10)
            .map(|k| {
                let v = sample_sphere(4, &mut rng);
                mc_projected_moment(4, 2, &v, 200_000, 100 + k).unwrap()
            })
            .collect();
        assert!(mutually_consistent(&estimates, 3.0));
    }

    #[test]
    fn same_seed_is_bit_reproducible() {
        let v = UnitVector::basis(3, 0).unwrap();
        let a = mc_projected_moment(3, 2, &v, 10_000, 1).unwrap();
        let b = mc_projected_moment(3, 2, &v, 10_000, 1).unwrap();
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
    }
}

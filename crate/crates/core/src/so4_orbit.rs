//! The adjoint `SO(4)` orbit of unit simple bivectors in `∧²ℝ⁴`.
//!
//! Components are ordered `(J₁₂, J₁₃, J₁₄, J₂₃, J₂₄, J₃₄)` and the Pfaffian is
//! `J₁₂J₃₄ - J₁₃J₂₄ + J₁₄J₂₃`. A unit simple bivector `e ∧ f` of an
//! orthonormal pair has `‖J‖ = 1` and `Pf(J) = 0`; the orbit is exactly the
//! set of such wedges.
//!
//! For `m = 1` the isotropy hypothesis holds for every direction `v` as soon
//! as `∫ J₁₂ J₃₄ = 0`. For `m ≥ 2` it is only guaranteed for directions with
//! `Pf(v) = 0`; [`pf_direction_comparison`] reports both cases side by side
//! without asserting anything about the `Pf(v) ≠ 0` one.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sampling::{mc_mean, MCEstimate};
use crate::sphere_oracle::UnitVector;

pub const COMPONENT_LABELS: [&str; 6] = ["J12", "J13", "J14", "J23", "J24", "J34"];

/// Index pairs `(a, b)`, `a < b`, of the basis `e_a ∧ e_b`, in storage order.
const BASIS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

/// Gram–Schmidt residual norm below which a Gaussian pair is redrawn.
pub const COLLINEARITY_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bivector6 {
    pub components: [f64; 6],
}

impl Bivector6 {
    pub fn new(components: [f64; 6]) -> Self {
        Self { components }
    }

    /// `e ∧ f`.
    pub fn wedge(e: &[f64; 4], f: &[f64; 4]) -> Self {
        let mut components = [0.0; 6];
        for (slot, &(a, b)) in components.iter_mut().zip(BASIS.iter()) {
            *slot = e[a] * f[b] - e[b] * f[a];
        }
        Self { components }
    }

    pub fn norm2(&self) -> f64 {
        self.components.iter().map(|x| x * x).sum()
    }

    pub fn pfaffian(&self) -> f64 {
        pfaffian(&self.components)
    }

    pub fn dot(&self, v: &[f64]) -> f64 {
        self.components.iter().zip(v).map(|(a, b)| a * b).sum()
    }
}

/// `J₁₂J₃₄ - J₁₃J₂₄ + J₁₄J₂₃`.
pub fn pfaffian(v: &[f64; 6]) -> f64 {
    v[0] * v[5] - v[1] * v[4] + v[2] * v[3]
}

fn gaussian4<R: Rng + ?Sized>(rng: &mut R) -> [f64; 4] {
    std::array::from_fn(|_| rng.sample(StandardNormal))
}

fn norm4(x: &[f64; 4]) -> f64 {
    x.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// Uniform point of the orbit: the wedge of a Gram–Schmidt orthonormalized
/// pair of independent Gaussian 4-vectors.
pub fn sample_orbit<R: Rng + ?Sized>(rng: &mut R) -> Bivector6 {
    loop {
        let a = gaussian4(rng);
        let b = gaussian4(rng);
        let a_norm = norm4(&a);
        if a_norm < COLLINEARITY_THRESHOLD {
            continue;
        }
        let e = a.map(|x| x / a_norm);
        let proj: f64 = e.iter().zip(&b).map(|(x, y)| x * y).sum();
        let residual: [f64; 4] = std::array::from_fn(|i| b[i] - proj * e[i]);
        let r_norm = norm4(&residual);
        if r_norm < COLLINEARITY_THRESHOLD {
            continue;
        }
        let f = residual.map(|x| x / r_norm);
        return Bivector6::wedge(&e, &f);
    }
}

/// A unit direction on the hypersurface `Pf(v) = 0`.
pub fn sample_pf_zero_direction<R: Rng + ?Sized>(rng: &mut R) -> UnitVector {
    let sample = sample_orbit(rng);
    UnitVector::new(sample.components.to_vec()).expect("orbit samples have unit norm")
}

fn check_direction(v: &UnitVector) -> Result<()> {
    if v.dim() != 6 {
        return Err(Error::Domain(format!(
            "bivector directions have 6 components, got {}",
            v.dim()
        )));
    }
    Ok(())
}

/// Monte Carlo mean of `J_i J_j` over the orbit (component indices in storage order).
pub fn mc_component_product(i: usize, j: usize, n_samples: usize, seed: u64) -> Result<MCEstimate> {
    if i >= 6 || j >= 6 {
        return Err(Error::Domain(format!("component index out of range: ({i}, {j})")));
    }
    mc_mean(n_samples, seed, |rng| {
        let s = sample_orbit(rng);
        s.components[i] * s.components[j]
    })
}

/// Monte Carlo estimate of `∫ J₁₂ J₃₄`, which vanishes on the orbit.
pub fn mc_orthogonality(n_samples: usize, seed: u64) -> Result<MCEstimate> {
    mc_component_product(0, 5, n_samples, seed)
}

/// Monte Carlo estimate of `∫ ⟨v, J⟩^(2m)` under the normalized orbit measure.
///
/// For `m = 1` the expectation is `1/6` for every unit `v`.
pub fn mc_orbit_hypothesis(m: u32, v: &UnitVector, n_samples: usize, seed: u64) -> Result<MCEstimate> {
    check_direction(v)?;
    let power = 2 * m as i32;
    mc_mean(n_samples, seed, |rng| sample_orbit(rng).dot(v.components()).powi(power))
}

/// Largest deviations of `‖J‖²` from 1 and of `Pf(J)` from 0 over a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct InvariantScan {
    pub n_samples: usize,
    pub max_norm_error: f64,
    pub max_pfaffian: f64,
}

pub fn scan_invariants(n_samples: usize, seed: u64) -> InvariantScan {
    use rayon::prelude::*;
    let (max_norm_error, max_pfaffian) = (0..n_samples as u64)
        .into_par_iter()
        .map(|i| {
            let s = sample_orbit(&mut crate::sampling::sample_stream(seed, i));
            ((s.norm2() - 1.0).abs(), s.pfaffian().abs())
        })
        .reduce(|| (0.0, 0.0), |a, b| (a.0.max(b.0), a.1.max(b.1)));
    InvariantScan {
        n_samples,
        max_norm_error,
        max_pfaffian,
    }
}

/// A direction and the corresponding Monte Carlo estimate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionEstimate {
    pub direction: UnitVector,
    pub pfaffian: f64,
    pub estimate: MCEstimate,
}

/// Exploratory comparison between `Pf(v) = 0` directions and the direction
/// `(e₁∧e₂ + e₃∧e₄)/√2` with `Pf(v) = 1/2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DirectionComparison {
    pub m: u32,
    pub pf_zero: Vec<DirectionEstimate>,
    pub pf_nonzero: DirectionEstimate,
}

/// Runs `⟨v, J⟩^(2m)` estimates for `n_directions` random `Pf = 0` directions
/// and one `Pf ≠ 0` direction. Directions and sample streams are derived from
/// `seed`; each direction gets its own seed.
pub fn pf_direction_comparison(
    m: u32,
    n_directions: usize,
    n_samples: usize,
    seed: u64,
) -> Result<DirectionComparison> {
    let mut direction_rng = crate::sampling::sample_stream(seed, u64::MAX);
    let mut pf_zero = Vec::with_capacity(n_directions);
    for k in 0..n_directions {
        let v = sample_pf_zero_direction(&mut direction_rng);
        let estimate = mc_orbit_hypothesis(m, &v, n_samples, seed.wrapping_add(1 + k as u64))?;
        let pf = pfaffian(&components6(&v));
        pf_zero.push(DirectionEstimate { direction: v, pfaffian: pf, estimate });
    }
    let v = self_dual_direction();
    let estimate = mc_orbit_hypothesis(m, &v, n_samples, seed.wrapping_add(1 + n_directions as u64))?;
    let pf = pfaffian(&components6(&v));
    Ok(DirectionComparison {
        m,
        pf_zero,
        pf_nonzero: DirectionEstimate { direction: v, pfaffian: pf, estimate },
    })
}

/// `(e₁∧e₂ + e₃∧e₄)/√2`, a unit direction with `Pf = 1/2`.
pub fn self_dual_direction() -> UnitVector {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    UnitVector::new(vec![s, 0.0, 0.0, 0.0, 0.0, s]).expect("unit by construction")
}

pub(crate) fn components6(v: &UnitVector) -> [f64; 6] {
    let c = v.components();
    std::array::from_fn(|i| c[i])
}

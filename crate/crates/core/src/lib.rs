//! Homogeneous moments of isotropic function families.
//!
//! If `∫ (Σ vⱼ Jⱼ)^(2m) = C` for every unit vector `v`, then
//! `∫ (Σ Jⱼ²)^m = I(m, n) · C` with the rational constant
//!
//! ```text
//! I(m, n) = Γ(1/2) Γ(m + n/2) / (Γ(m + 1/2) Γ(n/2)).
//! ```
//!
//! The crate computes `I(m, n)` exactly in three independent ways, derives all
//! mixed moments `∫ ∏ Jⱼ^rⱼ`, and checks the statement against model spaces
//! (round spheres and an `SO(4)` adjoint orbit), hypergeometric identities and
//! the partition function of an interacting vortex gas.

pub mod error;
pub mod cli;
pub mod exact_core;
pub mod hypergeometric;
pub mod moment_combinatorics;
pub mod quadrature;
pub mod sampling;
pub mod so4_orbit;
pub mod sphere_oracle;
pub mod vortex_gas;

pub use error::{Error, Result};
pub use exact_core::{beta_half, gamma_half, i_mn, i_mn_closed, BigRational, HalfInteger, PiScaled};
pub use moment_combinatorics::{compositions, i_mn_expand, mixed_moment, MultiIndex};
pub use sampling::{MCEstimate, DEFAULT_SEED};

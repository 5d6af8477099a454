use thiserror::Error;

/// Errors raised by the moment, special-function and verification routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Two `π`-scaled values with different powers of `√π` were added.
    #[error("cannot add values with different powers of sqrt(pi): {left} vs {right}")]
    PiPowerMismatch { left: i32, right: i32 },

    /// A series did not reach its stopping rule within the term budget.
    #[error("series did not converge after {terms} terms (partial sum {partial_sum:e}, last term {last_term:e})")]
    SeriesNonConvergence {
        partial_sum: f64,
        last_term: f64,
        terms: usize,
    },

    /// Adaptive quadrature exhausted its node budget.
    #[error("quadrature did not converge with {nodes} nodes (best estimate {best_estimate:e}, last change {last_change:e})")]
    QuadratureNonConvergence {
        best_estimate: f64,
        last_change: f64,
        nodes: usize,
    },

    /// A floating-point evaluation left the representable range.
    #[error("floating-point overflow: {0}")]
    Overflow(String),
}

pub type Result<T> = std::result::Result<T, Error>;

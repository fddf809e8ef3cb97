//! Modified Bessel functions of the first kind, contiguous-order Bessel
//! ratios, and the Kelvin functions `ber_α` / `bei_α`.
//!
//! All complex powers and square roots use the principal branch (cut along the
//! negative real axis). With that convention `√(iωτ) = √(ωτ)·e^{iπ/4}` for
//! `ω > 0`, which is what ties the Kelvin functions to `I_α` on the rotated
//! ray:
//!
//! ```text
//! ber_α(x) + i·bei_α(x) = e^{iαπ/2} · I_α(x·e^{iπ/4})
//! ```

mod bessel;
pub(crate) mod dd;
mod kelvin;
mod ratio;

pub use bessel::{
    bessel_i, bessel_i_scaled, bessel_i_with, bessel_recurrence_check, gamma, Regime,
};
pub use kelvin::{kelvin_bei, kelvin_ber, kelvin_pair, kelvin_pair_series};
pub use ratio::{bessel_ratio, NEAR_POLE_LIMIT};

use num_complex::Complex64;
use thiserror::Error;

/// A complex number; `re` and `im` are the real and imaginary parts.
pub type ComplexValue = Complex64;

/// Errors raised by the special-function kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpecialError {
    #[error("order {nu} is outside the supported range")]
    InvalidOrder { nu: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid evaluation policy: {0}")]
    InvalidPolicy(String),
    #[error(
        "I_{nu}({re}{im:+}i): no evaluation regime reached the target tolerance \
         (best error estimate {estimate:e})"
    )]
    NonConvergent {
        nu: f64,
        re: f64,
        im: f64,
        estimate: f64,
    },
    #[error("I_{nu}({re}{im:+}i) overflows double precision")]
    Overflow { nu: f64, re: f64, im: f64 },
    #[error("I_{nu} nearly vanishes at {re}{im:+}i; the ratio I_(nu+1)/I_nu is at a pole")]
    NearPole { nu: f64, re: f64, im: f64 },
    #[error(
        "Kelvin function of order {alpha} at {z}: cancellation error estimate {estimate:e} \
         exceeds the precision budget"
    )]
    PrecisionLoss { alpha: f64, z: f64, estimate: f64 },
}

pub type Result<T> = std::result::Result<T, SpecialError>;

/// Switching and accuracy controls shared by the Bessel evaluators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvalPolicy {
    series_cutoff_radius: f64,
    target_rel_tol: f64,
    max_terms: usize,
}

impl EvalPolicy {
    pub const DEFAULT_CUTOFF: f64 = 25.0;
    pub const DEFAULT_TOL: f64 = 1e-13;
    pub const DEFAULT_MAX_TERMS: usize = 500;

    pub fn new(series_cutoff_radius: f64, target_rel_tol: f64, max_terms: usize) -> Result<Self> {
        if !(series_cutoff_radius.is_finite() && series_cutoff_radius > 0.0) {
            return Err(SpecialError::InvalidPolicy(format!(
                "series cutoff radius must be positive and finite, got {series_cutoff_radius}"
            )));
        }
        if !(100.0 * f64::EPSILON..1.0).contains(&target_rel_tol) {
            return Err(SpecialError::InvalidPolicy(format!(
                "target tolerance must lie in [100 eps, 1), got {target_rel_tol:e}"
            )));
        }
        if max_terms < 20 {
            return Err(SpecialError::InvalidPolicy(format!(
                "max_terms must be at least 20, got {max_terms}"
            )));
        }
        Ok(Self {
            series_cutoff_radius,
            target_rel_tol,
            max_terms,
        })
    }

    pub fn series_cutoff_radius(&self) -> f64 {
        self.series_cutoff_radius
    }

    pub fn target_rel_tol(&self) -> f64 {
        self.target_rel_tol
    }

    pub fn max_terms(&self) -> usize {
        self.max_terms
    }
}

impl Default for EvalPolicy {
    fn default() -> Self {
        Self {
            series_cutoff_radius: Self::DEFAULT_CUTOFF,
            target_rel_tol: Self::DEFAULT_TOL,
            max_terms: Self::DEFAULT_MAX_TERMS,
        }
    }
}

pub(crate) fn check_finite(z: Complex64, what: &str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(SpecialError::InvalidArgument(format!(
            "{what} must be finite, got {z}"
        )))
    }
}

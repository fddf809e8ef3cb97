//! Harmonic dispersion and transient step responses for the wave equation
//! with a Bessel-ratio memory kernel,
//!
//! ```text
//! Y_tt − c² [1 − Φ ∗] Y_xx = 0,    Φ̃(s) = 2/√(sτ) · I_1(√(sτ)) / I_0(√(sτ)).
//! ```
//!
//! The crate is organised bottom-up:
//!
//! * [`special_functions`]: `I_ν(z)` for complex `z`, contiguous Bessel
//!   ratios, Kelvin functions `ber_α`/`bei_α`.
//! * [`dispersion`]: the spatially attenuated, temporally periodic branch
//!   `k(ω) = κ(ω) − i·δ_att(ω)` with phase and group velocities.
//! * [`laplace`]: Talbot-type numerical inverse Laplace transform.
//! * [`transient`]: the step response `Y(t, x)` of the quiescent half-line.

// NaN must fail the range checks, so `!(x > 0.0)` is deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dispersion;
pub mod laplace;
mod medium;
pub mod special_functions;
pub mod transient;

pub use dispersion::{ComplexWaveNumber, DispersionSample};
pub use laplace::{ContourKind, TalbotConfig, TransformFn};
pub use medium::{MediumError, MediumParams};
pub use special_functions::{ComplexValue, EvalPolicy};
pub use transient::{FieldSample, StepResponseProblem};

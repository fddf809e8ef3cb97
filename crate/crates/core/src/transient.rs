//! Step response of the quiescent half-line `x ≥ 0` driven by `Y(t, 0) = H(t)`.
//!
//! In the Laplace domain the bounded solution is
//!
//! ```text
//! Ỹ(s, x) = e^{−μ(s)x} / s,    μ²(s) = (s²/c²) · I_0(√(sτ)) / I_2(√(sτ)).
//! ```
//!
//! For large `s`, `μ(s) = s/c + √(s/τ)/c + 1/(cτ) + …`, so the transform carries
//! the pure delay `e^{−sx/c}` of the wave front. [`step_response`] removes it
//! before inverting:
//!
//! ```text
//! Y(t, x) = L⁻¹[e^{−(μ(s) − s/c)x} / s](t − x/c),
//! ```
//!
//! which is exactly zero ahead of the front and leaves a transform that decays
//! like `e^{−x√s/(c√τ)}` along the whole contour.

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::laplace::{invert, EvalError, InversionError, TalbotConfig, TransformFn};
use crate::special_functions::{bessel_ratio, EvalPolicy, SpecialError};
use crate::MediumParams;

/// Samples with `0 < ξ` below this are flagged as near-front.
pub const NEAR_FRONT_XI: f64 = 1e-3;

#[derive(Debug, Error)]
pub enum TransientError {
    #[error("distance from the boundary must be finite and non-negative, got {0}")]
    InvalidLocation(f64),
    #[error("time must be positive and finite, got {0}")]
    InvalidTime(f64),
    #[error("non-dimensional abscissa must be finite, got {0}")]
    InvalidAbscissa(f64),
    #[error("mu(s) is ambiguous on the non-positive real axis, s = {0}")]
    BranchAmbiguity(Complex64),
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error(transparent)]
    Inversion(#[from] InversionError),
    #[error("at x = {x}, xi = {xi}: {source}")]
    Point {
        x: f64,
        xi: f64,
        #[source]
        source: Box<TransientError>,
    },
}

pub type Result<T> = std::result::Result<T, TransientError>;

/// Response at distance `x` from the driven boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepResponseProblem {
    medium: MediumParams,
    x: f64,
}

impl StepResponseProblem {
    pub fn new(medium: MediumParams, x: f64) -> Result<Self> {
        if !(x >= 0.0 && x.is_finite()) {
            return Err(TransientError::InvalidLocation(x));
        }
        Ok(Self { medium, x })
    }

    pub fn medium(&self) -> &MediumParams {
        &self.medium
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    /// Arrival time `x/c` of the wave front.
    pub fn front_time(&self) -> f64 {
        self.x / self.medium.c()
    }
}

/// One point of a space-time profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub t: f64,
    pub x: f64,
    pub y: f64,
    /// `(ct − x)/(cτ)`
    pub xi: f64,
    /// `x/(cτ)`
    pub chi: f64,
    /// `0 < ξ < 1e-3`: quadrature is least reliable here, raise `N` if it matters.
    pub near_front: bool,
}

struct Ratios {
    /// `I_2/I_0`
    p: Complex64,
    /// `1 − I_2/I_0 = (2/z)·I_1/I_0`
    q: Complex64,
}

fn ratios(s: Complex64, medium: &MediumParams) -> Result<Option<Ratios>> {
    if s.im == 0.0 && s.re <= 0.0 {
        if s.re == 0.0 {
            return Ok(None);
        }
        return Err(TransientError::BranchAmbiguity(s));
    }
    let policy = EvalPolicy::default();
    let z = (s * medium.tau()).sqrt();
    let r0 = bessel_ratio(0.0, z, &policy)?;
    let r1 = bessel_ratio(1.0, z, &policy)?;
    Ok(Some(Ratios {
        p: r0 * r1,
        q: r0 * 2.0 / z,
    }))
}

/// `μ(s)` with `μ² = (s²/c²)·I_0/I_2`, continued analytically from the
/// positive real axis.
///
/// On `Re s > 0` this is the root with `Re μ ≥ 0`. Elsewhere it is
/// `s/(c·√(I_2/I_0))` with principal roots, which is analytic off the
/// non-positive real axis; the principal root of `μ²` itself is not, and
/// would be wrong on the left half of an inversion contour.
pub fn mu(s: Complex64, medium: &MediumParams) -> Result<Complex64> {
    Ok(match ratios(s, medium)? {
        None => Complex64::new(0.0, 0.0),
        Some(r) => s / (r.p.sqrt() * medium.c()),
    })
}

/// `μ(s) − s/c`, the part of the exponent left after removing the front delay.
pub fn front_shifted_exponent(s: Complex64, medium: &MediumParams) -> Result<Complex64> {
    Ok(match ratios(s, medium)? {
        None => Complex64::new(0.0, 0.0),
        Some(r) => {
            // 1/√p − 1 = (1 − p)/(√p(1 + √p)), without the cancellation
            let sp = r.p.sqrt();
            s / medium.c() * r.q / (sp * (sp + 1.0))
        }
    })
}

/// `Ỹ(s, x) = e^{−μ(s)x}/s`.
pub fn y_tilde(s: Complex64, problem: &StepResponseProblem) -> Result<Complex64> {
    if problem.x == 0.0 {
        return Ok(s.inv());
    }
    Ok((-mu(s, &problem.medium)? * problem.x).exp() / s)
}

/// `e^{−(μ(s) − s/c)x}/s`, the transform of `t ↦ Y(t + x/c, x)`.
struct FrontShifted<'a>(&'a StepResponseProblem);

impl TransformFn for FrontShifted<'_> {
    fn eval(&self, s: Complex64) -> std::result::Result<Complex64, EvalError> {
        let p = self.0;
        if p.x == 0.0 {
            return Ok(s.inv());
        }
        let e = front_shifted_exponent(s, &p.medium).map_err(Box::new)?;
        Ok((-e * p.x).exp() / s)
    }
}

/// `Y(t, x)`. Zero up to the arrival of the front at `t = x/c`.
pub fn step_response(t: f64, problem: &StepResponseProblem, config: &TalbotConfig) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(TransientError::InvalidTime(t));
    }
    let shifted = t - problem.front_time();
    if shifted <= 0.0 {
        return Ok(0.0);
    }
    Ok(invert(&FrontShifted(problem), shifted, config)?.value)
}

/// Default profile locations `x/(cτ)`.
pub const DEFAULT_CHI: [f64; 3] = [0.25, 0.5, 1.0];

/// `n` equally spaced points on `[lo, hi]`.
pub fn linear_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// 400 points of `ξ ∈ [0, 10]`.
pub fn default_xi_grid() -> Vec<f64> {
    linear_grid(0.0, 10.0, 400)
}

fn sample_at(x: f64, xi: f64, medium: &MediumParams, config: &TalbotConfig) -> Result<FieldSample> {
    let l = medium.length_scale();
    let t = (xi * l + x) / medium.c();
    let y = if t <= 0.0 {
        0.0
    } else {
        step_response(t, &StepResponseProblem::new(*medium, x)?, config)?
    };
    Ok(FieldSample {
        t,
        x,
        y,
        xi,
        chi: x / l,
        near_front: xi > 0.0 && xi < NEAR_FRONT_XI,
    })
}

/// `Y` on every `(x, ξ)` pair, with `t = (ξcτ + x)/c`, ordered by `x` then `ξ`.
/// Each sample carries its own result.
pub fn profile(
    xs: &[f64],
    xi_grid: &[f64],
    medium: &MediumParams,
    config: &TalbotConfig,
) -> Result<Vec<Result<FieldSample>>> {
    if let Some(&x) = xs.iter().find(|x| !(**x >= 0.0 && x.is_finite())) {
        return Err(TransientError::InvalidLocation(x));
    }
    if let Some(&xi) = xi_grid.iter().find(|xi| !xi.is_finite()) {
        return Err(TransientError::InvalidAbscissa(xi));
    }
    let mut xs = xs.to_vec();
    xs.sort_by(f64::total_cmp);
    let mut xis = xi_grid.to_vec();
    xis.sort_by(f64::total_cmp);
    let pairs: Vec<(f64, f64)> = xs
        .iter()
        .flat_map(|&x| xis.iter().map(move |&xi| (x, xi)))
        .collect();
    Ok(pairs
        .par_iter()
        .map(|&(x, xi)| {
            sample_at(x, xi, medium, config).map_err(|e| TransientError::Point {
                x,
                xi,
                source: Box::new(e),
            })
        })
        .collect())
}

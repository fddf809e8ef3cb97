//! Numerical inverse Laplace transform on a deformed Bromwich contour.
//!
//! For `t > 0`,
//!
//! ```text
//! f(t) = 1/(2πi) ∫_C e^{st} F(s) ds = 1/(2πi) ∫ e^{s(u)t} F(s(u)) s′(u) du
//! ```
//!
//! where `C` starts and ends in the left half-plane and wraps every
//! singularity of `F`. The integral over the contour parameter is
//! approximated by the midpoint rule. Two contour families are available:
//!
//! * [`ContourKind::Parabolic`]: `s(u) = μ(1 + iu)²`, `μ = scale·N/t`, cut at
//!   `|u| = u_max` where `|e^{st}|` has fallen by 10⁻¹⁶ from its value at `u = 0`.
//! * [`ContourKind::Talbot`]: `s(θ) = r·θ(cot θ + i)`, `r = scale·N/t`,
//!   `θ ∈ (−π, π)`.
//!
//! Singularities are expected on or left of `Re s = γ₀` (declared by the
//! transform). A positive `γ₀` is handled by inverting `F(s + γ₀)` and
//! multiplying by `e^{γ₀t}`.

mod catalogue;
mod contour;

pub use catalogue::{self_test, AnalyticPair, PairReport, SelfTestReport, ROUNDING_FLOOR};

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

pub type Result<T, E = InversionError> = std::result::Result<T, E>;

use contour::Node;

pub type EvalError = Box<dyn std::error::Error + Send + Sync>;

/// A Laplace-domain function `F(s)` to be inverted.
///
/// Implementations are evaluated concurrently from several threads.
pub trait TransformFn: Sync {
    fn eval(&self, s: Complex64) -> Result<Complex64, EvalError>;

    /// Abscissa `γ₀` with every singularity in `Re s ≤ γ₀`.
    fn abscissa(&self) -> f64 {
        0.0
    }

    /// Whether `F(conj s) = conj F(s)`, i.e. the original is real.
    fn is_conjugate_symmetric(&self) -> bool {
        true
    }
}

/// Adapts a closure into a [`TransformFn`] with a declared abscissa.
pub struct FnTransform<F> {
    f: F,
    abscissa: f64,
}

impl<F> FnTransform<F>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    pub fn new(f: F, abscissa: f64) -> Self {
        Self { f, abscissa }
    }
}

impl<F> TransformFn for FnTransform<F>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    fn eval(&self, s: Complex64) -> Result<Complex64, EvalError> {
        Ok((self.f)(s))
    }

    fn abscissa(&self) -> f64 {
        self.abscissa
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ContourKind {
    /// Cotangent contour of the classic (fixed) Talbot method.
    Talbot,
    /// Parabola `μ(1 + iu)²` of the modified Talbot method.
    Parabolic,
}

impl ContourKind {
    pub fn default_scale(self) -> f64 {
        match self {
            ContourKind::Parabolic => 0.1309,
            ContourKind::Talbot => 0.2,
        }
    }
}

#[derive(Debug, Error)]
pub enum InversionError {
    #[error("inversion time must be positive and finite, got {0}")]
    InvalidTime(f64),
    #[error("invalid Talbot configuration: {0}")]
    InvalidConfig(String),
    #[error("time grid must be strictly increasing")]
    UnsortedTimes,
    #[error(
        "singularity abscissa {abscissa} cannot be enclosed at t = {t} \
         (shift factor e^(abscissa·t) is not representable)"
    )]
    SingularityInsideContour { abscissa: f64, t: f64 },
    #[error("non-finite integrand at t = {t}, s = {s}")]
    QuadratureNonFinite { t: f64, s: Complex64 },
    #[error("transform evaluation failed at t = {t}, s = {s}: {source}")]
    Transform {
        t: f64,
        s: Complex64,
        #[source]
        source: EvalError,
    },
}

impl InversionError {
    /// The inversion time the error refers to, when there is one.
    pub fn time(&self) -> Option<f64> {
        match self {
            InversionError::InvalidTime(t)
            | InversionError::SingularityInsideContour { t, .. }
            | InversionError::QuadratureNonFinite { t, .. }
            | InversionError::Transform { t, .. } => Some(*t),
            _ => None,
        }
    }
}

/// Quadrature settings for [`invert`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TalbotConfig {
    node_count: usize,
    contour: ContourKind,
    scale: f64,
    time_coupling: bool,
    exploit_symmetry: bool,
}

impl TalbotConfig {
    pub const DEFAULT_NODES: usize = 48;
    pub const MIN_NODES: usize = 8;

    /// `node_count` nodes on `contour`, with the contour's default scale
    /// re-derived for every evaluation time.
    pub fn new(node_count: usize, contour: ContourKind) -> Result<Self> {
        if node_count < Self::MIN_NODES || !node_count.is_multiple_of(2) {
            return Err(InversionError::InvalidConfig(format!(
                "node count must be even and at least {}, got {node_count}",
                Self::MIN_NODES
            )));
        }
        Ok(Self {
            node_count,
            contour,
            scale: contour.default_scale(),
            time_coupling: true,
            exploit_symmetry: true,
        })
    }

    /// With `time_coupling`, the contour parameter is `scale·N/t`; without
    /// it, `scale` is used as is for every `t`.
    pub fn with_scale(mut self, scale: f64, time_coupling: bool) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(InversionError::InvalidConfig(format!(
                "contour scale must be positive, got {scale}"
            )));
        }
        self.scale = scale;
        self.time_coupling = time_coupling;
        Ok(self)
    }

    /// Evaluate only the upper half contour for conjugate-symmetric
    /// transforms (the default), or always use the full contour.
    pub fn with_symmetry(mut self, exploit: bool) -> Self {
        self.exploit_symmetry = exploit;
        self
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn contour(&self) -> ContourKind {
        self.contour
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn time_coupling(&self) -> bool {
        self.time_coupling
    }

    pub fn exploit_symmetry(&self) -> bool {
        self.exploit_symmetry
    }

    fn contour_parameter(&self, t: f64) -> f64 {
        if self.time_coupling {
            self.scale * self.node_count as f64 / t
        } else {
            self.scale
        }
    }

    fn upper_nodes(&self, t: f64) -> Vec<Node> {
        let p = self.contour_parameter(t);
        match self.contour {
            ContourKind::Parabolic => contour::parabolic_upper(p, t, self.node_count),
            ContourKind::Talbot => contour::talbot_upper(p, self.node_count),
        }
    }
}

impl Default for TalbotConfig {
    fn default() -> Self {
        Self::new(Self::DEFAULT_NODES, ContourKind::Parabolic).expect("default node count is valid")
    }
}

/// Result of one inversion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Inversion {
    pub t: f64,
    /// Real part of the contour sum.
    pub value: f64,
    /// Imaginary part of the full-contour sum. `None` when only the upper half
    /// was evaluated, in which case it vanishes by construction.
    pub imag_residue: Option<f64>,
}

/// Below this, `e^{Re(s)·t}` underflows and the node is skipped.
const UNDERFLOW_EXPONENT: f64 = -745.0;

/// `f(t)` from its transform.
pub fn invert<F: TransformFn + ?Sized>(f: &F, t: f64, config: &TalbotConfig) -> Result<Inversion> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(InversionError::InvalidTime(t));
    }
    let gamma = f.abscissa();
    let shift = if gamma > 0.0 { gamma } else { 0.0 };
    let growth = (shift * t).exp();
    if !gamma.is_finite() || !growth.is_finite() {
        return Err(InversionError::SingularityInsideContour { abscissa: gamma, t });
    }
    let upper = config.upper_nodes(t);
    let symmetric = config.exploit_symmetry && f.is_conjugate_symmetric();
    let nodes = if symmetric {
        upper
    } else {
        contour::full(&upper)
    };

    let mut sum = Complex64::new(0.0, 0.0);
    for node in &nodes {
        if node.s.re * t < UNDERFLOW_EXPONENT {
            continue;
        }
        let s = node.s + shift;
        let value = f
            .eval(s)
            .map_err(|source| InversionError::Transform { t, s, source })?;
        let term = (node.s * t).exp() * value * node.weight;
        if !(term.re.is_finite() && term.im.is_finite()) {
            return Err(InversionError::QuadratureNonFinite { t, s });
        }
        sum += term;
    }

    let inversion = if symmetric {
        // Σ_full = Σ_upper − conj(Σ_upper) = 2i·Im Σ_upper
        Inversion {
            t,
            value: growth * sum.im / PI,
            imag_residue: None,
        }
    } else {
        let full = sum / Complex64::new(0.0, 2.0 * PI) * growth;
        Inversion {
            t,
            value: full.re,
            imag_residue: Some(full.im),
        }
    };
    if !inversion.value.is_finite() {
        return Err(InversionError::QuadratureNonFinite {
            t,
            s: Complex64::new(f64::NAN, 0.0),
        });
    }
    Ok(inversion)
}

/// [`invert`] at every time of an increasing grid, in parallel. Each entry
/// carries its own result so one failing time does not hide the others.
pub fn invert_grid<F: TransformFn + ?Sized>(
    f: &F,
    times: &[f64],
    config: &TalbotConfig,
) -> Result<Vec<Result<Inversion>>> {
    if times.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(InversionError::UnsortedTimes);
    }
    Ok(times.par_iter().map(|&t| invert(f, t, config)).collect())
}

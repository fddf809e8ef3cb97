//! Spatially attenuated, temporally periodic harmonics `A·e^{i(ωt − kx)}` with
//! real `ω` and `k = κ − i·δ_att`.
//!
//! The dispersion relation `(iω)² + k²c²[1 − Φ̂(ω)] = 0` gives
//!
//! ```text
//! k² = (ω²/c²) · I_0(√(iωτ)) / I_2(√(iωτ)) = A(ω) + i·B(ω)
//! ```
//!
//! and the positive root `κ = √((A + |k²|)/2)`, `δ_att = −B / (2κ)`.
//! [`k_squared`] evaluates `k²` from complex Bessel values; [`dispersion_ab`]
//! evaluates the same quantity from the Kelvin functions of order 0 and 2 at
//! `√(ωτ)`:
//!
//! ```text
//! A = −(ω²/c²) (ber₀ber₂ + bei₀bei₂) / (ber₂² + bei₂²)
//! B = −(ω²/c²) (bei₀ber₂ − ber₀bei₂) / (ber₂² + bei₂²)
//! ```
//!
//! The leading minus sign comes from `I_2(x·e^{iπ/4}) = e^{−iπ}(ber₂ + i·bei₂)`;
//! with it the two routes agree, and `A > 0` at high frequency.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::special_functions::{
    bessel_i_scaled, bessel_ratio, kelvin_pair, EvalPolicy, SpecialError,
};
use crate::MediumParams;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DispersionError {
    #[error(transparent)]
    Special(#[from] SpecialError),
    #[error("angular frequency {0} is not allowed here")]
    InvalidFrequency(f64),
    #[error("ber_2² + bei_2² underflows at omega = {omega}")]
    DenominatorUnderflow { omega: f64 },
    #[error("A + sqrt(A² + B²) vanishes with B != 0 at omega = {omega}")]
    BranchDegenerate { omega: f64 },
    #[error(
        "finite-difference step {step:e} too large at omega = {omega}: \
         Richardson error estimate {estimate:e}"
    )]
    StepTooLarge {
        omega: f64,
        step: f64,
        estimate: f64,
    },
}

pub type Result<T> = std::result::Result<T, DispersionError>;

/// Relative Richardson error above which [`group_velocity`] refuses the step.
pub const MAX_RICHARDSON_ERROR: f64 = 1e-4;

/// `(κ, δ_att) = (Re k, −Im k)` at angular frequency `ω`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexWaveNumber {
    pub omega: f64,
    pub kappa: f64,
    pub delta_att: f64,
}

impl ComplexWaveNumber {
    /// `k = κ − i·δ_att`.
    pub fn k(&self) -> Complex64 {
        Complex64::new(self.kappa, -self.delta_att)
    }
}

/// Everything the dispersion analysis produces at one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionSample {
    pub omega: f64,
    /// `Re k²`
    pub a: f64,
    /// `Im k²`
    pub b: f64,
    pub kappa: f64,
    pub delta_att: f64,
    pub v_phase: f64,
    pub v_group: f64,
    /// Normalised dispersion-relation residual of `k = κ − i·δ_att`.
    pub residual: f64,
}

fn check_omega(omega: f64) -> Result<()> {
    if omega.is_finite() && omega >= 0.0 {
        Ok(())
    } else {
        Err(DispersionError::InvalidFrequency(omega))
    }
}

/// `√(iωτ)` on the principal branch.
fn rotated_argument(omega: f64, medium: &MediumParams) -> Complex64 {
    Complex64::from_polar((omega * medium.tau()).sqrt(), FRAC_PI_4)
}

/// `k²(ω)` from the quotient `I_0/I_2` of complex Bessel values.
pub fn k_squared(omega: f64, medium: &MediumParams) -> Result<Complex64> {
    check_omega(omega)?;
    if omega == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let policy = EvalPolicy::default();
    let z = rotated_argument(omega, medium);
    // the common e^{−Re z} scaling cancels
    let i0 = bessel_i_scaled(0.0, z, &policy)?;
    let i2 = bessel_i_scaled(2.0, z, &policy)?;
    let w = omega / medium.c();
    Ok(i0 / i2 * (w * w))
}

/// `(A, B) = (Re k², Im k²)` from Kelvin functions at `√(ωτ)`.
pub fn dispersion_ab(omega: f64, medium: &MediumParams) -> Result<(f64, f64)> {
    check_omega(omega)?;
    if omega == 0.0 {
        return Ok((0.0, 0.0));
    }
    let x = (omega * medium.tau()).sqrt();
    let policy = EvalPolicy::default();
    let (ber0, bei0) = kelvin_pair(0.0, x, &policy)?;
    let (ber2, bei2) = kelvin_pair(2.0, x, &policy)?;
    let m = ber2.abs().max(bei2.abs());
    if m == 0.0 || !m.is_finite() {
        return Err(DispersionError::DenominatorUnderflow { omega });
    }
    let (r2, i2) = (ber2 / m, bei2 / m);
    let denom = m * (r2 * r2 + i2 * i2);
    let w = omega / medium.c();
    let pre = -(w * w);
    let a = pre * (ber0 * r2 + bei0 * i2) / denom;
    let b = pre * (bei0 * r2 - ber0 * i2) / denom;
    Ok((a, b))
}

/// Positive-branch roots of `κ² − δ² = A`, `−2κδ = B`.
pub(crate) fn branch_from_ab(omega: f64, a: f64, b: f64) -> Result<ComplexWaveNumber> {
    let modulus = a.hypot(b);
    if modulus == 0.0 {
        return Ok(ComplexWaveNumber {
            omega,
            kappa: 0.0,
            delta_att: 0.0,
        });
    }
    // A + |k²| without cancellation when A < 0
    let p = if a >= 0.0 {
        a + modulus
    } else {
        b * b / (modulus - a)
    };
    if p <= 0.0 {
        return Err(DispersionError::BranchDegenerate { omega });
    }
    let kappa = (0.5 * p).sqrt();
    let delta_att = -b / (2.0f64.sqrt() * p.sqrt());
    Ok(ComplexWaveNumber {
        omega,
        kappa,
        delta_att,
    })
}

/// `κ(ω)` and `δ_att(ω)` on the attenuated, forward-propagating branch.
pub fn solve_branch(omega: f64, medium: &MediumParams) -> Result<ComplexWaveNumber> {
    check_omega(omega)?;
    let (a, b) = dispersion_ab(omega, medium)?;
    branch_from_ab(omega, a, b)
}

/// `v_p = ω / κ(ω)`.
pub fn phase_velocity(omega: f64, medium: &MediumParams) -> Result<f64> {
    if !(omega > 0.0) {
        return Err(DispersionError::InvalidFrequency(omega));
    }
    let k = solve_branch(omega, medium)?;
    Ok(omega / k.kappa)
}

/// `max(10⁻⁴·ω, 10⁻⁶/τ)`
pub fn default_fd_step(omega: f64, medium: &MediumParams) -> f64 {
    (1e-4 * omega).max(1e-6 / medium.tau())
}

struct Derivative {
    value: f64,
    rel_err: f64,
}

/// Central difference with one Richardson level.
fn richardson<F>(f: F, x: f64, h: f64) -> Result<Derivative>
where
    F: Fn(f64) -> Result<f64>,
{
    let central = |h: f64| -> Result<f64> { Ok((f(x + h)? - f(x - h)?) / (2.0 * h)) };
    let coarse = central(h)?;
    let fine = central(0.5 * h)?;
    let value = (4.0 * fine - coarse) / 3.0;
    let rel_err = (value - fine).abs() / value.abs();
    Ok(Derivative { value, rel_err })
}

fn check_step(omega: f64, fd_step: f64) -> Result<()> {
    if !(fd_step > 0.0 && fd_step.is_finite()) || !(omega > fd_step) {
        return Err(DispersionError::InvalidFrequency(omega));
    }
    Ok(())
}

/// `v_g = [dκ/dω]⁻¹` by Richardson-extrapolated central differences of κ.
pub fn group_velocity(omega: f64, medium: &MediumParams, fd_step: f64) -> Result<f64> {
    check_step(omega, fd_step)?;
    let d = richardson(|w| Ok(solve_branch(w, medium)?.kappa), omega, fd_step)?;
    if !(d.rel_err <= MAX_RICHARDSON_ERROR) {
        return Err(DispersionError::StepTooLarge {
            omega,
            step: fd_step,
            estimate: d.rel_err,
        });
    }
    Ok(1.0 / d.value)
}

/// `v_g` from `dκ/dω = [A′ + (AA′ + BB′)/√(A² + B²)] / (4κ)` with `A′`, `B′`
/// differenced separately. A second route to [`group_velocity`].
pub fn group_velocity_semi_analytic(
    omega: f64,
    medium: &MediumParams,
    fd_step: f64,
) -> Result<f64> {
    check_step(omega, fd_step)?;
    let (a, b) = dispersion_ab(omega, medium)?;
    let da = richardson(|w| Ok(dispersion_ab(w, medium)?.0), omega, fd_step)?;
    let db = richardson(|w| Ok(dispersion_ab(w, medium)?.1), omega, fd_step)?;
    let kappa = branch_from_ab(omega, a, b)?.kappa;
    let dkappa = (da.value + (a * da.value + b * db.value) / a.hypot(b)) / (4.0 * kappa);
    Ok(1.0 / dkappa)
}

/// `|(iω)² + k²c²(1 − Φ̂(ω))| / (ω² + |k|²c²)` with
/// `Φ̂(ω) = 2/√(iωτ) · I_1(√(iωτ)) / I_0(√(iωτ))`.
pub fn dispersion_residual(omega: f64, k: Complex64, medium: &MediumParams) -> Result<f64> {
    if !omega.is_finite() || !(k.re.is_finite() && k.im.is_finite()) {
        return Err(DispersionError::InvalidFrequency(omega));
    }
    let c = medium.c();
    let norm = omega * omega + k.norm_sqr() * c * c;
    if norm == 0.0 {
        return Ok(0.0);
    }
    let one_minus_kernel = if omega == 0.0 {
        Complex64::new(0.0, 0.0)
    } else {
        // √(iωτ) for either sign of ω
        let z = (Complex64::new(0.0, omega * medium.tau())).sqrt();
        let kernel = bessel_ratio(0.0, z, &EvalPolicy::default())? * 2.0 / z;
        Complex64::new(1.0, 0.0) - kernel
    };
    let lhs = Complex64::new(-omega * omega, 0.0) + k * k * (c * c) * one_minus_kernel;
    Ok(lhs.norm() / norm)
}

/// Full dispersion sample at `ω > 0` with the default group-velocity step.
pub fn sample(omega: f64, medium: &MediumParams) -> Result<DispersionSample> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(DispersionError::InvalidFrequency(omega));
    }
    let (a, b) = dispersion_ab(omega, medium)?;
    let k = branch_from_ab(omega, a, b)?;
    let v_group = group_velocity(omega, medium, default_fd_step(omega, medium))?;
    let residual = dispersion_residual(omega, k.k(), medium)?;
    Ok(DispersionSample {
        omega,
        a,
        b,
        kappa: k.kappa,
        delta_att: k.delta_att,
        v_phase: omega / k.kappa,
        v_group,
        residual,
    })
}

/// [`sample`] over a frequency grid, evaluated in parallel; output order
/// follows `omegas`.
pub fn sweep(omegas: &[f64], medium: &MediumParams) -> Result<Vec<DispersionSample>> {
    omegas.par_iter().map(|&w| sample(w, medium)).collect()
}

/// Worst discrepancies found by [`cross_oracle_sweep`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossOracleReport {
    pub points: usize,
    /// `max |(A + iB) − k²| / |k²|`
    pub max_ab_vs_k2: f64,
    /// `max` over points of the closure errors of `κ² − δ² = A`, `−2κδ = B`.
    pub max_closure: f64,
    pub max_residual: f64,
}

/// Compares the Kelvin and complex-Bessel routes to `k²` over a frequency
/// grid and checks that every solved branch point closes the system.
pub fn cross_oracle_sweep(omegas: &[f64], medium: &MediumParams) -> Result<CrossOracleReport> {
    let rows: Vec<(f64, f64, f64)> = omegas
        .par_iter()
        .map(|&w| -> Result<(f64, f64, f64)> {
            let k2 = k_squared(w, medium)?;
            let (a, b) = dispersion_ab(w, medium)?;
            let ab = (Complex64::new(a, b) - k2).norm() / k2.norm();
            let k = branch_from_ab(w, a, b)?;
            let closure_a = (k.kappa * k.kappa - k.delta_att * k.delta_att - a).abs() / a.abs();
            let closure_b = (-2.0 * k.kappa * k.delta_att - b).abs() / b.abs();
            let residual = dispersion_residual(w, k.k(), medium)?;
            Ok((ab, closure_a.max(closure_b), residual))
        })
        .collect::<Result<_>>()?;
    let fold = |f: fn(&(f64, f64, f64)) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    Ok(CrossOracleReport {
        points: rows.len(),
        max_ab_vs_k2: fold(|r| r.0),
        max_closure: fold(|r| r.1),
        max_residual: fold(|r| r.2),
    })
}

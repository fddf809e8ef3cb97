use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI};

use num_complex::Complex64;

use super::{bessel_i, gamma, EvalPolicy, Result, SpecialError};

/// `ber_α(z)` for real `z ≥ 0`.
pub fn kelvin_ber(alpha: f64, z: f64) -> Result<f64> {
    kelvin_pair(alpha, z, &EvalPolicy::default()).map(|(ber, _)| ber)
}

/// `bei_α(z)` for real `z ≥ 0`.
pub fn kelvin_bei(alpha: f64, z: f64) -> Result<f64> {
    kelvin_pair(alpha, z, &EvalPolicy::default()).map(|(_, bei)| bei)
}

/// `(ber_α(z), bei_α(z))` evaluated together.
///
/// The defining series is used while its estimated cancellation error,
/// measured against `|ber + i·bei|`, stays within the policy tolerance.
/// Past that point the value comes from `e^{iαπ/2}·I_α(z·e^{iπ/4})`.
pub fn kelvin_pair(alpha: f64, z: f64, policy: &EvalPolicy) -> Result<(f64, f64)> {
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(SpecialError::InvalidOrder { nu: alpha });
    }
    if !(z.is_finite() && z >= 0.0) {
        return Err(SpecialError::InvalidArgument(format!(
            "Kelvin functions need a finite z >= 0, got {z}"
        )));
    }
    let (ber, bei, estimate) = kelvin_pair_series(alpha, z, policy);
    if estimate <= policy.target_rel_tol() {
        return Ok((ber, bei));
    }
    let rotated = Complex64::from_polar(z, FRAC_PI_4);
    match bessel_i(alpha, rotated, policy) {
        Ok(v) => {
            let w = Complex64::from_polar(1.0, alpha * PI / 2.0) * v;
            Ok((w.re, w.im))
        }
        Err(SpecialError::Overflow { .. }) | Err(SpecialError::NonConvergent { .. })
            if estimate <= 10.0 * policy.target_rel_tol() =>
        {
            Ok((ber, bei))
        }
        Err(SpecialError::Overflow { nu, re, im }) => Err(SpecialError::Overflow { nu, re, im }),
        Err(_) => Err(SpecialError::PrecisionLoss { alpha, z, estimate }),
    }
}

/// `(cos, sin)` of `(3α/4 + k/2)·π`, exact when `3α + 2k` is an integer.
fn weights(alpha: f64, k: usize) -> (f64, f64) {
    let eighths = 3.0 * alpha + 2.0 * k as f64;
    if eighths.fract() == 0.0 {
        const S: f64 = FRAC_1_SQRT_2;
        const TABLE: [(f64, f64); 8] = [
            (1.0, 0.0),
            (S, S),
            (0.0, 1.0),
            (-S, S),
            (-1.0, 0.0),
            (-S, -S),
            (0.0, -1.0),
            (S, -S),
        ];
        TABLE[(eighths as u64 % 8) as usize]
    } else {
        let phase = eighths * FRAC_PI_4;
        (phase.cos(), phase.sin())
    }
}

/// Direct summation of the Kelvin series, returning `(ber, bei, estimate)`
/// where `estimate` bounds the relative rounding error against
/// `|ber + i·bei|`.
pub fn kelvin_pair_series(alpha: f64, z: f64, policy: &EvalPolicy) -> (f64, f64, f64) {
    let w = 0.25 * z * z;
    let prefactor = if alpha == 0.0 {
        1.0
    } else {
        (0.5 * z).powf(alpha)
    };
    let mut magnitude = 1.0 / gamma(alpha + 1.0);
    let (c0, s0) = weights(alpha, 0);
    let mut ber = c0 * magnitude;
    let mut bei = s0 * magnitude;
    let mut abs_sum = magnitude;
    let mut k = 0;
    while k < policy.max_terms() {
        k += 1;
        let kf = k as f64;
        magnitude *= w / (kf * (kf + alpha));
        let (ck, sk) = weights(alpha, k);
        ber += ck * magnitude;
        bei += sk * magnitude;
        abs_sum += magnitude;
        if magnitude <= 1e-18 * abs_sum && kf * kf > w {
            break;
        }
        if magnitude == 0.0 {
            break;
        }
    }
    let modulus = ber.hypot(bei);
    let estimate = if modulus == 0.0 {
        if abs_sum == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (k as f64 + 1.0) * f64::EPSILON * abs_sum / modulus
    };
    (prefactor * ber, prefactor * bei, estimate)
}

use std::f64::consts::PI;

use num_complex::Complex64;

use super::dd::{CDd, Dd};
use super::{check_finite, EvalPolicy, Result, SpecialError};

/// Evaluation regime for [`bessel_i_with`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// Series below the cutoff radius, asymptotic expansion above it, each
    /// falling back to the other when it misses the tolerance.
    Auto,
    /// Ascending power series only.
    Series,
    /// Large-argument asymptotic expansion only.
    Asymptotic,
}

/// Γ(x) for real `x > 0`; exact for small positive integers.
pub fn gamma(x: f64) -> f64 {
    if x.fract() == 0.0 && (1.0..=171.0).contains(&x) {
        let mut acc = 1.0;
        let mut k = 2.0;
        while k < x {
            acc *= k;
            k += 1.0;
        }
        acc
    } else {
        libm::tgamma(x)
    }
}

/// Modified Bessel function of the first kind `I_ν(z)`, `ν > −1`.
pub fn bessel_i(nu: f64, z: Complex64, policy: &EvalPolicy) -> Result<Complex64> {
    bessel_i_with(nu, z, policy, Regime::Auto)
}

/// `e^{−|Re z|} · I_ν(z)`, finite for every finite `z`.
pub fn bessel_i_scaled(nu: f64, z: Complex64, policy: &EvalPolicy) -> Result<Complex64> {
    scaled_any_quadrant(nu, z, policy, Regime::Auto)
}

/// `I_ν(z)` with an explicit choice of evaluation regime.
pub fn bessel_i_with(
    nu: f64,
    z: Complex64,
    policy: &EvalPolicy,
    regime: Regime,
) -> Result<Complex64> {
    let scaled = scaled_any_quadrant(nu, z, policy, regime)?;
    unscale(nu, z, scaled)
}

/// Relative residual of `I_{β−1}(z) − (2β/z)·I_β(z) = I_{β+1}(z)`.
pub fn bessel_recurrence_check(beta: f64, z: Complex64) -> Result<f64> {
    check_finite(z, "argument")?;
    if z == Complex64::new(0.0, 0.0) {
        return Err(SpecialError::InvalidArgument(
            "recurrence check is undefined at z = 0 (2β/z diverges)".into(),
        ));
    }
    let policy = EvalPolicy::default();
    // A common e^{−|Re z|} factor cancels out of the relative residual.
    let lower = bessel_i_scaled(beta - 1.0, z, &policy)?;
    let mid = bessel_i_scaled(beta, z, &policy)?;
    let upper = bessel_i_scaled(beta + 1.0, z, &policy)?;
    let residual = (lower - mid * (2.0 * beta / z) - upper).norm();
    Ok(residual / lower.norm().max(upper.norm()))
}

fn validate(nu: f64, z: Complex64) -> Result<()> {
    if !(nu.is_finite() && nu > -1.0) {
        return Err(SpecialError::InvalidOrder { nu });
    }
    check_finite(z, "argument")
}

fn unscale(nu: f64, z: Complex64, scaled: Complex64) -> Result<Complex64> {
    let a = z.re.abs();
    if a == 0.0 {
        return Ok(scaled);
    }
    let m = scaled.norm();
    if m == 0.0 {
        return Ok(scaled);
    }
    if m.ln() + a > f64::MAX.ln() {
        return Err(SpecialError::Overflow {
            nu,
            re: z.re,
            im: z.im,
        });
    }
    let half = (0.5 * a).exp();
    Ok(scaled * half * half)
}

/// Reduces any argument to the closed first quadrant using
/// `I_ν(z̄) = conj I_ν(z)` and `I_ν(z·e^{iπ}) = e^{iνπ} I_ν(z)`.
fn scaled_any_quadrant(
    nu: f64,
    z: Complex64,
    policy: &EvalPolicy,
    regime: Regime,
) -> Result<Complex64> {
    validate(nu, z)?;
    if z.im < 0.0 {
        return scaled_any_quadrant(nu, z.conj(), policy, regime).map(|v| v.conj());
    }
    if z.re < 0.0 {
        let w = (-z).conj();
        let v = scaled_first_quadrant(nu, w, policy, regime)?.conj();
        let phase = if nu.fract() == 0.0 {
            if (nu as i64) % 2 == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(-1.0, 0.0)
            }
        } else {
            Complex64::from_polar(1.0, nu * PI)
        };
        return Ok(phase * v);
    }
    scaled_first_quadrant(nu, z, policy, regime)
}

struct Estimate {
    value: Complex64,
    rel_err: f64,
}

fn scaled_first_quadrant(
    nu: f64,
    z: Complex64,
    policy: &EvalPolicy,
    regime: Regime,
) -> Result<Complex64> {
    let tol = policy.target_rel_tol();
    let nonconvergent = |estimate: f64| SpecialError::NonConvergent {
        nu,
        re: z.re,
        im: z.im,
        estimate,
    };
    let accept = |e: Estimate| -> Result<Complex64> {
        if e.rel_err <= tol && e.value.re.is_finite() && e.value.im.is_finite() {
            Ok(e.value)
        } else {
            Err(nonconvergent(e.rel_err))
        }
    };
    match regime {
        Regime::Series => accept(series(nu, z, policy)),
        Regime::Asymptotic => accept(asymptotic(nu, z, policy)),
        Regime::Auto => {
            let r = z.norm();
            if z == Complex64::new(0.0, 0.0) {
                return Ok(series(nu, z, policy).value);
            }
            let (first, second): (fn(f64, Complex64, &EvalPolicy) -> Estimate, _) =
                if r <= policy.series_cutoff_radius() {
                    (
                        series,
                        asymptotic as fn(f64, Complex64, &EvalPolicy) -> Estimate,
                    )
                } else {
                    (
                        asymptotic,
                        series as fn(f64, Complex64, &EvalPolicy) -> Estimate,
                    )
                };
            let a = first(nu, z, policy);
            if a.rel_err <= tol && a.value.re.is_finite() && a.value.im.is_finite() {
                return Ok(a.value);
            }
            let b = second(nu, z, policy);
            if b.rel_err <= tol && b.value.re.is_finite() && b.value.im.is_finite() {
                return Ok(b.value);
            }
            Err(nonconvergent(a.rel_err.min(b.rel_err)))
        }
    }
}

/// `(z/2)^ν / Γ(ν+1)` on the principal branch.
fn series_prefactor(nu: f64, z: Complex64) -> Complex64 {
    let half = z * 0.5;
    if nu == 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    if half == Complex64::new(0.0, 0.0) {
        return Complex64::new(0.0, 0.0);
    }
    if nu.fract() == 0.0 && nu <= 30.0 {
        half.powi(nu as i32) / gamma(nu + 1.0)
    } else {
        (half.ln() * nu - libm::lgamma(nu + 1.0)).exp()
    }
}

/// Ascending series `Σ (z²/4)^k / (k! (ν+1)_k)` accumulated in double-double,
/// then multiplied by the prefactor and by `e^{−Re z}`.
fn series(nu: f64, z: Complex64, policy: &EvalPolicy) -> Estimate {
    let w = CDd::quarter_square(z);
    let mut term = CDd::one();
    let mut sum = CDd::one();
    let mut abs_sum = 1.0;
    let mut k = 0usize;
    let mut converged = false;
    while k < policy.max_terms() {
        k += 1;
        let kf = k as f64;
        // k (ν + k), exactly
        let denom = Dd::sum(nu, kf).mul(Dd::from_f64(kf));
        term = term.mul(w).div_real(denom);
        sum = sum.add(term);
        let t = term.norm_f64();
        abs_sum += t;
        if t <= 1e-20 * sum.norm_f64() && kf * kf > w.norm_f64() {
            converged = true;
            break;
        }
        if t == 0.0 {
            converged = true;
            break;
        }
    }
    let s = sum.to_c64();
    let magnitude = s.norm();
    let rounding = 8.0 * (k as f64 + 1.0) * 1.3e-32 * abs_sum;
    let rel_err = if magnitude == 0.0 {
        f64::INFINITY
    } else if converged {
        (rounding + 1e-20 * magnitude) / magnitude + 4.0 * f64::EPSILON
    } else {
        f64::INFINITY
    };
    let value = s * series_prefactor(nu, z) * (-z.re).exp();
    Estimate { value, rel_err }
}

/// Hankel-type expansion (both exponentials), valid for `Re z ≥ 0`:
///
/// ```text
/// I_ν(z) ~ e^{z}/√(2πz) Σ (−1)^k a_k(ν)/z^k + i e^{iνπ} e^{−z}/√(2πz) Σ a_k(ν)/z^k
/// a_k(ν) = Π_{j=1..k} (4ν² − (2j−1)²) / (k! 8^k)
/// ```
///
/// The returned value carries the `e^{−Re z}` scaling.
fn asymptotic(nu: f64, z: Complex64, policy: &EvalPolicy) -> Estimate {
    let mu = 4.0 * nu * nu;
    let inv_z = z.inv();
    let mut a_k = 1.0;
    let mut pow = Complex64::new(1.0, 0.0);
    let mut alt = Complex64::new(1.0, 0.0);
    let mut plain = Complex64::new(1.0, 0.0);
    let mut prev_mag = f64::INFINITY;
    let mut omitted = f64::INFINITY;
    for k in 1..=policy.max_terms() {
        let j = (2 * k - 1) as f64;
        a_k *= (mu - j * j) / (8.0 * k as f64);
        pow *= inv_z;
        let term = pow * a_k;
        let mag = term.norm();
        if mag == 0.0 {
            omitted = 0.0;
            break;
        }
        if mag > prev_mag {
            // divergent tail begins; the previous term bounds the error
            omitted = prev_mag;
            break;
        }
        if mag <= 1e-18 {
            omitted = mag;
            break;
        }
        let sign = if k % 2 == 1 { -1.0 } else { 1.0 };
        alt += term * sign;
        plain += term;
        prev_mag = mag;
        omitted = mag;
    }
    let root = (z * (2.0 * PI)).sqrt();
    // e^{z − Re z} = e^{i Im z}
    let dominant = Complex64::from_polar(1.0, z.im) / root * alt;
    let decay = (-2.0 * z.re).exp();
    let value = if decay > 1e-30 {
        let sub = Complex64::i()
            * Complex64::from_polar(1.0, nu * PI)
            * Complex64::from_polar(decay, -z.im)
            / root
            * plain;
        dominant + sub
    } else {
        dominant
    };
    let scale = (1.0 / root.norm()) * (1.0 + decay);
    let magnitude = value.norm();
    let rel_err = if magnitude == 0.0 {
        f64::INFINITY
    } else {
        (omitted * scale) / magnitude + 8.0 * f64::EPSILON
    };
    Estimate { value, rel_err }
}

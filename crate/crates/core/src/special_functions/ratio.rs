use num_complex::Complex64;

use super::{check_finite, EvalPolicy, Result, SpecialError};

/// Ratios with modulus above this are treated as sitting on a zero of `I_ν`.
pub const NEAR_POLE_LIMIT: f64 = 1e12;

/// Below this modulus the ratio is taken from the two truncated series.
const SERIES_RADIUS: f64 = 1.0;

/// `I_{ν+1}(z) / I_ν(z)` for `ν ≥ −1/2`, without forming either Bessel value.
///
/// Near the origin the ratio of the two ascending series is used, which
/// returns `z / (2(ν+1))` to leading order with no cancellation. Elsewhere the
/// Gauss continued fraction
///
/// ```text
/// I_{ν+1}/I_ν = 1 / (2(ν+1)/z + 1 / (2(ν+2)/z + 1 / (2(ν+3)/z + …)))
/// ```
///
/// is evaluated by the modified Lentz algorithm. The iteration cap is
/// `max_terms + 4|z|`, since the fraction needs on the order of `|z|` levels
/// before its tail settles.
pub fn bessel_ratio(nu: f64, z: Complex64, policy: &EvalPolicy) -> Result<Complex64> {
    if !(nu.is_finite() && nu >= -0.5) {
        return Err(SpecialError::InvalidOrder { nu });
    }
    check_finite(z, "argument")?;
    let r = if z.norm() <= SERIES_RADIUS {
        series_ratio(nu, z, policy)
    } else {
        continued_fraction(nu, z, policy)?
    };
    if !(r.re.is_finite() && r.im.is_finite()) || r.norm() > NEAR_POLE_LIMIT {
        return Err(SpecialError::NearPole {
            nu,
            re: z.re,
            im: z.im,
        });
    }
    Ok(r)
}

fn reduced_series(nu: f64, w: Complex64, policy: &EvalPolicy) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    for k in 1..=policy.max_terms() {
        let kf = k as f64;
        term = term * w / (kf * (nu + kf));
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    sum
}

fn series_ratio(nu: f64, z: Complex64, policy: &EvalPolicy) -> Complex64 {
    let w = z * z * 0.25;
    let lower = reduced_series(nu, w, policy);
    let upper = reduced_series(nu + 1.0, w, policy);
    z / (2.0 * (nu + 1.0)) * upper / lower
}

fn continued_fraction(nu: f64, z: Complex64, policy: &EvalPolicy) -> Result<Complex64> {
    const TINY: f64 = 1e-100;
    let tiny = Complex64::new(TINY, 0.0);
    let inv_z = z.inv();
    let cap = policy.max_terms() + (4.0 * z.norm()).ceil() as usize;

    let mut f = tiny;
    let mut c = f;
    let mut d = Complex64::new(0.0, 0.0);
    for j in 1..=cap {
        let b = inv_z * (2.0 * (nu + j as f64));
        d = b + d;
        if d.norm() < TINY {
            d = tiny;
        }
        c = b + c.inv();
        if c.norm() < TINY {
            c = tiny;
        }
        d = d.inv();
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).norm() <= 4.0 * f64::EPSILON {
            return Ok(f);
        }
    }
    Err(SpecialError::NonConvergent {
        nu,
        re: z.re,
        im: z.im,
        estimate: f64::INFINITY,
    })
}

#[cfg(test)]
mod tests {
    use super::super::bessel_i;
    use super::*;

    fn pol() -> EvalPolicy {
        EvalPolicy::default()
    }

    #[test]
    fn small_argument_limit() {
        let z = Complex64::new(1e-8, 0.0);
        let r = bessel_ratio(0.0, z, &pol()).unwrap();
        assert!((r.re / z.re - 0.5).abs() < 1e-15);
        let z = Complex64::new(0.0, 0.0);
        assert_eq!(bessel_ratio(0.0, z, &pol()).unwrap(), z);
    }

    #[test]
    fn real_two() {
        let r = bessel_ratio(0.0, Complex64::new(2.0, 0.0), &pol()).unwrap();
        // I1(2)/I0(2) = 1.5906368546373291 / 2.2795853023360673
        assert!((r.re - 1.590_636_854_637_329 / 2.279_585_302_336_067).abs() < 1e-15);
    }

    #[test]
    fn tends_to_one_on_positive_axis() {
        let r = bessel_ratio(0.0, Complex64::new(5.0e3, 0.0), &pol()).unwrap();
        assert!((r.re - 1.0).abs() < 2e-4);
        assert!(r.re < 1.0);
    }

    #[test]
    fn agrees_with_bessel_quotient() {
        for &(re, im) in &[
            (0.5, 0.5),
            (3.0, -2.0),
            (10.0, 10.0),
            (0.0, 7.0),
            (30.0, 5.0),
        ] {
            let z = Complex64::new(re, im);
            for &nu in &[0.0, 1.0, 2.5] {
                let q = bessel_i(nu + 1.0, z, &pol()).unwrap() / bessel_i(nu, z, &pol()).unwrap();
                let r = bessel_ratio(nu, z, &pol()).unwrap();
                assert!(
                    (q - r).norm() <= 1e-12 * q.norm(),
                    "nu={nu} z={z}: {r} vs {q}"
                );
            }
        }
    }

    #[test]
    fn pole_at_bessel_zero() {
        // I_0(i j_{0,1}) = J_0(j_{0,1}) = 0
        let z = Complex64::new(0.0, 2.404_825_557_695_773);
        assert!(matches!(
            bessel_ratio(0.0, z, &pol()),
            Err(SpecialError::NearPole { .. })
        ));
    }

    #[test]
    fn order_below_minus_half_rejected() {
        assert!(bessel_ratio(-0.75, Complex64::new(1.0, 0.0), &pol()).is_err());
    }
}

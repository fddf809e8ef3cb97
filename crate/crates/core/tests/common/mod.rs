//! Test-only oracles, independent of the library's evaluation paths.
#![allow(dead_code)]

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Clone)]
struct CRat {
    re: BigRational,
    im: BigRational,
}

impl CRat {
    fn mul(&self, o: &CRat) -> CRat {
        CRat {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn scale(&self, r: &BigRational) -> CRat {
        CRat {
            re: &self.re * r,
            im: &self.im * r,
        }
    }

    fn add(&self, o: &CRat) -> CRat {
        CRat {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }

    fn approx_norm(&self) -> f64 {
        self.re.to_f64().unwrap().hypot(self.im.to_f64().unwrap())
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64().unwrap(), self.im.to_f64().unwrap())
    }
}

fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// `I_n(z)` for integer `n ≥ 0` and `z = (re_num + i·im_num)/den`, summed in
/// exact rational arithmetic until the terms fall below 1e-30 of the sum.
pub fn exact_bessel_i(n: u32, re_num: i64, im_num: i64, den: i64) -> Complex64 {
    let half = CRat {
        re: rat(re_num, 2 * den),
        im: rat(im_num, 2 * den),
    };
    let w2 = half.mul(&half);
    let mut pw = CRat {
        re: BigRational::one(),
        im: BigRational::zero(),
    };
    for _ in 0..n {
        pw = pw.mul(&half);
    }
    let mut sum = CRat {
        re: BigRational::zero(),
        im: BigRational::zero(),
    };
    let mut power = pw;
    let r = (re_num as f64).hypot(im_num as f64) / den as f64;
    let mut k = 0u32;
    loop {
        let denom = BigRational::from_integer(factorial(k) * factorial(n + k));
        let term = power.scale(&denom.recip());
        sum = sum.add(&term);
        let t = term.approx_norm();
        let s = sum.approx_norm().max(1e-300);
        if (k as f64) > r && (t == 0.0 || t < 1e-30 * s.max(1e-30)) {
            break;
        }
        power = power.mul(&w2);
        k += 1;
        assert!(k < 2000, "oracle series did not converge");
    }
    sum.to_c64()
}

/// `(ber_α(x), bei_α(x))` for `α ∈ {0, 2}` and `x = num/den`, exact series.
pub fn exact_kelvin(alpha: u32, num: i64, den: i64) -> (f64, f64) {
    assert!(alpha == 0 || alpha == 2);
    let x = rat(num, den);
    let w = &x * &x / BigRational::from_integer(BigInt::from(4));
    let pref = {
        let h = &x / BigRational::from_integer(BigInt::from(2));
        let mut p = BigRational::one();
        for _ in 0..alpha {
            p = &p * &h;
        }
        p
    };
    let mut ber = BigRational::zero();
    let mut bei = BigRational::zero();
    let mut power = BigRational::one();
    let xf = num as f64 / den as f64;
    let mut k = 0u32;
    loop {
        // (3α/4 + k/2)π in quarter turns: 3α/2 + k, α even so this is an integer
        let quarter = (3 * alpha / 2 + k) % 4;
        let (c, s): (i32, i32) = match quarter {
            0 => (1, 0),
            1 => (0, 1),
            2 => (-1, 0),
            _ => (0, -1),
        };
        let mag = &power / BigRational::from_integer(factorial(k) * factorial(k + alpha));
        if c != 0 {
            ber += &mag * BigRational::from_integer(BigInt::from(c));
        }
        if s != 0 {
            bei += &mag * BigRational::from_integer(BigInt::from(s));
        }
        let t = mag.abs().to_f64().unwrap();
        let scale = ber
            .to_f64()
            .unwrap()
            .hypot(bei.to_f64().unwrap())
            .max(1e-300);
        if (k as f64) * (k as f64) > xf * xf && t < 1e-30 * scale {
            break;
        }
        power = &power * &w;
        k += 1;
        assert!(k < 2000);
    }
    (
        (&pref * &ber).to_f64().unwrap(),
        (&pref * &bei).to_f64().unwrap(),
    )
}

pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

pub fn rel_err(got: Complex64, want: Complex64) -> f64 {
    (got - want).norm() / want.norm()
}

/// Log-spaced grid of `n` points on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

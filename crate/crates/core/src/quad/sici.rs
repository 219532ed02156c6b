use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use crate::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_606_512_090_082_402_43;
const SERIES_LIMIT: f64 = 4.0;

/// Sine and cosine integrals at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SiCi {
    pub si: f64,
    pub ci: f64,
}

/// `Si(x) = int_0^x sin t / t dt` and `Ci(x) = gamma + ln x + int_0^x (cos t - 1) / t dt`
/// Power series below 4, continued fraction for `E1(ix)` above.
///
/// `Si` is odd. For `x < 0` the returned `ci` is the real part `Ci(|x|)`;
/// `Ci(0) = -inf`.
pub fn sici(x: f64) -> SiCi {
    if x < 0.0 {
        let v = sici(-x);
        return SiCi { si: -v.si, ci: v.ci };
    }
    if x == 0.0 {
        return SiCi { si: 0.0, ci: f64::NEG_INFINITY };
    }
    if x.is_nan() {
        return SiCi { si: f64::NAN, ci: f64::NAN };
    }
    if x == f64::INFINITY {
        return SiCi { si: FRAC_PI_2, ci: 0.0 };
    }
    if x < SERIES_LIMIT {
        series(x)
    } else {
        let h = expint_i_scaled(x);
        let (s, c) = x.sin_cos();
        // E1(ix) = e^{-ix} h = -Ci(x) + i (Si(x) - pi/2)
        let e1 = Complex64::new(c, -s) * h;
        SiCi { si: FRAC_PI_2 + e1.im, ci: -e1.re }
    }
}

/// Auxiliary functions `f(x) = int_0^inf e^{-x s} / (1 + s^2) ds` and
/// `g(x) = int_0^inf s e^{-x s} / (1 + s^2) ds`, accurate for large `x` where
/// they fall off like `1/x` and `1/x^2`.
pub fn aux_fg(x: f64) -> Result<(f64, f64)> {
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain(format!("aux_fg needs finite x > 0, got {x}")));
    }
    if x < SERIES_LIMIT {
        let SiCi { si, ci } = series(x);
        let (s, c) = x.sin_cos();
        let shifted = si - FRAC_PI_2;
        Ok((ci * s - shifted * c, -ci * c - shifted * s))
    } else {
        // e^{ix} E1(ix) = g - i f
        let h = expint_i_scaled(x);
        Ok((-h.im, h.re))
    }
}

fn series(x: f64) -> SiCi {
    let x2 = x * x;
    let mut si = 0.0;
    let mut ci = 0.0;
    // term_k = (-1)^k x^k / k! built up one power at a time
    let mut term = 1.0;
    for k in 1..200 {
        term *= x / k as f64;
        let contrib = term / k as f64;
        match k % 4 {
            1 => si += contrib,
            2 => ci -= contrib,
            3 => si -= contrib,
            _ => ci += contrib,
        }
        if term < f64::EPSILON * 1e-3 * x2.min(1.0) {
            break;
        }
    }
    SiCi { si, ci: EULER_GAMMA + x.ln() + ci }
}

/// `e^{ix} E1(ix)` by the modified Lentz continued fraction.
fn expint_i_scaled(x: f64) -> Complex64 {
    let tiny = 1e-300;
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..1000 {
        let a = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (d * a + b);
        c = b + a / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < 1e-16 {
            break;
        }
    }
    h
}

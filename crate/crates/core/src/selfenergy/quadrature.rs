//! Direct two-dimensional quadrature of the self-energy integrals.
//!
//! The inner `xi` integral runs over geometric panels that resolve both the
//! `xi ~ 1` scale of the weight and the `1 / (X t)` scale of the exponentials,
//! and stops where the slowest exponent reaches 40. The outer `t` integral
//! has breakpoints clustered at both ends, where the integrands have
//! boundary layers of width `1/X` and `1/X^2`.

use std::f64::consts::PI;

use crate::quad::{Integrator, QuadValue, Tol, Vector};
use crate::{Error, Result};

use super::integrands::{integrand_with, profile_point, Integrand};
use super::{check_p0a, Reflector, SigmaCoefficients, TmPiece};

const CUTOFF_EXPONENT: f64 = 40.0;

/// Quadrature result with the error estimate in coefficient units.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SigmaQuad {
    pub coeffs: SigmaCoefficients,
    pub error: f64,
    pub evaluations: usize,
}

/// Default target on the coefficients.
pub const DEFAULT_QUAD_TOL: Tol = Tol { abs: 1e-11, rel: 1e-11 };

fn xi_points(fast: f64, slow: f64) -> Vec<f64> {
    let lo = (1.0f64).min(1.0 / fast) / 16.0;
    let hi = (CUTOFF_EXPONENT / slow.max(f64::MIN_POSITIVE)).clamp(CUTOFF_EXPONENT, 1e300);
    let mut pts = vec![0.0];
    let mut x = lo;
    while x < hi {
        pts.push(x);
        x *= 4.0;
    }
    pts.push(hi);
    pts
}

fn outer_points(x: f64) -> Vec<f64> {
    let mut pts = vec![0.0, 1.0 / x, 10.0 / x, 0.1, 0.5, 0.9, 0.99, 1.0 - 1.0 / (x * x), 1.0];
    pts.retain(|p| (0.0..=1.0).contains(p));
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    pts.dedup();
    pts
}

/// `int_0^inf dxi` of the weighted integrand at fixed `t`.
pub fn xi_integral(kind: Integrand, reflector: Reflector, x: f64, t: f64, tol: Tol) -> Result<(Vector<3>, f64, usize)> {
    let prof = profile_point(kind.polarization(), reflector, t)?;
    let fast = x * t;
    let slow = if kind.has_second_pole() { x * t * (1.0 - t * t).max(0.0).sqrt() } else { fast };
    let pts = xi_points(fast, slow);
    let r = Integrator::new(tol).partitioned(|xi| Vector(integrand_with(kind, &prof, x, t, xi)), &pts);
    Ok((r.value, r.error, r.evaluations))
}

/// Coefficients of one integrand by nested adaptive quadrature.
pub fn sigma_quad(kind: Integrand, reflector: Reflector, p0a: f64, tol: Tol) -> Result<SigmaQuad> {
    check_p0a(p0a)?;
    tol.validate()?;
    if let Reflector::Dielectric(n) = reflector {
        crate::kinematics::check_index(n)?;
    }
    let x = 4.0 * p0a;
    let scale = 8.0 * p0a / PI;
    let outer_tol = Tol::new(tol.abs / scale, tol.rel);
    let inner_tol = Tol::new((outer_tol.abs * 0.1).max(1e-15), (tol.rel * 1e-2).max(1e-14));
    let mut inner_evals = 0usize;
    let mut failure: Option<Error> = None;
    let res = Integrator::new(outer_tol).partitioned(
        |t| {
            if failure.is_some() {
                return Vector::<3>::zero();
            }
            match xi_integral(kind, reflector, x, t, inner_tol) {
                Ok((v, err, ev)) => {
                    inner_evals += ev;
                    if err > inner_tol.bound(v.magnitude()) * 10.0 {
                        failure = Some(Error::NotConverged {
                            what: format!("xi integral at t = {t}"),
                            achieved: err,
                            requested: inner_tol.bound(v.magnitude()),
                        });
                    }
                    v
                }
                Err(e) => {
                    failure = Some(e);
                    Vector::<3>::zero()
                }
            }
        },
        &outer_points(x),
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let res = res.require("t integral of the self-energy", outer_tol)?;
    let [q0, qpar, qz] = res.value.0;
    Ok(SigmaQuad {
        coeffs: SigmaCoefficients::radiative(-scale * q0, -scale * qpar, -scale * qz),
        error: scale * res.error,
        evaluations: inner_evals,
    })
}

pub fn sigma_te_quad(p0a: f64, n: f64, tol: Tol) -> Result<SigmaQuad> {
    sigma_quad(Integrand::Te, Reflector::dielectric(n)?, p0a, tol)
}

/// TM part with both residues kept together under one integral.
pub fn sigma_tm_quad(p0a: f64, n: f64, tol: Tol) -> Result<SigmaQuad> {
    sigma_quad(Integrand::Tm, Reflector::dielectric(n)?, p0a, tol)
}

/// The four pieces `A, B, C, D` of the TM integral, each by quadrature.
pub fn sigma_tm_split_quad(p0a: f64, n: f64, tol: Tol) -> Result<[SigmaQuad; 4]> {
    let refl = Reflector::dielectric(n)?;
    let mut out = [SigmaQuad { coeffs: SigmaCoefficients::default(), error: 0.0, evaluations: 0 }; 4];
    for (slot, piece) in out.iter_mut().zip(TmPiece::ALL) {
        *slot = sigma_quad(Integrand::TmPiece(piece), refl, p0a, tol)?;
    }
    Ok(out)
}

/// TE + TM radiative coefficients.
pub fn sigma_radiative_quad(p0a: f64, n: f64, tol: Tol) -> Result<SigmaQuad> {
    let te = sigma_te_quad(p0a, n, tol)?;
    let tm = sigma_tm_quad(p0a, n, tol)?;
    Ok(SigmaQuad {
        coeffs: te.coeffs + tm.coeffs,
        error: te.error + tm.error,
        evaluations: te.evaluations + tm.evaluations,
    })
}

/// The integrals with the reflector fixed before any expansion.
pub fn sigma_perfect_quad(p0a: f64, tol: Tol) -> Result<SigmaQuad> {
    let te = sigma_quad(Integrand::Te, Reflector::Perfect, p0a, tol)?;
    let tm = sigma_quad(Integrand::Tm, Reflector::Perfect, p0a, tol)?;
    Ok(SigmaQuad {
        coeffs: te.coeffs + tm.coeffs,
        error: te.error + tm.error,
        evaluations: te.evaluations + tm.evaluations,
    })
}

/// The TM integral before the `t -> -t` fold, as the sum over the full range
/// `t in (-1, 1)` of the unfolded integrand: the `rho` integral
/// `int_0^inf drho e^{-2 a rho} (A + B i rho t) / (rho + 2 i p0 t)` is done
/// per `t`, and its real part compared with twice the folded `xi` integral.
/// Returns the largest mismatch over the sample points.
pub fn parity_fold_residual(n: f64, p0a: f64, samples: &[f64]) -> Result<f64> {
    check_p0a(p0a)?;
    let refl = Reflector::dielectric(n)?;
    // units p0 = 1, a = p0a
    let a = p0a;
    let x = 4.0 * p0a;
    let tol = Tol::new(1e-14, 1e-11);
    let mut worst: f64 = 0.0;
    for &t in samples {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::domain("fold samples must lie in (0, 1)"));
        }
        let prof = profile_point(crate::kinematics::Polarization::TM, refl, t)?;
        let w = (1.0 - t * t).sqrt();
        // unfolded integrand at +t and -t, summed, with k0 = i rho t
        let unfolded = |rho: f64, tt: f64| -> [num_complex::Complex64; 3] {
            use num_complex::Complex64 as C;
            let den = C::new(rho, 2.0 * tt);
            let irt = C::new(0.0, rho * tt);
            let e1 = (-2.0 * a * rho).exp();
            let e2 = (-2.0 * a * rho * w).exp();
            let r = prof.r;
            let r0 = prof.r0;
            let f = (1.0 - tt * tt) / (tt * tt);
            let g0 = (-irt - f * 2.0 * irt) * r * e1 + 2.0 * irt * w / (tt * tt) * r0 * e2;
            let gpar = C::new((1.0 + f) * r * e1 - w / (tt * tt) * r0 * e2, 0.0);
            let gz = C::new(2.0 * f * r * e1 - 2.0 * w / (tt * tt) * r0 * e2, 0.0);
            [g0 / den, gpar / den, gz / den]
        };
        let both = |rho: f64| {
            let p = unfolded(rho, t);
            let m = unfolded(rho, -t);
            // gamma^0 comes with p0 = 1 here
            Vector([(p[0] + m[0]).re, (p[1] + m[1]).re, (p[2] + m[2]).re])
        };
        let imag = |rho: f64| {
            let p = unfolded(rho, t);
            let m = unfolded(rho, -t);
            Vector([(p[0] + m[0]).im, (p[1] + m[1]).im, (p[2] + m[2]).im])
        };
        let rate = 2.0 * a * w;
        let lhs = Integrator::new(tol).decaying(both, 0.0, rate).require("unfolded rho integral", tol)?;
        let lhs_im = Integrator::new(tol).decaying(imag, 0.0, rate).require("unfolded rho integral", tol)?;
        // folded form: (1/2) int dt over (-1,1) equals int over (0,1); in the
        // xi variable rho = 2 t xi, drho rho / (rho^2 + 4 t^2) = dxi xi / (xi^2 + 1)
        let (folded, _, _) = xi_integral(Integrand::Tm, refl, x, t, Tol::new(1e-15, 1e-12))?;
        for k in 0..3 {
            worst = worst.max((lhs.value.0[k] - 2.0 * folded.0[k]).abs()).max(lhs_im.value.0[k].abs());
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::aux_fg;

    #[test]
    fn te_matches_reduced_form() {
        let (p0a, n) = (10.0, 2.0);
        let q = sigma_te_quad(p0a, n, DEFAULT_QUAD_TOL).unwrap();
        let refl = Reflector::Dielectric(n);
        let x = 4.0 * p0a;
        let r = Integrator::new(Tol::new(1e-15, 1e-13)).partitioned(
            |t| Vector(super::super::reduced_integrand(Integrand::Te, refl, x, t).unwrap()),
            &outer_points(x),
        );
        let scale = -8.0 * p0a / PI;
        assert!((q.coeffs.c0 - scale * r.value.0[0]).abs() < 1e-10);
        assert!((q.coeffs.c_par - scale * r.value.0[1]).abs() < 1e-10);
        assert_eq!(q.coeffs.c_z, 0.0);
    }

    #[test]
    fn free_space_is_zero() {
        let q = sigma_tm_quad(50.0, 1.0, DEFAULT_QUAD_TOL).unwrap();
        assert_eq!(q.coeffs.max_abs(), 0.0);
    }

    #[test]
    fn perfect_te_is_exact() {
        // R = -1: c_par = -(2/pi)(pi/2 - f(X)) exactly
        let p0a = 3.0;
        let q = sigma_quad(Integrand::Te, Reflector::Perfect, p0a, DEFAULT_QUAD_TOL).unwrap();
        let f = aux_fg(4.0 * p0a).unwrap().0;
        let want = -(2.0 / PI) * (PI / 2.0 - f);
        assert!((q.coeffs.c_par - want).abs() < 1e-10, "{} {}", q.coeffs.c_par, want);
    }

    #[test]
    fn fold_holds() {
        let r = parity_fold_residual(2.0, 5.0, &[0.1, 0.5, 0.9]).unwrap();
        assert!(r < 1e-10, "{r}");
    }
}

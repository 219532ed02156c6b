//! Reflected part of the photon propagator after Wick rotation, and the
//! electrostatic Green function.
//!
//! In Euclidean polar variables the photon momentum is `k_4 = rho t`,
//! `k_par = rho sqrt(1 - t^2)`. What remains of the medium-dependent
//! propagator is the `k_z` integral along the contour `C`
//!
//! ```text
//! int_C dk_z exp(i k_z z_sum) R^L(k) w(k) / (rho^2 + k_z^2)
//! ```
//!
//! with `z_sum = z + z' < 0` and a weight `w` that is either 1 or the
//! transverse factor `k_par^2 / (k_par^2 + k_z^2)` carried by TM. `C` follows
//! the real axis with a detour around the cut of `k_z^d`; closing it in the
//! lower half plane leaves the residues at `-i rho` and, for the transverse
//! weight, at `-i k_par`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::fresnel::{left_amplitudes, reflection_profile, right_amplitudes};
use crate::kinematics::{check_index, CutSide, Polarization, WaveVector};
use crate::quad::{
    integrate_contour, richardson, ContourSpec, Integrator, QuadResult, RichardsonResult, Tol,
};
use crate::{Error, Result};

type C64 = Complex64;

/// Extra factor in the `k_z` integrand.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum KernelWeight {
    Unit,
    /// `k_par^2 / (k_par^2 + k_z^2)`.
    Transverse,
}

impl KernelWeight {
    /// The weight used by [`contour_kz_integral`] for each mode.
    pub fn natural(sigma: Polarization) -> Self {
        match sigma {
            Polarization::TM => KernelWeight::Transverse,
            _ => KernelWeight::Unit,
        }
    }

    fn at(self, k_par: f64, k_z: C64) -> C64 {
        match self {
            KernelWeight::Unit => C64::new(1.0, 0.0),
            KernelWeight::Transverse => k_par * k_par / (k_par * k_par + k_z * k_z),
        }
    }
}

/// One evaluation point of the Euclidean kernel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PropagatorKernel {
    pub sigma: Polarization,
    pub n: f64,
    pub rho: f64,
    pub t: f64,
    pub z_sum: f64,
}

impl PropagatorKernel {
    pub fn new(sigma: Polarization, n: f64, rho: f64, t: f64, z_sum: f64) -> Result<Self> {
        check_index(n)?;
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(Error::domain(format!("rho must be positive, got {rho}")));
        }
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::domain(format!("t must lie in [0, 1], got {t}")));
        }
        if !(z_sum < 0.0 && z_sum.is_finite()) {
            return Err(Error::domain(format!("z + z' must be negative, got {z_sum}")));
        }
        Ok(PropagatorKernel { sigma, n, rho, t, z_sum })
    }

    pub fn k_par(&self) -> f64 {
        self.rho * (1.0 - self.t * self.t).sqrt()
    }

    /// Closed-form residue evaluation with the given weight.
    pub fn residue(&self, weight: KernelWeight) -> Result<f64> {
        let PropagatorKernel { sigma, n, rho, t, z_sum } = *self;
        let r_pole = reflection_profile(sigma, t, n)?;
        match weight {
            KernelWeight::Unit => Ok(PI * (rho * z_sum).exp() * r_pole / rho),
            KernelWeight::Transverse => {
                if t == 0.0 {
                    return Err(Error::CoincidentPoles);
                }
                let w = (1.0 - t * t).sqrt();
                let r_kpar = reflection_at_kpar(sigma, n);
                let t2 = t * t;
                Ok(PI / rho
                    * (-(w * w) / t2 * r_pole * (rho * z_sum).exp()
                        + w / t2 * r_kpar * (rho * w * z_sum).exp()))
            }
        }
    }
}

/// `R^L` at the pole `k_z = -i k_par`, where `k_z^d = -i k_par` as well.
fn reflection_at_kpar(sigma: Polarization, n: f64) -> f64 {
    let k = C64::new(0.0, -1.0);
    left_amplitudes(sigma, k, k, n).r.re
}

/// Residue evaluation of the contour integral with the natural weight of the
/// mode (unit for TE, transverse for TM).
pub fn contour_kz_integral(sigma: Polarization, rho: f64, t: f64, z_sum: f64, n: f64) -> Result<C64> {
    contour_kz_integral_weighted(sigma, KernelWeight::natural(sigma), rho, t, z_sum, n)
}

pub fn contour_kz_integral_weighted(
    sigma: Polarization,
    weight: KernelWeight,
    rho: f64,
    t: f64,
    z_sum: f64,
    n: f64,
) -> Result<C64> {
    let kernel = PropagatorKernel::new(sigma, n, rho, t, z_sum)?;
    Ok(C64::new(kernel.residue(weight)?, 0.0))
}

/// `R^L` at any point of the `k_z` plane reachable by the contour.
fn reflection_on_contour(sigma: Polarization, k_par: f64, k_z: C64, side: CutSide, n: f64) -> Result<C64> {
    let k = WaveVector::on_side([k_par, 0.0], k_z, side, n)?;
    Ok(left_amplitudes(sigma, k.k_z(), k.k_z_d(), n).r)
}

/// Direct quadrature of the contour integral along the real axis and the cut
/// detour, without residues. The real axis is cut at `|k_z| = K` with
/// `K |z_sum| = 2000`; the remainder is added from two integrations by parts.
pub fn contour_kz_numeric(
    sigma: Polarization,
    weight: KernelWeight,
    rho: f64,
    t: f64,
    z_sum: f64,
    n: f64,
    tol: f64,
) -> Result<QuadResult<C64>> {
    let kernel = PropagatorKernel::new(sigma, n, rho, t, z_sum)?;
    let kp = kernel.k_par();
    let cut_end = kp * (n * n - 1.0).sqrt() / n;
    let k_max = (2000.0 / z_sum.abs()).max(50.0 * rho);
    let spec = ContourSpec::real_axis_with_cut(cut_end, k_max)?.subdivided(PI / z_sum.abs());
    let mut failure = None;
    let mut res = integrate_contour(
        |kz, side| {
            match reflection_on_contour(sigma, kp, kz, side.unwrap_or(CutSide::Left), n) {
                Ok(r) => (C64::i() * kz * z_sum).exp() * r * weight.at(kp, kz) / (rho * rho + kz * kz),
                Err(e) => {
                    failure.get_or_insert(e);
                    C64::new(0.0, 0.0)
                }
            }
        },
        &spec,
        Tol::new(tol, 0.0),
    );
    if let Some(e) = failure {
        return Err(e);
    }
    // Remainder of the even real-axis integrand g(k) beyond K:
    // 2 int_K^inf cos(k z) g(k) dk ~ 2 [-sin(K z) g(K) / z - cos(K z) g'(K) / z^2]
    let g = |k: f64| -> Result<f64> {
        let kz = C64::new(k, 0.0);
        Ok((reflection_on_contour(sigma, kp, kz, CutSide::Left, n)? * weight.at(kp, kz)).re
            / (rho * rho + k * k))
    };
    let h = 1e-3 * k_max;
    let g0 = g(k_max)?;
    let g1 = (g(k_max + h)? - g(k_max - h)?) / (2.0 * h);
    let (s, c) = (k_max * z_sum).sin_cos();
    res.value += 2.0 * (-s * g0 / z_sum - c * g1 / (z_sum * z_sum));
    res.error += 12.0 * g0.abs() / (k_max * k_max * z_sum.abs().powi(3));
    Ok(res)
}

/// The evanescent contribution computed twice: as the detour of `C` around
/// the cut (`R^L` on both banks) and as an integral over `k_z^d` in
/// `(-Gamma, 0)` of `|T^R|^2`. Returns the absolute difference.
pub fn detour_equivalence_residual(sigma: Polarization, rho: f64, t: f64, z_sum: f64, n: f64) -> Result<f64> {
    let parts = detour_pieces(sigma, KernelWeight::natural(sigma), rho, t, z_sum, n)?;
    Ok((parts.0 - parts.1).norm())
}

/// `(detour of C, k_z^d interval)` for one kernel.
pub fn detour_pieces(
    sigma: Polarization,
    weight: KernelWeight,
    rho: f64,
    t: f64,
    z_sum: f64,
    n: f64,
) -> Result<(C64, C64)> {
    let kernel = PropagatorKernel::new(sigma, n, rho, t, z_sum)?;
    let kp = kernel.k_par();
    let gamma = kp * (n * n - 1.0).sqrt();
    if gamma == 0.0 {
        return Ok((C64::new(0.0, 0.0), C64::new(0.0, 0.0)));
    }
    let integrator = Integrator::new(Tol::new(1e-14, 1e-13));
    let mut failure = None;
    let mut note = |e: Error| {
        failure.get_or_insert(e);
        C64::new(0.0, 0.0)
    };

    let detour = integrator.finite(
        |kappa: f64| {
            let kz = C64::new(0.0, -kappa);
            let common = (kappa * z_sum).exp() * weight.at(kp, kz) / (rho * rho - kappa * kappa);
            let l = reflection_on_contour(sigma, kp, kz, CutSide::Left, n);
            let r = reflection_on_contour(sigma, kp, kz, CutSide::Right, n);
            match (l, r) {
                (Ok(l), Ok(r)) => -C64::i() * (l - r) * common,
                (Err(e), _) | (_, Err(e)) => note(e),
            }
        },
        0.0,
        gamma / n,
    );
    let interval = integrator.finite(
        |kzd: f64| match WaveVector::from_kz_d([kp, 0.0], kzd, n) {
            Ok(k) => {
                let kz = k.k_z();
                let tr = right_amplitudes(sigma, kz, k.k_z_d(), n).t;
                (C64::i() * kz * z_sum).exp() * tr * tr.conj() * weight.at(kp, kz) / (rho * rho + kz * kz)
            }
            Err(e) => note(e),
        },
        -gamma,
        0.0,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    for (what, r) in [("cut detour", &detour), ("evanescent interval", &interval)] {
        if !r.converged {
            return Err(Error::NotConverged {
                what: what.to_string(),
                achieved: r.error,
                requested: 1e-13,
            });
        }
    }
    Ok((detour.value, interval.value))
}

/// Damping-extrapolated checks that the homogeneous terms of the wave
/// equation vanish in the vacuum region.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveEquationResidual {
    /// `int_C dk_z exp(i k_z z_sum) R^L`, with the real axis damped.
    pub reflected: RichardsonResult,
    /// `int dk_z^d exp(i k_z z - i k_z^d z') T^R`, with `z < 0 < z'`.
    pub mixed: RichardsonResult,
}

impl WaveEquationResidual {
    pub fn max(&self) -> f64 {
        self.reflected.estimate.abs().max(self.mixed.estimate.abs())
    }
}

/// Probe used by [`wave_equation_residual`]: `k_par = 1`, `z + z' = -1` for
/// the reflected term and `z = -1`, `z' = 1` for the mixed term. Damping
/// factors `exp(-eps |k|)` with `eps in {d, d/2, d/4}` are extrapolated to
/// zero.
pub fn wave_equation_residual(sigma: Polarization, n: f64, damping: f64) -> Result<WaveEquationResidual> {
    Ok(WaveEquationResidual {
        reflected: reflected_wave_term(sigma, n, 1.0, -1.0, damping)?,
        mixed: mixed_wave_term(sigma, n, 1.0, -1.0, 1.0, damping)?,
    })
}

fn damping_schedule(damping: f64) -> Result<[f64; 3]> {
    if !(damping > 0.0 && damping.is_finite()) {
        return Err(Error::domain(format!("damping must be positive, got {damping}")));
    }
    Ok([damping, damping / 2.0, damping / 4.0])
}

fn extrapolate(samples: &[(f64, f64)], what: &str) -> Result<RichardsonResult> {
    let r = richardson(samples, 1)?;
    if !r.estimate.is_finite() {
        return Err(Error::NotConverged { what: what.to_string(), achieved: f64::INFINITY, requested: 0.0 });
    }
    Ok(r)
}

/// Real part of the damped reflected term (its imaginary part vanishes by
/// the symmetry `k_z -> -k_z` of the integrand).
pub fn reflected_wave_term(sigma: Polarization, n: f64, k_par: f64, z_sum: f64, damping: f64) -> Result<RichardsonResult> {
    check_index(n)?;
    if !(z_sum < 0.0 && k_par > 0.0) {
        return Err(Error::domain("need z + z' < 0 and k_par > 0"));
    }
    let cut_end = k_par * (n * n - 1.0).sqrt() / n;
    let tol = Tol::new(1e-10, 1e-12);
    let half_period = PI / z_sum.abs();
    let mut samples = Vec::new();
    for eps in damping_schedule(damping)? {
        let k_max = 40.0 / eps;
        let real = integrate_along(
            |k: f64| {
                let r = reflection_on_contour(sigma, k_par, C64::new(k, 0.0), CutSide::Left, n)
                    .map(|r| r.re)
                    .unwrap_or(f64::NAN);
                2.0 * (k * z_sum).cos() * r * (-eps * k).exp()
            },
            0.0,
            k_max,
            half_period,
            tol,
        )?;
        let detour = Integrator::new(tol).finite(
            |kappa: f64| {
                let kz = C64::new(0.0, -kappa);
                let l = reflection_on_contour(sigma, k_par, kz, CutSide::Left, n).unwrap_or(C64::new(f64::NAN, 0.0));
                let r = reflection_on_contour(sigma, k_par, kz, CutSide::Right, n).unwrap_or(C64::new(f64::NAN, 0.0));
                (-C64::i() * (l - r) * (kappa * z_sum).exp()).re
            },
            0.0,
            cut_end,
        );
        let detour = detour.require("cut detour", tol)?;
        samples.push((eps, real + detour.value));
    }
    extrapolate(&samples, "reflected wave term")
}

/// Real part of the damped mixed term `int dk_z^d exp(i k_z z - i k_z^d z') T^R`
/// for `z < 0 < z'`; the imaginary part is returned through the same
/// extrapolation applied separately, and the estimate is the modulus.
pub fn mixed_wave_term(
    sigma: Polarization,
    n: f64,
    k_par: f64,
    z: f64,
    z_prime: f64,
    damping: f64,
) -> Result<RichardsonResult> {
    check_index(n)?;
    if !(z < 0.0 && z_prime > 0.0 && k_par > 0.0) {
        return Err(Error::domain("need z < 0 < z' and k_par > 0"));
    }
    let tol = Tol::new(1e-10, 1e-12);
    let freq = (z / n).abs() + z_prime.abs();
    let half_period = PI / freq;
    let gamma = k_par * (n * n - 1.0).sqrt();
    let mut re_samples = Vec::new();
    let mut im_samples = Vec::new();
    for eps in damping_schedule(damping)? {
        let k_max = 40.0 / eps;
        let f = |kzd: f64| -> C64 {
            match WaveVector::from_kz_d([k_par, 0.0], kzd, n) {
                Ok(k) => {
                    let tr = right_amplitudes(sigma, k.k_z(), k.k_z_d(), n).t;
                    (C64::i() * (k.k_z() * z - kzd * z_prime)).exp() * tr * (-eps * kzd.abs()).exp()
                }
                Err(_) => C64::new(f64::NAN, 0.0),
            }
        };
        let mut total = C64::new(0.0, 0.0);
        let pieces: [(f64, f64); 4] = [(-k_max, -gamma), (-gamma, 0.0), (0.0, gamma), (gamma, k_max)];
        for (a, b) in pieces {
            if b > a {
                let re = integrate_along(|x| f(x).re, a, b, half_period, tol)?;
                let im = integrate_along(|x| f(x).im, a, b, half_period, tol)?;
                total += C64::new(re, im);
            }
        }
        re_samples.push((eps, total.re));
        im_samples.push((eps, total.im));
    }
    let re = extrapolate(&re_samples, "mixed wave term (real part)")?;
    let im = extrapolate(&im_samples, "mixed wave term (imaginary part)")?;
    let mut out = re.clone();
    out.estimate = re.estimate.hypot(im.estimate);
    out.error = re.error.hypot(im.error);
    out.monotone = re.monotone && im.monotone;
    Ok(out)
}

fn integrate_along<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, piece: f64, tol: Tol) -> Result<f64> {
    let count = ((b - a) / piece).ceil().max(1.0) as usize;
    let points: Vec<f64> = (0..=count).map(|i| if i == count { b } else { a + (b - a) * i as f64 / count as f64 }).collect();
    let r = Integrator::new(tol).with_max_segments(4 * count + 1000).partitioned(&mut f, &points);
    if !r.value.is_finite() {
        return Err(Error::domain("integrand left its domain"));
    }
    Ok(r.require("damped oscillatory integral", tol)?.value)
}

/// Medium part of the electrostatic Green function at `x = x' = (0, 0, -a)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StaticGreenValue {
    pub n: f64,
    pub a: f64,
    pub value: f64,
}

fn check_static(n: f64, a: f64) -> Result<()> {
    check_index(n)?;
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::domain(format!("distance a must be positive, got {a}")));
    }
    Ok(())
}

/// `-(n^2 - 1) / (n^2 + 1) / (8 pi a)`.
pub fn static_green_closed(n: f64, a: f64) -> Result<StaticGreenValue> {
    check_static(n, a)?;
    let value = -crate::fresnel::tm_static_reflection(n) / (8.0 * PI * a);
    Ok(StaticGreenValue { n, a, value })
}

/// The same quantity from its Fourier representation
/// `-(R0 / 4 pi^2) int_0^inf dk_par int dk_z k_par exp(-2 i a k_z) / (k_par^2 + k_z^2)`:
/// the `k_z` integral is closed below (residue at `-i k_par`) and the
/// `k_par` integral is done by quadrature.
pub fn static_green_numeric(n: f64, a: f64) -> Result<StaticGreenValue> {
    check_static(n, a)?;
    let r0 = crate::fresnel::tm_static_reflection(n);
    let tol = Tol::new(1e-15, 1e-12);
    let kz_residue = |kp: f64| {
        // -2 pi i * k_par exp(-2 i a (-i k_par)) / (-2 i k_par)
        let res = C64::new(0.0, -2.0 * PI) * kp * (-2.0 * a * kp).exp() / C64::new(0.0, -2.0 * kp);
        res.re
    };
    let r = Integrator::new(tol).decaying(kz_residue, 0.0, 2.0 * a).require("static Green function", tol)?;
    Ok(StaticGreenValue { n, a, value: -r0 / (4.0 * PI * PI) * r.value })
}

/// Largest kernel magnitude over a set of `(rho, t, z_sum)` points, for all
/// weights the mode supports. Identically zero at `n = 1`.
pub fn free_limit_residual(sigma: Polarization, n: f64, samples: &[(f64, f64, f64)]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &(rho, t, z_sum) in samples {
        let kernel = PropagatorKernel::new(sigma, n, rho, t, z_sum)?;
        worst = worst.max(kernel.residue(KernelWeight::Unit)?.abs());
        if t > 0.0 {
            worst = worst.max(kernel.residue(KernelWeight::Transverse)?.abs());
        }
    }
    Ok(worst)
}

/// Kernel of an ideal conductor, where only left-incident modes survive and
/// `R^L` is the constant `-1` (TE, C, G) or `+1` (TM). Computed from the
/// elementary integrals `int exp(ikz)/(q^2 + k^2) dk = pi exp(-q|z|) / q`.
pub fn perfect_kernel(sigma: Polarization, weight: KernelWeight, rho: f64, t: f64, z_sum: f64) -> Result<f64> {
    PropagatorKernel::new(sigma, 1.0, rho, t, z_sum)?;
    let r = crate::fresnel::perfect_limit_set().r_left[match sigma {
        Polarization::TE => 0,
        Polarization::TM => 1,
        Polarization::C => 2,
        Polarization::G => 3,
    }];
    let scalar = |q: f64| PI * (q * z_sum).exp() / q;
    match weight {
        KernelWeight::Unit => Ok(r * scalar(rho)),
        KernelWeight::Transverse => {
            if t == 0.0 {
                return Err(Error::CoincidentPoles);
            }
            let kp = rho * (1.0 - t * t).sqrt();
            // k_par^2 / ((k_par^2 + k^2)(rho^2 + k^2)) in partial fractions
            Ok(r * kp * kp / (rho * rho - kp * kp) * (scalar(kp) - scalar(rho)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_kernel_vanishes() {
        for sigma in Polarization::TRANSVERSE {
            let v = contour_kz_integral(sigma, 1.0, 0.5, -2.0, 1.0).unwrap();
            assert_eq!(v.norm(), 0.0);
        }
    }

    #[test]
    fn tm_rejects_coincident_poles() {
        assert!(matches!(contour_kz_integral(Polarization::TM, 1.0, 0.0, -1.0, 2.0), Err(Error::CoincidentPoles)));
        assert!(contour_kz_integral(Polarization::TE, 1.0, 0.0, -1.0, 2.0).is_ok());
    }

    #[test]
    fn domain_checks() {
        assert!(contour_kz_integral(Polarization::TE, 1.0, 0.5, 0.0, 2.0).is_err());
        assert!(contour_kz_integral(Polarization::TE, -1.0, 0.5, -1.0, 2.0).is_err());
        assert!(static_green_closed(2.0, 0.0).is_err());
    }

    #[test]
    fn residues_match_contour_quadrature() {
        for sigma in Polarization::TRANSVERSE {
            let closed = contour_kz_integral(sigma, 1.0, 0.5, -2.0, 2.0).unwrap();
            let numeric =
                contour_kz_numeric(sigma, KernelWeight::natural(sigma), 1.0, 0.5, -2.0, 2.0, 1e-12).unwrap();
            assert!((closed - numeric.value).norm() < 1e-9, "{sigma}: {closed} vs {}", numeric.value);
        }
    }

    #[test]
    fn cut_detour_matches_evanescent_interval() {
        for sigma in Polarization::TRANSVERSE {
            assert!(detour_equivalence_residual(sigma, 1.0, 0.3, -1.0, 2.0).unwrap() < 1e-10);
            assert!(detour_equivalence_residual(sigma, 0.5, 0.9, -4.0, 5.0).unwrap() < 1e-10);
            assert_eq!(detour_equivalence_residual(sigma, 1.0, 0.3, -1.0, 1.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn static_values() {
        let v = static_green_closed(2.0, 1.0).unwrap().value;
        assert!((v + 0.6 / (8.0 * PI)).abs() < 1e-16);
        assert_eq!(static_green_closed(1.0, 1.0).unwrap().value, 0.0);
        let big = static_green_closed(1e8, 1.0).unwrap().value;
        assert!((big + 1.0 / (8.0 * PI)).abs() < 1e-15);
        let num = static_green_numeric(2.0, 1.0).unwrap().value;
        assert!((num / v - 1.0).abs() < 1e-8);
    }

    #[test]
    fn perfect_limit_kernel() {
        for sigma in Polarization::TRANSVERSE {
            let w = KernelWeight::natural(sigma);
            let p = perfect_kernel(sigma, w, 1.0, 0.5, -2.0).unwrap();
            let k = contour_kz_integral(sigma, 1.0, 0.5, -2.0, 1e7).unwrap().re;
            assert!((p - k).abs() < 1e-6, "{sigma}: {p} vs {k}");
        }
    }
}

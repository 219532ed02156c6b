//! Pointwise integrands of the Wick-rotated self-energy after the `k_z`
//! residues and the azimuthal average, in the variables `t = cos(theta)` and
//! `xi = rho / (2 p0 t)`.
//!
//! With `X = 4 p0 a`, `w = sqrt(1 - t^2)`, `e1 = exp(-X t xi)` and
//! `e2 = exp(-X t w xi)`, every coefficient is
//! `c = -(8 p0 a / pi) int_0^1 dt int_0^inf dxi xi / (xi^2 + 1) F(t, xi)`
//! where `F` has one component per gamma structure, ordered
//! `[gamma^0 p0, gamma_par . p_par, gamma^3 p_z]`.

use crate::fresnel::{profile_difference_quotient, reflection_profile, tm_static_reflection};
use crate::kinematics::Polarization;
use crate::quad::aux_fg;
use crate::Result;

use super::{Reflector, TmPiece};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Integrand {
    Te,
    /// Both TM residues evaluated together.
    Tm,
    TmPiece(TmPiece),
}

impl Integrand {
    pub(crate) fn polarization(self) -> Polarization {
        match self {
            Integrand::Te => Polarization::TE,
            _ => Polarization::TM,
        }
    }

    /// Whether the slower exponential `e2` appears.
    pub(crate) fn has_second_pole(self) -> bool {
        matches!(self, Integrand::Tm | Integrand::TmPiece(TmPiece::C) | Integrand::TmPiece(TmPiece::D))
    }
}

/// Reflection profile pieces at one `t`: `R(t)`, `R(0)` and `(R(t) - R(0)) / t^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProfilePoint {
    pub r: f64,
    pub r0: f64,
    pub quotient: f64,
}

pub fn profile_point(sigma: Polarization, reflector: Reflector, t: f64) -> Result<ProfilePoint> {
    match reflector {
        Reflector::Dielectric(n) => {
            let r = reflection_profile(sigma, t, n)?;
            let r0 = match sigma {
                Polarization::TE => 0.0,
                _ => tm_static_reflection(n),
            };
            Ok(ProfilePoint { r, r0, quotient: profile_difference_quotient(sigma, t, n)? })
        }
        Reflector::Perfect => {
            let r = if sigma == Polarization::TE { -1.0 } else { 1.0 };
            Ok(ProfilePoint { r, r0: r, quotient: 0.0 })
        }
    }
}

/// `(e1 - w e2) / t^2` without the cancellation at small `t`.
pub fn fused_difference(x: f64, t: f64, xi: f64) -> f64 {
    let w = (1.0 - t * t).max(0.0).sqrt();
    let a = x * t * xi;
    let e1 = (-a).exp();
    let delta = a * t * t / (1.0 + w);
    if delta > 1.0 {
        return (e1 - w * (-a * w).exp()) / (t * t);
    }
    // e1 - w e2 = e1 (1 - w e^delta) and 1 - w = t^2 / (1 + w)
    let ratio = if delta == 0.0 { 1.0 } else { delta.exp_m1() / delta };
    e1 * (1.0 - w * ratio * x * xi * t) / (1.0 + w)
}

/// `F(t, xi)` times the weight `xi / (xi^2 + 1)`. The profile is passed in
/// so that callers integrating over `xi` at fixed `t` evaluate it once.
pub fn integrand_with(kind: Integrand, prof: &ProfilePoint, x: f64, t: f64, xi: f64) -> [f64; 3] {
    let weight = xi / (xi * xi + 1.0);
    let w = (1.0 - t * t).max(0.0).sqrt();
    let e1 = (-x * t * xi).exp();
    let e2 = || (-x * t * w * xi).exp();
    let ProfilePoint { r, r0, quotient: dq } = *prof;
    let f = match kind {
        Integrand::Te => [2.0 * t * t * r * e1, -r * e1, 0.0],
        Integrand::Tm => {
            let p = dq * e1 + r0 * fused_difference(x, t, xi);
            [-2.0 * (2.0 - t * t) * r * e1 + 4.0 * w * r0 * e2(), p, 2.0 * (p - r * e1)]
        }
        Integrand::TmPiece(TmPiece::A) => [2.0 * (t * t - 2.0) * r * e1, 0.0, -2.0 * r * e1],
        Integrand::TmPiece(TmPiece::B) => [0.0, dq * e1, 2.0 * dq * e1],
        Integrand::TmPiece(TmPiece::C) => {
            let fd = r0 * fused_difference(x, t, xi);
            [0.0, fd, 2.0 * fd]
        }
        Integrand::TmPiece(TmPiece::D) => [4.0 * r0 * w * e2(), 0.0, 0.0],
    };
    f.map(|v| v * weight)
}

pub fn integrand(kind: Integrand, reflector: Reflector, x: f64, t: f64, xi: f64) -> Result<[f64; 3]> {
    let prof = profile_point(kind.polarization(), reflector, t)?;
    Ok(integrand_with(kind, &prof, x, t, xi))
}

/// The `xi` integral done in closed form: `int xi e^{-y xi} / (xi^2 + 1) = g(y)`.
/// The fused difference is taken directly here, so this form is only meant
/// for `t` away from 0.
pub fn reduced_integrand(kind: Integrand, reflector: Reflector, x: f64, t: f64) -> Result<[f64; 3]> {
    let prof = profile_point(kind.polarization(), reflector, t)?;
    let ProfilePoint { r, r0, quotient: dq } = prof;
    let w = (1.0 - t * t).max(0.0).sqrt();
    let g1 = aux_fg(x * t)?.1;
    let wg2 = if w > 0.0 { w * aux_fg(x * t * w)?.1 } else { 0.0 };
    let fused = (g1 - wg2) / (t * t);
    Ok(match kind {
        Integrand::Te => [2.0 * t * t * r * g1, -r * g1, 0.0],
        Integrand::Tm => {
            let p = dq * g1 + r0 * fused;
            [-2.0 * (2.0 - t * t) * r * g1 + 4.0 * r0 * wg2, p, 2.0 * (p - r * g1)]
        }
        Integrand::TmPiece(TmPiece::A) => [2.0 * (t * t - 2.0) * r * g1, 0.0, -2.0 * r * g1],
        Integrand::TmPiece(TmPiece::B) => [0.0, dq * g1, 2.0 * dq * g1],
        Integrand::TmPiece(TmPiece::C) => [0.0, r0 * fused, 2.0 * r0 * fused],
        Integrand::TmPiece(TmPiece::D) => [4.0 * r0 * wg2, 0.0, 0.0],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fused_matches_direct_difference() {
        for &(x, t, xi) in &[(400.0f64, 0.3f64, 0.2f64), (40.0, 0.05, 1.0), (4.0, 0.9, 3.0), (400.0, 1e-3, 0.5)] {
            let w: f64 = (1.0 - t * t).sqrt();
            let direct = ((-x * t * xi).exp() - w * (-x * t * w * xi).exp()) / (t * t);
            let fused = fused_difference(x, t, xi);
            assert!((fused - direct).abs() < 1e-10 * direct.abs().max(1e-3), "{x} {t} {xi}: {fused} {direct}");
        }
        // t -> 0 limit: e^{-a}/2 - ... stays finite
        let small = fused_difference(400.0, 1e-9, 0.5);
        assert!(small.is_finite() && (small - fused_difference(400.0, 1e-8, 0.5)).abs() < 1e-5);
    }

    #[test]
    fn te_integrand_by_hand() {
        // n = 2, t = 0.5, xi = 1, X = 1: s = sqrt(1.75)
        let s = 1.75f64.sqrt();
        let r = (1.0 - s) / (1.0 + s);
        let e1 = (-0.5f64).exp();
        let f = integrand(Integrand::Te, Reflector::Dielectric(2.0), 1.0, 0.5, 1.0).unwrap();
        assert!((f[0] - 0.5 * 2.0 * 0.25 * r * e1).abs() < 1e-15);
        assert!((f[1] + 0.5 * r * e1).abs() < 1e-15);
        assert!(f[0] < 0.0 && f[1] > 0.0 && f[2] == 0.0);
    }

    #[test]
    fn pieces_add_up_pointwise() {
        let refl = Reflector::Dielectric(2.0);
        for &(t, xi) in &[(0.01, 0.3), (0.4, 1.0), (0.95, 5.0)] {
            let full = integrand(Integrand::Tm, refl, 40.0, t, xi).unwrap();
            let mut sum = [0.0; 3];
            for p in TmPiece::ALL {
                let v = integrand(Integrand::TmPiece(p), refl, 40.0, t, xi).unwrap();
                for k in 0..3 {
                    sum[k] += v[k];
                }
            }
            for k in 0..3 {
                assert!((full[k] - sum[k]).abs() < 1e-14 * (1.0 + full[k].abs()));
            }
        }
    }
}

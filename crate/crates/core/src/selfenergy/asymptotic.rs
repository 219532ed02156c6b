//! Large-distance expansion of the self-energy coefficients in `1 / (p0 a)`.
//!
//! With `N = n^2`, `c = n^2 - 1`, `R0 = c / (N + 1)` the `t` integrals that
//! appear are elementary. They are collected in [`TIntegrals`] and checked
//! against one-dimensional quadrature of their defining integrands.

use std::f64::consts::PI;

use crate::fresnel::{profile_curvature, profile_difference_quotient, reflection_profile, tm_static_reflection};
use crate::kinematics::{check_index, Polarization};
use crate::quad::{aux_fg, Integrator, Tol};
use crate::Result;

use super::{check_p0a, SigmaCoefficients, TmPiece};

/// Below this distance from `n = 1` the closed forms lose digits to
/// cancellation and the next-order coefficients are taken from a quadratic
/// through the origin fitted just above it.
pub const NEAR_VACUUM: f64 = 1e-4;

/// Elementary `t` integrals over `[0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TIntegrals {
    /// `int R_TE`
    pub j1: f64,
    /// `int R_TE / t^2`
    pub j2: f64,
    /// `int R_TM`
    pub k1: f64,
    /// `int (R_TM - R0) / t^2`
    pub ia_z: f64,
    /// `int [(t^2 - 2) R_TM + 2 R0] / t^2`
    pub ia_0: f64,
    /// `int [(R_TM - R0) / t^2 - R''(0) / 2] / t^2`
    pub ib: f64,
    /// `R_TM''(0)`
    pub curvature: f64,
}

impl TIntegrals {
    pub fn to_array(&self) -> [f64; 6] {
        [self.j1, self.j2, self.k1, self.ia_z, self.ia_0, self.ib]
    }
}

pub fn t_integrals(n: f64) -> Result<TIntegrals> {
    check_index(n)?;
    let curvature = profile_curvature(Polarization::TM, n)?;
    if n == 1.0 {
        return Ok(TIntegrals { j1: 0.0, j2: 0.0, k1: 0.0, ia_z: 0.0, ia_0: 0.0, ib: 0.0, curvature });
    }
    let nn = n * n;
    let c = nn - 1.0;
    let sc = c.sqrt();
    let l = sc.asinh();
    let at = ((n - 1.0) / (nn + 1.0).sqrt()).atanh();
    let j1 = -(n + 3.0) / (n + 1.0) + 2.0 * l / sc;
    let j2 = -(n - 1.0) * (2.0 * n + 1.0) / (3.0 * (n + 1.0));
    let ia_z = 2.0 * nn / ((nn + 1.0) * (n + 1.0)) - 4.0 * nn * nn * at / ((nn + 1.0).powf(1.5) * c);
    let k1 = -1.0 + 2.0 * nn * l / sc - 4.0 * nn * nn * at / (c * (nn + 1.0).sqrt());
    let ia_0 = k1 - 2.0 * ia_z;
    let beta = (nn + 1.0) / c;
    let alpha = beta.sqrt();
    let v1 = sc / (n + 1.0);
    let k = 1.0 - beta + beta * beta;
    let r = 1.0 - beta - beta * beta + beta * beta * beta;
    let ib = -(nn * sc / (2.0 * (nn + 1.0) * beta)) * (-beta * v1.powi(3) / 3.0 - k * v1 + r * at / alpha);
    Ok(TIntegrals { j1, j2, k1, ia_z, ia_0, ib, curvature })
}

/// The same integrals by adaptive quadrature of cancellation-free integrands.
pub fn t_integrals_numeric(n: f64, tol: Tol) -> Result<TIntegrals> {
    check_index(n)?;
    let nn = n * n;
    let c = nn - 1.0;
    let curvature = profile_curvature(Polarization::TM, n)?;
    let integ = Integrator::new(tol);
    let run = |what: &str, f: &dyn Fn(f64) -> f64| -> Result<f64> {
        Ok(integ.partitioned(f, &[0.0, 0.5, 1.0]).require(what, tol)?.value)
    };
    let j1 = run("int R_TE", &|t| reflection_profile(Polarization::TE, t, n).unwrap())?;
    let j2 = run("int R_TE / t^2", &|t| profile_difference_quotient(Polarization::TE, t, n).unwrap())?;
    let k1 = run("int R_TM", &|t| reflection_profile(Polarization::TM, t, n).unwrap())?;
    let ia_z = run("int (R_TM - R0) / t^2", &|t| profile_difference_quotient(Polarization::TM, t, n).unwrap())?;
    let ia_0 = run("A-piece t integral", &|t| {
        // [(t^2 - 2) R + 2 R0] / t^2 = R - 2 (R - R0) / t^2
        reflection_profile(Polarization::TM, t, n).unwrap()
            - 2.0 * profile_difference_quotient(Polarization::TM, t, n).unwrap()
    })?;
    let ib = run("B-piece t integral", &|t| {
        let s = (c * t * t + 1.0).sqrt();
        nn * c * c * ((nn + 1.0) / (1.0 + s) + 1.0) / ((nn + 1.0).powi(2) * (1.0 + s) * (nn + s))
    })?;
    Ok(TIntegrals { j1, j2, k1, ia_z, ia_0, ib, curvature })
}

/// Leading radiative coefficients (TM only; TE starts one order later).
pub fn sigma_leading(n: f64) -> Result<SigmaCoefficients> {
    check_index(n)?;
    let nn = n * n;
    let d = (nn + 1.0) * (nn + 1.0);
    Ok(SigmaCoefficients::radiative(0.0, nn * (nn - 1.0) / d, 2.0 * (2.0 * nn * nn - nn - 1.0) / d))
}

/// Leading radiative part together with the Coulomb term.
pub fn sigma_total_leading(n: f64) -> Result<SigmaCoefficients> {
    let mut s = sigma_leading(n)?;
    s.c_coulomb = tm_static_reflection(n);
    Ok(s)
}

/// TE coefficients through order `1 / (p0 a)`; they have no `O(1)` part.
pub fn sigma_te_asympt(p0a: f64, n: f64) -> Result<SigmaCoefficients> {
    check_p0a(p0a)?;
    let ti = t_integrals(n)?;
    Ok(SigmaCoefficients::radiative(-ti.j1 / (PI * p0a), ti.j2 / (2.0 * PI * p0a), 0.0))
}

/// Each TM piece through order `1 / (p0 a)`.
pub fn tm_asympt_pieces(p0a: f64, n: f64) -> Result<[SigmaCoefficients; 4]> {
    check_p0a(p0a)?;
    let ti = t_integrals(n)?;
    let r0 = tm_static_reflection(n);
    let p = PI * p0a;
    let half_curv = ti.curvature / 2.0;
    let a = SigmaCoefficients::radiative(4.0 * r0 - (2.0 * r0 + ti.ia_0) / p, 0.0, 2.0 * r0 - (r0 - ti.ia_z) / p);
    let b_next = ti.ib - half_curv;
    let b = SigmaCoefficients::radiative(0.0, -half_curv - b_next / (2.0 * p), -ti.curvature - b_next / p);
    let c = SigmaCoefficients::radiative(0.0, r0 / (6.0 * p), r0 / (3.0 * p));
    let d = SigmaCoefficients::radiative(-4.0 * r0, 0.0, 0.0);
    Ok([a, b, c, d])
}

pub fn tm_asympt_piece(piece: TmPiece, p0a: f64, n: f64) -> Result<SigmaCoefficients> {
    let all = tm_asympt_pieces(p0a, n)?;
    Ok(all[TmPiece::ALL.iter().position(|&p| p == piece).unwrap()])
}

pub fn sigma_tm_asympt(p0a: f64, n: f64) -> Result<SigmaCoefficients> {
    Ok(tm_asympt_pieces(p0a, n)?.into_iter().sum())
}

/// Radiative coefficients through order `1 / (p0 a)`.
pub fn sigma_asympt(p0a: f64, n: f64) -> Result<SigmaCoefficients> {
    Ok(sigma_te_asympt(p0a, n)? + sigma_tm_asympt(p0a, n)?)
}

fn next_bracket_closed(n: f64) -> Result<SigmaCoefficients> {
    let ti = t_integrals(n)?;
    let r0 = tm_static_reflection(n);
    let b_next = ti.ib - ti.curvature / 2.0;
    Ok(SigmaCoefficients::radiative(
        -ti.j1 - (2.0 * r0 + ti.ia_0),
        ti.j2 / 2.0 - b_next / 2.0 + r0 / 6.0,
        -(r0 - ti.ia_z) - b_next + r0 / 3.0,
    ))
}

/// Next-to-leading radiative term as the bracket multiplying
/// `-e^2 / (32 pi^2 (p0 a)^2)`, one entry per gamma structure (`c0` for
/// `gamma^0 p0`). In the coefficient normalization it contributes
/// `bracket / (pi p0 a)`.
pub fn sigma_next(n: f64) -> Result<SigmaCoefficients> {
    check_index(n)?;
    let d = n - 1.0;
    if d == 0.0 {
        return Ok(SigmaCoefficients::default());
    }
    if d < NEAR_VACUUM {
        let (d1, d2) = (NEAR_VACUUM, 2.0 * NEAR_VACUUM);
        let b1 = next_bracket_closed(1.0 + d1)?.to_array();
        let b2 = next_bracket_closed(1.0 + d2)?.to_array();
        // b(d) = alpha d + beta d^2 through both points
        let fit = |y1: f64, y2: f64| {
            let beta = (y2 / d2 - y1 / d1) / (d2 - d1);
            let alpha = y1 / d1 - beta * d1;
            alpha * d + beta * d * d
        };
        return Ok(SigmaCoefficients::radiative(fit(b1[0], b2[0]), fit(b1[1], b2[1]), fit(b1[2], b2[2])));
    }
    next_bracket_closed(n)
}

/// The next-to-leading bracket in the closed form that circulates in the
/// literature, kept for comparison only. It disagrees with both the sum of
/// the piecewise expansions and with extrapolated quadrature; the two are
/// related by `printed = -true - R0 (2, 0, 1)`.
pub fn sigma_next_printed(n: f64) -> Result<SigmaCoefficients> {
    check_index(n)?;
    if n == 1.0 {
        return Ok(SigmaCoefficients::default());
    }
    let nn = n * n;
    let c = nn - 1.0;
    let at = ((n - 1.0) / (nn + 1.0).sqrt()).atanh();
    let b0 = 2.0
        * ((nn + 1.0) / c.sqrt() * (n + c.sqrt()).ln()
            - (n.powi(3) + 4.0 * nn + n + 2.0) / ((nn + 1.0) * (n + 1.0))
            - 2.0 * nn * nn / (nn + 1.0).powf(1.5) * at);
    let bpar = nn * (2.0 * nn * nn + 3.0 * nn - 3.0 * n + 1.0) / (3.0 * (n + 1.0) * (nn + 1.0).powi(2))
        - 2.0 * nn * nn / (c * (nn + 1.0).powf(2.5)) * at;
    let bz = (2.0 * n.powi(6) + n.powi(5) - 3.0 * n.powi(4) - 4.0 * n.powi(3) - 4.0 * nn + n + 1.0)
        / (3.0 * (n + 1.0) * (nn + 1.0).powi(2))
        + 4.0 * n.powi(6) / (c * (nn + 1.0).powf(2.5)) * at;
    Ok(SigmaCoefficients::radiative(b0, bpar, bz))
}

/// Radiative coefficients of the ideal conductor, where `R_TE = -1` and
/// `R_TM = 1` are fixed before the expansion: TE gives `c_par = -1`, TM
/// gives `c_z = 2` (pieces A and D; B is absent and C is higher order).
pub fn sigma_perfect(p0a: f64) -> Result<SigmaCoefficients> {
    check_p0a(p0a)?;
    Ok(SigmaCoefficients::radiative(0.0, -1.0, 2.0))
}

/// Same, with the Coulomb term of the ideal conductor.
pub fn sigma_perfect_total(p0a: f64) -> Result<SigmaCoefficients> {
    let mut s = sigma_perfect(p0a)?;
    s.c_coulomb = 1.0;
    Ok(s)
}

/// `lim_{n -> inf}` of the leading coefficients including Coulomb.
pub fn sigma_total_leading_infinite_n() -> SigmaCoefficients {
    SigmaCoefficients { c0: 0.0, c_par: 1.0, c_z: 4.0, c_coulomb: 1.0 }
}

/// Part of piece A with `R(t)` replaced by `R(0)` in the `gamma^0 p0 (-4)`
/// and `gamma^3 p_z` terms, where the `t` integral is immediate and the
/// `xi` integral is `pi/2 - f(X)` with the auxiliary function `f`.
pub fn a_first_part(p0a: f64, n: f64) -> Result<SigmaCoefficients> {
    check_p0a(p0a)?;
    check_index(n)?;
    let r0 = tm_static_reflection(n);
    let f = aux_fg(4.0 * p0a)?.0;
    let s = 2.0 / PI * (PI / 2.0 - f);
    Ok(SigmaCoefficients::radiative(4.0 * r0 * s, 0.0, 2.0 * r0 * s))
}

/// Part of piece D after `v = t sqrt(1 - t^2)` with the square root of
/// `1 - 4 v^2` dropped: `-(8/pi) R0 (pi/2 - f(2 p0 a))` on `gamma^0 p0`.
pub fn d_first_part(p0a: f64, n: f64) -> Result<SigmaCoefficients> {
    check_p0a(p0a)?;
    check_index(n)?;
    let r0 = tm_static_reflection(n);
    let f = aux_fg(2.0 * p0a)?.0;
    Ok(SigmaCoefficients::radiative(-(8.0 / PI) * r0 * (PI / 2.0 - f), 0.0, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_t_integrals_match_quadrature() {
        for &n in &[1.5, 2.0, 5.0, 1.01] {
            let a = t_integrals(n).unwrap().to_array();
            let b = t_integrals_numeric(n, Tol::new(1e-15, 1e-13)).unwrap_or_else(|e| panic!("{n}: {e}")).to_array();
            for k in 0..6 {
                let tol = if n < 1.1 { 1e-10 } else { 1e-12 };
                assert!((a[k] - b[k]).abs() < tol, "n={n} k={k}: {} {}", a[k], b[k]);
            }
        }
    }

    #[test]
    fn leading_sum_is_rational() {
        for &n in &[1.3, 2.0, 7.0] {
            let s = sigma_tm_asympt(1e300, n).unwrap();
            let l = sigma_leading(n).unwrap();
            assert!(s.max_abs_diff(&l) < 1e-14);
        }
        let l = sigma_leading(2.0).unwrap();
        assert!((l.c_par - 0.48).abs() < 1e-15 && (l.c_z - 2.16).abs() < 1e-15);
    }

    #[test]
    fn printed_and_true_next_order_relation() {
        for &n in &[1.5, 2.0, 5.0] {
            let t = sigma_next(n).unwrap();
            let p = sigma_next_printed(n).unwrap();
            let r0 = tm_static_reflection(n);
            assert!((t.c0 + p.c0 + 2.0 * r0).abs() < 1e-12);
            assert!((t.c_par + p.c_par).abs() < 1e-12);
            assert!((t.c_z + p.c_z + r0).abs() < 1e-12);
        }
    }

    #[test]
    fn next_order_vanishes_near_vacuum() {
        let mut prev = sigma_next(1.0 + 2e-4).unwrap();
        for &d in &[9e-5, 5e-5, 1e-6, 1e-9] {
            let s = sigma_next(1.0 + d).unwrap();
            assert!(s.max_abs() < 4.0 * d, "{d} {s:?}");
            assert!(s.max_abs() < prev.max_abs());
            prev = s;
        }
        // continuity across the switch
        let below = sigma_next(1.0 + NEAR_VACUUM * (1.0 - 1e-9)).unwrap();
        let above = sigma_next(1.0 + NEAR_VACUUM * (1.0 + 1e-9)).unwrap();
        assert!(below.max_abs_diff(&above) < 1e-11);
    }

    #[test]
    fn first_parts_have_the_right_limits() {
        let a = a_first_part(1e8, 2.0).unwrap();
        assert!((a.c0 - 2.4).abs() < 1e-8 && (a.c_z - 1.2).abs() < 1e-8);
        let d = d_first_part(1e8, 2.0).unwrap();
        assert!((d.c0 + 2.4).abs() < 1e-8);
    }
}

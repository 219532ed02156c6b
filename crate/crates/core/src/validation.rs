//! Self-checks shared by the acceptance test target and `hsqed verify`.
//!
//! Each criterion returns a [`CriterionReport`] with a deterministic detail
//! string (timings are kept separately), so two runs with the same seed
//! produce identical reports.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dirac::{
    gamma_triple, gammas, max_abs, phi_average, phi_average_numeric, spinor_residuals, FourMomentum,
};
use crate::fresnel::{identity_expected, identity_residuals};
use crate::greens::{detour_equivalence_residual, static_green_closed, static_green_numeric};
use crate::kinematics::{make_wavevector, CutSide, MediumParams, Polarization, WaveVector};
use crate::quad::{richardson, Tol};
use crate::selfenergy::*;
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub seed: u64,
    /// Negative control: corrupt one oracle so that its criterion fails.
    pub inject_bug: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 20240601, inject_bug: false }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriterionReport {
    pub id: String,
    pub title: String,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        format!(
            "[{}] {:>3} {} ({:.2} s): {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

type Check = fn(&VerifyConfig) -> Result<(bool, String)>;

/// `(id, title, check)` for every criterion, acceptance criteria first.
pub fn criteria() -> Vec<(&'static str, &'static str, Check)> {
    vec![
        ("1", "Fresnel identities on 1000 + 1000 seeded wave vectors", fresnel_identities as Check),
        ("2", "image potential from the static Green function", image_potential),
        ("3", "leading TM coefficients and first-order convergence", leading_tm),
        ("4", "next-to-leading order by Richardson extrapolation", next_to_leading),
        ("5", "TE quadrature against its expansion", te_asymptotics),
        ("6", "non-commuting perfect-reflector limits", noncommuting_limits),
        ("7", "split pieces A+B+C+D against the fused TM integral", split_consistency),
        ("8", "Dirac algebra, spinors and azimuthal averages", dirac_suite),
        ("9", "cut detour against the evanescent interval", detour_equivalence),
        ("10", "rest-frame shift equals the image-charge value", rest_frame_shift),
        ("E1", "t -> -t fold of the TM integrand", parity_fold),
        ("E2", "Coulomb shift through the static Green function", coulomb_routes),
        ("E3", "closed-form t integrals against quadrature", t_integral_forms),
        ("E4", "TM pieces against their expansions", tm_piece_asymptotics),
        ("E5", "coefficients vanish linearly as n -> 1", vacuum_continuity),
        ("E6", "ideal-conductor quadrature approaches (-1, 2)", perfect_quadrature),
    ]
}

pub fn run_criterion(id: &str, cfg: &VerifyConfig) -> Option<CriterionReport> {
    let (id, title, check) = criteria().into_iter().find(|c| c.0 == id)?;
    Some(run_one(id, title, check, cfg))
}

fn run_one(id: &str, title: &str, check: Check, cfg: &VerifyConfig) -> CriterionReport {
    let start = Instant::now();
    let (passed, detail) = match check(cfg) {
        Ok(r) => r,
        Err(e) => (false, format!("error: {e}")),
    };
    CriterionReport { id: id.to_string(), title: title.to_string(), passed, detail, elapsed: start.elapsed() }
}

pub fn run_all(cfg: &VerifyConfig) -> Vec<CriterionReport> {
    criteria().into_iter().map(|(id, title, check)| run_one(id, title, check, cfg)).collect()
}

/// Deviation of the printed next-to-leading bracket from extrapolated
/// quadrature at `n`, for reporting (not a pass/fail criterion).
pub fn printed_next_order_deviation(n: f64) -> Result<[f64; 3]> {
    let est = extrapolated_next(n)?;
    let printed = sigma_next_printed(n)?;
    Ok([est[0] - printed.c0, est[1] - printed.c_par, est[2] - printed.c_z])
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

fn fresnel_identities(cfg: &VerifyConfig) -> Result<(bool, String)> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut worst_real: f64 = 0.0;
    let mut worst_imag: f64 = 0.0;
    for _ in 0..1000 {
        let n = rng.gen_range(1.0..20.0);
        let kz = rng.gen_range(0.01..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let kpar = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
        let k = make_wavevector(kpar, Complex64::new(kz, 0.0), &MediumParams::new(n)?)?;
        for r in identity_residuals(&k)? {
            if identity_expected(r.family, r.relation, r.sigma) {
                worst_real = worst_real.max(r.residual);
            }
        }
    }
    for _ in 0..1000 {
        let n: f64 = rng.gen_range(1.01..20.0);
        let kp = rng.gen_range(0.01..5.0);
        let kappa = rng.gen_range(0.001..0.999) * kp * (n * n - 1.0).sqrt() / n;
        let side = if rng.gen_bool(0.5) { CutSide::Left } else { CutSide::Right };
        let k = WaveVector::on_side([kp, 0.0], Complex64::new(0.0, -kappa), side, n)?;
        for r in identity_residuals(&k)? {
            worst_imag = worst_imag.max(r.residual);
        }
    }
    let t = secs(start.elapsed());
    let ok = worst_real < 1e-12 && worst_imag < 1e-12 && t < 5.0;
    Ok((ok, format!("max real-family residual {worst_real:.2e}, max imaginary-family residual {worst_imag:.2e} (G-mode real relations 1-4, 6 excluded)")))
}

fn image_potential(cfg: &VerifyConfig) -> Result<(bool, String)> {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for &n in &[1.5, 2.0, 10.0] {
        for &a in &[0.5, 1.0, 5.0] {
            let num = static_green_numeric(n, a)?.value;
            let closed = if cfg.inject_bug {
                // deliberately wrong oracle: (n - 1) / (n + 1) in place of the TM factor
                -(n - 1.0) / (n + 1.0) / (8.0 * PI * a)
            } else {
                static_green_closed(n, a)?.value
            };
            worst = worst.max(((num - closed) / closed).abs());
        }
    }
    let ok = worst < 1e-8 && secs(start.elapsed()) < 10.0;
    Ok((ok, format!("max relative deviation {worst:.2e} on 3 x 3 grid")))
}

const SPEC_TOL: Tol = Tol { abs: 1e-9, rel: 1e-9 };

fn leading_tm(_: &VerifyConfig) -> Result<(bool, String)> {
    let lead = sigma_leading(2.0)?;
    let mut devs = Vec::new();
    let mut slowest: f64 = 0.0;
    for &p0a in &[100.0, 200.0] {
        let start = Instant::now();
        let q = sigma_tm_quad(p0a, 2.0, SPEC_TOL)?.coeffs;
        slowest = slowest.max(secs(start.elapsed()));
        devs.push([((q.c_par - lead.c_par) / lead.c_par).abs(), ((q.c_z - lead.c_z) / lead.c_z).abs()]);
    }
    let ratio = [devs[0][0] / devs[1][0], devs[0][1] / devs[1][1]];
    let ok = devs[0].iter().all(|d| *d < 0.03)
        && ratio.iter().all(|r| (1.5..=2.5).contains(r))
        && slowest < 60.0;
    Ok((
        ok,
        format!(
            "relative deviation at p0a=100: c_par {:.3e}, c_z {:.3e}; ratio 100/200: {:.3}, {:.3}",
            devs[0][0], devs[0][1], ratio[0], ratio[1]
        ),
    ))
}

/// `(quad - leading) pi p0a` extrapolated to `p0a -> inf` over 100, 200, 400.
fn extrapolated_next(n: f64) -> Result<[f64; 3]> {
    let lead = sigma_leading(n)?;
    let mut samples = [Vec::new(), Vec::new(), Vec::new()];
    for &p0a in &[100.0, 200.0, 400.0] {
        let q = sigma_radiative_quad(p0a, n, DEFAULT_QUAD_TOL)?.coeffs;
        let d = (q - lead) * (PI * p0a);
        for (k, v) in [d.c0, d.c_par, d.c_z].into_iter().enumerate() {
            samples[k].push((1.0 / p0a, v));
        }
    }
    let mut out = [0.0; 3];
    for k in 0..3 {
        out[k] = richardson(&samples[k], 1)?.estimate;
    }
    Ok(out)
}

fn next_to_leading(_: &VerifyConfig) -> Result<(bool, String)> {
    let est = extrapolated_next(2.0)?;
    let b = sigma_next(2.0)?;
    let want = [b.c0, b.c_par, b.c_z];
    let rel: Vec<f64> = (0..3).map(|k| ((est[k] - want[k]) / want[k]).abs()).collect();
    let ok = rel.iter().all(|r| *r < 0.05);
    Ok((
        ok,
        format!(
            "extrapolated ({:.6}, {:.6}, {:.6}) vs bracket ({:.6}, {:.6}, {:.6}); max relative deviation {:.2e}",
            est[0],
            est[1],
            est[2],
            want[0],
            want[1],
            want[2],
            rel.iter().cloned().fold(0.0, f64::max)
        ),
    ))
}

fn te_asymptotics(_: &VerifyConfig) -> Result<(bool, String)> {
    let mut devs = Vec::new();
    for &p0a in &[100.0, 200.0] {
        let q = sigma_te_quad(p0a, 2.0, SPEC_TOL)?.coeffs;
        let a = sigma_te_asympt(p0a, 2.0)?;
        devs.push([((q.c0 - a.c0) / q.c0).abs(), ((q.c_par - a.c_par) / q.c_par).abs()]);
    }
    let ok = devs[0].iter().all(|d| *d < 0.05) && (0..2).all(|k| devs[1][k] < devs[0][k]);
    Ok((
        ok,
        format!(
            "relative deviation c0 {:.3e} -> {:.3e}, c_par {:.3e} -> {:.3e} (p0a 100 -> 200)",
            devs[0][0], devs[1][0], devs[0][1], devs[1][1]
        ),
    ))
}

fn noncommuting_limits(_: &VerifyConfig) -> Result<(bool, String)> {
    let lim = sigma_total_leading_infinite_n();
    let perf = sigma_perfect_total(1.0)?;
    let exact = lim.c_par == 1.0
        && lim.c_z == 4.0
        && lim.gamma0_total() == 2.0
        && perf.c_par == -1.0
        && perf.c_z == 2.0
        && perf.gamma0_total() == 2.0
        && lim.c_par == -perf.c_par
        && lim.c_z == 2.0 * perf.c_z;
    let big = sigma_total_leading(1e6)?;
    let approach = (big.c_par - 1.0).abs().max((big.c_z - 4.0).abs()).max((big.gamma0_total() - 2.0).abs());
    Ok((
        exact && approach < 1e-5,
        format!(
            "lim n->inf (c_par, c_z, c0) = ({}, {}, {}); perfect first = ({}, {}, {}); n = 1e6 off by {approach:.1e}",
            lim.c_par,
            lim.c_z,
            lim.gamma0_total(),
            perf.c_par,
            perf.c_z,
            perf.gamma0_total()
        ),
    ))
}

fn split_consistency(_: &VerifyConfig) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for &n in &[1.5, 2.0, 5.0] {
        for &p0a in &[20.0, 100.0, 200.0] {
            let full = sigma_tm_quad(p0a, n, DEFAULT_QUAD_TOL)?.coeffs;
            let sum: SigmaCoefficients =
                sigma_tm_split_quad(p0a, n, DEFAULT_QUAD_TOL)?.iter().map(|q| q.coeffs).sum();
            worst = worst.max(full.max_abs_diff(&sum));
        }
    }
    Ok((worst < 1e-9, format!("max |A+B+C+D - TM| = {worst:.2e} on 3 x 3 grid")))
}

fn dirac_suite(cfg: &VerifyConfig) -> Result<(bool, String)> {
    let g = gammas();
    let clifford = g.clifford_residual();
    let mut triple: f64 = 0.0;
    for mu in 0..4 {
        for la in 0..4 {
            for nu in 0..4 {
                let d = g.upper[mu] * g.upper[la] * g.upper[nu] - gamma_triple(mu, la, nu)?.reconstruct();
                triple = triple.max(max_abs(&d));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
    let mut spinor: f64 = 0.0;
    let mut phi: f64 = 0.0;
    for i in 0..100 {
        let p = FourMomentum::on_shell(
            [rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)],
            rng.gen_range(0.5..2.0),
        )?;
        let r = spinor_residuals(&p)?;
        spinor = spinor.max(r.dirac_equation).max(r.normalization).max(r.projector);
        if i % 5 == 0 {
            let rho = rng.gen_range(0.1..3.0);
            let t = rng.gen_range(0.0..0.99);
            let kz = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-1.0..0.0));
            let kp2 = rho * rho * (1.0 - t * t);
            let k2 = kz * kz + kp2;
            let off = g.slash(&p.contravariant()) - nalgebra::Matrix4::identity() * Complex64::new(p.mass, 0.0);
            for sigma in Polarization::TRANSVERSE {
                let numeric = phi_average_numeric(sigma, rho, t, kz, &p, 64)?;
                let closed = phi_average(sigma, rho, t)?.to_matrix(&p, kp2 / k2);
                let lambda = match sigma {
                    Polarization::TE => Complex64::new(-1.0, 0.0),
                    _ => -(1.0 - 2.0 * kz * kz / k2),
                };
                phi = phi.max(max_abs(&(numeric - closed - off * lambda)) / (1.0 + max_abs(&numeric)));
            }
        }
    }
    let ok = clifford < 1e-13 && triple < 1e-13 && spinor < 1e-12 && phi < 1e-10;
    Ok((
        ok,
        format!("Clifford {clifford:.1e}, triples {triple:.1e}, spinors {spinor:.1e}, phi averages {phi:.1e}"),
    ))
}

fn detour_equivalence(_: &VerifyConfig) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for &n in &[1.5, 2.0, 5.0] {
        for &t in &[0.2, 0.5, 0.9] {
            for &z in &[-0.5, -3.0] {
                for sigma in Polarization::TRANSVERSE {
                    worst = worst.max(detour_equivalence_residual(sigma, 1.0, t, z, n)?);
                }
            }
        }
    }
    Ok((worst < 1e-10, format!("max |detour - interval| = {worst:.2e} on 3 x 3 x 2 grid, TE and TM")))
}

fn rest_frame_shift(_: &VerifyConfig) -> Result<(bool, String)> {
    let med = MediumParams::new(2.0)?;
    let p = FourMomentum::on_shell([0.0; 3], 1.0)?;
    let s = total_shift(&med, 1.0, &p, &Moments::sharp(&p))?;
    let want = -med.e2 * 0.6 / (16.0 * PI);
    let dev = (s.delta_e[0] - want).abs().max((s.delta_e[1] - want).abs());
    Ok((dev < 1e-10, format!("shift {:.12e} vs {want:.12e}", s.delta_e[0])))
}

fn parity_fold(_: &VerifyConfig) -> Result<(bool, String)> {
    let r = parity_fold_residual(2.0, 5.0, &[0.05, 0.3, 0.7, 0.95])?;
    Ok((r < 1e-9, format!("max mismatch {r:.2e}")))
}

fn coulomb_routes(_: &VerifyConfig) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for &n in &[1.5, 2.0, 10.0] {
        let med = MediumParams::new(n)?;
        for p in [[0.0, 0.0, 0.0], [0.3, -0.2, 0.5]] {
            let p = FourMomentum::on_shell(p, 1.0)?;
            let a = coulomb_shift(&med, 2.0, &p)?.delta_e;
            let b = coulomb_shift_from_green(&med, 2.0, &p)?;
            worst = worst.max(((a - b) / a).abs());
        }
    }
    Ok((worst < 1e-8, format!("max relative deviation {worst:.2e}")))
}

fn t_integral_forms(_: &VerifyConfig) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for &n in &[1.5, 2.0, 5.0] {
        let a = t_integrals(n)?.to_array();
        let b = t_integrals_numeric(n, Tol::new(1e-15, 1e-13))?.to_array();
        for k in 0..6 {
            worst = worst.max((a[k] - b[k]).abs());
        }
    }
    Ok((worst < 1e-12, format!("max deviation {worst:.2e}")))
}

fn tm_piece_asymptotics(_: &VerifyConfig) -> Result<(bool, String)> {
    // the remainder after the 1/(p0 a) term should shrink like 1/(p0 a)^2
    let n = 2.0;
    let mut rem = Vec::new();
    for &p0a in &[100.0, 200.0] {
        let q = sigma_tm_split_quad(p0a, n, DEFAULT_QUAD_TOL)?;
        let a = tm_asympt_pieces(p0a, n)?;
        let worst = q.iter().zip(a.iter()).map(|(q, a)| q.coeffs.max_abs_diff(a)).fold(0.0, f64::max);
        rem.push(worst);
    }
    let ratio = rem[0] / rem[1];
    Ok((
        rem[0] < 1e-3 && ratio > 3.0,
        format!("max piece remainder {:.2e} -> {:.2e} (ratio {ratio:.2})", rem[0], rem[1]),
    ))
}

fn vacuum_continuity(_: &VerifyConfig) -> Result<(bool, String)> {
    let mut worst: f64 = 0.0;
    for &d in &[1e-3, 1e-2] {
        let q = sigma_radiative_quad(50.0, 1.0 + d, DEFAULT_QUAD_TOL)?.coeffs;
        worst = worst.max(q.max_abs() / d);
    }
    let zero = sigma_radiative_quad(50.0, 1.0, DEFAULT_QUAD_TOL)?.coeffs.max_abs();
    Ok((zero == 0.0 && worst < 10.0, format!("max |c| / (n - 1) = {worst:.3}, at n = 1: {zero}")))
}

fn perfect_quadrature(_: &VerifyConfig) -> Result<(bool, String)> {
    let q = sigma_perfect_quad(1000.0, DEFAULT_QUAD_TOL)?.coeffs;
    let perf = sigma_perfect(1000.0)?;
    let dev = (q.c_par - perf.c_par).abs().max((q.c_z - perf.c_z).abs()).max((q.c0 - perf.c0).abs());
    Ok((dev < 1e-2, format!("quadrature at p0a = 1000: ({:.5}, {:.5}, {:.5})", q.c0, q.c_par, q.c_z)))
}

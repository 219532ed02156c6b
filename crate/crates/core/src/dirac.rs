//! Dirac matrices, free spinors, and the gamma-valued invariants that appear
//! when the photon metric of each mode is contracted with the electron
//! propagator numerator.
//!
//! Dirac representation, `gamma5 = i gamma^0 gamma^1 gamma^2 gamma^3`,
//! `epsilon_{0123} = +1` (so `epsilon^{0123} = -1`). Bold `gamma` in the
//! closed forms means the contravariant components `(gamma^1, gamma^2, gamma^3)`.

use std::sync::OnceLock;

use nalgebra::{Matrix2, Matrix4, Vector4};
use num_complex::Complex64;

use crate::kinematics::{Polarization, METRIC};
use crate::selfenergy::SigmaCoefficients;
use crate::{Error, Result};

type C64 = Complex64;
pub type Mat4 = Matrix4<C64>;

fn c(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// The four Dirac matrices (upper index) and `gamma5`.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaMatrices {
    pub upper: [Mat4; 4],
    pub gamma5: Mat4,
}

impl GammaMatrices {
    fn dirac() -> Self {
        let z = c(0.0);
        let o = c(1.0);
        let i = C64::i();
        let g0 = Mat4::from_row_slice(&[o, z, z, z, z, o, z, z, z, z, -o, z, z, z, z, -o]);
        // gamma^k = [[0, sigma_k], [-sigma_k, 0]]
        let g1 = Mat4::from_row_slice(&[z, z, z, o, z, z, o, z, z, -o, z, z, -o, z, z, z]);
        let g2 = Mat4::from_row_slice(&[z, z, z, -i, z, z, i, z, z, i, z, z, -i, z, z, z]);
        let g3 = Mat4::from_row_slice(&[z, z, o, z, z, z, z, -o, -o, z, z, z, z, o, z, z]);
        let gamma5 = g0 * g1 * g2 * g3 * i;
        GammaMatrices { upper: [g0, g1, g2, g3], gamma5 }
    }

    /// `gamma_mu = g_{mu mu} gamma^mu`.
    pub fn lower(&self, mu: usize) -> Mat4 {
        self.upper[mu] * c(METRIC[mu])
    }

    /// `gamma^mu v_mu` for a contravariant vector `v`.
    pub fn slash(&self, v: &[C64; 4]) -> Mat4 {
        let mut m = self.upper[0] * v[0];
        for k in 1..4 {
            m -= self.upper[k] * v[k];
        }
        m
    }

    /// Max deviation from `{gamma^mu, gamma^nu} = 2 g^{mu nu}`, together
    /// with `gamma5^2 = 1` and `{gamma5, gamma^mu} = 0`.
    pub fn clifford_residual(&self) -> f64 {
        let id = Mat4::identity();
        let mut worst: f64 = 0.0;
        for mu in 0..4 {
            for nu in 0..4 {
                let g = if mu == nu { METRIC[mu] } else { 0.0 };
                let ac = self.upper[mu] * self.upper[nu] + self.upper[nu] * self.upper[mu];
                worst = worst.max(max_abs(&(ac - id * c(2.0 * g))));
            }
            let a5 = self.gamma5 * self.upper[mu] + self.upper[mu] * self.gamma5;
            worst = worst.max(max_abs(&a5));
        }
        worst.max(max_abs(&(self.gamma5 * self.gamma5 - id)))
    }
}

/// Shared instance of the Dirac-representation matrices.
pub fn gammas() -> &'static GammaMatrices {
    static G: OnceLock<GammaMatrices> = OnceLock::new();
    G.get_or_init(GammaMatrices::dirac)
}

pub fn max_abs(m: &Mat4) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.norm()))
}

/// `epsilon^{abcd}` with `epsilon^{0123} = -1`.
pub fn levi_civita_upper(idx: [usize; 4]) -> f64 {
    let mut p = idx;
    if p.iter().any(|&x| x > 3) {
        return 0.0;
    }
    let mut sign = 1.0;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] == p[j] {
                return 0.0;
            }
        }
    }
    // bubble sort counting transpositions
    for i in 0..4 {
        for j in 0..3 - i {
            if p[j] > p[j + 1] {
                p.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    -sign
}

/// `s^{alpha mu lambda nu} = g^{alpha mu} g^{lambda nu} + g^{alpha nu} g^{lambda mu} - g^{alpha lambda} g^{nu mu}`.
pub fn s_tensor(alpha: usize, mu: usize, lambda: usize, nu: usize) -> f64 {
    let g = |a: usize, b: usize| if a == b { METRIC[a] } else { 0.0 };
    g(alpha, mu) * g(lambda, nu) + g(alpha, nu) * g(lambda, mu) - g(alpha, lambda) * g(nu, mu)
}

/// Decomposition of `gamma^mu gamma^lambda gamma^nu` into
/// `s^{alpha mu lambda nu} gamma_alpha - i epsilon^{alpha mu lambda nu} gamma5 gamma_alpha`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TripleDecomposition {
    pub s: [f64; 4],
    pub eps: [f64; 4],
}

impl TripleDecomposition {
    pub fn reconstruct(&self) -> Mat4 {
        let g = gammas();
        let mut m = Mat4::zeros();
        for alpha in 0..4 {
            m += g.lower(alpha) * c(self.s[alpha]);
            m -= g.gamma5 * g.lower(alpha) * C64::new(0.0, self.eps[alpha]);
        }
        m
    }
}

pub fn gamma_triple(mu: usize, lambda: usize, nu: usize) -> Result<TripleDecomposition> {
    if mu > 3 || lambda > 3 || nu > 3 {
        return Err(Error::domain("Lorentz indices run over 0..=3"));
    }
    let mut s = [0.0; 4];
    let mut eps = [0.0; 4];
    for alpha in 0..4 {
        s[alpha] = s_tensor(alpha, mu, lambda, nu);
        eps[alpha] = levi_civita_upper([alpha, mu, lambda, nu]);
    }
    Ok(TripleDecomposition { s, eps })
}

/// On-shell electron four-momentum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FourMomentum {
    pub p0: f64,
    pub p: [f64; 3],
    pub mass: f64,
}

impl FourMomentum {
    pub fn on_shell(p: [f64; 3], mass: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) || p.iter().any(|x| !x.is_finite()) {
            return Err(Error::domain("need finite momentum and positive mass"));
        }
        let p0 = (mass * mass + p.iter().map(|x| x * x).sum::<f64>()).sqrt();
        Ok(FourMomentum { p0, p, mass })
    }

    /// Accept an explicit energy if it is on shell to 1e-12 relative.
    pub fn with_energy(p0: f64, p: [f64; 3], mass: f64) -> Result<Self> {
        let k = Self::on_shell(p, mass)?;
        let res = (p0 - k.p0).abs() / k.p0;
        if res > 1e-12 {
            return Err(Error::OffShell(res));
        }
        Ok(k)
    }

    pub fn contravariant(&self) -> [C64; 4] {
        [c(self.p0), c(self.p[0]), c(self.p[1]), c(self.p[2])]
    }

    pub fn p_par_sq(&self) -> f64 {
        self.p[0] * self.p[0] + self.p[1] * self.p[1]
    }
}

/// Positive-energy spinor `u^{(i)}(p)`, `i in {1, 2}` for spin up/down along
/// z in the rest frame, normalized to `ubar u = 1`.
pub fn eigenspinor(i: u8, p: &FourMomentum) -> Result<Vector4<C64>> {
    let chi = spin_basis(i)?;
    let (e, m) = (p.p0, p.mass);
    let lower = sigma_dot(p.p) * chi / c(e + m);
    let norm = c(((e + m) / (2.0 * m)).sqrt());
    Ok(Vector4::new(chi[0], chi[1], lower[0], lower[1]) * norm)
}

/// Negative-energy spinor `v^{(i)}(p)`, normalized to `vbar v = -1`.
pub fn antiparticle_spinor(i: u8, p: &FourMomentum) -> Result<Vector4<C64>> {
    let chi = spin_basis(i)?;
    let (e, m) = (p.p0, p.mass);
    let upper = sigma_dot(p.p) * chi / c(e + m);
    let norm = c(((e + m) / (2.0 * m)).sqrt());
    Ok(Vector4::new(upper[0], upper[1], chi[0], chi[1]) * norm)
}

fn spin_basis(i: u8) -> Result<nalgebra::Vector2<C64>> {
    match i {
        1 => Ok(nalgebra::Vector2::new(c(1.0), c(0.0))),
        2 => Ok(nalgebra::Vector2::new(c(0.0), c(1.0))),
        _ => Err(Error::domain(format!("spinor label must be 1 or 2, got {i}"))),
    }
}

fn sigma_dot(p: [f64; 3]) -> Matrix2<C64> {
    Matrix2::new(c(p[2]), C64::new(p[0], -p[1]), C64::new(p[0], p[1]), c(-p[2]))
}

/// `psi^dagger gamma^0`.
pub fn bar(psi: &Vector4<C64>) -> nalgebra::RowVector4<C64> {
    psi.adjoint() * gammas().upper[0]
}

/// Loop momenta entering the invariants: the electron line carries
/// `q = (p0 - k0, p_par - k_par, p_z)`, the photon `(k0, k_par, k_z)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LoopMomenta {
    pub q: [C64; 4],
    pub k_par: [f64; 2],
    pub k_z: C64,
}

impl LoopMomenta {
    pub fn new(p: &FourMomentum, k0: C64, k_par: [f64; 2], k_z: C64) -> Self {
        LoopMomenta {
            q: [c(p.p0) - k0, c(p.p[0] - k_par[0]), c(p.p[1] - k_par[1]), c(p.p[2])],
            k_par,
            k_z,
        }
    }

    fn k_squared(&self) -> C64 {
        self.k_z * self.k_z + self.k_par[0] * self.k_par[0] + self.k_par[1] * self.k_par[1]
    }

    /// `|k|^2` vanishes up to rounding.
    fn on_light_cone(&self) -> bool {
        let scale = self.k_z.norm_sqr() + self.k_par[0] * self.k_par[0] + self.k_par[1] * self.k_par[1];
        self.k_squared().norm() <= 1e-14 * scale
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum InvariantKind {
    /// `m g^{mu nu} g^sigma_{mu nu}`
    I1,
    /// `(m/2) [gamma^mu, gamma^nu] g^sigma_{mu nu}`
    I15,
    /// `s^{alpha mu lambda nu} gamma_alpha g^sigma_{mu nu} q_lambda`
    I2,
    /// `epsilon^{alpha mu lambda nu} gamma5 gamma_alpha g^sigma_{mu nu} q_lambda`
    I25,
}

impl InvariantKind {
    pub const ALL: [InvariantKind; 4] = [InvariantKind::I1, InvariantKind::I15, InvariantKind::I2, InvariantKind::I25];
}

/// Mode metric with both indices lowered, evaluated on the loop momenta.
fn lowered_metric(sigma: Polarization, k: &LoopMomenta) -> Result<[[C64; 4]; 4]> {
    let upper = metric_from_components(sigma, k)?;
    let mut g = upper;
    for mu in 0..4 {
        for nu in 0..4 {
            g[mu][nu] = upper[mu][nu] * METRIC[mu] * METRIC[nu];
        }
    }
    Ok(g)
}

fn metric_from_components(sigma: Polarization, k: &LoopMomenta) -> Result<[[C64; 4]; 4]> {
    // Same tensors as kinematics::polarization_metric, but for an arbitrary
    // complex k_z (the contour variable), not only physical wave vectors.
    let km = k.k_par;
    let kp2 = km[0] * km[0] + km[1] * km[1];
    let kz = k.k_z;
    let k2 = k.k_squared();
    let mut g = [[c(0.0); 4]; 4];
    match sigma {
        Polarization::C => g[0][0] = c(1.0),
        Polarization::TE => {
            if kp2 == 0.0 {
                return Err(Error::DegenerateDirection(sigma));
            }
            for m in 0..2 {
                for n in 0..2 {
                    let d = if m == n { 1.0 } else { 0.0 };
                    g[m + 1][n + 1] = c(-(d - km[m] * km[n] / kp2));
                }
            }
        }
        Polarization::TM | Polarization::G => {
            if sigma == Polarization::TM && kp2 == 0.0 {
                return Err(Error::DegenerateDirection(sigma));
            }
            if k.on_light_cone() {
                return Err(Error::PoleOnShell(sigma));
            }
            for m in 0..2 {
                for n in 0..2 {
                    g[m + 1][n + 1] = if sigma == Polarization::TM {
                        km[m] * km[n] * kz * kz / (k2 * kp2)
                    } else {
                        c(-km[m] * km[n]) / k2
                    };
                }
                g[m + 1][3] = km[m] * kz / k2;
                g[3][m + 1] = -km[m] * kz / k2;
            }
            g[3][3] = if sigma == Polarization::TM { c(-kp2) / k2 } else { kz * kz / k2 };
        }
    }
    Ok(g)
}

/// Invariant by explicit tensor contraction (any mode).
pub fn invariant_contracted(sigma: Polarization, kind: InvariantKind, mass: f64, k: &LoopMomenta) -> Result<Mat4> {
    let g = gammas();
    let gl = lowered_metric(sigma, k)?;
    let q_lower: [C64; 4] = std::array::from_fn(|l| k.q[l] * METRIC[l]);
    let mut out = Mat4::zeros();
    match kind {
        InvariantKind::I1 => {
            let mut s = c(0.0);
            for mu in 0..4 {
                s += gl[mu][mu] * METRIC[mu];
            }
            out = Mat4::identity() * (s * mass);
        }
        InvariantKind::I15 => {
            for mu in 0..4 {
                for nu in 0..4 {
                    let comm = g.upper[mu] * g.upper[nu] - g.upper[nu] * g.upper[mu];
                    out += comm * (gl[mu][nu] * (mass / 2.0));
                }
            }
        }
        InvariantKind::I2 | InvariantKind::I25 => {
            for alpha in 0..4 {
                let mut coef = c(0.0);
                for mu in 0..4 {
                    for lambda in 0..4 {
                        for nu in 0..4 {
                            let w = match kind {
                                InvariantKind::I2 => s_tensor(alpha, mu, lambda, nu),
                                _ => levi_civita_upper([alpha, mu, lambda, nu]),
                            };
                            if w != 0.0 {
                                coef += gl[mu][nu] * q_lower[lambda] * w;
                            }
                        }
                    }
                }
                let base = match kind {
                    InvariantKind::I2 => g.lower(alpha),
                    _ => g.gamma5 * g.lower(alpha),
                };
                out += base * coef;
            }
        }
    }
    Ok(out)
}

/// `sum_{mu nu} gamma^mu (gamma q + m) gamma^nu g^sigma_{mu nu}`, which equals
/// `I1 + I15 + I2 - i I25`.
pub fn vertex_product(sigma: Polarization, mass: f64, k: &LoopMomenta) -> Result<Mat4> {
    let g = gammas();
    let gl = lowered_metric(sigma, k)?;
    let middle = g.slash(&k.q) + Mat4::identity() * c(mass);
    let mut out = Mat4::zeros();
    for mu in 0..4 {
        for nu in 0..4 {
            if gl[mu][nu] != c(0.0) {
                out += g.upper[mu] * middle * g.upper[nu] * gl[mu][nu];
            }
        }
    }
    Ok(out)
}

/// Closed forms of the invariants for the physical modes.
pub fn invariant(sigma: Polarization, kind: InvariantKind, mass: f64, k: &LoopMomenta) -> Result<Mat4> {
    let g = gammas();
    let [q0, q1, q2, q3] = k.q;
    let [kx, ky] = k.k_par;
    let kp2 = kx * kx + ky * ky;
    if kp2 == 0.0 {
        return Err(Error::DegenerateDirection(sigma));
    }
    let kz = k.k_z;
    let k2 = k.k_squared();
    let id = Mat4::identity();
    // gamma_par . q_par, gamma_par . k_par, k_par . q_par
    let gq_par = g.upper[1] * q1 + g.upper[2] * q2;
    let gk_par = g.upper[1] * c(kx) + g.upper[2] * c(ky);
    let kq_par = q1 * kx + q2 * ky;
    let rest = gq_par + g.upper[3] * q3 - g.upper[0] * q0;
    match sigma {
        Polarization::TE => Ok(match kind {
            InvariantKind::I1 => id * c(mass),
            InvariantKind::I15 | InvariantKind::I25 => Mat4::zeros(),
            InvariantKind::I2 => (gq_par - gk_par * (kq_par / kp2)) * c(-2.0) + rest,
        }),
        Polarization::TM => {
            if k.on_light_cone() {
                return Err(Error::PoleOnShell(sigma));
            }
            let a = c(1.0) - kz * kz * 2.0 / k2;
            Ok(match kind {
                InvariantKind::I1 => id * (a * mass),
                InvariantKind::I15 => {
                    let mut m = Mat4::zeros();
                    for (idx, kn) in [(1usize, kx), (2usize, ky)] {
                        let comm = g.upper[3] * g.upper[idx] - g.upper[idx] * g.upper[3];
                        m += comm * (kz * kn);
                    }
                    m * (-mass / k2)
                }
                InvariantKind::I25 => {
                    let q_lower: [C64; 4] = std::array::from_fn(|l| k.q[l] * METRIC[l]);
                    let mut m = Mat4::zeros();
                    for alpha in 0..4 {
                        let mut coef = c(0.0);
                        for (mi, km) in [(1usize, kx), (2usize, ky)] {
                            for (lambda, ql) in q_lower.iter().enumerate() {
                                let e = levi_civita_upper([alpha, mi, lambda, 3]);
                                if e != 0.0 {
                                    coef += *ql * (km * e);
                                }
                            }
                        }
                        m += g.gamma5 * g.lower(alpha) * coef;
                    }
                    m * (kz * 2.0 / k2)
                }
                InvariantKind::I2 => {
                    (gk_par * (kq_par * kz * kz / (kp2 * k2)) - g.upper[3] * (q3 * kp2 / k2)) * c(2.0) + rest * a
                }
            })
        }
        _ => Err(Error::domain("closed-form invariants are given for TE and TM")),
    }
}

/// Coefficients of `gamma^0`, `gamma_par . p_par` and `gamma^3 p_z`.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct GammaBasis {
    pub g0: C64,
    pub gpar: C64,
    pub g3pz: C64,
}

impl GammaBasis {
    pub fn to_matrix(&self, p: &FourMomentum) -> Mat4 {
        let g = gammas();
        g.upper[0] * self.g0
            + (g.upper[1] * c(p.p[0]) + g.upper[2] * c(p.p[1])) * self.gpar
            + g.upper[3] * (self.g3pz * p.p[2])
    }
}

/// Azimuthal average of `I1 + I2` on shell: `unit + (k_par^2 / k^2) transverse`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhiAverage {
    pub unit: GammaBasis,
    pub transverse: GammaBasis,
}

impl PhiAverage {
    pub fn to_matrix(&self, p: &FourMomentum, k_par_sq_over_k_sq: C64) -> Mat4 {
        self.unit.to_matrix(p) + self.transverse.to_matrix(p) * k_par_sq_over_k_sq
    }
}

/// Closed-form `phi` average at Euclidean `k0 = i rho t`, valid between
/// on-shell spinors (terms proportional to `gamma p - m` are dropped).
pub fn phi_average(sigma: Polarization, rho: f64, t: f64) -> Result<PhiAverage> {
    let irt = C64::new(0.0, rho * t);
    match sigma {
        Polarization::TE => Ok(PhiAverage {
            unit: GammaBasis { g0: irt, gpar: c(-1.0), g3pz: c(0.0) },
            transverse: GammaBasis::default(),
        }),
        Polarization::TM => Ok(PhiAverage {
            unit: GammaBasis { g0: -irt, gpar: c(1.0), g3pz: c(0.0) },
            transverse: GammaBasis { g0: irt * 2.0, gpar: c(-1.0), g3pz: c(-2.0) },
        }),
        _ => Err(Error::domain("phi averages are given for TE and TM")),
    }
}

/// Numerical `phi` average of `I1 + I2` (closed forms) by the trapezoidal
/// rule, which is exact here because the integrand is a trigonometric
/// polynomial of low degree in `phi`.
pub fn phi_average_numeric(sigma: Polarization, rho: f64, t: f64, k_z: C64, p: &FourMomentum, points: usize) -> Result<Mat4> {
    let kp = rho * (1.0 - t * t).sqrt();
    let k0 = C64::new(0.0, rho * t);
    let mut acc = Mat4::zeros();
    for j in 0..points {
        let phi = 2.0 * std::f64::consts::PI * j as f64 / points as f64;
        let k = LoopMomenta::new(p, k0, [kp * phi.cos(), kp * phi.sin()], k_z);
        acc += invariant(sigma, InvariantKind::I1, p.mass, &k)? + invariant(sigma, InvariantKind::I2, p.mass, &k)?;
    }
    Ok(acc / c(points as f64))
}

/// `(m / E) ubar^{(i)} S u^{(j)}` for the self-energy operator built from
/// `coeffs`, in units of `-e^2 / (32 pi a)`:
/// `S = (c_par gamma_par.p_par + c_z gamma^3 p_z + c0 gamma^0 p0) / p0 + 2 c_coulomb gamma^0`.
pub fn sandwich(coeffs: &SigmaCoefficients, p: &FourMomentum) -> Result<Matrix2<C64>> {
    let g = gammas();
    let e = p.p0;
    let op = ((g.upper[1] * c(p.p[0]) + g.upper[2] * c(p.p[1])) * c(coeffs.c_par)
        + g.upper[3] * c(coeffs.c_z * p.p[2])
        + g.upper[0] * c(coeffs.c0 * e))
        / c(e)
        + g.upper[0] * c(2.0 * coeffs.c_coulomb);
    let u = [eigenspinor(1, p)?, eigenspinor(2, p)?];
    let mut out = Matrix2::zeros();
    for i in 0..2 {
        let ub = bar(&u[i]);
        for j in 0..2 {
            out[(i, j)] = (ub * op * u[j])[0] * (p.mass / e);
        }
    }
    Ok(out)
}

/// Residuals of the spinor algebra at momentum `p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpinorResiduals {
    /// `|(gamma p - m) u|` and `|(gamma p + m) v|`.
    pub dirac_equation: f64,
    /// `|ubar_i u_j - delta_ij|` and `|vbar_i v_j + delta_ij|`.
    pub normalization: f64,
    /// `|sum_i u ubar - (gamma p + m) / 2m|` and the `v` analogue.
    pub projector: f64,
}

pub fn spinor_residuals(p: &FourMomentum) -> Result<SpinorResiduals> {
    let g = gammas();
    let slash = g.slash(&p.contravariant());
    let m = c(p.mass);
    let id = Mat4::identity();
    let u = [eigenspinor(1, p)?, eigenspinor(2, p)?];
    let v = [antiparticle_spinor(1, p)?, antiparticle_spinor(2, p)?];
    let mut dirac: f64 = 0.0;
    let mut norm: f64 = 0.0;
    for i in 0..2 {
        dirac = dirac.max(((slash - id * m) * u[i]).norm()).max(((slash + id * m) * v[i]).norm());
        for j in 0..2 {
            let d = if i == j { 1.0 } else { 0.0 };
            norm = norm.max(((bar(&u[i]) * u[j])[0] - d).norm());
            norm = norm.max(((bar(&v[i]) * v[j])[0] + d).norm());
        }
    }
    let mut pu = Mat4::zeros();
    let mut pv = Mat4::zeros();
    for i in 0..2 {
        pu += u[i] * bar(&u[i]);
        pv += v[i] * bar(&v[i]);
    }
    let two_m = c(2.0 * p.mass);
    let projector = max_abs(&(pu - (slash + id * m) / two_m)).max(max_abs(&(pv - (slash - id * m) / two_m)));
    // scale by the natural size of the spinors, |u|^2 ~ E/m
    let scale = p.p0 / p.mass;
    Ok(SpinorResiduals { dirac_equation: dirac / scale, normalization: norm / scale, projector: projector / scale })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clifford_algebra() {
        assert!(gammas().clifford_residual() < 1e-15);
    }

    #[test]
    fn levi_civita_sign() {
        assert_eq!(levi_civita_upper([0, 1, 2, 3]), -1.0);
        assert_eq!(levi_civita_upper([1, 0, 2, 3]), 1.0);
        assert_eq!(levi_civita_upper([0, 0, 2, 3]), 0.0);
    }

    #[test]
    fn all_triples_reconstruct() {
        let g = gammas();
        for mu in 0..4 {
            for la in 0..4 {
                for nu in 0..4 {
                    let direct = g.upper[mu] * g.upper[la] * g.upper[nu];
                    let rec = gamma_triple(mu, la, nu).unwrap().reconstruct();
                    assert!(max_abs(&(direct - rec)) < 1e-15, "{mu}{la}{nu}");
                }
            }
        }
    }

    #[test]
    fn spinors() {
        let p = FourMomentum::on_shell([0.3, -0.7, 1.1], 1.0).unwrap();
        let r = spinor_residuals(&p).unwrap();
        assert!(r.dirac_equation < 1e-14 && r.normalization < 1e-14 && r.projector < 1e-14, "{r:?}");
        assert!(eigenspinor(3, &p).is_err());
        assert!(matches!(FourMomentum::with_energy(2.0, [0.0; 3], 1.0), Err(Error::OffShell(_))));
    }

    #[test]
    fn sandwich_is_diagonal_for_sharp_momentum() {
        let p = FourMomentum::on_shell([0.4, 0.2, -0.6], 1.0).unwrap();
        let coeffs = SigmaCoefficients { c0: 0.3, c_par: 0.48, c_z: 2.16, c_coulomb: 0.6 };
        let s = sandwich(&coeffs, &p).unwrap();
        let e2 = p.p0 * p.p0;
        let want = (coeffs.c_par * p.p_par_sq() + coeffs.c_z * p.p[2] * p.p[2] + coeffs.c0 * e2) / e2
            + 2.0 * coeffs.c_coulomb;
        for i in 0..2 {
            assert!((s[(i, i)] - want).norm() < 1e-14);
        }
        assert!(s[(0, 1)].norm() < 1e-14 && s[(1, 0)].norm() < 1e-14);
    }
}

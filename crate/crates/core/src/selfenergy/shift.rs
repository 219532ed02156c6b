//! Energy shift of a localized electron: the electrostatic image term and
//! the radiative term assembled into the 2x2 spin matrix.

use std::f64::consts::PI;

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::dirac::{sandwich, FourMomentum};
use crate::fresnel::tm_static_reflection;
use crate::greens::static_green_numeric;
use crate::kinematics::MediumParams;
use crate::{Error, Result};

use super::{sigma_leading, sigma_next, SigmaCoefficients};

type C64 = Complex64;

fn check_distance(a: f64) -> Result<()> {
    if a > 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("distance a must be positive, got {a}")))
    }
}

/// Coulomb part of the self-energy and its energy shift in one spin state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoulombShift {
    pub coeffs: SigmaCoefficients,
    pub delta_e: f64,
}

/// `Sigma_Coulomb = -R0 e^2 / (16 pi a) gamma^0`, and
/// `dE = -R0 e^2 / (16 pi a) (m / p0) ubar gamma^0 u`.
pub fn coulomb_shift(medium: &MediumParams, a: f64, p: &FourMomentum) -> Result<CoulombShift> {
    check_distance(a)?;
    let coeffs = SigmaCoefficients { c_coulomb: tm_static_reflection(medium.n), ..Default::default() };
    // sandwich is in units of -e^2 / (32 pi a)
    let m = sandwich(&coeffs, p)?;
    let delta_e = -medium.e2 / (32.0 * PI * a) * m[(0, 0)].re;
    Ok(CoulombShift { coeffs, delta_e })
}

/// The same shift from the static Green function of the medium,
/// `dE = (e^2 / 2) G(x_a, x_a) (m / p0) ubar gamma^0 u`, with `G` from its
/// Fourier integral.
pub fn coulomb_shift_from_green(medium: &MediumParams, a: f64, p: &FourMomentum) -> Result<f64> {
    let g = static_green_numeric(medium.n, a)?.value;
    let u = crate::dirac::eigenspinor(1, p)?;
    let ug0u = (crate::dirac::bar(&u) * crate::dirac::gammas().upper[0] * u)[0].re;
    Ok(medium.e2 / 2.0 * g * p.mass / p.p0 * ug0u)
}

/// Second moments of the packet momentum: `<p_z^2>`, `<p_par^2>`,
/// `<p_x p_z>`, `<p_y p_z>`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Moments {
    pub pz2: f64,
    pub ppar2: f64,
    pub pxpz: f64,
    pub pypz: f64,
}

impl Moments {
    /// Moments of a sharp momentum.
    pub fn sharp(p: &FourMomentum) -> Self {
        let [px, py, pz] = p.p;
        Moments { pz2: pz * pz, ppar2: px * px + py * py, pxpz: px * pz, pypz: py * pz }
    }

    /// Check the moments against the mean momentum: second moments bound the
    /// squared means, and Cauchy-Schwarz bounds the cross moments.
    pub fn validate(&self, p: &FourMomentum) -> Result<()> {
        let vals = [self.pz2, self.ppar2, self.pxpz, self.pypz];
        if vals.iter().any(|v| !v.is_finite()) {
            return Err(Error::InconsistentMoments("moments must be finite".into()));
        }
        let slack = |x: f64| 1e-12 * x.abs().max(1e-300);
        let pz2 = p.p[2] * p.p[2];
        if self.pz2 < pz2 - slack(pz2) {
            return Err(Error::InconsistentMoments(format!("<p_z^2> = {} < p_z^2 = {}", self.pz2, pz2)));
        }
        let pp2 = p.p_par_sq();
        if self.ppar2 < pp2 - slack(pp2) {
            return Err(Error::InconsistentMoments(format!("<p_par^2> = {} < p_par^2 = {}", self.ppar2, pp2)));
        }
        let cross = self.pxpz * self.pxpz + self.pypz * self.pypz;
        let bound = self.pz2 * self.ppar2;
        if cross > bound + slack(bound) {
            return Err(Error::InconsistentMoments(format!(
                "<p_x p_z>^2 + <p_y p_z>^2 = {cross} exceeds <p_z^2><p_par^2> = {bound}"
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShiftResult {
    pub n: f64,
    pub a: f64,
    pub p: FourMomentum,
    pub moments: Moments,
    /// Coefficients used (leading radiative order plus Coulomb).
    pub coeffs: SigmaCoefficients,
    /// Spin matrix `(m/E) ubar_i Sigma u_j` in energy units.
    pub spin_matrix: Matrix2<C64>,
    /// Eigenvalues of the spin matrix, ascending.
    pub delta_e: [f64; 2],
    /// Diagonal element and the `(2, 1)` element.
    pub diagonal: f64,
    pub off_diagonal: C64,
    /// Next-order radiative correction to the diagonal element.
    pub next_order: f64,
}

/// Energy shift of a packet with mean momentum `p` and second moments
/// `moments` at distance `a`, to leading order in `1 / (p0 a)`.
///
/// The diagonal element is
/// `-e^2/(32 pi a E^2) (c_z <p_z^2> + c_par <p_par^2> + 2 R0 E^2)` and the
/// spin-flip element
/// `-e^2/(32 pi a E^2) (c_par + 2 R0 E / (E + m)) <(p_x + i p_y) p_z>`;
/// the shifts are the eigenvalues `D -+ |O|`.
pub fn total_shift(medium: &MediumParams, a: f64, p: &FourMomentum, moments: &Moments) -> Result<ShiftResult> {
    check_distance(a)?;
    moments.validate(p)?;
    let n = medium.n;
    let r0 = tm_static_reflection(n);
    let lead = sigma_leading(n)?;
    let coeffs = SigmaCoefficients { c_coulomb: r0, ..lead };
    let e = p.p0;
    let pref = -medium.e2 / (32.0 * PI * a * e * e);
    let diagonal = pref * (lead.c_z * moments.pz2 + lead.c_par * moments.ppar2 + 2.0 * r0 * e * e);
    let off_diagonal = C64::new(moments.pxpz, moments.pypz) * (pref * (lead.c_par + 2.0 * r0 * e / (e + p.mass)));
    let spin_matrix = Matrix2::new(C64::new(diagonal, 0.0), off_diagonal.conj(), off_diagonal, C64::new(diagonal, 0.0));
    let eig = spin_matrix.symmetric_eigen().eigenvalues;
    let mut delta_e = [eig[0], eig[1]];
    delta_e.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let b = sigma_next(n)?;
    let next_order = -medium.e2 / (32.0 * PI * PI * a * a * e * e * e)
        * (b.c0 * e * e + b.c_par * moments.ppar2 + b.c_z * moments.pz2);
    Ok(ShiftResult {
        n,
        a,
        p: *p,
        moments: *moments,
        coeffs,
        spin_matrix,
        delta_e,
        diagonal,
        off_diagonal,
        next_order,
    })
}

/// `D -+ |O|` written out, for comparison with the eigen-solve.
pub fn shift_closed_form(medium: &MediumParams, a: f64, p: &FourMomentum, moments: &Moments) -> Result<[f64; 2]> {
    check_distance(a)?;
    let n = medium.n;
    let nn = n * n;
    let e = p.p0;
    let r0 = tm_static_reflection(n);
    let cpar = nn * (nn - 1.0) / ((nn + 1.0) * (nn + 1.0));
    let cz = 2.0 * (2.0 * nn * nn - nn - 1.0) / ((nn + 1.0) * (nn + 1.0));
    let pref = -medium.e2 / (32.0 * PI * a * e * e);
    let d = cz * moments.pz2 + cpar * moments.ppar2 + 2.0 * r0 * e * e;
    let o = (cpar + 2.0 * r0 * e / (e + p.mass)) * moments.pxpz.hypot(moments.pypz);
    let mut v = [pref * (d + o), pref * (d - o)];
    v.sort_by(|x, y| x.partial_cmp(y).unwrap());
    Ok(v)
}

/// Spin matrix of the leading self-energy between sharp-momentum spinors,
/// in energy units.
pub fn sharp_spin_matrix(medium: &MediumParams, a: f64, p: &FourMomentum) -> Result<Matrix2<C64>> {
    check_distance(a)?;
    let coeffs = SigmaCoefficients { c_coulomb: tm_static_reflection(medium.n), ..sigma_leading(medium.n)? };
    Ok(sandwich(&coeffs, p)? * C64::new(-medium.e2 / (32.0 * PI * a), 0.0))
}

//! Wave vectors on both sides of the interface and the polarization vectors
//! and metric tensors of the four photon modes.
//!
//! A mode is labelled by the vacuum-side wave vector `(k_par, k_z)`. The
//! medium-side normal component `k_z^d` follows from `n^2 k_z^2 + (n^2 - 1) k_par^2`
//! with the sign of `k_z`; for evanescent modes (`k_z = -i kappa`) the square
//! root has a cut and the sheet is recorded in [`WaveVector::side`].

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

pub use crate::quad::CutSide;
use crate::{Error, Result};

/// Heaviside-Lorentz coupling `e^2 = 4 pi alpha` with `alpha = 1/137`.
pub const DEFAULT_E2: f64 = 4.0 * PI / 137.0;

/// Minkowski metric `diag(+1, -1, -1, -1)`.
pub const METRIC: [f64; 4] = [1.0, -1.0, -1.0, -1.0];

type C64 = Complex64;

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Refractive index and coupling.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MediumParams {
    pub n: f64,
    pub e2: f64,
}

impl MediumParams {
    pub fn new(n: f64) -> Result<Self> {
        Self::with_coupling(n, DEFAULT_E2)
    }

    pub fn with_coupling(n: f64, e2: f64) -> Result<Self> {
        check_index(n)?;
        if !(e2 > 0.0 && e2.is_finite()) {
            return Err(Error::domain(format!("coupling e^2 must be positive, got {e2}")));
        }
        Ok(MediumParams { n, e2 })
    }

    /// `sqrt(n^2 - 1)`; the cut ends at `k_z = -i k_par sqrt(n^2 - 1) / n`.
    pub fn cut_factor(&self) -> f64 {
        (self.n * self.n - 1.0).sqrt()
    }
}

pub(crate) fn check_index(n: f64) -> Result<()> {
    if n.is_finite() && n >= 1.0 {
        Ok(())
    } else {
        Err(Error::RefractiveIndex(n))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarization {
    TE,
    TM,
    /// Scalar ("Coulomb") mode, `e = (1, 0, 0, 0)`.
    C,
    /// Longitudinal gauge mode, `e = (0, k) / |k|`.
    G,
}

impl Polarization {
    pub const ALL: [Polarization; 4] = [Polarization::TE, Polarization::TM, Polarization::C, Polarization::G];
    pub const TRANSVERSE: [Polarization; 2] = [Polarization::TE, Polarization::TM];

    /// Diagonal entry `g^{sigma sigma}` of the mode metric: `+1` for C,
    /// `-1` otherwise.
    pub fn metric_sign(self) -> f64 {
        match self {
            Polarization::C => 1.0,
            _ => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Polarization::TE => "TE",
            Polarization::TM => "TM",
            Polarization::C => "C",
            Polarization::G => "G",
        }
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Polarization {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "TE" => Ok(Polarization::TE),
            "TM" => Ok(Polarization::TM),
            "C" => Ok(Polarization::C),
            "G" => Ok(Polarization::G),
            _ => Err(Error::domain(format!("unknown polarization '{s}'"))),
        }
    }
}

/// Vacuum-side wave vector together with its medium-side partner.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WaveVector {
    k_par: [f64; 2],
    k_z: C64,
    k_z_d: C64,
    omega: f64,
    n: f64,
    side: Option<CutSide>,
}

/// Analytic continuation of `k_z^d` off the real axis:
/// `n k_z sqrt(1 + (n^2 - 1) k_par^2 / (n^2 k_z^2))` with the principal root.
/// Along the negative imaginary axis this is continuous from the right for
/// `|k_z| < k_par sqrt(n^2 - 1) / n`, where it jumps sign across the cut.
pub fn kz_d_continued(k_par: f64, k_z: C64, n: f64) -> C64 {
    let ratio = (n * n - 1.0) * k_par * k_par / (n * n * k_z * k_z);
    n * k_z * (1.0 + ratio).sqrt()
}

/// Build the wave vector for `(k_par, k_z)`; on the cut the left bank is
/// used. `k_z` must be real, or purely imaginary with `-k_par < Im k_z < 0`.
pub fn make_wavevector(k_par: [f64; 2], k_z: C64, medium: &MediumParams) -> Result<WaveVector> {
    WaveVector::on_side(k_par, k_z, CutSide::Left, medium.n)
}

impl WaveVector {
    /// As [`make_wavevector`] with an explicit cut bank (ignored off the cut).
    pub fn on_side(k_par: [f64; 2], k_z: C64, side: CutSide, n: f64) -> Result<Self> {
        check_index(n)?;
        if !(k_par[0].is_finite() && k_par[1].is_finite() && k_z.re.is_finite() && k_z.im.is_finite()) {
            return Err(Error::domain("wave vector components must be finite"));
        }
        if k_z.im > 0.0 {
            return Err(Error::NonNormalizable(k_z));
        }
        let kp2 = k_par[0] * k_par[0] + k_par[1] * k_par[1];
        let cf = n * n - 1.0;
        if k_z.im == 0.0 {
            let kz = k_z.re;
            let sign = if kz.is_sign_negative() { -1.0 } else { 1.0 };
            let kzd = sign * (n * n * kz * kz + cf * kp2).sqrt();
            return Ok(WaveVector {
                k_par,
                k_z: c(kz),
                k_z_d: c(kzd),
                omega: (kz * kz + kp2).sqrt(),
                n,
                side: None,
            });
        }
        if k_z.re != 0.0 {
            return Err(Error::domain(format!(
                "k_z = {k_z} is neither real nor purely imaginary; it has no real frequency"
            )));
        }
        let kappa = -k_z.im;
        if kappa * kappa >= kp2 {
            return Err(Error::FrequencyCut(k_z));
        }
        let disc = cf * kp2 - n * n * kappa * kappa;
        let (k_z_d, side) = if disc > 0.0 {
            let big_k = disc.sqrt();
            match side {
                CutSide::Left => (c(-big_k), Some(CutSide::Left)),
                CutSide::Right => (c(big_k), Some(CutSide::Right)),
            }
        } else {
            (C64::new(0.0, -(-disc).sqrt()), None)
        };
        Ok(WaveVector {
            k_par,
            k_z: C64::new(0.0, -kappa),
            k_z_d,
            omega: (kp2 - kappa * kappa).sqrt(),
            n,
            side,
        })
    }

    /// Wave vector labelled by the medium-side component `k_z^d` (real).
    /// Right-incident modes have `k_z^d < 0`; below `|k_z^d| = k_par sqrt(n^2 - 1)`
    /// the vacuum side is evanescent and the sign of `k_z^d` selects the bank.
    pub fn from_kz_d(k_par: [f64; 2], k_z_d: f64, n: f64) -> Result<Self> {
        check_index(n)?;
        if !(k_z_d.is_finite() && k_par[0].is_finite() && k_par[1].is_finite()) {
            return Err(Error::domain("wave vector components must be finite"));
        }
        let kp2 = k_par[0] * k_par[0] + k_par[1] * k_par[1];
        let disc = k_z_d * k_z_d - (n * n - 1.0) * kp2;
        let (k_z, side) = if disc >= 0.0 {
            let sign = if k_z_d.is_sign_negative() { -1.0 } else { 1.0 };
            (c(sign * disc.sqrt() / n), None)
        } else {
            let s = if k_z_d < 0.0 { CutSide::Left } else { CutSide::Right };
            (C64::new(0.0, -(-disc).sqrt() / n), Some(s))
        };
        Ok(WaveVector {
            k_par,
            k_z,
            k_z_d: c(k_z_d),
            omega: (k_z_d * k_z_d + kp2).sqrt() / n,
            n,
            side,
        })
    }

    pub fn k_par(&self) -> [f64; 2] {
        self.k_par
    }

    pub fn k_par_mag(&self) -> f64 {
        self.k_par[0].hypot(self.k_par[1])
    }

    pub fn k_z(&self) -> C64 {
        self.k_z
    }

    pub fn k_z_d(&self) -> C64 {
        self.k_z_d
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn n(&self) -> f64 {
        self.n
    }

    /// Cut bank for evanescent modes inside the cut, `None` elsewhere.
    pub fn side(&self) -> Option<CutSide> {
        self.side
    }

    /// `k_par sqrt(n^2 - 1)`, the end point of the cut in `k_z^d`.
    pub fn gamma_cut(&self) -> f64 {
        self.k_par_mag() * (self.n * self.n - 1.0).sqrt()
    }

    pub fn is_propagating(&self) -> bool {
        self.k_z.im == 0.0
    }

    pub fn is_evanescent(&self) -> bool {
        self.k_z.im != 0.0
    }

    /// `|k|^2 = k_par^2 + k_z^2` (complex for evanescent modes).
    pub fn k_squared(&self) -> C64 {
        let kp2 = self.k_par[0] * self.k_par[0] + self.k_par[1] * self.k_par[1];
        self.k_z * self.k_z + kp2
    }

    /// The propagating mode with both normal components reversed.
    pub fn reversed(&self) -> Result<Self> {
        if !self.is_propagating() {
            return Err(Error::domain("reversal is defined for propagating modes only"));
        }
        WaveVector::on_side(self.k_par, c(-self.k_z.re), CutSide::Left, self.n)
    }

    /// The same evanescent `k_z` on the other bank of the cut, i.e. with
    /// `k_z^d -> -k_z^d`.
    pub fn across_cut(&self) -> Result<Self> {
        let side = match self.side {
            Some(CutSide::Left) => CutSide::Right,
            Some(CutSide::Right) => CutSide::Left,
            None => return Err(Error::domain("mode does not lie on the cut")),
        };
        WaveVector::on_side(self.k_par, self.k_z, side, self.n)
    }
}

/// Polarization four-vector `e^mu_sigma(k)` (contravariant, complex for
/// evanescent modes).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarizationVector {
    pub sigma: Polarization,
    pub e: [C64; 4],
}

fn components(k: &WaveVector) -> (f64, f64, C64, f64) {
    let [kx, ky] = k.k_par;
    (kx, ky, k.k_z, k.k_par_mag())
}

/// Polarization vector of mode `sigma` at `k`.
pub fn polarization_vector(sigma: Polarization, k: &WaveVector) -> Result<PolarizationVector> {
    let (kx, ky, kz, kp) = components(k);
    let zero = c(0.0);
    let e = match sigma {
        Polarization::TE => {
            if kp == 0.0 {
                return Err(Error::DegenerateDirection(sigma));
            }
            [zero, c(ky / kp), c(-kx / kp), zero]
        }
        Polarization::TM => {
            if kp == 0.0 {
                return Err(Error::DegenerateDirection(sigma));
            }
            let k2 = k.k_squared();
            if k2.norm() == 0.0 {
                return Err(Error::PoleOnShell(sigma));
            }
            let norm = k2.sqrt() * kp;
            [zero, kx * kz / norm, ky * kz / norm, c(-kp * kp) / norm]
        }
        Polarization::G => {
            let k2 = k.k_squared();
            if k2.norm() == 0.0 {
                return Err(Error::PoleOnShell(sigma));
            }
            let kk = k2.sqrt();
            [zero, kx / kk, ky / kk, kz / kk]
        }
        Polarization::C => [c(1.0), zero, zero, zero],
    };
    Ok(PolarizationVector { sigma, e })
}

/// Metric tensor `g^{mu nu}_sigma(k)` of one mode, as it appears in the
/// reflected part of the propagator: `g^{sigma sigma} e^mu(k) e^nu(k_r)` with
/// `k_r = (k_par, -k_z)` the reflected wave vector. Derivatives acting on
/// the source point turn into `-i k` without complex conjugation, so the
/// mixed entries `g^{3m}` carry no conjugate.
pub fn polarization_metric(sigma: Polarization, k: &WaveVector) -> Result<[[C64; 4]; 4]> {
    let (kx, ky, kz, kp) = components(k);
    let km = [kx, ky];
    let mut g = [[c(0.0); 4]; 4];
    match sigma {
        Polarization::C => g[0][0] = c(1.0),
        Polarization::TE => {
            if kp == 0.0 {
                return Err(Error::DegenerateDirection(sigma));
            }
            for m in 0..2 {
                for nn in 0..2 {
                    let delta = if m == nn { 1.0 } else { 0.0 };
                    g[m + 1][nn + 1] = c(-(delta - km[m] * km[nn] / (kp * kp)));
                }
            }
        }
        Polarization::TM => {
            if kp == 0.0 {
                return Err(Error::DegenerateDirection(sigma));
            }
            let k2 = k.k_squared();
            if k2.norm() == 0.0 {
                return Err(Error::PoleOnShell(sigma));
            }
            for m in 0..2 {
                for nn in 0..2 {
                    g[m + 1][nn + 1] = km[m] * km[nn] * kz * kz / (k2 * kp * kp);
                }
                g[m + 1][3] = km[m] * kz / k2;
                g[3][m + 1] = -km[m] * kz / k2;
            }
            g[3][3] = c(-kp * kp) / k2;
        }
        Polarization::G => {
            let k2 = k.k_squared();
            if k2.norm() == 0.0 {
                return Err(Error::PoleOnShell(sigma));
            }
            for m in 0..2 {
                for nn in 0..2 {
                    g[m + 1][nn + 1] = c(-km[m] * km[nn]) / k2;
                }
                g[m + 1][3] = km[m] * kz / k2;
                g[3][m + 1] = -km[m] * kz / k2;
            }
            g[3][3] = kz * kz / k2;
        }
    }
    Ok(g)
}

/// Completeness of the mode basis at a propagating `k` with `k_par != 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CompletenessResidual {
    /// `max |sum_sigma g^{sigma sigma} e_sigma e_sigma - g|` over all four modes.
    pub full: f64,
    /// Same for TE + TM against the transverse projector
    /// `g - eta eta + khat khat`.
    pub transverse: f64,
    /// `max |e_sigma . e_sigma' - g_{sigma sigma'}|`.
    pub orthonormality: f64,
}

pub fn completeness_residual(k: &WaveVector) -> Result<CompletenessResidual> {
    if !k.is_propagating() {
        return Err(Error::domain("completeness is checked on real wave vectors"));
    }
    let mut vecs = Vec::new();
    for sigma in Polarization::ALL {
        vecs.push((sigma, polarization_vector(sigma, k)?.e));
    }
    let kk = k.k_squared().re.sqrt();
    let khat = [0.0, k.k_par[0] / kk, k.k_par[1] / kk, k.k_z.re / kk];
    let mut full: f64 = 0.0;
    let mut transverse: f64 = 0.0;
    for mu in 0..4 {
        for nu in 0..4 {
            let g = if mu == nu { METRIC[mu] } else { 0.0 };
            let eta = if mu == 0 && nu == 0 { 1.0 } else { 0.0 };
            let mut all = c(0.0);
            let mut tr = c(0.0);
            for (sigma, e) in &vecs {
                let term = sigma.metric_sign() * e[mu] * e[nu];
                all += term;
                if matches!(sigma, Polarization::TE | Polarization::TM) {
                    tr += term;
                }
            }
            full = full.max((all - g).norm());
            transverse = transverse.max((tr - (g - eta + khat[mu] * khat[nu])).norm());
        }
    }
    let mut orthonormality: f64 = 0.0;
    for (s1, e1) in &vecs {
        for (s2, e2) in &vecs {
            let dot: C64 = (0..4).map(|mu| METRIC[mu] * e1[mu] * e2[mu]).sum();
            let target = if s1 == s2 { s1.metric_sign() } else { 0.0 };
            orthonormality = orthonormality.max((dot - target).norm());
        }
    }
    Ok(CompletenessResidual { full, transverse, orthonormality })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn medium(n: f64) -> MediumParams {
        MediumParams::new(n).unwrap()
    }

    #[test]
    fn propagating_partner() {
        let k = make_wavevector([1.0, 0.0], c(1.0), &medium(2.0)).unwrap();
        assert!((k.k_z_d().re - 7f64.sqrt()).abs() < 1e-15);
        assert!((k.omega() - 2f64.sqrt()).abs() < 1e-15);
        let back = make_wavevector([1.0, 0.0], c(-1.0), &medium(2.0)).unwrap();
        assert!((back.k_z_d().re + 7f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn cut_banks() {
        let kz = C64::new(0.0, -0.5);
        let left = WaveVector::on_side([1.0, 0.0], kz, CutSide::Left, 2.0).unwrap();
        let right = WaveVector::on_side([1.0, 0.0], kz, CutSide::Right, 2.0).unwrap();
        // K = sqrt((n^2 - 1) k_par^2 - n^2 kappa^2) = sqrt(2)
        assert!((left.k_z_d().re + 2f64.sqrt()).abs() < 1e-15);
        assert!((right.k_z_d().re - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(left.across_cut().unwrap(), right);
        // continuation approaches the banks from either side
        let eps = 1e-9;
        let l = kz_d_continued(1.0, C64::new(-eps, -0.5), 2.0);
        let r = kz_d_continued(1.0, C64::new(eps, -0.5), 2.0);
        assert!((l - left.k_z_d()).norm() < 1e-6);
        assert!((r - right.k_z_d()).norm() < 1e-6);
    }

    #[test]
    fn below_cut_is_doubly_evanescent() {
        // cut ends at kappa = sqrt(3)/2; the frequency cut starts at kappa = 1
        let k = make_wavevector([1.0, 0.0], C64::new(0.0, -0.95), &medium(2.0)).unwrap();
        assert!(k.side().is_none());
        assert!(k.k_z_d().re == 0.0 && k.k_z_d().im < 0.0);
    }

    #[test]
    fn errors() {
        let m = medium(1.5);
        assert!(matches!(
            make_wavevector([1.0, 0.0], C64::new(0.0, 0.3), &m),
            Err(Error::NonNormalizable(_))
        ));
        assert!(matches!(
            make_wavevector([1.0, 0.0], C64::new(0.0, -1.0), &m),
            Err(Error::FrequencyCut(_))
        ));
        assert!(MediumParams::new(0.9).is_err());
        let axial = make_wavevector([0.0, 0.0], c(1.0), &m).unwrap();
        assert!(matches!(
            polarization_vector(Polarization::TE, &axial),
            Err(Error::DegenerateDirection(Polarization::TE))
        ));
        assert!(polarization_vector(Polarization::G, &axial).is_ok());
    }

    #[test]
    fn from_kz_d_round_trip() {
        let k = make_wavevector([0.3, -0.4], c(-0.7), &medium(1.7)).unwrap();
        let back = WaveVector::from_kz_d(k.k_par(), k.k_z_d().re, 1.7).unwrap();
        assert!((back.k_z() - k.k_z()).norm() < 1e-15);
        let ev = WaveVector::from_kz_d([1.0, 0.0], -0.5, 2.0).unwrap();
        assert_eq!(ev.side(), Some(CutSide::Left));
        assert!((ev.k_z().im + (3.0 - 0.25f64).sqrt() / 2.0).abs() < 1e-15);
    }

    #[test]
    fn metric_is_outer_product_with_reflected_vector() {
        let k = make_wavevector([0.6, -0.2], c(0.9), &medium(2.0)).unwrap();
        let kr = make_wavevector([0.6, -0.2], c(-0.9), &medium(2.0)).unwrap();
        for sigma in Polarization::ALL {
            let e = polarization_vector(sigma, &k).unwrap().e;
            let er = polarization_vector(sigma, &kr).unwrap().e;
            let g = polarization_metric(sigma, &k).unwrap();
            for mu in 0..4 {
                for nu in 0..4 {
                    let want = sigma.metric_sign() * e[mu] * er[nu];
                    assert!((g[mu][nu] - want).norm() < 1e-15, "{sigma} {mu}{nu}");
                }
            }
        }
    }

    #[test]
    fn basis_is_complete() {
        let k = make_wavevector([0.3, 0.4], c(1.2), &medium(2.0)).unwrap();
        let r = completeness_residual(&k).unwrap();
        assert!(r.full < 1e-15 && r.transverse < 1e-15 && r.orthonormality < 1e-15, "{r:?}");
    }
}

//! Reflection and transmission coefficients of left-incident (from the
//! vacuum) and right-incident (from the medium) modes, the identities that
//! relate them, and the reflection profile on the Euclidean pole.

use num_complex::Complex64;

use crate::kinematics::{check_index, Polarization, WaveVector};
use crate::{Error, Result};

type C64 = Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Incidence {
    Left,
    Right,
}

/// Reflection and transmission amplitude of one mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Amplitudes {
    pub r: C64,
    pub t: C64,
}

/// Left-incident coefficients as analytic functions of `(k_z, k_z^d)`. No
/// incidence check is made; these are the raw formulas used for flipped
/// arguments and continuation off the real axis.
pub fn left_amplitudes(sigma: Polarization, k_z: C64, k_z_d: C64, n: f64) -> Amplitudes {
    let n2 = n * n;
    match sigma {
        Polarization::TE => Amplitudes {
            r: (k_z - k_z_d) / (k_z + k_z_d),
            t: 2.0 * n * k_z / (k_z + k_z_d),
        },
        Polarization::TM => Amplitudes {
            r: (n2 * k_z - k_z_d) / (n2 * k_z + k_z_d),
            t: 2.0 * n2 * k_z / (n2 * k_z + k_z_d),
        },
        Polarization::C => Amplitudes {
            r: (k_z - n2 * k_z_d) / (k_z + n2 * k_z_d),
            t: 2.0 * n2 * k_z / (k_z + n2 * k_z_d),
        },
        Polarization::G => Amplitudes {
            r: (k_z - n2 * k_z_d) / (k_z + n2 * k_z_d),
            t: 2.0 * n * k_z / (k_z + n2 * k_z_d),
        },
    }
}

/// Right-incident coefficients as analytic functions of `(k_z, k_z^d)`.
pub fn right_amplitudes(sigma: Polarization, k_z: C64, k_z_d: C64, n: f64) -> Amplitudes {
    let n2 = n * n;
    match sigma {
        Polarization::TE => Amplitudes {
            r: (k_z_d - k_z) / (k_z + k_z_d),
            t: 2.0 * k_z_d / (n * (k_z_d + k_z)),
        },
        Polarization::TM => Amplitudes {
            r: (k_z_d - n2 * k_z) / (k_z_d + n2 * k_z),
            t: 2.0 * k_z_d / (k_z_d + n2 * k_z),
        },
        Polarization::C => Amplitudes {
            r: (n2 * k_z_d - k_z) / (n2 * k_z_d + k_z),
            t: 2.0 * k_z_d / (n2 * k_z_d + k_z),
        },
        Polarization::G => Amplitudes {
            r: (n2 * k_z_d - k_z) / (n2 * k_z_d + k_z),
            t: 2.0 * n * k_z_d / (n2 * k_z_d + k_z),
        },
    }
}

/// Coefficients of all four modes at one wave vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FresnelSet {
    pub incidence: Incidence,
    pub at: WaveVector,
    amps: [Amplitudes; 4],
}

impl FresnelSet {
    fn index(sigma: Polarization) -> usize {
        match sigma {
            Polarization::TE => 0,
            Polarization::TM => 1,
            Polarization::C => 2,
            Polarization::G => 3,
        }
    }

    pub fn get(&self, sigma: Polarization) -> Amplitudes {
        self.amps[Self::index(sigma)]
    }

    pub fn r(&self, sigma: Polarization) -> C64 {
        self.get(sigma).r
    }

    pub fn t(&self, sigma: Polarization) -> C64 {
        self.get(sigma).t
    }
}

/// Coefficients of the left-incident mode; needs real `k_z > 0`.
pub fn left_coefficients(k: &WaveVector) -> Result<FresnelSet> {
    if !(k.is_propagating() && k.k_z().re > 0.0) {
        return Err(Error::WrongIncidence {
            side: "left",
            detail: format!("needs real k_z > 0, got {}", k.k_z()),
        });
    }
    let amps = Polarization::ALL.map(|s| left_amplitudes(s, k.k_z(), k.k_z_d(), k.n()));
    Ok(FresnelSet { incidence: Incidence::Left, at: *k, amps })
}

/// Coefficients of the right-incident mode; needs real `k_z^d < 0`, or an
/// evanescent vacuum side (either bank of the cut).
pub fn right_coefficients(k: &WaveVector) -> Result<FresnelSet> {
    let ok = (k.is_propagating() && k.k_z_d().re < 0.0) || k.side().is_some();
    if !ok {
        return Err(Error::WrongIncidence {
            side: "right",
            detail: format!("needs real k_z^d < 0 or an evanescent mode, got k_z^d = {}", k.k_z_d()),
        });
    }
    let amps = Polarization::ALL.map(|s| right_amplitudes(s, k.k_z(), k.k_z_d(), k.n()));
    Ok(FresnelSet { incidence: Incidence::Right, at: *k, amps })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum IdentityFamily {
    /// Relations for real `k_z` (six of them).
    Real,
    /// Relations for imaginary `k_z` inside the cut (four of them).
    Imaginary,
}

/// Residual of one Fresnel identity for one mode. `relation` is 1-based
/// within its family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityResidual {
    pub family: IdentityFamily,
    pub relation: u8,
    pub sigma: Polarization,
    pub residual: f64,
}

/// Evaluate the flux and reciprocity identities at `k`, for all four modes.
///
/// For real `k_z` the "flipped" arguments `(-k_z, -k_z^d)` are taken from a
/// freshly built wave vector. For imaginary `k_z`, `-k_z^d` means the same
/// `k_z` on the other bank of the cut.
pub fn identity_residuals(k: &WaveVector) -> Result<Vec<IdentityResidual>> {
    let n = k.n();
    let n2 = n * n;
    let mut out = Vec::with_capacity(24);
    if k.is_propagating() {
        if k.k_z().re == 0.0 {
            return Err(Error::domain("identities are singular at k_z = 0"));
        }
        let f = k.reversed()?;
        let (kz, kzd) = (k.k_z(), k.k_z_d());
        let (fz, fzd) = (f.k_z(), f.k_z_d());
        let w = kzd / (n2 * kz);
        for sigma in Polarization::ALL {
            let l = left_amplitudes(sigma, kz, kzd, n);
            let lf = left_amplitudes(sigma, fz, fzd, n);
            let r = right_amplitudes(sigma, kz, kzd, n);
            let rf = right_amplitudes(sigma, fz, fzd, n);
            let rel = [
                (kz / kzd * n2 * rf.t.conj() * rf.t + l.r.conj() * l.r - 1.0).norm(),
                (w * l.t * l.t.conj() + rf.r * rf.r.conj() - 1.0).norm(),
                (w * lf.r * lf.t.conj() + r.t * r.r.conj()).norm(),
                (w * l.r.conj() * l.t + rf.r * rf.t.conj()).norm(),
                (rf.r.conj() - r.r).norm(),
                (w * l.t - r.t).norm(),
            ];
            for (i, residual) in rel.into_iter().enumerate() {
                out.push(IdentityResidual {
                    family: IdentityFamily::Real,
                    relation: i as u8 + 1,
                    sigma,
                    residual,
                });
            }
        }
    } else {
        let x = k.across_cut().map_err(|_| {
            Error::domain("imaginary-k_z identities hold inside the cut |k_z| < k_par sqrt(n^2-1)/n")
        })?;
        let (kz, kzd, xzd) = (k.k_z(), k.k_z_d(), x.k_z_d());
        for sigma in Polarization::ALL {
            let r = right_amplitudes(sigma, kz, kzd, n);
            let rx = right_amplitudes(sigma, x.k_z(), xzd, n);
            let rel = [
                (r.r * r.r.conj() - 1.0).norm(),
                (rx.r.conj() - r.r).norm(),
                (rx.r.conj() * rx.t - r.t).norm(),
                (rx.r * rx.t.conj() - r.t.conj()).norm(),
            ];
            for (i, residual) in rel.into_iter().enumerate() {
                out.push(IdentityResidual {
                    family: IdentityFamily::Imaginary,
                    relation: i as u8 + 1,
                    sigma,
                    residual,
                });
            }
        }
    }
    Ok(out)
}

/// `|T^R(k_z, -k_z^d) - conj(T^R(k_z, k_z^d))|` on the cut, the relation that
/// makes the propagator symmetric in its arguments.
pub fn conjugation_residual(sigma: Polarization, k: &WaveVector) -> Result<f64> {
    let x = k.across_cut()?;
    let a = right_amplitudes(sigma, k.k_z(), k.k_z_d(), k.n()).t;
    let b = right_amplitudes(sigma, x.k_z(), x.k_z_d(), k.n()).t;
    Ok((b - a.conj()).norm())
}

/// Whether a relation is expected to hold for a mode with the coefficients
/// as tabulated. The G-mode transmission amplitudes differ from the
/// C-mode ones by `1/n` (left) and `n` (right); products `T^L T^R` and
/// everything built from reflections are unaffected, but relations that
/// weigh a single transmission amplitude against a reflection are not.
pub fn identity_expected(family: IdentityFamily, relation: u8, sigma: Polarization) -> bool {
    match (family, sigma) {
        (IdentityFamily::Real, Polarization::G) => relation == 5,
        _ => true,
    }
}

/// `R^L` on the Euclidean pole `k_z = -i rho`, `k_par = rho sqrt(1 - t^2)`,
/// where it depends on `t` alone: with `s = sqrt((n^2 - 1) t^2 + 1)`,
/// TE: `(1 - s) / (1 + s)`, TM: `(n^2 - s) / (n^2 + s)`,
/// C and G: `(1 - n^2 s) / (1 + n^2 s)`.
pub fn reflection_profile(sigma: Polarization, t: f64, n: f64) -> Result<f64> {
    check_index(n)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::domain(format!("t must lie in [0, 1], got {t}")));
    }
    let n2 = n * n;
    let s = ((n2 - 1.0) * t * t + 1.0).sqrt();
    Ok(match sigma {
        Polarization::TE => {
            // (1 - s) / (1 + s) = -(s^2 - 1) / (1 + s)^2 without cancellation
            -(n2 - 1.0) * t * t / ((1.0 + s) * (1.0 + s))
        }
        Polarization::TM => (n2 - s) / (n2 + s),
        Polarization::C | Polarization::G => (1.0 - n2 * s) / (1.0 + n2 * s),
    })
}

/// `R_TM(0) = (n^2 - 1) / (n^2 + 1)`, the static image-charge factor.
pub fn tm_static_reflection(n: f64) -> f64 {
    (n * n - 1.0) / (n * n + 1.0)
}

/// `(R(t) - R(0)) / t^2` evaluated without cancellation (TE and TM).
pub fn profile_difference_quotient(sigma: Polarization, t: f64, n: f64) -> Result<f64> {
    check_index(n)?;
    let n2 = n * n;
    let c = n2 - 1.0;
    let s = (c * t * t + 1.0).sqrt();
    match sigma {
        Polarization::TE => Ok(-c / ((1.0 + s) * (1.0 + s))),
        Polarization::TM => Ok(-2.0 * n2 * c / ((1.0 + s) * (n2 + s) * (n2 + 1.0))),
        _ => Err(Error::domain("difference quotient is provided for TE and TM")),
    }
}

/// Second derivative of the profile at `t = 0`.
pub fn profile_curvature(sigma: Polarization, n: f64) -> Result<f64> {
    check_index(n)?;
    let n2 = n * n;
    match sigma {
        Polarization::TE => Ok(-(n2 - 1.0) / 2.0),
        Polarization::TM => Ok(-2.0 * n2 * (n2 - 1.0) / ((n2 + 1.0) * (n2 + 1.0))),
        _ => Err(Error::domain("curvature is provided for TE and TM")),
    }
}

/// Limiting coefficients of an ideal conductor (`n -> inf`).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PerfectLimitSet {
    /// Left reflection `R^L` for TE, TM, C, G.
    pub r_left: [f64; 4],
    /// Left transmission seen from the vacuum, `T^L / n`.
    pub t_left_scaled: [f64; 4],
    /// Right-incident amplitudes `T^R`; the medium modes decouple.
    pub t_right: [f64; 4],
}

pub fn perfect_limit_set() -> PerfectLimitSet {
    PerfectLimitSet {
        r_left: [-1.0, 1.0, -1.0, -1.0],
        t_left_scaled: [0.0; 4],
        t_right: [0.0; 4],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::{make_wavevector, MediumParams};

    fn kv(kp: f64, kz: f64, n: f64) -> WaveVector {
        make_wavevector([kp, 0.0], C64::new(kz, 0.0), &MediumParams::new(n).unwrap()).unwrap()
    }

    #[test]
    fn normal_incidence_n2() {
        let set = left_coefficients(&kv(0.0, 1.0, 2.0)).unwrap();
        assert!((set.r(Polarization::TE) - C64::new(-1.0 / 3.0, 0.0)).norm() < 1e-15);
        assert!((set.r(Polarization::TM) - C64::new(1.0 / 3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn vacuum_limit() {
        let set = left_coefficients(&kv(0.7, 0.3, 1.0)).unwrap();
        for s in Polarization::ALL {
            assert!(set.r(s).norm() < 1e-15);
            assert!((set.t(s) - 1.0).norm() < 1e-15);
        }
    }

    #[test]
    fn incidence_checks() {
        assert!(matches!(left_coefficients(&kv(1.0, -1.0, 2.0)), Err(Error::WrongIncidence { .. })));
        assert!(matches!(right_coefficients(&kv(1.0, 1.0, 2.0)), Err(Error::WrongIncidence { .. })));
        assert!(right_coefficients(&kv(1.0, -1.0, 2.0)).is_ok());
    }

    #[test]
    fn profile_matches_coefficients_on_pole() {
        // k_z = -i rho, k_par = rho sqrt(1 - t^2) gives k_z^d = -i rho s
        let (rho, t, n) = (1.3, 0.4, 2.0);
        let s = ((n * n - 1.0) * t * t + 1.0f64).sqrt();
        let kz = C64::new(0.0, -rho);
        let kzd = C64::new(0.0, -rho * s);
        for sigma in Polarization::ALL {
            let r = left_amplitudes(sigma, kz, kzd, n).r;
            assert!((r.re - reflection_profile(sigma, t, n).unwrap()).abs() < 1e-15);
            assert!(r.im.abs() < 1e-15);
        }
    }

    #[test]
    fn difference_quotient_and_curvature() {
        let n = 2.0;
        for sigma in Polarization::TRANSVERSE {
            let r0 = reflection_profile(sigma, 0.0, n).unwrap();
            let t = 0.3;
            let direct = (reflection_profile(sigma, t, n).unwrap() - r0) / (t * t);
            assert!((direct - profile_difference_quotient(sigma, t, n).unwrap()).abs() < 1e-14);
            let q0 = profile_difference_quotient(sigma, 0.0, n).unwrap();
            assert!((2.0 * q0 - profile_curvature(sigma, n).unwrap()).abs() < 1e-15);
        }
    }

    #[test]
    fn large_index_approaches_perfect_conductor() {
        let lim = perfect_limit_set();
        // 1 - R_TM = 2 s / (n^2 + s) with s ~ n t: the approach is O(1/n)
        for n in [1e4, 1e6] {
            let r = reflection_profile(Polarization::TM, 0.5, n).unwrap();
            assert!(((lim.r_left[1] - r) * n - 1.0).abs() < 1e-3);
        }
        let set = left_coefficients(&kv(0.6, 0.8, 1e6)).unwrap();
        assert!((set.r(Polarization::TE).re - lim.r_left[0]).abs() < 1e-5);
        assert!((set.t(Polarization::TE) / 1e6).norm() < 1e-5);
    }
}

//! One-loop self-energy of an electron at distance `a` from the surface.
//!
//! On shell the reflected part of the self-energy is a combination of
//! `gamma^0 p0`, `gamma_par . p_par` and `gamma^3 p_z`, plus the static
//! `gamma^0` term from the Coulomb field. All coefficients are reported
//! dimensionless: the radiative ones multiply `-e^2 / (32 pi p0 a)`, the
//! Coulomb one multiplies `-e^2 / (16 pi a)`, so that
//!
//! `Sigma = -e^2 / (32 pi p0 a) [c_par gamma_par.p_par + c_z gamma^3 p_z + (c0 + 2 c_coulomb) gamma^0 p0]`.
//!
//! Denominators are evaluated at `p_par = 0`; the coefficients then depend
//! on the momentum only through `p0 a`.

mod asymptotic;
mod integrands;
mod quadrature;
mod shift;

use std::ops::{Add, Mul, Neg, Sub};

pub use asymptotic::*;
pub use integrands::*;
pub use quadrature::*;
pub use shift::*;

use crate::kinematics::check_index;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct SigmaCoefficients {
    /// `gamma^0 p0`
    pub c0: f64,
    /// `gamma_par . p_par`
    pub c_par: f64,
    /// `gamma^3 p_z`
    pub c_z: f64,
    /// bare `gamma^0`, in units of `-e^2 / (16 pi a)`
    pub c_coulomb: f64,
}

impl SigmaCoefficients {
    pub fn radiative(c0: f64, c_par: f64, c_z: f64) -> Self {
        SigmaCoefficients { c0, c_par, c_z, c_coulomb: 0.0 }
    }

    /// Full `gamma^0 p0` coefficient once the Coulomb term is folded in.
    pub fn gamma0_total(&self) -> f64 {
        self.c0 + 2.0 * self.c_coulomb
    }

    pub fn to_array(&self) -> [f64; 4] {
        [self.c0, self.c_par, self.c_z, self.c_coulomb]
    }

    pub fn max_abs(&self) -> f64 {
        self.to_array().iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (*self - *other).max_abs()
    }

    pub fn is_finite(&self) -> bool {
        self.to_array().iter().all(|x| x.is_finite())
    }
}

impl Add for SigmaCoefficients {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        SigmaCoefficients {
            c0: self.c0 + o.c0,
            c_par: self.c_par + o.c_par,
            c_z: self.c_z + o.c_z,
            c_coulomb: self.c_coulomb + o.c_coulomb,
        }
    }
}

impl Sub for SigmaCoefficients {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for SigmaCoefficients {
    type Output = Self;
    fn neg(self) -> Self {
        self * -1.0
    }
}

impl Mul<f64> for SigmaCoefficients {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        SigmaCoefficients { c0: self.c0 * s, c_par: self.c_par * s, c_z: self.c_z * s, c_coulomb: self.c_coulomb * s }
    }
}

impl std::iter::Sum for SigmaCoefficients {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::default(), |a, b| a + b)
    }
}

/// The reflecting half-space: a dielectric of index `n`, or the ideal
/// conductor with `R_TE = -1`, `R_TM = +1` at every angle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Reflector {
    Dielectric(f64),
    Perfect,
}

impl Reflector {
    pub fn dielectric(n: f64) -> Result<Self> {
        check_index(n)?;
        Ok(Reflector::Dielectric(n))
    }
}

/// The four pieces the TM integral is split into.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TmPiece {
    A,
    B,
    C,
    D,
}

impl TmPiece {
    pub const ALL: [TmPiece; 4] = [TmPiece::A, TmPiece::B, TmPiece::C, TmPiece::D];

    pub fn name(self) -> &'static str {
        match self {
            TmPiece::A => "A",
            TmPiece::B => "B",
            TmPiece::C => "C",
            TmPiece::D => "D",
        }
    }
}

pub(crate) fn check_p0a(p0a: f64) -> Result<()> {
    if p0a > 0.0 && p0a.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("p0 a must be positive and finite, got {p0a}")))
    }
}

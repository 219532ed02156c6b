//! Numerical integration: adaptive Gauss-Kronrod on finite and semi-infinite
//! ranges, piecewise-linear complex contours, the sine and cosine integrals,
//! and Richardson extrapolation.

mod contour;
mod gk;
mod richardson;
mod sici;

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

pub use contour::{integrate_contour, ContourSegment, ContourSpec, CutSide};
pub use gk::{
    integrate_adaptive, integrate_decaying, integrate_partitioned, integrate_semi_infinite,
    Integrator,
};
pub use richardson::{richardson, RichardsonResult};
pub use sici::{aux_fg, sici, SiCi};

/// Values that can be integrated: real scalars, complex scalars and small
/// fixed-size real vectors. `magnitude` is the norm used for error control.
pub trait QuadValue:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + Send + Sync
{
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Fixed-size real vector integrated component-wise; error control uses the
/// max norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vector<const N: usize>(pub [f64; N]);

impl<const N: usize> Default for Vector<N> {
    fn default() -> Self {
        Vector([0.0; N])
    }
}

impl<const N: usize> Add for Vector<N> {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a += b;
        }
        self
    }
}

impl<const N: usize> Sub for Vector<N> {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        for (a, b) in self.0.iter_mut().zip(rhs.0) {
            *a -= b;
        }
        self
    }
}

impl<const N: usize> Mul<f64> for Vector<N> {
    type Output = Self;
    fn mul(mut self, rhs: f64) -> Self {
        for a in self.0.iter_mut() {
            *a *= rhs;
        }
        self
    }
}

impl<const N: usize> QuadValue for Vector<N> {
    fn zero() -> Self {
        Self::default()
    }
    fn magnitude(&self) -> f64 {
        self.0.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// Absolute and relative error targets. A result is accepted once the error
/// estimate is below `max(abs, rel * |I|)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tol {
    pub abs: f64,
    pub rel: f64,
}

impl Tol {
    pub fn new(abs: f64, rel: f64) -> Self {
        Tol { abs, rel }
    }

    pub fn abs(abs: f64) -> Self {
        Tol { abs, rel: 0.0 }
    }

    pub fn rel(rel: f64) -> Self {
        Tol { abs: 0.0, rel }
    }

    pub fn bound(&self, magnitude: f64) -> f64 {
        self.abs.max(self.rel * magnitude)
    }

    pub(crate) fn validate(&self) -> crate::Result<()> {
        let ok = |x: f64| x.is_finite() && x >= 0.0;
        if !ok(self.abs) || !ok(self.rel) || (self.abs == 0.0 && self.rel == 0.0) {
            return Err(crate::Error::domain(format!(
                "tolerance must be non-negative and not both zero, got {self:?}"
            )));
        }
        Ok(())
    }
}

impl From<f64> for Tol {
    fn from(t: f64) -> Self {
        Tol { abs: t, rel: t }
    }
}

/// Outcome of an integration. `converged` is false when the interval budget
/// ran out or subdivision hit the floating-point floor before the error target
/// was met; the value and estimate are still the best available.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadResult<V> {
    pub value: V,
    pub error: f64,
    pub evaluations: usize,
    pub intervals: usize,
    pub converged: bool,
}

impl<V: QuadValue> QuadResult<V> {
    /// Turn a non-converged result into an error.
    pub fn require(self, what: &str, tol: Tol) -> crate::Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(crate::Error::NotConverged {
                what: what.to_string(),
                achieved: self.error,
                requested: tol.bound(self.value.magnitude()),
            })
        }
    }

    pub fn map<W>(self, f: impl FnOnce(V) -> W) -> QuadResult<W> {
        QuadResult {
            value: f(self.value),
            error: self.error,
            evaluations: self.evaluations,
            intervals: self.intervals,
            converged: self.converged,
        }
    }
}

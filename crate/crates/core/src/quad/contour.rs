use num_complex::Complex64;

use super::{Integrator, QuadResult, Tol};
use crate::{Error, Result};

/// Which bank of a branch cut a contour segment runs along. The cut of
/// `k_z^d(k_z)` lies on the negative imaginary `k_z` axis; `Left` is the
/// `Re k_z -> 0-` bank.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CutSide {
    Left,
    Right,
}

/// Straight piece of a contour. `side` tags segments that hug a cut so that
/// the integrand can pick the right sheet.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ContourSegment {
    pub start: Complex64,
    pub end: Complex64,
    pub side: Option<CutSide>,
}

impl ContourSegment {
    pub fn new(start: Complex64, end: Complex64, side: Option<CutSide>) -> Self {
        ContourSegment { start, end, side }
    }

    pub fn length(&self) -> f64 {
        (self.end - self.start).norm()
    }
}

/// Ordered chain of segments; consecutive segments must share endpoints.
#[derive(Clone, Debug, PartialEq)]
pub struct ContourSpec {
    pub segments: Vec<ContourSegment>,
}

impl ContourSpec {
    pub fn new(segments: Vec<ContourSegment>) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::domain("contour has no segments"));
        }
        for w in segments.windows(2) {
            let gap = (w[1].start - w[0].end).norm();
            let scale = w[0].end.norm().max(1.0);
            if gap > 1e-12 * scale {
                return Err(Error::domain(format!(
                    "contour is not continuous: {} -> {}",
                    w[0].end, w[1].start
                )));
            }
        }
        Ok(ContourSpec { segments })
    }

    /// Real axis from `-k_max` to `k_max` with a detour down the left bank of
    /// the cut `[0, -i cut_end]` and back up the right bank.
    pub fn real_axis_with_cut(cut_end: f64, k_max: f64) -> Result<Self> {
        if !(cut_end >= 0.0 && k_max > 0.0) {
            return Err(Error::domain("cut_end must be >= 0 and k_max > 0"));
        }
        let zero = Complex64::new(0.0, 0.0);
        let bottom = Complex64::new(0.0, -cut_end);
        let mut segs = vec![ContourSegment::new(Complex64::new(-k_max, 0.0), zero, None)];
        if cut_end > 0.0 {
            segs.push(ContourSegment::new(zero, bottom, Some(CutSide::Left)));
            segs.push(ContourSegment::new(bottom, zero, Some(CutSide::Right)));
        }
        segs.push(ContourSegment::new(zero, Complex64::new(k_max, 0.0), None));
        ContourSpec::new(segs)
    }

    /// Split every segment into pieces no longer than `max_len`.
    pub fn subdivided(&self, max_len: f64) -> Self {
        let mut out = Vec::new();
        for seg in &self.segments {
            let pieces = (seg.length() / max_len).ceil().max(1.0) as usize;
            let d = (seg.end - seg.start) / pieces as f64;
            for i in 0..pieces {
                let s = seg.start + d * i as f64;
                let e = if i + 1 == pieces { seg.end } else { s + d };
                out.push(ContourSegment::new(s, e, seg.side));
            }
        }
        ContourSpec { segments: out }
    }
}

/// `int_C f(k) dk` along a piecewise-linear contour. The integrand receives
/// the point and the cut bank of the segment it lies on.
pub fn integrate_contour<F>(mut f: F, spec: &ContourSpec, tol: impl Into<Tol>) -> QuadResult<Complex64>
where
    F: FnMut(Complex64, Option<CutSide>) -> Complex64,
{
    let tol = tol.into();
    let share = Tol::new(tol.abs / spec.segments.len() as f64, tol.rel);
    let integrator = Integrator::new(share);
    let mut total = QuadResult {
        value: Complex64::new(0.0, 0.0),
        error: 0.0,
        evaluations: 0,
        intervals: 0,
        converged: true,
    };
    for seg in &spec.segments {
        let d = seg.end - seg.start;
        let r = integrator.finite(|s: f64| f(seg.start + d * s, seg.side) * d, 0.0, 1.0);
        total.value += r.value;
        total.error += r.error;
        total.evaluations += r.evaluations;
        total.intervals += r.intervals;
        total.converged &= r.converged;
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn closed_circle_picks_residue() {
        // Square around the origin, counter-clockwise: int dz / z = 2 pi i.
        let p = |x: f64, y: f64| Complex64::new(x, y);
        let segs = vec![
            ContourSegment::new(p(1.0, -1.0), p(1.0, 1.0), None),
            ContourSegment::new(p(1.0, 1.0), p(-1.0, 1.0), None),
            ContourSegment::new(p(-1.0, 1.0), p(-1.0, -1.0), None),
            ContourSegment::new(p(-1.0, -1.0), p(1.0, -1.0), None),
        ];
        let spec = ContourSpec::new(segs).unwrap();
        let r = integrate_contour(|z, _| 1.0 / z, &spec, 1e-12);
        assert!((r.value - Complex64::new(0.0, 2.0 * PI)).norm() < 1e-11);
    }

    #[test]
    fn discontinuous_chain_rejected() {
        let segs = vec![
            ContourSegment::new(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), None),
            ContourSegment::new(Complex64::new(2.0, 0.0), Complex64::new(3.0, 0.0), None),
        ];
        assert!(ContourSpec::new(segs).is_err());
    }

    #[test]
    fn cut_detour_sees_both_banks() {
        // sqrt with the cut along the negative imaginary axis: the banks differ
        // in sign, so the detour contributes 2 * int_0^c sqrt(kappa) dkappa.
        let spec = ContourSpec::real_axis_with_cut(1.0, 1.0).unwrap();
        let r = integrate_contour(
            |z, side| match side {
                Some(CutSide::Left) => Complex64::new(z.im.abs().sqrt(), 0.0),
                Some(CutSide::Right) => Complex64::new(-z.im.abs().sqrt(), 0.0),
                None => Complex64::new(0.0, 0.0),
            },
            &spec,
            1e-12,
        );
        // Left bank: -i int_0^1 sqrt; right bank: -i int_0^1 sqrt as well.
        assert!((r.value - Complex64::new(0.0, -4.0 / 3.0)).norm() < 1e-10);
        assert_eq!(spec.subdivided(0.25).segments.len(), 16);
    }
}

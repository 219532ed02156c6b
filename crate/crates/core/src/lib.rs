//! QED of an electron near a non-dispersive dielectric half-space.
//!
//! The medium fills `z > 0` with refractive index `n`; the electron lives in
//! the vacuum region `z < 0` at distance `a` from the surface. The crate
//! provides the photon mode functions, the Fresnel coefficients that tie them
//! together, the reflected part of the photon propagator, and the one-loop
//! self-energy shift of the electron, both by direct quadrature and by its
//! large-distance expansion.
//!
//! Units are natural (`hbar = c = 1`) with the Heaviside-Lorentz coupling
//! `e^2 = 4 pi alpha`. Contravariant four-vectors are ordered `(t, x, y, z)`
//! and the metric is `diag(+1, -1, -1, -1)`.

pub mod dirac;
pub mod error;
pub mod fresnel;
pub mod greens;
pub mod kinematics;
pub mod quad;
pub mod selfenergy;
pub mod validation;

pub use error::{Error, Result};
pub use kinematics::{MediumParams, Polarization, WaveVector};
pub use selfenergy::SigmaCoefficients;

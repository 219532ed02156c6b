use num_complex::Complex64;
use thiserror::Error;

use crate::kinematics::Polarization;

/// Errors raised by the library. Convergence failures are kept apart from
/// domain errors so that front ends can map them to distinct exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("refractive index must be finite and >= 1, got {0}")]
    RefractiveIndex(f64),

    #[error("k_z = {0} has a positive imaginary part (mode is not normalizable)")]
    NonNormalizable(Complex64),

    #[error("k_z = {0} lies on the frequency cut |Im k_z| >= k_par")]
    FrequencyCut(Complex64),

    #[error("{side} coefficients requested for the wrong incidence: {detail}")]
    WrongIncidence { side: &'static str, detail: String },

    #[error("{0} polarization is undefined at k_par = 0")]
    DegenerateDirection(Polarization),

    #[error("|k|^2 = 0 is a pole of the {0} metric; handle it through the residue")]
    PoleOnShell(Polarization),

    #[error("the two poles of the transverse TM kernel coincide at t = 0")]
    CoincidentPoles,

    #[error("inconsistent packet moments: {0}")]
    InconsistentMoments(String),

    #[error("momentum is off shell (relative residual {0:e})")]
    OffShell(f64),

    #[error("{0}")]
    Domain(String),

    #[error("{what}: requested tolerance {requested:e} not reached (error estimate {achieved:e})")]
    NotConverged {
        what: String,
        achieved: f64,
        requested: f64,
    },
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn is_convergence(&self) -> bool {
        matches!(self, Error::NotConverged { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;

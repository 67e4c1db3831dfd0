use thiserror::Error;

use crate::netcore::Repr;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("singular conversion to {target:?}: condition number {condition:.3e}")]
    SingularConversion { target: Repr, condition: f64 },

    #[error("termination is singular (condition number {condition:.3e})")]
    SingularTermination { condition: f64 },

    #[error("expected {expected:?} parameters, found {found:?}")]
    WrongRepresentation { expected: Repr, found: Repr },

    #[error("frequency mismatch: {a} Hz vs {b} Hz")]
    FrequencyMismatch { a: f64, b: f64 },

    #[error("empty frequency sweep")]
    EmptySweep,

    #[error("frequency {freq} Hz outside sweep range [{lo}, {hi}] Hz")]
    OutOfRange { freq: f64, lo: f64, hi: f64 },

    #[error("open stub is resonant at electrical length {theta} rad")]
    StubResonance { theta: f64 },

    #[error("transmission line two-port has no admittance form at electrical length {theta} rad")]
    LineResonance { theta: f64 },

    #[error("star three-port is resonant at theta_s = {theta} rad")]
    StarResonance { theta: f64 },

    #[error("resonant line angle {theta} rad")]
    ResonantAngle { theta: f64 },

    #[error("invalid coaxial geometry: {0}")]
    GeometryInvalid(String),

    #[error("impedance matrix is singular")]
    SingularImpedance,

    #[error("overlap matrix is singular or not positive definite")]
    SingularOverlap,

    #[error("composed network is singular")]
    SingularComposition,

    #[error("quadrature not converged: max relative change {change:.3e}")]
    QuadratureNotConverged { change: f64 },

    #[error("impedance model inconsistent with radiation pattern: max relative deviation {deviation:.3e}")]
    CmsInconsistent { deviation: f64 },

    #[error("two-stage synthesis infeasible: a^2 + 2ab - 3b^2 = {deficit:.6e} < 0")]
    Infeasible { deficit: f64 },

    #[error("no real root of the star-triangle quartic (roots: {roots:?})")]
    NoRealRoot { roots: Vec<num_complex::Complex64> },

    #[error("line impedance {z:.3} ohm outside realizable window [5, 250] ohm")]
    UnrealizableImpedance { z: f64 },

    #[error("touchstone parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("touchstone arity error: {0}")]
    Arity(String),

    #[error("unsupported file version: {0}")]
    UnsupportedVersion(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for errors that mean "no synthesis exists for these inputs".
    pub fn is_infeasible(&self) -> bool {
        matches!(
            self,
            Error::Infeasible { .. } | Error::NoRealRoot { .. } | Error::UnrealizableImpedance { .. }
        )
    }

    /// True for file-format errors.
    pub fn is_parse(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. } | Error::Arity(_) | Error::UnsupportedVersion(_)
        )
    }
}

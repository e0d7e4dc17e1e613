use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{name} must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },

    #[error("{what} is outside its domain: {value}")]
    DomainError { what: &'static str, value: f64 },

    #[error("kappa must be nonzero")]
    InvalidKappa,

    #[error("{0}")]
    Validation(ValidationReport),

    #[error("{what} requires the {expected} symmetry limit")]
    WrongSymmetry { what: &'static str, expected: &'static str },

    #[error("no admissible energy in [{lo}, {hi}]")]
    EmptyWindow { lo: f64, hi: f64 },

    #[error("no root found; scanned windows {windows:?}")]
    NoRootFound { windows: Vec<(f64, f64)> },

    #[error("{count} admissible roots where exactly one was expected: {energies:?}")]
    AmbiguousRoot { count: usize, energies: Vec<f64> },

    #[error("{what} = {value} is out of range")]
    ParameterOutOfRange { what: &'static str, value: f64 },

    #[error("state is not normalizable (delta = {delta})")]
    NonNormalizable { delta: f64 },

    #[error("partner denominator {value:e} is too close to zero")]
    EnergyDegenerateDenominator { value: f64 },

    #[error("integrand tail did not converge before r = {r_max}")]
    NonConvergentTail { r_max: f64 },

    #[error("function has zero norm")]
    ZeroNorm,

    #[error("no k branch gives tau' < 0")]
    NoValidBranch,

    #[error("shooting mismatch has constant sign on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("integrator failed at x = {x} (step {step:e})")]
    StiffnessFailure { x: f64, step: f64 },

    #[error("no decaying solution at large r for E = {energy}")]
    Unbound { energy: f64 },

    #[error("{0}")]
    Io(String),

    #[error("{0}")]
    Parse(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(err: csv::Error) -> Self {
        Error::Parse(err.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse(err.to_string())
    }
}

/// Every constraint violated by a problem definition, collected in one pass.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub violations: Vec<Error>,
}

impl ValidationReport {
    pub fn push(&mut self, err: Error) {
        self.violations.push(err);
    }

    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn contains(&self, pred: impl Fn(&Error) -> bool) -> bool {
        self.violations.iter().any(pred)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let msgs: Vec<String> = self.violations.iter().map(|e| e.to_string()).collect();
        write!(f, "{}", msgs.join("; "))
    }
}

use thiserror::Error;

/// Errors produced by the numeric routines and inference operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A shape or scale argument that must be strictly positive was not.
    #[error("{name} must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },

    /// A probability or proportion argument left the unit interval.
    #[error("{name} must lie in [0, 1], got {value}")]
    OutOfUnitInterval { name: &'static str, value: f64 },

    /// Success count larger than the trial count.
    #[error("success count {t} exceeds trial count {n}")]
    CountExceedsTrials { t: u64, n: u64 },

    /// The Beta(0, 0) prior cannot be updated without at least one trial.
    #[error("no update possible: Beta(0, 0) prior requires at least one observation")]
    NoUpdatePossible,

    /// The prior probability of the general proposition does not exist, so
    /// neither does its confirmation.
    #[error("confirmation undefined: the prior leaves the probability of the general proposition undefined")]
    ConfirmationUndefined,

    /// A point-mass confidence distribution carries no density to divide by
    /// the likelihood, so no model prior can be read off.
    #[error("induced prior not identifiable from a point-mass confidence distribution")]
    PriorNotIdentifiable,

    /// A prior specification failed validation or parsing.
    #[error("invalid prior: {0}")]
    InvalidPrior(String),

    /// An unrecognised decision-procedure label.
    #[error("unknown procedure '{0}' (expected two_way, three_way, mid_p or laplace_credible)")]
    UnknownProcedure(String),

    /// Any other argument violation.
    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

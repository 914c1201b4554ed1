use thiserror::Error;

/// Errors raised by the numerical pipeline.
///
/// Variants split into two families: [`Error::is_validation`] ones mean the
/// caller asked for something outside a precondition; the rest mean a
/// computed quantity broke an invariant it is supposed to satisfy.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("grid does not cover [{required_min}, {required_max}] (grid spans [{grid_min}, {grid_max}])")]
    GridTooShort {
        required_min: f64,
        required_max: f64,
        grid_min: f64,
        grid_max: f64,
    },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("time or frequency {value} is not a grid point")]
    OffGrid { value: f64 },

    #[error("empty integration range [{lo}, {hi}]")]
    EmptyRange { lo: f64, hi: f64 },

    #[error("spectrum has zero norm")]
    ZeroNorm,

    #[error("|I| = {0} exceeds 1/2; spectrum or quadrature is corrupted")]
    OverlapOutOfBounds(f64),

    #[error("negative-frequency fraction eta = {0:e} is outside (0, 1/2)")]
    EtaOutOfRange(f64),

    #[error("Fock truncation loss {loss:e} exceeds budget {budget:e} (n_max = {n_max})")]
    TruncationLoss { loss: f64, budget: f64, n_max: usize },

    #[error("acausal {what}: relative magnitude {relative:e} for t < 0 exceeds {tolerance:e}")]
    Acausal {
        what: &'static str,
        relative: f64,
        tolerance: f64,
    },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// `true` for precondition failures, `false` for broken invariants.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. }
                | Error::GridTooShort { .. }
                | Error::GridMismatch(_)
                | Error::OffGrid { .. }
                | Error::EmptyRange { .. }
                | Error::EtaOutOfRange(_)
                | Error::Config(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

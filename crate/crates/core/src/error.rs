use thiserror::Error;

/// Errors raised anywhere in the pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported prime {ell}: {reason}")]
    UnsupportedPrime { ell: u64, reason: String },

    #[error("element {index} of the unit list is not a unit (norm {norm})")]
    NotAUnit { index: usize, norm: String },

    #[error("unit list may be multiplicatively dependent: |regulator| {det} is below the error bound {bound}")]
    PossiblyDependent { det: String, bound: String },

    #[error("field verification failed: {0}")]
    Verification(String),

    #[error("model has bad reduction at the prime {prime}")]
    BadReduction { prime: String },

    #[error("size cap exceeded: {0}")]
    SizeCap(String),

    #[error("degenerate bound: {0}")]
    Degenerate(String),

    #[error("every residue pair was skipped at ell = {ell}; this auxiliary prime is unusable")]
    EmptySweep { ell: u64 },

    #[error("config error at {path}: {message}")]
    Config { path: String, message: String },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }

    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config { .. } | Error::InvalidInput(_) | Error::UnsupportedPrime { .. } => 2,
            Error::NotAUnit { .. }
            | Error::PossiblyDependent { .. }
            | Error::Verification(_)
            | Error::Degenerate(_) => 3,
            Error::SizeCap(_) => 4,
            Error::BadReduction { .. } | Error::EmptySweep { .. } => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("degenerate field")]
    DegenerateField,
    #[error("length mismatch: {0}")]
    LengthMismatch(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no convergence after {iterations} iterations (best iterate {best}, residual {residual:e})")]
    NoConvergence {
        iterations: usize,
        best: f64,
        residual: f64,
    },
    #[error("unclassified: {0}")]
    Unclassified(String),
    #[error("no transition in window [{0}, {1}]")]
    NoTransition(f64, f64),
    #[error("loop too close to EP at s = {s} (step floor reached)")]
    LoopTooCloseToEp { s: f64 },
    #[error("loop did not close onto a permutation of the starting pair")]
    LoopNotClosed,
    #[error("{missing} of {total} samples missing")]
    TooManyMissing { missing: usize, total: usize },
    #[error("sampler failed at ({0}, {1}): {2}")]
    Sampler(f64, f64, String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NonFinite(_) => "non-finite",
            Error::DegenerateField => "degenerate-field",
            Error::LengthMismatch(_) => "length-mismatch",
            Error::Domain(_) => "domain",
            Error::NoConvergence { .. } => "no-convergence",
            Error::Unclassified(_) => "unclassified",
            Error::NoTransition(..) => "no-transition",
            Error::LoopTooCloseToEp { .. } => "loop-too-close-to-ep",
            Error::LoopNotClosed => "loop-not-closed",
            Error::TooManyMissing { .. } => "too-many-missing",
            Error::Sampler(..) => "sampler",
            Error::Parse { .. } => "parse",
            Error::Io(_) => "io",
        }
    }
}

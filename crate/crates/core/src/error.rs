use thiserror::Error;

/// Errors raised by state construction, experiment setup and the sweep driver.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("state too large: {entries} matrix entries exceeds cap of {cap}")]
    StateTooLarge { entries: usize, cap: usize },

    #[error("must keep at least one factor")]
    EmptyKeepSet,

    #[error("factor index {index} out of range for {factors} factors")]
    FactorOutOfRange { index: usize, factors: usize },

    #[error("invalid Hilbert space: {0}")]
    InvalidSpec(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("N_max too small: N_max = {n_max} for nbar = {nbar} (tail weight {tail:e})")]
    TruncationTooSmall { nbar: f64, n_max: usize, tail: f64 },

    #[error("invalid index: n = {n} outside 0..={k}")]
    InvalidIndex { n: usize, k: usize },

    #[error("invalid mode index {j}: must lie in 1..={k}")]
    InvalidMode { j: usize, k: usize },

    #[error("map undefined on |A>|0}}: vacuum weight {0:e} exceeds tolerance")]
    VacuumSupport(f64),

    #[error("empty branch: postselection probability p_{outcome} = {probability:e}")]
    EmptyBranch { outcome: &'static str, probability: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

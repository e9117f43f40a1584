use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("mode count mismatch: expected {expected}, found {found}")]
    ModeCountMismatch { expected: usize, found: usize },

    #[error("photon number mismatch: output has {output}, input has {input}")]
    PhotonNumberMismatch { output: usize, input: usize },

    #[error("matrix is not square: {rows} rows, row {row} has {cols} entries")]
    NonSquare { rows: usize, row: usize, cols: usize },

    #[error("matrix dimension {found} does not match expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("empty multi-index: the vacuum element has no permanent expansion")]
    EmptyMultiIndex,

    #[error("{photons} photons exceed the supported maximum of {max}")]
    TooManyPhotons { photons: usize, max: usize },

    #[error("signal photon number {photons} is outside the map range 0..={n_max}")]
    SignalOutOfRange { photons: usize, n_max: usize },

    #[error("state exceeds cutoff {cutoff} with {photons} photons")]
    CutoffExceeded { photons: usize, cutoff: usize },

    #[error("truncated evolution leaked norm {leak:e} (cutoff {cutoff} too small)")]
    NormLeakage { leak: f64, cutoff: usize },

    #[error("invalid conditional map: {0}")]
    InvalidMap(String),

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("network text parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("empty outcome record list")]
    EmptyRecords,

    #[error("invalid target: {0}")]
    InvalidTarget(String),

    #[error("infeasible problem: {0}")]
    Infeasible(String),

    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

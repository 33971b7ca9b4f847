use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index out of range: {what} = {value}, allowed 0..={max}")]
    OutOfRange {
        what: &'static str,
        value: usize,
        max: usize,
    },

    #[error("invalid chain specification: {0}")]
    InvalidSpec(String),

    #[error("invalid band matrix: {0}")]
    InvalidBand(String),

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("Jacobi eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("zero off-diagonal coupling at position {0}: chain is disconnected")]
    Disconnected(usize),

    #[error("weight {index} is not positive ({value:e}): source is not mirror-symmetric or is corrupted")]
    NonPositiveWeight { index: usize, value: f64 },

    #[error("ratio {p}/{q} is not in lowest terms with positive denominator")]
    NotCoprime { p: i64, q: i64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

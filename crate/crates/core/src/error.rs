use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("point {x} lies outside the domain [{a}, {b}]")]
    OutOfDomain { x: f64, a: f64, b: f64 },

    #[error("knot index {index} out of range 0..={max}")]
    IndexOutOfRange { index: isize, max: usize },

    #[error("singular system: pivot {pivot:e} at row {row}")]
    Singular { row: usize, pivot: f64 },

    #[error("boundary elimination is degenerate: weight a1 = (4 - lambda)/24 vanishes (lambda = {lambda})")]
    DegenerateBoundary { lambda: f64 },

    #[error("non-finite value while assembling node {node}")]
    NumericOverflow { node: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("all {runs} runs of the lambda scan failed")]
    ScanFailed { runs: usize },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

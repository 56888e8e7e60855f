use thiserror::Error;

/// Errors produced while building, sampling or analysing beams.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("fields are sampled on different grids")]
    IncompatibleGrid,
    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
    #[error("not representable: {0}")]
    NotRepresentable(String),
    #[error("degenerate beam: {0}")]
    DegenerateBeam(String),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("malformed input: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures caused by the caller's configuration rather than by
    /// the numerics or the environment.
    pub fn is_configuration(&self) -> bool {
        !matches!(self, Error::NumericalFailure(_) | Error::Io(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

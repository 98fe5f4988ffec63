//! Error type shared by every module of the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A numeric parameter is outside its admissible range.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Two states cannot be combined, e.g. inner product across different
    /// temporal widths.
    #[error("incompatible states: {0}")]
    IncompatibleStates(String),

    /// The state has zero norm (distinct from an invalid input; arises from
    /// fully blocked superpositions).
    #[error("zero-norm state")]
    ZeroState,

    /// A photon sits at the wrong interferometer stage for the requested
    /// operation (e.g. beamsplitter applied twice).
    #[error("invalid stage: {0}")]
    InvalidStage(String),

    /// Source paths or detector sides are wired inconsistently.
    #[error("invalid wiring: {0}")]
    InvalidWiring(String),

    /// A curve does not have the shape an extraction routine requires.
    #[error("curve shape: {0}")]
    Shape(String),

    /// Configuration parsing or validation failure.
    #[error("config: {0}")]
    Config(String),

    /// An experiment failed at a specific scan point.
    #[error("at scan point {x}: {source}")]
    AtScanPoint {
        x: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn invalid_parameter(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// Attach the scan coordinate at which a downstream error occurred.
    pub fn at_scan_point(self, x: f64) -> Self {
        Error::AtScanPoint {
            x,
            source: Box::new(self),
        }
    }
}

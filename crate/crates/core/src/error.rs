use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied parameter is out of range or inconsistent.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A filtered complex violates its ordering or face invariants.
    #[error("invalid complex: {0}")]
    Structure(String),

    /// A diagram, grid or cloud violates its invariants.
    #[error("invalid data: {0}")]
    Data(String),

    /// The one-dimensional image path was asked to handle a diagram with distinct births.
    #[error("one-dimensional image needs a common birth value; found births {first} and {other}")]
    MixedBirths { first: f64, other: f64 },

    /// A pairwise metric failed while assembling a distance matrix.
    #[error("metric failed on pair ({i}, {j}): {source}")]
    Pair {
        i: usize,
        j: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error in {context}: {message}")]
    Parse { context: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn param<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Parameter(msg.into()))
}

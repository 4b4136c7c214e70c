use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("index {index} is not an interior point of a series of length {len}")]
    Index { index: usize, len: usize },

    /// A sign triple outside the 13 realizable configurations. Only reachable
    /// with a nonzero tolerance band.
    #[error(
        "unrealizable sign pattern at index {index} \
         (d_left={d_left}, d2={d2}, d_right={d_right})"
    )]
    Classification {
        index: usize,
        d_left: f64,
        d2: f64,
        d_right: f64,
    },

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("forbidden transition {from} -> {to} at symbol index {index}")]
    CorruptedInput { index: usize, from: u8, to: u8 },

    #[error("no window holds a defined value")]
    NoDefinedValue,

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("integration diverged at step {step}")]
    Divergence { step: usize },

    #[error("invalid generator spec: {0}")]
    Spec(String),

    #[error("{source_name}:{line}: {message}")]
    Ingest {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// `true` for errors caused by how the tool was invoked rather than by the data.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Usage(_))
    }
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid arguments, missing columns or parameters, malformed input.
    #[error("configuration error: {0}")]
    Config(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("singular design: {0}")]
    Singular(String),

    #[error("no convergence after {iterations} iterations (gradient norm {gradient_norm:.3e}): {detail}")]
    Convergence {
        iterations: usize,
        gradient_norm: f64,
        detail: String,
    },

    #[error("positivity violation: {0}")]
    Positivity(String),

    #[error(
        "weak instrument: first-stage covariance {covariance:.3e} is within the floor {floor:.1e}"
    )]
    WeakInstrument { covariance: f64, floor: f64 },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("replication {index} failed: {source}")]
    Replication {
        index: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code for this error: 1 usage/config, 2 I/O, 3 statistical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Parse(_) => 1,
            Error::Io { .. } => 2,
            Error::Replication { source, .. } => source.exit_code(),
            Error::Numeric(_)
            | Error::Singular(_)
            | Error::Convergence { .. }
            | Error::Positivity(_)
            | Error::WeakInstrument { .. }
            | Error::Degenerate(_) => 3,
        }
    }
}

use thiserror::Error;

/// Crate-wide error type.
#[derive(Error, Debug)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at {path}:{line}: {message}")]
    Parse {
        path: String,
        line: usize,
        message: String,
    },

    #[error("self-loop at {path}:{line}: vertex {vertex} connected to itself")]
    SelfLoop {
        path: String,
        line: usize,
        vertex: u64,
    },

    #[error("malformed JSON in {path}: {message}")]
    Json { path: String, message: String },

    #[error("community {0:?} has an empty member list")]
    EmptyCommunity(String),

    #[error("unknown vertex {0}")]
    UnknownVertex(u64),

    #[error("unknown community {0:?}")]
    UnknownCommunity(String),

    #[error("unknown method {0:?}")]
    UnknownMethod(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("requested {requested} but only {available} available ({what})")]
    NotEnough {
        what: String,
        requested: usize,
        available: usize,
    },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("feature schema mismatch: {0}")]
    SchemaMismatch(String),

    #[error("non-finite feature value in row for ({vertex}, {community:?})")]
    NonFiniteFeature { vertex: u64, community: String },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

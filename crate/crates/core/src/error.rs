use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("element is not a member of {0}")]
    NotMember(String),

    #[error("budget exceeded: {what} is {value}, limit {limit}; {hint}")]
    Budget {
        what: String,
        value: String,
        limit: String,
        hint: String,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("data error: {0}")]
    Data(String),

    #[error("missing curated data: {0}")]
    MissingData(String),

    #[error("unknown name {0:?}")]
    UnknownName(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("characters belong to different tables: {0}")]
    TableMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Budget errors point the user at table ingestion, the path for groups too large to compute.
    pub fn budget(what: &str, value: impl ToString, limit: impl ToString) -> Self {
        Error::Budget {
            what: what.to_string(),
            value: value.to_string(),
            limit: limit.to_string(),
            hint: "load a precomputed character table with `ingest-verify` / `--table` instead"
                .to_string(),
        }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

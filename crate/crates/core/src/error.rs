use std::io;
use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("arity mismatch: expected {expected} labels, got {found}")]
    Arity { expected: usize, found: usize },

    #[error("n-grams of mixed order: {first} and {other}")]
    MixedArity { first: usize, other: usize },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error("{}: {source}", path.display())]
    File { path: PathBuf, source: io::Error },

    #[error("{origin}:{line}: {message}")]
    Format {
        origin: String,
        line: usize,
        message: String,
    },

    #[error("cannot tokenize {token:?}: {reason}")]
    Tokenization { token: String, reason: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("corpus contains no sentences")]
    EmptyCorpus,

    #[error("scoring failed{}: {message}", index.map(|i| format!(" for sentence {i}")).unwrap_or_default())]
    Scoring {
        index: Option<usize>,
        message: String,
    },

    #[error("transport error: {0}")]
    Transport(String),

    #[error("protocol error: {0}")]
    Protocol(String),

    #[error("artifact {} does not match its recorded hash", path.display())]
    HashMismatch { path: PathBuf },

    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn file(path: impl Into<PathBuf>) -> impl FnOnce(io::Error) -> Error {
        let path = path.into();
        move |source| Error::File { path, source }
    }

    pub(crate) fn format(origin: impl Into<String>, line: usize, message: impl Into<String>) -> Error {
        Error::Format {
            origin: origin.into(),
            line,
            message: message.into(),
        }
    }
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error at line {line}{}: {message}", doc_suffix(.doc))]
    Parse {
        line: usize,
        doc: Option<String>,
        message: String,
    },

    #[error("schema violation at line {line} (document {doc}): {invariant}")]
    Schema {
        line: usize,
        doc: String,
        invariant: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("empty training set")]
    EmptyTrainingSet,

    #[error("binary problem needs both classes, found only {0}")]
    SingleClass(&'static str),

    #[error("malformed model: {0}")]
    Model(String),
}

fn doc_suffix(doc: &Option<String>) -> String {
    match doc {
        Some(id) => format!(" (document {id})"),
        None => String::new(),
    }
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// True for errors caused by bad input data rather than bad flags.
    pub fn is_data_error(&self) -> bool {
        matches!(
            self,
            Error::Io(_) | Error::Parse { .. } | Error::Schema { .. } | Error::Model(_)
        )
    }
}

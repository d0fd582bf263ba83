use thiserror::Error;

/// Errors raised by parsing, conversion and scoring.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input contains no sentences")]
    EmptyInput,

    #[error("line {line}: expected at least {expected} columns, found {found}")]
    MalformedLine {
        line: usize,
        expected: usize,
        found: usize,
    },

    #[error("unknown tag prefix in label `{label}` for scheme {scheme}")]
    UnknownTagPrefix { label: String, scheme: String },

    #[error("ill-formed {scheme} sequence at position {position}: {detail}")]
    IllFormedSequence {
        scheme: String,
        position: usize,
        detail: String,
    },

    #[error("tag sequence has {labels} labels for {tokens} tokens")]
    LengthMismatch { labels: usize, tokens: usize },

    #[error("schema violation: {0}")]
    SchemaViolation(String),

    #[error("sentence `{sent_id}`: {detail}")]
    IndexOutOfRange { sent_id: String, detail: String },

    #[error("duplicate sentence id `{0}`")]
    DuplicateSentId(String),

    #[error("spans ({0}, {1}) and ({2}, {3}) overlap and cannot be tag-encoded")]
    OverlappingSpans(usize, usize, usize, usize),

    #[error("sentence mismatch for `{sent_id}`: {detail}")]
    SentenceMismatch { sent_id: String, detail: String },

    #[error("unknown criterion `{0}` (expected strict, boundaries or relaxed)")]
    UnknownCriterion(String),

    #[error("sentence `{sent_id}` is not eligible for swapping: {reason}")]
    IneligibleSentence { sent_id: String, reason: String },

    #[error("evaluation corpus is empty")]
    EmptyEvalCorpus,

    #[error("unsupported format `{0}`")]
    UnsupportedFormat(String),

    #[error("token `{0}` contains whitespace and cannot be written as a column")]
    WhitespaceInToken(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("parse error at line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("non-positive price {value} for {ticker} on {date}")]
    NonPositivePrice {
        ticker: String,
        date: String,
        value: f64,
    },

    #[error("need at least 2 tickers, found {0}")]
    TooFewTickers(usize),

    #[error("no dates are complete across all tickers")]
    NoOverlap,

    #[error("timestamps must be strictly increasing (row {0})")]
    UnorderedTimestamps(usize),

    #[error("window [{start}, {end}] out of range for panel of {len} rows")]
    WindowOutOfRange { start: isize, end: usize, len: usize },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("rank-deficient design matrix")]
    RankDeficient,

    #[error("degenerate series (zero variance)")]
    DegenerateSeries,

    #[error("degenerate direction: {0}")]
    DegenerateDirection(String),

    #[error("non-finite input: {0}")]
    NonFinite(String),

    #[error("forecast path is not finite")]
    NonFiniteForecast,

    #[error("insufficient history for time index {t}: need {needed} earlier rows")]
    InsufficientHistory { t: usize, needed: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("contingency table has zero total count")]
    ZeroTotal,
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("feature {feature} has code {code} outside its cardinality {cardinality}")]
    CodeOutOfRange {
        feature: usize,
        code: u32,
        cardinality: usize,
    },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("invalid axis groups: {0}")]
    InvalidGroups(String),
    #[error("shrinkage needs at least 2 cells, table has {0}")]
    DegenerateShrinkageTarget(usize),
    #[error("{0} is not binary")]
    NotBinary(&'static str),
    #[error("dataset contains a single treatment arm")]
    SingleArm,
    #[error("conditioning table needs {needed} cells, budget is {budget}")]
    CellBudgetExceeded { needed: u128, budget: usize },
    #[error("invalid model spec: {0}")]
    InvalidSpec(String),
    #[error("column {0} is constant")]
    ConstantColumn(String),
    #[error("non-finite value in column {0}")]
    NonFinite(String),
    #[error("need at least 2 bins, got {0}")]
    TooFewBins(usize),
    #[error("invalid ranking: {0}")]
    InvalidRanking(String),
    #[error("top-k count {k} outside [1, {p}]")]
    InvalidK { k: usize, p: usize },
    #[error("invalid benchmark config: {0}")]
    InvalidBenchConfig(String),
    #[error("dataset format: {0}")]
    Format(String),
    #[error("no files matched {0}")]
    NoFilesMatched(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

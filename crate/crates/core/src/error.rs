use thiserror::Error;

use crate::numkernel::NumError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Numeric(#[from] NumError),

    // ingestion and frame validation
    #[error("input is empty")]
    EmptyInput,
    #[error("missing required column \"{0}\"")]
    Schema(String),
    #[error("duplicate column \"{0}\"")]
    DuplicateColumn(String),
    #[error("row {row}: cannot parse column \"{column}\" value {value:?}")]
    Parse {
        row: usize,
        column: String,
        value: String,
    },
    #[error("row {row}: missing value in column \"{column}\"")]
    MissingValue { row: usize, column: String },
    #[error("unknown column \"{0}\"")]
    UnknownColumn(String),
    #[error("row {row}: value in column \"{column}\" is outside the transform domain")]
    TransformDomain { row: usize, column: String },
    #[error("row index {index} out of range for {len} rows")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    // modelling
    #[error("need at least {required} rows, have {rows}")]
    InsufficientRows { rows: usize, required: usize },
    #[error("design matrix is rank deficient: column \"{0}\" is linearly dependent on earlier columns")]
    RankDeficient(String),
    #[error("predictor \"{0}\" has zero variance")]
    ConstantPredictor(String),
    #[error("predictor \"{0}\" is exactly collinear with the other predictors")]
    CollinearSingular(String),
    #[error("series \"{0}\" has zero variance")]
    ZeroVariance(String),
    #[error("max lag {max_lag} must be smaller than the series length {len}")]
    LagTooLarge { max_lag: usize, len: usize },
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
    #[error("k = {k} folds requested for {n} rows")]
    KTooLarge { k: usize, n: usize },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

/// Coarse failure class, used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Input,
    Numerical,
    Internal,
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        use Error::*;
        match self {
            Numeric(NumError::NoConvergence(_)) => ErrorCategory::Internal,
            Numeric(NumError::DimensionMismatch { .. } | NumError::NonFinite) => {
                ErrorCategory::Input
            }
            Numeric(_) => ErrorCategory::Numerical,
            RankDeficient(_) | ConstantPredictor(_) | CollinearSingular(_) | ZeroVariance(_) => {
                ErrorCategory::Numerical
            }
            Io(_) | Json(_) | Csv(_) => ErrorCategory::Input,
            _ => ErrorCategory::Input,
        }
    }

    /// Stable machine-readable name of the variant.
    pub fn kind(&self) -> &'static str {
        use Error::*;
        match self {
            Numeric(e) => match e {
                NumError::DimensionMismatch { .. } => "DimensionMismatch",
                NumError::Shape { .. } => "Shape",
                NumError::RankDeficient { .. } => "RankDeficient",
                NumError::NonFinite => "NonFinite",
                NumError::Domain(_) => "DomainError",
                NumError::NoConvergence(_) => "NoConvergence",
            },
            EmptyInput => "EmptyInput",
            Schema(_) => "SchemaError",
            DuplicateColumn(_) => "DuplicateColumn",
            Parse { .. } => "ParseError",
            MissingValue { .. } => "MissingValue",
            UnknownColumn(_) => "UnknownColumn",
            TransformDomain { .. } => "DomainError",
            IndexOutOfRange { .. } => "IndexOutOfRange",
            DimensionMismatch { .. } => "DimensionMismatch",
            InsufficientRows { .. } => "InsufficientRows",
            RankDeficient(_) => "RankDeficient",
            ConstantPredictor(_) => "ConstantPredictor",
            CollinearSingular(_) => "CollinearSingular",
            ZeroVariance(_) => "ZeroVariance",
            LagTooLarge { .. } => "LagTooLarge",
            ConfigInvalid(_) => "ConfigInvalid",
            KTooLarge { .. } => "KTooLarge",
            Io(_) => "Io",
            Json(_) => "Json",
            Csv(_) => "Csv",
        }
    }
}

use thiserror::Error;

/// Errors produced by the trust-quantification library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum TrustError {
    #[error("invalid opinion: {0}")]
    Validation(String),

    #[error("degenerate base rates: {0}")]
    DegenerateBaseRate(String),

    #[error("base rate mismatch: {left} vs {right}")]
    BaseRateMismatch { left: f64, right: f64 },

    #[error("total conflict between constraint-fusion arguments")]
    TotalConflict,

    #[error("dogmatic opinion (uncertainty 0) has no finite evidence")]
    DogmaticOpinion,

    #[error("evidence-weighted quantification requires an uncertainty weight")]
    MissingWeight,

    #[error("no evidence: positive and negative fractions are both zero")]
    NoEvidence,

    #[error("invalid evidence: {0}")]
    InvalidEvidence(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("format error: {0}")]
    Format(String),

    #[error("dataset is empty (no samples)")]
    EmptyDataset,

    #[error("sub-dataset #{index} is empty (no samples)")]
    EmptyPart { index: usize },

    #[error("class schema mismatch: {0}")]
    SchemaMismatch(String),

    #[error("unknown class id '{0}'")]
    UnknownClass(String),

    #[error("eta {eta} out of range for {classes} classes (max {max})")]
    EtaOutOfRange { eta: f64, classes: usize, max: f64 },

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("unbound variable '{0}'")]
    UnboundVariable(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl TrustError {
    /// Variant name, stable across message changes.
    pub fn kind(&self) -> &'static str {
        match self {
            TrustError::Validation(_) => "ValidationError",
            TrustError::DegenerateBaseRate(_) => "DegenerateBaseRate",
            TrustError::BaseRateMismatch { .. } => "BaseRateMismatch",
            TrustError::TotalConflict => "TotalConflict",
            TrustError::DogmaticOpinion => "DogmaticOpinion",
            TrustError::MissingWeight => "MissingWeight",
            TrustError::NoEvidence => "NoEvidence",
            TrustError::InvalidEvidence(_) => "InvalidEvidence",
            TrustError::Parameter(_) => "ParameterError",
            TrustError::Format(_) => "FormatError",
            TrustError::EmptyDataset => "EmptyDataset",
            TrustError::EmptyPart { .. } => "EmptyPart",
            TrustError::SchemaMismatch(_) => "SchemaMismatch",
            TrustError::UnknownClass(_) => "UnknownClass",
            TrustError::EtaOutOfRange { .. } => "EtaOutOfRange",
            TrustError::Parse { .. } => "ParseError",
            TrustError::UnboundVariable(_) => "UnboundVariable",
            TrustError::Io(_) => "IoError",
        }
    }
}

impl From<std::io::Error> for TrustError {
    fn from(err: std::io::Error) -> Self {
        TrustError::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, TrustError>;

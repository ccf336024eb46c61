use thiserror::Error;

/// Errors raised by the engine. Variant names are part of the CLI contract:
/// they appear verbatim in error messages.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CmodError {
    #[error("ParseError (line {line}): {msg}")]
    Parse { line: usize, msg: String },
    #[error("BadAugmentationForm: {0}")]
    BadAugmentationForm(String),
    #[error("NotInCategory: {0}")]
    NotInCategory(String),
    #[error("InconsistentStructure: {0}")]
    InconsistentStructure(String),
    #[error("MissingLambdaStructure: {0}")]
    MissingLambdaStructure(String),
    #[error("IllFormedMap: {0}")]
    IllFormedMap(String),
    #[error("NotRegularCase: {0}")]
    NotRegularCase(String),
    #[error("NotIndependent: {0}")]
    NotIndependent(String),
    #[error("TorsionResidue: {0}")]
    TorsionResidue(String),
    #[error("DependentResidues: {0}")]
    DependentResidues(String),
    #[error("NotRegularElement: {0}")]
    NotRegularElement(String),
    #[error("NegativeLength: {0}")]
    NegativeLength(String),
    #[error("NegativeKernel: {0}")]
    NegativeKernel(String),
    #[error("PrecisionExhausted: {0}")]
    PrecisionExhausted(String),
    #[error("HypothesisUntagged: {0}")]
    HypothesisUntagged(String),
    #[error("Unsupported: {0}")]
    Unsupported(String),
}

impl CmodError {
    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        CmodError::Parse { line, msg: msg.into() }
    }
}

pub type Result<T> = std::result::Result<T, CmodError>;

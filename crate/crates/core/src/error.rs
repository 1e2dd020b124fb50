use thiserror::Error;

/// Errors produced anywhere in the laboratory.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown function `{name}` at byte {pos}")]
    UnknownFunction { name: String, pos: usize },

    #[error("unknown identifier `{0}`")]
    UnknownIdentifier(String),

    #[error("metric file line {line}: {msg}")]
    MetricFile { line: usize, msg: String },

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("jet shape mismatch: ({0}, {1}) vs ({2}, {3})")]
    JetMismatch(usize, usize, usize, usize),

    #[error("singular point: {0}")]
    SingularPoint(String),

    #[error("insufficient jet order: need {needed}, have {have}")]
    InsufficientOrder { needed: usize, have: usize },

    #[error("invalid dimension: {0}")]
    Dimension(String),

    #[error("missing tensor: {0}")]
    MissingTensor(&'static str),

    #[error("unsupported rewrite: {0}")]
    UnsupportedRewrite(String),

    #[error("weight out of implemented range: {0}")]
    WeightOutOfRange(String),

    #[error("metric is not Einstein at the point: max |Ric - c g| = {residual:e}")]
    NotEinstein { residual: f64 },

    #[error("metric is not Ricci-flat at the point: max |Ric| = {residual:e}")]
    NotRicciFlat { residual: f64 },

    #[error("rejected: {0}")]
    Rejected(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownMetric(String),

    #[error("non-convergent: {0}")]
    NonConvergent(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SingularPoint(_)
            | Error::InsufficientOrder { .. }
            | Error::NotEinstein { .. }
            | Error::NotRicciFlat { .. }
            | Error::NonConvergent(_) => 3,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

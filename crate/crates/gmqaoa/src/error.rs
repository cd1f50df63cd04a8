use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dense size {q}^{n} exceeds the limit of {limit} entries")]
    SizeLimit { n: usize, q: usize, limit: usize },

    #[error("oracle cap exceeded: dimension {dim} > {cap}")]
    OracleCap { dim: usize, cap: usize },

    #[error("invalid objective table: {0}")]
    InvalidObjective(String),

    #[error("initial state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// The per-level phases of the initial state cannot be made simultaneously real.
    #[error("complex-overlap: level {level} carries a non-real phase {phase_re:+.3e}{phase_im:+.3e}i")]
    ComplexOverlap {
        level: usize,
        phase_re: f64,
        phase_im: f64,
    },

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// Well-formed input that violates a structural invariant (self-loop, bad literal, ...).
    #[error("invalid instance: {0}")]
    Invalid(String),

    #[error("frame condition violated at entry ({row}, {col})")]
    FrameCondition { row: usize, col: usize },

    #[error("selector for unit E_{{{i}{j}}} is ambiguous: {detail}")]
    AmbiguousSelector { i: usize, j: usize, detail: String },

    #[error("zero pivot while normalizing unit E_{{{i}{j}}}")]
    ZeroPivot { i: usize, j: usize },

    #[error("{what}: {value:.3e} exceeds tolerance {tol:.1e}")]
    Tolerance { what: String, value: f64, tol: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

use thiserror::Error;

/// Errors raised by graph construction, the walk engines and their
/// invariant checks.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkError {
    #[error("self-loop on vertex {0}: edge ({0},{0}) is not allowed")]
    SelfLoop(usize),

    #[error("duplicate edge ({0},{1})")]
    DuplicateEdge(usize, usize),

    #[error("edge ({x},{y}) references a vertex outside [0, {n})")]
    VertexOutOfRange { x: usize, y: usize, n: usize },

    #[error("graph must have at least one vertex")]
    EmptyGraph,

    #[error("invalid graph parameters: {0}")]
    InvalidGraphParams(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("missing parameter `{0}` for walk kind `{1}`")]
    MissingParameter(&'static str, String),

    #[error("unknown {what} `{name}`")]
    Unknown { what: &'static str, name: String },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (defect {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not unitary (defect {0:e})")]
    NotUnitary(f64),

    #[error("invariant violated: {what} = {value:e} exceeds {limit:e}")]
    InvariantViolation {
        what: &'static str,
        value: f64,
        limit: f64,
    },

    #[error("oracle count mismatch for {what}: measured {measured}, expected {expected}")]
    CountMismatch {
        what: &'static str,
        measured: u64,
        expected: u64,
    },
}

impl WalkError {
    /// True for errors that signal a broken physical invariant rather than
    /// bad input.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(
            self,
            WalkError::InvariantViolation { .. } | WalkError::CountMismatch { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, WalkError>;

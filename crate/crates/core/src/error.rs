use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has a negative entry at ({row}, {col})")]
    NegativeEntry { row: usize, col: usize },

    #[error("vector must be {0}")]
    InvalidVector(&'static str),

    /// The Perron eigenvector is not unique; carries the strongly connected
    /// components of the support graph in topological order.
    #[error("reducible matrix with components {0:?}")]
    Reducible(Vec<Vec<usize>>),

    #[error("enumeration cap exceeded: family has {size} members, cap is {cap}")]
    CapExceeded { size: u128, cap: u128 },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("invalid arena: {0}")]
    InvalidArena(String),

    #[error("state {0} is blocking (no action with a successor)")]
    BlockingState(String),

    #[error("illegal action {action:?} at state {state:?}")]
    IllegalAction { state: String, action: String },

    #[error("oracle returned a {got_rows}x{got_cols} matrix, expected {rows}x{cols}")]
    OracleShape { rows: usize, cols: usize, got_rows: usize, got_cols: usize },

    #[error("no saddle point found; this is a solver bug")]
    NoSaddle,

    #[error("certificate shape mismatch: {0}")]
    CertificateShape(String),

    #[error("invalid machine: {0}")]
    InvalidMachine(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

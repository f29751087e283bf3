use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("invalid category: {0}")]
    InvalidCategory(String),
    #[error("non-split residue field at `{0}`")]
    NonSplitResidue(String),
    #[error("idempotent splitting failed: {0}")]
    Splitting(String),
    #[error("object not found: {0}")]
    NotInCategory(String),
    #[error("missing cone data: {0}")]
    MissingCone(String),
    #[error("{0} not found (caps)")]
    SearchExhausted(String),
    #[error("size guard exceeded: {0}")]
    SizeGuard(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

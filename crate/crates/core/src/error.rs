use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("duplicate label `{0}`")]
    DuplicateLabel(String),

    #[error("point `{label}` has dimension {found}, expected {expected}")]
    DimensionMismatch {
        label: String,
        expected: usize,
        found: usize,
    },

    #[error("positions must be given for all points or none (`{0}` differs)")]
    MixedPositions(String),

    #[error("roots and vertices share label(s): {0:?}")]
    Overlap(Vec<String>),

    #[error("unknown label `{0}` referenced by parent map")]
    InvalidReference(String),

    #[error("vertex `{0}` has no parent in the parent map")]
    MissingParent(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("`{0}` is not a root of the configuration")]
    NotARoot(String),

    #[error("edge kernel undefined on pair ({0}, {1})")]
    KernelDomain(String, String),

    #[error("explicit kernel table is asymmetric on pair ({0}, {1})")]
    AsymmetricKernel(String, String),

    #[error("point `{0}` has no position, required by a distance-based kernel")]
    MissingPosition(String),

    #[error("{what} has {size} points, over the limit of {limit} (set FOREST_KERNEL_MAX_POINTS to override)")]
    ResourceLimit {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("numeric mode error: {0}")]
    Mode(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors raised by constructions, formulas, group computations and suites.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A parameter lies outside the domain of the operation.
    #[error("invalid parameters: {0}")]
    Domain(String),

    /// A construction would exceed the configured vertex cap.
    #[error("instance has {vertices} vertices, above the vertex cap of {cap}")]
    VertexCap { vertices: u128, cap: usize },

    /// The automorphism search ran out of its vertex or node budget.
    #[error("search budget exceeded: {0}")]
    Budget(String),

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    /// An operation was called on input that violates its precondition.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for the resource errors (vertex cap, search budget).
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::VertexCap { .. } | Error::Budget(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

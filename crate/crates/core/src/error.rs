use thiserror::Error;

/// Errors raised by library operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A rational function has a denominator factor with no variable part.
    #[error("not expandable: {0}")]
    NotExpandable(String),
    /// A monomial substitution made a denominator factor vanish identically.
    #[error("degenerate substitution: {0}")]
    DegenerateSubstitution(String),
    /// A resource guard fired before the computation finished.
    #[error("resource guard `{guard}` exceeded (limit {limit})")]
    Overflow { guard: &'static str, limit: u64 },
    /// The working precision is too small for the requested conditions.
    #[error("precision error: need K >= {need}, got {got}")]
    Precision { need: u32, got: u32 },
    /// A stated hypothesis does not hold for the input.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// A lookup table is missing an entry required by a recursion.
    #[error("missing table entry: {0}")]
    MissingEntry(String),
    /// Malformed textual or JSON input.
    #[error("parse error: {0}")]
    Parse(String),
    /// An internal consistency check failed; this indicates a bug.
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

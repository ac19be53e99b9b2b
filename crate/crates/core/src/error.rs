use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid permutation {entries:?}: {reason}")]
    InvalidPermutation { entries: Vec<usize>, reason: String },

    #[error("{what} = {value} exceeds the cap of {cap}")]
    SizeLimit { what: String, value: u128, cap: u128 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Closedness failure in a link diagram.
    #[error("diagram is not closed: {0}")]
    Structural(String),

    #[error("malformed input: {0}")]
    Format(String),

    /// A morphism arc breaks `i <= j` or `x_i = y_j`.
    #[error("morphism constraint violated: {0}")]
    Constraint(String),

    #[error("arcs do not form a partial matching: {0}")]
    Matching(String),

    #[error("cannot compose: {0}")]
    Composition(String),

    #[error("vector is not in the span of the cycle basis: {0}")]
    Membership(String),

    #[error("chain map violation: {0}")]
    ChainMapViolation(String),

    /// A theorem-level identity failed; indicates a construction bug.
    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn size(what: impl Into<String>, value: impl Into<u128>, cap: impl Into<u128>) -> Self {
        Error::SizeLimit {
            what: what.into(),
            value: value.into(),
            cap: cap.into(),
        }
    }
}

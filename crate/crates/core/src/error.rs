use thiserror::Error;

/// Input, precondition and bound errors.
///
/// Axiom failures are never reported through this type; they come back as
/// [`Verdict::Fails`](crate::Verdict::Fails) with a witness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("unknown object `{0}`")]
    UnknownObject(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("the order has no join for {0} and {1}; verify the quantale first")]
    NotALattice(String, String),
    #[error("structures are enriched in different quantales (`{0}` vs `{1}`)")]
    QuantaleMismatch(String, String),
    #[error("map is not total: {0}")]
    NotTotal(String),
    #[error("{what}: size {size} exceeds the configured bound {bound}")]
    BoundExceeded {
        what: &'static str,
        size: usize,
        bound: usize,
    },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("({0}, {1}) is not a non-cartesian pair: tensor is not strictly below meet")]
    NotNonCartesian(String, String),
    #[error("invalid double split epimorphism: {0}")]
    InvalidDoubleSplitEpi(String),
    #[error("invalid word witness: {0}")]
    InvalidWitness(String),
    #[error("invalid positive cone: {0}")]
    InvalidCone(String),
    #[error("not decided: {0}")]
    NotDecided(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

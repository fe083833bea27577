use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed group spec {0:?}: expected Z<n>(xZ<n>)*")]
    MalformedGroup(String),

    #[error("cyclic factor Z{0} is degenerate (factors must be >= 2)")]
    FactorTooSmall(usize),

    #[error("element {element:?} does not belong to {group}")]
    ElementMismatch { element: Vec<usize>, group: String },

    #[error("group mismatch: {left} vs {right}")]
    GroupMismatch { left: String, right: String },

    #[error("{0} is not cyclic; supply explicit automorphism tables")]
    NotCyclic(String),

    #[error("not an automorphism of {group}: {reason}")]
    NotAutomorphism { group: String, reason: String },

    #[error("malformed configuration: {0}")]
    MalformedConfig(String),

    #[error("configuration has {got} spins but {group} has {expected} elements")]
    LengthMismatch {
        group: String,
        expected: usize,
        got: usize,
    },

    #[error("invalid correlation vector: {0}")]
    InvalidCorrelation(String),

    #[error("|F| = {order} exceeds the enumeration bound {bound}")]
    BoundExceeded { order: usize, bound: usize },

    #[error("interaction entry {0:?} is not an exact integer or fraction")]
    NonExactInteraction(String),

    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("polynomial {0} is not irreducible")]
    NotIrreducible(String),

    #[error("cubic {poly} is not primitive: projective order {order} < {expected}")]
    NotPrimitive {
        poly: String,
        order: usize,
        expected: usize,
    },

    #[error("field too large for table arithmetic: q = {0}")]
    FieldTooLarge(u64),

    #[error("substitution error: {0}")]
    Substitution(String),

    #[error("{0} requires a cyclic group")]
    RequiresCyclic(&'static str),

    #[error("no block profile realises the given Laplacian")]
    NoProfile,

    #[error("invalid signed multiset: {0}")]
    InvalidMultiset(String),

    #[error("invalid rational {0:?}")]
    InvalidRational(String),
}

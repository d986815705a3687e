use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("ground set mismatch: {0} vs {1} elements")]
    GroundMismatch(usize, usize),

    #[error("ground set of size {0} is not supported (allowed: {1})")]
    UnsupportedSize(usize, &'static str),

    #[error("invalid ground set: {0}")]
    InvalidGround(String),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("partition {finer} is not finer than {coarser}")]
    NotFiner { finer: String, coarser: String },

    #[error("subset {0} is empty modulo the partition")]
    EmptyModulo(String),

    #[error("point does not lie in the flat: block {0} has nonzero coordinate sum")]
    NotInFlat(String),

    #[error("point lies on the hyperplane of subset {0}")]
    OnHyperplane(String),

    #[error("support mismatch: {0} vs {1}")]
    SupportMismatch(String, String),

    #[error("forest boundary mismatch: {0}")]
    Boundary(String),

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("ambiguous layering: {0}")]
    AmbiguousLayering(String),

    #[error("arity mismatch: expected {expected} factors, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("functional is not semisimple: {0}")]
    NotSemisimple(String),

    #[error("functional is not semisimply differentiable: {0}")]
    NotSemisimplyDifferentiable(String),

    #[error("malformed input: {0}")]
    Format(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

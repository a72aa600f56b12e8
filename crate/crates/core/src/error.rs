use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("generator `{0}` is not in the alphabet")]
    UnknownGenerator(String),
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("parse error at `{token}`: {reason}")]
    Parse { token: String, reason: String },
    #[error("left-normed commutator depth must be positive")]
    ZeroDepth,
    #[error("ill-formed diagram: {0}")]
    Diagram(String),
    #[error("presentation has no generator named `{0}`")]
    MissingGenerator(String),
    #[error("class {0} is out of range 1..={max}", max = crate::lcs::MAX_CLASS)]
    ClassOutOfRange(usize),
    #[error("series cutoff must be at least 1")]
    ZeroCutoff,
    #[error("word uses abelian-block generators; a free alphabet is required")]
    NotFree,
    #[error("degree {0} component is not a Lie element")]
    NotLie(usize),
    #[error("matrix is not square ({0}x{1})")]
    NotSquare(usize, usize),
    #[error("relator `{relator}` has exponent sum {sum} in the stable generator")]
    NonzeroExponentSum { relator: String, sum: BigInt },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("empty relator list")]
    EmptyRelators,
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

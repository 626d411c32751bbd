use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unsupported field: p = {p}, m = {m} ({reason})")]
    UnsupportedField {
        p: u32,
        m: u32,
        reason: &'static str,
    },
    #[error("modulus polynomial is not irreducible over GF({p})")]
    ReducibleModulus { p: u32 },
    #[error("bad modulus: {0}")]
    BadModulus(String),
    #[error("coefficient list has length {got}, at most {max} allowed")]
    CoefficientLength { got: usize, max: usize },
    #[error("coefficient {value} is not in 0..{p}")]
    CoefficientRange { value: u32, p: u32 },
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("inversion of zero")]
    ZeroInverse,
    #[error("invalid curve: {0}")]
    InvalidCurve(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("star product of u_{i} and v_{j} is the zero vector")]
    ZeroStarProduct { i: usize, j: usize },
    #[error("zero vector has no m-value")]
    ZeroVector,
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("index {0} is not a member of the candidate set")]
    NotInSet(usize),
    #[error("empty target set")]
    EmptyTargets,
    #[error("search universe of {size} indices exceeds the exact-mode cap {cap}")]
    UniverseTooLarge { size: usize, cap: usize },
    #[error("{0}")]
    Precondition(String),
    #[error("case tuple count {count} exceeds cap {cap}")]
    TooManyCases { count: usize, cap: usize },
    #[error("enumeration size {size} exceeds cap {cap}")]
    EnumerationCap { size: u128, cap: u128 },
    #[error("improved-code iteration did not reach a fixed point within {0} rounds")]
    NoFixedPoint(usize),
    #[error("config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("wrong node count: N({n},{d}) = {required} points required, got {actual}")]
    NodeCount {
        n: usize,
        d: u32,
        required: usize,
        actual: usize,
    },

    #[error("duplicate point at positions {first} and {second}")]
    DuplicatePoint { first: usize, second: usize },

    #[error("point {index} lies outside the ball of radius {radius} around the center")]
    OutsideBall { index: usize, radius: String },

    #[error("radius must be present and positive")]
    MissingRadius,

    #[error("node set is not unisolvent: Vandermonde determinant is {determinant}")]
    NotUnisolvent { determinant: String },

    #[error("singular matrix")]
    Singular,

    #[error("map index {index} out of range 1..={count}")]
    MapIndex { index: usize, count: usize },

    #[error("empty word")]
    EmptyWord,

    #[error("map {index} is not a contraction")]
    NotContraction { index: usize },

    #[error("map {index} is not a similarity")]
    NotSimilarity { index: usize },

    #[error("similarity ratio is irrational; exact mode cannot represent it")]
    IrrationalRatio,

    #[error("{0} is only available in float mode")]
    FloatOnly(String),

    #[error("unknown catalog system '{0}' (expected cantor, koch, sierpinski or menger)")]
    UnknownSystem(String),

    #[error("{words} words exceed the enumeration limit of {limit}")]
    TooManyWords { words: u128, limit: u128 },

    #[error("determinant of A_{k} vanishes; scaling exponent undefined")]
    ZeroDeterminant { k: usize },

    #[error("exponent e = {e} is below the floor n*N(n+1,d-1) = {floor}")]
    ExponentBelowFloor { e: f64, floor: u64 },

    #[error("node {index} of A_{k} lies at the origin")]
    NodeAtOrigin { k: usize, index: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

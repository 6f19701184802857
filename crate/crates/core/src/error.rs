use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("index {index} outside model window [{lo}, {hi}]")]
    IndexOutsideWindow { index: i64, lo: i64, hi: i64 },

    #[error("label {0} is not part of the space")]
    UnknownLabel(String),

    #[error("values are not strictly increasing: {0}")]
    NotIncreasing(String),

    #[error("expected a map with offset {expected}, got offset {found}")]
    WrongOffset { expected: i64, found: i64 },

    #[error("empty interval [{k}, {l}]")]
    EmptyInterval { k: i64, l: i64 },

    #[error("not a bijection: {0}")]
    NotBijective(String),

    #[error("gram matrix is not Hermitian")]
    NonHermitianGram,

    #[error("gram matrix is singular or not positive definite")]
    SingularGram,

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("ordering violated in {0}")]
    Ordering(String),

    #[error("no probe index below every word index (min word index {min_index}, probe {probe})")]
    NoProbeIndex { min_index: i64, probe: i64 },

    #[error("image of the input window escapes the output window at {0}")]
    WindowOverflow(i64),

    #[error("mixture weight {0} outside [0, 1]")]
    WeightOutOfRange(f64),

    #[error("deformation parameter q = {0} outside (-1, 1)")]
    DeformationOutOfRange(f64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{0}")]
    Invalid(String),
}

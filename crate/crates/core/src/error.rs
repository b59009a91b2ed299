use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: String, got: String },

    #[error("matrix is not Hermitian: max |h - h†| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary: max |U†U - I| = {deviation:e}")]
    NotUnitary { deviation: f64 },

    #[error("matrix is not orthogonal: max |WᵀW - I| = {deviation:e}")]
    NotOrthogonal { deviation: f64 },

    #[error("rows are not orthonormal: max |RRᵀ - I| = {deviation:e}")]
    NotOrthonormal { deviation: f64 },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("state is not normalized: norm = {norm}")]
    NotNormalized { norm: f64 },

    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error(
        "odd dimension n = {n}: tr Y = {trace} ≠ 0, so V(I) and V(Y) are not orthogonal and no CPT frame exists"
    )]
    OddDimension { n: usize, trace: f64 },

    #[error("invalid odd pair (p, q) = ({p}, {q}): {reason}")]
    InvalidPair { p: i64, q: i64, reason: &'static str },

    #[error("invalid Σ label {0:?}: digits must be 0, 1, 2 or 3")]
    InvalidLabel(String),

    #[error("no hard-coded frame for N = {depth}; use search_w")]
    UnsupportedDepth { depth: usize },

    #[error("Hermitian eigendecomposition did not converge")]
    EigenFailed,

    #[error("time {t} outside schedule range [0, {total}]")]
    TimeOutOfRange { t: f64, total: f64 },

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("y is not invariant under the schedule's unitaries: max |u y u' - y| = {deviation:e}")]
    NotInvariant { deviation: f64 },

    #[error("recipe condition {condition} violated: {detail}")]
    RecipeCondition { condition: u8, detail: String },
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised by the algebraic core.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid chart: {0}")]
    InvalidChart(String),
    #[error("operands live on different charts ({left} vs {right})")]
    ChartMismatch { left: String, right: String },
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("non-invertible scalar: {0}")]
    NonInvertible(String),
    #[error("zero substituted into a negative power of `{0}`")]
    ZeroToNegativePower(String),
    #[error("point does not assign variable `{0}`")]
    MissingAssignment(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: i64, found: i64 },
    #[error("arity mismatch: expected {expected} arguments, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("chart has no homogeneity variable")]
    NoHomogeneityVariable,
    #[error("multivector is not tangent to the slice foliation (has a component along `{0}`)")]
    NotTangent(String),
    #[error("tensor depends on the homogeneity variable `{0}`")]
    DependsOnHomogeneityVariable(String),
    #[error("homogeneity vector field is not in product form t@t")]
    DeltaNotProduct,
    #[error("homogeneity vector field is not transversal to the slice t = 1")]
    NotTransversal,
    #[error("not homogeneous of the required degree: {0}")]
    NotHomogeneous(String),
    #[error("not invertible over the Laurent ring: {0}")]
    NotInvertibleOverRing(String),
    #[error("contact condition degenerate: {0}")]
    ContactDegenerate(String),
}

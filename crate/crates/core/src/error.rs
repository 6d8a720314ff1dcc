use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("polytope is unbounded")]
    UnboundedPolytope,
    #[error("polytope is empty")]
    EmptyPolytope,
    #[error("polytope has empty interior")]
    LowerDimensional,
    #[error("facet {0} is redundant")]
    RedundantFacet(usize),
    #[error("polytope is not Delzant: {0}")]
    NotDelzant(String),
    #[error("matrix is not unimodular (determinant {0})")]
    NotUnimodular(String),
    #[error("weight set is empty")]
    EmptyWeightSet,
    #[error("mesh would exceed {cap} points")]
    MeshTooLarge { cap: usize },
    #[error("point lies outside the polytope")]
    PointOutsideP,
    #[error("function is not piecewise linear on a compatible subdivision: {0}")]
    NonPiecewiseLinear(String),
    #[error("function is not convex: {0}")]
    NotConvex(String),
    #[error("function is affine on P; the ratio is undefined")]
    AffineInput,
    #[error("Futaki character is nonzero: {0}")]
    FutakiNonzero(String),
    #[error("constant function gives a degenerate test configuration")]
    DegenerateTestConfiguration,
    #[error("linear program failed: {0}")]
    Lp(String),
    #[error("point is too close to the boundary (distance {0:e})")]
    TooCloseToBoundary(f64),
    #[error("Hessian is singular or not positive definite at {0:?}")]
    SingularHessian(Vec<f64>),
    #[error("Newton iteration diverged: {0}")]
    NewtonDivergence(String),
    #[error("quadrature budget exceeded: {0}")]
    QuadratureBudgetExceeded(String),
    #[error("potential is not normalized: {0}")]
    NotNormalized(String),
    #[error("invalid grid specification: {0}")]
    InvalidGrid(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable code used in JSON error output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::InvalidInput(_) => "InvalidInput",
            Error::UnboundedPolytope => "UnboundedPolytope",
            Error::EmptyPolytope => "EmptyPolytope",
            Error::LowerDimensional => "LowerDimensional",
            Error::RedundantFacet(_) => "RedundantFacet",
            Error::NotDelzant(_) => "NotDelzant",
            Error::NotUnimodular(_) => "NotUnimodular",
            Error::EmptyWeightSet => "EmptyWeightSet",
            Error::MeshTooLarge { .. } => "MeshTooLarge",
            Error::PointOutsideP => "PointOutsideP",
            Error::NonPiecewiseLinear(_) => "NonPiecewiseLinear",
            Error::NotConvex(_) => "NotConvex",
            Error::AffineInput => "AffineInput",
            Error::FutakiNonzero(_) => "FutakiNonzero",
            Error::DegenerateTestConfiguration => "DegenerateTestConfiguration",
            Error::Lp(_) => "LpError",
            Error::TooCloseToBoundary(_) => "TooCloseToBoundary",
            Error::SingularHessian(_) => "SingularHessian",
            Error::NewtonDivergence(_) => "NewtonDivergence",
            Error::QuadratureBudgetExceeded(_) => "QuadratureBudgetExceeded",
            Error::NotNormalized(_) => "NotNormalized",
            Error::InvalidGrid(_) => "InvalidGrid",
            Error::Parse(_) => "ParseError",
        }
    }
}

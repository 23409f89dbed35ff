use thiserror::Error;

pub type Result<T, E = AbelError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AbelError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("degenerate Möbius map: p*s - r*q = {det:e}")]
    DegenerateMobius { det: f64 },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    /// The right-hand side factors as `f(x) g(y)`.
    #[error("the equation is separable")]
    Separable,

    #[error("{function}: pole at parameter {parameter}")]
    Pole { function: &'static str, parameter: String },

    #[error("{function}: series did not converge within {terms} terms")]
    Convergence { function: &'static str, terms: usize },

    #[error("{function}: argument outside the supported region ({detail})")]
    Domain { function: &'static str, detail: String },

    #[error("{function}: unsupported parameter {detail}")]
    UnsupportedParameter { function: &'static str, detail: String },

    #[error("class {0} has no special-function solution")]
    UnsupportedClass(String),

    #[error("degenerate basis: {0}")]
    DegenerateBasis(String),

    #[error("evaluation hit a pole at ({x}, {y})")]
    EvaluationPole { x: String, y: String },

    #[error("singular initial point: denominator {0:e}")]
    SingularStart(f64),

    #[error("no admissible verification path: {0}")]
    NoPath(String),

    #[error("parse error at column {column}: {message}")]
    Syntax { column: usize, message: String },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("internal error: {0}")]
    Internal(String),
}

impl AbelError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            AbelError::InvalidArgument(_) => "invalid_argument",
            AbelError::DegenerateMobius { .. } => "degenerate_mobius",
            AbelError::NonFinite(_) => "non_finite",
            AbelError::Separable => "separable",
            AbelError::Pole { .. } => "specfun_pole",
            AbelError::Convergence { .. } => "specfun_convergence",
            AbelError::Domain { .. } => "specfun_domain",
            AbelError::UnsupportedParameter { .. } => "unsupported_parameter",
            AbelError::UnsupportedClass(_) => "unsupported_class",
            AbelError::DegenerateBasis(_) => "degenerate_basis",
            AbelError::EvaluationPole { .. } => "evaluation_pole",
            AbelError::SingularStart(_) => "singular_start",
            AbelError::NoPath(_) => "no_path",
            AbelError::Syntax { .. } => "parse_syntax",
            AbelError::Shape(_) => "parse_shape",
            AbelError::Internal(_) => "internal",
        }
    }
}

use num_bigint::BigInt;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("incompatible radicands: sqrt({0}) and sqrt({1})")]
    IncompatibleRadicands(BigInt, BigInt),
    #[error("indeterminate form {0}")]
    IndeterminateForm(&'static str),
    #[error("negative radicand {0}")]
    NegativeRadicand(String),
    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("pole at x = {0}")]
    PoleAtPoint(String),
    #[error("singular matrix (determinant 0)")]
    SingularMatrix,
    #[error("the identity map fixes every point")]
    IdentityMap,
    #[error("complex fixed points (discriminant {0} < 0)")]
    NegativeDiscriminant(String),
    #[error("discriminant {0} is not rational")]
    NonRationalDiscriminant(String),
    #[error("x = {0} lies outside [0, 1]")]
    OutOfDomain(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("orbit escaped [0, 1] at iteration {iteration}: x = {value}")]
    OrbitEscaped { iteration: u64, value: f64 },
    #[error("degenerate interval [{0}, {0}]")]
    DegenerateInterval(String),
    #[error("density has a pole inside (0, 1) at x = {0}")]
    PoleInsideDomain(String),
    #[error("invalid base map: {0}")]
    InvalidBase(String),
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("map failed validation: {0}")]
    ValidationFailed(String),
    #[error("conjugacy map is degenerate (constant {0})")]
    DegeneratePsi(String),
    #[error("unsupported density form: {0}")]
    UnsupportedDensity(String),
}

impl Error {
    pub(crate) fn parse(input: &str, reason: impl Into<String>) -> Self {
        Error::Parse {
            input: input.to_string(),
            reason: reason.into(),
        }
    }
}

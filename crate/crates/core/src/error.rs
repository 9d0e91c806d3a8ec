use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("infeasible problem spec: {what} = {value}")]
    InfeasibleSpec { what: &'static str, value: f64 },

    #[error("exponent q_{index} = {q} lies below lambda = {lambda}")]
    RangeViolation { index: usize, q: f64, lambda: f64 },

    #[error("target is not on the simplex face (residual {residual:e})")]
    NotOnFace { residual: f64 },

    #[error("degenerate simplex: lambda = 2 collapses every vertex to (2,...,2)")]
    DegenerateSimplex,

    #[error("degenerate gradient: cannot maximize the zero functional")]
    DegenerateGradient,

    #[error("degenerate form: operator norm is zero")]
    DegenerateForm,

    #[error("enumeration budget exceeded: {required} extreme points required, budget is {budget}")]
    Budget { required: u128, budget: u128 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("spec error: {0}")]
    Spec(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("refused: {0}")]
    Refused(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

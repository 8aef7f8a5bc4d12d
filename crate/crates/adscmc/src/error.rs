use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier `{token}` at byte {offset}")]
    UnknownIdentifier { token: String, offset: usize },
    #[error("evaluation produced a non-finite value: {0}")]
    Eval(String),
    #[error("point {t} outside sampled range [{lo}, {hi}]")]
    Domain { t: f64, lo: f64, hi: f64 },
    #[error("invalid sampled field: {0}")]
    InvalidField(String),
    #[error("non-finite component in {0}")]
    NonFinite(&'static str),
    #[error("matrix is not unimodular: det = {det}")]
    NotUnimodular { det: f64 },
    #[error("matrix is singular: det = {det}")]
    Singular { det: f64 },
    #[error("input is not traceless: trace = {trace}")]
    NotTraceless { trace: f64 },
    #[error("quadrature did not converge on [{lo}, {hi}] (error estimate {estimate:e})")]
    Quadrature { lo: f64, hi: f64, estimate: f64 },
    #[error("integration step failure at node {index} (t = {t}): |det - 1| = {drift:e}; increase n")]
    StepFailure { index: usize, t: f64, drift: f64 },
    #[error("frame leg mismatch: expected {expected}, found {found}")]
    LegMismatch { expected: &'static str, found: &'static str },
    #[error("degenerate metric at (u, v) = ({u}, {v}): 2<phi_u, phi_v> = {value:e}")]
    DegenerateMetric { u: f64, v: f64, value: f64 },
    #[error("degenerate point at (u, v) = ({u}, {v})")]
    DegeneratePoint { u: f64, v: f64 },
    #[error("normal solve failed at (u, v) = ({u}, {v}): tangent system is rank-deficient")]
    NormalSolve { u: f64, v: f64 },
    #[error("data violate the compatibility equation: residual {residual:e} at (u, v) = ({u}, {v}) exceeds {tol:e}")]
    Compatibility { residual: f64, u: f64, v: f64, tol: f64 },
    #[error("vanishing coefficient at t = {t}: cannot divide by {value:e}")]
    Division { t: f64, value: f64 },
    #[error("projection pole: denominator {denominator:e}")]
    Pole { denominator: f64 },
    #[error("point is off the quadric: defect {defect:e}")]
    OffQuadric { defect: f64 },
    #[error("gallery entry `{name}` has no closed form for {leg}")]
    NoClosedForm { name: String, leg: &'static str },
    #[error("unknown gallery entry `{name}`; valid names: {valid}")]
    UnknownGallery { name: String, valid: String },
    #[error("grid too small: {0}")]
    Grid(String),
    #[error("format error: {0}")]
    Format(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

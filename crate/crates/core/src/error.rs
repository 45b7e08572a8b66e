use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("Newton iteration did not converge after {iterations} steps (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("singular Jacobian (condition estimate {condition:e})")]
    SingularJacobian { condition: f64 },

    #[error("iteration collapsed to the trivial solution (sup norm {norm:e})")]
    TrivialSolution { norm: f64 },

    #[error("kernel dimension mismatch: expected {expected}, found {found}")]
    KernelDimensionMismatch { expected: usize, found: usize },

    #[error("vector set is rank deficient (column {column})")]
    RankDeficient { column: usize },

    #[error("near-singular operator: non-kernel eigenvalue {value:e} below {threshold:e}")]
    NearSingular { value: f64, threshold: f64 },

    #[error("reduced K is singular: smallest |eigenvalue| {smallest:e}, condition {condition:e}")]
    KSingular { smallest: f64, condition: f64 },

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error(
        "negative count is ambiguous: eigenvalue {value:e} lies in the band below -{threshold:e}"
    )]
    BoundaryAmbiguity { value: f64, threshold: f64 },

    #[error("orthogonality violated: {0}")]
    Orthogonality(String),

    #[error("eigenvalue {re:e}{im:+e}i lies in the zero cluster")]
    ZeroCluster { re: f64, im: f64 },

    #[error("eigenvalue {re:e}{im:+e}i is too close to a class boundary: {reason}")]
    AmbiguousClass { re: f64, im: f64, reason: String },

    #[error("Krein sign at gamma = {gamma:e} is ambiguous (form {form:e})")]
    AmbiguousSign { gamma: f64, form: f64 },

    #[error("<L^+ phi0, phi0> = {value:e} is indistinguishable from zero")]
    H4Violation { value: f64 },

    #[error("matrix D is not invertible (det {det:e})")]
    H3Violation { det: f64 },

    #[error("F has no sign change on [{lo}, {hi}] (F(lo) = {f_lo:e}, F(hi) = {f_hi:e})")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by bad inputs rather than numerical trouble.
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            Error::Domain(_) | Error::InvalidGrid(_) | Error::InvalidModel(_) | Error::Usage(_)
        )
    }
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter violates the invariants of its type.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An argument is outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// The GIG has phi = 0 and the caller did not ask for the gamma limit.
    #[error("degenerate GIG parameters (phi = 0); request the gamma limit explicitly")]
    DegenerateGig,

    #[error("no data: {0}")]
    EmptyData(String),

    /// An elicited coverage cannot be matched by any gamma with the given mean.
    #[error("coverage {requested} is unattainable; attainable range is [{min}, {max}]")]
    UnattainableCoverage { requested: f64, min: f64, max: f64 },

    /// The solution lies on the boundary of the search region.
    #[error("fit reached the search boundary at {parameter} = {value}")]
    BoundaryFit { parameter: &'static str, value: f64 },

    #[error("singular Jacobian (|det J| = {0:e})")]
    SingularJacobian(f64),

    #[error("at least {required} expert opinions are required, got {got}")]
    InsufficientExperts { required: usize, got: usize },

    #[error("expert opinions have zero variance")]
    ZeroVariance,

    /// Dempster's rule with conflict K = 1.
    #[error("total conflict: the structures share no common focal region")]
    TotalConflict,

    #[error("p-boxes are inconsistent: lower bound exceeds upper bound at x = {x}")]
    InconsistentBoxes { x: f64 },

    #[error(
        "refusing to combine statistical (confidence) bounds with sure bounds without acknowledgment"
    )]
    MixedBoundKinds,

    #[error("unbounded support: {0}")]
    UnboundedSupport(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg()))
    }
}

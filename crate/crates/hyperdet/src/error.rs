use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("gamma function pole at argument {0}")]
    SingularGamma(f64),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("degenerate parameters: {0}")]
    DegenerateParams(String),
    #[error("no admissible branch: {0}")]
    NoAdmissibleBranch(String),
    #[error("tail truncation bound violated: {0}")]
    TailBoundViolation(String),
    #[error("inconsistent initial state: {0}")]
    InconsistentInit(String),
    #[error("step size underflow at t = {t}")]
    StepSizeUnderflow { t: f64 },
    #[error("pole encountered at t = {t}: {what}")]
    PoleEncountered { t: f64, what: String },
    #[error("insufficient grid: {0}")]
    InsufficientGrid(String),
    #[error("ill-conditioned fit (condition number {0:.3e})")]
    IllConditionedFit(f64),
    #[error("branch inversion failed at t = {0}")]
    BranchInversionFailure(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge after {subdivisions} subdivisions (estimated error {residual:e}, target {target:e})")]
    Quadrature {
        subdivisions: usize,
        residual: f64,
        target: f64,
    },

    #[error("step size underflow at t = {t} ps (h = {step:e})")]
    StepUnderflow { t: f64, step: f64 },

    #[error("integrator exceeded {steps} steps before reaching t = {t} ps")]
    TooManySteps { steps: usize, t: f64 },

    /// The excitation number never reaches 1/e.
    #[error("infinite lifetime: excitation number does not decay below 1/e")]
    InfiniteLifetime,

    #[error("root bracket failure: {0}")]
    Bracket(String),

    #[error("fit error: {0}")]
    Fit(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True for failures of a numerical kernel, as opposed to invalid input.
    pub fn is_numerical(&self) -> bool {
        !matches!(self, Error::Domain(_))
    }
}

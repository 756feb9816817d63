use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("quadrature did not converge: {0}")]
    Quadrature(String),
    #[error("loss of precision: {0}")]
    Precision(String),
    #[error("integrator step size underflow at tau = {tau}")]
    StepUnderflow { tau: f64 },
    #[error("refinement did not converge in cell ({i}, {j})")]
    Refinement { i: usize, j: usize },
    #[error("unsupported: {0}")]
    Unsupported(String),
}

impl Error {
    /// True for failures of an iterative numerical procedure, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Quadrature(_) | Error::Precision(_) | Error::StepUnderflow { .. } | Error::Refinement { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

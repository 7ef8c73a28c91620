use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("argument outside domain: {0}")]
    Domain(String),

    #[error("gamma function pole at z = {0}")]
    GammaPole(f64),

    #[error(
        "quadrature did not converge: error estimate {achieved:.3e} above target {target:.3e} \
         after {intervals} intervals"
    )]
    QuadratureNonConvergence {
        achieved: f64,
        target: f64,
        intervals: usize,
    },

    #[error("outcome probability {probability:.3e} below resolvable floor")]
    ProbabilityUnderflow { probability: f64 },

    #[error("truncated Fock space too small: {0}")]
    Truncation(String),
}

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg()))
    }
}

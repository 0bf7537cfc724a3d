use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument is outside the accepted range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// A point lies outside the domain where a formula is defined.
    #[error("{what}: x = {x} is outside the domain |x| < {limit}")]
    Domain { what: &'static str, x: f64, limit: f64 },

    /// A rejection loop hit its proposal or attempt cap.
    #[error("budget exhausted after {attempts} attempts ({what})")]
    Budget { what: &'static str, attempts: u64 },

    /// Adaptive quadrature could not reach the requested tolerance.
    #[error("quadrature did not converge on [{a}, {b}] (error estimate {estimate:e}, tolerance {tol:e})")]
    Convergence { a: f64, b: f64, estimate: f64, tol: f64 },

    /// An iterative linear algebra routine failed to converge.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// A CDF oracle supplied to a goodness-of-fit test misbehaved.
    #[error("bad CDF oracle: {0}")]
    Oracle(String),
}

impl Error {
    /// Process exit code used by the command line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parameter(_) | Error::Domain { .. } | Error::Oracle(_) => 1,
            Error::Budget { .. } | Error::Convergence { .. } | Error::Numerical(_) => 2,
        }
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }
}

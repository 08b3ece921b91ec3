use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("invalid operator parameters: {0}")]
    InvalidParams(String),

    #[error("buffer {buffer} is smaller than the operator order k = {k}")]
    BufferTooSmall { buffer: u32, k: u32 },

    #[error("no solution in the truncated space (residual {residual:.3e} at buffer {buffer}); try a larger buffer")]
    NoSolutionInTruncation { residual: f64, buffer: u32 },

    #[error("ill-conditioned factorization (relative pivot {pivot:.3e}); try exact mode or rescaling")]
    IllConditioned { pivot: f64 },

    #[error("quadrature did not converge (error estimate {estimate:.3e})")]
    QuadratureNotConverged { estimate: f64 },

    #[error("weight positivity violated: denominator {value:.3e} at |z|² = {t:.6}")]
    PositivityViolated { t: f64, value: f64 },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
}

pub type Result<T> = std::result::Result<T, Error>;

use thiserror::Error;

/// Errors surfaced by the numerical kernels and solvers.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside an operation's documented domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Initial data for a geodesic shot violates unit-speed admissibility.
    #[error("non-admissible initial data: {0}")]
    NonAdmissible(String),

    /// An iterative solver failed to meet its tolerance.
    #[error("solver did not converge: {0}")]
    NonConvergence(String),

    /// A grid or queue would exceed the configured memory/size budget.
    #[error("budget exceeded: {0}")]
    Budget(String),

    /// Expression id not known to the interval evaluator.
    #[error("unsupported expression: {0}")]
    UnknownExpression(String),

    /// Richardson extrapolation of boundary offsets failed to settle.
    #[error("extrapolation did not converge: {0}")]
    Extrapolation(String),

    /// I/O failure while writing a report.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

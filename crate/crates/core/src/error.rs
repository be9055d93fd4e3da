use thiserror::Error;

/// Errors raised by the distribution, Meijer-G and SOP evaluators.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is non-finite or outside its domain.
    #[error("parameter out of domain: {0}")]
    Domain(String),

    /// The requested closed form does not exist for these parameters
    /// (non-integral Meijer-G orders, non-integer shape, ...). The quadrature
    /// or Monte-Carlo path still applies.
    #[error("closed form unavailable: {0}")]
    Mode(String),

    /// Moment matching produced a degenerate gamma law.
    #[error("moment fit degenerate: {0}")]
    Fit(String),

    /// No vertical contour separates the two pole families.
    #[error("contour error: {0}")]
    Contour(String),

    /// Meijer-G evaluation failed its own accuracy checks.
    #[error("Meijer G evaluation did not converge: {0}")]
    Convergence(String),

    #[error("quadrature failed: {0}")]
    Quadrature(String),

    /// Composition enumeration would exceed the allocation guard.
    #[error("{count} compositions exceed the limit of {limit}")]
    Capacity { count: u128, limit: usize },

    /// A gamma ratio hits a pole because two parameters coincide.
    #[error("degenerate gamma parameters: {0}")]
    Degenerate(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be finite and > 0, got {value}")))
    }
}

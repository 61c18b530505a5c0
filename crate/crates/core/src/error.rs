use alloc::string::String;

/// Errors raised by the numerical routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// The grid cannot resolve the requested modes.
    #[error("resolution error: grid resolution {resolution} < required {required}")]
    Resolution { resolution: usize, required: usize },
    /// A root bracket could not be found.
    #[error("search error: {0}")]
    Search(String),
    /// A least-squares problem is degenerate.
    #[error("fitting error: {0}")]
    Fitting(String),
    /// A quadrature or inversion did not reach its tolerance.
    #[error("accuracy error: {0}")]
    Accuracy(String),
    /// A report was requested without the sweeps it depends on.
    #[error("dependency error: {0}")]
    Dependency(String),
    /// Relative mass drift exceeded the blow-up guard.
    #[error("mass drift {drift:e} at t = {time} exceeds guard {limit:e}")]
    MassDrift { time: f64, drift: f64, limit: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

macro_rules! domain {
    ($($arg:tt)*) => {
        $crate::error::Error::Domain(::alloc::format!($($arg)*))
    };
}
pub(crate) use domain;

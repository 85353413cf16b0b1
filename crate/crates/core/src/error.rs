use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the requested function.
    #[error("{name}: {reason}")]
    Domain { name: &'static str, reason: String },

    /// A numerical procedure stopped before meeting its tolerance.
    #[error(
        "{what} did not converge: estimated error {achieved:e} exceeds tolerance {tolerance:e}"
    )]
    NoConvergence {
        what: &'static str,
        achieved: f64,
        tolerance: f64,
    },

    /// The birth-death state space was cut off too early.
    #[error(
        "truncation at K = {cap} leaves tail mass {tail_mass:e} (limit {limit:e}); use a larger K"
    )]
    Truncation {
        cap: usize,
        tail_mass: f64,
        limit: f64,
    },
}

impl Error {
    pub(crate) fn domain(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Domain {
            name,
            reason: reason.into(),
        }
    }

    /// True for argument-validation failures, false for numerical failures.
    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain { .. })
    }
}

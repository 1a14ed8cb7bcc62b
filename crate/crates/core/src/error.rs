use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An input violated a documented invariant. `field` names the offending
    /// parameter.
    Validation { field: &'static str, reason: &'static str },
    /// A function was evaluated outside its domain.
    Domain { what: &'static str, value: f64 },
    /// Adaptive quadrature ran out of subdivisions before meeting tolerance.
    Quadrature { estimate: f64, error: f64 },
    /// Root bracketing or iteration failed.
    RootNotFound { what: &'static str },
    /// No design point satisfies the objective's constraints.
    Infeasible { budget: f64, min_barrier: f64 },
    /// The servo cannot supply the energy needed to cross the barrier.
    ServoTooWeak { limit: f64, barrier: f64 },
    /// The integrator diverged or gained energy it was never given.
    Instability { time: f64, energy_gain: f64, injected: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Validation { field, reason } => write!(f, "invalid `{field}`: {reason}"),
            Error::Domain { what, value } => write!(f, "{what} is outside its domain (got {value})"),
            Error::Quadrature { estimate, error } => write!(
                f,
                "quadrature did not converge (estimate {estimate:e}, error {error:e})"
            ),
            Error::RootNotFound { what } => write!(f, "root finding failed: {what}"),
            Error::Infeasible { budget, min_barrier } => write!(
                f,
                "no feasible design: budget {budget:e} J is below the smallest barrier {min_barrier:e} J"
            ),
            Error::ServoTooWeak { limit, barrier } => write!(
                f,
                "servo energy limit {limit:e} J cannot overcome the barrier {barrier:e} J"
            ),
            Error::Instability { time, energy_gain, injected } => write!(
                f,
                "integrator unstable at t = {time} s: energy gain {energy_gain:e} J exceeds twice the injected {injected:e} J"
            ),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn positive(field: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::Validation { field, reason: "must be finite and strictly positive" })
    }
}

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The block operator is ±identity; its eigenvectors are arbitrary.
    #[error("degenerate spectrum (w = {w:e}); eigenvectors are not determined")]
    DegenerateSpectrum { w: f64 },

    /// A closed-form count divides by a vanishing rotation angle.
    #[error("degenerate angle: beta = {beta}, theta = {theta}")]
    DegenerateAngle { beta: f64, theta: f64 },

    #[error("root search failed: {0}")]
    ConvergenceFailure(String),

    #[error("plan beta {plan} does not match instance beta {instance}")]
    BetaMismatch { plan: f64, instance: f64 },

    /// An inverse trigonometric argument left [-1, 1] by more than rounding.
    #[error("argument {0} outside [-1, 1]")]
    OutOfDomain(f64),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

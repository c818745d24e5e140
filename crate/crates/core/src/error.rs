use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("numerical degeneracy: {0}")]
    Degenerate(String),

    #[error("Newton iteration failed to converge for index {index} (last update {residual:e})")]
    Convergence { index: usize, residual: f64 },

    #[error("n = {n} is outside the asymptotic regime (n >= {min}); use the dispatcher")]
    Regime { n: usize, min: usize },

    #[error("recurrence scaling failed: {0}")]
    Scaling(String),

    #[error("auxiliary rule insufficient: coefficients drifted by {drift:e} after doubling to {points} points")]
    Resolution { drift: f64, points: usize },

    #[error("support solve did not converge (last endpoints a = {a}, b = {b})")]
    SupportSolve { a: f64, b: f64 },

    #[error("equilibrium measure is not supported on a single interval (min density {min_density:e})")]
    UnsupportedRegime { min_density: f64 },

    #[error("degenerate node: zero derivative at index {0}")]
    DegenerateNode(usize),

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("tridiagonal eigensolver did not converge")]
    Eigen,
}

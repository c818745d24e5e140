//! Fast Gauss quadrature for the Hermite weight `e^{-x^2}` and for Freud
//! weights `e^{-V(x)}` with `V` a monic even-degree polynomial, plus weighted
//! barycentric interpolation at the resulting nodes.
//!
//! ```
//! let rule = fastgh::hermite_rule(1000, false).unwrap();
//! let total: f64 = rule.weights.iter().sum();
//! assert!((total - std::f64::consts::PI.sqrt()).abs() < 1e-13);
//! ```

pub mod cli;
pub mod equilibrium;
pub mod error;
pub mod generalized;
pub mod hermite_asy;
pub mod interp;
pub mod potential;
pub mod recurrence;
pub mod rule;
pub mod specfun;
pub mod xprec;

pub use equilibrium::{
    cdf, density, initial_guesses_general, inverse_cdf, solve_support, subsample_threshold,
    EquilibriumMeasure,
};
pub use error::{Error, Result};
pub use generalized::{
    freud_rule, freud_rule_general, newton_general, RecurrenceEvaluator, ScaledNodeSet,
    WeightedPolyEvaluator,
};
pub use hermite_asy::{hermite_rule, hermite_rule_asy, HermiteContext, ScaledUEval};
pub use interp::BarycentricInterpolant;
pub use potential::{FreudPotential, PotentialShift};
pub use recurrence::{
    golub_welsch, hermite_eval_scaled, hermite_rule_rec, stieltjes_coeffs, RecurrenceCoeffs,
};
pub use rule::{QuadratureRule, WeightTag};
pub use specfun::{airy_ai, airy_ai_prime, airy_zero};

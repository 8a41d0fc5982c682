//! Stochastic resources: finitely supported integer distributions under the
//! usual stochastic order, equiprobable scenario vectors, and the probability
//! functionals evaluated on them.

mod convolution;
mod distribution;
mod scenario;
mod utility;

use thiserror::Error;

use crate::algebra::AlgebraError;

pub use convolution::{convolve, fft_convolve, naive_convolve, DEFAULT_SUPPORT_CAP, NAIVE_THRESHOLD};
pub use distribution::{less_eq_st, less_eq_st_tol, meet_st, DiscreteDistribution, DistributionAlgebra};
pub use scenario::{ScenarioAlgebra, ScenarioVector};
pub use utility::UtilityFunction;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StochasticError {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// CVaR of an atomic distribution given as `(value, probability)` pairs
/// sorted by value, with `q` its `β`-quantile and `cdf_q = P(ξ ≤ q)`.
pub(crate) fn cvar_from_tail(tail_mass_times_value: f64, q: f64, cdf_q: f64, beta: f64) -> f64 {
    (tail_mass_times_value + q * (cdf_q - beta)) / (1.0 - beta)
}

pub(crate) fn check_unit(name: &str, value: f64) -> Result<(), StochasticError> {
    if !(0.0..=1.0).contains(&value) {
        return Err(StochasticError::Parameter(format!(
            "{name} = {value} not in [0, 1]"
        )));
    }
    Ok(())
}

pub(crate) fn check_beta(beta: f64) -> Result<(), StochasticError> {
    if !(0.0..1.0).contains(&beta) {
        return Err(StochasticError::Parameter(format!(
            "beta = {beta} not in [0, 1)"
        )));
    }
    Ok(())
}

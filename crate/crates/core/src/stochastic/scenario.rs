use crate::algebra::{Algebra, AlgebraError};

use super::{check_beta, check_unit, cvar_from_tail, StochasticError};

/// Realizations of a random variable on `N` equiprobable sampled scenarios.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioVector(pub Vec<f64>);

impl ScenarioVector {
    pub fn new(values: Vec<f64>) -> Self {
        ScenarioVector(values)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn sorted(&self) -> Vec<f64> {
        let mut v = self.0.clone();
        v.sort_by(f64::total_cmp);
        v
    }

    pub fn expectation(&self) -> f64 {
        self.0.iter().sum::<f64>() / self.0.len() as f64
    }

    /// Smallest value `v` of the empirical distribution with `P(ξ ≤ v) ≥ α`.
    pub fn value_at_risk(&self, alpha: f64) -> Result<f64, StochasticError> {
        check_unit("alpha", alpha)?;
        let s = self.sorted();
        Ok(s[quantile_index(s.len(), alpha)])
    }

    pub fn cvar(&self, beta: f64) -> Result<f64, StochasticError> {
        check_beta(beta)?;
        let s = self.sorted();
        let n = s.len() as f64;
        let q = s[quantile_index(s.len(), beta)];
        let at_most = s.partition_point(|v| *v <= q);
        let tail: f64 = s[at_most..].iter().map(|v| v / n).sum();
        Ok(cvar_from_tail(tail, q, at_most as f64 / n, beta))
    }

    /// Fraction of scenarios strictly above `τ`.
    pub fn prob_exceeds(&self, tau: f64) -> f64 {
        self.0.iter().filter(|v| **v > tau).count() as f64 / self.0.len() as f64
    }
}

fn quantile_index(n: usize, alpha: f64) -> usize {
    (0..n)
        .find(|k| (k + 1) as f64 / n as f64 >= alpha)
        .unwrap_or(n - 1)
}

/// `(ℝᴺ, +, ≤)`: scenario vectors with componentwise operations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioAlgebra {
    pub scenarios: usize,
}

impl Algebra for ScenarioAlgebra {
    type Elem = ScenarioVector;

    fn zero(&self) -> ScenarioVector {
        ScenarioVector(vec![0.0; self.scenarios])
    }

    fn combine(&self, x: &ScenarioVector, y: &ScenarioVector) -> ScenarioVector {
        ScenarioVector(x.0.iter().zip(&y.0).map(|(a, b)| a + b).collect())
    }

    fn meet(&self, x: &ScenarioVector, y: &ScenarioVector) -> ScenarioVector {
        ScenarioVector(x.0.iter().zip(&y.0).map(|(a, b)| a.min(*b)).collect())
    }

    fn less_eq(&self, x: &ScenarioVector, y: &ScenarioVector) -> bool {
        x.0.iter().zip(&y.0).all(|(a, b)| a <= b)
    }

    fn is_distributive(&self) -> bool {
        true
    }

    fn validate(&self, x: &ScenarioVector) -> Result<(), AlgebraError> {
        if x.len() != self.scenarios {
            return Err(AlgebraError::DimensionMismatch {
                expected: self.scenarios,
                found: x.len(),
            });
        }
        Ok(())
    }
}

use crate::algebra::{Algebra, AlgebraError};

use super::convolution::{convolve, DEFAULT_SUPPORT_CAP};
use super::{check_beta, check_unit, cvar_from_tail, StochasticError, UtilityFunction};

/// Distribution of an integer random variable with finite support.
///
/// Stored through its cumulative distribution on the consecutive integers
/// `offset ..= offset + len - 1`. The representation is trimmed: `F(offset) > 0`,
/// the last entry is exactly `1.0`, and every earlier entry is below `1.0`.
/// Keeping the CDF as the primary data makes the stochastic order and its meet
/// exact (pointwise comparisons and maxima of stored values).
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    offset: i64,
    cdf: Vec<f64>,
}

const SUM_TOLERANCE: f64 = 1e-9;

impl DiscreteDistribution {
    /// Builds a distribution from probabilities of `offset, offset + 1, …`.
    ///
    /// Zero entries at either end are trimmed. The probabilities must be
    /// non-negative and sum to one within `1e-9`.
    pub fn from_probabilities(offset: i64, probs: &[f64]) -> Result<Self, StochasticError> {
        if probs.iter().any(|p| !p.is_finite() || *p < 0.0) {
            return Err(StochasticError::InvalidDistribution(
                "probabilities must be finite and non-negative".into(),
            ));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(StochasticError::InvalidDistribution(format!(
                "probabilities sum to {total}"
            )));
        }
        let first = probs.iter().position(|p| *p > 0.0).expect("positive mass");
        let last = probs.iter().rposition(|p| *p > 0.0).expect("positive mass");
        Ok(Self::from_mass(offset + first as i64, &probs[first..=last], total))
    }

    /// Builds from non-negative masses (already trimmed of zero ends),
    /// normalizing by `total`.
    pub(crate) fn from_mass(offset: i64, mass: &[f64], total: f64) -> Self {
        let mut cdf = Vec::with_capacity(mass.len());
        let mut acc = 0.0;
        for p in mass {
            acc += p / total;
            cdf.push(acc.min(1.0));
        }
        Self::from_cdf_raw(offset, cdf)
    }

    /// Finalizes a nondecreasing CDF: forces the top to one and drops the
    /// entries after the first point reaching one.
    pub(crate) fn from_cdf_raw(offset: i64, mut cdf: Vec<f64>) -> Self {
        debug_assert!(!cdf.is_empty());
        if let Some(first_one) = cdf.iter().position(|f| *f >= 1.0) {
            cdf.truncate(first_one + 1);
        }
        *cdf.last_mut().expect("non-empty") = 1.0;
        // leading exact zeros
        let lead = cdf.iter().position(|f| *f > 0.0).unwrap_or(cdf.len() - 1);
        if lead > 0 {
            cdf.drain(..lead);
        }
        DiscreteDistribution {
            offset: offset + lead as i64,
            cdf,
        }
    }

    /// Dirac mass at `t`.
    pub fn point(t: i64) -> Self {
        DiscreteDistribution {
            offset: t,
            cdf: vec![1.0],
        }
    }

    /// Uniform distribution on the integers `lo ..= hi`.
    pub fn uniform(lo: i64, hi: i64) -> Self {
        assert!(lo <= hi, "empty uniform support");
        let n = (hi - lo + 1) as usize;
        Self::from_mass(lo, &vec![1.0; n], n as f64)
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn len(&self) -> usize {
        self.cdf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cdf.is_empty()
    }

    pub fn support_min(&self) -> i64 {
        self.offset
    }

    pub fn support_max(&self) -> i64 {
        self.offset + self.cdf.len() as i64 - 1
    }

    pub fn cdf_values(&self) -> &[f64] {
        &self.cdf
    }

    /// `P(ξ ≤ t)`.
    pub fn cdf(&self, t: i64) -> f64 {
        if t < self.offset {
            0.0
        } else if t >= self.support_max() {
            1.0
        } else {
            self.cdf[(t - self.offset) as usize]
        }
    }

    /// Probabilities of `offset, offset + 1, …, support_max`.
    pub fn probabilities(&self) -> Vec<f64> {
        let mut prev = 0.0;
        self.cdf
            .iter()
            .map(|f| {
                let p = f - prev;
                prev = *f;
                p
            })
            .collect()
    }

    /// `P(ξ = t)`.
    pub fn probability(&self, t: i64) -> f64 {
        self.cdf(t) - self.cdf(t - 1)
    }

    pub fn expectation(&self) -> f64 {
        // E = lo + Σ_{t < hi} P(ξ > t)
        let n = self.cdf.len();
        self.offset as f64 + self.cdf[..n - 1].iter().map(|f| 1.0 - f).sum::<f64>()
    }

    /// `inf { t : P(ξ ≤ t) ≥ α }`.
    pub fn value_at_risk(&self, alpha: f64) -> Result<f64, StochasticError> {
        check_unit("alpha", alpha)?;
        Ok(self.quantile_index(alpha) as f64 + self.offset as f64)
    }

    fn quantile_index(&self, alpha: f64) -> usize {
        self.cdf.partition_point(|f| *f < alpha)
    }

    /// Conditional value at risk `(1/(1-β)) ∫_β^1 VaR_α dα`, evaluated in
    /// closed form over the atoms.
    pub fn cvar(&self, beta: f64) -> Result<f64, StochasticError> {
        check_beta(beta)?;
        let qi = self.quantile_index(beta);
        let probs = self.probabilities();
        let tail: f64 = probs[qi + 1..]
            .iter()
            .enumerate()
            .map(|(j, p)| (self.offset + (qi + 1 + j) as i64) as f64 * p)
            .sum();
        let q = (self.offset + qi as i64) as f64;
        Ok(cvar_from_tail(tail, q, self.cdf[qi], beta))
    }

    /// Strict exceedance `P(ξ > τ)`, comparing the integer support with `⌊τ⌋`.
    pub fn prob_exceeds(&self, tau: f64) -> f64 {
        if tau.is_nan() {
            return f64::NAN;
        }
        let t = tau.floor();
        if t < self.offset as f64 {
            1.0
        } else if t >= self.support_max() as f64 {
            0.0
        } else {
            1.0 - self.cdf(t as i64)
        }
    }

    pub fn expected_utility(&self, f: &UtilityFunction) -> f64 {
        self.probabilities()
            .iter()
            .enumerate()
            .map(|(i, p)| f.eval((self.offset + i as i64) as f64) * p)
            .sum()
    }

    /// Shifts the support by `c` (convolution with the Dirac mass at `c`).
    pub fn shifted(&self, c: i64) -> Self {
        DiscreteDistribution {
            offset: self.offset + c,
            cdf: self.cdf.clone(),
        }
    }
}

/// Usual stochastic order: `F_a(t) ≥ F_b(t)` for every integer `t`.
pub fn less_eq_st(a: &DiscreteDistribution, b: &DiscreteDistribution) -> bool {
    if b.support_min() < a.support_min() || a.support_max() > b.support_max() {
        return false;
    }
    (b.support_min()..a.support_max()).all(|t| a.cdf(t) >= b.cdf(t))
}

/// `less_eq_st` up to an absolute slack `tol` on the CDFs, for comparing
/// resources that went through different floating-point evaluation orders.
pub fn less_eq_st_tol(a: &DiscreteDistribution, b: &DiscreteDistribution, tol: f64) -> bool {
    let lo = a.support_min().min(b.support_min());
    let hi = a.support_max().max(b.support_max());
    (lo..=hi).all(|t| a.cdf(t) + tol >= b.cdf(t))
}

/// Meet under the usual stochastic order: the CDF is the pointwise maximum.
pub fn meet_st(a: &DiscreteDistribution, b: &DiscreteDistribution) -> DiscreteDistribution {
    if less_eq_st(a, b) {
        return a.clone();
    }
    if less_eq_st(b, a) {
        return b.clone();
    }
    let lo = a.support_min().min(b.support_min());
    let hi = a.support_max().min(b.support_max());
    let cdf = (lo..=hi).map(|t| a.cdf(t).max(b.cdf(t))).collect();
    DiscreteDistribution::from_cdf_raw(lo, cdf)
}

/// `(𝕄, ∗, ≤st)`: distributions with convolution and the usual stochastic
/// order. Not distributive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistributionAlgebra {
    pub max_support: usize,
}

impl Default for DistributionAlgebra {
    fn default() -> Self {
        DistributionAlgebra {
            max_support: DEFAULT_SUPPORT_CAP,
        }
    }
}

impl Algebra for DistributionAlgebra {
    type Elem = DiscreteDistribution;

    fn zero(&self) -> DiscreteDistribution {
        DiscreteDistribution::point(0)
    }

    /// Panics when the support cap is exceeded; use `checked_combine` or
    /// [`convolve`] to get the overflow as an error.
    fn combine(&self, x: &DiscreteDistribution, y: &DiscreteDistribution) -> DiscreteDistribution {
        match convolve(x, y, self.max_support) {
            Ok(d) => d,
            Err(e) => panic!("distribution combine failed: {e}"),
        }
    }

    fn meet(&self, x: &DiscreteDistribution, y: &DiscreteDistribution) -> DiscreteDistribution {
        meet_st(x, y)
    }

    fn less_eq(&self, x: &DiscreteDistribution, y: &DiscreteDistribution) -> bool {
        less_eq_st(x, y)
    }

    fn is_distributive(&self) -> bool {
        false
    }

    fn validate(&self, x: &DiscreteDistribution) -> Result<(), AlgebraError> {
        if x.len() > self.max_support {
            return Err(AlgebraError::ResourceOverflow {
                len: x.len(),
                cap: self.max_support,
            });
        }
        Ok(())
    }

    fn checked_combine(
        &self,
        x: &DiscreteDistribution,
        y: &DiscreteDistribution,
    ) -> Result<DiscreteDistribution, AlgebraError> {
        convolve(x, y, self.max_support).map_err(|e| match e {
            StochasticError::Algebra(a) => a,
            other => AlgebraError::Invalid(other.to_string()),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dist(offset: i64, p: &[f64]) -> DiscreteDistribution {
        DiscreteDistribution::from_probabilities(offset, p).unwrap()
    }

    #[test]
    fn construction_trims_and_validates() {
        let d = dist(0, &[0.0, 0.5, 0.5, 0.0]);
        assert_eq!(d.offset(), 1);
        assert_eq!(d.len(), 2);
        assert!(DiscreteDistribution::from_probabilities(0, &[0.5, 0.4]).is_err());
        assert!(DiscreteDistribution::from_probabilities(0, &[1.5, -0.5]).is_err());
    }

    #[test]
    fn meet_examples() {
        let a = dist(0, &[0.5, 0.0, 0.5]);
        let m = meet_st(&a, &DiscreteDistribution::point(1));
        assert_eq!(m, dist(0, &[0.5, 0.5]));
        assert_eq!(meet_st(&a, &a), a);
        let b = dist(0, &[0.5, 0.5]);
        assert_eq!(meet_st(&b, &DiscreteDistribution::point(1)), b);
    }

    #[test]
    fn order_examples() {
        let d0 = DiscreteDistribution::point(0);
        let d1 = DiscreteDistribution::point(1);
        assert!(less_eq_st(&d0, &d1));
        assert!(!less_eq_st(&d1, &d0));
        let a = dist(0, &[0.5, 0.0, 0.5]);
        assert!(!less_eq_st(&a, &d1));
        let m = meet_st(&a, &d1);
        assert!(less_eq_st(&m, &a) && less_eq_st(&m, &d1));
        assert!(!less_eq_st(&a, &m));
    }

    #[test]
    fn expectation_examples() {
        assert_eq!(DiscreteDistribution::point(5).expectation(), 5.0);
        assert_eq!(dist(0, &[0.5, 0.0, 0.5]).expectation(), 1.0);
        let mut p = vec![0.0; 11];
        p[0] = 0.9;
        p[10] = 0.1;
        assert!((dist(0, &p).expectation() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn var_examples() {
        let a = dist(0, &[0.5, 0.0, 0.5]);
        assert_eq!(a.value_at_risk(0.5).unwrap(), 0.0);
        assert_eq!(a.value_at_risk(0.75).unwrap(), 2.0);
        assert_eq!(DiscreteDistribution::point(3).value_at_risk(0.3).unwrap(), 3.0);
        assert!(a.value_at_risk(1.5).is_err());
        assert!(a.value_at_risk(-0.1).is_err());
    }

    #[test]
    fn cvar_examples() {
        let mut p = vec![0.0; 11];
        p[0] = 0.9;
        p[10] = 0.1;
        let d = dist(0, &p);
        assert!((d.cvar(0.9).unwrap() - 10.0).abs() < 1e-9);
        assert!((d.cvar(0.0).unwrap() - d.expectation()).abs() < 1e-12);
        assert_eq!(DiscreteDistribution::point(4).cvar(0.7).unwrap(), 4.0);
        assert!(d.cvar(1.0).is_err());
    }

    #[test]
    fn exceedance_examples() {
        assert_eq!(dist(0, &[0.5, 0.0, 0.5]).prob_exceeds(1.0), 0.5);
        assert_eq!(DiscreteDistribution::point(3).prob_exceeds(3.0), 0.0);
        assert_eq!(dist(0, &[0.25, 0.5, 0.25]).prob_exceeds(0.0), 0.75);
        // floor convention for fractional thresholds
        assert_eq!(dist(0, &[0.25, 0.5, 0.25]).prob_exceeds(0.9), 0.75);
        assert_eq!(dist(0, &[0.25, 0.5, 0.25]).prob_exceeds(-0.5), 1.0);
    }

    #[test]
    fn utility_examples() {
        let a = dist(0, &[0.5, 0.0, 0.5]);
        let id = UtilityFunction::new(vec![(0.0, 0.0), (1.0, 1.0)]).unwrap();
        assert!((a.expected_utility(&id) - 1.0).abs() < 1e-12);
        let seven = UtilityFunction::new(vec![(0.0, 7.0)]).unwrap();
        assert!((a.expected_utility(&seven) - 7.0).abs() < 1e-12);
        let hinge = UtilityFunction::new(vec![(0.0, 0.0), (1.0, 0.0), (2.0, 1.0)]).unwrap();
        assert!((a.expected_utility(&hinge) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn cdf_invariants_hold() {
        let d = dist(-3, &[0.1, 0.2, 0.3, 0.4]);
        let c = d.cdf_values();
        assert!(c.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(*c.last().unwrap(), 1.0);
        assert!(c[0] > 0.0);
        assert_eq!(d.cdf(-4), 0.0);
        assert_eq!(d.cdf(100), 1.0);
    }
}

use super::StochasticError;

/// Non-decreasing piecewise-linear function given by breakpoints, extended
/// beyond the first and last breakpoints with the adjacent segment slopes.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilityFunction {
    points: Vec<(f64, f64)>,
}

impl UtilityFunction {
    pub fn new(points: Vec<(f64, f64)>) -> Result<Self, StochasticError> {
        if points.is_empty() {
            return Err(StochasticError::Parameter("utility needs a breakpoint".into()));
        }
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(StochasticError::Parameter(
                    "utility breakpoints must be strictly increasing".into(),
                ));
            }
            if w[1].1 < w[0].1 {
                return Err(StochasticError::Parameter(
                    "utility must be non-decreasing".into(),
                ));
            }
        }
        Ok(UtilityFunction { points })
    }

    pub fn identity() -> Self {
        UtilityFunction {
            points: vec![(0.0, 0.0), (1.0, 1.0)],
        }
    }

    pub fn points(&self) -> &[(f64, f64)] {
        &self.points
    }

    pub fn eval(&self, t: f64) -> f64 {
        let p = &self.points;
        if p.len() == 1 {
            return p[0].1;
        }
        let slope = |i: usize| (p[i + 1].1 - p[i].1) / (p[i + 1].0 - p[i].0);
        if t <= p[0].0 {
            return p[0].1 + slope(0) * (t - p[0].0);
        }
        let last = p.len() - 1;
        if t >= p[last].0 {
            return p[last].1 + slope(last - 1) * (t - p[last].0);
        }
        let i = p.partition_point(|(x, _)| *x <= t) - 1;
        p[i].1 + slope(i) * (t - p[i].0)
    }
}

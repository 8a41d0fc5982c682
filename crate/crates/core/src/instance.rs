//! Problem instances: a digraph with per-arc resources, an origin and a
//! destination, and a cost / infeasibility pair from a fixed catalog of
//! isotone functions.

use std::fmt;

use rand::Rng;
use thiserror::Error;

use crate::algebra::{Algebra, AlgebraError, Ext, ProductAlgebra, ScalarAlgebra, Vector, VectorAlgebra};
use crate::graph::{scalar_dijkstra, Digraph, GraphError};
use crate::rng::stream;
use crate::stochastic::{
    DiscreteDistribution, DistributionAlgebra, ScenarioAlgebra, ScenarioVector, StochasticError,
    UtilityFunction,
};

/// Tolerance on the chance constraint `P(ξ > τ) ≤ α`.
pub const PROBCON_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InstanceError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Stochastic(#[from] StochasticError),
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("no path from {origin} to {destination}")]
    NoPath { origin: usize, destination: usize },
}

/// A cost `c` and infeasibility `ρ` over one algebra, plus the scalarization
/// `φ` used as Dijkstra key and the optional morphism `ω` to `(ℝ, +, ≤)`.
pub trait Problem: Clone + fmt::Debug + Send + Sync {
    type A: Algebra;

    fn algebra(&self) -> &Self::A;

    fn cost(&self, x: &<Self::A as Algebra>::Elem) -> f64;

    fn infeasible(&self, x: &<Self::A as Algebra>::Elem) -> bool;

    /// Isotone scalarization, non-negative on arc resources of generated
    /// instances.
    fn scalarize(&self, x: &<Self::A as Algebra>::Elem) -> f64;

    /// Monoid morphism `ω`, when the problem has one.
    fn morphism(&self, _x: &<Self::A as Algebra>::Elem) -> Option<f64> {
        None
    }

    /// Whether `ω ≤ c`, so that the incumbent cost also caps `ω`.
    fn morphism_bounds_cost(&self) -> bool {
        false
    }

    fn name(&self) -> &'static str;

    fn cost_ext(&self, x: &Ext<<Self::A as Algebra>::Elem>) -> f64 {
        match x {
            Ext::Finite(e) => self.cost(e),
            Ext::Top => f64::INFINITY,
        }
    }

    fn infeasible_ext(&self, x: &Ext<<Self::A as Algebra>::Elem>) -> bool {
        match x {
            Ext::Finite(e) => self.infeasible(e),
            Ext::Top => true,
        }
    }

    fn scalarize_ext(&self, x: &Ext<<Self::A as Algebra>::Elem>) -> f64 {
        match x {
            Ext::Finite(e) => self.scalarize(e),
            Ext::Top => f64::INFINITY,
        }
    }
}

pub type Elem<P> = <<P as Problem>::A as Algebra>::Elem;

/// `c(x) = w⁰`, `ρ(x) = 1` iff some `wⁱ > Wⁱ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rcsp {
    algebra: VectorAlgebra,
    thresholds: Vec<f64>,
}

impl Rcsp {
    pub fn new(thresholds: Vec<f64>) -> Self {
        Rcsp {
            algebra: VectorAlgebra::new(thresholds.len() + 1),
            thresholds,
        }
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn k(&self) -> usize {
        self.thresholds.len()
    }
}

impl Problem for Rcsp {
    type A = VectorAlgebra;

    fn algebra(&self) -> &VectorAlgebra {
        &self.algebra
    }

    fn cost(&self, x: &Vector) -> f64 {
        x[0]
    }

    fn infeasible(&self, x: &Vector) -> bool {
        self.thresholds.iter().enumerate().any(|(i, w)| x[i + 1] > *w)
    }

    fn scalarize(&self, x: &Vector) -> f64 {
        x.sum()
    }

    fn morphism(&self, x: &Vector) -> Option<f64> {
        Some(x[0])
    }

    fn morphism_bounds_cost(&self) -> bool {
        true
    }

    fn name(&self) -> &'static str {
        "rcsp"
    }
}

/// `c(ξ) = CVaR_β(ξ)`, no constraint.
#[derive(Debug, Clone, PartialEq)]
pub struct CvarProblem {
    algebra: DistributionAlgebra,
    beta: f64,
}

impl CvarProblem {
    pub fn new(beta: f64) -> Result<Self, InstanceError> {
        crate::stochastic::check_beta(beta)?;
        Ok(CvarProblem {
            algebra: DistributionAlgebra::default(),
            beta,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }
}

impl Problem for CvarProblem {
    type A = DistributionAlgebra;

    fn algebra(&self) -> &DistributionAlgebra {
        &self.algebra
    }

    fn cost(&self, x: &DiscreteDistribution) -> f64 {
        x.cvar(self.beta).expect("beta checked at construction")
    }

    fn infeasible(&self, _x: &DiscreteDistribution) -> bool {
        false
    }

    fn scalarize(&self, x: &DiscreteDistribution) -> f64 {
        x.expectation()
    }

    // E ≤ CVaR_β, so the incumbent also caps the expectation budget.
    fn morphism(&self, x: &DiscreteDistribution) -> Option<f64> {
        Some(x.expectation())
    }

    fn morphism_bounds_cost(&self) -> bool {
        true
    }

    fn name(&self) -> &'static str {
        "cvar"
    }
}

/// CVaR on equiprobable scenario vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioCvar {
    algebra: ScenarioAlgebra,
    beta: f64,
}

impl ScenarioCvar {
    pub fn new(scenarios: usize, beta: f64) -> Result<Self, InstanceError> {
        crate::stochastic::check_beta(beta)?;
        if scenarios == 0 {
            return Err(InstanceError::Invalid("need at least one scenario".into()));
        }
        Ok(ScenarioCvar {
            algebra: ScenarioAlgebra { scenarios },
            beta,
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn scenarios(&self) -> usize {
        self.algebra.scenarios
    }
}

impl Problem for ScenarioCvar {
    type A = ScenarioAlgebra;

    fn algebra(&self) -> &ScenarioAlgebra {
        &self.algebra
    }

    fn cost(&self, x: &ScenarioVector) -> f64 {
        x.cvar(self.beta).expect("beta checked at construction")
    }

    fn infeasible(&self, _x: &ScenarioVector) -> bool {
        false
    }

    fn scalarize(&self, x: &ScenarioVector) -> f64 {
        x.expectation()
    }

    fn morphism(&self, x: &ScenarioVector) -> Option<f64> {
        Some(x.expectation())
    }

    fn morphism_bounds_cost(&self) -> bool {
        true
    }

    fn name(&self) -> &'static str {
        "scen"
    }
}

/// Which morphism the chance-constrained problem exposes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ProbConMorphism {
    /// `(w, ξ) ↦ w`, equal to the cost.
    #[default]
    Weight,
    /// `(w, ξ) ↦ w + E(ξ)`.
    WeightPlusMean,
}

/// `c((w, ξ)) = w`, `ρ((w, ξ)) = 1` iff `P(ξ > τ) > α`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbCon {
    algebra: ProductAlgebra<ScalarAlgebra, DistributionAlgebra>,
    tau: f64,
    alpha: f64,
    morphism: ProbConMorphism,
}

impl ProbCon {
    pub fn new(tau: f64, alpha: f64) -> Result<Self, InstanceError> {
        crate::stochastic::check_unit("alpha", alpha)?;
        Ok(ProbCon {
            algebra: ProductAlgebra::new(ScalarAlgebra, DistributionAlgebra::default()),
            tau,
            alpha,
            morphism: ProbConMorphism::Weight,
        })
    }

    pub fn with_morphism(mut self, morphism: ProbConMorphism) -> Self {
        self.morphism = morphism;
        self
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
}

impl Problem for ProbCon {
    type A = ProductAlgebra<ScalarAlgebra, DistributionAlgebra>;

    fn algebra(&self) -> &Self::A {
        &self.algebra
    }

    fn cost(&self, x: &(f64, DiscreteDistribution)) -> f64 {
        x.0
    }

    fn infeasible(&self, x: &(f64, DiscreteDistribution)) -> bool {
        x.1.prob_exceeds(self.tau) > self.alpha + PROBCON_TOL
    }

    fn scalarize(&self, x: &(f64, DiscreteDistribution)) -> f64 {
        x.0 + x.1.expectation()
    }

    fn morphism(&self, x: &(f64, DiscreteDistribution)) -> Option<f64> {
        Some(match self.morphism {
            ProbConMorphism::Weight => x.0,
            ProbConMorphism::WeightPlusMean => x.0 + x.1.expectation(),
        })
    }

    fn morphism_bounds_cost(&self) -> bool {
        self.morphism == ProbConMorphism::Weight
    }

    fn name(&self) -> &'static str {
        "probcon"
    }
}

/// `c(ξ) = E[f(ξ)]` for a non-decreasing piecewise-linear `f`.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilityProblem {
    algebra: DistributionAlgebra,
    f: UtilityFunction,
}

impl UtilityProblem {
    pub fn new(f: UtilityFunction) -> Self {
        UtilityProblem {
            algebra: DistributionAlgebra::default(),
            f,
        }
    }

    pub fn utility(&self) -> &UtilityFunction {
        &self.f
    }
}

impl Problem for UtilityProblem {
    type A = DistributionAlgebra;

    fn algebra(&self) -> &DistributionAlgebra {
        &self.algebra
    }

    fn cost(&self, x: &DiscreteDistribution) -> f64 {
        x.expected_utility(&self.f)
    }

    fn infeasible(&self, _x: &DiscreteDistribution) -> bool {
        false
    }

    fn scalarize(&self, x: &DiscreteDistribution) -> f64 {
        x.expectation()
    }

    fn name(&self) -> &'static str {
        "utility"
    }
}

/// `c(ξ) = P(ξ > τ)`, no constraint. Finds the path `P_ρ` used to set `α`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExceedanceProblem {
    algebra: DistributionAlgebra,
    tau: f64,
}

impl ExceedanceProblem {
    pub fn new(tau: f64) -> Self {
        ExceedanceProblem {
            algebra: DistributionAlgebra::default(),
            tau,
        }
    }
}

impl Problem for ExceedanceProblem {
    type A = DistributionAlgebra;

    fn algebra(&self) -> &DistributionAlgebra {
        &self.algebra
    }

    fn cost(&self, x: &DiscreteDistribution) -> f64 {
        x.prob_exceeds(self.tau)
    }

    fn infeasible(&self, _x: &DiscreteDistribution) -> bool {
        false
    }

    fn scalarize(&self, x: &DiscreteDistribution) -> f64 {
        x.expectation()
    }

    fn name(&self) -> &'static str {
        "exceed"
    }
}

/// Borrowed view of a digraph with arc resources and a destination: what the
/// bounding routines need, shared by instances and blown-up graphs.
#[derive(Debug)]
pub struct Network<'a, A: Algebra> {
    pub algebra: &'a A,
    pub graph: &'a Digraph,
    pub resources: &'a [A::Elem],
    pub destination: usize,
}

impl<A: Algebra> Clone for Network<'_, A> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<A: Algebra> Copy for Network<'_, A> {}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance<P: Problem> {
    pub graph: Digraph,
    pub origin: usize,
    pub destination: usize,
    pub resources: Vec<Elem<P>>,
    pub problem: P,
}

impl<P: Problem> Instance<P> {
    pub fn new(
        graph: Digraph,
        origin: usize,
        destination: usize,
        resources: Vec<Elem<P>>,
        problem: P,
    ) -> Result<Self, InstanceError> {
        let n = graph.vertex_count();
        if origin >= n || destination >= n {
            return Err(InstanceError::Invalid(format!(
                "origin {origin} / destination {destination} out of range for {n} vertices"
            )));
        }
        if resources.len() != graph.arc_count() {
            return Err(InstanceError::Invalid(format!(
                "{} resources for {} arcs",
                resources.len(),
                graph.arc_count()
            )));
        }
        for x in &resources {
            problem.algebra().validate(x)?;
        }
        Ok(Instance {
            graph,
            origin,
            destination,
            resources,
            problem,
        })
    }

    pub fn algebra(&self) -> &P::A {
        self.problem.algebra()
    }

    pub fn network(&self) -> Network<'_, P::A> {
        Network {
            algebra: self.problem.algebra(),
            graph: &self.graph,
            resources: &self.resources,
            destination: self.destination,
        }
    }

    /// Left-to-right fold of the arc resources.
    pub fn path_resource(&self, arcs: &[usize]) -> Elem<P> {
        let alg = self.algebra();
        arcs.iter()
            .fold(alg.zero(), |acc, &a| alg.combine(&acc, &self.resources[a]))
    }

    pub fn has_od_path(&self) -> bool {
        self.graph.reaches(self.destination)[self.origin]
    }

    /// `φ(x_a)` for every arc.
    pub fn scalarized_weights(&self) -> Vec<f64> {
        self.resources.iter().map(|x| self.problem.scalarize(x)).collect()
    }

    /// `ω(x_a)` for every arc, if the problem has a morphism.
    pub fn morphism_weights(&self) -> Option<Vec<f64>> {
        self.resources.iter().map(|x| self.problem.morphism(x)).collect()
    }

    /// Whether every arc resource is positive (`0 ≺ x_a`).
    pub fn all_arcs_positive(&self) -> bool {
        let alg = self.algebra();
        self.resources.iter().all(|x| alg.is_positive(x))
    }
}

/// Arc sequence from an origin to a destination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub origin: usize,
    pub destination: usize,
    pub arcs: Vec<usize>,
}

impl Path {
    pub fn empty(v: usize) -> Self {
        Path {
            origin: v,
            destination: v,
            arcs: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    /// Whether consecutive arcs chain head to tail from `origin` to
    /// `destination`.
    pub fn is_valid(&self, g: &Digraph) -> bool {
        let mut cur = self.origin;
        for &a in &self.arcs {
            if a >= g.arc_count() || g.tail(a) != cur {
                return false;
            }
            cur = g.head(a);
        }
        cur == self.destination
    }

    pub fn vertices(&self, g: &Digraph) -> Vec<usize> {
        let mut out = vec![self.origin];
        out.extend(self.arcs.iter().map(|&a| g.head(a)));
        out
    }
}

/// Integer-uniform `[1, 100]` vector resources with `k + 1` components.
pub fn attach_uniform_weights(g: &Digraph, k: usize, seed: u64) -> Vec<Vector> {
    let mut rng = stream(seed, 1);
    (0..g.arc_count())
        .map(|_| Vector((0..=k).map(|_| rng.gen_range(1..=100) as f64).collect()))
        .collect()
}

/// Constraint thresholds `Wⁱ = (1−λ) w_{P_w}ⁱ + λ max(w_{P_c}ⁱ, w_{P_w}ⁱ)`
/// where `P_c` minimizes `w⁰` and `P_w` minimizes `Σ_{i≥1} wⁱ`.
pub fn rcsp_thresholds(
    g: &Digraph,
    weights: &[Vector],
    origin: usize,
    destination: usize,
    lambda: f64,
) -> Result<Vec<f64>, InstanceError> {
    crate::stochastic::check_unit("lambda", lambda)?;
    let k = weights.first().map_or(0, |w| w.len().saturating_sub(1));
    let no_path = InstanceError::NoPath { origin, destination };
    let cost: Vec<f64> = weights.iter().map(|w| w[0]).collect();
    let total: Vec<f64> = weights.iter().map(|w| w.sum() - w[0]).collect();
    let pc = scalar_dijkstra(g, &cost, destination)?
        .path_from(g, origin)
        .ok_or(no_path.clone())?;
    let pw = scalar_dijkstra(g, &total, destination)?
        .path_from(g, origin)
        .ok_or(no_path)?;
    let sum = |p: &[usize], i: usize| p.iter().map(|&a| weights[a][i]).sum::<f64>();
    Ok((1..=k)
        .map(|i| {
            let wc = sum(&pc, i);
            let ww = sum(&pw, i);
            (1.0 - lambda) * ww + lambda * wc.max(ww)
        })
        .collect())
}

/// Per-arc distributions: lengths rescaled so the longest is 200, support
/// of `10 + U[0, scaled]` consecutive integers starting at the scaled length,
/// weights uniform on `(0, 1]` then normalized.
pub fn attach_discrete_distributions(
    base_lengths: &[f64],
    seed: u64,
) -> Result<Vec<DiscreteDistribution>, InstanceError> {
    if let Some(l) = base_lengths.iter().find(|l| !(**l > 0.0)) {
        return Err(InstanceError::Invalid(format!("base length {l} must be > 0")));
    }
    let max = base_lengths.iter().copied().fold(0.0, f64::max);
    let mut rng = stream(seed, 2);
    base_lengths
        .iter()
        .map(|&l| {
            let scaled = ((l * 200.0 / max).round() as i64).max(1);
            let size = 10 + rng.gen_range(0..=scaled) as usize;
            let w: Vec<f64> = (0..size).map(|_| 1.0 - rng.gen::<f64>()).collect();
            let total: f64 = w.iter().sum();
            let p: Vec<f64> = w.iter().map(|x| x / total).collect();
            Ok(DiscreteDistribution::from_probabilities(scaled, &p)?)
        })
        .collect()
}

/// Scaled integer lengths `max(1, round(200 l / max l))`.
pub fn scaled_lengths(base_lengths: &[f64]) -> Vec<i64> {
    let max = base_lengths.iter().copied().fold(0.0, f64::max);
    base_lengths
        .iter()
        .map(|&l| ((l * 200.0 / max).round() as i64).max(1))
        .collect()
}

/// Smallest integer `t` with `P(b_o > t) ≤ τ⁻¹`. For `τ⁻¹ = 1` this is one
/// below the support.
pub fn compute_tau(b_o: &DiscreteDistribution, tau_inv: f64) -> Result<i64, InstanceError> {
    crate::stochastic::check_unit("tau quantile", tau_inv)?;
    if tau_inv >= 1.0 {
        return Ok(b_o.support_min() - 1);
    }
    let mut t = b_o.support_min();
    while b_o.prob_exceeds(t as f64) > tau_inv {
        t += 1;
    }
    Ok(t)
}

/// `α = max(p_c, (p_c + p_ρ) / 2)`.
pub fn alpha_from(p_c: f64, p_rho: f64) -> f64 {
    p_c.max((p_c + p_rho) / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    // o = 0, v = 1, d = 2; arcs o→v, v→d, o→d.
    fn example() -> Instance<Rcsp> {
        let g = Digraph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let res = vec![Vector(vec![1.0, 5.0]), Vector(vec![2.0, 1.0]), Vector(vec![4.0, 4.0])];
        Instance::new(g, 0, 2, res, Rcsp::new(vec![4.0])).unwrap()
    }

    #[test]
    fn rcsp_cost_and_feasibility() {
        let inst = example();
        let x = inst.path_resource(&[0, 1]);
        assert_eq!(x, Vector(vec![3.0, 6.0]));
        assert_eq!(inst.problem.cost(&x), 3.0);
        assert!(inst.problem.infeasible(&x));
        assert!(!inst.problem.infeasible(&inst.resources[2]));
        assert!(inst.problem.infeasible_ext(&Ext::Top));
        assert!(inst.problem.cost_ext(&Ext::Top).is_infinite());
    }

    #[test]
    fn thresholds_on_example() {
        let inst = example();
        let w = |l| rcsp_thresholds(&inst.graph, &inst.resources, 0, 2, l).unwrap();
        assert_eq!(w(0.5), vec![5.0]);
        assert_eq!(w(0.0), vec![4.0]);
        assert_eq!(w(1.0), vec![6.0]);
        let g = Digraph::new(3, vec![(0, 1)]).unwrap();
        let err = rcsp_thresholds(&g, &[Vector(vec![1.0, 1.0])], 0, 2, 0.5).unwrap_err();
        assert_eq!(err, InstanceError::NoPath { origin: 0, destination: 2 });
    }

    #[test]
    fn uniform_weights_range_and_mean() {
        let g = Digraph::new(2, vec![(0, 1); 50_000]).unwrap();
        let w = attach_uniform_weights(&g, 1, 4);
        assert!(w.iter().all(|x| x.len() == 2 && x.0.iter().all(|c| (1.0..=100.0).contains(c) && c.fract() == 0.0)));
        let mean = w.iter().map(|x| x.sum()).sum::<f64>() / 100_000.0;
        assert!((49.0..=52.0).contains(&mean), "mean {mean}");
        assert_eq!(w, attach_uniform_weights(&g, 1, 4));
        assert_ne!(w, attach_uniform_weights(&g, 1, 5));
    }

    #[test]
    fn distributions_follow_the_generation_rule() {
        let lengths: Vec<f64> = (1..=40).map(|i| (i * 7 % 97 + 1) as f64).collect();
        let d = attach_discrete_distributions(&lengths, 3).unwrap();
        let scaled = scaled_lengths(&lengths);
        assert_eq!(*scaled.iter().max().unwrap(), 200);
        for (x, s) in d.iter().zip(&scaled) {
            assert!(x.len() >= 10 && x.len() <= 10 + *s as usize);
            assert_eq!(x.offset(), *s);
            let total: f64 = x.probabilities().iter().sum();
            assert!((total - 1.0).abs() < 1e-9);
        }
        assert!(attach_discrete_distributions(&[1.0, 0.0], 3).is_err());
    }

    #[test]
    fn tau_examples() {
        assert_eq!(compute_tau(&DiscreteDistribution::point(5), 0.0).unwrap(), 5);
        let two = DiscreteDistribution::from_probabilities(0, &[0.5, 0.0, 0.5]).unwrap();
        assert_eq!(compute_tau(&two, 0.5).unwrap(), 0);
        assert_eq!(compute_tau(&two, 1.0).unwrap(), -1);
        assert!(compute_tau(&two, 1.5).is_err());
    }

    #[test]
    fn alpha_examples() {
        assert_eq!(alpha_from(0.3, 0.3), 0.3);
        assert_eq!(alpha_from(0.4, 0.1), 0.4);
        assert!((alpha_from(0.1, 0.4) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn probcon_feasibility_and_morphisms() {
        let p = ProbCon::new(1.0, 0.5).unwrap();
        let x = (3.0, DiscreteDistribution::from_probabilities(0, &[0.5, 0.0, 0.5]).unwrap());
        assert!(!p.infeasible(&x));
        assert_eq!(p.cost(&x), 3.0);
        assert_eq!(p.morphism(&x), Some(3.0));
        assert!(p.morphism_bounds_cost());
        let q = ProbCon::new(0.5, 0.25).unwrap().with_morphism(ProbConMorphism::WeightPlusMean);
        assert!(q.infeasible(&x));
        assert_eq!(q.morphism(&x), Some(4.0));
        assert!(!q.morphism_bounds_cost());
    }

    #[test]
    fn instance_validation() {
        let g = Digraph::new(2, vec![(0, 1)]).unwrap();
        assert!(Instance::new(g.clone(), 0, 2, vec![Vector(vec![1.0, 1.0])], Rcsp::new(vec![1.0])).is_err());
        assert!(Instance::new(g.clone(), 0, 1, vec![], Rcsp::new(vec![1.0])).is_err());
        assert!(Instance::new(g, 0, 1, vec![Vector(vec![1.0])], Rcsp::new(vec![1.0])).is_err());
    }

    #[test]
    fn path_validity() {
        let inst = example();
        let p = Path { origin: 0, destination: 2, arcs: vec![0, 1] };
        assert!(p.is_valid(&inst.graph));
        assert_eq!(p.vertices(&inst.graph), vec![0, 1, 2]);
        assert!(!Path { origin: 0, destination: 2, arcs: vec![1] }.is_valid(&inst.graph));
        assert!(Path::empty(2).is_valid(&inst.graph));
    }
}

//! Seeded end-to-end instance generation: a digraph family plus a problem.

use std::path::PathBuf;

use thiserror::Error;

use crate::bounding::{ford_bellman_bounds, generalized_dijkstra, DijkstraMode};
use crate::enumeration::{solve, Algorithm, BoundSource, SolveError, SolverConfig, DEFAULT_DISTRIBUTION_FRONTIER_CAP};
use crate::graph::{
    generate_acyclic, generate_grid, generate_random, parse_dimacs, scalar_dijkstra, GeneratedGraph, GraphError,
};
use crate::algebra::Ext;
use crate::instance::{
    alpha_from, attach_discrete_distributions, attach_uniform_weights, compute_tau, rcsp_thresholds, CvarProblem,
    ExceedanceProblem, Instance, InstanceError, ProbCon, Rcsp,
};
use crate::io::AnyInstance;

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Where the digraph comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphFamily {
    Grid { layers: usize, width: usize },
    Random { n: usize, m: usize },
    Acyclic { n: usize, m: usize },
    /// DIMACS file; its arc lengths become `w⁰`. Origin and destination
    /// default to the first and last vertex.
    Dimacs {
        path: PathBuf,
        origin: Option<usize>,
        destination: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProblemSpec {
    Rcsp { k: usize, lambda: f64 },
    Cvar { beta: f64 },
    ProbCon { tau_quantile: f64 },
}

/// A digraph with its `w⁰` lengths (`None` for the synthetic families).
pub struct BaseGraph {
    pub generated: GeneratedGraph,
    pub lengths: Option<Vec<f64>>,
}

pub fn generate_graph(family: &GraphFamily, seed: u64) -> Result<BaseGraph, GenerateError> {
    let generated = match family {
        GraphFamily::Grid { layers, width } => generate_grid(*layers, *width)?,
        GraphFamily::Random { n, m } => generate_random(*n, *m, seed)?,
        GraphFamily::Acyclic { n, m } => generate_acyclic(*n, *m, seed)?,
        GraphFamily::Dimacs {
            path,
            origin,
            destination,
        } => {
            let (graph, lengths) = parse_dimacs(&std::fs::read_to_string(path)?)?;
            let n = graph.vertex_count();
            let o = origin.unwrap_or(0);
            let d = destination.unwrap_or(n.saturating_sub(1));
            if o >= n || d >= n {
                return Err(GraphError::Parameter(format!("origin/destination out of range for {n} vertices")).into());
            }
            return Ok(BaseGraph {
                generated: GeneratedGraph {
                    graph,
                    origin: o,
                    destination: d,
                },
                lengths: Some(lengths),
            });
        }
    };
    Ok(BaseGraph {
        generated,
        lengths: None,
    })
}

/// Builds the instance: uniform integer weights `w` (with `w⁰` replaced by
/// the file lengths for DIMACS graphs), distributions generated from `w⁰`.
pub fn generate_instance(base: &BaseGraph, problem: ProblemSpec, seed: u64) -> Result<AnyInstance, GenerateError> {
    let GeneratedGraph {
        graph,
        origin,
        destination,
    } = &base.generated;
    let (o, d) = (*origin, *destination);
    let k = match problem {
        ProblemSpec::Rcsp { k, .. } => k,
        _ => 0,
    };
    let mut weights = attach_uniform_weights(graph, k, seed);
    if let Some(l) = &base.lengths {
        for (w, &l) in weights.iter_mut().zip(l) {
            w.0[0] = l;
        }
    }
    let w0: Vec<f64> = weights.iter().map(|w| w[0]).collect();
    Ok(match problem {
        ProblemSpec::Rcsp { lambda, .. } => {
            let thresholds = rcsp_thresholds(graph, &weights, o, d, lambda)?;
            AnyInstance::Rcsp(Instance::new(graph.clone(), o, d, weights, Rcsp::new(thresholds))?)
        }
        ProblemSpec::Cvar { beta } => {
            let xi = attach_discrete_distributions(&w0, seed)?;
            AnyInstance::Cvar(Instance::new(graph.clone(), o, d, xi, CvarProblem::new(beta)?)?)
        }
        ProblemSpec::ProbCon { tau_quantile } => {
            let xi = attach_discrete_distributions(&w0, seed)?;
            let (tau, alpha) = probcon_parameters(base, &w0, xi.clone(), tau_quantile)?;
            let res = w0.into_iter().zip(xi).collect();
            AnyInstance::ProbCon(Instance::new(graph.clone(), o, d, res, ProbCon::new(tau, alpha)?)?)
        }
    })
}

/// `τ` from the origin bound and the quantile, then `α` from the
/// exceedance of the min-`w` path `P_c` and of the min-exceedance path `P_ρ`.
fn probcon_parameters(
    base: &BaseGraph,
    w: &[f64],
    xi: Vec<crate::stochastic::DiscreteDistribution>,
    tau_quantile: f64,
) -> Result<(f64, f64), GenerateError> {
    let g = &base.generated.graph;
    let (o, d) = (base.generated.origin, base.generated.destination);
    // τ is a placeholder until the bounds are known.
    let exceed = Instance::new(g.clone(), o, d, xi, ExceedanceProblem::new(0.0))?;
    let phi = |x: &crate::stochastic::DiscreteDistribution| x.expectation();
    let table = match generalized_dijkstra(exceed.network(), DijkstraMode::Key(&phi), None) {
        Ok((t, _)) => t,
        Err(_) => ford_bellman_bounds(exceed.network()).0,
    };
    let Ext::Finite(b_o) = &table[o] else {
        return Err(InstanceError::NoPath { origin: o, destination: d }.into());
    };
    let tau = compute_tau(b_o, tau_quantile)? as f64;
    let exceed = Instance {
        problem: ExceedanceProblem::new(tau),
        ..exceed
    };
    let pc = scalar_dijkstra(g, w, d)?
        .path_from(g, o)
        .ok_or(InstanceError::NoPath { origin: o, destination: d })?;
    let p_c = exceed.path_resource(&pc).prob_exceeds(tau);
    let config = SolverConfig::new(Algorithm::AStar).with_frontier_cap(DEFAULT_DISTRIBUTION_FRONTIER_CAP);
    let report = solve(&exceed, &config, BoundSource::Plain(&table), None)?;
    // A capped search still returns a real path, whose exceedance serves.
    let p_rho = if report.upper_bound.is_finite() {
        report.upper_bound
    } else {
        p_c
    };
    Ok((tau, alpha_from(p_c, p_rho)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn acyclic_rcsp_generation_is_deterministic() {
        let base = generate_graph(&GraphFamily::Acyclic { n: 4, m: 7 }, 1).unwrap();
        let spec = ProblemSpec::Rcsp { k: 1, lambda: 0.5 };
        let a = generate_instance(&base, spec, 1).unwrap();
        let b = generate_instance(&generate_graph(&GraphFamily::Acyclic { n: 4, m: 7 }, 1).unwrap(), spec, 1).unwrap();
        assert_eq!(a.to_text(), b.to_text());
        assert_eq!(a.graph().vertex_count(), 4);
        assert_eq!(a.graph().arc_count(), 7);
    }

    #[test]
    fn random_family_rejects_too_few_arcs() {
        assert!(generate_graph(&GraphFamily::Random { n: 5, m: 4 }, 0).is_err());
    }

    #[test]
    fn probcon_alpha_keeps_min_weight_path_feasible() {
        let base = generate_graph(&GraphFamily::Grid { layers: 3, width: 4 }, 0).unwrap();
        let AnyInstance::ProbCon(inst) = generate_instance(&base, ProblemSpec::ProbCon { tau_quantile: 0.2 }, 3).unwrap()
        else {
            panic!("wrong problem")
        };
        let w: Vec<f64> = inst.resources.iter().map(|x| x.0).collect();
        let g = &inst.graph;
        let pc = scalar_dijkstra(g, &w, inst.destination)
            .unwrap()
            .path_from(g, inst.origin)
            .unwrap();
        let x = inst.path_resource(&pc);
        use crate::instance::Problem;
        assert!(!inst.problem.infeasible(&x));
        assert!(inst.problem.alpha() >= 0.0 && inst.problem.alpha() <= 1.0);
    }
}

//! Preprocessing and search for one configured run.

use std::time::Instant;

use thiserror::Error;

use crate::blowup::{build_clustered, build_conditional, BlowupError, ConditionalOptions};
use crate::bounding::{ford_bellman_bounds, generalized_dijkstra, BoundTable, DijkstraMode};
use crate::enumeration::{
    candidate_paths, solve, BoundKind, BoundSource, SolveError, SolveReport, SolverConfig,
    DEFAULT_DISTRIBUTION_FRONTIER_CAP, DEFAULT_FRONTIER_CAP,
};
use crate::instance::{Elem, Instance, Problem};
use crate::io::AnyInstance;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Blowup(#[from] BlowupError),
}

/// A solver configuration plus the blow-up parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub config: SolverConfig,
    pub kappa: usize,
    pub conditional: ConditionalOptions,
}

impl RunOptions {
    pub fn new(config: SolverConfig) -> Self {
        RunOptions {
            config,
            kappa: 16,
            conditional: ConditionalOptions::default(),
        }
    }
}

/// Frontier cap for an instance when none is given.
pub fn default_frontier_cap(inst: &AnyInstance) -> usize {
    if inst.is_distributional() {
        DEFAULT_DISTRIBUTION_FRONTIER_CAP
    } else {
        DEFAULT_FRONTIER_CAP
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport<E> {
    pub solve: SolveReport<E>,
    /// Generalized-Dijkstra extractions per vertex, when plain bounds were
    /// computed.
    pub gamma: Option<f64>,
    pub bound_seconds: f64,
    pub candidate_seconds: f64,
}

impl<E> RunReport<E> {
    pub fn total_seconds(&self) -> f64 {
        self.bound_seconds + self.candidate_seconds + self.solve.search_seconds
    }

    /// Shares of the total time spent computing bounds and candidate paths.
    pub fn preprocessing_fractions(&self) -> (f64, f64) {
        let total = self.total_seconds();
        if total > 0.0 {
            (self.bound_seconds / total, self.candidate_seconds / total)
        } else {
            (0.0, 0.0)
        }
    }

    pub fn without_resource(self) -> RunReport<()> {
        let s = self.solve;
        RunReport {
            solve: SolveReport {
                status: s.status,
                upper_bound: s.upper_bound,
                lower_bound: s.lower_bound,
                gap: s.gap,
                path: s.path,
                resource: s.resource.map(|_| ()),
                extended: s.extended,
                cut: s.cut,
                cut_by_low: s.cut_by_low,
                cut_by_dom: s.cut_by_dom,
                extracted: s.extracted,
                generated: s.generated,
                dominance_cut_fraction: s.dominance_cut_fraction,
                path_length: s.path_length,
                search_seconds: s.search_seconds,
            },
            gamma: self.gamma,
            bound_seconds: self.bound_seconds,
            candidate_seconds: self.candidate_seconds,
        }
    }
}

/// Bounds by generalized Dijkstra keyed on `φ`, falling back to `|V| − 1`
/// Ford-Bellman rounds when the extraction cap trips. Returns γ of the
/// Dijkstra attempt.
pub fn plain_bounds<P: Problem>(inst: &Instance<P>) -> (BoundTable<Elem<P>>, f64) {
    let phi = |x: &Elem<P>| inst.problem.scalarize(x);
    let net = inst.network();
    match generalized_dijkstra(net, DijkstraMode::Key(&phi), None) {
        Ok((table, stats)) => (table, stats.gamma),
        Err(_) => {
            let cap = crate::bounding::EXTRACTION_CAP_FACTOR as f64;
            (ford_bellman_bounds(net).0, cap)
        }
    }
}

/// Runs the preprocessing the configuration asks for, then the search.
pub fn run<P: Problem>(inst: &Instance<P>, options: &RunOptions) -> Result<RunReport<Elem<P>>, PipelineError> {
    let config = &options.config;
    config.validate()?;
    let start = Instant::now();
    let mut gamma = None;
    let plain;
    let conditional;
    let clustered;
    let bounds = match config.bound_source {
        BoundKind::None => BoundSource::None,
        BoundKind::Plain => {
            let (table, g) = plain_bounds(inst);
            gamma = Some(g);
            plain = table;
            BoundSource::Plain(&plain)
        }
        BoundKind::Conditional => {
            conditional = build_conditional(inst, options.kappa, options.conditional)?;
            BoundSource::Conditional(&conditional)
        }
        BoundKind::Clustered => {
            clustered = build_clustered(inst, options.kappa)?;
            BoundSource::Clustered(&clustered)
        }
    };
    let bound_seconds = match config.bound_source {
        BoundKind::None => 0.0,
        _ => start.elapsed().as_secs_f64(),
    };
    let (candidates, candidate_seconds) = if config.use_candidate_paths {
        let start = Instant::now();
        let c = candidate_paths(inst)?;
        (Some(c), start.elapsed().as_secs_f64())
    } else {
        (None, 0.0)
    };
    let solve = solve(inst, config, bounds, candidates.as_ref())?;
    Ok(RunReport {
        solve,
        gamma,
        bound_seconds,
        candidate_seconds,
    })
}

/// [`run`] on any catalog instance, dropping the problem-specific resource.
pub fn run_any(inst: &AnyInstance, options: &RunOptions) -> Result<RunReport<()>, PipelineError> {
    Ok(match inst {
        AnyInstance::Rcsp(i) => run(i, options)?.without_resource(),
        AnyInstance::Cvar(i) => run(i, options)?.without_resource(),
        AnyInstance::ProbCon(i) => run(i, options)?.without_resource(),
        AnyInstance::Scenario(i) => run(i, options)?.without_resource(),
        AnyInstance::Utility(i) => run(i, options)?.without_resource(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumeration::{Algorithm, Status};
    use crate::io::parse_instance;

    const EXAMPLE: &str = "mrcsp 1\ngraph 3 3\nod 0 2\nproblem rcsp 1 4\na 0 1 vec 1 5\na 1 2 vec 2 1\na 0 2 vec 4 4\n";

    #[test]
    fn every_configuration_solves_the_example() {
        let inst = parse_instance(EXAMPLE).unwrap();
        let configs = [
            SolverConfig::new(Algorithm::AStar),
            SolverConfig::new(Algorithm::Correcting).with_candidates(true),
            SolverConfig::new(Algorithm::Dominance),
            SolverConfig::new(Algorithm::Correcting).with_bounds(BoundKind::Conditional),
            SolverConfig::new(Algorithm::AStar).with_bounds(BoundKind::Clustered),
        ];
        for config in configs {
            let r = run_any(&inst, &RunOptions::new(config.clone())).unwrap();
            assert_eq!(r.solve.status, Status::Optimal, "{}", config.tag());
            assert_eq!(r.solve.upper_bound, 4.0, "{}", config.tag());
            assert_eq!(r.gamma.is_some(), config.bound_source == BoundKind::Plain);
        }
    }

    #[test]
    fn dominance_spends_nothing_on_preprocessing() {
        let inst = parse_instance(EXAMPLE).unwrap();
        let r = run_any(&inst, &RunOptions::new(SolverConfig::new(Algorithm::Dominance))).unwrap();
        assert_eq!(r.preprocessing_fractions(), (0.0, 0.0));
        assert!(r.gamma.is_none());
    }
}

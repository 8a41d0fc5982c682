#![allow(dead_code)]

use mrcsp::algebra::{Ext, Vector};
use mrcsp::enumeration::{Algorithm, BoundKind, KeyKind, SolverConfig};
use mrcsp::generate::{generate_graph, generate_instance, GraphFamily, ProblemSpec};
use mrcsp::io::AnyInstance;
use mrcsp::pipeline::RunOptions;
use mrcsp::stochastic::{less_eq_st_tol, DiscreteDistribution, ScenarioVector};

pub const TOL: f64 = 1e-9;

/// `≼` with a floating-point tolerance on distribution CDFs.
pub trait ApproxLeq {
    fn approx_leq(&self, other: &Self) -> bool;
}

impl ApproxLeq for Vector {
    fn approx_leq(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl ApproxLeq for DiscreteDistribution {
    fn approx_leq(&self, other: &Self) -> bool {
        less_eq_st_tol(self, other, TOL)
    }
}

impl ApproxLeq for ScenarioVector {
    fn approx_leq(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| *a <= b + TOL)
    }
}

impl ApproxLeq for (f64, DiscreteDistribution) {
    fn approx_leq(&self, other: &Self) -> bool {
        self.0 <= other.0 + TOL && self.1.approx_leq(&other.1)
    }
}

pub fn ext_leq<E: ApproxLeq>(a: &Ext<E>, b: &Ext<E>) -> bool {
    match (a, b) {
        (_, Ext::Top) => true,
        (Ext::Top, Ext::Finite(_)) => false,
        (Ext::Finite(x), Ext::Finite(y)) => x.approx_leq(y),
    }
}

pub fn ext_eq<E: ApproxLeq>(a: &Ext<E>, b: &Ext<E>) -> bool {
    ext_leq(a, b) && ext_leq(b, a)
}

/// Runs `$body` with `$i` bound to the typed instance inside `$any`.
#[macro_export]
macro_rules! with_instance {
    ($any:expr, $i:ident => $body:expr) => {
        match $any {
            mrcsp::io::AnyInstance::Rcsp($i) => $body,
            mrcsp::io::AnyInstance::Cvar($i) => $body,
            mrcsp::io::AnyInstance::ProbCon($i) => $body,
            mrcsp::io::AnyInstance::Scenario($i) => $body,
            mrcsp::io::AnyInstance::Utility($i) => $body,
        }
    };
}

pub struct CorpusItem {
    pub seed: u64,
    pub label: String,
    pub instance: AnyInstance,
}

/// Seeded small instances: 4 to 9 vertices, mostly random digraphs with
/// every fourth acyclic; problems cycle through RCSP k = 1, 2, CVaR
/// β ∈ {0, 0.05, 0.9} and the chance constraint.
pub fn small_corpus(count: u64) -> Vec<CorpusItem> {
    (0..count).map(small_instance).collect()
}

pub fn small_instance(seed: u64) -> CorpusItem {
    let n = 4 + (seed % 6) as usize;
    let (family, fname) = if seed % 4 == 3 {
        (GraphFamily::Acyclic { n, m: n + (seed as usize * 5) % n }, "acyc")
    } else {
        (GraphFamily::Random { n, m: n + (seed as usize * 7) % (2 * n) }, "rand")
    };
    let problems = [
        ProblemSpec::Rcsp { k: 1, lambda: 0.5 },
        ProblemSpec::Rcsp { k: 2, lambda: 0.5 },
        ProblemSpec::Cvar { beta: 0.0 },
        ProblemSpec::Cvar { beta: 0.05 },
        ProblemSpec::Cvar { beta: 0.9 },
        ProblemSpec::ProbCon { tau_quantile: 0.3 },
    ];
    let problem = problems[((seed / 4) % 6) as usize];
    let base = generate_graph(&family, seed).expect("corpus graph");
    let instance = generate_instance(&base, problem, seed).expect("corpus instance");
    CorpusItem {
        seed,
        label: format!("seed {seed} {fname} n={n} {problem:?}"),
        instance,
    }
}

/// Every algorithm with every bound source it accepts, both keys and
/// with and without candidate paths. Clustered bounds need acyclicity.
pub fn all_configs(acyclic: bool, kappa: usize) -> Vec<RunOptions> {
    let mut bounds = vec![BoundKind::Plain, BoundKind::Conditional];
    if acyclic {
        bounds.push(BoundKind::Clustered);
    }
    let mut out = Vec::new();
    for algo in [Algorithm::AStar, Algorithm::Correcting, Algorithm::Dominance] {
        let mut sources = bounds.clone();
        if algo == Algorithm::Dominance {
            sources.insert(0, BoundKind::None);
        }
        for &b in &sources {
            for key in [KeyKind::WithBound, KeyKind::CostOnly] {
                if b == BoundKind::None && key == KeyKind::WithBound {
                    continue;
                }
                for cp in [false, true] {
                    let config = SolverConfig::new(algo).with_bounds(b).with_key(key).with_candidates(cp);
                    let mut o = RunOptions::new(config);
                    o.kappa = kappa;
                    out.push(o);
                }
            }
        }
    }
    out
}

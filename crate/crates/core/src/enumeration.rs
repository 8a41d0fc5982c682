//! Generic path enumeration with pluggable key and test: generalized A*,
//! label correcting and label dominance, with candidate-path warm starts and
//! anytime lower bounds.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::time::Instant;

use thiserror::Error;

use crate::algebra::{Algebra, Ext};
use crate::blowup::{ClusteredBounds, ConditionalBounds};
use crate::graph::{scalar_bellman_ford, scalar_dijkstra, GraphError, OrdF64, ShortestPathTree};
use crate::instance::{Elem, Instance, Path, Problem};

pub const DEFAULT_FRONTIER_CAP: usize = 100_000;
pub const DEFAULT_DISTRIBUTION_FRONTIER_CAP: usize = 10_000;
pub const DEFAULT_DOMINANCE_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    /// Test (Low), key `c(x_P ⊕ b_v)`.
    AStar,
    /// Tests (Low) then (Dom), key `c(x_P ⊕ b_v)`.
    Correcting,
    /// Test (Dom), key `c(x_P)`.
    Dominance,
}

impl Algorithm {
    pub fn tag(self) -> &'static str {
        match self {
            Algorithm::AStar => "A*",
            Algorithm::Correcting => "cor.",
            Algorithm::Dominance => "dom.",
        }
    }

    fn uses_low(self) -> bool {
        matches!(self, Algorithm::AStar | Algorithm::Correcting)
    }

    fn uses_dom(self) -> bool {
        matches!(self, Algorithm::Correcting | Algorithm::Dominance)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BoundKind {
    None,
    Plain,
    Conditional,
    Clustered,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KeyKind {
    WithBound,
    CostOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    pub algorithm: Algorithm,
    pub bound_source: BoundKind,
    pub use_candidate_paths: bool,
    pub key: KeyKind,
    pub frontier_cap: usize,
    pub dominance_cap: usize,
    /// Reject instances outside the convergence conditions (acyclic, or
    /// positive arcs for A*, non-negative arcs for the dominance variants).
    pub check_preconditions: bool,
}

impl SolverConfig {
    /// Table defaults: plain bounds and the bound key for A* and label
    /// correcting; no bounds and the cost key for label dominance.
    pub fn new(algorithm: Algorithm) -> Self {
        let (bound_source, key) = match algorithm {
            Algorithm::Dominance => (BoundKind::None, KeyKind::CostOnly),
            _ => (BoundKind::Plain, KeyKind::WithBound),
        };
        SolverConfig {
            algorithm,
            bound_source,
            use_candidate_paths: false,
            key,
            frontier_cap: DEFAULT_FRONTIER_CAP,
            dominance_cap: DEFAULT_DOMINANCE_CAP,
            check_preconditions: true,
        }
    }

    pub fn with_bounds(mut self, kind: BoundKind) -> Self {
        self.bound_source = kind;
        self
    }

    pub fn with_key(mut self, key: KeyKind) -> Self {
        self.key = key;
        self
    }

    pub fn with_candidates(mut self, on: bool) -> Self {
        self.use_candidate_paths = on;
        self
    }

    pub fn with_frontier_cap(mut self, cap: usize) -> Self {
        self.frontier_cap = cap;
        self
    }

    pub fn with_dominance_cap(mut self, cap: usize) -> Self {
        self.dominance_cap = cap;
        self
    }

    pub fn validate(&self) -> Result<(), SolveError> {
        if self.algorithm.uses_low() && self.bound_source == BoundKind::None {
            return Err(SolveError::Config(format!(
                "{} needs a bound source",
                self.algorithm.tag()
            )));
        }
        if self.key == KeyKind::WithBound && self.bound_source == BoundKind::None {
            return Err(SolveError::Config("bound key without a bound source".into()));
        }
        if self.frontier_cap == 0 || self.dominance_cap == 0 {
            return Err(SolveError::Config("caps must be positive".into()));
        }
        Ok(())
    }

    /// Algorithm tag with the `CP` / `K` / `Con` / `Clu` suffixes.
    pub fn tag(&self) -> String {
        let mut t = self.algorithm.tag().to_string();
        if self.use_candidate_paths {
            t.push_str(" CP");
        }
        if self.key == KeyKind::CostOnly && self.algorithm != Algorithm::Dominance {
            t.push_str(" K");
        }
        match self.bound_source {
            BoundKind::Conditional => t.push_str(" Con"),
            BoundKind::Clustered => t.push_str(" Clu"),
            _ => {}
        }
        t
    }
}

/// Precomputed bounds handed to the solver.
#[derive(Debug, Clone, Copy)]
pub enum BoundSource<'a, E> {
    None,
    Plain(&'a [Ext<E>]),
    Conditional(&'a ConditionalBounds<E>),
    Clustered(&'a ClusteredBounds<E>),
}

impl<E> BoundSource<'_, E> {
    pub fn kind(&self) -> BoundKind {
        match self {
            BoundSource::None => BoundKind::None,
            BoundSource::Plain(_) => BoundKind::Plain,
            BoundSource::Conditional(_) => BoundKind::Conditional,
            BoundSource::Clustered(_) => BoundKind::Clustered,
        }
    }
}

/// Evaluates the refined lower bound of a label: the cheapest `c(x_P ⊕ b)`
/// over the bounds `b` available at `v` that keep `ρ(x_P ⊕ b) = 0`, or
/// `None` when every completion is infeasible.
pub fn bound_cost<P: Problem>(
    problem: &P,
    source: &BoundSource<'_, Elem<P>>,
    v: usize,
    x: &Elem<P>,
    omega_spent: f64,
    ub: f64,
) -> Option<f64> {
    let alg = problem.algebra();
    let eval = |b: &Ext<Elem<P>>| -> Option<f64> {
        let Ext::Finite(b) = b else { return None };
        let y = alg.combine(x, b);
        (!problem.infeasible(&y)).then(|| problem.cost(&y))
    };
    match source {
        BoundSource::None => None,
        BoundSource::Plain(t) => eval(&t[v]),
        BoundSource::Conditional(t) => eval(t.lookup(v, omega_spent, ub)),
        BoundSource::Clustered(t) => t
            .bounds(v)
            .iter()
            .filter_map(eval)
            .min_by(f64::total_cmp),
    }
}

/// Key `c(x_P ⊕ b_v)`; `+∞` when `b_v` is Top (for clustered bounds, the
/// minimum over the feasible members of `B_v`).
fn bound_key<P: Problem>(
    problem: &P,
    source: &BoundSource<'_, Elem<P>>,
    v: usize,
    x: &Elem<P>,
    omega_spent: f64,
    ub: f64,
) -> f64 {
    let alg = problem.algebra();
    let plain = |b: &Ext<Elem<P>>| match b {
        Ext::Finite(b) => problem.cost(&alg.combine(x, b)),
        Ext::Top => f64::INFINITY,
    };
    match source {
        BoundSource::None => problem.cost(x),
        BoundSource::Plain(t) => plain(&t[v]),
        BoundSource::Conditional(t) => plain(t.lookup(v, omega_spent, ub)),
        BoundSource::Clustered(_) => {
            bound_cost(problem, source, v, x, omega_spent, ub).unwrap_or(f64::INFINITY)
        }
    }
}

/// `φ`-shortest `v`-`d` completions `Q_v` with their exact resources.
#[derive(Debug, Clone)]
pub struct CandidatePaths<E> {
    tree: ShortestPathTree,
    resources: Vec<Option<E>>,
}

impl<E: Clone> CandidatePaths<E> {
    pub fn resource(&self, v: usize) -> Option<&E> {
        self.resources[v].as_ref()
    }

    pub fn path(&self, g: &crate::graph::Digraph, v: usize) -> Option<Vec<usize>> {
        self.resources[v].as_ref()?;
        self.tree.path_from(g, v)
    }
}

/// Scalar Dijkstra on `φ(x_a)`, then `x_{Q_v} = x_a ⊕ x_{Q_u}` along the
/// tree in order of increasing distance.
pub fn candidate_paths<P: Problem>(inst: &Instance<P>) -> Result<CandidatePaths<Elem<P>>, SolveError> {
    let weights = inst.scalarized_weights();
    let tree = if weights.iter().all(|w| *w >= 0.0) {
        scalar_dijkstra(&inst.graph, &weights, inst.destination)?
    } else {
        scalar_bellman_ford(&inst.graph, &weights, inst.destination).ok_or_else(|| {
            SolveError::Precondition("negative scalarized cycle reaches the destination".into())
        })?
    };
    let alg = inst.algebra();
    let mut resources: Vec<Option<Elem<P>>> = vec![None; inst.graph.vertex_count()];
    resources[inst.destination] = Some(alg.zero());
    let mut stack = Vec::new();
    for v in 0..inst.graph.vertex_count() {
        if !tree.dist[v].is_finite() {
            continue;
        }
        let mut u = v;
        while resources[u].is_none() {
            stack.push(u);
            u = inst.graph.head(tree.next_arc[u].expect("finite distance has a tree arc"));
        }
        while let Some(u) = stack.pop() {
            let a = tree.next_arc[u].expect("finite distance has a tree arc");
            let tail = resources[inst.graph.head(a)].as_ref().expect("resolved above");
            resources[u] = Some(alg.combine(&inst.resources[a], tail));
        }
    }
    Ok(CandidatePaths { tree, resources })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    Capped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Optimal => "optimal",
            Status::Infeasible => "infeasible",
            Status::Capped => "capped",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport<E> {
    pub status: Status,
    pub upper_bound: f64,
    pub lower_bound: f64,
    pub gap: f64,
    pub path: Option<Path>,
    pub resource: Option<E>,
    pub extended: usize,
    pub cut: usize,
    pub cut_by_low: usize,
    pub cut_by_dom: usize,
    pub extracted: usize,
    pub generated: usize,
    /// Share of cuts made by the dominance test.
    pub dominance_cut_fraction: f64,
    /// Number of arcs in the returned path.
    pub path_length: usize,
    pub search_seconds: f64,
}

/// `(UB − LB) / LB` for positive `LB`, zero when the bounds meet.
pub fn relative_gap(ub: f64, lb: f64) -> f64 {
    if ub == lb {
        0.0
    } else if ub.is_finite() && lb > 0.0 {
        (ub - lb) / lb
    } else {
        f64::INFINITY
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutReason {
    Low,
    Dom,
}

/// Solver trace, used for replay checks.
#[derive(Debug)]
pub enum SolveEvent<'a, E> {
    Extract { label: usize, vertex: usize, key: f64 },
    Cut { label: usize, vertex: usize, reason: CutReason, resource: &'a E, omega: f64, upper_bound: f64 },
    Incumbent { cost: f64 },
}

pub trait Observer<E> {
    fn event(&mut self, e: SolveEvent<'_, E>);
}

impl<E> Observer<E> for () {
    fn event(&mut self, _e: SolveEvent<'_, E>) {}
}

impl<E, F: FnMut(SolveEvent<'_, E>)> Observer<E> for F {
    fn event(&mut self, e: SolveEvent<'_, E>) {
        self(e)
    }
}

struct Label<E> {
    vertex: usize,
    parent: Option<usize>,
    arc: Option<usize>,
    resource: Option<E>,
    omega: f64,
    /// Lower bound used for the anytime gap.
    lb: f64,
    live: bool,
}

/// Arena of labels linked by predecessor handles.
struct LabelTree<E> {
    labels: Vec<Label<E>>,
}

impl<E> LabelTree<E> {
    fn arcs(&self, mut id: usize) -> Vec<usize> {
        let mut arcs = Vec::new();
        while let Some(a) = self.labels[id].arc {
            arcs.push(a);
            id = self.labels[id].parent.expect("arc implies parent");
        }
        arcs.reverse();
        arcs
    }
}

/// Runs the enumeration. See [`solve_with_observer`].
pub fn solve<P: Problem>(
    inst: &Instance<P>,
    config: &SolverConfig,
    bounds: BoundSource<'_, Elem<P>>,
    candidates: Option<&CandidatePaths<Elem<P>>>,
) -> Result<SolveReport<Elem<P>>, SolveError> {
    solve_with_observer(inst, config, bounds, candidates, &mut ())
}

fn check_preconditions<P: Problem>(inst: &Instance<P>, config: &SolverConfig) -> Result<(), SolveError> {
    if inst.graph.is_acyclic() {
        return Ok(());
    }
    let alg = inst.algebra();
    let zero = alg.zero();
    match config.algorithm {
        Algorithm::AStar if !inst.all_arcs_positive() => Err(SolveError::Precondition(
            "A* on a cyclic digraph needs positive arc resources".into(),
        )),
        Algorithm::Correcting | Algorithm::Dominance
            if !inst.resources.iter().all(|x| alg.less_eq(&zero, x)) =>
        {
            Err(SolveError::Precondition(
                "dominance tests on a cyclic digraph need non-negative arc resources".into(),
            ))
        }
        _ => Ok(()),
    }
}

/// The generic loop: extract a label of minimum key; at `d` record a
/// strictly better feasible cost; otherwise extend it when the configured
/// test passes. Stops when the frontier empties or a cap trips.
pub fn solve_with_observer<P: Problem, O: Observer<Elem<P>>>(
    inst: &Instance<P>,
    config: &SolverConfig,
    bounds: BoundSource<'_, Elem<P>>,
    candidates: Option<&CandidatePaths<Elem<P>>>,
    observer: &mut O,
) -> Result<SolveReport<Elem<P>>, SolveError> {
    config.validate()?;
    if bounds.kind() != config.bound_source {
        return Err(SolveError::Config(format!(
            "configured bound source {:?} but {:?} supplied",
            config.bound_source,
            bounds.kind()
        )));
    }
    if config.use_candidate_paths && candidates.is_none() {
        return Err(SolveError::Config("candidate paths requested but not supplied".into()));
    }
    if config.check_preconditions {
        check_preconditions(inst, config)?;
    }
    let start = Instant::now();
    let problem = &inst.problem;
    let alg = inst.algebra();
    let g = &inst.graph;
    let d = inst.destination;
    let zero = alg.zero();
    let nonnegative = inst.resources.iter().all(|x| alg.less_eq(&zero, x));
    let omega_w: Vec<f64> = inst.morphism_weights().unwrap_or_else(|| vec![0.0; g.arc_count()]);
    let has_bounds = !matches!(bounds, BoundSource::None);
    let candidates = candidates.filter(|_| config.use_candidate_paths);

    let mut ub = f64::INFINITY;
    let mut incumbent: Option<(Vec<usize>, Elem<P>)> = None;
    let mut tree: LabelTree<Elem<P>> = LabelTree { labels: Vec::new() };
    let mut frontier: BinaryHeap<Reverse<(OrdF64, u64, usize)>> = BinaryHeap::new();
    let mut live = 0usize;
    let mut seq = 0u64;
    let mut store: Vec<Vec<usize>> = vec![Vec::new(); g.vertex_count()];
    let mut store_size = 0usize;
    let mut report = SolveReport {
        status: Status::Infeasible,
        upper_bound: f64::INFINITY,
        lower_bound: f64::NEG_INFINITY,
        gap: f64::INFINITY,
        path: None,
        resource: None,
        extended: 0,
        cut: 0,
        cut_by_low: 0,
        cut_by_dom: 0,
        extracted: 0,
        generated: 0,
        dominance_cut_fraction: 0.0,
        path_length: 0,
        search_seconds: 0.0,
    };

    let label_bounds = |v: usize, x: &Elem<P>, omega: f64, ub: f64| -> (f64, f64) {
        let lb = if has_bounds {
            bound_key(problem, &bounds, v, x, omega, ub)
        } else if nonnegative {
            problem.cost(x)
        } else {
            f64::NEG_INFINITY
        };
        let key = match config.key {
            KeyKind::WithBound => lb,
            KeyKind::CostOnly => problem.cost(x),
        };
        (key, lb)
    };

    let (key, lb) = label_bounds(inst.origin, &zero, 0.0, ub);
    tree.labels.push(Label {
        vertex: inst.origin,
        parent: None,
        arc: None,
        resource: Some(zero.clone()),
        omega: 0.0,
        lb,
        live: true,
    });
    frontier.push(Reverse((OrdF64(key), seq, 0)));
    live += 1;
    report.generated = 1;
    let mut capped = false;

    while let Some(Reverse((OrdF64(key), _, id))) = frontier.pop() {
        if !tree.labels[id].live {
            continue;
        }
        tree.labels[id].live = false;
        live -= 1;
        report.extracted += 1;
        let v = tree.labels[id].vertex;
        let omega = tree.labels[id].omega;
        observer.event(SolveEvent::Extract { label: id, vertex: v, key });
        let x = tree.labels[id].resource.take().expect("live label keeps its resource");

        if v == d && !problem.infeasible(&x) && problem.cost(&x) < ub {
            ub = problem.cost(&x);
            incumbent = Some((tree.arcs(id), x));
            observer.event(SolveEvent::Incumbent { cost: ub });
            continue;
        }

        if config.algorithm.uses_low() {
            let pass = bound_cost(problem, &bounds, v, &x, omega, ub).is_some_and(|c| c <= ub);
            if !pass {
                report.cut += 1;
                report.cut_by_low += 1;
                observer.event(SolveEvent::Cut {
                    label: id,
                    vertex: v,
                    reason: CutReason::Low,
                    resource: &x,
                    omega,
                    upper_bound: ub,
                });
                continue;
            }
        }
        if config.algorithm.uses_dom() {
            let m = &mut store[v];
            let dominated = m.iter().any(|&q| {
                let xq = tree.labels[q].resource.as_ref().expect("stored label keeps its resource");
                alg.less_eq(xq, &x)
            });
            if dominated {
                report.cut += 1;
                report.cut_by_dom += 1;
                observer.event(SolveEvent::Cut {
                    label: id,
                    vertex: v,
                    reason: CutReason::Dom,
                    resource: &x,
                    omega,
                    upper_bound: ub,
                });
                continue;
            }
            let before = m.len();
            m.retain(|&q| {
                let lab = &mut tree.labels[q];
                let keep = !alg.less_eq(&x, lab.resource.as_ref().expect("stored label keeps its resource"));
                if !keep {
                    lab.resource = None;
                }
                keep
            });
            store_size -= before - m.len();
            m.push(id);
            store_size += 1;
        }

        if let Some(cand) = candidates {
            if let Some(xq) = cand.resource(v) {
                let y = alg.combine(&x, xq);
                if !problem.infeasible(&y) && problem.cost(&y) < ub {
                    ub = problem.cost(&y);
                    let mut arcs = tree.arcs(id);
                    arcs.extend(cand.path(g, v).expect("candidate exists"));
                    incumbent = Some((arcs, y));
                    observer.event(SolveEvent::Incumbent { cost: ub });
                }
            }
        }

        report.extended += 1;
        for &a in g.out_arcs(v) {
            let u = g.head(a);
            let y = alg.combine(&x, &inst.resources[a]);
            let om = omega + omega_w[a];
            let (key, lb) = label_bounds(u, &y, om, ub);
            let child = tree.labels.len();
            tree.labels.push(Label {
                vertex: u,
                parent: Some(id),
                arc: Some(a),
                resource: Some(y),
                omega: om,
                lb,
                live: true,
            });
            seq += 1;
            frontier.push(Reverse((OrdF64(key), seq, child)));
            live += 1;
            report.generated += 1;
        }
        if config.algorithm.uses_dom() {
            tree.labels[id].resource = Some(x);
        }
        if live > config.frontier_cap || store_size > config.dominance_cap {
            capped = true;
            break;
        }
    }

    report.upper_bound = ub;
    if capped {
        report.status = Status::Capped;
        let frontier_lb = tree
            .labels
            .iter()
            .filter(|l| l.live)
            .map(|l| l.lb)
            .fold(f64::INFINITY, f64::min);
        report.lower_bound = frontier_lb.min(ub);
    } else {
        report.status = if ub.is_finite() { Status::Optimal } else { Status::Infeasible };
        report.lower_bound = ub;
    }
    report.gap = relative_gap(report.upper_bound, report.lower_bound);
    if let Some((arcs, x)) = incumbent {
        report.path_length = arcs.len();
        report.path = Some(Path {
            origin: inst.origin,
            destination: d,
            arcs,
        });
        report.resource = Some(x);
    }
    if report.cut > 0 {
        report.dominance_cut_fraction = report.cut_by_dom as f64 / report.cut as f64;
    }
    report.search_seconds = start.elapsed().as_secs_f64();
    Ok(report)
}

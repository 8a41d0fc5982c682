//! Refined bounds from blown-up digraphs: threshold-indexed conditional
//! bounds `b_vⁱ` and clustered bound sets `B_v`.

use thiserror::Error;

use crate::algebra::{Algebra, Ext};
use crate::bounding::{ford_bellman, generalized_dijkstra, BoundingError, DijkstraMode};
use crate::enumeration::{candidate_paths, SolveError};
use crate::graph::{scalar_bellman_ford, scalar_dijkstra, topological_order, Digraph, GraphError};
use crate::instance::{Elem, Instance, Network, Problem};
use crate::oracle::for_each_elementary_path;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BlowupError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("negative-weight cycle under the morphism")]
    NegativeCycle,
    #[error(transparent)]
    Bounding(#[from] BoundingError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Solve(#[from] SolveError),
}

/// State digraph with its projection `φ` onto the original vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct BlownUpGraph<E> {
    pub graph: Digraph,
    /// Original vertex of each state.
    pub vertex_of: Vec<usize>,
    /// Original arc of each state arc.
    pub arc_of: Vec<usize>,
    /// Resource carried by each state arc.
    pub resources: Vec<E>,
    /// The unique state above the destination.
    pub destination: usize,
    pub kappa: usize,
    /// Bound attached to each state.
    pub bounds: Vec<Ext<E>>,
}

impl<E> BlownUpGraph<E> {
    pub fn state_count(&self) -> usize {
        self.graph.vertex_count()
    }

    /// States above `v`.
    pub fn states_of(&self, v: usize) -> Vec<usize> {
        (0..self.vertex_of.len()).filter(|&s| self.vertex_of[s] == v).collect()
    }
}

/// Bucketed bounds: bucket `i` of `v` bounds every `v`-`d` path `P` with
/// `ω(x_P) < limits[v][i]`; the last limit is `+∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionalBounds<E> {
    limits: Vec<Vec<f64>>,
    bounds: Vec<Vec<Ext<E>>>,
    min_weight: Vec<f64>,
    omega_ub: f64,
    bounds_cost: bool,
    top: Ext<E>,
    pub blowup: BlownUpGraph<E>,
    pub extractions: usize,
}

impl<E> ConditionalBounds<E> {
    pub fn limits(&self, v: usize) -> &[f64] {
        &self.limits[v]
    }

    pub fn bucket_bounds(&self, v: usize) -> &[Ext<E>] {
        &self.bounds[v]
    }

    /// Minimum `ω`-weight of a `v`-`d` path (`+∞` if none).
    pub fn min_weight(&self, v: usize) -> f64 {
        self.min_weight[v]
    }

    pub fn omega_ub(&self) -> f64 {
        self.omega_ub
    }

    /// Bound for a label at `v` that has spent `omega_spent`. While the
    /// incumbent caps `ω`, completions must satisfy `ω < UB − spent`;
    /// otherwise `ω ≤ ω^UB − spent`. Top when no completion fits.
    pub fn lookup(&self, v: usize, omega_spent: f64, current_ub: f64) -> &Ext<E> {
        let limits = &self.limits[v];
        if limits.is_empty() {
            return &self.top;
        }
        let idx = if self.bounds_cost && current_ub <= self.omega_ub {
            let budget = current_ub - omega_spent;
            if budget <= self.min_weight[v] {
                return &self.top;
            }
            limits.iter().position(|l| *l >= budget)
        } else {
            let budget = self.omega_ub - omega_spent;
            if budget < self.min_weight[v] {
                return &self.top;
            }
            limits.iter().position(|l| *l > budget)
        };
        match idx {
            Some(i) => &self.bounds[v][i],
            None => &self.bounds[v][limits.len() - 1],
        }
    }
}

/// Relative slack added to the default `ω^UB`.
pub const OMEGA_SLACK: f64 = 1e-9;

/// Options for [`build_conditional`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ConditionalOptions {
    /// Static cap on `ω` of relevant paths. Defaults to the cost of the
    /// candidate path at `o` (plus [`OMEGA_SLACK`]) when `ω ≤ c` and that
    /// path is feasible, else `+∞`.
    pub omega_ub: Option<f64>,
    /// Upper end of the threshold spacing. Defaults to `ω^UB` when finite,
    /// else `ω` of the candidate path at `o`.
    pub horizon: Option<f64>,
}

/// Thresholds for one vertex: `κ − 1` evenly spaced limits in
/// `(ω¹, horizon]` followed by `+∞`.
fn vertex_limits(min_weight: f64, horizon: f64, kappa: usize) -> Vec<f64> {
    if kappa == 1 || !horizon.is_finite() || min_weight >= horizon {
        return vec![f64::INFINITY];
    }
    let step = (horizon - min_weight) / (kappa - 1) as f64;
    let mut l: Vec<f64> = (1..kappa).map(|j| min_weight + j as f64 * step).collect();
    l.push(f64::INFINITY);
    l
}

/// Builds conditional bounds on the `(vertex, bucket)` state graph. An arc
/// `a = (v, u)` from bucket `i` leads to the smallest bucket `j` of `u` with
/// `limits[u][j] ≥ limits[v][i] − ω(x_a)`, and is dropped when no `u`-`d`
/// path fits that budget.
pub fn build_conditional<P: Problem>(
    inst: &Instance<P>,
    kappa: usize,
    options: ConditionalOptions,
) -> Result<ConditionalBounds<Elem<P>>, BlowupError> {
    if kappa == 0 {
        return Err(BlowupError::Parameter("kappa must be >= 1".into()));
    }
    let problem = &inst.problem;
    let alg = inst.algebra();
    let g = &inst.graph;
    let n = g.vertex_count();
    let d = inst.destination;
    let omega_w = inst
        .morphism_weights()
        .ok_or_else(|| BlowupError::Unsupported(format!("{} has no morphism", problem.name())))?;
    let to_d = if omega_w.iter().all(|w| *w >= 0.0) {
        scalar_dijkstra(g, &omega_w, d)?
    } else {
        scalar_bellman_ford(g, &omega_w, d).ok_or(BlowupError::NegativeCycle)?
    };
    let min_weight = to_d.dist.clone();

    let bounds_cost = problem.morphism_bounds_cost();
    let (omega_ub, horizon) = {
        let need_candidate = options.omega_ub.is_none() || options.horizon.is_none();
        let cand = if need_candidate { Some(candidate_paths(inst)?) } else { None };
        let cand_o = cand.as_ref().and_then(|c| c.resource(inst.origin));
        let cand_cost = match cand_o {
            Some(x) if bounds_cost && !problem.infeasible(x) => Some(problem.cost(x)),
            _ => None,
        };
        // ω ≤ c holds only up to rounding when c and ω are computed
        // differently (CVaR against the sum of arc expectations).
        let omega_ub = options
            .omega_ub
            .unwrap_or_else(|| cand_cost.map_or(f64::INFINITY, |c| c + OMEGA_SLACK * c.abs().max(1.0)));
        let horizon = options.horizon.unwrap_or_else(|| match (options.omega_ub, cand_cost) {
            (Some(ub), _) if ub.is_finite() => ub,
            (None, Some(c)) => c,
            _ => cand_o.and_then(|x| problem.morphism(x)).unwrap_or(f64::INFINITY),
        });
        (omega_ub, horizon)
    };

    // Minimum ω from o, to space each vertex's thresholds over the budgets
    // it can actually see.
    let reversed = Digraph::new(n, g.arcs().iter().map(|&(t, h)| (h, t)).collect())?;
    let from_o = if omega_w.iter().all(|w| *w >= 0.0) {
        scalar_dijkstra(&reversed, &omega_w, inst.origin)?.dist
    } else {
        scalar_bellman_ford(&reversed, &omega_w, inst.origin)
            .ok_or(BlowupError::NegativeCycle)?
            .dist
    };

    let mut limits: Vec<Vec<f64>> = vec![Vec::new(); n];
    for v in 0..n {
        if !min_weight[v].is_finite() {
            continue;
        }
        limits[v] = if v == d {
            vec![f64::INFINITY]
        } else {
            let h = if from_o[v].is_finite() { horizon - from_o[v].max(0.0) } else { horizon };
            vertex_limits(min_weight[v], h, kappa)
        };
    }

    let mut first_state = vec![usize::MAX; n];
    let mut vertex_of = Vec::new();
    for v in 0..n {
        first_state[v] = vertex_of.len();
        vertex_of.extend(std::iter::repeat(v).take(limits[v].len()));
    }
    let mut state_arcs = Vec::new();
    let mut arc_of = Vec::new();
    let mut resources = Vec::new();
    for v in 0..n {
        if v == d {
            continue;
        }
        for (i, &lim) in limits[v].iter().enumerate() {
            for &a in g.out_arcs(v) {
                let u = g.head(a);
                if limits[u].is_empty() {
                    continue;
                }
                let budget = lim - omega_w[a];
                if !(budget > min_weight[u]) {
                    continue;
                }
                let j = limits[u]
                    .iter()
                    .position(|l| *l >= budget)
                    .unwrap_or(limits[u].len() - 1);
                state_arcs.push((first_state[v] + i, first_state[u] + j));
                arc_of.push(a);
                resources.push(inst.resources[a].clone());
            }
        }
    }
    let sg = Digraph::new(vertex_of.len(), state_arcs)?;
    let dest_state = first_state[d];
    let net = Network {
        algebra: alg,
        graph: &sg,
        resources: &resources,
        destination: dest_state,
    };
    let phi = |x: &Elem<P>| problem.scalarize(x);
    let (state_bounds, extractions) = match generalized_dijkstra(net, DijkstraMode::Key(&phi), None) {
        Ok((b, s)) => (b, s.extractions),
        Err(BoundingError::NonConvergence { .. }) => {
            let (b, s) = ford_bellman(net, sg.vertex_count().max(1));
            (b, s.rounds * sg.vertex_count())
        }
        Err(e) => return Err(e.into()),
    };

    let mut bounds: Vec<Vec<Ext<Elem<P>>>> = vec![Vec::new(); n];
    for v in 0..n {
        let mut acc: Vec<Ext<Elem<P>>> = Vec::with_capacity(limits[v].len());
        for i in 0..limits[v].len() {
            let b = state_bounds[first_state[v] + i].clone();
            // Wider buckets cover more paths, so they may take the meet.
            let b = match acc.last() {
                Some(prev) => alg.meet_ext(&b, prev),
                None => b,
            };
            acc.push(b);
        }
        bounds[v] = acc;
    }
    let blowup = BlownUpGraph {
        graph: sg,
        vertex_of,
        arc_of,
        resources,
        destination: dest_state,
        kappa,
        bounds: state_bounds,
    };
    Ok(ConditionalBounds {
        limits,
        bounds,
        min_weight,
        omega_ub,
        bounds_cost,
        top: Ext::Top,
        blowup,
        extractions,
    })
}

/// Per-vertex bound sets `B_v` with `|B_v| ≤ κ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClusteredBounds<E> {
    sets: Vec<Vec<Ext<E>>>,
    pub blowup: BlownUpGraph<E>,
}

impl<E> ClusteredBounds<E> {
    pub fn bounds(&self, v: usize) -> &[Ext<E>] {
        &self.sets[v]
    }
}

/// Greedy agglomeration of `items` into at most `κ` clusters. Repeatedly
/// merges the pair of clusters with the smallest meet-slack
/// `min(φ(b₁), φ(b₂)) − φ(b₁ ∧ b₂)`, ties going to the lowest item indices.
/// Clusters come back sorted by their smallest item.
pub fn cluster_items<A: Algebra>(
    alg: &A,
    items: &[A::Elem],
    kappa: usize,
    phi: &dyn Fn(&A::Elem) -> f64,
) -> Vec<Vec<usize>> {
    let kappa = kappa.max(1);
    let mut clusters: Vec<(Vec<usize>, A::Elem, f64)> = items
        .iter()
        .enumerate()
        .map(|(i, x)| (vec![i], x.clone(), phi(x)))
        .collect();
    if clusters.len() <= kappa {
        return clusters.into_iter().map(|c| c.0).collect();
    }
    let slack = |a: &(Vec<usize>, A::Elem, f64), b: &(Vec<usize>, A::Elem, f64)| {
        a.2.min(b.2) - phi(&alg.meet(&a.1, &b.1))
    };
    let m = clusters.len();
    let mut table = vec![vec![f64::INFINITY; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            table[i][j] = slack(&clusters[i], &clusters[j]);
        }
    }
    while clusters.len() > kappa {
        let mut best: Option<(f64, usize, usize)> = None;
        for i in 0..clusters.len() {
            for j in i + 1..clusters.len() {
                if best.map_or(true, |(s, _, _)| table[i][j] < s) {
                    best = Some((table[i][j], i, j));
                }
            }
        }
        let (_, i, j) = best.expect("at least two clusters");
        let (members, x, _) = clusters.remove(j);
        table.remove(j);
        for row in table.iter_mut() {
            row.remove(j);
        }
        let target = &mut clusters[i];
        target.0.extend(members);
        target.0.sort_unstable();
        target.1 = alg.meet(&target.1, &x);
        target.2 = phi(&target.1);
        for k in 0..clusters.len() {
            if k < i {
                table[k][i] = slack(&clusters[k], &clusters[i]);
            } else if k > i {
                table[i][k] = slack(&clusters[i], &clusters[k]);
            }
        }
    }
    clusters.into_iter().map(|c| c.0).collect()
}

/// Builds `B_v` on an acyclic network by a reverse-topological sweep: the
/// items at `v` are the pairs (arc `(v, u)`, state of `u`) with resource
/// `x_a ⊕ b_state`; each cluster of items becomes a state whose bound is
/// the meet of its items.
pub fn build_clustered_network<A: Algebra>(
    net: Network<'_, A>,
    kappa: usize,
    phi: &dyn Fn(&A::Elem) -> f64,
) -> Result<ClusteredBounds<A::Elem>, BlowupError> {
    if kappa == 0 {
        return Err(BlowupError::Parameter("kappa must be >= 1".into()));
    }
    let alg = net.algebra;
    let g = net.graph;
    let n = g.vertex_count();
    let d = net.destination;
    let order = topological_order(g)
        .ok_or_else(|| BlowupError::Unsupported("clustered bounds need an acyclic digraph".into()))?;
    let reaches = g.reaches(d);
    let mut states_of: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut vertex_of = vec![d];
    let mut state_bound: Vec<A::Elem> = vec![alg.zero()];
    let mut state_arcs: Vec<(usize, usize)> = Vec::new();
    let mut arc_of = Vec::new();
    states_of[d].push(0);
    for &v in order.iter().rev() {
        if v == d || !reaches[v] {
            continue;
        }
        let mut items: Vec<(usize, usize)> = Vec::new();
        let mut item_res: Vec<A::Elem> = Vec::new();
        for &a in g.out_arcs(v) {
            let u = g.head(a);
            for &s in &states_of[u] {
                items.push((a, s));
                item_res.push(alg.combine(&net.resources[a], &state_bound[s]));
            }
        }
        for cluster in cluster_items(alg, &item_res, kappa, phi) {
            let s = vertex_of.len();
            vertex_of.push(v);
            let mut b = item_res[cluster[0]].clone();
            for &k in &cluster[1..] {
                b = alg.meet(&b, &item_res[k]);
            }
            state_bound.push(b);
            states_of[v].push(s);
            for &k in &cluster {
                let (a, child) = items[k];
                state_arcs.push((s, child));
                arc_of.push(a);
            }
        }
    }
    let resources: Vec<A::Elem> = arc_of.iter().map(|&a| net.resources[a].clone()).collect();
    let sets = states_of
        .iter()
        .map(|ss| ss.iter().map(|&s| Ext::Finite(state_bound[s].clone())).collect())
        .collect();
    let graph = Digraph::new(vertex_of.len(), state_arcs)?;
    Ok(ClusteredBounds {
        sets,
        blowup: BlownUpGraph {
            graph,
            vertex_of,
            arc_of,
            resources,
            destination: 0,
            kappa,
            bounds: state_bound.into_iter().map(Ext::Finite).collect(),
        },
    })
}

/// [`build_clustered_network`] with the problem's scalarization.
pub fn build_clustered<P: Problem>(
    inst: &Instance<P>,
    kappa: usize,
) -> Result<ClusteredBounds<Elem<P>>, BlowupError> {
    let phi = |x: &Elem<P>| inst.problem.scalarize(x);
    build_clustered_network(inst.network(), kappa, &phi)
}

/// Violations found by [`validate_blowup`]; empty when all checks pass.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BlowupReport {
    pub violations: Vec<String>,
}

impl BlowupReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Number of `v`-`target` paths for every `v`, stopping at `target`.
/// Exact on acyclic digraphs; elementary paths (capped) otherwise.
fn path_counts(g: &Digraph, target: usize, cap: usize) -> Option<Vec<u128>> {
    let n = g.vertex_count();
    if let Some(order) = topological_order(g) {
        let mut count = vec![0u128; n];
        count[target] = 1;
        for &v in order.iter().rev() {
            if v == target {
                continue;
            }
            count[v] = g.out_arcs(v).iter().map(|&a| count[g.head(a)]).sum();
        }
        return Some(count);
    }
    let alg = crate::algebra::ScalarAlgebra;
    let zeros = vec![0.0; g.arc_count()];
    let net = Network {
        algebra: &alg,
        graph: g,
        resources: &zeros,
        destination: target,
    };
    (0..n)
        .map(|v| for_each_elementary_path(net, v, cap, |_, _| {}).ok().map(|c| c as u128))
        .collect()
}

/// Checks the blow-up properties: `φ` onto the vertices reaching `d`,
/// `φ⁻¹(d) = {ϑ_d}`, `|φ⁻¹(v)| ≤ κ`, arc-by-arc resource preservation, and
/// (when `check_bijection`) equal path counts plus an explicit path-set
/// comparison for vertices with at most `path_cap` paths.
pub fn validate_blowup<A: Algebra>(
    original: Network<'_, A>,
    blowup: &BlownUpGraph<A::Elem>,
    check_bijection: bool,
    path_cap: usize,
) -> BlowupReport {
    let mut report = BlowupReport::default();
    let g = original.graph;
    let n = g.vertex_count();
    let d = original.destination;
    let reaches = g.reaches(d);
    let mut per_vertex = vec![0usize; n];
    for (s, &v) in blowup.vertex_of.iter().enumerate() {
        if v >= n {
            report.violations.push(format!("state {s} maps to missing vertex {v}"));
            continue;
        }
        per_vertex[v] += 1;
        if !reaches[v] {
            report.violations.push(format!("state {s} maps to vertex {v}, which cannot reach d"));
        }
    }
    for v in 0..n {
        if reaches[v] && per_vertex[v] == 0 {
            report.violations.push(format!("vertex {v} has no state"));
        }
        if per_vertex[v] > blowup.kappa {
            report
                .violations
                .push(format!("vertex {v} has {} states > kappa = {}", per_vertex[v], blowup.kappa));
        }
    }
    if per_vertex.get(d) != Some(&1) || blowup.vertex_of.get(blowup.destination) != Some(&d) {
        report.violations.push("destination must have exactly one state".into());
    }
    let sg = &blowup.graph;
    if blowup.arc_of.len() != sg.arc_count() || blowup.resources.len() != sg.arc_count() {
        report.violations.push("state arc tables have inconsistent lengths".into());
        return report;
    }
    for (e, &(s, t)) in sg.arcs().iter().enumerate() {
        let a = blowup.arc_of[e];
        if a >= g.arc_count() {
            report.violations.push(format!("state arc {e} maps to missing arc {a}"));
            continue;
        }
        if (blowup.vertex_of[s], blowup.vertex_of[t]) != g.arc(a) {
            report.violations.push(format!("state arc {e} does not project onto arc {a}"));
        }
        if blowup.resources[e] != original.resources[a] {
            report.violations.push(format!("state arc {e} changes the resource of arc {a}"));
        }
    }
    if !check_bijection {
        return report;
    }
    let (Some(orig_counts), Some(state_counts)) =
        (path_counts(g, d, path_cap), path_counts(sg, blowup.destination, path_cap))
    else {
        report.violations.push("path enumeration exceeded the cap".into());
        return report;
    };
    let state_net = Network {
        algebra: original.algebra,
        graph: sg,
        resources: &blowup.resources,
        destination: blowup.destination,
    };
    for v in 0..n {
        let states = blowup.states_of(v);
        let lifted: u128 = states.iter().map(|&s| state_counts[s]).sum();
        if lifted != orig_counts[v] {
            report.violations.push(format!(
                "vertex {v}: {lifted} state paths but {} paths",
                orig_counts[v]
            ));
            continue;
        }
        if orig_counts[v] as usize > path_cap {
            continue;
        }
        let mut expected = Vec::new();
        let _ = for_each_elementary_path(original, v, path_cap, |arcs, _| expected.push(arcs.to_vec()));
        let mut got = Vec::new();
        for &s in &states {
            let _ = for_each_elementary_path(state_net, s, path_cap, |arcs, _| {
                got.push(arcs.iter().map(|&e| blowup.arc_of[e]).collect::<Vec<_>>())
            });
        }
        expected.sort();
        got.sort();
        if expected != got {
            report.violations.push(format!("vertex {v}: state paths do not project onto its paths"));
        }
    }
    report
}

//! Per-vertex lower bounds `b_v` on the resources of all `v`-`d` paths:
//! Ford-Bellman iteration, generalized Dijkstra, the acyclic sweep and the
//! brute-force meet over elementary paths.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::algebra::{Algebra, Ext};
use crate::graph::{topological_order, OrdF64};
use crate::instance::Network;
use crate::oracle::{for_each_elementary_path, OracleError};

pub type BoundTable<E> = Vec<Ext<E>>;

/// Default cap on generalized-Dijkstra extractions, as a multiple of `|V|`.
pub const EXTRACTION_CAP_FACTOR: usize = 100;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundingError {
    #[error("generalized Dijkstra did not converge within {extractions} extractions")]
    NonConvergence { extractions: usize },
    #[error("digraph has a cycle")]
    Cyclic,
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BoundingStats {
    pub extractions: usize,
    /// Extractions divided by `|V|`.
    pub gamma: f64,
    pub rounds: usize,
    /// Whether the iteration stopped on a fixed point (empty queue).
    pub converged: bool,
}

/// Extraction rule for [`generalized_dijkstra`].
pub enum DijkstraMode<'f, E> {
    /// Vertex minimizing `φ(b̃_v)`, until the queue empties.
    Key(&'f dyn Fn(&E) -> f64),
    /// Vertex minimizing the arc counter `ñ_v`, until `min ñ > |V| − 1`.
    Counter,
}

fn initial_table<A: Algebra>(net: &Network<'_, A>) -> BoundTable<A::Elem> {
    let mut b = vec![Ext::Top; net.graph.vertex_count()];
    b[net.destination] = Ext::Finite(net.algebra.zero());
    b
}

/// Synchronous iteration `b_v ← b_v ∧ ⋀_{(v,u)} x_{(v,u)} ⊕ b_u` from
/// `b = Top`, `b_d = 0`. Stops at the first fixed point or after
/// `max_rounds` rounds; `usize::MAX` runs to the fixed point.
pub fn ford_bellman<A: Algebra>(
    net: Network<'_, A>,
    max_rounds: usize,
) -> (BoundTable<A::Elem>, BoundingStats) {
    let alg = net.algebra;
    let g = net.graph;
    let mut b = initial_table(&net);
    let mut stats = BoundingStats::default();
    while stats.rounds < max_rounds {
        let mut next = b.clone();
        let mut changed = false;
        for v in 0..g.vertex_count() {
            if v == net.destination {
                continue;
            }
            let mut acc = b[v].clone();
            for &a in g.out_arcs(v) {
                let Ext::Finite(bu) = &b[g.head(a)] else { continue };
                let cand = Ext::Finite(alg.combine(&net.resources[a], bu));
                if !alg.less_eq_ext(&acc, &cand) {
                    acc = alg.meet_ext(&acc, &cand);
                }
            }
            if !alg.less_eq_ext(&b[v], &acc) {
                changed = true;
            }
            next[v] = acc;
        }
        stats.rounds += 1;
        b = next;
        if !changed {
            stats.converged = true;
            break;
        }
    }
    (b, stats)
}

/// Ford-Bellman with the `|V| − 1` round budget standing in for `ℓ*`.
pub fn ford_bellman_bounds<A: Algebra>(net: Network<'_, A>) -> (BoundTable<A::Elem>, BoundingStats) {
    let rounds = net.graph.vertex_count().saturating_sub(1).max(1);
    ford_bellman(net, rounds)
}

/// Label-correcting computation of the bounds on the reverse graph.
pub fn generalized_dijkstra<A: Algebra>(
    net: Network<'_, A>,
    mode: DijkstraMode<'_, A::Elem>,
    extraction_cap: Option<usize>,
) -> Result<(BoundTable<A::Elem>, BoundingStats), BoundingError> {
    let alg = net.algebra;
    let g = net.graph;
    let n = g.vertex_count();
    let d = net.destination;
    let cap = extraction_cap.unwrap_or(EXTRACTION_CAP_FACTOR * n.max(1));
    let mut b = initial_table(&net);
    let mut counter = vec![usize::MAX; n];
    counter[d] = 0;
    let mut in_queue = vec![false; n];
    // Entry sequence per vertex; stale heap entries are skipped.
    let mut version = vec![0u64; n];
    let mut seq = 0u64;
    let mut heap: BinaryHeap<Reverse<(OrdF64, u64, usize, u64)>> = BinaryHeap::new();
    let priority = |b: &Ext<A::Elem>, cnt: usize| match &mode {
        DijkstraMode::Key(phi) => match b {
            Ext::Finite(x) => phi(x),
            Ext::Top => f64::INFINITY,
        },
        DijkstraMode::Counter => cnt as f64,
    };
    heap.push(Reverse((OrdF64(priority(&b[d], 0)), seq, d, 0)));
    in_queue[d] = true;
    let mut stats = BoundingStats::default();
    let limit = n.saturating_sub(1);
    while let Some(Reverse((OrdF64(_), _, v, ver))) = heap.pop() {
        if !in_queue[v] || ver != version[v] {
            continue;
        }
        if matches!(mode, DijkstraMode::Counter) && counter[v] > limit {
            break;
        }
        if stats.extractions >= cap {
            return Err(BoundingError::NonConvergence {
                extractions: stats.extractions,
            });
        }
        in_queue[v] = false;
        stats.extractions += 1;
        let Ext::Finite(bv) = b[v].clone() else { continue };
        for &a in g.in_arcs(v) {
            let u = g.tail(a);
            if u == d {
                continue;
            }
            let cand = Ext::Finite(alg.combine(&net.resources[a], &bv));
            if alg.less_eq_ext(&b[u], &cand) {
                continue;
            }
            counter[u] = counter[u].min(counter[v].saturating_add(1));
            b[u] = alg.meet_ext(&b[u], &cand);
            in_queue[u] = true;
            version[u] += 1;
            seq += 1;
            heap.push(Reverse((OrdF64(priority(&b[u], counter[u])), seq, u, version[u])));
        }
        counter[v] = usize::MAX;
    }
    stats.converged = !in_queue.iter().any(|q| *q);
    stats.gamma = stats.extractions as f64 / n.max(1) as f64;
    Ok((b, stats))
}

/// Single reverse-topological sweep, valid on acyclic digraphs only.
pub fn acyclic_bounds<A: Algebra>(net: Network<'_, A>) -> Result<BoundTable<A::Elem>, BoundingError> {
    let alg = net.algebra;
    let g = net.graph;
    let order = topological_order(g).ok_or(BoundingError::Cyclic)?;
    let mut b = initial_table(&net);
    for &v in order.iter().rev() {
        if v == net.destination {
            continue;
        }
        let mut acc = Ext::Top;
        for &a in g.out_arcs(v) {
            let Ext::Finite(bu) = &b[g.head(a)] else { continue };
            let cand = Ext::Finite(alg.combine(&net.resources[a], bu));
            acc = alg.meet_ext(&acc, &cand);
        }
        b[v] = acc;
    }
    Ok(b)
}

/// Exact meet of the resources of all elementary `v`-`d` paths.
pub fn bruteforce_meet_bounds<A: Algebra>(
    net: Network<'_, A>,
    path_cap: usize,
) -> Result<BoundTable<A::Elem>, BoundingError> {
    let alg = net.algebra;
    let mut b = Vec::with_capacity(net.graph.vertex_count());
    for v in 0..net.graph.vertex_count() {
        let mut acc: Ext<A::Elem> = Ext::Top;
        for_each_elementary_path(net, v, path_cap, |_, x| {
            acc = alg.meet_ext(&acc, &Ext::Finite(x.clone()));
        })?;
        b.push(acc);
    }
    Ok(b)
}

/// Whether `lhs[v] ≼ rhs[v]` for every vertex.
pub fn table_less_eq<A: Algebra>(alg: &A, lhs: &[Ext<A::Elem>], rhs: &[Ext<A::Elem>]) -> bool {
    lhs.len() == rhs.len() && lhs.iter().zip(rhs).all(|(x, y)| alg.less_eq_ext(x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Vector, VectorAlgebra};
    use crate::graph::Digraph;
    use crate::oracle::DEFAULT_PATH_CAP;

    fn v(c: &[f64]) -> Ext<Vector> {
        Ext::Finite(Vector(c.to_vec()))
    }

    // o = 0, v = 1, d = 2.
    fn example() -> (VectorAlgebra, Digraph, Vec<Vector>) {
        let g = Digraph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
        let res = vec![Vector(vec![1.0, 5.0]), Vector(vec![2.0, 1.0]), Vector(vec![4.0, 4.0])];
        (VectorAlgebra::new(2), g, res)
    }

    #[test]
    fn ford_bellman_rounds() {
        let (alg, g, res) = example();
        let net = Network { algebra: &alg, graph: &g, resources: &res, destination: 2 };
        let (b1, _) = ford_bellman(net, 1);
        assert_eq!(b1, vec![v(&[4.0, 4.0]), v(&[2.0, 1.0]), v(&[0.0, 0.0])]);
        let (b2, s2) = ford_bellman(net, 2);
        assert_eq!(b2[0], v(&[3.0, 4.0]));
        assert!(!s2.converged);
        let (bf, sf) = ford_bellman(net, usize::MAX);
        assert_eq!(bf, b2);
        assert!(sf.converged);
        assert_eq!(sf.rounds, 3);
    }

    #[test]
    fn single_arc_and_unreachable() {
        let alg = VectorAlgebra::new(2);
        let g = Digraph::new(3, vec![(0, 1)]).unwrap();
        let res = vec![Vector(vec![3.0, 1.0])];
        let net = Network { algebra: &alg, graph: &g, resources: &res, destination: 1 };
        let (b, _) = ford_bellman(net, 1);
        assert_eq!(b[0], v(&[3.0, 1.0]));
        assert!(b[2].is_top());
        let (b, _) = ford_bellman(net, usize::MAX);
        assert!(b[2].is_top());
    }

    #[test]
    fn dijkstra_matches_on_example() {
        let (alg, g, res) = example();
        let net = Network { algebra: &alg, graph: &g, resources: &res, destination: 2 };
        let phi = |x: &Vector| x.sum();
        let (b, stats) = generalized_dijkstra(net, DijkstraMode::Key(&phi), None).unwrap();
        assert_eq!(b[0], v(&[3.0, 4.0]));
        assert_eq!(stats.extractions, 3);
        assert_eq!(stats.gamma, 1.0);
        assert!(stats.converged);
        let (bc, _) = generalized_dijkstra(net, DijkstraMode::Counter, None).unwrap();
        assert_eq!(bc, b);
        assert_eq!(acyclic_bounds(net).unwrap(), b);
        assert_eq!(bruteforce_meet_bounds(net, DEFAULT_PATH_CAP).unwrap(), b);
    }

    #[test]
    fn extraction_cap_reports_non_convergence() {
        let (alg, g, res) = example();
        let net = Network { algebra: &alg, graph: &g, resources: &res, destination: 2 };
        let phi = |x: &Vector| x.sum();
        let err = generalized_dijkstra(net, DijkstraMode::Key(&phi), Some(1)).unwrap_err();
        assert_eq!(err, BoundingError::NonConvergence { extractions: 1 });
    }

    #[test]
    fn chain_and_cycle_cases() {
        let alg = VectorAlgebra::new(1);
        let g = Digraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        let res = vec![Vector(vec![2.0]), Vector(vec![5.0])];
        let net = Network { algebra: &alg, graph: &g, resources: &res, destination: 2 };
        let b = acyclic_bounds(net).unwrap();
        assert_eq!(b, vec![v(&[7.0]), v(&[5.0]), v(&[0.0])]);
        let cyc = Digraph::new(2, vec![(0, 1), (1, 0)]).unwrap();
        let res2 = vec![Vector(vec![1.0]), Vector(vec![1.0])];
        let net2 = Network { algebra: &alg, graph: &cyc, resources: &res2, destination: 1 };
        assert_eq!(acyclic_bounds(net2).unwrap_err(), BoundingError::Cyclic);
        let (b2, s) = ford_bellman(net2, usize::MAX);
        assert_eq!(b2[0], v(&[1.0]));
        assert!(s.converged);
    }
}

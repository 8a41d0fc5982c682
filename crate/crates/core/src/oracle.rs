//! Exhaustive references: elementary path enumeration and the brute-force
//! solver used to check every other algorithm on small instances.

use thiserror::Error;

use crate::algebra::Algebra;
use crate::instance::{Elem, Instance, Network, Path, Problem};

/// Default cap on the number of enumerated elementary paths.
pub const DEFAULT_PATH_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("more than {cap} elementary paths")]
    TooLarge { cap: usize },
}

/// Calls `f(arcs, x_P)` for every elementary path from `from` to the
/// network destination, in depth-first order. Resources are folded left to
/// right. Returns the number of paths.
pub fn for_each_elementary_path<A: Algebra>(
    net: Network<'_, A>,
    from: usize,
    cap: usize,
    mut f: impl FnMut(&[usize], &A::Elem),
) -> Result<usize, OracleError> {
    let g = net.graph;
    let alg = net.algebra;
    let mut on_path = vec![false; g.vertex_count()];
    let mut arcs: Vec<usize> = Vec::new();
    let mut prefix: Vec<A::Elem> = vec![alg.zero()];
    // Stack of (vertex, next out-arc position).
    let mut stack: Vec<(usize, usize)> = vec![(from, 0)];
    on_path[from] = true;
    let mut count = 0usize;
    if from == net.destination {
        f(&arcs, &prefix[0]);
        return Ok(1);
    }
    while let Some(top) = stack.last_mut() {
        let (v, pos) = *top;
        let out = g.out_arcs(v);
        if pos == out.len() {
            stack.pop();
            on_path[v] = false;
            if !stack.is_empty() {
                arcs.pop();
                prefix.pop();
            }
            continue;
        }
        top.1 += 1;
        let a = out[pos];
        let u = g.head(a);
        if on_path[u] {
            continue;
        }
        let x = alg.combine(prefix.last().expect("prefix holds zero"), &net.resources[a]);
        if u == net.destination {
            count += 1;
            if count > cap {
                return Err(OracleError::TooLarge { cap });
            }
            arcs.push(a);
            f(&arcs, &x);
            arcs.pop();
            continue;
        }
        arcs.push(a);
        prefix.push(x);
        on_path[u] = true;
        stack.push((u, 0));
    }
    Ok(count)
}

/// Optimal feasible path found by exhaustive enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleSolution<E> {
    pub cost: f64,
    pub path: Path,
    pub resource: E,
}

/// Minimum-cost feasible elementary `o`-`d` path, first found on ties.
/// `None` when no feasible path exists.
pub fn oracle_solve<P: Problem>(
    inst: &Instance<P>,
    cap: usize,
) -> Result<Option<OracleSolution<Elem<P>>>, OracleError> {
    let p = &inst.problem;
    let mut best: Option<OracleSolution<Elem<P>>> = None;
    for_each_elementary_path(inst.network(), inst.origin, cap, |arcs, x| {
        if p.infeasible(x) {
            return;
        }
        let c = p.cost(x);
        if best.as_ref().map_or(true, |b| c < b.cost) {
            best = Some(OracleSolution {
                cost: c,
                path: Path {
                    origin: inst.origin,
                    destination: inst.destination,
                    arcs: arcs.to_vec(),
                },
                resource: x.clone(),
            });
        }
    })?;
    Ok(best)
}

/// [`oracle_solve`] on any catalog instance: optimal cost and path.
pub fn oracle_solve_any(inst: &crate::io::AnyInstance, cap: usize) -> Result<Option<(f64, Path)>, OracleError> {
    use crate::io::AnyInstance as I;
    fn strip<E>(s: Option<OracleSolution<E>>) -> Option<(f64, Path)> {
        s.map(|s| (s.cost, s.path))
    }
    Ok(match inst {
        I::Rcsp(i) => strip(oracle_solve(i, cap)?),
        I::Cvar(i) => strip(oracle_solve(i, cap)?),
        I::ProbCon(i) => strip(oracle_solve(i, cap)?),
        I::Scenario(i) => strip(oracle_solve(i, cap)?),
        I::Utility(i) => strip(oracle_solve(i, cap)?),
    })
}

/// All elementary `from`-`d` paths with their resources.
pub fn elementary_paths<A: Algebra>(
    net: Network<'_, A>,
    from: usize,
    cap: usize,
) -> Result<Vec<(Vec<usize>, A::Elem)>, OracleError> {
    let mut out = Vec::new();
    for_each_elementary_path(net, from, cap, |arcs, x| out.push((arcs.to_vec(), x.clone())))?;
    Ok(out)
}

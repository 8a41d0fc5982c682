//! Digraphs, the grid / random / acyclic generators, DIMACS ingestion and
//! the scalar shortest-path utilities used during preprocessing.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet, VecDeque};

use rand::Rng;
use thiserror::Error;

use crate::rng::stream;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Directed multigraph on vertices `0..vertex_count`. Arcs keep their index
/// as identity, so parallel arcs are distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    vertex_count: usize,
    arcs: Vec<(usize, usize)>,
    out_arcs: Vec<Vec<usize>>,
    in_arcs: Vec<Vec<usize>>,
}

impl Digraph {
    pub fn new(vertex_count: usize, arcs: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        let mut out_arcs = vec![Vec::new(); vertex_count];
        let mut in_arcs = vec![Vec::new(); vertex_count];
        for (i, &(t, h)) in arcs.iter().enumerate() {
            if t >= vertex_count || h >= vertex_count {
                return Err(GraphError::Parameter(format!(
                    "arc {i} ({t}, {h}) out of range for {vertex_count} vertices"
                )));
            }
            out_arcs[t].push(i);
            in_arcs[h].push(i);
        }
        Ok(Digraph {
            vertex_count,
            arcs,
            out_arcs,
            in_arcs,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn arc(&self, a: usize) -> (usize, usize) {
        self.arcs[a]
    }

    pub fn tail(&self, a: usize) -> usize {
        self.arcs[a].0
    }

    pub fn head(&self, a: usize) -> usize {
        self.arcs[a].1
    }

    /// Indices of the arcs leaving `v` (δ⁺(v)).
    pub fn out_arcs(&self, v: usize) -> &[usize] {
        &self.out_arcs[v]
    }

    /// Indices of the arcs entering `v` (δ⁻(v)).
    pub fn in_arcs(&self, v: usize) -> &[usize] {
        &self.in_arcs[v]
    }

    /// Vertices with at least one path to `target` (including `target`).
    pub fn reaches(&self, target: usize) -> Vec<bool> {
        let mut seen = vec![false; self.vertex_count];
        seen[target] = true;
        let mut stack = vec![target];
        while let Some(v) = stack.pop() {
            for &a in &self.in_arcs[v] {
                let u = self.tail(a);
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        seen
    }

    pub fn is_acyclic(&self) -> bool {
        topological_order(self).is_some()
    }
}

/// A generated digraph together with its origin and destination.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedGraph {
    pub graph: Digraph,
    pub origin: usize,
    pub destination: usize,
}

/// Grid of `layers` layers of `width` vertices. Each layer is a cycle with
/// arcs in both directions, `v(i,j) → v(i+1,j)` links consecutive layers, the
/// origin (vertex 0) feeds the first layer and the last layer feeds the
/// destination (last vertex).
pub fn generate_grid(layers: usize, width: usize) -> Result<GeneratedGraph, GraphError> {
    if layers == 0 || width == 0 {
        return Err(GraphError::Parameter("grid needs layers, width >= 1".into()));
    }
    let n = layers * width + 2;
    let origin = 0;
    let destination = n - 1;
    let at = |i: usize, j: usize| 1 + i * width + j;
    let mut arcs = Vec::new();
    for i in 0..layers {
        match width {
            1 => {}
            2 => {
                arcs.push((at(i, 0), at(i, 1)));
                arcs.push((at(i, 1), at(i, 0)));
            }
            _ => {
                for j in 0..width {
                    let next = (j + 1) % width;
                    arcs.push((at(i, j), at(i, next)));
                    arcs.push((at(i, next), at(i, j)));
                }
            }
        }
    }
    for i in 0..layers - 1 {
        for j in 0..width {
            arcs.push((at(i, j), at(i + 1, j)));
        }
    }
    for j in 0..width {
        arcs.push((origin, at(0, j)));
    }
    for j in 0..width {
        arcs.push((at(layers - 1, j), destination));
    }
    Ok(GeneratedGraph {
        graph: Digraph::new(n, arcs)?,
        origin,
        destination,
    })
}

/// Hamiltonian cycle `0 → 1 → … → n-1 → 0` plus `m - n` distinct random
/// chords. Origin is vertex 0 and destination vertex `n / 2`.
pub fn generate_random(n: usize, m: usize, seed: u64) -> Result<GeneratedGraph, GraphError> {
    if n < 2 {
        return Err(GraphError::Parameter("random graph needs n >= 2".into()));
    }
    if m < n {
        return Err(GraphError::Parameter(format!("m = {m} < n = {n}")));
    }
    let max_arcs = n * (n - 1);
    if m > max_arcs {
        return Err(GraphError::Parameter(format!(
            "m = {m} exceeds the {max_arcs} available ordered pairs"
        )));
    }
    let mut arcs: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    let mut present: HashSet<(usize, usize)> = arcs.iter().copied().collect();
    let mut rng = stream(seed, 0);
    while arcs.len() < m {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u != v && present.insert((u, v)) {
            arcs.push((u, v));
        }
    }
    Ok(GeneratedGraph {
        graph: Digraph::new(n, arcs)?,
        origin: 0,
        destination: n / 2,
    })
}

/// Path `0 → 1 → … → n-1` plus `m - (n - 1)` random arcs `(i, j)` with
/// `i < j`, distinct from each other (an extra arc may run parallel to a
/// path arc). Origin is vertex 0, destination vertex `n - 1`.
pub fn generate_acyclic(n: usize, m: usize, seed: u64) -> Result<GeneratedGraph, GraphError> {
    if n < 2 {
        return Err(GraphError::Parameter("acyclic graph needs n >= 2".into()));
    }
    if m + 1 < n {
        return Err(GraphError::Parameter(format!("m = {m} < n - 1 = {}", n - 1)));
    }
    let extra = m - (n - 1);
    let pairs = n * (n - 1) / 2;
    if extra > pairs {
        return Err(GraphError::Parameter(format!(
            "{extra} extra arcs requested but only {pairs} pairs (i, j) with i < j exist"
        )));
    }
    let mut arcs: Vec<(usize, usize)> = (0..n - 1).map(|i| (i, i + 1)).collect();
    let mut chosen = HashSet::new();
    let mut rng = stream(seed, 0);
    while chosen.len() < extra {
        let a = rng.gen_range(0..n);
        let b = rng.gen_range(0..n);
        if a == b {
            continue;
        }
        let pair = (a.min(b), a.max(b));
        if chosen.insert(pair) {
            arcs.push(pair);
        }
    }
    Ok(GeneratedGraph {
        graph: Digraph::new(n, arcs)?,
        origin: 0,
        destination: n - 1,
    })
}

/// Kahn's algorithm. Returns `None` when the digraph has a cycle.
pub fn topological_order(g: &Digraph) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    let mut indeg: Vec<usize> = (0..n).map(|v| g.in_arcs(v).len()).collect();
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = queue.pop_front() {
        order.push(v);
        for &a in g.out_arcs(v) {
            let h = g.head(a);
            indeg[h] -= 1;
            if indeg[h] == 0 {
                queue.push_back(h);
            }
        }
    }
    (order.len() == n).then_some(order)
}

/// Shortest distances from every vertex to a fixed target, with the first
/// arc of a shortest path.
#[derive(Debug, Clone, PartialEq)]
pub struct ShortestPathTree {
    pub target: usize,
    pub dist: Vec<f64>,
    pub next_arc: Vec<Option<usize>>,
}

impl ShortestPathTree {
    /// Arcs of the tree path from `v` to the target, or `None` if unreachable.
    pub fn path_from(&self, g: &Digraph, v: usize) -> Option<Vec<usize>> {
        if !self.dist[v].is_finite() {
            return None;
        }
        let mut arcs = Vec::new();
        let mut cur = v;
        while cur != self.target {
            let a = self.next_arc[cur]?;
            arcs.push(a);
            cur = g.head(a);
            if arcs.len() > g.vertex_count() {
                return None;
            }
        }
        Some(arcs)
    }
}

/// Dijkstra on the reverse graph: distance from every vertex to `target`
/// under non-negative arc weights. Unreachable vertices get `+∞`.
pub fn scalar_dijkstra(
    g: &Digraph,
    weights: &[f64],
    target: usize,
) -> Result<ShortestPathTree, GraphError> {
    if let Some((a, w)) = weights.iter().enumerate().find(|(_, w)| !(**w >= 0.0)) {
        return Err(GraphError::Parameter(format!("arc {a} has weight {w} < 0")));
    }
    let n = g.vertex_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut next_arc = vec![None; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[target] = 0.0;
    heap.push(Reverse((OrdF64(0.0), target)));
    while let Some(Reverse((OrdF64(d), v))) = heap.pop() {
        if done[v] || d > dist[v] {
            continue;
        }
        done[v] = true;
        for &a in g.in_arcs(v) {
            let u = g.tail(a);
            let nd = d + weights[a];
            if nd < dist[u] {
                dist[u] = nd;
                next_arc[u] = Some(a);
                heap.push(Reverse((OrdF64(nd), u)));
            }
        }
    }
    Ok(ShortestPathTree {
        target,
        dist,
        next_arc,
    })
}

/// Bellman-Ford to `target` for weights of arbitrary sign. Returns `None`
/// when a negative cycle can reach the target.
pub fn scalar_bellman_ford(g: &Digraph, weights: &[f64], target: usize) -> Option<ShortestPathTree> {
    let n = g.vertex_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut next_arc = vec![None; n];
    dist[target] = 0.0;
    for round in 0..=n {
        let mut changed = false;
        for (a, &(t, h)) in g.arcs().iter().enumerate() {
            if dist[h].is_finite() && dist[h] + weights[a] < dist[t] {
                dist[t] = dist[h] + weights[a];
                next_arc[t] = Some(a);
                changed = true;
            }
        }
        if !changed {
            return Some(ShortestPathTree {
                target,
                dist,
                next_arc,
            });
        }
        if round == n {
            break;
        }
    }
    None
}

/// Total order on non-NaN floats for heap keys.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct OrdF64(pub f64);

impl Eq for OrdF64 {}

impl PartialOrd for OrdF64 {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OrdF64 {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Parses the DIMACS shortest-path format (`c` comments, one `p sp n m`
/// line, `a u v w` arcs with 1-based vertices).
pub fn parse_dimacs(text: &str) -> Result<(Digraph, Vec<f64>), GraphError> {
    let err = |line: usize, message: String| GraphError::Parse { line, message };
    let mut header: Option<(usize, usize)> = None;
    let mut arcs = Vec::new();
    let mut lengths = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let mut tok = raw.split_whitespace();
        let Some(kind) = tok.next() else { continue };
        match kind {
            "c" => {}
            "p" => {
                if header.is_some() {
                    return Err(err(line, "duplicate problem line".into()));
                }
                if tok.next() != Some("sp") {
                    return Err(err(line, "expected `p sp <n> <m>`".into()));
                }
                let n = parse_tok::<usize>(tok.next(), line, "vertex count")?;
                let m = parse_tok::<usize>(tok.next(), line, "arc count")?;
                if tok.next().is_some() {
                    return Err(err(line, "trailing tokens".into()));
                }
                header = Some((n, m));
            }
            "a" => {
                let Some((n, _)) = header else {
                    return Err(err(line, "arc before problem line".into()));
                };
                let u = parse_tok::<usize>(tok.next(), line, "tail")?;
                let v = parse_tok::<usize>(tok.next(), line, "head")?;
                let w = parse_tok::<i64>(tok.next(), line, "length")?;
                if tok.next().is_some() {
                    return Err(err(line, "trailing tokens".into()));
                }
                for x in [u, v] {
                    if x == 0 || x > n {
                        return Err(err(line, format!("vertex {x} outside 1..={n}")));
                    }
                }
                arcs.push((u - 1, v - 1));
                lengths.push(w as f64);
            }
            other => return Err(err(line, format!("unknown line type `{other}`"))),
        }
    }
    let (n, m) = header.ok_or_else(|| err(0, "missing problem line".into()))?;
    if arcs.len() != m {
        return Err(err(
            text.lines().count(),
            format!("expected {m} arcs, found {}", arcs.len()),
        ));
    }
    Ok((Digraph::new(n, arcs)?, lengths))
}

fn parse_tok<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, GraphError> {
    let tok = tok.ok_or_else(|| GraphError::Parse {
        line,
        message: format!("missing {what}"),
    })?;
    tok.parse().map_err(|_| GraphError::Parse {
        line,
        message: format!("invalid {what} `{tok}`"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn three_vertex() -> Digraph {
        // o = 0, v = 1, d = 2
        Digraph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn grid_sizes() {
        let g = generate_grid(2, 3).unwrap();
        assert_eq!(g.graph.vertex_count(), 8);
        assert_eq!(g.graph.arc_count(), 21);
        let g = generate_grid(100, 100).unwrap();
        assert_eq!(g.graph.vertex_count(), 10002);
        assert_eq!(g.graph.arc_count(), 30100);
        let g = generate_grid(3, 1).unwrap();
        assert_eq!(g.graph.arc_count(), 2 + 1 + 1);
        assert!(g.graph.is_acyclic());
    }

    #[test]
    fn random_sizes_and_errors() {
        let g = generate_random(5, 9, 1).unwrap();
        assert_eq!(g.graph.vertex_count(), 5);
        assert_eq!(g.graph.arc_count(), 9);
        assert!(g.graph.arcs().iter().all(|(u, v)| u != v));
        let set: HashSet<_> = g.graph.arcs().iter().collect();
        assert_eq!(set.len(), 9);
        let c = generate_random(6, 6, 3).unwrap();
        assert_eq!(c.graph.arcs(), &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
        assert!(generate_random(5, 4, 1).is_err());
        assert!(generate_random(3, 7, 1).is_err());
    }

    #[test]
    fn acyclic_sizes_and_order() {
        let g = generate_acyclic(4, 7, 1).unwrap();
        assert_eq!(g.graph.vertex_count(), 4);
        assert_eq!(g.graph.arc_count(), 7);
        assert!(g.graph.arcs().iter().all(|(i, j)| i < j));
        assert_eq!(topological_order(&g.graph).unwrap(), vec![0, 1, 2, 3]);
        let single = generate_acyclic(2, 1, 9).unwrap();
        assert_eq!(single.graph.arcs(), &[(0, 1)]);
        assert!(generate_acyclic(4, 10, 1).is_err());
        assert!(generate_acyclic(4, 2, 1).is_err());
    }

    #[test]
    fn large_generators_match_sizes() {
        let r = generate_random(10000, 50000, 7).unwrap();
        assert_eq!(r.graph.arc_count(), 50000);
        let a = generate_acyclic(10000, 50000, 7).unwrap();
        assert_eq!(a.graph.vertex_count(), 10000);
        assert_eq!(a.graph.arc_count(), 50000);
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(generate_random(30, 90, 5).unwrap(), generate_random(30, 90, 5).unwrap());
        assert_ne!(generate_random(30, 90, 5).unwrap(), generate_random(30, 90, 6).unwrap());
        assert_eq!(generate_acyclic(30, 90, 5).unwrap(), generate_acyclic(30, 90, 5).unwrap());
    }

    #[test]
    fn topological_order_cases() {
        let cyc = Digraph::new(2, vec![(0, 1), (1, 0)]).unwrap();
        assert!(topological_order(&cyc).is_none());
        let one = Digraph::new(1, vec![]).unwrap();
        assert_eq!(topological_order(&one).unwrap(), vec![0]);
    }

    #[test]
    fn dijkstra_examples() {
        let g = three_vertex();
        let t = scalar_dijkstra(&g, &[1.0, 2.0, 4.0], 2).unwrap();
        assert_eq!(t.dist, vec![3.0, 2.0, 0.0]);
        assert_eq!(t.path_from(&g, 0).unwrap(), vec![0, 1]);
        assert_eq!(t.path_from(&g, 2).unwrap(), Vec::<usize>::new());
        let g2 = Digraph::new(3, vec![(0, 1)]).unwrap();
        let t2 = scalar_dijkstra(&g2, &[1.0], 1).unwrap();
        assert!(t2.dist[2].is_infinite());
        assert!(t2.path_from(&g2, 2).is_none());
        assert!(scalar_dijkstra(&g, &[1.0, -2.0, 4.0], 2).is_err());
    }

    #[test]
    fn bellman_ford_handles_negative_arcs() {
        let g = three_vertex();
        let t = scalar_bellman_ford(&g, &[1.0, -2.0, 4.0], 2).unwrap();
        assert_eq!(t.dist, vec![-1.0, -2.0, 0.0]);
        let cyc = Digraph::new(2, vec![(0, 1), (1, 0)]).unwrap();
        assert!(scalar_bellman_ford(&cyc, &[1.0, -2.0], 1).is_none());
    }

    #[test]
    fn dimacs_parsing() {
        let (g, w) = parse_dimacs("c tiny\np sp 2 1\na 1 2 7\n").unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.arcs(), &[(0, 1)]);
        assert_eq!(w, vec![7.0]);
        let dup = parse_dimacs("p sp 2 1\np sp 2 1\na 1 2 7\n").unwrap_err();
        assert_eq!(dup, GraphError::Parse { line: 2, message: "duplicate problem line".into() });
        let zero = parse_dimacs("p sp 2 1\na 0 2 7\n").unwrap_err();
        assert!(matches!(zero, GraphError::Parse { line: 2, .. }));
        assert!(parse_dimacs("p sp 2 2\na 1 2 7\n").is_err());
        assert!(parse_dimacs("p sp 2 1\na 1 2 x\n").is_err());
        assert!(parse_dimacs("p sp 2 1\nq 1 2 3\n").is_err());
    }
}

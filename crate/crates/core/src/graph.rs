//! Directed communication graphs.
//!
//! An edge `(u, v)` means a broadcast by `u` is received by `v`. Graphs are
//! stored twice, as out-neighbour rows and in-neighbour rows, so both
//! broadcast delivery and in-degree queries are word operations.

use std::fmt::Write as _;

use rand::distr::{Bernoulli, Distribution};
use rand::Rng;
use thiserror::Error;

use crate::gf2::Gf2Vector;

/// Node indicator set; the same packed representation as a GF(2) vector.
pub type NodeSet = Gf2Vector;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GraphError {
    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),
    #[error("graph needs at least one node")]
    Empty,
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("node {node} out of range for n = {n}")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("two-hop set needs distinct endpoints, got u = v = {0}")]
    SameEndpoints(usize),
    #[error("adjacency text line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Clone, PartialEq, Eq)]
pub struct DirectedGraph {
    n: usize,
    out_adj: Vec<NodeSet>,
    in_adj: Vec<NodeSet>,
}

impl std::fmt::Debug for DirectedGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DirectedGraph")
            .field("n", &self.n)
            .field("edges", &self.edge_count())
            .finish()
    }
}

impl DirectedGraph {
    pub fn empty(n: usize) -> Self {
        Self {
            n,
            out_adj: vec![NodeSet::zeros(n); n],
            in_adj: vec![NodeSet::zeros(n); n],
        }
    }

    /// Every ordered pair `u != v` is an edge.
    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    g.insert_edge(u, v);
                }
            }
        }
        g
    }

    /// Directed cycle `0 -> 1 -> ... -> n-1 -> 0`.
    pub fn cycle(n: usize) -> Self {
        let mut g = Self::empty(n);
        if n >= 2 {
            for u in 0..n {
                g.insert_edge(u, (u + 1) % n);
            }
        }
        g
    }

    /// Builds a graph from explicit out-neighbour lists.
    pub fn from_adjacency(out_lists: &[Vec<usize>]) -> Result<Self, GraphError> {
        let n = out_lists.len();
        let mut g = Self::empty(n);
        for (u, list) in out_lists.iter().enumerate() {
            for &v in list {
                if v >= n {
                    return Err(GraphError::NodeOutOfRange { node: v, n });
                }
                if v == u {
                    return Err(GraphError::SelfLoop(u));
                }
                g.insert_edge(u, v);
            }
        }
        Ok(g)
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut lists = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n {
                return Err(GraphError::NodeOutOfRange { node: u, n });
            }
            lists[u].push(v);
        }
        Self::from_adjacency(&lists)
    }

    fn insert_edge(&mut self, u: usize, v: usize) {
        self.out_adj[u].set(v, true);
        self.in_adj[v].set(u, true);
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out_adj[u].get(v)
    }

    #[inline]
    pub fn out_neighbors(&self, u: usize) -> &NodeSet {
        &self.out_adj[u]
    }

    #[inline]
    pub fn in_neighbors(&self, v: usize) -> &NodeSet {
        &self.in_adj[v]
    }

    pub fn edge_count(&self) -> usize {
        self.out_adj.iter().map(NodeSet::count_ones).sum()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        self.in_adj.iter().map(NodeSet::count_ones).collect()
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        self.out_adj.iter().map(NodeSet::count_ones).collect()
    }

    pub fn min_in_degree(&self) -> usize {
        self.in_adj.iter().map(NodeSet::count_ones).min().unwrap_or(0)
    }

    /// Intermediate nodes on two-hop paths `u -> w -> v`.
    pub fn two_hop_set(&self, u: usize, v: usize) -> Result<NodeSet, GraphError> {
        self.check_node(u)?;
        self.check_node(v)?;
        if u == v {
            return Err(GraphError::SameEndpoints(u));
        }
        let mut m = self.out_adj[u].clone();
        m.and_assign(&self.in_adj[v]);
        Ok(m)
    }

    /// Evaluates the degree and two-hop concentration events at slack `delta`.
    ///
    /// The first flag holds iff every in- and out-degree lies strictly inside
    /// `((1-delta)np, (1+delta)np)`; the second iff every two-hop set has more
    /// than `(1-delta)(n-2)p^2` members.
    pub fn concentration_check(&self, delta: f64, p: f64) -> (bool, bool) {
        let n = self.n as f64;
        let (lo, hi) = ((1.0 - delta) * n * p, (1.0 + delta) * n * p);
        let inside = |d: usize| (d as f64) > lo && (d as f64) < hi;
        let e1 = self.in_degrees().into_iter().all(inside)
            && self.out_degrees().into_iter().all(inside);

        let threshold = (1.0 - delta) * (n - 2.0) * p * p;
        let e2 = (0..self.n).all(|u| {
            (0..self.n)
                .filter(|&v| v != u)
                .all(|v| self.out_adj[u].and_count(&self.in_adj[v]) as f64 > threshold)
        });
        (e1, e2)
    }

    fn check_node(&self, node: usize) -> Result<(), GraphError> {
        if node >= self.n {
            Err(GraphError::NodeOutOfRange { node, n: self.n })
        } else {
            Ok(())
        }
    }

    /// Plain-text fixture format: `n` on the first line, then one line per
    /// node with its out-neighbours ascending and space-separated.
    pub fn to_adjacency_text(&self) -> String {
        let mut out = format!("{}\n", self.n);
        for row in &self.out_adj {
            let line: Vec<String> = row.iter_ones().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
        out
    }

    pub fn from_adjacency_text(text: &str) -> Result<Self, GraphError> {
        let mut lines = text.lines();
        let header = lines.next().ok_or(GraphError::Parse {
            line: 1,
            message: "missing node count".into(),
        })?;
        let n: usize = header.trim().parse().map_err(|_| GraphError::Parse {
            line: 1,
            message: format!("invalid node count {:?}", header.trim()),
        })?;
        let mut lists = Vec::with_capacity(n);
        for i in 0..n {
            let line_no = i + 2;
            let line = lines.next().ok_or_else(|| GraphError::Parse {
                line: line_no,
                message: format!("expected {n} adjacency lines, found {i}"),
            })?;
            let list = line
                .split_whitespace()
                .map(|tok| {
                    tok.parse::<usize>().map_err(|_| GraphError::Parse {
                        line: line_no,
                        message: format!("invalid node index {tok:?}"),
                    })
                })
                .collect::<Result<Vec<_>, _>>()?;
            lists.push(list);
        }
        if let Some((extra, line)) = lines.enumerate().find(|(_, l)| !l.trim().is_empty()) {
            return Err(GraphError::Parse {
                line: n + 2 + extra,
                message: format!("unexpected trailing content {:?}", line.trim()),
            });
        }
        Self::from_adjacency(&lists)
    }
}

fn check_probability(p: f64) -> Result<(), GraphError> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(GraphError::InvalidProbability(p))
    }
}

/// Samples a directed G(n, p) without self-loops.
///
/// Ordered pairs are drawn lexicographically, so a seeded generator yields a
/// reproducible graph.
pub fn generate_er<R: Rng + ?Sized>(
    n: usize,
    p: f64,
    rng: &mut R,
) -> Result<DirectedGraph, GraphError> {
    if n == 0 {
        return Err(GraphError::Empty);
    }
    check_probability(p)?;
    let coin = Bernoulli::new(p).map_err(|_| GraphError::InvalidProbability(p))?;
    let mut g = DirectedGraph::empty(n);
    for u in 0..n {
        for v in 0..n {
            if u != v && coin.sample(rng) {
                g.insert_edge(u, v);
            }
        }
    }
    Ok(g)
}

/// One step of the On-Off edge process: each ordered pair keeps its state
/// with probability `1 - alpha` and is otherwise redrawn as Bernoulli(`p`).
pub fn evolve<R: Rng + ?Sized>(
    g: &DirectedGraph,
    p: f64,
    alpha: f64,
    rng: &mut R,
) -> Result<DirectedGraph, GraphError> {
    check_probability(p)?;
    check_probability(alpha)?;
    if alpha == 0.0 {
        return Ok(g.clone());
    }
    let switch_on = alpha * p;
    let mut next = DirectedGraph::empty(g.n);
    for u in 0..g.n {
        for v in 0..g.n {
            if u == v {
                continue;
            }
            // One uniform draw: [0, alpha*p) resample on, [alpha*p, alpha) resample off.
            let x: f64 = rng.random();
            let present = if x < switch_on {
                true
            } else if x < alpha {
                false
            } else {
                g.has_edge(u, v)
            };
            if present {
                next.insert_edge(u, v);
            }
        }
    }
    Ok(next)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProcessMode {
    Static,
    Markov { alpha: f64 },
}

/// Sequence of communication graphs, one per round.
#[derive(Debug, Clone)]
pub struct GraphProcess {
    mode: ProcessMode,
    p: f64,
    current: DirectedGraph,
}

impl GraphProcess {
    pub fn fixed(graph: DirectedGraph) -> Self {
        Self {
            mode: ProcessMode::Static,
            p: 0.0,
            current: graph,
        }
    }

    /// Markov process started from `initial`; `alpha = 0` is treated as static.
    pub fn markov(initial: DirectedGraph, p: f64, alpha: f64) -> Result<Self, GraphError> {
        check_probability(p)?;
        check_probability(alpha)?;
        let mode = if alpha == 0.0 {
            ProcessMode::Static
        } else {
            ProcessMode::Markov { alpha }
        };
        Ok(Self {
            mode,
            p,
            current: initial,
        })
    }

    /// Draws the initial graph from G(n, p), i.e. the stationary law.
    pub fn stationary<R: Rng + ?Sized>(
        n: usize,
        p: f64,
        alpha: f64,
        rng: &mut R,
    ) -> Result<Self, GraphError> {
        let initial = generate_er(n, p, rng)?;
        Self::markov(initial, p, alpha)
    }

    pub fn mode(&self) -> ProcessMode {
        self.mode
    }

    pub fn is_static(&self) -> bool {
        self.mode == ProcessMode::Static
    }

    pub fn n(&self) -> usize {
        self.current.n()
    }

    pub fn current(&self) -> &DirectedGraph {
        &self.current
    }

    /// Moves to the next round's graph.
    pub fn advance<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        if let ProcessMode::Markov { alpha } = self.mode {
            self.current = evolve(&self.current, self.p, alpha, rng)
                .expect("process parameters validated at construction");
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn extreme_probabilities() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let full = generate_er(12, 1.0, &mut rng).unwrap();
        assert_eq!(full, DirectedGraph::complete(12));
        assert!(full.in_degrees().iter().all(|&d| d == 11));
        let none = generate_er(12, 0.0, &mut rng).unwrap();
        assert_eq!(none.edge_count(), 0);
        assert!(generate_er(3, 1.5, &mut rng).is_err());
        assert!(generate_er(0, 0.5, &mut rng).is_err());
    }

    #[test]
    fn mean_in_degree_large_graph() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = generate_er(1000, 0.4, &mut rng).unwrap();
        let mean = g.in_degrees().iter().sum::<usize>() as f64 / 1000.0;
        assert!((mean - 399.6).abs() <= 0.05 * 399.6, "mean in-degree {mean}");
    }

    #[test]
    fn degree_examples() {
        assert_eq!(DirectedGraph::complete(5).in_degrees(), vec![4; 5]);
        assert_eq!(DirectedGraph::empty(5).in_degrees(), vec![0; 5]);
        let c = DirectedGraph::cycle(3);
        assert_eq!(c.in_degrees(), vec![1; 3]);
        assert_eq!(c.out_degrees(), vec![1; 3]);
    }

    #[test]
    fn two_hop_examples() {
        let k = DirectedGraph::complete(6);
        assert_eq!(k.two_hop_set(0, 1).unwrap().count_ones(), 4);
        assert!(DirectedGraph::empty(6).two_hop_set(0, 1).unwrap().is_zero());
        let c = DirectedGraph::cycle(3);
        let m = c.two_hop_set(0, 2).unwrap();
        assert_eq!(m.iter_ones().collect::<Vec<_>>(), vec![1]);
        assert!(matches!(c.two_hop_set(1, 1), Err(GraphError::SameEndpoints(1))));
    }

    #[test]
    fn concentration_examples() {
        // n = 10 sits on the open boundary: n - 1 = 0.9 n.
        assert!(!DirectedGraph::complete(10).concentration_check(0.1, 1.0).0);
        assert_eq!(DirectedGraph::complete(20).concentration_check(0.1, 1.0), (true, true));
        assert_eq!(DirectedGraph::empty(10).concentration_check(0.1, 0.4), (false, false));
    }

    #[test]
    fn evolve_alpha_zero_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = generate_er(30, 0.3, &mut rng).unwrap();
        assert_eq!(evolve(&g, 0.3, 0.0, &mut rng).unwrap(), g);
    }

    #[test]
    fn static_process_never_changes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut proc = GraphProcess::stationary(20, 0.4, 0.0, &mut rng).unwrap();
        let before = proc.current().clone();
        for _ in 0..5 {
            proc.advance(&mut rng);
        }
        assert!(proc.is_static());
        assert_eq!(proc.current(), &before);
    }

    #[test]
    fn adjacency_text_roundtrip_and_errors() {
        let g = DirectedGraph::from_edges(4, &[(0, 1), (0, 3), (2, 1), (3, 0)]).unwrap();
        let text = g.to_adjacency_text();
        assert_eq!(text, "4\n1 3\n\n1\n0\n");
        assert_eq!(DirectedGraph::from_adjacency_text(&text).unwrap(), g);
        assert!(matches!(
            DirectedGraph::from_adjacency_text("2\n0\n\n"),
            Err(GraphError::SelfLoop(0))
        ));
        assert!(matches!(
            DirectedGraph::from_adjacency_text("3\n1\nx\n"),
            Err(GraphError::Parse { line: 3, .. })
        ));
        assert!(DirectedGraph::from_adjacency_text("2\n1\n").is_err());
    }
}

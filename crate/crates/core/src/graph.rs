//! Simple undirected graphs over dense vertex ids `0..n`.
//!
//! A [`Graph`] is immutable once built. The edge list is kept sorted
//! lexicographically and every vertex carries a sorted neighbor list, so
//! both "is `uv` an edge" and "walk the neighbors of `x`" are cheap.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// An unordered vertex pair stored with `u < v`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
}

impl Edge {
    /// Builds the normalized edge for `{a, b}`. Panics on a loop.
    pub fn new(a: usize, b: usize) -> Edge {
        assert_ne!(a, b, "self-loop {a}-{a}");
        if a < b {
            Edge { u: a, v: b }
        } else {
            Edge { u: b, v: a }
        }
    }

    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.u, self.v)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({u},{v}) has an endpoint outside 0..{n}")]
    EndpointOutOfRange { u: usize, v: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    adj: Vec<Vec<usize>>,
}

impl Graph {
    pub fn empty(n: usize) -> Graph {
        Graph {
            n,
            edges: Vec::new(),
            adj: vec![Vec::new(); n],
        }
    }

    /// Normalizes `pairs` into a graph: orientation is fixed to `u < v`,
    /// duplicates collapse, loops and out-of-range endpoints are rejected.
    pub fn from_edge_list<I>(n: usize, pairs: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut edges = Vec::new();
        for (a, b) in pairs {
            if a >= n || b >= n {
                return Err(GraphError::EndpointOutOfRange { u: a, v: b, n });
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            edges.push(Edge::new(a, b));
        }
        Ok(Graph::from_normalized(n, edges))
    }

    fn from_normalized(n: usize, mut edges: Vec<Edge>) -> Graph {
        edges.sort_unstable();
        edges.dedup();
        let mut adj = vec![Vec::new(); n];
        for e in &edges {
            adj[e.u].push(e.v);
            adj[e.v].push(e.u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Graph { n, edges, adj }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, x: usize) -> &[usize] {
        &self.adj[x]
    }

    pub fn degree(&self, x: usize) -> usize {
        self.adj[x].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n && b < self.n && self.adj[a].binary_search(&b).is_ok()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    /// Minimum degree, or `None` for the graph without vertices.
    pub fn min_degree(&self) -> Option<usize> {
        self.adj.iter().map(Vec::len).min()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Induced subgraph on `keep`. Returns the graph together with the
    /// order-preserving map from new ids back to old ids.
    pub fn induced_subgraph(&self, keep: &[usize]) -> (Graph, Vec<usize>) {
        let mut old_ids: Vec<usize> = keep.iter().copied().filter(|&v| v < self.n).collect();
        old_ids.sort_unstable();
        old_ids.dedup();
        let mut new_id = vec![usize::MAX; self.n];
        for (i, &v) in old_ids.iter().enumerate() {
            new_id[v] = i;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| new_id[e.u] != usize::MAX && new_id[e.v] != usize::MAX)
            .map(|e| Edge::new(new_id[e.u], new_id[e.v]))
            .collect();
        (Graph::from_normalized(old_ids.len(), edges), old_ids)
    }

    /// Same vertex set with `removed` edges deleted.
    pub fn without_edges(&self, removed: &[Edge]) -> Graph {
        let mut drop = removed.to_vec();
        drop.sort_unstable();
        let edges = self
            .edges
            .iter()
            .copied()
            .filter(|e| drop.binary_search(e).is_err())
            .collect();
        Graph::from_normalized(self.n, edges)
    }

    /// Graph obtained by renaming vertex `v` to `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> Graph {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge::new(perm[e.u], perm[e.v]))
            .collect();
        Graph::from_normalized(self.n, edges)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for &y in &self.adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        count == self.n
    }

    /// Text edge-list format: `n m` header, then one `u v` line per edge.
    pub fn to_edge_list_text(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.edges.len());
        for e in &self.edges {
            out.push_str(&format!("{} {}\n", e.u, e.v));
        }
        out
    }

    pub fn parse_edge_list_text(text: &str) -> Result<Graph, GraphError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hline, header) = lines.next().ok_or(GraphError::Parse {
            line: 1,
            msg: "missing `n m` header".into(),
        })?;
        let (n, m) = parse_pair(hline, header)?;
        let mut pairs = Vec::with_capacity(m);
        for (line, body) in lines {
            pairs.push(parse_pair(line, body)?);
        }
        if pairs.len() != m {
            return Err(GraphError::Parse {
                line: hline,
                msg: format!("header announces {m} edges, found {}", pairs.len()),
            });
        }
        Graph::from_edge_list(n, pairs)
    }
}

fn parse_pair(line: usize, body: &str) -> Result<(usize, usize), GraphError> {
    let bad = |msg: String| GraphError::Parse { line, msg };
    let mut it = body.split_whitespace();
    let mut next = || -> Result<usize, GraphError> {
        let tok = it
            .next()
            .ok_or_else(|| bad(format!("expected two integers, got `{body}`")))?;
        tok.parse()
            .map_err(|_| bad(format!("not a vertex id: `{tok}`")))
    };
    let a = next()?;
    let b = next()?;
    if it.next().is_some() {
        return Err(bad(format!("trailing tokens in `{body}`")));
    }
    Ok((a, b))
}

pub fn complete_graph(n: usize) -> Graph {
    let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            edges.push(Edge { u, v });
        }
    }
    Graph::from_normalized(n, edges)
}

pub fn cycle_graph(n: usize) -> Graph {
    assert!(n >= 3);
    Graph::from_normalized(n, (0..n).map(|i| Edge::new(i, (i + 1) % n)).collect())
}

pub fn path_graph(n: usize) -> Graph {
    Graph::from_normalized(n, (1..n).map(|i| Edge::new(i - 1, i)).collect())
}

pub fn star_graph(leaves: usize) -> Graph {
    Graph::from_normalized(leaves + 1, (1..=leaves).map(|i| Edge::new(0, i)).collect())
}

/// The Mycielskian of `g`: a copy `x'` of every vertex adjacent to the
/// neighbors of `x`, plus one apex joined to every copy. Raises the
/// chromatic number by one and keeps the graph triangle-free.
pub fn mycielskian(g: &Graph) -> Graph {
    let n = g.n();
    let apex = 2 * n;
    let mut edges = g.edges().to_vec();
    for e in g.edges() {
        edges.push(Edge::new(e.u, n + e.v));
        edges.push(Edge::new(e.v, n + e.u));
    }
    for x in 0..n {
        edges.push(Edge::new(n + x, apex));
    }
    Graph::from_normalized(2 * n + 1, edges)
}

/// Mycielski graph `M_k` with chromatic number `k`: `M_1 = K_1`,
/// `M_2 = K_2`, `M_3 = C_5`, `M_4` the Grötzsch graph, and so on.
pub fn mycielski(k: usize) -> Graph {
    assert!(k >= 1);
    let mut g = complete_graph(1);
    if k >= 2 {
        g = complete_graph(2);
    }
    for _ in 2..k {
        g = mycielskian(&g);
    }
    g
}

/// Uniform random graph with exactly `m` edges on `n` vertices.
/// Random graph on `n` vertices with minimum degree at least `d`: every
/// vertex below `d` is joined to uniformly chosen non-neighbors until no
/// such vertex remains. Requires `d < n`.
pub fn random_min_degree<R: Rng>(n: usize, d: usize, rng: &mut R) -> Graph {
    assert!(d < n, "minimum degree {d} impossible on {n} vertices");
    let mut adj = vec![vec![false; n]; n];
    let mut deg = vec![0usize; n];
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    for &v in &order {
        while deg[v] < d {
            let free: Vec<usize> = (0..n).filter(|&w| w != v && !adj[v][w]).collect();
            let w = free[rng.gen_range(0..free.len())];
            adj[v][w] = true;
            adj[w][v] = true;
            deg[v] += 1;
            deg[w] += 1;
        }
    }
    let pairs = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
    let edges: Vec<Edge> = pairs
        .filter(|&(u, v)| adj[u][v])
        .map(|(u, v)| Edge::new(u, v))
        .collect();
    Graph::from_normalized(n, edges)
}

pub fn random_gnm<R: Rng>(n: usize, m: usize, rng: &mut R) -> Graph {
    let total = n * n.saturating_sub(1) / 2;
    assert!(m <= total, "G({n},{m}) has only {total} possible edges");
    let mut all: Vec<Edge> = complete_graph(n).edges().to_vec();
    all.shuffle(rng);
    all.truncate(m);
    Graph::from_normalized(n, all)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_edge_list_normalizes() {
        let tri = Graph::from_edge_list(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(tri, complete_graph(3));

        let k2 = Graph::from_edge_list(2, [(1, 0)]).unwrap();
        assert_eq!(k2.edges(), &[Edge { u: 0, v: 1 }]);

        let dup = Graph::from_edge_list(4, [(0, 1), (0, 1)]).unwrap();
        assert_eq!(dup.n(), 4);
        assert_eq!(dup.edge_count(), 1);
    }

    #[test]
    fn from_edge_list_rejects_bad_pairs() {
        assert_eq!(
            Graph::from_edge_list(3, [(0, 3)]),
            Err(GraphError::EndpointOutOfRange { u: 0, v: 3, n: 3 })
        );
        assert_eq!(
            Graph::from_edge_list(3, [(2, 2)]),
            Err(GraphError::SelfLoop(2))
        );
    }

    #[test]
    fn induced_subgraph_examples() {
        let (g, map) = complete_graph(4).induced_subgraph(&[0, 1, 2]);
        assert_eq!(g, complete_graph(3));
        assert_eq!(map, vec![0, 1, 2]);

        let (g, map) = path_graph(4).induced_subgraph(&[0, 2, 3]);
        assert_eq!(g.edges(), &[Edge { u: 1, v: 2 }]);
        assert_eq!(map, vec![0, 2, 3]);

        let c5 = cycle_graph(5);
        let (g, map) = c5.induced_subgraph(&[4, 3, 2, 1, 0]);
        assert_eq!(g, c5);
        assert_eq!(map, vec![0, 1, 2, 3, 4]);

        let (g, map) = c5.induced_subgraph(&[]);
        assert_eq!(g.n(), 0);
        assert!(map.is_empty());
    }

    #[test]
    fn degree_examples() {
        let k4 = complete_graph(4);
        assert_eq!(k4.degrees(), vec![3, 3, 3, 3]);
        assert_eq!(k4.min_degree(), Some(3));
        assert_eq!(star_graph(4).degrees(), vec![4, 1, 1, 1, 1]);
        assert_eq!(cycle_graph(5).degrees(), vec![2; 5]);
        assert_eq!(Graph::empty(0).min_degree(), None);
    }

    #[test]
    fn text_format() {
        let g = cycle_graph(4);
        let text = g.to_edge_list_text();
        assert_eq!(text, "4 4\n0 1\n0 3\n1 2\n2 3\n");
        assert_eq!(Graph::parse_edge_list_text(&text).unwrap(), g);

        let err = Graph::parse_edge_list_text("3 2\n0 1\n1 x\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 3, .. }));
        let err = Graph::parse_edge_list_text("3 2\n0 1\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 1, .. }));
    }

    #[test]
    fn mycielski_sizes() {
        let sizes: Vec<_> = (2..=6).map(|k| mycielski(k).n()).collect();
        assert_eq!(sizes, vec![2, 5, 11, 23, 47]);
        assert_eq!(mycielski(4).edge_count(), 20);
        // M_3 is the 5-cycle
        assert!(mycielski(3).degrees().iter().all(|&d| d == 2));
    }
}

//! Exact vertex coloring, vertex-critical subgraphs and Grundy (first-fit
//! closed) ordered colorings.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

/// Default node budget for the exact colorability search.
pub const DEFAULT_COLORING_BUDGET: u64 = 50_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ColoringError {
    #[error("coloring search exceeded {0} nodes")]
    Timeout(u64),
    #[error("classes do not partition the vertex set: {0}")]
    NotAPartition(String),
    #[error("coloring is not proper: edge ({0},{1}) is monochromatic")]
    NotProper(usize, usize),
    #[error("graph has chromatic number {actual}, expected {expected}")]
    WrongChromaticNumber { expected: usize, actual: usize },
    #[error("peel_tail({i}) on a coloring with {k} classes")]
    BadPeel { i: usize, k: usize },
}

/// Ordered color classes `A_1, ..., A_k` over the vertices of a host graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderedColoring {
    pub classes: Vec<Vec<usize>>,
}

impl OrderedColoring {
    /// Groups vertices by color index; empty colors are dropped and the
    /// remaining ones keep their relative order.
    pub fn from_colors(colors: &[usize]) -> OrderedColoring {
        let top = colors.iter().copied().max().map_or(0, |c| c + 1);
        let mut classes = vec![Vec::new(); top];
        for (v, &c) in colors.iter().enumerate() {
            classes[c].push(v);
        }
        classes.retain(|c| !c.is_empty());
        OrderedColoring { classes }
    }

    pub fn k(&self) -> usize {
        self.classes.len()
    }

    /// Class index (0-based) of every vertex, or an error if the classes do
    /// not partition `0..n`.
    pub fn color_of(&self, n: usize) -> Result<Vec<usize>, ColoringError> {
        let mut color = vec![usize::MAX; n];
        for (i, class) in self.classes.iter().enumerate() {
            for &v in class {
                if v >= n {
                    return Err(ColoringError::NotAPartition(format!(
                        "vertex {v} out of range"
                    )));
                }
                if color[v] != usize::MAX {
                    return Err(ColoringError::NotAPartition(format!(
                        "vertex {v} in two classes"
                    )));
                }
                color[v] = i;
            }
        }
        if let Some(v) = color.iter().position(|&c| c == usize::MAX) {
            return Err(ColoringError::NotAPartition(format!(
                "vertex {v} uncolored"
            )));
        }
        Ok(color)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("coloring serializes")
    }
}

fn check_proper(g: &Graph, color: &[usize]) -> Result<(), ColoringError> {
    match g.edges().iter().find(|e| color[e.u] == color[e.v]) {
        Some(e) => Err(ColoringError::NotProper(e.u, e.v)),
        None => Ok(()),
    }
}

/// DSATUR greedy coloring. Returns a color index per vertex.
pub fn greedy_coloring(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut color = vec![usize::MAX; n];
    let mut sat: Vec<Vec<bool>> = vec![Vec::new(); n];
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| color[v] == usize::MAX)
            .max_by_key(|&v| {
                let s = sat[v].iter().filter(|&&b| b).count();
                (s, g.degree(v), std::cmp::Reverse(v))
            })
            .expect("uncolored vertex");
        let c = (0..)
            .find(|&c| !sat[v].get(c).copied().unwrap_or(false))
            .unwrap();
        color[v] = c;
        for &w in g.neighbors(v) {
            if sat[w].len() <= c {
                sat[w].resize(c + 1, false);
            }
            sat[w][c] = true;
        }
    }
    color
}

/// Size of a greedily grown clique, a lower bound on the chromatic number.
fn greedy_clique(g: &Graph) -> usize {
    let mut best = usize::from(g.n() > 0);
    for start in 0..g.n() {
        let mut clique = vec![start];
        let mut cand: Vec<usize> = g.neighbors(start).to_vec();
        cand.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));
        for v in cand {
            if clique.iter().all(|&c| g.has_edge(c, v)) {
                clique.push(v);
            }
        }
        best = best.max(clique.len());
    }
    best
}

struct ColorSearch<'a> {
    g: &'a Graph,
    c: usize,
    color: Vec<usize>,
    // forbid[v][col] = number of neighbors of v with color col
    forbid: Vec<Vec<u32>>,
    nodes: u64,
    budget: u64,
}

impl ColorSearch<'_> {
    fn pick(&self) -> Option<usize> {
        let mut best: Option<(usize, usize, usize)> = None;
        for v in 0..self.g.n() {
            if self.color[v] != usize::MAX {
                continue;
            }
            let sat = self.forbid[v].iter().filter(|&&x| x > 0).count();
            let free_deg = self
                .g
                .neighbors(v)
                .iter()
                .filter(|&&w| self.color[w] == usize::MAX)
                .count();
            let key = (sat, free_deg, v);
            let better = match best {
                None => true,
                Some((s, d, _)) => (sat, free_deg) > (s, d),
            };
            if better {
                best = Some(key);
            }
        }
        best.map(|(_, _, v)| v)
    }

    fn assign(&mut self, v: usize, col: usize, delta: i32) {
        for &w in self.g.neighbors(v) {
            let slot = &mut self.forbid[w][col];
            *slot = (*slot as i32 + delta) as u32;
        }
    }

    fn solve(&mut self, used: usize) -> Result<bool, ColoringError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(ColoringError::Timeout(self.budget));
        }
        let Some(v) = self.pick() else {
            return Ok(true);
        };
        if self.forbid[v].iter().filter(|&&x| x > 0).count() >= self.c {
            return Ok(false);
        }
        // colors beyond `used` are interchangeable: try only the first one
        let limit = (used + 1).min(self.c);
        for col in 0..limit {
            if self.forbid[v][col] > 0 {
                continue;
            }
            self.color[v] = col;
            self.assign(v, col, 1);
            if self.solve(used.max(col + 1))? {
                return Ok(true);
            }
            self.assign(v, col, -1);
            self.color[v] = usize::MAX;
        }
        Ok(false)
    }
}

/// Finds a proper coloring with at most `c` colors, or proves none exists.
pub fn find_coloring(
    g: &Graph,
    c: usize,
    budget: u64,
) -> Result<Option<Vec<usize>>, ColoringError> {
    if g.n() == 0 {
        return Ok(Some(Vec::new()));
    }
    if c == 0 {
        return Ok(None);
    }
    let mut s = ColorSearch {
        g,
        c,
        color: vec![usize::MAX; g.n()],
        forbid: vec![vec![0; c]; g.n()],
        nodes: 0,
        budget,
    };
    Ok(if s.solve(0)? { Some(s.color) } else { None })
}

/// Exact chromatic number with a witness coloring.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chromatic {
    pub chi: usize,
    pub witness: Vec<usize>,
}

/// Exact chromatic number by DSATUR branch and bound: a clique gives the
/// lower bound, greedy DSATUR the first upper bound, and the bound is
/// tightened until a colorability test fails. Exceeding `budget` search
/// nodes yields [`ColoringError::Timeout`], never a guess.
pub fn chromatic_number(g: &Graph, budget: u64) -> Result<Chromatic, ColoringError> {
    if g.n() == 0 {
        return Ok(Chromatic {
            chi: 0,
            witness: Vec::new(),
        });
    }
    let lower = greedy_clique(g);
    let mut witness = greedy_coloring(g);
    let mut chi = witness.iter().max().unwrap() + 1;
    while chi > lower {
        match find_coloring(g, chi - 1, budget)? {
            Some(col) => {
                witness = col;
                chi -= 1;
            }
            None => break,
        }
    }
    Ok(Chromatic { chi, witness })
}

/// Largest induced subgraph with minimum degree at least `min_deg`,
/// with the map from new ids to `g`'s ids.
pub fn k_core(g: &Graph, min_deg: usize) -> (Graph, Vec<usize>) {
    let mut alive = vec![true; g.n()];
    let mut deg = g.degrees();
    let mut stack: Vec<usize> = (0..g.n()).filter(|&v| deg[v] < min_deg).collect();
    for &v in &stack {
        alive[v] = false;
    }
    while let Some(v) = stack.pop() {
        for &w in g.neighbors(v) {
            if alive[w] {
                deg[w] -= 1;
                if deg[w] < min_deg {
                    alive[w] = false;
                    stack.push(w);
                }
            }
        }
    }
    let keep: Vec<usize> = (0..g.n()).filter(|&v| alive[v]).collect();
    g.induced_subgraph(&keep)
}

/// Vertex-critical induced subgraph of a `k`-chromatic graph, found by one
/// ascending pass of vertex deletions after trimming to the
/// `(k-1)`-core. Returns the subgraph and its map to `g`'s ids.
pub fn critical_subgraph(
    g: &Graph,
    k: usize,
    budget: u64,
) -> Result<(Graph, Vec<usize>), ColoringError> {
    let chi = chromatic_number(g, budget)?.chi;
    if chi != k {
        return Err(ColoringError::WrongChromaticNumber {
            expected: k,
            actual: chi,
        });
    }
    let (mut h, mut map) = k_core(g, k.saturating_sub(1));
    let mut pos = 0;
    while pos < h.n() {
        let keep: Vec<usize> = (0..h.n()).filter(|&v| v != pos).collect();
        let (without, sub) = h.induced_subgraph(&keep);
        if find_coloring(&without, k - 1, budget)?.is_none() {
            map = sub.iter().map(|&v| map[v]).collect();
            h = without;
        } else {
            pos += 1;
        }
    }
    Ok((h, map))
}

/// `Ok(true)` iff every class is independent and every vertex of `A_i`
/// has a neighbor in each `A_j`, `j < i`. A non-partition is an error.
pub fn check_grundy(g: &Graph, c: &OrderedColoring) -> Result<bool, ColoringError> {
    let color = c.color_of(g.n())?;
    if check_proper(g, &color).is_err() {
        return Ok(false);
    }
    Ok((0..g.n()).all(|v| {
        let mut seen = vec![false; color[v]];
        for &w in g.neighbors(v) {
            if color[w] < color[v] {
                seen[color[w]] = true;
            }
        }
        seen.iter().all(|&b| b)
    }))
}

/// Turns a proper coloring into a Grundy coloring with no more classes:
/// while some vertex misses a lower class, the smallest such vertex moves
/// to the lowest class it has no neighbor in. Empty top classes are
/// dropped at the fixpoint.
pub fn grundy_refine(
    g: &Graph,
    proper: &OrderedColoring,
) -> Result<OrderedColoring, ColoringError> {
    let mut color = proper.color_of(g.n())?;
    check_proper(g, &color)?;
    let k = proper.k();
    loop {
        let mut moved = false;
        for v in 0..g.n() {
            let mut seen = vec![false; color[v]];
            for &w in g.neighbors(v) {
                if color[w] < color[v] {
                    seen[color[w]] = true;
                }
            }
            if let Some(j) = seen.iter().position(|&b| !b) {
                color[v] = j;
                moved = true;
                break;
            }
        }
        if !moved {
            break;
        }
    }
    let mut classes = vec![Vec::new(); k];
    for (v, &c) in color.iter().enumerate() {
        classes[c].push(v);
    }
    while classes.last().is_some_and(Vec::is_empty) {
        classes.pop();
    }
    debug_assert!(classes.iter().all(|c| !c.is_empty()));
    Ok(OrderedColoring { classes })
}

/// The induced graph `G_i` on the top `i` classes, with those classes
/// renumbered `1..=i` and the map from new ids to `g`'s ids.
pub fn peel_tail(
    g: &Graph,
    c: &OrderedColoring,
    i: usize,
) -> Result<(Graph, OrderedColoring, Vec<usize>), ColoringError> {
    let k = c.k();
    if i == 0 || i > k {
        return Err(ColoringError::BadPeel { i, k });
    }
    let keep: Vec<usize> = c.classes[k - i..].iter().flatten().copied().collect();
    let (sub, map) = g.induced_subgraph(&keep);
    let classes = c.classes[k - i..]
        .iter()
        .map(|class| {
            let mut cl: Vec<usize> = class
                .iter()
                .map(|v| map.binary_search(v).unwrap())
                .collect();
            cl.sort_unstable();
            cl
        })
        .collect();
    Ok((sub, OrderedColoring { classes }, map))
}

/// Restricts a coloring of `g` to the vertices `map` (new id -> old id).
pub fn restrict(c: &OrderedColoring, map: &[usize]) -> OrderedColoring {
    let classes = c
        .classes
        .iter()
        .map(|class| {
            class
                .iter()
                .filter_map(|v| map.binary_search(v).ok())
                .collect::<Vec<_>>()
        })
        .filter(|cl| !cl.is_empty())
        .collect();
    OrderedColoring { classes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_graph, cycle_graph, mycielski, path_graph, Graph};

    const B: u64 = DEFAULT_COLORING_BUDGET;

    #[test]
    fn chromatic_examples() {
        assert_eq!(chromatic_number(&complete_graph(5), B).unwrap().chi, 5);
        assert_eq!(chromatic_number(&cycle_graph(5), B).unwrap().chi, 3);
        assert_eq!(chromatic_number(&mycielski(4), B).unwrap().chi, 4);
        assert_eq!(chromatic_number(&Graph::empty(3), B).unwrap().chi, 1);
        assert_eq!(chromatic_number(&Graph::empty(0), B).unwrap().chi, 0);
    }

    #[test]
    fn chromatic_budget_is_reported() {
        assert_eq!(
            chromatic_number(&mycielski(4), 3),
            Err(ColoringError::Timeout(3))
        );
    }

    #[test]
    fn witness_is_proper() {
        let g = mycielski(4);
        let ch = chromatic_number(&g, B).unwrap();
        assert!(check_proper(&g, &ch.witness).is_ok());
        assert_eq!(ch.witness.iter().max().unwrap() + 1, ch.chi);
    }

    #[test]
    fn critical_examples() {
        let k4_pendant =
            Graph::from_edge_list(5, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (3, 4)])
                .unwrap();
        let (h, map) = critical_subgraph(&k4_pendant, 4, B).unwrap();
        assert_eq!(h, complete_graph(4));
        assert_eq!(map, vec![0, 1, 2, 3]);

        let (h, _) = critical_subgraph(&complete_graph(5), 5, B).unwrap();
        assert_eq!(h, complete_graph(5));

        // C_7 plus chord (0,2): the triangle 0-1-2 survives
        let mut pairs: Vec<(usize, usize)> = (0..7).map(|i| (i, (i + 1) % 7)).collect();
        pairs.push((0, 2));
        let g = Graph::from_edge_list(7, pairs).unwrap();
        let (h, map) = critical_subgraph(&g, 3, B).unwrap();
        assert_eq!(h, complete_graph(3));
        assert_eq!(map, vec![0, 1, 2]);

        assert_eq!(
            critical_subgraph(&cycle_graph(6), 3, B),
            Err(ColoringError::WrongChromaticNumber {
                expected: 3,
                actual: 2
            })
        );
    }

    #[test]
    fn grundy_examples() {
        let p3 = path_graph(3);
        let c = OrderedColoring {
            classes: vec![vec![0, 2], vec![1]],
        };
        assert_eq!(grundy_refine(&p3, &c).unwrap(), c);

        let k3 = complete_graph(3);
        let c = OrderedColoring {
            classes: vec![vec![2], vec![0], vec![1]],
        };
        let r = grundy_refine(&k3, &c).unwrap();
        assert_eq!(r, c);
        assert!(check_grundy(&k3, &r).unwrap());

        // P_4 0-1-2-3 with A_1 = {1,3}, A_2 = {0,2}: fine. Swap in a
        // vertex of A_2 with no A_1 neighbor.
        let p4 = path_graph(4);
        let bad = OrderedColoring {
            classes: vec![vec![0, 3], vec![1, 2]],
        };
        assert!(!check_grundy(&p4, &bad).unwrap());
        let bad = OrderedColoring {
            classes: vec![vec![0], vec![1, 3], vec![2]],
        };
        assert!(!check_grundy(&p4, &bad).unwrap());

        let not_partition = OrderedColoring {
            classes: vec![vec![0, 1]],
        };
        assert!(matches!(
            check_grundy(&p4, &not_partition),
            Err(ColoringError::NotAPartition(_))
        ));
    }

    #[test]
    fn peel_tail_examples() {
        let k4 = complete_graph(4);
        let c = OrderedColoring {
            classes: vec![vec![0], vec![1], vec![2], vec![3]],
        };
        let (g, cc, map) = peel_tail(&k4, &c, 4).unwrap();
        assert_eq!(
            (g, cc.clone(), map),
            (k4.clone(), c.clone(), vec![0, 1, 2, 3])
        );
        let (g, cc, map) = peel_tail(&k4, &c, 2).unwrap();
        assert_eq!(g, complete_graph(2));
        assert_eq!(cc.classes, vec![vec![0], vec![1]]);
        assert_eq!(map, vec![2, 3]);
        assert!(peel_tail(&k4, &c, 5).is_err());
    }

    #[test]
    fn k_core_trims_pendants() {
        let g = Graph::from_edge_list(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)]).unwrap();
        let (h, map) = k_core(&g, 2);
        assert_eq!(h, complete_graph(3));
        assert_eq!(map, vec![0, 1, 2]);
    }
}

//! Exhaustive backtracking packer, the oracle for arbitrary families.
//!
//! Trees are placed largest first. Inside a tree, vertices follow BFS order
//! from a maximum-degree root, so every vertex after the root hangs from an
//! already placed parent. A host vertex is a candidate only if it has
//! enough uncolored edges left for the tree vertex's degree.

use serde::Serialize;

use crate::graph::Graph;
use crate::packing::{Embedding, Packing};
use crate::tree::{Tree, TreeFamily};

pub const DEFAULT_SEARCH_BUDGET: u64 = 20_000_000;

const NONE: usize = usize::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Maximum number of placement nodes.
    pub budget: u64,
    /// Skip host vertices that are twins of an already tried untouched
    /// candidate.
    pub twin_pruning: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            budget: DEFAULT_SEARCH_BUDGET,
            twin_pruning: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Sat(Packing),
    Unsat,
    Timeout,
}

impl SearchOutcome {
    pub fn label(&self) -> &'static str {
        match self {
            SearchOutcome::Sat(_) => "SAT",
            SearchOutcome::Unsat => "UNSAT",
            SearchOutcome::Timeout => "TIMEOUT",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub outcome: &'static str,
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub outcome: SearchOutcome,
    pub nodes: u64,
}

/// Placement order of one tree: vertices in BFS order from a root of
/// maximum degree, with each vertex's parent (NONE for the root).
struct Order {
    verts: Vec<usize>,
    parent: Vec<usize>,
}

fn bfs_order(t: &Tree) -> Order {
    let root = (0..t.n())
        .max_by_key(|&v| (t.degree(v), std::cmp::Reverse(v)))
        .unwrap();
    let mut parent = vec![NONE; t.n()];
    let mut seen = vec![false; t.n()];
    let mut verts = vec![root];
    seen[root] = true;
    let mut i = 0;
    while i < verts.len() {
        let v = verts[i];
        let mut kids: Vec<usize> = t
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&w| !seen[w])
            .collect();
        kids.sort_by_key(|&w| (std::cmp::Reverse(t.degree(w)), w));
        for w in kids {
            seen[w] = true;
            parent[w] = v;
            verts.push(w);
        }
        i += 1;
    }
    Order { verts, parent }
}

struct Search<'a> {
    g: &'a Graph,
    n: usize,
    trees: Vec<&'a Tree>,
    orders: Vec<Order>,
    used: Vec<bool>,
    free_deg: Vec<usize>,
    in_image: Vec<bool>,
    emb: Vec<Embedding>,
    twin_open: Vec<usize>,
    twin_closed: Vec<usize>,
    twin_pruning: bool,
    budget: u64,
    nodes: u64,
    aborted: bool,
}

impl Search<'_> {
    fn untouched(&self, h: usize) -> bool {
        self.free_deg[h] == self.g.degree(h) && !self.in_image[h]
    }

    fn set_used(&mut self, a: usize, b: usize, on: bool) {
        self.used[a * self.n + b] = on;
        self.used[b * self.n + a] = on;
        if on {
            self.free_deg[a] -= 1;
            self.free_deg[b] -= 1;
        } else {
            self.free_deg[a] += 1;
            self.free_deg[b] += 1;
        }
    }

    /// Places vertex `pos` of tree `ti`.
    fn place(&mut self, ti: usize, pos: usize) -> bool {
        if ti == self.trees.len() {
            return true;
        }
        if pos == self.orders[ti].verts.len() {
            let verts = self.orders[ti].verts.clone();
            for v in &verts {
                self.in_image[self.emb[ti][*v]] = false;
            }
            if self.place(ti + 1, 0) {
                return true;
            }
            for v in &verts {
                self.in_image[self.emb[ti][*v]] = true;
            }
            return false;
        }
        self.nodes += 1;
        if self.nodes > self.budget {
            self.aborted = true;
            return false;
        }
        let t = self.trees[ti];
        let v = self.orders[ti].verts[pos];
        let need = t.degree(v);
        let p = self.orders[ti].parent[v];
        let cands: Vec<usize> = if p == NONE {
            (0..self.n).filter(|&h| self.free_deg[h] >= need).collect()
        } else {
            let hp = self.emb[ti][p];
            self.g
                .neighbors(hp)
                .iter()
                .copied()
                .filter(|&h| {
                    !self.in_image[h] && !self.used[hp * self.n + h] && self.free_deg[h] >= need
                })
                .collect()
        };
        let mut tried: Vec<usize> = Vec::new();
        for h in cands {
            if self.twin_pruning && self.untouched(h) {
                if tried.iter().any(|&x| {
                    self.twin_open[x] == self.twin_open[h]
                        || self.twin_closed[x] == self.twin_closed[h]
                }) {
                    continue;
                }
                tried.push(h);
            }
            if p != NONE {
                let hp = self.emb[ti][p];
                self.set_used(hp, h, true);
            }
            self.in_image[h] = true;
            self.emb[ti][v] = h;
            if self.place(ti, pos + 1) {
                return true;
            }
            self.emb[ti][v] = NONE;
            self.in_image[h] = false;
            if p != NONE {
                let hp = self.emb[ti][p];
                self.set_used(hp, h, false);
            }
            if self.aborted {
                return false;
            }
        }
        false
    }
}

/// Class ids of the open and closed neighborhood of every vertex; equal
/// ids mean the two vertices can be swapped by a host automorphism.
fn twin_classes(g: &Graph) -> (Vec<usize>, Vec<usize>) {
    let key = |closed: bool| {
        let keys: Vec<Vec<usize>> = (0..g.n())
            .map(|v| {
                let mut k = g.neighbors(v).to_vec();
                if closed {
                    k.push(v);
                    k.sort_unstable();
                }
                k
            })
            .collect();
        let mut ids = vec![0; g.n()];
        for v in 0..g.n() {
            ids[v] = (0..=v).find(|&u| keys[u] == keys[v]).unwrap();
        }
        ids
    };
    (key(false), key(true))
}

/// Decides whether `family` packs into `g` within `opts.budget` nodes.
pub fn pack_exhaustive(g: &Graph, family: &TreeFamily, opts: &SearchOptions) -> SearchResult {
    if family.total_edges() > g.edge_count() {
        return SearchResult {
            outcome: SearchOutcome::Unsat,
            nodes: 0,
        };
    }
    let n = g.n();
    let mut idx: Vec<usize> = (0..family.trees().len()).collect();
    idx.reverse();
    let trees: Vec<&Tree> = idx.iter().map(|&j| &family.trees()[j]).collect();
    let orders = trees.iter().map(|t| bfs_order(t)).collect();
    let (twin_open, twin_closed) = if opts.twin_pruning {
        twin_classes(g)
    } else {
        (Vec::new(), Vec::new())
    };
    let mut s = Search {
        g,
        n,
        emb: trees.iter().map(|t| vec![NONE; t.n()]).collect(),
        trees,
        orders,
        used: vec![false; n * n],
        free_deg: g.degrees(),
        in_image: vec![false; n],
        twin_open,
        twin_closed,
        twin_pruning: opts.twin_pruning,
        budget: opts.budget,
        nodes: 0,
        aborted: false,
    };
    let found = s.place(0, 0);
    let outcome = if found {
        let mut emb = vec![Vec::new(); idx.len()];
        for (pos, &j) in idx.iter().enumerate() {
            emb[j] = std::mem::take(&mut s.emb[pos]);
        }
        SearchOutcome::Sat(Packing::from_embeddings(family, &emb))
    } else if s.aborted {
        SearchOutcome::Timeout
    } else {
        SearchOutcome::Unsat
    };
    SearchResult {
        outcome,
        nodes: s.nodes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::complete_graph;
    use crate::verify::verify_packing;

    #[test]
    fn k3_paths() {
        let f = TreeFamily::new(vec![Tree::path(2), Tree::path(3)]).unwrap();
        let r = pack_exhaustive(&complete_graph(3), &f, &SearchOptions::default());
        let SearchOutcome::Sat(p) = r.outcome else {
            panic!("{:?}", r.outcome)
        };
        assert_eq!(p.edge_count(), 3);
        assert!(verify_packing(&complete_graph(3), &f, &p).ok);
    }

    #[test]
    fn disjoint_edges_unsat() {
        let g = Graph::from_edge_list(4, [(0, 1), (2, 3)]).unwrap();
        let f = TreeFamily::new(vec![Tree::path(2), Tree::path(3)]).unwrap();
        // three edges needed, only two present
        assert_eq!(
            pack_exhaustive(&g, &f, &SearchOptions::default()).outcome,
            SearchOutcome::Unsat
        );
        let g = Graph::from_edge_list(5, [(0, 1), (2, 3), (3, 4)]).unwrap();
        let f = TreeFamily::new(vec![Tree::path(2), Tree::path(3)]).unwrap();
        assert!(matches!(
            pack_exhaustive(&g, &f, &SearchOptions::default()).outcome,
            SearchOutcome::Sat(_)
        ));
        let g = Graph::from_edge_list(6, [(0, 1), (2, 3), (4, 5)]).unwrap();
        assert_eq!(
            pack_exhaustive(&g, &f, &SearchOptions::default()).outcome,
            SearchOutcome::Unsat
        );
    }

    #[test]
    fn timeout_is_not_unsat() {
        let f = TreeFamily::new((2..=7).map(Tree::path).collect()).unwrap();
        let r = pack_exhaustive(
            &complete_graph(7),
            &f,
            &SearchOptions {
                budget: 3,
                twin_pruning: false,
            },
        );
        assert_eq!(r.outcome, SearchOutcome::Timeout);
    }

    #[test]
    fn twin_pruning_agrees() {
        let f = TreeFamily::new(vec![
            Tree::path(2),
            Tree::star(3),
            Tree::path(4),
            Tree::star(5),
        ])
        .unwrap();
        for twin in [false, true] {
            let r = pack_exhaustive(
                &complete_graph(5),
                &f,
                &SearchOptions {
                    budget: 1_000_000,
                    twin_pruning: twin,
                },
            );
            assert_eq!(r.outcome.label(), "SAT");
        }
    }
}

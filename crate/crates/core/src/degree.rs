//! Packers for hosts with a minimum-degree or an average-degree guarantee.
//!
//! The minimum-degree packer embeds `T_k, ..., T_2` one at a time into the
//! residual graph, keeping each tree away from the layered low-degree sets
//! `B_1, B_2, ...` so that deeper tree levels still find room. The
//! average-degree packer peels the host down to a dense core, embeds the
//! largest remaining tree greedily there, and repeats with `k - 1`.

use num_rational::Rational64;
use serde::Serialize;
use thiserror::Error;

use crate::graph::{Edge, Graph};
use crate::packing::{Embedding, Packing};
use crate::search::{pack_exhaustive, SearchOptions, SearchOutcome};
use crate::tree::{Tree, TreeFamily};

const NONE: usize = usize::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DegreeError {
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("could not embed T_{order}: level {level} found no vertex outside B_1..B_{layer}")]
    Starved {
        order: usize,
        level: usize,
        layer: usize,
    },
    #[error("could not embed T_{order}: {detail}")]
    Embed { order: usize, detail: String },
    #[error("residual bound broken after T_{order}: {detail}")]
    Residual { order: usize, detail: String },
    #[error("{levelwise}; exhaustive search: {outcome} after {nodes} nodes")]
    Fallback {
        levelwise: String,
        outcome: &'static str,
        nodes: u64,
    },
}

/// Layers `B_1, ..., B_k` of low-degree vertices of a residual graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BSets {
    pub k: usize,
    pub layers: Vec<Vec<usize>>,
}

impl BSets {
    /// `|B_1 ∪ ... ∪ B_i|`.
    pub fn union_size(&self, i: usize) -> usize {
        self.layers[..i].iter().map(Vec::len).sum()
    }

    pub fn total(&self) -> usize {
        self.union_size(self.layers.len())
    }

    /// `k^(k-1) (k^2 - k)`, the size bound on `B` when at most `C(k,2)`
    /// edges were removed from a graph of minimum degree `k - 1`.
    pub fn bound(&self) -> u128 {
        let k = self.k as u128;
        k.pow(self.k.saturating_sub(1) as u32) * (k * k - k)
    }

    /// Layer index (1-based) of every vertex, 0 for vertices outside `B`.
    pub fn layer_of(&self, n: usize) -> Vec<usize> {
        let mut out = vec![0; n];
        for (i, layer) in self.layers.iter().enumerate() {
            for &v in layer {
                out[v] = i + 1;
            }
        }
        out
    }
}

/// `B_1` holds the vertices of degree below `k - 1`; `B_i` holds the
/// neighbors of `U = B_1 ∪ ... ∪ B_{i-1}` with fewer than `k - 1`
/// neighbors outside `U`.
pub fn compute_b_sets(gp: &Graph, k: usize) -> BSets {
    let n = gp.n();
    let need = k.saturating_sub(1);
    let mut in_u = vec![false; n];
    let mut layers = Vec::with_capacity(k);
    let first: Vec<usize> = (0..n).filter(|&v| gp.degree(v) < need).collect();
    for &v in &first {
        in_u[v] = true;
    }
    layers.push(first);
    for _ in 2..=k {
        let layer: Vec<usize> = (0..n)
            .filter(|&v| {
                !in_u[v]
                    && gp.neighbors(v).iter().any(|&w| in_u[w])
                    && gp.neighbors(v).iter().filter(|&&w| !in_u[w]).count() < need
            })
            .collect();
        for &v in &layer {
            in_u[v] = true;
        }
        layers.push(layer);
    }
    BSets { k, layers }
}

/// Tree vertices grouped by distance from `root`, each with its parent.
fn levels(t: &Tree, root: usize) -> (Vec<Vec<usize>>, Vec<usize>) {
    let mut parent = vec![NONE; t.n()];
    let mut seen = vec![false; t.n()];
    seen[root] = true;
    let mut out = vec![vec![root]];
    loop {
        let mut next = Vec::new();
        for &v in out.last().unwrap() {
            for &w in t.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = v;
                    next.push(w);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        out.push(next);
    }
    (out, parent)
}

/// Embeds `t` (at most `k` vertices) into `gp`, rooted at a center of `t`:
/// the root goes outside `B`, and level `i` goes to unused neighbors of the
/// parent's image outside `B_1 ∪ ... ∪ B_{k-i}`. Choices are greedy by
/// ascending id; every root outside `B` is tried before giving up.
pub fn embed_tree_levelwise(
    gp: &Graph,
    t: &Tree,
    b: &BSets,
    k: usize,
) -> Result<Embedding, DegreeError> {
    let order = t.n();
    if order > k {
        return Err(DegreeError::Precondition(format!(
            "tree on {order} vertices exceeds k = {k}"
        )));
    }
    let layer_of = b.layer_of(gp.n());
    let (lv, parent) = levels(t, t.centers()[0]);
    let roots: Vec<usize> = (0..gp.n()).filter(|&v| layer_of[v] == 0).collect();
    let mut worst = DegreeError::Starved {
        order,
        level: 0,
        layer: b.layers.len(),
    };
    let mut deepest = 0;
    for &r in &roots {
        let mut emb = vec![NONE; order];
        let mut used = vec![false; gp.n()];
        emb[lv[0][0]] = r;
        used[r] = true;
        let mut failed = None;
        'levels: for (i, level) in lv.iter().enumerate().skip(1) {
            let avoid = k.saturating_sub(i);
            for &v in level {
                let hp = emb[parent[v]];
                let pick = gp
                    .neighbors(hp)
                    .iter()
                    .copied()
                    .find(|&h| !used[h] && (layer_of[h] == 0 || layer_of[h] > avoid));
                match pick {
                    Some(h) => {
                        emb[v] = h;
                        used[h] = true;
                    }
                    None => {
                        failed = Some((i, avoid));
                        break 'levels;
                    }
                }
            }
        }
        match failed {
            None => return Ok(emb),
            Some((level, layer)) if level > deepest || deepest == 0 => {
                deepest = level;
                worst = DegreeError::Starved {
                    order,
                    level,
                    layer,
                };
            }
            Some(_) => {}
        }
    }
    Err(worst)
}

/// One tree placed by [`pack_min_degree`] and the B-sets it had to avoid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinDegreeStep {
    pub order: usize,
    pub removed_before: usize,
    pub layer_sizes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinDegreeRun {
    pub packing: Packing,
    pub steps: Vec<MinDegreeStep>,
    /// Set when the levelwise embedding starved and the exhaustive search
    /// produced the packing instead.
    pub fallback: Option<String>,
}

/// Packs `T_k, ..., T_2` into `g` (minimum degree at least `k - 1`) one
/// tree at a time, recomputing the B-sets on the residual graph before
/// each tree. If a tree starves and `fallback` is a node budget, the whole
/// family is handed to the exhaustive search.
pub fn pack_min_degree(
    g: &Graph,
    family: &TreeFamily,
    fallback: Option<u64>,
) -> Result<MinDegreeRun, DegreeError> {
    match pack_levelwise(g, family) {
        Err(e @ (DegreeError::Starved { .. } | DegreeError::Embed { .. }))
            if fallback.is_some() =>
        {
            let budget = fallback.unwrap();
            let res = pack_exhaustive(
                g,
                family,
                &SearchOptions {
                    budget,
                    twin_pruning: false,
                },
            );
            match res.outcome {
                SearchOutcome::Sat(packing) => Ok(MinDegreeRun {
                    packing,
                    steps: Vec::new(),
                    fallback: Some(e.to_string()),
                }),
                other => Err(DegreeError::Fallback {
                    levelwise: e.to_string(),
                    outcome: other.label(),
                    nodes: res.nodes,
                }),
            }
        }
        other => other,
    }
}

fn pack_levelwise(g: &Graph, family: &TreeFamily) -> Result<MinDegreeRun, DegreeError> {
    let k = family.k();
    if g.n() < k {
        return Err(DegreeError::Precondition(format!(
            "host has {} vertices, fewer than k = {k}",
            g.n()
        )));
    }
    let delta = g.min_degree().unwrap_or(0);
    if delta + 1 < k {
        return Err(DegreeError::Precondition(format!(
            "minimum degree {delta} is below k - 1 = {}",
            k - 1
        )));
    }
    let mut residual = g.clone();
    let mut emb: Vec<Embedding> = vec![Vec::new(); family.trees().len()];
    let mut steps = Vec::new();
    let mut removed = 0;
    for order in (2..=k).rev() {
        let t = family.get(order);
        let b = compute_b_sets(&residual, k);
        steps.push(MinDegreeStep {
            order,
            removed_before: removed,
            layer_sizes: b.layers.iter().map(Vec::len).collect(),
        });
        let e = embed_tree_levelwise(&residual, t, &b, k)?;
        let used: Vec<Edge> = t
            .edges()
            .iter()
            .map(|x| Edge::new(e[x.u], e[x.v]))
            .collect();
        residual = residual.without_edges(&used);
        removed += used.len();
        emb[order - 2] = e;
    }
    Ok(MinDegreeRun {
        packing: Packing::from_embeddings(family, &emb),
        steps,
        fallback: None,
    })
}

/// Result of iterated peeling: the remaining graph, its map to the input
/// ids, and the average degree before the first round and after each
/// round that left a nonempty graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Peeled {
    pub graph: Graph,
    pub map: Vec<usize>,
    pub averages: Vec<Rational64>,
}

fn average_degree(g: &Graph) -> Rational64 {
    Rational64::new(2 * g.edge_count() as i64, g.n() as i64)
}

/// Removes, round by round, every vertex of degree below `threshold`
/// until none is left.
pub fn peel(g: &Graph, threshold: Rational64) -> Peeled {
    let mut cur = g.clone();
    let mut map: Vec<usize> = (0..g.n()).collect();
    let mut averages = Vec::new();
    if cur.n() > 0 {
        averages.push(average_degree(&cur));
    }
    loop {
        let keep: Vec<usize> = (0..cur.n())
            .filter(|&v| Rational64::from_integer(cur.degree(v) as i64) >= threshold)
            .collect();
        if keep.len() == cur.n() {
            break;
        }
        let (next, sub) = cur.induced_subgraph(&keep);
        map = sub.iter().map(|&v| map[v]).collect();
        cur = next;
        if cur.n() == 0 {
            break;
        }
        averages.push(average_degree(&cur));
    }
    Peeled {
        graph: cur,
        map,
        averages,
    }
}

/// Greedy embedding of `t` into `h`: BFS order from a center, each child
/// on the first unused neighbor of its parent's image. Roots are tried in
/// ascending id.
pub fn embed_greedy(h: &Graph, t: &Tree) -> Option<Embedding> {
    let (lv, parent) = levels(t, t.centers()[0]);
    'roots: for r in 0..h.n() {
        let mut emb = vec![NONE; t.n()];
        let mut used = vec![false; h.n()];
        emb[lv[0][0]] = r;
        used[r] = true;
        for &v in lv.iter().skip(1).flatten() {
            match h
                .neighbors(emb[parent[v]])
                .iter()
                .copied()
                .find(|&x| !used[x])
            {
                Some(x) => {
                    emb[v] = x;
                    used[x] = true;
                }
                None => continue 'roots,
            }
        }
        return Some(emb);
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AvgStrategy {
    /// Peel to minimum degree `(k-1)/2`, then embed greedily.
    #[default]
    Peel,
    /// Embed each tree greedily into the whole residual graph.
    Chain,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AvgStep {
    pub order: usize,
    pub k: usize,
    pub peeled_n: usize,
    pub residual_edges: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AvgDegreeRun {
    pub packing: Packing,
    pub steps: Vec<AvgStep>,
}

/// Packs `T_2..T_s` (the family) into `g` with at least `(k-1)n/2` edges,
/// `2s <= k <= n`. After placing `T_i` the residual must keep at least
/// `(k'-2)n/2` edges, `k'` being the current value of `k`.
pub fn pack_avg_degree(
    g: &Graph,
    family: &TreeFamily,
    k: usize,
    strategy: AvgStrategy,
) -> Result<AvgDegreeRun, DegreeError> {
    let s = family.k();
    let n = g.n();
    if 2 * s > k {
        return Err(DegreeError::Precondition(format!(
            "s = {s} exceeds k/2 for k = {k}"
        )));
    }
    if k > n {
        return Err(DegreeError::Precondition(format!(
            "k = {k} exceeds n = {n}"
        )));
    }
    if 2 * g.edge_count() < (k - 1) * n {
        return Err(DegreeError::Precondition(format!(
            "{} edges, fewer than (k-1)n/2 = {}/2",
            g.edge_count(),
            (k - 1) * n
        )));
    }
    let mut residual = g.clone();
    let mut emb: Vec<Embedding> = vec![Vec::new(); family.trees().len()];
    let mut steps = Vec::new();
    for order in (2..=s).rev() {
        let kc = k - (s - order);
        let t = family.get(order);
        let (e, peeled_n) = match strategy {
            AvgStrategy::Peel => {
                let p = peel(&residual, Rational64::new(kc as i64 - 1, 2));
                let local = embed_greedy(&p.graph, t).ok_or_else(|| DegreeError::Embed {
                    order,
                    detail: format!(
                        "peeled graph on {} vertices has no greedy embedding",
                        p.graph.n()
                    ),
                })?;
                (
                    local.into_iter().map(|v| p.map[v]).collect::<Vec<_>>(),
                    p.graph.n(),
                )
            }
            AvgStrategy::Chain => {
                let e = embed_greedy(&residual, t).ok_or_else(|| DegreeError::Embed {
                    order,
                    detail: "no greedy embedding into the residual graph".into(),
                })?;
                (e, n)
            }
        };
        let used: Vec<Edge> = t
            .edges()
            .iter()
            .map(|x| Edge::new(e[x.u], e[x.v]))
            .collect();
        residual = residual.without_edges(&used);
        let m = residual.edge_count();
        if 2 * m < (kc - 2) * n {
            return Err(DegreeError::Residual {
                order,
                detail: format!(
                    "{m} edges left, need (k-2)n/2 = {}/2 with k = {kc}",
                    (kc - 2) * n
                ),
            });
        }
        steps.push(AvgStep {
            order,
            k: kc,
            peeled_n,
            residual_edges: m,
        });
        emb[order - 2] = e;
    }
    Ok(AvgDegreeRun {
        packing: Packing::from_embeddings(family, &emb),
        steps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete_graph, star_graph};
    use crate::verify::verify_packing;

    #[test]
    fn b_sets_of_complete_graph_are_empty() {
        let b = compute_b_sets(&complete_graph(5), 5);
        assert_eq!(b.total(), 0);
        assert_eq!(b.layers.len(), 5);
    }

    #[test]
    fn b1_of_k3_minus_edge() {
        let g = Graph::from_edge_list(3, [(0, 1), (1, 2)]).unwrap();
        let b = compute_b_sets(&g, 3);
        assert_eq!(b.layers[0], vec![0, 2]);
        // vertex 1 has no neighbor outside B_1
        assert_eq!(b.layers[1], vec![1]);
    }

    #[test]
    fn levelwise_on_complete() {
        let g = complete_graph(10);
        let t = Tree::path(4);
        let e = embed_tree_levelwise(&g, &t, &compute_b_sets(&g, 4), 4).unwrap();
        for x in t.edges() {
            assert!(g.has_edge(e[x.u], e[x.v]));
        }
    }

    #[test]
    fn levelwise_reports_starvation() {
        // every vertex of a path has degree below 3
        let g = crate::graph::path_graph(6);
        let err = embed_tree_levelwise(&g, &Tree::star(4), &compute_b_sets(&g, 4), 4).unwrap_err();
        assert!(matches!(err, DegreeError::Starved { level: 0, .. }));
    }

    #[test]
    fn min_degree_on_complete() {
        let f = TreeFamily::new(vec![
            Tree::path(2),
            Tree::path(3),
            Tree::star(4),
            Tree::path(5),
        ])
        .unwrap();
        let run = pack_min_degree(&complete_graph(12), &f, None).unwrap();
        assert!(verify_packing(&complete_graph(12), &f, &run.packing).ok);
        assert_eq!(run.fallback, None);
        assert!(matches!(
            pack_min_degree(&complete_graph(3), &f, None),
            Err(DegreeError::Precondition(_))
        ));
    }

    #[test]
    fn min_degree_small_complete_falls_back() {
        let f = TreeFamily::new(vec![
            Tree::path(2),
            Tree::path(3),
            Tree::star(4),
            Tree::path(5),
        ])
        .unwrap();
        assert!(matches!(
            pack_min_degree(&complete_graph(5), &f, None),
            Err(DegreeError::Starved { .. })
        ));
        let run = pack_min_degree(&complete_graph(5), &f, Some(1_000_000)).unwrap();
        assert!(run.fallback.is_some());
        assert_eq!(run.packing.edge_count(), 10);
        assert!(verify_packing(&complete_graph(5), &f, &run.packing).ok);
    }

    #[test]
    fn peel_examples() {
        let p = peel(&star_graph(5), Rational64::from_integer(2));
        assert_eq!(p.graph.n(), 0);
        let mut pairs: Vec<(usize, usize)> = complete_graph(4)
            .edges()
            .iter()
            .map(|e| (e.u, e.v))
            .collect();
        pairs.sort_unstable();
        let g = Graph::from_edge_list(5, pairs).unwrap();
        let p = peel(&g, Rational64::new(3, 2));
        assert_eq!(p.graph, complete_graph(4));
        assert_eq!(p.map, vec![0, 1, 2, 3]);
        assert!(p.averages.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn avg_degree_small() {
        let f = TreeFamily::new(vec![Tree::path(2)]).unwrap();
        assert!(pack_avg_degree(&complete_graph(4), &f, 4, AvgStrategy::Peel).is_ok());
        let f = TreeFamily::new(vec![Tree::path(2), Tree::path(3)]).unwrap();
        let run = pack_avg_degree(&complete_graph(6), &f, 6, AvgStrategy::Peel).unwrap();
        assert!(verify_packing(&complete_graph(6), &f, &run.packing).ok);
        assert!(matches!(
            pack_avg_degree(&complete_graph(6), &f, 3, AvgStrategy::Peel),
            Err(DegreeError::Precondition(_))
        ));
    }
}

//! Trees, tree families, canonical forms and the structural classifiers
//! (star, path, spider, pending star) used by the packers.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::graph::{Edge, Graph, GraphError};

/// Largest tree order [`enumerate_free_trees`] accepts.
pub const MAX_ENUMERATION_ORDER: usize = 12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("not a tree: {0}")]
    NotATree(String),
    #[error("tree order {0} outside the supported range 1..={MAX_ENUMERATION_ORDER}")]
    OrderOutOfRange(usize),
    #[error("a star has no pending star")]
    IsStar,
    #[error("invalid removal: {0}")]
    BadRemoval(String),
    #[error("family: {0}")]
    Family(String),
}

/// A tree on `n >= 1` vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tree {
    graph: Graph,
}

impl Tree {
    pub fn new(graph: Graph) -> Result<Tree, TreeError> {
        if graph.n() == 0 {
            return Err(TreeError::NotATree("no vertices".into()));
        }
        if graph.edge_count() + 1 != graph.n() {
            return Err(TreeError::NotATree(format!(
                "{} vertices but {} edges",
                graph.n(),
                graph.edge_count()
            )));
        }
        if !graph.is_connected() {
            return Err(TreeError::NotATree("disconnected".into()));
        }
        Ok(Tree { graph })
    }

    pub fn from_edges<I>(n: usize, pairs: I) -> Result<Tree, TreeError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        Tree::new(Graph::from_edge_list(n, pairs)?)
    }

    pub fn path(n: usize) -> Tree {
        Tree::new(crate::graph::path_graph(n)).expect("path is a tree")
    }

    /// `K_{1,n-1}` with center 0.
    pub fn star(n: usize) -> Tree {
        assert!(n >= 1);
        Tree::new(crate::graph::star_graph(n - 1)).expect("star is a tree")
    }

    /// Subdivided star with the given leg lengths and center 0. A spider
    /// in the `is_spider` sense only when every leg has length at most 2.
    pub fn spider(legs: &[usize]) -> Tree {
        let mut edges = Vec::new();
        let mut next = 1;
        for &len in legs {
            let mut prev = 0;
            for _ in 0..len {
                edges.push((prev, next));
                prev = next;
                next += 1;
            }
        }
        Tree::from_edges(next, edges).expect("spider is a tree")
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn edges(&self) -> &[Edge] {
        self.graph.edges()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.graph.degree(v)
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        self.graph.neighbors(v)
    }

    pub fn is_leaf(&self, v: usize) -> bool {
        self.graph.degree(v) == 1
    }

    pub fn relabeled(&self, perm: &[usize]) -> Tree {
        Tree {
            graph: self.graph.relabeled(perm),
        }
    }

    /// Vertices that have at least one leaf neighbor, ascending.
    pub fn leaf_neighbors(&self) -> Vec<usize> {
        (0..self.n())
            .filter(|&v| self.neighbors(v).iter().any(|&w| self.is_leaf(w)))
            .collect()
    }

    /// Some leaf adjacent to `v` (the smallest id), if any.
    pub fn leaf_of(&self, v: usize) -> Option<usize> {
        self.neighbors(v).iter().copied().find(|&w| self.is_leaf(w))
    }

    /// The central vertex or the two central vertices.
    pub fn centers(&self) -> Vec<usize> {
        let n = self.n();
        if n <= 2 {
            return (0..n).collect();
        }
        let mut deg = self.graph.degrees();
        let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] == 1).collect();
        let mut remaining = n;
        while remaining > 2 {
            remaining -= layer.len();
            let mut next = Vec::new();
            for &leaf in &layer {
                for &w in self.neighbors(leaf) {
                    deg[w] -= 1;
                    if deg[w] == 1 {
                        next.push(w);
                    }
                }
            }
            layer = next;
        }
        layer.sort_unstable();
        layer
    }

    pub fn is_star(&self) -> bool {
        self.n() <= 2 || self.graph.max_degree() == self.n() - 1
    }

    pub fn is_path(&self) -> bool {
        self.graph.max_degree() <= 2
    }

    /// Some vertex whose removal leaves only isolated vertices and edges.
    pub fn is_spider(&self) -> bool {
        self.spider_center().is_some()
    }

    pub fn spider_center(&self) -> Option<usize> {
        (0..self.n()).find(|&c| {
            (0..self.n())
                .filter(|&v| v != c)
                .all(|v| self.neighbors(v).iter().filter(|&&w| w != c).count() <= 1)
        })
    }
}

/// Structural flags, each computed independently.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TreeClass {
    pub is_star: bool,
    pub is_path: bool,
    pub is_spider: bool,
}

pub fn classify(t: &Tree) -> TreeClass {
    TreeClass {
        is_star: t.is_star(),
        is_path: t.is_path(),
        is_spider: t.is_spider(),
    }
}

/// AHU encoding of `t` rooted at `root`: `(` + sorted child codes + `)`.
pub fn rooted_code(t: &Tree, root: usize) -> String {
    fn go(t: &Tree, v: usize, parent: usize) -> String {
        let mut kids: Vec<String> = t
            .neighbors(v)
            .iter()
            .filter(|&&w| w != parent)
            .map(|&w| go(t, w, v))
            .collect();
        kids.sort_unstable();
        let mut s = String::with_capacity(2 + kids.iter().map(String::len).sum::<usize>());
        s.push('(');
        for k in kids {
            s.push_str(&k);
        }
        s.push(')');
        s
    }
    go(t, root, usize::MAX)
}

/// Center-rooted AHU string. Equal strings iff the trees are isomorphic.
pub fn canonical_form(t: &Tree) -> String {
    t.centers()
        .into_iter()
        .map(|c| rooted_code(t, c))
        .min()
        .expect("tree has a center")
}

/// Rebuilds a tree from a rooted code; vertices are numbered in preorder.
pub fn tree_from_code(code: &str) -> Result<Tree, TreeError> {
    let mut edges = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut next = 0;
    for ch in code.chars() {
        match ch {
            '(' => {
                if let Some(&p) = stack.last() {
                    edges.push((p, next));
                } else if next > 0 {
                    return Err(TreeError::NotATree(format!("code `{code}` has two roots")));
                }
                stack.push(next);
                next += 1;
            }
            ')' => {
                stack
                    .pop()
                    .ok_or_else(|| TreeError::NotATree(format!("unbalanced code `{code}`")))?;
            }
            _ => return Err(TreeError::NotATree(format!("bad character in `{code}`"))),
        }
    }
    if !stack.is_empty() {
        return Err(TreeError::NotATree(format!("unbalanced code `{code}`")));
    }
    Tree::from_edges(next, edges)
}

/// One representative per isomorphism class of trees on `n` vertices,
/// sorted by canonical form. Representatives are labeled in preorder of
/// their canonical code, so vertex 0 is a center.
///
/// Generation grows every class on `n - 1` vertices by one leaf in all
/// positions and keeps the canonical forms.
pub fn enumerate_free_trees(n: usize) -> Result<Vec<Tree>, TreeError> {
    if !(1..=MAX_ENUMERATION_ORDER).contains(&n) {
        return Err(TreeError::OrderOutOfRange(n));
    }
    let mut level: BTreeSet<String> = BTreeSet::from(["()".to_string()]);
    for _ in 1..n {
        let mut next = BTreeSet::new();
        for code in &level {
            let t = tree_from_code(code)?;
            let m = t.n();
            for v in 0..m {
                let mut edges: Vec<(usize, usize)> = t.edges().iter().map(|e| (e.u, e.v)).collect();
                edges.push((v, m));
                let grown = Tree::from_edges(m + 1, edges)?;
                next.insert(canonical_form(&grown));
            }
        }
        level = next;
    }
    level.iter().map(|c| tree_from_code(c)).collect()
}

/// A vertex `center` whose only non-leaf neighbor is `neighbor`, together
/// with its leaf neighbors. Its order is `1 + leaves.len()`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PendingStar {
    pub center: usize,
    pub leaves: Vec<usize>,
    pub neighbor: usize,
}

impl PendingStar {
    pub fn order(&self) -> usize {
        1 + self.leaves.len()
    }

    pub fn vertices(&self) -> Vec<usize> {
        let mut v = self.leaves.clone();
        v.push(self.center);
        v.sort_unstable();
        v
    }
}

/// All pending stars of a non-star tree, ordered by center id.
pub fn find_pending_stars(t: &Tree) -> Result<Vec<PendingStar>, TreeError> {
    if t.is_star() {
        return Err(TreeError::IsStar);
    }
    let mut out = Vec::new();
    for x in 0..t.n() {
        let (leaves, inner): (Vec<usize>, Vec<usize>) =
            t.neighbors(x).iter().partition(|&&w| t.is_leaf(w));
        if inner.len() == 1 && !leaves.is_empty() {
            out.push(PendingStar {
                center: x,
                leaves,
                neighbor: inner[0],
            });
        }
    }
    Ok(out)
}

/// Result of deleting vertices from a tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pruned {
    pub tree: Tree,
    /// `kept[new_id] = old_id`.
    pub kept: Vec<usize>,
    /// Old id of the remaining vertex each removed piece hung from, in the
    /// order the pieces were recognized (leaves by id, then the star).
    pub attachments: Vec<usize>,
}

impl Pruned {
    pub fn new_id(&self, old: usize) -> Option<usize> {
        self.kept.binary_search(&old).ok()
    }
}

/// Removes `victims`, which must be either a set of leaves or exactly one
/// whole pending star (center plus all its leaves). At least two vertices
/// must remain.
pub fn remove_leaves(t: &Tree, victims: &[usize]) -> Result<Pruned, TreeError> {
    let mut vs: Vec<usize> = victims.to_vec();
    vs.sort_unstable();
    vs.dedup();
    if vs.is_empty() {
        return Err(TreeError::BadRemoval("nothing to remove".into()));
    }
    if let Some(&bad) = vs.iter().find(|&&v| v >= t.n()) {
        return Err(TreeError::BadRemoval(format!("vertex {bad} not in tree")));
    }
    if t.n() - vs.len() < 2 {
        return Err(TreeError::BadRemoval(format!(
            "removing {:?} leaves fewer than two vertices",
            vs
        )));
    }
    let attachments = if vs.iter().all(|&v| t.is_leaf(v)) {
        let mut att = Vec::new();
        for &v in &vs {
            let w = t.neighbors(v)[0];
            if vs.binary_search(&w).is_ok() {
                return Err(TreeError::BadRemoval(format!(
                    "leaves {v} and {w} are adjacent"
                )));
            }
            att.push(w);
        }
        att
    } else {
        let star = find_pending_stars(t)
            .unwrap_or_default()
            .into_iter()
            .find(|s| s.vertices() == vs)
            .ok_or_else(|| {
                TreeError::BadRemoval(format!(
                    "{vs:?} is neither a set of leaves nor a pending star"
                ))
            })?;
        vec![star.neighbor]
    };
    let kept: Vec<usize> = (0..t.n())
        .filter(|v| vs.binary_search(v).is_err())
        .collect();
    let (g, _) = t.graph().induced_subgraph(&kept);
    let tree =
        Tree::new(g).map_err(|e| TreeError::BadRemoval(format!("result is not a tree: {e}")))?;
    Ok(Pruned {
        tree,
        kept,
        attachments,
    })
}

/// Automorphisms of `t` as permutations (`perm[v]` is the image of `v`),
/// at most `cap` of them, identity first.
pub fn automorphisms(t: &Tree, cap: usize) -> Vec<Vec<usize>> {
    let n = t.n();
    let codes: Vec<String> = (0..n).map(|v| rooted_code(t, v)).collect();
    // BFS order from vertex 0 with parents
    let mut order = vec![0];
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut q = VecDeque::from([0]);
    while let Some(x) = q.pop_front() {
        for &y in t.neighbors(x) {
            if !seen[y] {
                seen[y] = true;
                parent[y] = x;
                order.push(y);
                q.push_back(y);
            }
        }
    }

    fn go(
        t: &Tree,
        codes: &[String],
        order: &[usize],
        parent: &[usize],
        i: usize,
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<Vec<usize>>,
        cap: usize,
    ) {
        if out.len() >= cap {
            return;
        }
        if i == order.len() {
            out.push(perm.clone());
            return;
        }
        let v = order[i];
        let candidates: Vec<usize> = if i == 0 {
            let mut c: Vec<usize> = (0..t.n()).collect();
            // identity first
            c.sort_by_key(|&w| w != v);
            c
        } else {
            let mut c = t.neighbors(perm[parent[v]]).to_vec();
            c.sort_by_key(|&w| w != v);
            c
        };
        for w in candidates {
            if used[w] || codes[w] != codes[v] || t.degree(w) != t.degree(v) {
                continue;
            }
            perm[v] = w;
            used[w] = true;
            go(t, codes, order, parent, i + 1, perm, used, out, cap);
            used[w] = false;
            perm[v] = usize::MAX;
        }
    }

    let mut out = Vec::new();
    let mut perm = vec![usize::MAX; n];
    let mut used = vec![false; n];
    go(
        t,
        &codes,
        &order,
        &parent,
        0,
        &mut perm,
        &mut used,
        &mut out,
        cap.max(1),
    );
    out
}

/// The sequence `T_2, ..., T_k` where `T_i` has `i` vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeFamily {
    trees: Vec<Tree>,
}

impl TreeFamily {
    pub fn new(trees: Vec<Tree>) -> Result<TreeFamily, TreeError> {
        for (j, t) in trees.iter().enumerate() {
            if t.n() != j + 2 {
                return Err(TreeError::Family(format!(
                    "position {} holds a tree on {} vertices, expected {}",
                    j,
                    t.n(),
                    j + 2
                )));
            }
        }
        Ok(TreeFamily { trees })
    }

    /// The family size parameter: trees run over orders `2..=k`.
    pub fn k(&self) -> usize {
        self.trees.len() + 1
    }

    /// `T_order`. Panics if `order` is outside `2..=k`.
    pub fn get(&self, order: usize) -> &Tree {
        &self.trees[order - 2]
    }

    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    /// `(order, tree)` pairs.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &Tree)> {
        self.trees.iter().enumerate().map(|(j, t)| (j + 2, t))
    }

    pub fn non_star_count(&self) -> usize {
        self.trees.iter().filter(|t| !t.is_star()).count()
    }

    pub fn total_edges(&self) -> usize {
        self.trees.iter().map(|t| t.n() - 1).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("family serializes")
    }

    pub fn from_json(text: &str) -> Result<TreeFamily, TreeError> {
        serde_json::from_str(text).map_err(|e| TreeError::Family(e.to_string()))
    }
}

impl Serialize for TreeFamily {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        struct Trees<'a>(&'a TreeFamily);
        impl Serialize for Trees<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.trees.len()))?;
                for (order, t) in self.0.iter() {
                    let edges: Vec<[usize; 2]> = t.edges().iter().map(|e| [e.u, e.v]).collect();
                    map.serialize_entry(&order.to_string(), &edges)?;
                }
                map.end()
            }
        }
        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry("k", &self.k())?;
        map.serialize_entry("trees", &Trees(self))?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for TreeFamily {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            k: usize,
            trees: BTreeMap<String, Vec<[usize; 2]>>,
        }
        let raw = Raw::deserialize(d)?;
        let mut by_order = BTreeMap::new();
        for (key, edges) in raw.trees {
            let order: usize = key
                .parse()
                .map_err(|_| D::Error::custom(format!("tree key `{key}` is not an order")))?;
            let t = Tree::from_edges(order, edges.iter().map(|e| (e[0], e[1])))
                .map_err(|e| D::Error::custom(format!("tree {order}: {e}")))?;
            by_order.insert(order, t);
        }
        let expected: Vec<usize> = (2..=raw.k).collect();
        if by_order.keys().copied().collect::<Vec<_>>() != expected {
            return Err(D::Error::custom(format!(
                "k = {} needs trees for orders 2..={}",
                raw.k, raw.k
            )));
        }
        TreeFamily::new(by_order.into_values().collect()).map_err(D::Error::custom)
    }
}

/// Every family `T_2..T_k` drawn from the free-tree classes, in
/// lexicographic order of class indices. `index[j]` selects among the
/// classes of order `j + 2`.
pub fn all_families(k: usize) -> Result<Vec<(Vec<usize>, TreeFamily)>, TreeError> {
    let classes: Vec<Vec<Tree>> = (2..=k)
        .map(enumerate_free_trees)
        .collect::<Result<_, _>>()?;
    let mut out = Vec::new();
    let mut index = vec![0usize; classes.len()];
    loop {
        let trees = index
            .iter()
            .enumerate()
            .map(|(j, &i)| classes[j][i].clone())
            .collect();
        out.push((index.clone(), TreeFamily::new(trees)?));
        // odometer, last position fastest
        let mut j = classes.len();
        loop {
            if j == 0 {
                return Ok(out);
            }
            j -= 1;
            index[j] += 1;
            if index[j] < classes[j].len() {
                break;
            }
            index[j] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn count(n: usize) -> usize {
        enumerate_free_trees(n).unwrap().len()
    }

    #[test]
    fn enumeration_small_counts() {
        assert_eq!(count(1), 1);
        assert_eq!(count(2), 1);
        assert_eq!(count(4), 2);
        assert_eq!(count(7), 11);
        assert!(enumerate_free_trees(0).is_err());
        assert!(enumerate_free_trees(13).is_err());
    }

    #[test]
    fn enumeration_is_sorted_and_canonical() {
        let trees = enumerate_free_trees(6).unwrap();
        let forms: Vec<String> = trees.iter().map(canonical_form).collect();
        let mut sorted = forms.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(forms, sorted);
        assert_eq!(forms.len(), 6);
    }

    #[test]
    fn canonical_form_examples() {
        let p3 = Tree::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let p3b = Tree::from_edges(3, [(2, 0), (0, 1)]).unwrap();
        assert_eq!(canonical_form(&p3), canonical_form(&p3b));
        assert_ne!(
            canonical_form(&Tree::path(4)),
            canonical_form(&Tree::star(4))
        );
    }

    #[test]
    fn classify_examples() {
        let s = classify(&Tree::star(5));
        assert!(s.is_star && s.is_spider && !s.is_path);
        let p5 = classify(&Tree::path(5));
        assert!(p5.is_path && p5.is_spider && !p5.is_star);
        let p6 = classify(&Tree::path(6));
        assert!(p6.is_path && !p6.is_spider && !p6.is_star);
        // K_2 and P_3 are both stars and paths
        assert!(classify(&Tree::path(2)).is_star);
        assert!(classify(&Tree::path(3)).is_star);
    }

    #[test]
    fn pending_star_examples() {
        // legs (1,1,2): center 0, leaves 1,2, leg 0-3-4
        let chair = Tree::spider(&[1, 1, 2]);
        let ps = find_pending_stars(&chair).unwrap();
        assert_eq!(ps.len(), 2);
        assert_eq!(
            ps[0],
            PendingStar {
                center: 0,
                leaves: vec![1, 2],
                neighbor: 3
            }
        );
        assert_eq!(
            ps[1],
            PendingStar {
                center: 3,
                leaves: vec![4],
                neighbor: 0
            }
        );

        let p4 = find_pending_stars(&Tree::path(4)).unwrap();
        assert_eq!(
            p4.iter().map(|s| (s.center, s.order())).collect::<Vec<_>>(),
            vec![(1, 2), (2, 2)]
        );

        let double = Tree::from_edges(6, [(0, 1), (0, 2), (0, 3), (1, 4), (1, 5)]).unwrap();
        let ds = find_pending_stars(&double).unwrap();
        assert_eq!(
            ds.iter().map(|s| (s.center, s.order())).collect::<Vec<_>>(),
            vec![(0, 3), (1, 3)]
        );

        assert_eq!(find_pending_stars(&Tree::star(4)), Err(TreeError::IsStar));
    }

    #[test]
    fn remove_leaves_examples() {
        let p = remove_leaves(&Tree::path(5), &[0]).unwrap();
        assert_eq!(canonical_form(&p.tree), canonical_form(&Tree::path(4)));
        assert_eq!(p.attachments, vec![1]);

        let chair = Tree::spider(&[1, 1, 2]);
        let p = remove_leaves(&chair, &[0, 1, 2]).unwrap();
        assert_eq!(p.tree.n(), 2);
        assert_eq!(p.kept, vec![3, 4]);
        assert_eq!(p.attachments, vec![3]);

        assert!(remove_leaves(&Tree::star(4), &[1, 2, 3]).is_err());
        // a center without its leaves is not a removable piece
        assert!(remove_leaves(&chair, &[0]).is_err());
    }

    #[test]
    fn automorphism_counts() {
        assert_eq!(automorphisms(&Tree::star(5), 1000).len(), 24);
        assert_eq!(automorphisms(&Tree::path(5), 1000).len(), 2);
        assert_eq!(automorphisms(&Tree::spider(&[1, 1, 2]), 1000).len(), 2);
        assert_eq!(automorphisms(&Tree::star(5), 3).len(), 3);
        let auts = automorphisms(&Tree::path(4), 10);
        assert_eq!(auts[0], vec![0, 1, 2, 3]);
    }

    #[test]
    fn family_json() {
        let fam = TreeFamily::new(vec![Tree::path(2), Tree::path(3), Tree::star(4)]).unwrap();
        let text = fam.to_json();
        assert_eq!(
            text,
            r#"{"k":4,"trees":{"2":[[0,1]],"3":[[0,1],[1,2]],"4":[[0,1],[0,2],[0,3]]}}"#
        );
        assert_eq!(TreeFamily::from_json(&text).unwrap(), fam);
        assert!(TreeFamily::from_json(r#"{"k":3,"trees":{"2":[[0,1]]}}"#).is_err());
    }

    #[test]
    fn all_families_counts() {
        assert_eq!(all_families(5).unwrap().len(), 6);
        assert_eq!(all_families(7).unwrap().len(), 396);
    }
}

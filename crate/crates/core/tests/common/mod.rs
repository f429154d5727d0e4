//! Reference implementations kept apart from the library: they share no
//! code with it beyond the plain `Graph` container.
#![allow(dead_code)]

use std::collections::BTreeSet;

use treepack::Graph;

/// Adjacency lists of an edge list on `n` vertices.
pub fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    adj
}

fn rooted(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
    let mut kids: Vec<String> = adj[v]
        .iter()
        .filter(|&&w| w != parent)
        .map(|&w| rooted(adj, w, v))
        .collect();
    kids.sort();
    format!("({})", kids.concat())
}

/// Isomorphism key of a tree: the smallest rooted encoding over all roots.
pub fn tree_key(n: usize, edges: &[(usize, usize)]) -> String {
    let adj = adjacency(n, edges);
    (0..n)
        .map(|r| rooted(&adj, r, usize::MAX))
        .min()
        .unwrap_or_default()
}

/// Decodes a Prüfer sequence into the edges of a labeled tree on
/// `seq.len() + 2` vertices.
pub fn prufer_decode(seq: &[usize]) -> Vec<(usize, usize)> {
    let n = seq.len() + 2;
    let mut degree = vec![1usize; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::new();
    for &x in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf, x));
        degree[leaf] -= 1;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// Isomorphism classes of trees on `n` vertices, through all `n^(n-2)`
/// labeled trees.
pub fn prufer_classes(n: usize) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    if n == 1 {
        out.insert(tree_key(1, &[]));
        return out;
    }
    if n == 2 {
        out.insert(tree_key(2, &[(0, 1)]));
        return out;
    }
    let len = n - 2;
    let mut seq = vec![0usize; len];
    loop {
        out.insert(tree_key(n, &prufer_decode(&seq)));
        let mut j = len;
        loop {
            if j == 0 {
                return out;
            }
            j -= 1;
            seq[j] += 1;
            if seq[j] < n {
                break;
            }
            seq[j] = 0;
        }
    }
}

/// Key of an edge set if it spans a tree on exactly `order` vertices.
fn edge_set_key(edges: &[(usize, usize)], order: usize) -> Option<String> {
    let mut verts: Vec<usize> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    verts.sort_unstable();
    verts.dedup();
    if verts.len() != order || edges.len() + 1 != order {
        return None;
    }
    let local = |x: usize| verts.binary_search(&x).unwrap();
    let mapped: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (local(a), local(b))).collect();
    // connected check: n-1 edges and connected means tree
    let adj = adjacency(order, &mapped);
    let mut seen = vec![false; order];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen.iter().all(|&b| b).then(|| tree_key(order, &mapped))
}

fn subsets(m: usize, size: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == size {
        out.push(cur.clone());
        return;
    }
    for i in start..m {
        if m - i < size - cur.len() {
            break;
        }
        cur.push(i);
        subsets(m, size, i + 1, cur, out);
        cur.pop();
    }
}

/// Whether trees with the given `(order, key)` pairs pack into `g`:
/// every copy of each tree is listed as an edge bitmask, then disjoint
/// copies are searched for. Hosts up to 64 edges.
pub fn naive_packs(g: &Graph, trees: &[(usize, String)]) -> bool {
    let edges: Vec<(usize, usize)> = g.edges().iter().map(|e| (e.u, e.v)).collect();
    assert!(edges.len() <= 64);
    let mut copies: Vec<Vec<u64>> = Vec::new();
    for (order, key) in trees {
        let mut masks = Vec::new();
        let mut all = Vec::new();
        subsets(edges.len(), order - 1, 0, &mut Vec::new(), &mut all);
        for s in all {
            let es: Vec<(usize, usize)> = s.iter().map(|&i| edges[i]).collect();
            if edge_set_key(&es, *order).as_ref() == Some(key) {
                masks.push(s.iter().fold(0u64, |m, &i| m | 1 << i));
            }
        }
        copies.push(masks);
    }
    fn go(copies: &[Vec<u64>], i: usize, used: u64) -> bool {
        i == copies.len()
            || copies[i]
                .iter()
                .any(|&m| m & used == 0 && go(copies, i + 1, used | m))
    }
    go(&copies, 0, 0)
}

/// Smallest `c` admitting a proper coloring, by trying all `c^n`
/// assignments.
pub fn brute_chromatic(g: &Graph) -> usize {
    let n = g.n();
    if n == 0 {
        return 0;
    }
    for c in 1..=n {
        let mut col = vec![0usize; n];
        loop {
            if g.edges().iter().all(|e| col[e.u] != col[e.v]) {
                return c;
            }
            let mut j = 0;
            while j < n {
                col[j] += 1;
                if col[j] < c {
                    break;
                }
                col[j] = 0;
                j += 1;
            }
            if j == n {
                break;
            }
        }
    }
    n
}

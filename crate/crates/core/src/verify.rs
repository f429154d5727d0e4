//! Independent certification of packings.
//!
//! The verifier only looks at the host, the family and the claimed colors.
//! Shapes are compared through [`canonical_form`], never through anything a
//! packer produced.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::graph::Graph;
use crate::packing::Packing;
use crate::tree::{canonical_form, Tree, TreeFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ViolationKind {
    MissingEdge,
    DoubleColor,
    ShapeMismatch,
    BadColorIndex,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub kind: ViolationKind,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub color: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge: Option<[usize; 2]>,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl VerifyReport {
    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Checks that every colored edge is a host edge, no edge is colored
/// twice, and color `i` spans a tree isomorphic to `T_i` for every `i`.
pub fn verify_packing(g: &Graph, family: &TreeFamily, p: &Packing) -> VerifyReport {
    let mut violations = Vec::new();
    let k = family.k();
    if p.k != k {
        violations.push(Violation {
            kind: ViolationKind::BadColorIndex,
            color: None,
            edge: None,
            detail: format!("packing declares k = {}, family has k = {k}", p.k),
        });
    }

    let mut seen: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut valid: BTreeMap<usize, Vec<(usize, usize)>> = BTreeMap::new();
    for (&c, edges) in &p.colors {
        if !(2..=k).contains(&c) {
            violations.push(Violation {
                kind: ViolationKind::BadColorIndex,
                color: Some(c),
                edge: None,
                detail: format!("color {c} outside 2..={k}"),
            });
            continue;
        }
        for &(a, b) in edges {
            let key = (a.min(b), a.max(b));
            if a == b || !g.has_edge(a, b) {
                violations.push(Violation {
                    kind: ViolationKind::MissingEdge,
                    color: Some(c),
                    edge: Some([a, b]),
                    detail: format!("({a},{b}) is not an edge of the host"),
                });
                continue;
            }
            if let Some(&prev) = seen.get(&key) {
                violations.push(Violation {
                    kind: ViolationKind::DoubleColor,
                    color: Some(c),
                    edge: Some([key.0, key.1]),
                    detail: format!("edge already colored {prev}"),
                });
                continue;
            }
            seen.insert(key, c);
            valid.entry(c).or_default().push(key);
        }
    }

    for (order, t) in family.iter() {
        let edges = valid.remove(&order).unwrap_or_default();
        if let Err(detail) = same_shape(&edges, t) {
            violations.push(Violation {
                kind: ViolationKind::ShapeMismatch,
                color: Some(order),
                edge: None,
                detail,
            });
        }
    }

    VerifyReport {
        ok: violations.is_empty(),
        violations,
    }
}

fn same_shape(edges: &[(usize, usize)], t: &Tree) -> Result<(), String> {
    let mut verts: Vec<usize> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    verts.sort_unstable();
    verts.dedup();
    if verts.len() != t.n() || edges.len() + 1 != t.n() {
        return Err(format!(
            "{} edges on {} vertices, expected a tree on {} vertices",
            edges.len(),
            verts.len(),
            t.n()
        ));
    }
    let local = |x: usize| verts.binary_search(&x).unwrap();
    let sub = Tree::from_edges(
        verts.len(),
        edges.iter().map(|&(a, b)| (local(a), local(b))),
    )
    .map_err(|e| format!("color class is not a tree: {e}"))?;
    let (got, want) = (canonical_form(&sub), canonical_form(t));
    if got != want {
        return Err(format!("shape {got} differs from target {want}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::complete_graph;
    use crate::packing::Packing;

    fn k3_family() -> TreeFamily {
        TreeFamily::new(vec![Tree::path(2), Tree::path(3)]).unwrap()
    }

    fn k3_packing() -> Packing {
        Packing::from_embeddings(&k3_family(), &[vec![0, 1], vec![0, 2, 1]])
    }

    #[test]
    fn accepts_valid() {
        let r = verify_packing(&complete_graph(3), &k3_family(), &k3_packing());
        assert!(r.ok, "{r:?}");
    }

    #[test]
    fn double_color() {
        let mut p = k3_packing();
        p.colors.get_mut(&3).unwrap()[0] = (0, 1);
        let r = verify_packing(&complete_graph(3), &k3_family(), &p);
        assert!(r.has(ViolationKind::DoubleColor));
    }

    #[test]
    fn shape_mismatch() {
        let fam = k3_family();
        let mut p = k3_packing();
        // two disjoint edges where P_3 is required
        p.colors.insert(3, vec![(0, 1), (2, 3)]);
        p.colors.insert(2, vec![(1, 2)]);
        let r = verify_packing(&complete_graph(4), &fam, &p);
        assert!(r.has(ViolationKind::ShapeMismatch));
        assert!(!r.has(ViolationKind::DoubleColor));
    }

    #[test]
    fn missing_edge_and_bad_index() {
        let mut p = k3_packing();
        p.colors.insert(9, vec![(0, 1)]);
        p.colors.get_mut(&2).unwrap().push((1, 1));
        let r = verify_packing(&complete_graph(3), &k3_family(), &p);
        assert!(r.has(ViolationKind::BadColorIndex));
        assert!(r.has(ViolationKind::MissingEdge));
        assert!(r.to_json().contains("\"BAD_COLOR_INDEX\""));
    }

    #[test]
    fn missing_color_is_shape_mismatch() {
        let mut p = k3_packing();
        p.colors.remove(&2);
        let r = verify_packing(&complete_graph(3), &k3_family(), &p);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].kind, ViolationKind::ShapeMismatch);
    }
}

//! Edge-colorings that encode packings: color `i` carries a copy of `T_i`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::de::Error as _;
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::graph::Edge;
use crate::tree::TreeFamily;

/// Tree vertex -> host vertex.
pub type Embedding = Vec<usize>;

/// Color index -> edges. Stored as raw pairs so malformed input (loops,
/// unknown vertices, repeated edges) survives until verification.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Packing {
    pub k: usize,
    pub colors: BTreeMap<usize, Vec<(usize, usize)>>,
}

impl Packing {
    pub fn new(k: usize) -> Packing {
        Packing {
            k,
            colors: BTreeMap::new(),
        }
    }

    /// Colors `T_i`'s edges through `embeddings[i - 2]`.
    pub fn from_embeddings(family: &TreeFamily, embeddings: &[Embedding]) -> Packing {
        assert_eq!(embeddings.len(), family.trees().len());
        let mut p = Packing::new(family.k());
        for ((order, t), emb) in family.iter().zip(embeddings) {
            let mut edges: Vec<(usize, usize)> = t
                .edges()
                .iter()
                .map(|e| {
                    let (a, b) = (emb[e.u], emb[e.v]);
                    (a.min(b), a.max(b))
                })
                .collect();
            edges.sort_unstable();
            p.colors.insert(order, edges);
        }
        p
    }

    pub fn edge_count(&self) -> usize {
        self.colors.values().map(Vec::len).sum()
    }

    /// Every colored edge (normalized) with the colors it carries.
    pub fn color_of(&self) -> BTreeMap<(usize, usize), Vec<usize>> {
        let mut out: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (&c, edges) in &self.colors {
            for &(a, b) in edges {
                out.entry((a.min(b), a.max(b))).or_default().push(c);
            }
        }
        out
    }

    /// Renames host vertices through `perm`.
    pub fn relabeled(&self, perm: &[usize]) -> Packing {
        let colors = self
            .colors
            .iter()
            .map(|(&c, edges)| {
                let mut es: Vec<(usize, usize)> = edges
                    .iter()
                    .map(|&(a, b)| (perm[a].min(perm[b]), perm[a].max(perm[b])))
                    .collect();
                es.sort_unstable();
                (c, es)
            })
            .collect();
        Packing { k: self.k, colors }
    }

    /// Lifts host ids through `map` (sub id -> super id).
    pub fn lifted(&self, map: &[usize]) -> Packing {
        self.relabeled(map)
    }

    pub fn edges_of(&self, color: usize) -> Vec<Edge> {
        self.colors
            .get(&color)
            .map(|es| {
                es.iter()
                    .filter(|(a, b)| a != b)
                    .map(|&(a, b)| Edge::new(a, b))
                    .collect()
            })
            .unwrap_or_default()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("packing serializes")
    }

    pub fn from_json(text: &str) -> Result<Packing, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// Graphviz rendering of the host with one `color` attribute per
    /// colored edge; uncolored host edges are drawn dotted.
    pub fn to_dot(&self, host: &crate::graph::Graph) -> String {
        const PALETTE: [&str; 12] = [
            "black",
            "red",
            "blue",
            "darkgreen",
            "orange",
            "purple",
            "brown",
            "magenta",
            "cyan4",
            "gold3",
            "gray40",
            "navy",
        ];
        let colored = self.color_of();
        let mut out = String::from("graph packing {\n  node [shape=circle];\n");
        for v in 0..host.n() {
            let _ = writeln!(out, "  {v};");
        }
        for e in host.edges() {
            match colored.get(&(e.u, e.v)) {
                Some(cs) => {
                    let c = cs[0];
                    let _ = writeln!(
                        out,
                        "  {} -- {} [color={}, label=\"{}\"];",
                        e.u,
                        e.v,
                        PALETTE[c % PALETTE.len()],
                        c
                    );
                }
                None => {
                    let _ = writeln!(out, "  {} -- {} [style=dotted];", e.u, e.v);
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

impl Serialize for Packing {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        struct Colors<'a>(&'a BTreeMap<usize, Vec<(usize, usize)>>);
        impl Serialize for Colors<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.len()))?;
                for (c, edges) in self.0 {
                    let es: Vec<[usize; 2]> = edges.iter().map(|&(a, b)| [a, b]).collect();
                    map.serialize_entry(&c.to_string(), &es)?;
                }
                map.end()
            }
        }
        let mut map = s.serialize_map(Some(2))?;
        map.serialize_entry("k", &self.k)?;
        map.serialize_entry("colors", &Colors(&self.colors))?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for Packing {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            k: usize,
            colors: BTreeMap<String, Vec<[usize; 2]>>,
        }
        let raw = Raw::deserialize(d)?;
        let mut colors = BTreeMap::new();
        for (key, edges) in raw.colors {
            let c: usize = key
                .parse()
                .map_err(|_| D::Error::custom(format!("color key `{key}` is not an integer")))?;
            colors.insert(c, edges.iter().map(|e| (e[0], e[1])).collect());
        }
        Ok(Packing { k: raw.k, colors })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::Tree;

    #[test]
    fn json_shape() {
        let fam = TreeFamily::new(vec![Tree::path(2), Tree::path(3)]).unwrap();
        let p = Packing::from_embeddings(&fam, &[vec![0, 1], vec![1, 2, 0]]);
        let text = p.to_json();
        assert_eq!(text, r#"{"k":3,"colors":{"2":[[0,1]],"3":[[0,2],[1,2]]}}"#);
        assert_eq!(Packing::from_json(&text).unwrap(), p);
        assert_eq!(p.edge_count(), 3);
    }

    #[test]
    fn dot_marks_colors() {
        let fam = TreeFamily::new(vec![Tree::path(2)]).unwrap();
        let p = Packing::from_embeddings(&fam, &[vec![0, 1]]);
        let dot = p.to_dot(&crate::graph::complete_graph(3));
        assert!(dot.contains("0 -- 1 [color=blue, label=\"2\"]"));
        assert!(dot.contains("1 -- 2 [style=dotted]"));
    }
}

//! Constructive packing of `T_2..T_k` into a `k`-chromatic host when at
//! most three of the trees are non-stars.
//!
//! One level of the recursion works on a host `H` with a Grundy coloring
//! `A_1..A_k` and minimum degree at least `k-1`:
//! 1. [`plan::select_reduction`] picks the claim or case,
//! 2. the reduced family is packed into the `(k-t-1)`-core of the top
//!    `k-t` classes, re-refined to a Grundy coloring,
//! 3. [`finish::complete_embedding`] re-attaches the removed pieces and
//!    colors the `t` deferred stars.
//!
//! Every level is verified before it is returned.

pub mod finish;
pub mod plan;

use serde::Serialize;
use thiserror::Error;

use crate::coloring::{
    check_grundy, critical_subgraph, find_coloring, grundy_refine, k_core, peel_tail, restrict,
    ColoringError, OrderedColoring, DEFAULT_COLORING_BUDGET,
};
use crate::graph::Graph;
use crate::packing::{Embedding, Packing};
use crate::search::{pack_exhaustive, SearchOptions, SearchOutcome};
use crate::tree::{TreeError, TreeFamily};
use crate::verify::verify_packing;

pub use finish::{complete_embedding, FinishFailure, FinishInput};
pub use plan::{
    apply_reduction, cut_tree, select_reduction, CaseTag, Piece, Reattach, ReducedFamily,
    ReductionPlan, SlotSource, TreeCut,
};

pub const DEFAULT_FINISH_BUDGET: u64 = 2_000_000;

#[derive(Debug, Error)]
pub enum PackError {
    #[error("family has {0} non-stars; the constructive packer handles at most 3")]
    TooManyNonStars(usize),
    #[error("no case applies at k = {k}: {detail}; family {family}")]
    Dispatch {
        k: usize,
        detail: String,
        family: String,
    },
    #[error("reduction {case} is inconsistent: {detail}")]
    Slot { case: CaseTag, detail: String },
    #[error("finishing {case} at depth {depth} failed after {nodes} nodes:\n{dump}")]
    Finish {
        case: CaseTag,
        depth: usize,
        nodes: u64,
        dump: String,
    },
    #[error("host is not {expected}-chromatic: {detail}")]
    NotKChromatic { expected: usize, detail: String },
    #[error(transparent)]
    Coloring(#[from] ColoringError),
    #[error("invariant broken at depth {depth}: {detail}")]
    Invariant { depth: usize, detail: String },
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// How the host is reduced before the first level.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Preprocess {
    /// Vertex-critical subgraph; certifies the chromatic number exactly.
    #[default]
    Critical,
    /// `(k-1)`-core only. The host's chromatic number is taken on trust
    /// (for example from a construction); a `k`-coloring of the core is
    /// still searched for.
    Core,
}

#[derive(Debug, Clone, Copy)]
pub struct ConstructiveOptions {
    pub preprocess: Preprocess,
    pub coloring_budget: u64,
    pub finish_budget: u64,
    /// Node budget of the exhaustive search run when a step fails.
    pub fallback: Option<u64>,
}

impl Default for ConstructiveOptions {
    fn default() -> Self {
        ConstructiveOptions {
            preprocess: Preprocess::Critical,
            coloring_budget: DEFAULT_COLORING_BUDGET,
            finish_budget: DEFAULT_FINISH_BUDGET,
            fallback: None,
        }
    }
}

/// One level of the recursion as it was executed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelRecord {
    pub depth: usize,
    pub k: usize,
    pub case: CaseTag,
    pub host_n: usize,
    pub min_degree: usize,
    pub grundy: bool,
    pub new_edges: usize,
    pub finish_nodes: u64,
}

/// A step that failed and what the exhaustive search said instead.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FalsificationReport {
    pub error: String,
    pub search_outcome: String,
    pub search_nodes: u64,
}

#[derive(Debug, Clone)]
pub struct ConstructiveOutcome {
    pub packing: Packing,
    pub trace: Vec<LevelRecord>,
    pub fallback: Option<FalsificationReport>,
}

/// A host reduced and colored once, reusable across families.
#[derive(Debug, Clone)]
pub struct PreparedHost {
    pub original: Graph,
    pub k: usize,
    pub host: Graph,
    /// host id -> original id
    pub map: Vec<usize>,
    pub coloring: OrderedColoring,
}

impl PreparedHost {
    pub fn new(g: &Graph, k: usize, opts: &ConstructiveOptions) -> Result<PreparedHost, PackError> {
        if k <= 1 {
            return Ok(PreparedHost {
                original: g.clone(),
                k,
                host: Graph::empty(0),
                map: Vec::new(),
                coloring: OrderedColoring {
                    classes: Vec::new(),
                },
            });
        }
        let (host, map) = match opts.preprocess {
            Preprocess::Critical => {
                critical_subgraph(g, k, opts.coloring_budget).map_err(|e| match e {
                    ColoringError::WrongChromaticNumber { actual, .. } => {
                        PackError::NotKChromatic {
                            expected: k,
                            detail: format!("chromatic number is {actual}"),
                        }
                    }
                    other => PackError::Coloring(other),
                })?
            }
            Preprocess::Core => k_core(g, k - 1),
        };
        let colors = find_coloring(&host, k, opts.coloring_budget)?.ok_or_else(|| {
            PackError::NotKChromatic {
                expected: k,
                detail: "the reduced host needs more colors".into(),
            }
        })?;
        let coloring = grundy_refine(&host, &OrderedColoring::from_colors(&colors))?;
        if coloring.k() != k {
            return Err(PackError::NotKChromatic {
                expected: k,
                detail: format!(
                    "the reduced host has a Grundy coloring with {} classes",
                    coloring.k()
                ),
            });
        }
        Ok(PreparedHost {
            original: g.clone(),
            k,
            host,
            map,
            coloring,
        })
    }

    pub fn pack(
        &self,
        family: &TreeFamily,
        opts: &ConstructiveOptions,
    ) -> Result<ConstructiveOutcome, PackError> {
        if family.k() != self.k {
            return Err(PackError::NotKChromatic {
                expected: family.k(),
                detail: format!("host was prepared for k = {}", self.k),
            });
        }
        let nonstars = family.non_star_count();
        if nonstars > 3 {
            return Err(PackError::TooManyNonStars(nonstars));
        }
        let mut trace = Vec::new();
        let attempt =
            pack_level(&self.host, &self.coloring, family, 0, opts, &mut trace).and_then(|emb| {
                let p = Packing::from_embeddings(family, &emb).lifted(&self.map);
                let report = verify_packing(&self.original, family, &p);
                if report.ok {
                    Ok(p)
                } else {
                    Err(PackError::Invariant {
                        depth: 0,
                        detail: format!("lifted packing rejected: {}", report.to_json()),
                    })
                }
            });
        match attempt {
            Ok(packing) => Ok(ConstructiveOutcome {
                packing,
                trace,
                fallback: None,
            }),
            Err(e @ (PackError::Coloring(_) | PackError::Tree(_))) => Err(e),
            Err(e) => {
                let Some(budget) = opts.fallback else {
                    return Err(e);
                };
                let res = pack_exhaustive(
                    &self.original,
                    family,
                    &SearchOptions {
                        budget,
                        twin_pruning: false,
                    },
                );
                let report = FalsificationReport {
                    error: e.to_string(),
                    search_outcome: res.outcome.label().to_string(),
                    search_nodes: res.nodes,
                };
                match res.outcome {
                    SearchOutcome::Sat(packing) => Ok(ConstructiveOutcome {
                        packing,
                        trace,
                        fallback: Some(report),
                    }),
                    _ => Err(e),
                }
            }
        }
    }
}

/// Packs `family` into `g`, which must have chromatic number `family.k()`.
pub fn pack_constructive(
    g: &Graph,
    family: &TreeFamily,
    opts: &ConstructiveOptions,
) -> Result<ConstructiveOutcome, PackError> {
    let nonstars = family.non_star_count();
    if nonstars > 3 {
        return Err(PackError::TooManyNonStars(nonstars));
    }
    PreparedHost::new(g, family.k(), opts)?.pack(family, opts)
}

fn base_plan(k: usize) -> ReductionPlan {
    ReductionPlan {
        case: CaseTag::BaseKLe3,
        k,
        cuts: Vec::new(),
        deferred_stars: (2..=k).rev().collect(),
        depth_drop: k - 1,
    }
}

/// Packs `family` into `h` colored by the Grundy coloring `col`; returns
/// embeddings in `h`'s ids.
fn pack_level(
    h: &Graph,
    col: &OrderedColoring,
    family: &TreeFamily,
    depth: usize,
    opts: &ConstructiveOptions,
    trace: &mut Vec<LevelRecord>,
) -> Result<Vec<Embedding>, PackError> {
    let k = family.k();
    let broken = |detail: String| PackError::Invariant { depth, detail };
    if k <= 1 {
        return Ok(Vec::new());
    }
    if col.k() != k {
        return Err(broken(format!(
            "coloring has {} classes, family needs {k}",
            col.k()
        )));
    }
    let grundy = check_grundy(h, col)?;
    let min_degree = h.min_degree().unwrap_or(0);
    if !grundy || min_degree + 1 < k {
        return Err(broken(format!(
            "grundy = {grundy}, minimum degree {min_degree} at k = {k}"
        )));
    }

    let (plan, reduced) = if k <= 3 {
        let reduced = ReducedFamily {
            family: TreeFamily::new(Vec::new())?,
            sources: Vec::new(),
        };
        (base_plan(k), reduced)
    } else {
        let plan = select_reduction(family)?;
        let reduced = apply_reduction(family, &plan)?;
        (plan, reduced)
    };
    let new_edges = plan.new_edge_count();
    if new_edges + reduced.family.total_edges() != family.total_edges() {
        return Err(broken(format!(
            "{} colors {new_edges} new edges, accounting is off",
            plan.case
        )));
    }

    let m = k - plan.depth_drop;
    let sub: Vec<Embedding> = if m >= 2 {
        let (gm, cm, map_m) = peel_tail(h, col, m)?;
        let (core, map_c) = k_core(&gm, m - 1);
        let refined = grundy_refine(&core, &restrict(&cm, &map_c))?;
        if refined.k() != m {
            return Err(broken(format!(
                "core of G_{m} has a Grundy coloring with {} classes",
                refined.k()
            )));
        }
        let emb = pack_level(&core, &refined, &reduced.family, depth + 1, opts, trace)?;
        emb.into_iter()
            .map(|e| e.into_iter().map(|v| map_m[map_c[v]]).collect())
            .collect()
    } else {
        Vec::new()
    };

    let class_of = col.color_of(h.n())?;
    let input = FinishInput {
        host: h,
        class_of: &class_of,
        family,
        plan: &plan,
        reduced: &reduced,
        sub: &sub,
        budget: opts.finish_budget,
    };
    let (emb, finish_nodes) = complete_embedding(&input).map_err(|f| PackError::Finish {
        case: plan.case,
        depth,
        nodes: f.nodes,
        dump: f.dump,
    })?;
    let report = verify_packing(h, family, &Packing::from_embeddings(family, &emb));
    if !report.ok {
        return Err(broken(format!(
            "{} produced an invalid packing: {}",
            plan.case,
            report.to_json()
        )));
    }
    trace.push(LevelRecord {
        depth,
        k,
        case: plan.case,
        host_n: h.n(),
        min_degree,
        grundy,
        new_edges,
        finish_nodes,
    });
    Ok(emb)
}

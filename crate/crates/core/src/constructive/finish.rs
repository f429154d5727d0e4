//! Finishing one inductive step: lift the reduced packing, put the removed
//! leaves and pending stars back through the low color classes, and color
//! the deferred stars.
//!
//! The proof fixes which class each new vertex comes from and argues the
//! remaining choices ("without loss of generality") by relabeling. Here
//! those choices are realized by a bounded depth-first search over
//! 1. the automorphism of each reduced tree (which copy of an attachment
//!    vertex is used),
//! 2. the new vertex of every piece, preferred classes first, and
//! 3. the centers and leaves of the deferred stars.
//!
//! Every choice the proof makes is inside this search space, so the search
//! only fails when the proof step fails on the instance.

use std::fmt::Write as _;

use super::plan::{Piece, ReducedFamily, ReductionPlan, SlotSource};
use crate::graph::Graph;
use crate::packing::Embedding;
use crate::tree::{automorphisms, TreeFamily};

/// Upper bound on automorphisms tried per reduced tree.
const AUTOMORPHISM_CAP: usize = 5040;

const NONE: usize = usize::MAX;

pub struct FinishInput<'a> {
    pub host: &'a Graph,
    /// 0-based class index of every host vertex.
    pub class_of: &'a [usize],
    pub family: &'a TreeFamily,
    pub plan: &'a ReductionPlan,
    pub reduced: &'a ReducedFamily,
    /// Embeddings of the reduced family, in host ids.
    pub sub: &'a [Embedding],
    pub budget: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinishFailure {
    pub nodes: u64,
    pub exhausted_budget: bool,
    pub dump: String,
}

#[derive(Debug, Clone, Copy)]
enum Step {
    /// Pick an automorphism image for cut `c`.
    Auto(usize),
    /// New vertex for piece `p` of cut `c`; `g` is its group when the
    /// piece is a pending star.
    Attach {
        c: usize,
        p: usize,
        g: usize,
    },
    /// Center of deferred star group `g`.
    StarCenter(usize),
    /// `j`-th leaf of group `g` (pending star or deferred star).
    Leaf {
        g: usize,
        j: usize,
    },
    Done,
}

/// A star being grown: its center's tree vertex, its leaves' tree
/// vertices, and which tree it belongs to.
struct Group {
    order: usize,
    tree_center: usize,
    tree_leaves: Vec<usize>,
    /// `Some(c)` for a pending star of cut `c`, `None` for a deferred star.
    cut: Option<usize>,
    host_center: usize,
    cands: Vec<usize>,
    pos: Vec<usize>,
}

struct Finisher<'a> {
    inp: &'a FinishInput<'a>,
    n: usize,
    t: usize,
    used: Vec<bool>,
    free_deg: Vec<usize>,
    /// embeddings of the full family, indexed by `order - 2`
    emb: Vec<Embedding>,
    /// per cut: host vertices in the current image of the tree
    image: Vec<Vec<bool>>,
    /// per cut: candidate kept-vertex embeddings, one per distinct
    /// projection onto the attachment vertices
    projections: Vec<Vec<Embedding>>,
    groups: Vec<Group>,
    anchors: Vec<usize>,
    steps: Vec<Step>,
    nodes: u64,
    aborted: bool,
}

impl<'a> Finisher<'a> {
    fn edge_id(&self, a: usize, b: usize) -> usize {
        a * self.n + b
    }

    fn is_used(&self, a: usize, b: usize) -> bool {
        self.used[self.edge_id(a, b)]
    }

    fn set_used(&mut self, a: usize, b: usize, on: bool) {
        let (i, j) = (self.edge_id(a, b), self.edge_id(b, a));
        debug_assert_ne!(self.used[i], on);
        self.used[i] = on;
        self.used[j] = on;
        if on {
            self.free_deg[a] -= 1;
            self.free_deg[b] -= 1;
        } else {
            self.free_deg[a] += 1;
            self.free_deg[b] += 1;
        }
    }

    fn new(inp: &'a FinishInput<'a>) -> Finisher<'a> {
        let n = inp.host.n();
        let plan = inp.plan;
        let family = inp.family;
        let mut f = Finisher {
            inp,
            n,
            t: plan.depth_drop,
            used: vec![false; n * n],
            free_deg: inp.host.degrees(),
            emb: family.trees().iter().map(|t| vec![NONE; t.n()]).collect(),
            image: vec![vec![false; n]; plan.cuts.len()],
            projections: vec![Vec::new(); plan.cuts.len()],
            groups: Vec::new(),
            anchors: Vec::new(),
            steps: Vec::new(),
            nodes: 0,
            aborted: false,
        };

        // everything the recursion colored is taken
        for (j, src) in inp.reduced.sources.iter().enumerate() {
            let tree = &inp.reduced.family.trees()[j];
            let sub = &inp.sub[j];
            for e in tree.edges() {
                f.set_used(sub[e.u], sub[e.v], true);
            }
            match src {
                SlotSource::Kept(order) => f.emb[order - 2] = sub.clone(),
                SlotSource::Cut { cut, pruned } => {
                    let attach: Vec<usize> = plan.cuts[*cut]
                        .pieces
                        .iter()
                        .map(|r| pruned.new_id(r.attach).expect("attachment kept"))
                        .collect();
                    let mut seen: Vec<Vec<usize>> = Vec::new();
                    for sigma in automorphisms(tree, AUTOMORPHISM_CAP) {
                        let key: Vec<usize> = attach.iter().map(|&a| sub[sigma[a]]).collect();
                        if seen.contains(&key) {
                            continue;
                        }
                        seen.push(key);
                        let mut full = vec![NONE; family.get(plan.cuts[*cut].order).n()];
                        for (v, &old) in pruned.kept.iter().enumerate() {
                            full[old] = sub[sigma[v]];
                        }
                        f.projections[*cut].push(full);
                    }
                }
            }
        }

        for c in 0..plan.cuts.len() {
            f.steps.push(Step::Auto(c));
        }
        for (c, cut) in plan.cuts.iter().enumerate() {
            for (p, r) in cut.pieces.iter().enumerate() {
                let g = match &r.piece {
                    Piece::Leaf { .. } => NONE,
                    Piece::PendingStar { center, leaves } => {
                        f.groups.push(Group {
                            order: cut.order,
                            tree_center: *center,
                            tree_leaves: leaves.clone(),
                            cut: Some(c),
                            host_center: NONE,
                            cands: Vec::new(),
                            pos: vec![NONE; leaves.len()],
                        });
                        f.groups.len() - 1
                    }
                };
                f.steps.push(Step::Attach { c, p, g });
                if g != NONE {
                    for j in 0..f.groups[g].tree_leaves.len() {
                        f.steps.push(Step::Leaf { g, j });
                    }
                }
            }
        }
        let mut deferred = plan.deferred_stars.clone();
        deferred.sort_unstable_by(|a, b| b.cmp(a));
        for s in deferred {
            let star = family.get(s);
            let center = (0..star.n())
                .max_by_key(|&v| (star.degree(v), std::cmp::Reverse(v)))
                .unwrap();
            let leaves: Vec<usize> = (0..star.n()).filter(|&v| v != center).collect();
            f.groups.push(Group {
                order: s,
                tree_center: center,
                tree_leaves: leaves.clone(),
                cut: None,
                host_center: NONE,
                cands: Vec::new(),
                pos: vec![NONE; leaves.len()],
            });
            let g = f.groups.len() - 1;
            f.steps.push(Step::StarCenter(g));
            for j in 0..leaves.len() {
                f.steps.push(Step::Leaf { g, j });
            }
        }
        f.steps.push(Step::Done);
        f
    }

    /// Candidate new vertices for a piece hung at host vertex `at`:
    /// unused edge, outside the tree's image, inside `A_1..A_t`, ordered
    /// by the piece's class preference.
    fn attach_candidates(&self, c: usize, at: usize, prefer: &[usize]) -> Vec<usize> {
        let class_of = self.inp.class_of;
        let mut cands: Vec<usize> = self
            .inp
            .host
            .neighbors(at)
            .iter()
            .copied()
            .filter(|&h| class_of[h] < self.t && !self.is_used(at, h) && !self.image[c][h])
            .collect();
        let rank = |h: usize| {
            let class = class_of[h] + 1;
            prefer
                .iter()
                .position(|&p| p == class)
                .unwrap_or(prefer.len() + class)
        };
        cands.sort_by_key(|&h| (rank(h), h));
        cands
    }

    fn step(&mut self, s: usize) -> bool {
        self.nodes += 1;
        if self.nodes > self.inp.budget {
            self.aborted = true;
            return false;
        }
        match self.steps[s] {
            Step::Done => true,
            Step::Auto(c) => {
                let order = self.inp.plan.cuts[c].order;
                for i in 0..self.projections[c].len() {
                    let full = self.projections[c][i].clone();
                    for &h in full.iter().filter(|&&h| h != NONE) {
                        self.image[c][h] = true;
                    }
                    self.emb[order - 2] = full;
                    if self.step(s + 1) {
                        return true;
                    }
                    self.image[c].iter_mut().for_each(|b| *b = false);
                    if self.aborted {
                        return false;
                    }
                }
                false
            }
            Step::Attach { c, p, g } => {
                let cut = &self.inp.plan.cuts[c];
                let order = cut.order;
                let r = &cut.pieces[p];
                let at = self.emb[order - 2][r.attach];
                let new_vertex = match &r.piece {
                    Piece::Leaf { leaf } => *leaf,
                    Piece::PendingStar { center, .. } => *center,
                };
                for h in self.attach_candidates(c, at, &r.prefer) {
                    self.set_used(at, h, true);
                    self.image[c][h] = true;
                    self.emb[order - 2][new_vertex] = h;
                    self.anchors.push(h);
                    if g != NONE {
                        self.groups[g].host_center = h;
                        self.groups[g].cands = self.leaf_candidates(g, h);
                    }
                    let ok = self.step(s + 1);
                    if ok {
                        return true;
                    }
                    self.anchors.pop();
                    self.emb[order - 2][new_vertex] = NONE;
                    self.image[c][h] = false;
                    self.set_used(at, h, false);
                    if self.aborted {
                        return false;
                    }
                }
                false
            }
            Step::StarCenter(g) => {
                let need = self.groups[g].tree_leaves.len();
                for h in self.star_centers(need) {
                    self.groups[g].host_center = h;
                    self.groups[g].cands = self.leaf_candidates(g, h);
                    if self.groups[g].cands.len() < need {
                        continue;
                    }
                    let order = self.groups[g].order;
                    let tc = self.groups[g].tree_center;
                    self.emb[order - 2][tc] = h;
                    if self.step(s + 1) {
                        return true;
                    }
                    self.emb[order - 2][tc] = NONE;
                    if self.aborted {
                        return false;
                    }
                }
                false
            }
            Step::Leaf { g, j } => {
                let start = if j == 0 {
                    0
                } else {
                    self.groups[g].pos[j - 1] + 1
                };
                let remaining = self.groups[g].tree_leaves.len() - j;
                let total = self.groups[g].cands.len();
                if total < start + remaining {
                    return false;
                }
                let center = self.groups[g].host_center;
                let order = self.groups[g].order;
                let tree_leaf = self.groups[g].tree_leaves[j];
                let cut = self.groups[g].cut;
                for i in start..=total - remaining {
                    let h = self.groups[g].cands[i];
                    if self.is_used(center, h) || cut.is_some_and(|c| self.image[c][h]) {
                        continue;
                    }
                    self.groups[g].pos[j] = i;
                    self.set_used(center, h, true);
                    if let Some(c) = cut {
                        self.image[c][h] = true;
                    }
                    self.emb[order - 2][tree_leaf] = h;
                    if self.step(s + 1) {
                        return true;
                    }
                    self.emb[order - 2][tree_leaf] = NONE;
                    if let Some(c) = cut {
                        self.image[c][h] = false;
                    }
                    self.set_used(center, h, false);
                    if self.aborted {
                        return false;
                    }
                }
                false
            }
        }
    }

    /// Leaves for a star centered at `h`. Pending-star leaves avoid the
    /// tree's image and prefer vertices outside `A_1..A_t`; deferred-star
    /// leaves prefer vertices with few free edges, keeping busy vertices
    /// available as later centers.
    fn leaf_candidates(&self, g: usize, h: usize) -> Vec<usize> {
        let grp = &self.groups[g];
        let mut cands: Vec<usize> = self
            .inp
            .host
            .neighbors(h)
            .iter()
            .copied()
            .filter(|&x| !self.is_used(h, x) && grp.cut.is_none_or(|c| !self.image[c][x]))
            .collect();
        match grp.cut {
            Some(_) => cands.sort_by_key(|&x| (self.inp.class_of[x] < self.t, x)),
            None => cands.sort_by_key(|&x| (self.free_deg[x], x)),
        }
        cands
    }

    /// Centers for a deferred star with `need` edges: anchors chosen while
    /// re-attaching pieces first, then `A_1..A_t` by class, then the rest.
    fn star_centers(&self, need: usize) -> Vec<usize> {
        let class_of = self.inp.class_of;
        let mut out: Vec<usize> = Vec::new();
        for &a in &self.anchors {
            if !out.contains(&a) {
                out.push(a);
            }
        }
        let mut rest: Vec<usize> = (0..self.n).filter(|v| !out.contains(v)).collect();
        rest.sort_by_key(|&v| {
            (
                class_of[v] >= self.t,
                class_of[v],
                std::cmp::Reverse(self.free_deg[v]),
                v,
            )
        });
        out.extend(rest);
        out.retain(|&v| self.free_deg[v] >= need);
        out
    }

    fn dump(&self) -> String {
        let mut s = String::new();
        let plan = self.inp.plan;
        let _ = writeln!(
            s,
            "case {} at k = {} (t = {})",
            plan.case, plan.k, plan.depth_drop
        );
        let _ = writeln!(
            s,
            "host: {} vertices, {} edges",
            self.n,
            self.inp.host.edge_count()
        );
        for (c, cut) in plan.cuts.iter().enumerate() {
            let _ = writeln!(
                s,
                "cut T_{}: {} pieces, {} attachment images",
                cut.order,
                cut.pieces.len(),
                self.projections[c].len()
            );
        }
        let _ = writeln!(s, "deferred stars: {:?}", plan.deferred_stars);
        let class_sizes: Vec<usize> = (0..self.t)
            .map(|i| self.inp.class_of.iter().filter(|&&c| c == i).count())
            .collect();
        let _ = writeln!(s, "low class sizes: {class_sizes:?}");
        let _ = writeln!(s, "family: {}", self.inp.family.to_json());
        s
    }
}

/// Extends the reduced packing to the full family on the host and reports
/// the search nodes used. On failure the error carries a dump of the step.
pub fn complete_embedding(inp: &FinishInput<'_>) -> Result<(Vec<Embedding>, u64), FinishFailure> {
    let mut f = Finisher::new(inp);
    if f.step(0) {
        debug_assert!(f.emb.iter().all(|e| e.iter().all(|&h| h != NONE)));
        Ok((f.emb, f.nodes))
    } else {
        Err(FinishFailure {
            nodes: f.nodes,
            exhausted_budget: f.aborted,
            dump: f.dump(),
        })
    }
}

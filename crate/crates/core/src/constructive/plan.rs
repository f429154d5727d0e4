//! Case selection for one inductive step and the reduced family it
//! produces.
//!
//! Each step removes leaves or pending stars from at most three non-stars,
//! drops `t` stars, and leaves a family on orders `2..=k-t` that is packed
//! one level down into the top `k - t` color classes.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::PackError;
use crate::tree::{find_pending_stars, PendingStar, Pruned, Tree, TreeFamily};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CaseTag {
    BaseKLe3,
    Claim1,
    Claim2,
    Claim3,
    Claim4,
    Claim5,
    Case1,
    Case2_1,
    Case2_2_1,
    Case2_2_2_1,
    Case2_2_2_2,
    Case2_3_1,
    Case2_3_2_1,
    Case2_3_2_2,
}

impl CaseTag {
    pub const ALL: [CaseTag; 14] = [
        CaseTag::BaseKLe3,
        CaseTag::Claim1,
        CaseTag::Claim2,
        CaseTag::Claim3,
        CaseTag::Claim4,
        CaseTag::Claim5,
        CaseTag::Case1,
        CaseTag::Case2_1,
        CaseTag::Case2_2_1,
        CaseTag::Case2_2_2_1,
        CaseTag::Case2_2_2_2,
        CaseTag::Case2_3_1,
        CaseTag::Case2_3_2_1,
        CaseTag::Case2_3_2_2,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CaseTag::BaseKLe3 => "BASE_K_LE_3",
            CaseTag::Claim1 => "CLAIM1",
            CaseTag::Claim2 => "CLAIM2",
            CaseTag::Claim3 => "CLAIM3",
            CaseTag::Claim4 => "CLAIM4",
            CaseTag::Claim5 => "CLAIM5",
            CaseTag::Case1 => "CASE1",
            CaseTag::Case2_1 => "CASE2_1",
            CaseTag::Case2_2_1 => "CASE2_2_1",
            CaseTag::Case2_2_2_1 => "CASE2_2_2_1",
            CaseTag::Case2_2_2_2 => "CASE2_2_2_2",
            CaseTag::Case2_3_1 => "CASE2_3_1",
            CaseTag::Case2_3_2_1 => "CASE2_3_2_1",
            CaseTag::Case2_3_2_2 => "CASE2_3_2_2",
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// What hangs off an attachment vertex and has to be put back.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Piece {
    Leaf { leaf: usize },
    PendingStar { center: usize, leaves: Vec<usize> },
}

impl Piece {
    pub fn vertices(&self) -> Vec<usize> {
        match self {
            Piece::Leaf { leaf } => vec![*leaf],
            Piece::PendingStar { center, leaves } => {
                let mut v = leaves.clone();
                v.push(*center);
                v
            }
        }
    }

    pub fn edge_count(&self) -> usize {
        self.vertices().len()
    }
}

/// A removed piece, the vertex it hung from (ids of the original tree),
/// and the color classes (1-based) its new vertex is taken from, most
/// preferred first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reattach {
    pub attach: usize,
    pub piece: Piece,
    pub prefer: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeCut {
    pub order: usize,
    pub pieces: Vec<Reattach>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionPlan {
    pub case: CaseTag,
    pub k: usize,
    pub cuts: Vec<TreeCut>,
    /// Orders of the stars realized with new colors after the recursion.
    pub deferred_stars: Vec<usize>,
    /// `t`: the recursion continues on `G_{k-t}`.
    pub depth_drop: usize,
}

impl ReductionPlan {
    /// Edges colored while finishing this step.
    pub fn new_edge_count(&self) -> usize {
        let pieces: usize = self
            .cuts
            .iter()
            .flat_map(|c| &c.pieces)
            .map(|p| p.piece.edge_count())
            .sum();
        pieces + self.deferred_stars.iter().map(|s| s - 1).sum::<usize>()
    }
}

fn leaf(t: &Tree, v: usize) -> Reattach {
    Reattach {
        attach: v,
        piece: Piece::Leaf {
            leaf: t.leaf_of(v).expect("vertex has a leaf"),
        },
        prefer: Vec::new(),
    }
}

fn pending(r: &PendingStar) -> Reattach {
    Reattach {
        attach: r.neighbor,
        piece: Piece::PendingStar {
            center: r.center,
            leaves: r.leaves.clone(),
        },
        prefer: Vec::new(),
    }
}

fn prefer(mut r: Reattach, classes: &[usize]) -> Reattach {
    r.prefer = classes.to_vec();
    r
}

fn stars_of(t: &Tree) -> Vec<PendingStar> {
    find_pending_stars(t).unwrap_or_default()
}

/// Smallest-order pending star satisfying `pred`, ties by center id.
fn min_star<F: Fn(&PendingStar) -> bool>(t: &Tree, pred: F) -> Option<PendingStar> {
    stars_of(t)
        .into_iter()
        .filter(|r| pred(r))
        .min_by_key(|r| (r.order(), r.center))
}

/// Two pending stars of order 2 with distinct neighbors whose removal
/// keeps both neighbors.
fn order_two_pair(t: &Tree) -> Option<(PendingStar, PendingStar)> {
    let twos: Vec<PendingStar> = stars_of(t).into_iter().filter(|r| r.order() == 2).collect();
    for (i, a) in twos.iter().enumerate() {
        for b in &twos[i + 1..] {
            if a.neighbor != b.neighbor
                && !b.vertices().contains(&a.neighbor)
                && !a.vertices().contains(&b.neighbor)
            {
                return Some((a.clone(), b.clone()));
            }
        }
    }
    None
}

fn leaf_neighbors(t: &Tree, count: usize) -> Option<Vec<usize>> {
    let v = t.leaf_neighbors();
    (v.len() >= count).then(|| v[..count].to_vec())
}

/// A vertex with a leaf neighbor that lies outside `avoid`, smallest id.
fn leaf_neighbor_outside(t: &Tree, avoid: &[usize]) -> Option<usize> {
    t.leaf_neighbors().into_iter().find(|v| !avoid.contains(v))
}

/// Picks the inductive step for `family` following the proof order:
/// the base, Claims 1 to 4, Claim 5 (only reachable at `k = 6`), then
/// Case 1 or the Case 2 subtree. Ties inside a case go to the smallest
/// pending-star order, then the smallest vertex id.
pub fn select_reduction(family: &TreeFamily) -> Result<ReductionPlan, PackError> {
    let k = family.k();
    let non_stars = family.non_star_count();
    if non_stars > 3 {
        return Err(PackError::TooManyNonStars(non_stars));
    }
    let plan = |case, cuts, deferred: Vec<usize>| {
        let t = deferred.len();
        Ok(ReductionPlan {
            case,
            k,
            cuts,
            deferred_stars: deferred,
            depth_drop: t,
        })
    };
    if k <= 3 {
        return plan(CaseTag::BaseKLe3, Vec::new(), Vec::new());
    }
    let tk = family.get(k);
    let tk1 = family.get(k - 1);
    let star = |i: usize| family.get(i).is_star();
    let exhausted = |why: &str| PackError::Dispatch {
        k,
        detail: why.to_string(),
        family: family.to_json(),
    };

    if tk.is_star() {
        return plan(CaseTag::Claim1, Vec::new(), vec![k]);
    }
    if tk1.is_star() {
        let u = tk.leaf_neighbors()[0];
        let cut = TreeCut {
            order: k,
            pieces: vec![prefer(leaf(tk, u), &[1])],
        };
        return plan(CaseTag::Claim2, vec![cut], vec![k - 1]);
    }
    if k >= 5 && star(k - 2) && star(k - 3) {
        let uv = leaf_neighbors(tk, 2).ok_or_else(|| exhausted("T_k lacks two leaf neighbors"))?;
        let xy =
            leaf_neighbors(tk1, 2).ok_or_else(|| exhausted("T_{k-1} lacks two leaf neighbors"))?;
        let cuts = vec![
            TreeCut {
                order: k,
                pieces: vec![
                    prefer(leaf(tk, uv[0]), &[1, 2]),
                    prefer(leaf(tk, uv[1]), &[2, 1]),
                ],
            },
            TreeCut {
                order: k - 1,
                pieces: vec![
                    prefer(leaf(tk1, xy[0]), &[1, 2]),
                    prefer(leaf(tk1, xy[1]), &[2, 1]),
                ],
            },
        ];
        return plan(CaseTag::Claim3, cuts, vec![k - 2, k - 3]);
    }
    if let Some(r) = min_star(tk, |r| star(k - r.order())) {
        let cut = TreeCut {
            order: k,
            pieces: vec![prefer(pending(&r), &[1])],
        };
        return plan(CaseTag::Claim4, vec![cut], vec![k - r.order()]);
    }
    if k == 6 {
        // T_6 and T_5 are non-stars and T_4 = P_4; every pending star of
        // T_6 has order 2
        let r = min_star(tk, |r| r.order() == 2)
            .ok_or_else(|| exhausted("T_6 without order-2 pending star"))?;
        let t4 = family.get(4);
        let cuts = vec![
            TreeCut {
                order: 6,
                pieces: vec![prefer(pending(&r), &[1])],
            },
            TreeCut {
                order: 4,
                pieces: vec![prefer(leaf(t4, t4.leaf_neighbors()[0]), &[1])],
            },
        ];
        return plan(CaseTag::Claim5, cuts, vec![3]);
    }
    if k < 7 {
        return Err(exhausted("no claim applies below k = 7"));
    }

    let orders: Vec<usize> = stars_of(tk).iter().map(PendingStar::order).collect();
    match (star(k - 2), star(k - 3)) {
        (true, false) => {
            if orders.iter().any(|&r| r != 3) {
                return Err(exhausted(
                    "Case 1 needs every pending star of T_k to have order 3",
                ));
            }
            let r = min_star(tk, |r| r.order() == 3).unwrap();
            let mut avoid = r.vertices();
            avoid.push(r.neighbor);
            let v = leaf_neighbor_outside(tk, &avoid)
                .ok_or_else(|| exhausted("Case 1: no leaf at v"))?;
            let x = tk1.leaf_neighbors()[0];
            let cuts = vec![
                TreeCut {
                    order: k,
                    pieces: vec![prefer(pending(&r), &[2, 1]), prefer(leaf(tk, v), &[1, 2])],
                },
                TreeCut {
                    order: k - 1,
                    pieces: vec![prefer(leaf(tk1, x), &[1, 2])],
                },
            ];
            plan(CaseTag::Case1, cuts, vec![k - 2, k - 4])
        }
        (false, true) => {
            if orders.iter().any(|&r| r != 2) {
                return Err(exhausted(
                    "Case 2 needs every pending star of T_k to have order 2",
                ));
            }
            case_two(family)
        }
        _ => Err(exhausted(
            "after the claims exactly one of T_{k-2}, T_{k-3} is a non-star",
        )),
    }
}

fn case_two(family: &TreeFamily) -> Result<ReductionPlan, PackError> {
    let k = family.k();
    let tk = family.get(k);
    let tk1 = family.get(k - 1);
    let tk2 = family.get(k - 2);
    let exhausted = |why: &str| PackError::Dispatch {
        k,
        detail: why.to_string(),
        family: family.to_json(),
    };
    let plan = |case, cuts, deferred: Vec<usize>| {
        let t = deferred.len();
        Ok(ReductionPlan {
            case,
            k,
            cuts,
            deferred_stars: deferred,
            depth_drop: t,
        })
    };

    if !tk.is_spider() {
        let (r1, r2) = order_two_pair(tk)
            .ok_or_else(|| exhausted("Case 2.1: no two order-2 pending stars"))?;
        let xy =
            leaf_neighbors(tk1, 2).ok_or_else(|| exhausted("T_{k-1} lacks two leaf neighbors"))?;
        let cuts = vec![
            TreeCut {
                order: k,
                pieces: vec![prefer(pending(&r1), &[1, 2]), prefer(pending(&r2), &[2, 1])],
            },
            TreeCut {
                order: k - 1,
                pieces: vec![
                    prefer(leaf(tk1, xy[0]), &[1, 2]),
                    prefer(leaf(tk1, xy[1]), &[2, 1]),
                ],
            },
        ];
        return plan(CaseTag::Case2_1, cuts, vec![k - 3, k - 4]);
    }

    let us =
        leaf_neighbors(tk, 3).ok_or_else(|| exhausted("spider T_k lacks three leaf neighbors"))?;
    // the three leaves of T_k; the class preference varies by sub-case
    let tk_cut = |p: [&[usize]; 3]| TreeCut {
        order: k,
        pieces: (0..3).map(|i| prefer(leaf(tk, us[i]), p[i])).collect(),
    };
    let stars1 = stars_of(tk1);

    if let Some(r) = min_star(tk1, |r| r.order() >= 4) {
        let wz =
            leaf_neighbors(tk2, 2).ok_or_else(|| exhausted("T_{k-2} lacks two leaf neighbors"))?;
        let cuts = vec![
            tk_cut([&[2], &[3], &[1]]),
            TreeCut {
                order: k - 1,
                pieces: vec![prefer(pending(&r), &[1])],
            },
            TreeCut {
                order: k - 2,
                pieces: vec![
                    prefer(leaf(tk2, wz[0]), &[2, 3]),
                    prefer(leaf(tk2, wz[1]), &[3, 2]),
                ],
            },
        ];
        return plan(
            CaseTag::Case2_2_1,
            cuts,
            vec![k - r.order() - 1, k - 4, k - 3],
        );
    }

    if let Some(r) = min_star(tk1, |r| r.order() == 3) {
        let red = TreeCut {
            order: k - 1,
            pieces: vec![prefer(pending(&r), &[3])],
        };
        if let Some(r2) = min_star(tk2, |r| r.order() >= 3) {
            let cuts = vec![
                tk_cut([&[2], &[1], &[3]]),
                red,
                TreeCut {
                    order: k - 2,
                    pieces: vec![prefer(pending(&r2), &[1])],
                },
            ];
            return plan(
                CaseTag::Case2_2_2_1,
                cuts,
                vec![k - r2.order() - 2, k - 4, k - 3],
            );
        }
        let r2 = min_star(tk2, |r| r.order() == 2)
            .ok_or_else(|| exhausted("T_{k-2} has no pending star"))?;
        let mut avoid = r2.vertices();
        avoid.push(r2.neighbor);
        let z = leaf_neighbor_outside(tk2, &avoid)
            .ok_or_else(|| exhausted("Case 2.2.2.2: no leaf at z"))?;
        let cuts = vec![
            tk_cut([&[2], &[1], &[3]]),
            red,
            TreeCut {
                order: k - 2,
                pieces: vec![prefer(pending(&r2), &[1]), prefer(leaf(tk2, z), &[2])],
            },
        ];
        return plan(CaseTag::Case2_2_2_2, cuts, vec![k - 5, k - 4, k - 3]);
    }

    if stars1.iter().any(|r| r.order() != 2) {
        return Err(exhausted(
            "T_{k-1} pending stars neither >= 3 nor all of order 2",
        ));
    }

    if !tk1.is_spider() {
        let (r, r2) = order_two_pair(tk1)
            .ok_or_else(|| exhausted("Case 2.2.3.1: no two order-2 pending stars"))?;
        let wz =
            leaf_neighbors(tk2, 2).ok_or_else(|| exhausted("T_{k-2} lacks two leaf neighbors"))?;
        let cuts = vec![
            tk_cut([&[2, 1], &[1, 2], &[3]]),
            TreeCut {
                order: k - 1,
                pieces: vec![prefer(pending(&r), &[1]), prefer(pending(&r2), &[2])],
            },
            TreeCut {
                order: k - 2,
                pieces: vec![
                    prefer(leaf(tk2, wz[0]), &[1, 2, 3]),
                    prefer(leaf(tk2, wz[1]), &[2, 3, 1]),
                ],
            },
        ];
        return plan(CaseTag::Case2_3_1, cuts, vec![k - 5, k - 4, k - 3]);
    }

    let xs = leaf_neighbors(tk1, 3)
        .ok_or_else(|| exhausted("spider T_{k-1} lacks three leaf neighbors"))?;
    if let Some(r) = min_star(tk2, |r| r.order() >= 3) {
        let cuts = vec![
            tk_cut([&[2], &[3], &[1]]),
            TreeCut {
                order: k - 1,
                pieces: vec![
                    prefer(leaf(tk1, xs[0]), &[2, 3]),
                    prefer(leaf(tk1, xs[1]), &[1]),
                    prefer(leaf(tk1, xs[2]), &[3, 2]),
                ],
            },
            TreeCut {
                order: k - 2,
                pieces: vec![prefer(pending(&r), &[1])],
            },
        ];
        return plan(
            CaseTag::Case2_3_2_1,
            cuts,
            vec![k - r.order() - 2, k - 4, k - 3],
        );
    }

    let r = min_star(tk2, |r| r.order() == 2)
        .ok_or_else(|| exhausted("T_{k-2} has no pending star"))?;
    let mut avoid = r.vertices();
    avoid.push(r.neighbor);
    let z = leaf_neighbor_outside(tk2, &avoid)
        .ok_or_else(|| exhausted("Case 2.2.3.2.2: no leaf at z"))?;
    let cuts = vec![
        tk_cut([&[2], &[1, 3], &[3, 1]]),
        TreeCut {
            order: k - 1,
            pieces: vec![
                prefer(leaf(tk1, xs[0]), &[2]),
                prefer(leaf(tk1, xs[1]), &[3]),
                prefer(leaf(tk1, xs[2]), &[1]),
            ],
        },
        TreeCut {
            order: k - 2,
            pieces: vec![prefer(leaf(tk2, z), &[1]), prefer(pending(&r), &[2])],
        },
    ];
    plan(CaseTag::Case2_3_2_2, cuts, vec![k - 5, k - 4, k - 3])
}

/// Where a tree of the reduced family came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SlotSource {
    /// `T_order` of the original family, untouched.
    Kept(usize),
    /// The remainder of `T_order` after cutting `plan.cuts[cut]`.
    Cut { cut: usize, pruned: Pruned },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReducedFamily {
    pub family: TreeFamily,
    /// `sources[j]` explains the tree of order `j + 2`.
    pub sources: Vec<SlotSource>,
}

/// Removes every piece of a cut at once. Each piece must be a leaf or a
/// whole pending star of the original tree, pieces must be disjoint, and
/// no attachment vertex may be removed.
pub fn cut_tree(t: &Tree, cut: &TreeCut) -> Result<Pruned, String> {
    let pending = stars_of(t);
    let mut removed: Vec<usize> = Vec::new();
    for r in &cut.pieces {
        match &r.piece {
            Piece::Leaf { leaf } => {
                if !t.is_leaf(*leaf) || !t.neighbors(*leaf).contains(&r.attach) {
                    return Err(format!("{leaf} is not a leaf at {}", r.attach));
                }
            }
            Piece::PendingStar { center, leaves } => {
                let ok = pending
                    .iter()
                    .any(|p| p.center == *center && &p.leaves == leaves && p.neighbor == r.attach);
                if !ok {
                    return Err(format!(
                        "{center} with {leaves:?} is not a pending star at {}",
                        r.attach
                    ));
                }
            }
        }
        removed.extend(r.piece.vertices());
    }
    removed.sort_unstable();
    let before = removed.len();
    removed.dedup();
    if removed.len() != before {
        return Err("pieces overlap".into());
    }
    if let Some(r) = cut
        .pieces
        .iter()
        .find(|r| removed.binary_search(&r.attach).is_ok())
    {
        return Err(format!(
            "attachment {} is removed by another piece",
            r.attach
        ));
    }
    let kept: Vec<usize> = (0..t.n())
        .filter(|v| removed.binary_search(v).is_err())
        .collect();
    if kept.len() < 2 {
        return Err("fewer than two vertices remain".into());
    }
    let (g, _) = t.graph().induced_subgraph(&kept);
    let tree = Tree::new(g).map_err(|e| e.to_string())?;
    let attachments = cut.pieces.iter().map(|r| r.attach).collect();
    Ok(Pruned {
        tree,
        kept,
        attachments,
    })
}

/// Builds the family on orders `2..=k-t`: untouched trees keep their
/// slots, each cut tree moves to the slot of its new order, deferred
/// stars vanish. Two trees landing on one order is a slot collision.
pub fn apply_reduction(
    family: &TreeFamily,
    plan: &ReductionPlan,
) -> Result<ReducedFamily, PackError> {
    let k = family.k();
    let collision = |detail: String| PackError::Slot {
        case: plan.case,
        detail,
    };
    let mut slots: BTreeMap<usize, (Tree, SlotSource)> = BTreeMap::new();
    let cut_orders: Vec<usize> = plan.cuts.iter().map(|c| c.order).collect();
    for &s in &plan.deferred_stars {
        if !(2..=k).contains(&s) || !family.get(s).is_star() {
            return Err(collision(format!(
                "deferred T_{s} is not a star of the family"
            )));
        }
        if cut_orders.contains(&s) {
            return Err(collision(format!("T_{s} is both cut and deferred")));
        }
    }
    for (order, t) in family.iter() {
        if plan.deferred_stars.contains(&order) || cut_orders.contains(&order) {
            continue;
        }
        slots.insert(order, (t.clone(), SlotSource::Kept(order)));
    }
    for (ci, cut) in plan.cuts.iter().enumerate() {
        let pruned = cut_tree(family.get(cut.order), cut)
            .map_err(|e| collision(format!("T_{}: {e}", cut.order)))?;
        let slot = pruned.tree.n();
        if slots.contains_key(&slot) {
            return Err(collision(format!(
                "T_{}' lands on occupied order {slot}",
                cut.order
            )));
        }
        slots.insert(
            slot,
            (pruned.tree.clone(), SlotSource::Cut { cut: ci, pruned }),
        );
    }
    let expected: Vec<usize> = (2..=k - plan.depth_drop).collect();
    if slots.keys().copied().collect::<Vec<_>>() != expected {
        return Err(collision(format!(
            "reduced orders {:?} differ from 2..={}",
            slots.keys().collect::<Vec<_>>(),
            k - plan.depth_drop
        )));
    }
    let (trees, sources): (Vec<Tree>, Vec<SlotSource>) = slots.into_values().unzip();
    let reduced = TreeFamily::new(trees).map_err(|e| collision(e.to_string()))?;
    if reduced.non_star_count() > 3 {
        return Err(collision(
            "reduced family has more than three non-stars".into(),
        ));
    }
    Ok(ReducedFamily {
        family: reduced,
        sources,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(trees: Vec<Tree>) -> TreeFamily {
        TreeFamily::new(trees).unwrap()
    }

    fn stars_upto(k: usize) -> Vec<Tree> {
        (2..=k).map(Tree::star).collect()
    }

    #[test]
    fn claim1_when_largest_is_star() {
        let p = select_reduction(&fam(stars_upto(5))).unwrap();
        assert_eq!(p.case, CaseTag::Claim1);
        assert_eq!(p.deferred_stars, vec![5]);
        let red = apply_reduction(&fam(stars_upto(5)), &p).unwrap();
        assert_eq!(red.family.k(), 4);
    }

    #[test]
    fn claim2_removes_one_leaf() {
        let mut trees = stars_upto(5);
        trees[3] = Tree::path(5);
        let f = fam(trees);
        let p = select_reduction(&f).unwrap();
        assert_eq!(p.case, CaseTag::Claim2);
        let red = apply_reduction(&f, &p).unwrap();
        // T_2, T_3, T_5'
        assert_eq!(red.family.k(), 4);
        assert!(matches!(red.sources[2], SlotSource::Cut { cut: 0, .. }));
        assert_eq!(red.sources[0], SlotSource::Kept(2));
    }

    #[test]
    fn claim4_slots_remainder() {
        // T_6 = chair extended: pending star of order 3 and T_3 a star
        let mut trees = stars_upto(6);
        trees[4] = Tree::spider(&[1, 1, 3]);
        trees[3] = Tree::path(5);
        trees[2] = Tree::path(4);
        let f = fam(trees);
        let p = select_reduction(&f).unwrap();
        assert_eq!(p.case, CaseTag::Claim4);
        assert_eq!(p.deferred_stars, vec![3]);
        let red = apply_reduction(&f, &p).unwrap();
        assert!(matches!(&red.sources[1], SlotSource::Cut { pruned, .. } if pruned.tree.n() == 3));
    }

    #[test]
    fn claim5_at_k6() {
        let f = fam(vec![
            Tree::path(2),
            Tree::path(3),
            Tree::path(4),
            Tree::path(5),
            Tree::path(6),
        ]);
        let p = select_reduction(&f).unwrap();
        assert_eq!(p.case, CaseTag::Claim5);
        let red = apply_reduction(&f, &p).unwrap();
        assert_eq!(red.family.k(), 5);
    }

    #[test]
    fn case_2_3_2_2_example() {
        // T_7 spider (2,2,2), T_6 spider (2,2,1), T_5 = P_5
        let f = fam(vec![
            Tree::star(2),
            Tree::star(3),
            Tree::star(4),
            Tree::path(5),
            Tree::spider(&[2, 2, 1]),
            Tree::spider(&[2, 2, 2]),
        ]);
        let p = select_reduction(&f).unwrap();
        assert_eq!(p.case, CaseTag::Case2_3_2_2);
        assert_eq!(p.depth_drop, 3);
        let red = apply_reduction(&f, &p).unwrap();
        assert_eq!(red.family.k(), 4);
    }

    #[test]
    fn too_many_non_stars() {
        let f = fam(vec![
            Tree::path(2),
            Tree::path(3),
            Tree::path(4),
            Tree::path(5),
            Tree::path(6),
            Tree::path(7),
        ]);
        assert!(matches!(
            select_reduction(&f),
            Err(PackError::TooManyNonStars(4))
        ));
    }

    #[test]
    fn cut_rejects_overlap() {
        let t = Tree::path(4);
        let cut = TreeCut {
            order: 4,
            pieces: vec![
                Reattach {
                    attach: 1,
                    piece: Piece::Leaf { leaf: 0 },
                    prefer: vec![],
                },
                Reattach {
                    attach: 2,
                    piece: Piece::PendingStar {
                        center: 1,
                        leaves: vec![0],
                    },
                    prefer: vec![],
                },
            ],
        };
        assert!(cut_tree(&t, &cut).is_err());
    }
}

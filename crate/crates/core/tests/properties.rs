mod common;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use treepack::coloring::{
    check_grundy, chromatic_number, greedy_coloring, grundy_refine, OrderedColoring,
};
use treepack::constructive::select_reduction;
use treepack::graph::{complete_graph, random_gnm};
use treepack::search::{pack_exhaustive, SearchOptions, SearchOutcome};
use treepack::tree::{
    all_families, canonical_form, classify, enumerate_free_trees, find_pending_stars, Tree,
};
use treepack::{verify_packing, Graph, TreeFamily};

fn random_tree(n: usize, seed: u64) -> Tree {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all = enumerate_free_trees(n).unwrap();
    all.choose(&mut rng).unwrap().clone()
}

fn perm(n: usize, seed: u64) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    p
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tree_invariants_survive_relabeling(n in 1usize..=10, seed in any::<u64>()) {
        let t = random_tree(n, seed);
        let r = t.relabeled(&perm(n, seed ^ 1));
        prop_assert_eq!(canonical_form(&t), canonical_form(&r));
        prop_assert_eq!(classify(&t), classify(&r));
    }

    #[test]
    fn edge_list_round_trips(n in 1usize..=15, frac in 0.0f64..=1.0, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = (frac * (n * (n - 1) / 2) as f64) as usize;
        let g = random_gnm(n, m, &mut rng);
        let back = Graph::parse_edge_list_text(&g.to_edge_list_text()).unwrap();
        prop_assert_eq!(back.n(), g.n());
        prop_assert_eq!(back.edges(), g.edges());
    }

    #[test]
    fn grundy_refinement_never_adds_colors(n in 1usize..=16, frac in 0.0f64..=1.0, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_gnm(n, (frac * (n * (n - 1) / 2) as f64) as usize, &mut rng);
        let proper = OrderedColoring::from_colors(&greedy_coloring(&g));
        let refined = grundy_refine(&g, &proper).unwrap();
        prop_assert!(check_grundy(&g, &refined).unwrap());
        prop_assert!(refined.k() <= proper.k());
    }

    #[test]
    fn chromatic_number_matches_brute_force(n in 1usize..=8, frac in 0.0f64..=1.0, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_gnm(n, (frac * (n * (n - 1) / 2) as f64) as usize, &mut rng);
        let c = chromatic_number(&g, 10_000_000).unwrap();
        prop_assert_eq!(c.chi, common::brute_chromatic(&g));
        prop_assert!(g.edges().iter().all(|e| c.witness[e.u] != c.witness[e.v]));
    }

    #[test]
    fn verifier_is_label_blind(k in 2usize..=5, seed in any::<u64>()) {
        let g = complete_graph(k + 1);
        let fams = all_families(k).unwrap();
        let f = &fams[(seed as usize) % fams.len()].1;
        let SearchOutcome::Sat(p) = pack_exhaustive(&g, f, &SearchOptions::default()).outcome else {
            panic!("complete host must pack");
        };
        let pi = perm(k + 1, seed);
        prop_assert!(verify_packing(&g.relabeled(&pi), f, &p.relabeled(&pi)).ok);
    }
}

#[test]
fn every_nonstar_has_a_pending_star() {
    for n in 4..=10 {
        for t in enumerate_free_trees(n).unwrap() {
            if t.is_star() {
                assert!(find_pending_stars(&t).is_err());
                continue;
            }
            let stars = find_pending_stars(&t).unwrap();
            assert!(!stars.is_empty(), "{}", canonical_form(&t));
            for s in stars {
                assert!(!t.is_leaf(s.neighbor));
                assert!(s
                    .leaves
                    .iter()
                    .all(|&l| t.is_leaf(l) && t.neighbors(s.center).contains(&l)));
                assert_eq!(t.degree(s.center), s.leaves.len() + 1);
            }
        }
    }
}

#[test]
fn dispatch_is_total_up_to_three_nonstars() {
    for k in 2..=8 {
        for (idx, f) in all_families(k).unwrap() {
            if f.non_star_count() <= 3 {
                assert!(select_reduction(&f).is_ok(), "k={k} {idx:?}");
            }
        }
    }
}

#[test]
fn shape_examples() {
    let p6 = Tree::path(6);
    assert!(p6.is_path() && !p6.is_spider() && !p6.is_star());
    assert!(Tree::path(5).is_spider());
    assert!(Tree::spider(&[1, 2, 2]).is_spider());
    // a leg of length 3 leaves a P_3 behind
    assert!(!Tree::spider(&[1, 2, 3]).is_spider());
    assert!(Tree::star(5).is_star() && Tree::star(5).is_spider());
    assert_eq!(Tree::path(4).centers().len(), 2);
    // T_2 and T_3 are forced to be stars
    assert_eq!(enumerate_free_trees(3).unwrap().len(), 1);
    assert!(
        TreeFamily::new(vec![Tree::path(2), Tree::path(3)])
            .unwrap()
            .non_star_count()
            == 0
    );
}

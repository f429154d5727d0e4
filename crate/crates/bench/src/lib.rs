//! Shared fixtures for the benchmarks.

use treepack::tree::all_families;
use treepack::TreeFamily;

/// Families for `k` with at most three non-star trees.
pub fn tractable_families(k: usize) -> Vec<TreeFamily> {
    all_families(k)
        .expect("k in range")
        .into_iter()
        .map(|(_, f)| f)
        .filter(|f| f.non_star_count() <= 3)
        .collect()
}

//! Helpers shared by the integration suites.
#![allow(dead_code)] // each suite uses its own subset

use polar_rm::domination::IndexSet;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn set(n: u32, members: &[u32]) -> IndexSet {
    IndexSet::new(n, members.iter().copied()).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every subset of `Z_{2^n}` as an `IndexSet`, for small `n`.
pub fn all_subsets(n: u32) -> impl Iterator<Item = IndexSet> {
    let size = 1u64 << (1 << n);
    (0..size).map(move |mask| IndexSet::from_mask(n, mask).unwrap())
}

/// All downward-closed subsets of `Z_{2^n}`.
pub fn downward_closed_sets(n: u32) -> Vec<IndexSet> {
    all_subsets(n).filter(|s| s.is_downward_closed()).collect()
}

/// All upward-closed subsets of `Z_{2^n}`.
pub fn upward_closed_sets(n: u32) -> Vec<IndexSet> {
    all_subsets(n).filter(|s| s.is_upward_closed()).collect()
}

/// Digit-by-digit reference implementation of the domination predicate.
pub fn dominates_digitwise(i: u32, j: u32, n: u32) -> bool {
    (0..n).all(|t| (i >> t & 1) <= (j >> t & 1))
}

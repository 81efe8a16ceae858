//! Cross-module invariants that are exhaustive rather than property-based:
//! the partition corollary of the Ramsey kernel, and the per-minimal-set
//! pattern bound at small stages.

use itertools::Itertools;

use forge_core::patterns::per_minimal_set_pattern_bound;
use forge_core::thickness::ThickSearch;
use forge_core::*;
use num_bigint::BigUint;

/// Whenever two families cover all pairs of a 6-point universe, one of them
/// is thick up to level 3. Exhaustive over all 2-partitions of the pairs.
#[test]
fn covering_pair_families_have_a_thick_side() {
    let index = SubsetIndex::new(6, 2);
    assert_eq!(index.len(), 15);
    for mask in 0u64..(1 << 15) {
        let first = index.family_of(mask);
        let second = first.complement();
        let hit = matches!(
            first.thick_witness_upto(3).unwrap(),
            ThickSearch::Found { .. }
        ) || matches!(
            second.thick_witness_upto(3).unwrap(),
            ThickSearch::Found { .. }
        );
        assert!(hit, "partition {mask:b} has no thick side");
    }
}

/// Every level-2 minimal set over a 6-point universe realizes at most
/// 2^(2!) * N! patterns on stages of size 2, 3 and 4.
#[test]
fn minimal_sets_obey_the_pattern_bound_on_small_stages() {
    let universe = FiniteStructure::set(6);
    let expansions = LinearOrder::all(2);
    for stage_size in 2..=4usize {
        let stage = FiniteStructure::set(stage_size);
        let bound = per_minimal_set_pattern_bound(2, stage_size);
        for e_mask in 0..4u8 {
            let expansion = expansions
                .iter()
                .enumerate()
                .filter(|(i, _)| e_mask & (1 << i) != 0)
                .map(|(_, o)| o.clone())
                .collect_vec();
            for ranking in (0..6).permutations(6) {
                let spec = MinimalSetSpec::for_sets(
                    2,
                    expansion.clone(),
                    LinearOrder::new(ranking).unwrap(),
                )
                .unwrap();
                let family = minimal_set(&spec, &universe).unwrap();
                let count = n_patterns(&family, &stage).unwrap().len();
                assert!(
                    BigUint::from(count) <= bound,
                    "stage {stage_size}, E mask {e_mask:b}: {count} patterns"
                );
            }
        }
    }
}

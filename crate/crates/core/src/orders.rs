//! Linear orders on a finite universe, agreement and anti-agreement sets,
//! the pullback of pair agreement to higher arity, and the block
//! construction realizing a prescribed agreement set.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::closure::lambda_op;
use crate::error::{Error, Result};
use crate::tuples::TupleFamily;

/// A total order on `{0..n-1}`, stored as the permutation listing vertices
/// in increasing order: `ranking[0]` is the least vertex.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct LinearOrder {
    n: usize,
    ranking: Vec<usize>,
}

impl LinearOrder {
    pub fn new(ranking: Vec<usize>) -> Result<Self> {
        let n = ranking.len();
        let mut seen = vec![false; n];
        for &v in &ranking {
            if v >= n || seen[v] {
                return Err(Error::invalid(format!(
                    "ranking {ranking:?} is not a permutation"
                )));
            }
            seen[v] = true;
        }
        Ok(LinearOrder { n, ranking })
    }

    /// The natural order `0 < 1 < ... < n-1`.
    pub fn natural(n: usize) -> Self {
        LinearOrder {
            n,
            ranking: (0..n).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn ranking(&self) -> &[usize] {
        &self.ranking
    }

    /// `positions()[v]` is the rank of vertex `v`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.n];
        for (rank, &v) in self.ranking.iter().enumerate() {
            pos[v] = rank;
        }
        pos
    }

    pub fn less(&self, a: usize, b: usize) -> bool {
        let pos = self.positions();
        pos[a] < pos[b]
    }

    pub fn reverse(&self) -> Self {
        LinearOrder {
            n: self.n,
            ranking: self.ranking.iter().rev().copied().collect(),
        }
    }

    /// All `n!` linear orders, in lexicographic ranking order.
    pub fn all(n: usize) -> Vec<Self> {
        (0..n)
            .permutations(n)
            .map(|ranking| LinearOrder { n, ranking })
            .collect()
    }

    /// The order induced on `{0..k-1}` by pulling this order back along the
    /// injection `map: [k] -> [n]`.
    pub fn pull_back(&self, map: &[usize]) -> Result<LinearOrder> {
        if map.iter().any(|&v| v >= self.n) {
            return Err(Error::TupleOutOfRange {
                tuple: map.to_vec(),
                n: self.n,
            });
        }
        let pos = self.positions();
        let mut indices = (0..map.len()).collect_vec();
        indices.sort_by_key(|&i| pos[map[i]]);
        Ok(LinearOrder {
            n: map.len(),
            ranking: indices,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct RawOrder {
    n: usize,
    ranking: Vec<usize>,
}

impl Serialize for LinearOrder {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RawOrder {
            n: self.n,
            ranking: self.ranking.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LinearOrder {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawOrder::deserialize(deserializer)?;
        if raw.ranking.len() != raw.n {
            return Err(D::Error::custom("ranking length does not match n"));
        }
        LinearOrder::new(raw.ranking).map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// The `m`-sets on which two orders induce identical rankings.
pub fn agreement_set(o0: &LinearOrder, o1: &LinearOrder, m: usize) -> Result<TupleFamily> {
    if o0.size() != o1.size() {
        return Err(Error::LevelMismatch {
            detail: "orders live on different universes".into(),
        });
    }
    let n = o0.size();
    if m > n {
        return Ok(TupleFamily::empty(m, n));
    }
    let p0 = o0.positions();
    let p1 = o1.positions();
    Ok(TupleFamily::from_fn(m, n, |t| {
        t.iter()
            .tuple_combinations()
            .all(|(&a, &b)| (p0[a] < p0[b]) == (p1[a] < p1[b]))
    }))
}

/// Agreement against the reversed second order.
pub fn anti_agreement_set(o0: &LinearOrder, o1: &LinearOrder, m: usize) -> Result<TupleFamily> {
    agreement_set(o0, &o1.reverse(), m)
}

/// The `m`-sets all of whose pairs lie in the given pair family. Feeding the
/// pair agreement set of two orders recovers their level-`m` agreement set.
pub fn pull_agreement_to_m(pair_agreement: &TupleFamily, m: usize) -> Result<TupleFamily> {
    if pair_agreement.arity() != 2 {
        return Err(Error::invalid("pair agreement must have arity 2"));
    }
    if m < 2 {
        return Err(Error::invalid("pullback arity must be at least 2"));
    }
    if m == 2 {
        return Ok(pair_agreement.clone());
    }
    lambda_op(pair_agreement, m, pair_agreement.universe())
}

/// Disjoint blocks inside `{0..n-1}`; whatever they do not cover is the
/// residue.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BlockPartition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl BlockPartition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n];
        for block in &blocks {
            for &v in block {
                if v >= n {
                    return Err(Error::TupleOutOfRange {
                        tuple: block.clone(),
                        n,
                    });
                }
                if seen[v] {
                    return Err(Error::invalid(format!(
                        "vertex {v} appears in two blocks"
                    )));
                }
                seen[v] = true;
            }
        }
        let blocks = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        Ok(BlockPartition { n, blocks })
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    /// Vertices not covered by any block.
    pub fn residue(&self) -> Vec<usize> {
        let mut covered = vec![false; self.n];
        for block in &self.blocks {
            for &v in block {
                covered[v] = true;
            }
        }
        (0..self.n).filter(|&v| !covered[v]).collect()
    }
}

#[derive(Serialize, Deserialize)]
struct RawBlocks {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Serialize for BlockPartition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RawBlocks {
            n: self.n,
            blocks: self.blocks.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for BlockPartition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawBlocks::deserialize(deserializer)?;
        BlockPartition::new(raw.n, raw.blocks).map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// The pair family `union over blocks E of [A meet E]^2`.
pub fn tilde(a: &[usize], blocks: &BlockPartition) -> Result<TupleFamily> {
    let marked = mark(a, blocks.universe())?;
    let mut members = BTreeSet::new();
    for block in blocks.blocks() {
        let inside = block.iter().copied().filter(|&v| marked[v]).collect_vec();
        for p in inside.iter().copied().combinations(2) {
            members.insert(p);
        }
    }
    TupleFamily::new(2, blocks.universe(), members)
}

fn mark(a: &[usize], n: usize) -> Result<Vec<bool>> {
    let mut marked = vec![false; n];
    for &v in a {
        if v >= n {
            return Err(Error::TupleOutOfRange {
                tuple: a.to_vec(),
                n,
            });
        }
        marked[v] = true;
    }
    Ok(marked)
}

/// Build two linear orders whose pair agreement set is exactly
/// `tilde(a, blocks)`.
///
/// The residue of `a` (everything unmarked) is ordered in complete
/// disagreement; each nonempty `A meet E_k` is then ordered agreeing with
/// itself and placed below everything so far in the first order and above
/// everything so far in the second. Every marked vertex must be covered by
/// a block, and a block meeting `a` in exactly one vertex is rejected.
pub fn build_block_orders(
    a: &[usize],
    blocks: &BlockPartition,
) -> Result<(LinearOrder, LinearOrder)> {
    let n = blocks.universe();
    let marked = mark(a, n)?;
    let mut covered = vec![false; n];
    let mut stages = Vec::new();
    for block in blocks.blocks() {
        let inside = block.iter().copied().filter(|&v| marked[v]).collect_vec();
        for &v in &inside {
            covered[v] = true;
        }
        if inside.len() == 1 {
            return Err(Error::SingletonBlockIntersection {
                block: block.clone(),
                vertex: inside[0],
            });
        }
        if !inside.is_empty() {
            stages.push(inside);
        }
    }
    if let Some(v) = (0..n).find(|&v| marked[v] && !covered[v]) {
        return Err(Error::UncoveredVertex { vertex: v });
    }

    // Residue first, in complete disagreement.
    let residue = (0..n).filter(|&v| !marked[v]).collect_vec();
    let mut first = residue.clone();
    let mut second = residue.iter().rev().copied().collect_vec();

    for stage in stages {
        // Below everything so far in the first order, above in the second.
        let mut next = stage.clone();
        next.extend(first);
        first = next;
        second.extend(stage);
    }

    let o0 = LinearOrder::new(first)?;
    let o1 = LinearOrder::new(second)?;

    // The construction is checked before it is returned.
    let achieved = agreement_set(&o0, &o1, 2)?;
    let expected = tilde(a, blocks)?;
    if achieved != expected {
        return Err(Error::invalid(format!(
            "block order construction missed its agreement set: got {achieved:?}, wanted {expected:?}"
        )));
    }
    Ok((o0, o1))
}

/// Largest guaranteed monochromatic clique size over all 2-colorings of the
/// pairs of a `k`-set: exact by exhaustion for `k <= 6`, the classical
/// `ceil(log2(k)/2)` guarantee beyond.
pub fn mono_clique_guarantee(k: usize) -> usize {
    const EXACT: [usize; 7] = [0, 1, 2, 2, 2, 2, 3];
    if k <= 6 {
        EXACT[k]
    } else {
        ((k as f64).log2() / 2.0).ceil() as usize
    }
}

/// Exhaustively recompute the guarantee for `k <= 6`; used to cross-check
/// the table in `mono_clique_guarantee`.
pub fn mono_clique_guarantee_exhaustive(k: usize) -> Result<usize> {
    if k > 6 {
        return Err(Error::CapExceeded {
            what: "exhaustive mono-clique guarantee",
            required: k as u128,
            cap: 6,
        });
    }
    if k == 0 {
        return Ok(0);
    }
    let pairs = crate::tuples::SubsetIndex::new(k, 2);
    let mut best = k;
    for coloring in 0u64..(1 << pairs.len()) {
        let mut max_mono = 1;
        for size in 2..=k {
            let found = (0..k).combinations(size).any(|x| {
                let cm = pairs.subsets_mask(&x);
                (coloring & cm) == 0 || (coloring & cm) == cm
            });
            if found {
                max_mono = size;
            } else {
                break;
            }
        }
        best = best.min(max_mono);
    }
    Ok(best)
}

/// Per-block outcome of the refinement: the maximum monochromatic subset
/// and its color vote (`None` for singleton blocks).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockVote {
    pub block: Vec<usize>,
    pub subset: Vec<usize>,
    pub color: Option<usize>,
    /// The asserted floor `b(2, |block|)` on the subset size.
    pub guarantee: usize,
}

/// For each block, extract a maximum subset monochromatic under the given
/// 2-coloring of within-block pairs (the coloring is the set of pairs in
/// color 1). The subset size is checked against the `b(2, k)` floor.
pub fn ramsey_refine_blocks(
    blocks: &BlockPartition,
    second_cell: &TupleFamily,
) -> Result<Vec<BlockVote>> {
    if second_cell.arity() != 2 || second_cell.universe() != blocks.universe() {
        return Err(Error::LevelMismatch {
            detail: "coloring must be a pair family over the block universe".into(),
        });
    }
    let mut votes = Vec::new();
    for block in blocks.blocks() {
        if block.len() <= 1 {
            votes.push(BlockVote {
                block: block.clone(),
                subset: block.clone(),
                color: None,
                guarantee: mono_clique_guarantee(block.len()),
            });
            continue;
        }
        let mut best: Option<(Vec<usize>, usize)> = None;
        for size in (2..=block.len()).rev() {
            for x in block.iter().copied().combinations(size) {
                let colors = x
                    .iter()
                    .copied()
                    .combinations(2)
                    .map(|p| second_cell.contains(&p))
                    .collect_vec();
                let color = if colors.iter().all(|&c| c) {
                    Some(1)
                } else if colors.iter().all(|&c| !c) {
                    Some(0)
                } else {
                    None
                };
                if let Some(color) = color {
                    best = Some((x, color));
                    break;
                }
            }
            if best.is_some() {
                break;
            }
        }
        let (subset, color) = best.expect("a pair is always monochromatic");
        let guarantee = mono_clique_guarantee(block.len());
        debug_assert!(subset.len() >= guarantee);
        votes.push(BlockVote {
            block: block.clone(),
            subset,
            color: Some(color),
            guarantee,
        });
    }
    Ok(votes)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn order(ranking: &[usize]) -> LinearOrder {
        LinearOrder::new(ranking.to_vec()).unwrap()
    }

    #[test]
    fn agreement_basics() {
        let o = LinearOrder::natural(4);
        assert_eq!(agreement_set(&o, &o, 2).unwrap(), TupleFamily::full(2, 4));
        assert!(agreement_set(&o, &o.reverse(), 2).unwrap().is_empty());
        assert_eq!(
            anti_agreement_set(&o, &o.reverse(), 2).unwrap(),
            TupleFamily::full(2, 4)
        );

        let o1 = order(&[1, 0, 2, 3]);
        let agree = agreement_set(&o, &o1, 2).unwrap();
        assert_eq!(
            agree,
            TupleFamily::new(
                2,
                4,
                [vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
            )
            .unwrap()
        );
        // m above the universe gives the empty family.
        assert!(agreement_set(&o, &o1, 5).unwrap().is_empty());
    }

    #[test]
    fn agreement_and_anti_agreement_partition_pairs() {
        for o0 in LinearOrder::all(4) {
            for o1 in LinearOrder::all(4) {
                let a = agreement_set(&o0, &o1, 2).unwrap();
                let b = anti_agreement_set(&o0, &o1, 2).unwrap();
                assert!(a.intersection(&b).unwrap().is_empty());
                assert_eq!(a.union(&b).unwrap(), TupleFamily::full(2, 4));
            }
        }
    }

    #[test]
    fn pullback_recovers_higher_agreement() {
        for o0 in LinearOrder::all(5).into_iter().step_by(7) {
            for o1 in LinearOrder::all(5).into_iter().step_by(11) {
                let pairs = agreement_set(&o0, &o1, 2).unwrap();
                for m in 2..=4 {
                    assert_eq!(
                        pull_agreement_to_m(&pairs, m).unwrap(),
                        agreement_set(&o0, &o1, m).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn pullback_of_disjoint_blocks_is_empty() {
        let pairs = TupleFamily::new(2, 6, [vec![2, 3], vec![4, 5]]).unwrap();
        assert!(pull_agreement_to_m(&pairs, 3).unwrap().is_empty());
        assert_eq!(pull_agreement_to_m(&pairs, 2).unwrap(), pairs);
    }

    #[test]
    fn tilde_examples() {
        let blocks = BlockPartition::new(6, vec![vec![2, 3], vec![4, 5]]).unwrap();
        assert!(tilde(&[], &blocks).unwrap().is_empty());
        assert_eq!(
            tilde(&[2, 3, 4, 5], &blocks).unwrap(),
            TupleFamily::new(2, 6, [vec![2, 3], vec![4, 5]]).unwrap()
        );
        let one_block = BlockPartition::new(5, vec![vec![2, 3, 4]]).unwrap();
        assert_eq!(
            tilde(&[2, 3, 4], &one_block).unwrap(),
            TupleFamily::new(2, 5, [vec![2, 3], vec![2, 4], vec![3, 4]]).unwrap()
        );
    }

    #[test]
    fn block_orders_match_worked_example() {
        let blocks = BlockPartition::new(6, vec![vec![2, 3], vec![4, 5]]).unwrap();
        let (o0, o1) = build_block_orders(&[2, 3, 4, 5], &blocks).unwrap();
        assert_eq!(o0.ranking(), &[4, 5, 2, 3, 0, 1]);
        assert_eq!(o1.ranking(), &[1, 0, 2, 3, 4, 5]);
        assert_eq!(
            agreement_set(&o0, &o1, 2).unwrap(),
            tilde(&[2, 3, 4, 5], &blocks).unwrap()
        );
    }

    #[test]
    fn block_orders_degenerate_cases() {
        // Whole universe in one block: the two orders agree everywhere.
        let blocks = BlockPartition::new(4, vec![vec![0, 1, 2, 3]]).unwrap();
        let (o0, o1) = build_block_orders(&[0, 1, 2, 3], &blocks).unwrap();
        assert_eq!(o0, o1);
        assert_eq!(
            agreement_set(&o0, &o1, 2).unwrap(),
            TupleFamily::full(2, 4)
        );

        // Empty marked set: mutually reversed orders, empty agreement.
        let blocks = BlockPartition::new(4, vec![]).unwrap();
        let (o0, o1) = build_block_orders(&[], &blocks).unwrap();
        assert_eq!(o1, o0.reverse());
        assert!(agreement_set(&o0, &o1, 2).unwrap().is_empty());
    }

    #[test]
    fn block_orders_reject_bad_inputs() {
        let blocks = BlockPartition::new(6, vec![vec![2, 3], vec![4, 5]]).unwrap();
        assert!(matches!(
            build_block_orders(&[2, 3, 4], &blocks),
            Err(Error::SingletonBlockIntersection { .. })
        ));
        assert!(matches!(
            build_block_orders(&[0, 2, 3], &blocks),
            Err(Error::UncoveredVertex { vertex: 0 })
        ));
    }

    #[test]
    fn guarantee_table_matches_exhaustion() {
        for k in 0..=6 {
            assert_eq!(
                mono_clique_guarantee(k),
                mono_clique_guarantee_exhaustive(k).unwrap(),
                "k = {k}"
            );
        }
        // R(3,3) = 6: the jump from 2 to 3 happens exactly at k = 6.
        assert_eq!(mono_clique_guarantee(5), 2);
        assert_eq!(mono_clique_guarantee(6), 3);
        assert_eq!(mono_clique_guarantee(7), 2); // classical floor only
    }

    #[test]
    fn refine_blocks_votes() {
        // Block of size 6 colored so that the red (color 0) triangle {0,2,4}
        // is a maximum monochromatic subset and the first one in search
        // order: red pairs are the triangle plus {1,3} and {1,5}, which
        // break every earlier triple without creating another red triangle
        // or a blue 4-clique.
        let blocks = BlockPartition::new(9, vec![(0..6).collect(), vec![6, 7], vec![8]]).unwrap();
        let red = [[0, 2], [0, 4], [2, 4], [1, 3], [1, 5]];
        let mut second = Vec::new();
        for a in 0..6usize {
            for b in (a + 1)..6 {
                if !red.contains(&[a, b]) {
                    second.push(vec![a, b]);
                }
            }
        }
        second.push(vec![6, 7]);
        let coloring = TupleFamily::new(2, 9, second).unwrap();
        let votes = ramsey_refine_blocks(&blocks, &coloring).unwrap();
        assert_eq!(votes.len(), 3);
        assert_eq!(votes[0].subset, vec![0, 2, 4]);
        assert_eq!(votes[0].color, Some(0));
        assert!(votes[0].subset.len() >= votes[0].guarantee);
        // Size-2 block: the pair itself and its color.
        assert_eq!(votes[1].subset, vec![6, 7]);
        assert_eq!(votes[1].color, Some(1));
        // Singleton block: no vote.
        assert_eq!(votes[2].subset, vec![8]);
        assert_eq!(votes[2].color, None);
    }
}

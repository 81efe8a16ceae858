//! Thick and thin families at a finite truncation: the order-forgetful map,
//! saturation, level-N thickness witnesses, the exhaustive Ramsey partition
//! kernel, and the mixed-set thinness certificate.

use itertools::Itertools;

use crate::cost::Caps;
use crate::embedding::{enumerate_embedding_maps, Embedding};
use crate::error::{Error, Result};
use crate::family::OrderedFamily;
use crate::structures::FiniteStructure;
use crate::tuples::{SubsetIndex, TupleFamily};

/// Apply the order-forgetful map: each member embedding collapses to its
/// (sorted) range.
pub fn forget_order(family: &OrderedFamily) -> TupleFamily {
    let n = family.universe().size();
    let m = family.level();
    let members = family.member_maps().map(|map| {
        let mut r = map.to_vec();
        r.sort_unstable();
        r
    });
    TupleFamily::new(m, n, members).expect("ranges of embeddings are valid tuples")
}

/// Smallest range-closed superset: the preimage of `forget_order(family)`
/// under the order-forgetful map. For pure sets this is exactly closure
/// under coordinate permutations.
pub fn saturate(family: &OrderedFamily) -> OrderedFamily {
    let ranges = forget_order(family);
    let mut range = vec![0usize; family.level()];
    OrderedFamily::from_fn(family.basis().clone(), |map| {
        range.copy_from_slice(map);
        range.sort_unstable();
        ranges.contains(&range)
    })
}

pub fn is_saturated(family: &OrderedFamily) -> bool {
    &saturate(family) == family
}

/// Result of a bounded thickness search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ThickSearch<W> {
    /// A full level-N witness.
    Found { level: usize, witness: W },
    /// No witness at this level, exhaustively.
    Absent,
    /// The level cannot fit in the universe at all.
    Exhausted,
}

impl<W> ThickSearch<W> {
    pub fn found(&self) -> Option<&W> {
        match self {
            ThickSearch::Found { witness, .. } => Some(witness),
            _ => None,
        }
    }
}

impl TupleFamily {
    /// Search for a vertex set `X` of the given size with `[X]^m` inside the
    /// family, smallest-lexicographic first.
    pub fn thick_witness_upto(&self, level: usize) -> Result<ThickSearch<Vec<usize>>> {
        if level < self.arity() {
            return Err(Error::invalid(format!(
                "witness level {level} below arity {}",
                self.arity()
            )));
        }
        if level > self.universe() {
            return Ok(ThickSearch::Exhausted);
        }
        let m = self.arity();
        for x in (0..self.universe()).combinations(level) {
            let all_in = x
                .iter()
                .copied()
                .combinations(m)
                .all(|t| self.contains(&t));
            if all_in {
                return Ok(ThickSearch::Found { level, witness: x });
            }
        }
        Ok(ThickSearch::Absent)
    }
}

/// Ordered analog: search for `s` in `Emb(stage, U)` with
/// `s . Emb(A_m, stage)` inside the family, lexicographic-first.
pub fn thick_witness_upto_ordered(
    family: &OrderedFamily,
    stage: &FiniteStructure,
) -> Result<ThickSearch<Embedding>> {
    let level = stage.size();
    if level < family.level() {
        return Err(Error::invalid(format!(
            "witness level {level} below family level {}",
            family.level()
        )));
    }
    let small = enumerate_embedding_maps(family.basis().source(), stage)?;
    let stage_maps = enumerate_embedding_maps(stage, family.universe())?;
    if stage_maps.is_empty() {
        return Ok(ThickSearch::Exhausted);
    }
    let mut composed = vec![0usize; family.level()];
    for s in stage_maps {
        let all_in = small.iter().all(|e| {
            for (k, &ev) in e.iter().enumerate() {
                composed[k] = s[ev];
            }
            family.contains_map(&composed)
        });
        if all_in {
            let witness = Embedding::new(stage.clone(), family.universe().clone(), s)?;
            return Ok(ThickSearch::Found { level, witness });
        }
    }
    Ok(ThickSearch::Absent)
}

/// Verdict of the exhaustive partition scan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RamseyPartition {
    /// Every 2-partition of the host's pairs has a monochromatic clique of
    /// the target size; `partitions_checked` colorings were scanned.
    Holds { partitions_checked: u64 },
    /// A partition with no monochromatic target clique, reported as the set
    /// of pairs in the second cell.
    Fails { second_cell: TupleFamily },
}

impl RamseyPartition {
    pub fn holds(&self) -> bool {
        matches!(self, RamseyPartition::Holds { .. })
    }
}

/// Check whether every 2-partition of `[host]^2` has a cell containing all
/// pairs of some `target`-sized vertex set. Exhaustive over all
/// `2^C(host,2)` partitions.
pub fn ramsey_partition_check(target: usize, host: usize, caps: &Caps) -> Result<RamseyPartition> {
    if target < 2 || host < target {
        return Err(Error::invalid(
            "ramsey partition check needs target >= 2 and host >= target",
        ));
    }
    if host > caps.ramsey_host {
        return Err(Error::CapExceeded {
            what: "ramsey partition host size",
            required: host as u128,
            cap: caps.ramsey_host as u128,
        });
    }
    let pairs = SubsetIndex::new(host, 2);
    let cliques = (0..host)
        .combinations(target)
        .map(|x| pairs.subsets_mask(&x))
        .collect_vec();
    let total = 1u64 << pairs.len();
    for coloring in 0..total {
        let mono = cliques
            .iter()
            .any(|&c| (coloring & c) == 0 || (coloring & c) == c);
        if !mono {
            return Ok(RamseyPartition::Fails {
                second_cell: pairs.family_of(coloring),
            });
        }
    }
    Ok(RamseyPartition::Holds {
        partitions_checked: total,
    })
}

/// For a concrete 2-partition of `[host]^2` (given by its second cell),
/// return a monochromatic `target`-clique and its cell (0 or 1), if any.
pub fn partition_mono_clique(
    host: usize,
    second_cell: &TupleFamily,
    target: usize,
) -> Result<Option<(Vec<usize>, usize)>> {
    if second_cell.arity() != 2 || second_cell.universe() != host {
        return Err(Error::LevelMismatch {
            detail: "second cell must be a pair family over the host".into(),
        });
    }
    for x in (0..host).combinations(target) {
        let in_second = x
            .iter()
            .copied()
            .combinations(2)
            .map(|p| second_cell.contains(&p))
            .collect_vec();
        if in_second.iter().all(|&b| b) {
            return Ok(Some((x, 1)));
        }
        if in_second.iter().all(|&b| !b) {
            return Ok(Some((x, 0)));
        }
    }
    Ok(None)
}

/// Certificate that the "mixed at level m" family derived from `S` is thin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedReport {
    /// The n-sets meeting both `S` and its complement at level m.
    pub mixed: TupleFamily,
    /// Size of the largest `X` with `[X]^n` inside the mixed family
    /// (0 when the mixed family is empty).
    pub largest_clique: usize,
    /// Lexicographically least clique of that size.
    pub clique: Vec<usize>,
    /// A monochromatic n-set (not mixed), with `true` when its level-m
    /// subsets all lie inside `S`.
    pub obstruction: Option<(Vec<usize>, bool)>,
    /// True when the largest clique falls short of the universe and a
    /// monochromatic obstruction exists.
    pub thin_certified: bool,
}

/// Compute the mixed family of `n`-sets whose level-`m` subsets meet both
/// `S` and its complement, and certify its thinness at desk scale.
pub fn mixed_set_is_thin(s: &TupleFamily, n: usize) -> Result<MixedReport> {
    let m = s.arity();
    let universe = s.universe();
    if n <= m || universe < n {
        return Err(Error::invalid(
            "mixed-set check needs arity < n <= universe size",
        ));
    }
    let mixed = TupleFamily::from_fn(n, universe, |a| {
        let mut hits = false;
        let mut misses = false;
        for t in a.iter().copied().combinations(m) {
            if s.contains(&t) {
                hits = true;
            } else {
                misses = true;
            }
            if hits && misses {
                return true;
            }
        }
        false
    });

    let mut largest_clique = 0;
    let mut clique = Vec::new();
    if !mixed.is_empty() {
        for size in (n..=universe).rev() {
            match mixed.thick_witness_upto(size)? {
                ThickSearch::Found { witness, .. } => {
                    largest_clique = size;
                    clique = witness;
                    break;
                }
                _ => continue,
            }
        }
    }

    let obstruction = (0..universe).combinations(n).find_map(|a| {
        if mixed.contains(&a) {
            return None;
        }
        let inside = a.iter().copied().combinations(m).all(|t| s.contains(&t));
        Some((a, inside))
    });

    let thin_certified = largest_clique < universe && obstruction.is_some();
    Ok(MixedReport {
        mixed,
        largest_clique,
        clique,
        obstruction,
        thin_certified,
    })
}

//! Minimal sets cut out by linear-order expansions, N-pattern enumeration
//! and the counting bounds that separate them, a full-pattern witness
//! construction, and exhaustive Ramsey-object / expansion-property checkers.

use std::collections::{BTreeSet, HashSet};

use bitvec::prelude::*;
use itertools::Itertools;
use num_bigint::BigUint;
use num_integer::binomial;
use num_traits::{One, ToPrimitive};

use crate::cost::Caps;
use crate::embedding::{enumerate_embedding_maps, enumerate_embeddings, Embedding};
use crate::error::{Error, Result};
use crate::family::{EmbeddingBasis, OrderedFamily};
use crate::orders::LinearOrder;
use crate::structures::{FiniteStructure, Flavor};

/// A minimal-set description: embeddings of the level structure along which
/// a fixed witness order pulls back into the chosen expansion set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalSetSpec {
    level: FiniteStructure,
    expansion: BTreeSet<LinearOrder>,
    witness_order: LinearOrder,
}

impl MinimalSetSpec {
    pub fn new(
        level: FiniteStructure,
        expansion: impl IntoIterator<Item = LinearOrder>,
        witness_order: LinearOrder,
    ) -> Result<Self> {
        let expansion: BTreeSet<LinearOrder> = expansion.into_iter().collect();
        for order in &expansion {
            if order.size() != level.size() {
                return Err(Error::LevelMismatch {
                    detail: format!(
                        "expansion order on {} points does not fit level size {}",
                        order.size(),
                        level.size()
                    ),
                });
            }
        }
        Ok(MinimalSetSpec {
            level,
            expansion,
            witness_order,
        })
    }

    /// Pure-set spec at level `m`.
    pub fn for_sets(
        m: usize,
        expansion: impl IntoIterator<Item = LinearOrder>,
        witness_order: LinearOrder,
    ) -> Result<Self> {
        Self::new(FiniteStructure::set(m), expansion, witness_order)
    }

    pub fn level(&self) -> &FiniteStructure {
        &self.level
    }

    pub fn expansion(&self) -> &BTreeSet<LinearOrder> {
        &self.expansion
    }

    pub fn witness_order(&self) -> &LinearOrder {
        &self.witness_order
    }
}

/// The family `{f in Emb(A_m, U) : K' pulled back along f lies in E}`.
pub fn minimal_set(spec: &MinimalSetSpec, universe: &FiniteStructure) -> Result<OrderedFamily> {
    if spec.witness_order.size() != universe.size() {
        return Err(Error::LevelMismatch {
            detail: format!(
                "witness order on {} points does not fit universe size {}",
                spec.witness_order.size(),
                universe.size()
            ),
        });
    }
    let basis = EmbeddingBasis::new(&spec.level, universe)?;
    let positions = spec.witness_order.positions();
    Ok(OrderedFamily::from_fn(basis, |map| {
        let pulled = pull_order(&positions, map);
        spec.expansion.contains(&pulled)
    }))
}

fn pull_order(witness_positions: &[usize], map: &[usize]) -> LinearOrder {
    let mut indices = (0..map.len()).collect_vec();
    indices.sort_by_key(|&i| witness_positions[map[i]]);
    LinearOrder::new(indices).expect("argsort is a permutation")
}

/// The trace of a family on a fixed stage: one bit per embedding of the
/// level structure into the stage.
pub type Pattern = BitVec;

/// The deduplicated patterns of a family on a stage, each with the first
/// stage embedding realizing it.
#[derive(Debug, Clone)]
pub struct PatternSet {
    level: FiniteStructure,
    stage: FiniteStructure,
    slots: Vec<Vec<usize>>,
    patterns: Vec<(Pattern, Embedding)>,
}

impl PatternSet {
    pub fn level(&self) -> &FiniteStructure {
        &self.level
    }

    pub fn stage(&self) -> &FiniteStructure {
        &self.stage
    }

    /// The pattern index space: `Emb(level, stage)` in lexicographic order.
    pub fn slots(&self) -> &[Vec<usize>] {
        &self.slots
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn patterns(&self) -> &[(Pattern, Embedding)] {
        &self.patterns
    }
}

/// The pattern a single stage embedding `y` induces: slot `f` is set when
/// `y . f` belongs to the family.
pub fn pattern_of(family: &OrderedFamily, slots: &[Vec<usize>], y: &[usize]) -> Pattern {
    let mut bits = bitvec![0; slots.len()];
    let mut composed = Vec::new();
    for (slot, f) in slots.iter().enumerate() {
        composed.clear();
        composed.extend(f.iter().map(|&v| y[v]));
        if family.contains_map(&composed) {
            bits.set(slot, true);
        }
    }
    bits
}

/// Every pattern of the family on the given stage, deduplicated, with one
/// realizing stage embedding each.
pub fn n_patterns(family: &OrderedFamily, stage: &FiniteStructure) -> Result<PatternSet> {
    let level = family.basis().source().clone();
    let slots = enumerate_embedding_maps(&level, stage)?;
    let ys = enumerate_embeddings(stage, family.universe())?;
    let mut seen = HashSet::new();
    let mut patterns = Vec::new();
    for y in ys {
        let bits = pattern_of(family, &slots, y.map());
        if seen.insert(bits.clone()) {
            patterns.push((bits, y));
        }
    }
    Ok(PatternSet {
        level,
        stage: stage.clone(),
        slots,
        patterns,
    })
}

fn factorial(n: usize) -> BigUint {
    (1..=n as u64).map(BigUint::from).fold(BigUint::one(), |a, b| a * b)
}

/// `2^(n!) * N!`: the ceiling on the patterns a single level-`n` minimal
/// set can realize on a stage of size `N`.
pub fn per_minimal_set_pattern_bound(n: usize, stage_size: usize) -> BigUint {
    let n_fact: usize = (1..=n).product();
    (BigUint::one() << n_fact) * factorial(stage_size)
}

/// `2^(2^k) * (2^(n!) * N!)^k`: the ceiling on patterns expressible as a
/// Boolean combination of `k` minimal sets at level `n` on a stage of size
/// `N`.
pub fn minimal_pattern_bound(n: usize, stage_size: usize, k: usize) -> Result<BigUint> {
    if n < 1 || stage_size < n {
        return Err(Error::invalid(
            "minimal pattern bound needs n >= 1 and a stage at least that large",
        ));
    }
    if k > 24 {
        return Err(Error::CapExceeded {
            what: "minimal pattern bound combination count",
            required: k as u128,
            cap: 24,
        });
    }
    let n_fact: usize = (1..=n).product();
    let per_set = (BigUint::one() << n_fact) * factorial(stage_size);
    Ok((BigUint::one() << (1usize << k)) * per_set.pow(k as u32))
}

fn checked_exponent(value: BigUint) -> Result<usize> {
    let cap: u64 = 1 << 24;
    match value.to_u64() {
        Some(v) if v <= cap => Ok(v as usize),
        _ => Err(Error::CapExceeded {
            what: "dense bound exponent",
            required: value.to_u128().unwrap_or(u128::MAX),
            cap: u128::from(cap),
        }),
    }
}

/// Lower bound on the number of patterns of a dense-orbit family on a stage
/// of size `N`: `2^(m! C(N,m))` for sets, `2^(ceil(C(N,r)/2))` for
/// `r`-uniform hypergraphs, `2^(ceil(C(N,2)/r))` for `K_r`-free graphs.
pub fn dense_pattern_lower_bound(
    flavor: Flavor,
    m_or_r: usize,
    stage_size: usize,
) -> Result<BigUint> {
    if stage_size < m_or_r {
        return Err(Error::invalid("stage must be at least the level size"));
    }
    let exponent = match flavor {
        Flavor::Set => {
            let m = m_or_r;
            factorial(m) * binomial(BigUint::from(stage_size), BigUint::from(m))
        }
        Flavor::Graph | Flavor::Hypergraph { .. } => {
            let r = match flavor {
                Flavor::Graph => 2,
                Flavor::Hypergraph { arity } => arity,
                _ => unreachable!(),
            };
            if m_or_r != r {
                return Err(Error::invalid(format!(
                    "level {m_or_r} does not match the class arity {r}"
                )));
            }
            (binomial(BigUint::from(stage_size), BigUint::from(r)) + BigUint::one())
                / BigUint::from(2u32)
        }
        Flavor::KrFree { r } => {
            if m_or_r != r {
                return Err(Error::invalid(format!(
                    "level {m_or_r} does not match the class bound {r}"
                )));
            }
            (binomial(BigUint::from(stage_size), BigUint::from(2u32))
                + BigUint::from(r - 1))
                / BigUint::from(r)
        }
    };
    Ok(BigUint::one() << checked_exponent(exponent)?)
}

/// Where the dense lower bound first overtakes the minimal-combination
/// bound.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossingReport {
    pub flavor: Flavor,
    pub base_level: usize,
    pub n: usize,
    pub k: usize,
    pub crossing: usize,
    pub minimal_bound: BigUint,
    pub dense_bound: BigUint,
}

const CROSSING_STAGE_CAP: usize = 64;

/// Scan stages `N = base, base+1, ..., 64` for the first where the dense
/// bound strictly exceeds the minimal-combination bound.
pub fn separation_crossing(flavor: Flavor, n: usize, k: usize) -> Result<CrossingReport> {
    let base_level = match flavor {
        Flavor::Set | Flavor::Graph | Flavor::KrFree { .. } => 2,
        Flavor::Hypergraph { arity } => arity,
    };
    let start = base_level.max(n);
    for stage in start..=CROSSING_STAGE_CAP {
        let dense = dense_pattern_lower_bound(flavor, base_level, stage)?;
        let minimal = minimal_pattern_bound(n, stage, k)?;
        if dense > minimal {
            return Ok(CrossingReport {
                flavor,
                base_level,
                n,
                k,
                crossing: stage,
                minimal_bound: minimal,
                dense_bound: dense,
            });
        }
    }
    Err(Error::NoCrossingInRange {
        cap: CROSSING_STAGE_CAP,
    })
}

/// A universe and family realizing every subset of `Emb(level, stage)` as a
/// pattern: one disjoint copy of the stage per target subset, the family
/// restricted to each copy spelling out its subset.
#[derive(Debug, Clone)]
pub struct FullPatternWitness {
    pub level: FiniteStructure,
    pub stage: FiniteStructure,
    pub universe: FiniteStructure,
    /// The family, stored sparsely as its member maps.
    pub members: BTreeSet<Vec<usize>>,
    /// Number of stage copies = number of target patterns.
    pub blocks: usize,
    /// Outcome of the per-copy canonical-inclusion check.
    pub verified: bool,
}

impl FullPatternWitness {
    pub fn contains(&self, map: &[usize]) -> bool {
        self.members.contains(map)
    }

    /// Materialize the family over the full embedding basis; only sensible
    /// for small universes.
    pub fn family(&self) -> Result<OrderedFamily> {
        if self.universe.size() > 256 {
            return Err(Error::CapExceeded {
                what: "full-pattern witness basis",
                required: self.universe.size() as u128,
                cap: 256,
            });
        }
        let basis = EmbeddingBasis::new(&self.level, &self.universe)?;
        Ok(OrderedFamily::from_fn(basis, |map| self.members.contains(map)))
    }
}

/// Canonical level structure for a flavor: an `m`-point set, or the single
/// edge when the class constrains the relation.
pub fn canonical_level(flavor: Flavor, m: usize) -> Result<FiniteStructure> {
    match flavor {
        Flavor::Set => Ok(FiniteStructure::set(m)),
        Flavor::Graph | Flavor::KrFree { .. } | Flavor::Hypergraph { .. } => {
            let arity = flavor.edge_arity().expect("relational flavor");
            if m != arity {
                return Err(Error::invalid(format!(
                    "level {m} does not match the class arity {arity}"
                )));
            }
            FiniteStructure::single_edge(flavor)
        }
    }
}

pub fn build_full_pattern_witness(
    m: usize,
    stage: &FiniteStructure,
    caps: &Caps,
) -> Result<FullPatternWitness> {
    let level = canonical_level(stage.flavor(), m)?;
    let slots = enumerate_embedding_maps(&level, stage)?;
    let q = slots.len();
    if q >= 64 {
        return Err(Error::CapExceeded {
            what: "full-pattern witness slot count",
            required: q as u128,
            cap: 63,
        });
    }
    let count = 1u128 << q;
    if count > caps.pattern_count {
        return Err(Error::CapExceeded {
            what: "full-pattern witness pattern count",
            required: count,
            cap: caps.pattern_count,
        });
    }
    let blocks = count as usize;
    let block_size = stage.size();

    let mut edges = Vec::new();
    for copy in 0..blocks {
        let shift = copy * block_size;
        for tuple in stage.relation() {
            edges.push(tuple.iter().map(|&v| v + shift).collect());
        }
    }
    let universe = FiniteStructure::new(stage.flavor(), blocks.max(1) * block_size, edges)?;

    let mut members = BTreeSet::new();
    for copy in 0..blocks {
        let shift = copy * block_size;
        for (slot, map) in slots.iter().enumerate() {
            if copy & (1 << slot) != 0 {
                members.insert(map.iter().map(|&v| v + shift).collect_vec());
            }
        }
    }

    // Canonical-inclusion check: each copy's realized pattern is its target
    // subset.
    let mut verified = true;
    for copy in 0..blocks {
        let shift = copy * block_size;
        for (slot, map) in slots.iter().enumerate() {
            let shifted = map.iter().map(|&v| v + shift).collect_vec();
            if members.contains(&shifted) != (copy & (1 << slot) != 0) {
                verified = false;
            }
        }
    }

    Ok(FullPatternWitness {
        level,
        stage: stage.clone(),
        universe,
        members,
        blocks,
        verified,
    })
}

/// Verdict of the exhaustive Ramsey-object check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RamseyObjectVerdict {
    /// Every coloring has a monochromatic copy of the middle structure.
    Ramsey { slots: usize },
    /// A coloring of `Emb(A, C)` (indexed lexicographically) on which every
    /// copy is polychromatic.
    NotRamsey { bad_coloring: Vec<u8> },
}

impl RamseyObjectVerdict {
    pub fn is_ramsey(&self) -> bool {
        matches!(self, RamseyObjectVerdict::Ramsey { .. })
    }
}

/// `h . Emb(a, b)` monochromatic under the given coloring of `Emb(a, c)`,
/// if any such `h` exists.
pub fn monochromatic_copy(
    a: &FiniteStructure,
    b: &FiniteStructure,
    c: &FiniteStructure,
    coloring: &[u8],
) -> Result<Option<Embedding>> {
    let slot_basis = EmbeddingBasis::new(a, c)?;
    if coloring.len() != slot_basis.len() {
        return Err(Error::invalid(format!(
            "coloring has {} entries for {} embeddings",
            coloring.len(),
            slot_basis.len()
        )));
    }
    let small = enumerate_embedding_maps(a, b)?;
    for h in enumerate_embeddings(b, c)? {
        let mut colors = small.iter().map(|g| {
            let composed = g.iter().map(|&v| h.apply(v)).collect_vec();
            coloring[slot_basis.rank_of(&composed).expect("composition embeds")]
        });
        let Some(first) = colors.next() else {
            continue;
        };
        if colors.all(|color| color == first) {
            return Ok(Some(h));
        }
    }
    Ok(None)
}

/// Decide whether every `r`-coloring of `Emb(a, c)` admits a monochromatic
/// copy of `b`. The search is a complete backtracking scan over colorings,
/// pruning as soon as a fully colored copy goes monochromatic, so the
/// verdict is exhaustive and a failure is the lexicographically least bad
/// coloring.
pub fn is_ramsey_witness(
    a: &FiniteStructure,
    b: &FiniteStructure,
    c: &FiniteStructure,
    r: usize,
    caps: &Caps,
) -> Result<RamseyObjectVerdict> {
    if r < 2 {
        return Err(Error::invalid("ramsey check needs at least two colors"));
    }
    let slot_basis = EmbeddingBasis::new(a, c)?;
    let q = slot_basis.len();
    let space = BigUint::from(r).pow(q as u32);
    if space > BigUint::from(caps.coloring_count) {
        return Err(Error::CapExceeded {
            what: "ramsey coloring space",
            required: u128::MAX,
            cap: caps.coloring_count,
        });
    }
    let small = enumerate_embedding_maps(a, b)?;
    // Copies: for each h in Emb(b, c), the slots of its composites.
    let mut copies = Vec::new();
    for h in enumerate_embedding_maps(b, c)? {
        let slots = small
            .iter()
            .map(|g| {
                let composed = g.iter().map(|&v| h[v]).collect_vec();
                slot_basis.rank_of(&composed).expect("composition embeds")
            })
            .collect_vec();
        copies.push(slots);
    }
    if copies.is_empty() || copies.iter().any(|c| c.is_empty()) {
        // No copy can be monochromatic (or monochromaticity is vacuous and
        // immediate); the all-zero coloring already decides the verdict.
        return Ok(if copies.iter().any(|c| c.is_empty()) {
            RamseyObjectVerdict::Ramsey { slots: q }
        } else {
            RamseyObjectVerdict::NotRamsey {
                bad_coloring: vec![0; q],
            }
        });
    }
    // copies_at[s]: indices of copies whose largest slot is s; such copies
    // become fully colored exactly when slot s receives its color.
    let mut copies_at = vec![Vec::new(); q];
    for (i, slots) in copies.iter().enumerate() {
        let last = slots.iter().copied().max().expect("nonempty");
        copies_at[last].push(i);
    }
    let mut coloring = vec![0u8; q];
    if search_bad_coloring(0, &mut coloring, &copies, &copies_at, r) {
        Ok(RamseyObjectVerdict::NotRamsey {
            bad_coloring: coloring,
        })
    } else {
        Ok(RamseyObjectVerdict::Ramsey { slots: q })
    }
}

fn search_bad_coloring(
    slot: usize,
    coloring: &mut [u8],
    copies: &[Vec<usize>],
    copies_at: &[Vec<usize>],
    r: usize,
) -> bool {
    if slot == coloring.len() {
        return true;
    }
    'colors: for color in 0..r as u8 {
        coloring[slot] = color;
        for &i in &copies_at[slot] {
            let first = coloring[copies[i][0]];
            if copies[i].iter().all(|&s| coloring[s] == first) {
                continue 'colors;
            }
        }
        if search_bad_coloring(slot + 1, coloring, copies, copies_at, r) {
            return true;
        }
    }
    false
}

/// Verdict of the expansion-property scan over all linear orders of the
/// target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExpansionVerdict {
    Holds { orders_checked: u128 },
    /// An order on the target admitting no order-preserving embedding.
    Fails { bad_order: LinearOrder },
}

impl ExpansionVerdict {
    pub fn holds(&self) -> bool {
        matches!(self, ExpansionVerdict::Holds { .. })
    }
}

/// Check that every linear order on `b` admits an embedding of the ordered
/// structure `(a, a_order)` that is order-preserving.
pub fn expansion_property_witness(
    a: &FiniteStructure,
    a_order: &LinearOrder,
    b: &FiniteStructure,
    caps: &Caps,
) -> Result<ExpansionVerdict> {
    if a_order.size() != a.size() {
        return Err(Error::LevelMismatch {
            detail: "order does not fit the structure".into(),
        });
    }
    let order_count = factorial(b.size());
    if order_count > BigUint::from(caps.order_count) {
        return Err(Error::CapExceeded {
            what: "expansion property order space",
            required: u128::MAX,
            cap: caps.order_count,
        });
    }
    let maps = enumerate_embedding_maps(a, b)?;
    let a_pos = a_order.positions();
    let mut checked = 0u128;
    for b_order in LinearOrder::all(b.size()) {
        let b_pos = b_order.positions();
        let found = maps.iter().any(|map| {
            (0..a.size()).tuple_combinations().all(|(i, j)| {
                (a_pos[i] < a_pos[j]) == (b_pos[map[i]] < b_pos[map[j]])
            })
        });
        if !found {
            return Ok(ExpansionVerdict::Fails { bad_order: b_order });
        }
        checked += 1;
    }
    Ok(ExpansionVerdict::Holds {
        orders_checked: checked,
    })
}

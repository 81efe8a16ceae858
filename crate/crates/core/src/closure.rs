//! The shadow/closure calculus on tuple families: the shadow operator, the
//! lambda operator, their composite psi (a closure operator), closed-set
//! enumeration, clique-free counting with the probabilistic bound, and the
//! near-closedness census.

use std::collections::BTreeSet;

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cost::Caps;
use crate::error::{Error, Result};
use crate::tuples::{SubsetIndex, TupleFamily};

/// All `m`-subsets of the members of an `n`-ary family (`m < n`).
pub fn shadow(t: &TupleFamily, m: usize) -> Result<TupleFamily> {
    if m >= t.arity() {
        return Err(Error::invalid(format!(
            "shadow arity {m} must be below the family arity {}",
            t.arity()
        )));
    }
    let mut members = BTreeSet::new();
    for tuple in t.members() {
        for sub in tuple.iter().copied().combinations(m) {
            members.insert(sub);
        }
    }
    TupleFamily::new(m, t.universe(), members)
}

/// All `n`-sets over `{0..universe-1}` whose `m`-subsets all lie in the
/// given `m`-ary family.
pub fn lambda_op(t: &TupleFamily, n: usize, universe: usize) -> Result<TupleFamily> {
    if n <= t.arity() {
        return Err(Error::invalid(format!(
            "lambda arity {n} must exceed the family arity {}",
            t.arity()
        )));
    }
    Ok(TupleFamily::from_fn(n, universe, |s| {
        s.iter().copied().combinations(t.arity()).all(|sub| t.contains(&sub))
    }))
}

/// The closure operator `psi = lambda . shadow` at lower arity `m`: the
/// largest family with the same level-`m` shadow.
pub fn psi(t: &TupleFamily, m: usize) -> Result<TupleFamily> {
    if t.is_empty() {
        return Ok(t.clone());
    }
    let sh = shadow(t, m)?;
    lambda_op(&sh, t.arity(), t.universe())
}

/// Arity pair for the closure calculus: `1 <= lower < upper <= universe`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosurePair {
    universe: usize,
    upper: usize,
    lower: usize,
}

impl ClosurePair {
    pub fn new(universe: usize, upper: usize, lower: usize) -> Result<Self> {
        if !(1 <= lower && lower < upper && upper <= universe) {
            return Err(Error::invalid(format!(
                "closure pair needs 1 <= lower < upper <= universe, got ({lower}, {upper}, {universe})"
            )));
        }
        Ok(ClosurePair {
            universe,
            upper,
            lower,
        })
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn upper(&self) -> usize {
        self.upper
    }

    pub fn lower(&self) -> usize {
        self.lower
    }
}

/// Mask-based engine for a fixed closure pair; usable whenever both subset
/// levels fit in 64 bits. Families at the upper arity are masks over the
/// lexicographic n-set index, generators are masks over the m-set index.
pub struct ClosureEngine {
    pair: ClosurePair,
    lower: SubsetIndex,
    upper: SubsetIndex,
    /// Per upper subset: the mask of its lower subsets.
    sub_masks: Vec<u64>,
}

impl ClosureEngine {
    pub fn new(pair: ClosurePair) -> Result<Self> {
        let lower = SubsetIndex::new(pair.universe, pair.lower);
        let upper = SubsetIndex::new(pair.universe, pair.upper);
        for (index, name) in [(&lower, "lower"), (&upper, "upper")] {
            if index.len() > 64 {
                return Err(Error::CapExceeded {
                    what: "closure engine mask width",
                    required: index.len() as u128,
                    cap: 64,
                });
            }
            let _ = name;
        }
        let sub_masks = (0..upper.len())
            .map(|i| {
                let mut mask = 0u64;
                for sub in upper.subset(i).iter().copied().combinations(pair.lower) {
                    mask |= 1 << lower.rank_of(&sub).expect("subset of the universe");
                }
                mask
            })
            .collect();
        Ok(ClosureEngine {
            pair,
            lower,
            upper,
            sub_masks,
        })
    }

    pub fn pair(&self) -> ClosurePair {
        self.pair
    }

    pub fn lower_index(&self) -> &SubsetIndex {
        &self.lower
    }

    pub fn upper_index(&self) -> &SubsetIndex {
        &self.upper
    }

    pub fn lambda_mask(&self, generator: u64) -> u64 {
        let mut out = 0u64;
        for (i, &sub) in self.sub_masks.iter().enumerate() {
            if sub & generator == sub {
                out |= 1 << i;
            }
        }
        out
    }

    pub fn shadow_mask(&self, family: u64) -> u64 {
        let mut out = 0u64;
        for (i, &sub) in self.sub_masks.iter().enumerate() {
            if family & (1 << i) != 0 {
                out |= sub;
            }
        }
        out
    }

    pub fn psi_mask(&self, family: u64) -> u64 {
        if family == 0 {
            return 0;
        }
        self.lambda_mask(self.shadow_mask(family))
    }

    /// Masks of the upper subsets of each `ell`-sized vertex set; a family
    /// mask contains an `ell`-clique exactly when it covers one of these.
    pub fn clique_masks(&self, ell: usize) -> Vec<u64> {
        (0..self.pair.universe)
            .combinations(ell)
            .map(|x| self.upper.subsets_mask(&x))
            .collect()
    }

    pub fn has_clique_mask(&self, family: u64, clique_masks: &[u64]) -> bool {
        clique_masks.iter().any(|&c| family | c == family)
    }
}

/// All closed sets of the pair over its universe: the deduplicated lambda
/// images of every generator family, in ascending mask order. These are
/// exactly the fixed points of psi.
pub fn enumerate_closed_sets(pair: ClosurePair, caps: &Caps) -> Result<Vec<TupleFamily>> {
    let engine = ClosureEngine::new(pair)?;
    let masks = enumerate_closed_masks(&engine, caps)?;
    Ok(masks
        .into_iter()
        .map(|m| engine.upper_index().family_of(m))
        .collect())
}

pub fn enumerate_closed_masks(engine: &ClosureEngine, caps: &Caps) -> Result<Vec<u64>> {
    let generators = engine.lower_index().len();
    let space = 1u128 << generators;
    if space > caps.closed_enum {
        return Err(Error::CapExceeded {
            what: "closed-set generator space",
            required: space,
            cap: caps.closed_enum,
        });
    }
    let mut masks = BTreeSet::new();
    for g in 0..(1u64 << generators) {
        masks.insert(engine.lambda_mask(g));
    }
    Ok(masks.into_iter().collect())
}

/// Lexicographically least vertex set of size `ell` all of whose
/// `n`-subsets lie in the family.
pub fn has_clique(t: &TupleFamily, ell: usize) -> Option<Vec<usize>> {
    if ell < t.arity() {
        return None;
    }
    // Every clique vertex occurs in some member.
    let support = {
        let mut seen = vec![false; t.universe()];
        for tuple in t.members() {
            for &v in tuple {
                seen[v] = true;
            }
        }
        (0..t.universe()).filter(|&v| seen[v]).collect_vec()
    };
    if support.len() < ell {
        return None;
    }
    support
        .into_iter()
        .combinations(ell)
        .find(|x| x.iter().copied().combinations(t.arity()).all(|s| t.contains(&s)))
}

/// Exact count of `ell`-clique-free families plus the probabilistic upper
/// bound on their proportion, derived from a greedily built family of
/// `ell`-sets pairwise intersecting in fewer than `n` points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueFreeReport {
    pub universe: usize,
    pub arity: usize,
    pub ell: usize,
    /// Total number of families, `2^C(universe, arity)`.
    pub total: u128,
    /// Families with no `ell`-clique.
    pub clique_free: u128,
    /// The greedy pairwise-sparse family of `ell`-sets (colex order).
    pub sparse_family: Vec<Vec<usize>>,
    /// Bound numerator `(2^c - 1)^f` with `c = C(ell, arity)`,
    /// `f = |sparse_family|`.
    pub bound_numerator: BigUint,
    /// Bound denominator `2^(c * f)`.
    pub bound_denominator: BigUint,
}

impl CliqueFreeReport {
    /// Measured proportion does not exceed the bound:
    /// `clique_free / total <= numerator / denominator`.
    pub fn bound_holds(&self) -> bool {
        BigUint::from(self.clique_free) * &self.bound_denominator
            <= &self.bound_numerator * BigUint::from(self.total)
    }
}

/// `ell`-subsets of the universe in colex order, keeping those meeting all
/// kept sets in fewer than `arity` points.
pub fn sparse_clique_family(universe: usize, arity: usize, ell: usize) -> Vec<Vec<usize>> {
    let mut all = (0..universe).combinations(ell).collect_vec();
    all.sort_by(|a, b| {
        a.iter()
            .rev()
            .zip(b.iter().rev())
            .find_map(|(x, y)| (x != y).then(|| x.cmp(y)))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let mut kept: Vec<Vec<usize>> = Vec::new();
    for candidate in all {
        let sparse = kept.iter().all(|k| {
            let mut count = 0;
            for v in k {
                if candidate.contains(v) {
                    count += 1;
                }
            }
            count < arity
        });
        if sparse {
            kept.push(candidate);
        }
    }
    kept
}

pub fn count_clique_free(
    universe: usize,
    arity: usize,
    ell: usize,
    caps: &Caps,
) -> Result<CliqueFreeReport> {
    if ell <= arity {
        return Err(Error::invalid("clique size must exceed the arity"));
    }
    let index = SubsetIndex::new(universe, arity);
    if index.len() > 64 {
        return Err(Error::CapExceeded {
            what: "clique-free mask width",
            required: index.len() as u128,
            cap: 64,
        });
    }
    let space = 1u128 << index.len();
    if space > caps.clique_free {
        return Err(Error::CapExceeded {
            what: "clique-free family space",
            required: space,
            cap: caps.clique_free,
        });
    }
    let clique_masks = (0..universe)
        .combinations(ell)
        .map(|x| index.subsets_mask(&x))
        .collect_vec();
    let mut clique_free = 0u128;
    for family in 0..(space as u64) {
        if !clique_masks.iter().any(|&c| family | c == family) {
            clique_free += 1;
        }
    }

    let sparse_family = sparse_clique_family(universe, arity, ell);
    let c = SubsetIndex::new(ell, arity).len();
    let f = sparse_family.len();
    let per_set = (BigUint::one() << c) - BigUint::one();
    let bound_numerator = per_set.pow(f as u32);
    let bound_denominator = BigUint::one() << (c * f);

    Ok(CliqueFreeReport {
        universe,
        arity,
        ell,
        total: space,
        clique_free,
        sparse_family,
        bound_numerator,
        bound_denominator,
    })
}

/// A near-closedness question: is the family within an `ell`-clique-free
/// symmetric difference of a union of at most `budget` closed sets?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NearClosedQuery {
    pub family: TupleFamily,
    pub lower: usize,
    pub ell: usize,
    pub budget: usize,
}

impl NearClosedQuery {
    pub fn new(family: TupleFamily, lower: usize, ell: usize, budget: usize) -> Result<Self> {
        if ell <= family.arity() {
            return Err(Error::invalid("clique bound must exceed the family arity"));
        }
        if budget == 0 {
            return Err(Error::invalid("union budget must be at least 1"));
        }
        if !(1 <= lower && lower < family.arity()) {
            return Err(Error::invalid("lower arity must satisfy 1 <= lower < arity"));
        }
        Ok(NearClosedQuery {
            family,
            lower,
            ell,
            budget,
        })
    }
}

/// A positive answer: the closed sets used and the symmetric difference,
/// which contains no `ell`-clique.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NearClosedWitness {
    pub closed_parts: Vec<TupleFamily>,
    pub difference: TupleFamily,
}

/// Exhaustive search over tuples of closed sets (budget at most 2).
pub fn is_near_closed(query: &NearClosedQuery, caps: &Caps) -> Result<Option<NearClosedWitness>> {
    if query.budget > 2 {
        return Err(Error::CapExceeded {
            what: "near-closed union budget",
            required: query.budget as u128,
            cap: 2,
        });
    }
    let pair = ClosurePair::new(query.family.universe(), query.family.arity(), query.lower)?;
    let engine = ClosureEngine::new(pair)?;
    let closed = enumerate_closed_masks(&engine, caps)?;
    let clique_masks = engine.clique_masks(query.ell);
    let s = engine.upper_index().mask_of(&query.family)?;

    let found = near_closed_mask(s, &closed, &clique_masks, query.budget, &engine);
    Ok(found.map(|parts| {
        let union = parts.iter().fold(0u64, |acc, &t| acc | t);
        NearClosedWitness {
            closed_parts: parts
                .iter()
                .map(|&t| engine.upper_index().family_of(t))
                .collect(),
            difference: engine.upper_index().family_of(s ^ union),
        }
    }))
}

/// Mask-level search; returns the first witness tuple in scan order.
pub fn near_closed_mask(
    s: u64,
    closed: &[u64],
    clique_masks: &[u64],
    budget: usize,
    engine: &ClosureEngine,
) -> Option<Vec<u64>> {
    for (i, &t0) in closed.iter().enumerate() {
        if !engine.has_clique_mask(s ^ t0, clique_masks) {
            return Some(vec![t0]);
        }
        if budget >= 2 {
            for &t1 in &closed[i + 1..] {
                if !engine.has_clique_mask(s ^ (t0 | t1), clique_masks) {
                    return Some(vec![t0, t1]);
                }
            }
        }
    }
    None
}

/// Each `n`-set included independently with probability `p`; deterministic
/// per seed.
pub fn random_hypergraph(
    universe: usize,
    arity: usize,
    p: f64,
    seed: u64,
) -> Result<TupleFamily> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::invalid("edge probability must lie in [0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(TupleFamily::from_fn(arity, universe, |_| {
        rng.gen::<f64>() < p
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CensusMode {
    Exhaustive,
    Sample { trials: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SampleStats {
    pub trials: u64,
    pub hits: u64,
    pub proportion: f64,
    pub std_error: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
    pub seed: u64,
}

/// Census of `budget`-near-closed families at the given parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct CensusReport {
    pub universe: usize,
    pub arity: usize,
    pub lower: usize,
    pub ell: usize,
    pub budget: usize,
    /// Total family count `2^C(universe, arity)`.
    pub total: u128,
    /// Number of near-closed families (estimated in sample mode).
    pub near_closed: u128,
    pub closed_count: u64,
    /// Number of `ell`-clique-free families (estimated in sample mode).
    pub clique_free_count: u128,
    /// Left side of the counting inequality (the near-closed count).
    pub bound_lhs: u128,
    /// Right side: `closed_count^budget * clique_free_count`.
    pub bound_rhs: BigUint,
    pub bound_holds: bool,
    pub sample: Option<SampleStats>,
}

pub fn near_closed_census(
    universe: usize,
    arity: usize,
    lower: usize,
    ell: usize,
    budget: usize,
    mode: CensusMode,
    caps: &Caps,
) -> Result<CensusReport> {
    if budget > 2 {
        return Err(Error::CapExceeded {
            what: "near-closed union budget",
            required: budget as u128,
            cap: 2,
        });
    }
    if ell <= arity {
        return Err(Error::invalid("clique bound must exceed the family arity"));
    }
    let pair = ClosurePair::new(universe, arity, lower)?;
    let engine = ClosureEngine::new(pair)?;
    let closed = enumerate_closed_masks(&engine, caps)?;
    let clique_masks = engine.clique_masks(ell);
    let slots = engine.upper_index().len();
    let total = 1u128 << slots;

    let (near_closed, clique_free_count, sample) = match mode {
        CensusMode::Exhaustive => {
            if total > caps.census_exhaustive {
                return Err(Error::CapExceeded {
                    what: "exhaustive census family space",
                    required: total,
                    cap: caps.census_exhaustive,
                });
            }
            let mut near = 0u128;
            let mut free = 0u128;
            for s in 0..(total as u64) {
                if near_closed_mask(s, &closed, &clique_masks, budget, &engine).is_some() {
                    near += 1;
                }
                if !engine.has_clique_mask(s, &clique_masks) {
                    free += 1;
                }
            }
            (near, free, None)
        }
        CensusMode::Sample { trials, seed } => {
            if trials == 0 {
                return Err(Error::invalid("sampling needs at least one trial"));
            }
            let mut hits = 0u64;
            let mut free_hits = 0u64;
            for trial in 0..trials {
                // Per-trial substream: fixed seed, the trial index as the
                // stream counter, so trials are order-independent.
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(trial);
                let s: u64 = if slots == 64 {
                    rng.gen()
                } else {
                    rng.gen::<u64>() & ((1u64 << slots) - 1)
                };
                if near_closed_mask(s, &closed, &clique_masks, budget, &engine).is_some() {
                    hits += 1;
                }
                if !engine.has_clique_mask(s, &clique_masks) {
                    free_hits += 1;
                }
            }
            let p = hits as f64 / trials as f64;
            let std_error = (p * (1.0 - p) / trials as f64).sqrt();
            let z = 1.96f64;
            let nf = trials as f64;
            let denom = 1.0 + z * z / nf;
            let center = (p + z * z / (2.0 * nf)) / denom;
            let half = (z / denom) * (p * (1.0 - p) / nf + z * z / (4.0 * nf * nf)).sqrt();
            let stats = SampleStats {
                trials,
                hits,
                proportion: p,
                std_error,
                wilson_low: (center - half).max(0.0),
                wilson_high: (center + half).min(1.0),
                seed,
            };
            let near = (p * total as f64).round() as u128;
            let free = (free_hits as f64 / trials as f64 * total as f64).round() as u128;
            (near, free, Some(stats))
        }
    };

    let closed_count = closed.len() as u64;
    let bound_rhs = BigUint::from(closed_count).pow(budget as u32) * BigUint::from(clique_free_count);
    let bound_holds = BigUint::from(near_closed) <= bound_rhs;
    Ok(CensusReport {
        universe,
        arity,
        lower,
        ell,
        budget,
        total,
        near_closed,
        closed_count,
        clique_free_count,
        bound_lhs: near_closed,
        bound_rhs,
        bound_holds,
        sample,
    })
}

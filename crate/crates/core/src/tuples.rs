//! Families of unordered `m`-subsets of `{0..n-1}`, the finite stand-in for
//! subsets of `[omega]^m`, plus a canonical subset index used by the
//! mask-based exhaustive scans.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use itertools::Itertools;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A set of sorted `m`-subsets of `{0..n-1}`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TupleFamily {
    m: usize,
    n: usize,
    members: BTreeSet<Vec<usize>>,
}

impl fmt::Debug for TupleFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TupleFamily[m={},n={}]{:?}", self.m, self.n, self.members)
    }
}

impl TupleFamily {
    pub fn new(
        m: usize,
        n: usize,
        members: impl IntoIterator<Item = Vec<usize>>,
    ) -> Result<Self> {
        let mut set = BTreeSet::new();
        for tuple in members {
            if tuple.len() != m {
                return Err(Error::TupleArity {
                    found: tuple.len(),
                    expected: m,
                    tuple,
                });
            }
            if !tuple.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::TupleNotSorted { tuple });
            }
            if tuple.iter().any(|&v| v >= n) {
                return Err(Error::TupleOutOfRange { tuple, n });
            }
            set.insert(tuple);
        }
        Ok(TupleFamily {
            m,
            n,
            members: set,
        })
    }

    pub fn empty(m: usize, n: usize) -> Self {
        TupleFamily {
            m,
            n,
            members: BTreeSet::new(),
        }
    }

    /// All `m`-subsets of the universe.
    pub fn full(m: usize, n: usize) -> Self {
        let members = (0..n).combinations(m).collect();
        TupleFamily { m, n, members }
    }

    /// The members of the full family satisfying a predicate.
    pub fn from_fn(m: usize, n: usize, mut member: impl FnMut(&[usize]) -> bool) -> Self {
        let members = (0..n).combinations(m).filter(|t| member(t)).collect();
        TupleFamily { m, n, members }
    }

    pub fn arity(&self) -> usize {
        self.m
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, tuple: &[usize]) -> bool {
        self.members.contains(tuple)
    }

    pub fn members(&self) -> impl Iterator<Item = &[usize]> {
        self.members.iter().map(Vec::as_slice)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.m != other.m || self.n != other.n {
            return Err(Error::LevelMismatch {
                detail: format!(
                    "families (m={},n={}) and (m={},n={}) do not match",
                    self.m, self.n, other.m, other.n
                ),
            });
        }
        Ok(())
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(TupleFamily {
            m: self.m,
            n: self.n,
            members: self.members.union(&other.members).cloned().collect(),
        })
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(TupleFamily {
            m: self.m,
            n: self.n,
            members: self.members.intersection(&other.members).cloned().collect(),
        })
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(TupleFamily {
            m: self.m,
            n: self.n,
            members: self.members.difference(&other.members).cloned().collect(),
        })
    }

    pub fn symmetric_difference(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(TupleFamily {
            m: self.m,
            n: self.n,
            members: self
                .members
                .symmetric_difference(&other.members)
                .cloned()
                .collect(),
        })
    }

    pub fn complement(&self) -> Self {
        Self::from_fn(self.m, self.n, |t| !self.contains(t))
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self.members.is_subset(&other.members))
    }
}

#[derive(Serialize, Deserialize)]
struct RawFamily {
    m: usize,
    n: usize,
    members: Vec<Vec<usize>>,
}

impl Serialize for TupleFamily {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RawFamily {
            m: self.m,
            n: self.n,
            members: self.members.iter().cloned().collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TupleFamily {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawFamily::deserialize(deserializer)?;
        TupleFamily::new(raw.m, raw.n, raw.members).map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// Canonical lexicographic enumeration of the `m`-subsets of `{0..n-1}`,
/// with rank lookup and `u64` mask conversion for families over at most 64
/// slots.
#[derive(Debug)]
pub struct SubsetIndex {
    n: usize,
    m: usize,
    subsets: Vec<Vec<usize>>,
    rank: HashMap<Vec<usize>, usize>,
}

impl SubsetIndex {
    pub fn new(n: usize, m: usize) -> Self {
        let subsets = (0..n).combinations(m).collect_vec();
        let rank = subsets
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i))
            .collect();
        SubsetIndex {
            n,
            m,
            subsets,
            rank,
        }
    }

    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn arity(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    pub fn subset(&self, index: usize) -> &[usize] {
        &self.subsets[index]
    }

    pub fn rank_of(&self, tuple: &[usize]) -> Option<usize> {
        self.rank.get(tuple).copied()
    }

    /// Mask with one bit per subset. Requires at most 64 slots.
    pub fn mask_of(&self, family: &TupleFamily) -> Result<u64> {
        if self.len() > 64 {
            return Err(Error::CapExceeded {
                what: "subset mask width",
                required: self.len() as u128,
                cap: 64,
            });
        }
        if family.arity() != self.m || family.universe() != self.n {
            return Err(Error::LevelMismatch {
                detail: "family does not match the subset index".into(),
            });
        }
        let mut mask = 0u64;
        for t in family.members() {
            mask |= 1 << self.rank.get(t).copied().expect("validated member");
        }
        Ok(mask)
    }

    pub fn family_of(&self, mask: u64) -> TupleFamily {
        let members = (0..self.len())
            .filter(|&i| mask & (1 << i) != 0)
            .map(|i| self.subsets[i].clone())
            .collect::<BTreeSet<_>>();
        TupleFamily {
            m: self.m,
            n: self.n,
            members,
        }
    }

    /// Mask over this index of all `m`-subsets of the given vertex set.
    pub fn subsets_mask(&self, vertices: &[usize]) -> u64 {
        let mut mask = 0u64;
        for t in vertices.iter().copied().combinations(self.m) {
            let mut t = t;
            t.sort_unstable();
            if let Some(&r) = self.rank.get(&t) {
                mask |= 1 << r;
            }
        }
        mask
    }
}

//! Subsets of `Emb(A_m, U)` stored as bit vectors over a shared, canonical
//! (lexicographic) enumeration of the embedding set. The fixed index makes
//! set algebra, equality and hashing cheap, which the pattern counting
//! machinery leans on heavily.

use std::collections::HashMap;
use std::sync::Arc;

use bitvec::prelude::*;

use crate::embedding::{enumerate_embedding_maps, Embedding};
use crate::error::{Error, Result};
use crate::structures::FiniteStructure;

/// The canonical enumeration of `Emb(source, universe)` with rank lookup.
#[derive(Debug)]
pub struct EmbeddingBasis {
    source: FiniteStructure,
    universe: FiniteStructure,
    maps: Vec<Vec<usize>>,
    rank: HashMap<Vec<usize>, usize>,
}

impl EmbeddingBasis {
    pub fn new(source: &FiniteStructure, universe: &FiniteStructure) -> Result<Arc<Self>> {
        let maps = enumerate_embedding_maps(source, universe)?;
        let rank = maps
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        Ok(Arc::new(EmbeddingBasis {
            source: source.clone(),
            universe: universe.clone(),
            maps,
            rank,
        }))
    }

    pub fn source(&self) -> &FiniteStructure {
        &self.source
    }

    pub fn universe(&self) -> &FiniteStructure {
        &self.universe
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    pub fn map(&self, index: usize) -> &[usize] {
        &self.maps[index]
    }

    pub fn maps(&self) -> impl Iterator<Item = &[usize]> {
        self.maps.iter().map(Vec::as_slice)
    }

    pub fn rank_of(&self, map: &[usize]) -> Option<usize> {
        self.rank.get(map).copied()
    }

    pub fn embedding(&self, index: usize) -> Embedding {
        Embedding::from_parts_unchecked(
            self.source.clone(),
            self.universe.clone(),
            self.maps[index].clone(),
        )
    }

    fn same_as(&self, other: &EmbeddingBasis) -> bool {
        self.source == other.source && self.universe == other.universe
    }
}

/// A family `T` of embeddings `A_m -> U`, the finite stand-in for a subset
/// of `H_m`.
#[derive(Clone, Debug)]
pub struct OrderedFamily {
    basis: Arc<EmbeddingBasis>,
    bits: BitVec,
}

impl PartialEq for OrderedFamily {
    fn eq(&self, other: &Self) -> bool {
        self.basis.same_as(&other.basis) && self.bits == other.bits
    }
}

impl Eq for OrderedFamily {}

impl OrderedFamily {
    pub fn empty(basis: Arc<EmbeddingBasis>) -> Self {
        let bits = bitvec![0; basis.len()];
        OrderedFamily { basis, bits }
    }

    pub fn full(basis: Arc<EmbeddingBasis>) -> Self {
        let bits = bitvec![1; basis.len()];
        OrderedFamily { basis, bits }
    }

    /// Family defined by a predicate over the basis maps.
    pub fn from_fn(basis: Arc<EmbeddingBasis>, mut member: impl FnMut(&[usize]) -> bool) -> Self {
        let mut bits = bitvec![0; basis.len()];
        for i in 0..basis.len() {
            if member(basis.map(i)) {
                bits.set(i, true);
            }
        }
        OrderedFamily { basis, bits }
    }

    /// Family with exactly the given member maps; unknown maps are errors.
    pub fn from_members<'a>(
        basis: Arc<EmbeddingBasis>,
        members: impl IntoIterator<Item = &'a [usize]>,
    ) -> Result<Self> {
        let mut bits = bitvec![0; basis.len()];
        for map in members {
            let index = basis.rank_of(map).ok_or_else(|| {
                Error::invalid(format!("{map:?} is not an embedding of the basis"))
            })?;
            bits.set(index, true);
        }
        Ok(OrderedFamily { basis, bits })
    }

    pub fn basis(&self) -> &Arc<EmbeddingBasis> {
        &self.basis
    }

    pub fn level(&self) -> usize {
        self.basis.source().size()
    }

    pub fn universe(&self) -> &FiniteStructure {
        self.basis.universe()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.not_any()
    }

    pub fn contains_index(&self, index: usize) -> bool {
        self.bits[index]
    }

    pub fn contains_map(&self, map: &[usize]) -> bool {
        self.basis.rank_of(map).is_some_and(|i| self.bits[i])
    }

    /// Member maps in basis (lexicographic) order.
    pub fn member_maps(&self) -> impl Iterator<Item = &[usize]> {
        self.bits.iter_ones().map(|i| self.basis.map(i))
    }

    pub fn member_embeddings(&self) -> impl Iterator<Item = Embedding> + '_ {
        self.bits.iter_ones().map(|i| self.basis.embedding(i))
    }

    fn zip(&self, other: &Self, f: impl Fn(bool, bool) -> bool) -> Result<Self> {
        if !self.basis.same_as(&other.basis) {
            return Err(Error::BasisMismatch);
        }
        let mut bits = bitvec![0; self.basis.len()];
        for i in 0..self.basis.len() {
            bits.set(i, f(self.bits[i], other.bits[i]));
        }
        Ok(OrderedFamily {
            basis: self.basis.clone(),
            bits,
        })
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a || b)
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a && b)
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a && !b)
    }

    pub fn complement(&self) -> Self {
        let mut bits = self.bits.clone();
        for mut b in bits.iter_mut() {
            *b = !*b;
        }
        OrderedFamily {
            basis: self.basis.clone(),
            bits,
        }
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        if !self.basis.same_as(&other.basis) {
            return Err(Error::BasisMismatch);
        }
        Ok(self
            .bits
            .iter_ones()
            .all(|i| other.bits[i]))
    }
}

/// Lift a family along `f: A_m -> A_n`: the set
/// `{s in Emb(A_n, U) : s . f in T}`. The result lives over the basis
/// `Emb(A_n, U)`.
pub fn lift_along(f: &Embedding, family: &OrderedFamily) -> Result<OrderedFamily> {
    if f.source() != family.basis().source() {
        return Err(Error::LevelMismatch {
            detail: format!(
                "family is at level {:?} but the map starts at {:?}",
                family.basis().source(),
                f.source()
            ),
        });
    }
    let target_basis = EmbeddingBasis::new(f.target(), family.universe())?;
    let mut bits = bitvec![0; target_basis.len()];
    let mut composed = vec![0usize; f.source().size()];
    for i in 0..target_basis.len() {
        let s = target_basis.map(i);
        for (k, &fv) in f.map().iter().enumerate() {
            composed[k] = s[fv];
        }
        if family.contains_map(&composed) {
            bits.set(i, true);
        }
    }
    Ok(OrderedFamily {
        basis: target_basis,
        bits,
    })
}

//! Embeddings between finite structures: injective vertex maps that
//! preserve and reflect the relation.

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::structures::FiniteStructure;

/// An embedding `source -> target`, stored as the image vector
/// `map[i] = image of vertex i`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Embedding {
    source: FiniteStructure,
    target: FiniteStructure,
    map: Vec<usize>,
}

impl Embedding {
    /// Validate and build. The map must be injective, in range, and must
    /// send a tuple into the relation exactly when the tuple is related.
    pub fn new(source: FiniteStructure, target: FiniteStructure, map: Vec<usize>) -> Result<Self> {
        if !source.flavor().compatible(target.flavor()) {
            return Err(Error::FlavorMismatch {
                left: source.flavor(),
                right: target.flavor(),
            });
        }
        if map.len() != source.size() {
            return Err(Error::invalid(format!(
                "map has {} entries for a source of size {}",
                map.len(),
                source.size()
            )));
        }
        if map.iter().any(|&v| v >= target.size()) {
            return Err(Error::TupleOutOfRange {
                tuple: map,
                n: target.size(),
            });
        }
        let mut seen = vec![false; target.size()];
        for &v in &map {
            if seen[v] {
                return Err(Error::invalid(format!("map {map:?} is not injective")));
            }
            seen[v] = true;
        }
        if let Some(arity) = source.flavor().edge_arity() {
            for tuple in (0..source.size()).combinations(arity) {
                let mut image = tuple.iter().map(|&v| map[v]).collect_vec();
                image.sort_unstable();
                if source.contains_edge(&tuple) != target.contains_edge(&image) {
                    return Err(Error::invalid(format!(
                        "map {map:?} does not preserve/reflect the relation on {tuple:?}"
                    )));
                }
            }
        }
        Ok(Embedding {
            source,
            target,
            map,
        })
    }

    pub fn identity(structure: &FiniteStructure) -> Self {
        Embedding {
            source: structure.clone(),
            target: structure.clone(),
            map: (0..structure.size()).collect(),
        }
    }

    pub fn source(&self) -> &FiniteStructure {
        &self.source
    }

    pub fn target(&self) -> &FiniteStructure {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, v: usize) -> usize {
        self.map[v]
    }

    /// Sorted image of the whole source universe.
    pub fn range(&self) -> Vec<usize> {
        let mut r = self.map.clone();
        r.sort_unstable();
        r
    }

    pub(crate) fn from_parts_unchecked(
        source: FiniteStructure,
        target: FiniteStructure,
        map: Vec<usize>,
    ) -> Self {
        Embedding {
            source,
            target,
            map,
        }
    }
}

/// `g` after `f`: the embedding `A -> C` obtained from `f: A -> B` and
/// `g: B -> C`. Fails if `f`'s target is not `g`'s source.
pub fn compose(f: &Embedding, g: &Embedding) -> Result<Embedding> {
    if f.target != g.source {
        return Err(Error::EndpointMismatch {
            detail: format!(
                "target of the first map ({:?}) differs from source of the second ({:?})",
                f.target, g.source
            ),
        });
    }
    let map = f.map.iter().map(|&v| g.map[v]).collect();
    Ok(Embedding {
        source: f.source.clone(),
        target: g.target.clone(),
        map,
    })
}

/// All embeddings of `a` into `b`, in lexicographic order of their maps.
pub fn enumerate_embeddings(
    a: &FiniteStructure,
    b: &FiniteStructure,
) -> Result<Vec<Embedding>> {
    Ok(enumerate_embedding_maps(a, b)?
        .into_iter()
        .map(|map| Embedding::from_parts_unchecked(a.clone(), b.clone(), map))
        .collect())
}

/// Same as [`enumerate_embeddings`] but yields bare maps; cheaper when the
/// endpoints are tracked elsewhere.
pub fn enumerate_embedding_maps(
    a: &FiniteStructure,
    b: &FiniteStructure,
) -> Result<Vec<Vec<usize>>> {
    if !a.flavor().compatible(b.flavor()) {
        return Err(Error::FlavorMismatch {
            left: a.flavor(),
            right: b.flavor(),
        });
    }
    let mut out = Vec::new();
    let mut partial = Vec::with_capacity(a.size());
    let mut used = vec![false; b.size()];
    extend_search(a, b, &[], &mut partial, &mut used, &mut |map| {
        out.push(map.to_vec());
        true
    });
    Ok(out)
}

/// Lexicographically least embedding of `a` into `b` whose map agrees with
/// the given `pins` (pairs `(source vertex, required image)`).
pub fn extend_partial(
    a: &FiniteStructure,
    b: &FiniteStructure,
    pins: &[(usize, usize)],
) -> Result<Option<Embedding>> {
    if !a.flavor().compatible(b.flavor()) {
        return Err(Error::FlavorMismatch {
            left: a.flavor(),
            right: b.flavor(),
        });
    }
    let mut found = None;
    let mut partial = Vec::with_capacity(a.size());
    let mut used = vec![false; b.size()];
    extend_search(a, b, pins, &mut partial, &mut used, &mut |map| {
        found = Some(map.to_vec());
        false
    });
    Ok(found.map(|map| Embedding::from_parts_unchecked(a.clone(), b.clone(), map)))
}

/// Depth-first search over partial maps in lexicographic order. `visit`
/// returns `false` to stop after the current hit.
fn extend_search(
    a: &FiniteStructure,
    b: &FiniteStructure,
    pins: &[(usize, usize)],
    partial: &mut Vec<usize>,
    used: &mut [bool],
    visit: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    let next = partial.len();
    if next == a.size() {
        return visit(partial);
    }
    let pinned = pins.iter().find(|&&(v, _)| v == next).map(|&(_, img)| img);
    for candidate in 0..b.size() {
        if used[candidate] || pinned.is_some_and(|img| img != candidate) {
            continue;
        }
        partial.push(candidate);
        used[candidate] = true;
        let ok = consistent_at(a, b, partial, next);
        if ok && !extend_search(a, b, pins, partial, used, visit) {
            partial.pop();
            used[candidate] = false;
            return false;
        }
        partial.pop();
        used[candidate] = false;
    }
    true
}

/// Check every relation constraint whose tuple lies in `{0..=last}` and
/// involves `last`.
fn consistent_at(a: &FiniteStructure, b: &FiniteStructure, partial: &[usize], last: usize) -> bool {
    let Some(arity) = a.flavor().edge_arity() else {
        return true;
    };
    if last + 1 < arity {
        return true;
    }
    for rest in (0..last).combinations(arity - 1) {
        let mut tuple = rest;
        tuple.push(last);
        let mut image = tuple.iter().map(|&v| partial[v]).collect_vec();
        image.sort_unstable();
        if a.contains_edge(&tuple) != b.contains_edge(&image) {
            return false;
        }
    }
    true
}

/// Outcome of the dual-map surjectivity check for `f: A_m -> A_n` over `U`:
/// either every `x in Emb(A_m, U)` factors as `s . f`, with one section per
/// `x`, or some `x` is unhit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DualSurjectivity {
    Surjective { sections: Vec<(Embedding, Embedding)> },
    NotSurjective { unhit: Embedding },
}

impl DualSurjectivity {
    pub fn is_surjective(&self) -> bool {
        matches!(self, DualSurjectivity::Surjective { .. })
    }
}

/// Decide whether the dual map `s -> s . f` from `Emb(A_n, U)` to
/// `Emb(A_m, U)` is surjective, exhibiting a section per point when it is.
pub fn dual_surjective(f: &Embedding, universe: &FiniteStructure) -> Result<DualSurjectivity> {
    let points = enumerate_embeddings(f.source(), universe)?;
    let mut sections = Vec::with_capacity(points.len());
    for x in points {
        let pins = f
            .map()
            .iter()
            .enumerate()
            .map(|(i, &fi)| (fi, x.apply(i)))
            .collect_vec();
        match extend_partial(f.target(), universe, &pins)? {
            Some(s) => sections.push((x, s)),
            None => return Ok(DualSurjectivity::NotSurjective { unhit: x }),
        }
    }
    Ok(DualSurjectivity::Surjective { sections })
}

/// For `f: A_m -> A_n`, find the least `N >= n`, a stage `A_N` and an
/// embedding `h: A_n -> A_N` with `h . f` equal to the inclusion of `A_m`
/// (vertex `i` goes to vertex `i`). The stage is the `h`-image of `A_n`
/// padded with bare vertices, so it always realizes `A_n`'s type.
pub fn left_inverse_extension(f: &Embedding) -> Result<(FiniteStructure, Embedding)> {
    let a_n = f.target();
    let m = f.source().size();
    let n = a_n.size();
    for cap_n in n..=n + m {
        let pins = f.map().iter().enumerate().map(|(i, &fi)| (fi, i)).collect_vec();
        // Search h over injections [n] -> [cap_n] with h(f(i)) = i; the
        // stage structure is defined as the h-image of A_n's relation.
        let mut result = None;
        let mut partial = Vec::with_capacity(n);
        let mut used = vec![false; cap_n];
        injection_search(n, cap_n, &pins, &mut partial, &mut used, &mut |map| {
            let edges = a_n
                .relation()
                .iter()
                .map(|t| {
                    let mut image = t.iter().map(|&v| map[v]).collect_vec();
                    image.sort_unstable();
                    image
                })
                .collect_vec();
            let Ok(stage) = FiniteStructure::new(a_n.flavor(), cap_n, edges) else {
                return true;
            };
            let Ok(h) = Embedding::new(a_n.clone(), stage.clone(), map.to_vec()) else {
                return true;
            };
            // The inclusion of A_m must itself be an embedding into the stage.
            if Embedding::new(f.source().clone(), stage.clone(), (0..m).collect()).is_err() {
                return true;
            }
            result = Some((stage, h));
            false
        });
        if let Some(found) = result {
            return Ok(found);
        }
    }
    Err(Error::invalid(
        "no left-inverse extension found; this should be unreachable for supported flavors",
    ))
}

/// Plain injection search (no relation constraints); used where the
/// candidate structure is built from the map itself.
fn injection_search(
    len: usize,
    target: usize,
    pins: &[(usize, usize)],
    partial: &mut Vec<usize>,
    used: &mut [bool],
    visit: &mut impl FnMut(&[usize]) -> bool,
) -> bool {
    let next = partial.len();
    if next == len {
        return visit(partial);
    }
    let pinned = pins.iter().find(|&&(v, _)| v == next).map(|&(_, img)| img);
    for candidate in 0..target {
        if used[candidate] || pinned.is_some_and(|img| img != candidate) {
            continue;
        }
        partial.push(candidate);
        used[candidate] = true;
        if !injection_search(len, target, pins, partial, used, visit) {
            partial.pop();
            used[candidate] = false;
            return false;
        }
        partial.pop();
        used[candidate] = false;
    }
    true
}

//! Finite relational structures over an initial-segment universe `{0..n-1}`.
//!
//! Four flavors are supported: pure sets, graphs, `r`-uniform hypergraphs and
//! `K_r`-free graphs. A structure's relation is a set of strictly sorted
//! vertex tuples of the flavor's arity; structures are immutable once built.

use std::collections::BTreeSet;
use std::fmt;

use itertools::Itertools;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flavor {
    /// A bare set: no relation at all.
    Set,
    /// A simple undirected graph.
    Graph,
    /// An `arity`-uniform hypergraph.
    Hypergraph { arity: usize },
    /// A graph guaranteed to contain no clique on `r` vertices.
    KrFree { r: usize },
}

impl Flavor {
    /// Arity of the relation tuples, `None` for pure sets.
    pub fn edge_arity(self) -> Option<usize> {
        match self {
            Flavor::Set => None,
            Flavor::Graph => Some(2),
            Flavor::Hypergraph { arity } => Some(arity),
            Flavor::KrFree { .. } => Some(2),
        }
    }

    /// Two flavors relate (embeddings between them make sense) when their
    /// relation arities coincide. Graphs and `K_r`-free graphs mix freely.
    pub fn compatible(self, other: Flavor) -> bool {
        self.edge_arity() == other.edge_arity()
    }
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Flavor::Set => write!(f, "set"),
            Flavor::Graph => write!(f, "graph"),
            Flavor::Hypergraph { arity } => write!(f, "hypergraph:{arity}"),
            Flavor::KrFree { r } => write!(f, "krfree:{r}"),
        }
    }
}

/// A finite structure: universe `{0..n-1}` plus a relation of sorted tuples.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteStructure {
    flavor: Flavor,
    n: usize,
    relation: BTreeSet<Vec<usize>>,
}

impl fmt::Debug for FiniteStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[n={}]{:?}", self.flavor, self.n, self.relation)
    }
}

impl FiniteStructure {
    /// Build and validate a structure. Tuples must be strictly sorted,
    /// within range, duplicate-free and of the flavor's arity; `K_r`-free
    /// structures must contain no `r`-clique.
    pub fn new(
        flavor: Flavor,
        n: usize,
        edges: impl IntoIterator<Item = Vec<usize>>,
    ) -> Result<Self> {
        let mut relation = BTreeSet::new();
        for tuple in edges {
            let arity = flavor.edge_arity().ok_or_else(|| {
                Error::invalid(format!("set structures carry no relation, got {tuple:?}"))
            })?;
            if tuple.len() != arity {
                return Err(Error::TupleArity {
                    found: tuple.len(),
                    expected: arity,
                    tuple,
                });
            }
            if !tuple.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::TupleNotSorted { tuple });
            }
            if tuple.iter().any(|&v| v >= n) {
                return Err(Error::TupleOutOfRange { tuple, n });
            }
            if !relation.insert(tuple.clone()) {
                return Err(Error::DuplicateTuple { tuple });
            }
        }
        let structure = FiniteStructure {
            flavor,
            n,
            relation,
        };
        if let Flavor::KrFree { r } = flavor {
            if let Some(clique) = structure.find_clique(r) {
                return Err(Error::ForbiddenClique {
                    vertices: clique,
                    r,
                });
            }
        }
        Ok(structure)
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    /// Universe size.
    pub fn size(&self) -> usize {
        self.n
    }

    pub fn relation(&self) -> &BTreeSet<Vec<usize>> {
        &self.relation
    }

    pub fn edge_count(&self) -> usize {
        self.relation.len()
    }

    pub fn contains_edge(&self, tuple: &[usize]) -> bool {
        self.relation.contains(tuple)
    }

    /// Pure set on `n` points.
    pub fn set(n: usize) -> Self {
        FiniteStructure {
            flavor: Flavor::Set,
            n,
            relation: BTreeSet::new(),
        }
    }

    pub fn graph(n: usize, edges: impl IntoIterator<Item = Vec<usize>>) -> Result<Self> {
        Self::new(Flavor::Graph, n, edges)
    }

    pub fn hypergraph(
        n: usize,
        arity: usize,
        edges: impl IntoIterator<Item = Vec<usize>>,
    ) -> Result<Self> {
        if arity < 2 {
            return Err(Error::invalid("hypergraph arity must be at least 2"));
        }
        Self::new(Flavor::Hypergraph { arity }, n, edges)
    }

    pub fn kr_free(
        n: usize,
        r: usize,
        edges: impl IntoIterator<Item = Vec<usize>>,
    ) -> Result<Self> {
        if r < 3 {
            return Err(Error::invalid("K_r-free graphs need r >= 3"));
        }
        Self::new(Flavor::KrFree { r }, n, edges)
    }

    pub fn complete_graph(n: usize) -> Self {
        let edges = (0..n).tuple_combinations().map(|(a, b)| vec![a, b]);
        Self::new(Flavor::Graph, n, edges).expect("complete graph is valid")
    }

    pub fn path(n: usize) -> Self {
        let edges = (1..n).map(|v| vec![v - 1, v]);
        Self::new(Flavor::Graph, n, edges).expect("path is valid")
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::invalid("cycles need at least 3 vertices"));
        }
        let edges = (1..n).map(|v| vec![v - 1, v]).chain([vec![0, n - 1]]);
        Self::new(Flavor::Graph, n, edges)
    }

    pub fn complete_hypergraph(n: usize, arity: usize) -> Result<Self> {
        if arity < 2 {
            return Err(Error::invalid("hypergraph arity must be at least 2"));
        }
        let edges = (0..n).combinations(arity).collect_vec();
        Self::new(Flavor::Hypergraph { arity }, n, edges)
    }

    /// Complete multipartite graph with `parts` classes as equal as possible.
    pub fn turan(n: usize, parts: usize) -> Result<Self> {
        if parts == 0 {
            return Err(Error::invalid("turan graph needs at least one part"));
        }
        let class = |v: usize| v % parts;
        let edges = (0..n)
            .tuple_combinations()
            .filter(|&(a, b)| class(a) != class(b))
            .map(|(a, b)| vec![a, b]);
        Self::new(Flavor::Graph, n, edges)
    }

    /// The canonical single-edge structure of the flavor's arity, on exactly
    /// `arity` vertices.
    pub fn single_edge(flavor: Flavor) -> Result<Self> {
        let arity = flavor
            .edge_arity()
            .ok_or_else(|| Error::invalid("pure sets have no edges"))?;
        Self::new(flavor, arity, [(0..arity).collect()])
    }

    /// Reinterpret this structure under another compatible flavor,
    /// re-running validation (e.g. a graph as `K_3`-free).
    pub fn reflavor(&self, flavor: Flavor) -> Result<Self> {
        if !self.flavor.compatible(flavor) {
            return Err(Error::FlavorMismatch {
                left: self.flavor,
                right: flavor,
            });
        }
        Self::new(flavor, self.n, self.relation.iter().cloned())
    }

    /// Induced substructure on `vertices`, relabeled to `{0..k-1}` in the
    /// order given.
    pub fn induced(&self, vertices: &[usize]) -> Result<Self> {
        if vertices.iter().any(|&v| v >= self.n) {
            return Err(Error::TupleOutOfRange {
                tuple: vertices.to_vec(),
                n: self.n,
            });
        }
        let position = |v: usize| vertices.iter().position(|&u| u == v);
        let mut edges = Vec::new();
        for tuple in &self.relation {
            if let Some(mapped) = tuple.iter().map(|&v| position(v)).collect::<Option<Vec<_>>>() {
                let mut mapped = mapped;
                mapped.sort_unstable();
                edges.push(mapped);
            }
        }
        Self::new(self.flavor, vertices.len(), edges)
    }

    /// Disjoint union; `other`'s vertices are shifted up by `self.size()`.
    pub fn disjoint_union(&self, other: &FiniteStructure) -> Result<Self> {
        if self.flavor != other.flavor {
            return Err(Error::FlavorMismatch {
                left: self.flavor,
                right: other.flavor,
            });
        }
        let shift = self.n;
        let edges = self
            .relation
            .iter()
            .cloned()
            .chain(
                other
                    .relation
                    .iter()
                    .map(|t| t.iter().map(|&v| v + shift).collect()),
            )
            .collect_vec();
        Self::new(self.flavor, self.n + other.n, edges)
    }

    /// Copy with one tuple removed. Handy for mutate-and-check oracles.
    pub fn without_edge(&self, tuple: &[usize]) -> Result<Self> {
        if !self.relation.contains(tuple) {
            return Err(Error::invalid(format!("no such edge {tuple:?}")));
        }
        let edges = self.relation.iter().filter(|t| t.as_slice() != tuple).cloned();
        Self::new(self.flavor, self.n, edges)
    }

    /// Adjacency bitmasks for arity-2 structures on at most 64 vertices.
    pub(crate) fn adjacency_masks(&self) -> Option<Vec<u64>> {
        if self.flavor.edge_arity() != Some(2) || self.n > 64 {
            return None;
        }
        let mut adj = vec![0u64; self.n];
        for e in &self.relation {
            adj[e[0]] |= 1 << e[1];
            adj[e[1]] |= 1 << e[0];
        }
        Some(adj)
    }

    /// Lexicographically least clique on `r` vertices, if one exists.
    /// Only meaningful for arity-2 flavors.
    pub fn find_clique(&self, r: usize) -> Option<Vec<usize>> {
        if self.flavor.edge_arity() != Some(2) {
            return None;
        }
        if r == 0 {
            return Some(vec![]);
        }
        if r == 1 {
            return (self.n > 0).then(|| vec![0]);
        }
        let adj = self.adjacency_masks()?;
        let mut stack = Vec::with_capacity(r);
        self.clique_search(&adj, &mut stack, u64::MAX, r)
    }

    fn clique_search(
        &self,
        adj: &[u64],
        stack: &mut Vec<usize>,
        candidates: u64,
        r: usize,
    ) -> Option<Vec<usize>> {
        if stack.len() == r {
            return Some(stack.clone());
        }
        let start = stack.last().map_or(0, |&v| v + 1);
        for v in start..self.n {
            if candidates & (1 << v) == 0 {
                continue;
            }
            stack.push(v);
            if let Some(found) = self.clique_search(adj, stack, candidates & adj[v], r) {
                return Some(found);
            }
            stack.pop();
        }
        None
    }

    /// Re-run the flavor's validity checks (arity, sortedness, range,
    /// clique freeness). Useful when a structure has been rebuilt by hand.
    pub fn validate(&self) -> Result<()> {
        Self::new(self.flavor, self.n, self.relation.iter().cloned()).map(|_| ())
    }
}

// JSON shape: {"flavor":"hypergraph","arity":3,"n":6,"edges":[[0,1,2]]}
// with "arity" only for hypergraphs, "r" only for krfree, and "edges"
// omitted for pure sets.
#[derive(Serialize, Deserialize)]
struct RawStructure {
    flavor: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    arity: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    r: Option<usize>,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    edges: Option<Vec<Vec<usize>>>,
}

impl Serialize for FiniteStructure {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let (flavor, arity, r) = match self.flavor {
            Flavor::Set => ("set", None, None),
            Flavor::Graph => ("graph", None, None),
            Flavor::Hypergraph { arity } => ("hypergraph", Some(arity), None),
            Flavor::KrFree { r } => ("krfree", None, Some(r)),
        };
        let edges = match self.flavor {
            Flavor::Set => None,
            _ => Some(self.relation.iter().cloned().collect_vec()),
        };
        RawStructure {
            flavor: flavor.to_string(),
            arity,
            r,
            n: self.n,
            edges,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FiniteStructure {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawStructure::deserialize(deserializer)?;
        let flavor = match raw.flavor.as_str() {
            "set" => Flavor::Set,
            "graph" => Flavor::Graph,
            "hypergraph" => Flavor::Hypergraph {
                arity: raw
                    .arity
                    .ok_or_else(|| D::Error::custom("hypergraph requires an \"arity\" field"))?,
            },
            "krfree" => Flavor::KrFree {
                r: raw
                    .r
                    .ok_or_else(|| D::Error::custom("krfree requires an \"r\" field"))?,
            },
            other => return Err(D::Error::custom(format!("unknown flavor {other:?}"))),
        };
        FiniteStructure::new(flavor, raw.n, raw.edges.unwrap_or_default())
            .map_err(|e| D::Error::custom(e.to_string()))
    }
}

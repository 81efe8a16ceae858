//! Constructive extension lemmas: extending a hypergraph along a designated
//! edge of a template via a matching decomposition, and the `K_r`-free
//! variant via a proper coloring, with exhaustive verification.

use std::collections::BTreeSet;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::cost::Caps;
use crate::embedding::{enumerate_embeddings, extend_partial, Embedding};
use crate::error::{Error, Result};
use crate::structures::{FiniteStructure, Flavor};

/// A partition of a structure's edge set into matchings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingDecomposition {
    pub matchings: Vec<Vec<Vec<usize>>>,
}

impl MatchingDecomposition {
    pub fn count(&self) -> usize {
        self.matchings.len()
    }
}

const DECOMPOSITION_NODE_BUDGET: u64 = 5_000_000;

/// Partition the edge set into as few matchings as the search can certify:
/// iterative deepening from the degree/capacity lower bound, branching over
/// maximal matchings that contain the first remaining edge, with remaining-
/// degree pruning. On complete hosts this meets the classical
/// `C(r*ceil(N/r), r) / ceil(N/r)` bound for the desk-scale sizes.
pub fn matching_decomposition(c: &FiniteStructure) -> Result<MatchingDecomposition> {
    let Some(arity) = c.flavor().edge_arity() else {
        return Err(Error::invalid("matching decomposition needs a relational flavor"));
    };
    if c.size() > 64 {
        return Err(Error::CapExceeded {
            what: "matching decomposition vertex count",
            required: c.size() as u128,
            cap: 64,
        });
    }
    let edges = c.relation().iter().cloned().collect_vec();
    if edges.is_empty() {
        return Ok(MatchingDecomposition { matchings: vec![] });
    }
    let masks = edges
        .iter()
        .map(|e| e.iter().fold(0u64, |m, &v| m | (1 << v)))
        .collect_vec();

    let mut degree = vec![0usize; c.size()];
    for e in &edges {
        for &v in e {
            degree[v] += 1;
        }
    }
    let max_degree = degree.iter().copied().max().unwrap_or(0);
    let capacity = (c.size() / arity).max(1);
    let lower = max_degree.max(edges.len().div_ceil(capacity));

    for target in lower..=edges.len() {
        let mut state = DecompositionSearch {
            edges: &edges,
            masks: &masks,
            capacity,
            nodes: 0,
        };
        let live = (0..edges.len()).collect_vec();
        if let Some(rounds) = state.search(&live, &mut degree.clone(), target) {
            let matchings = rounds
                .into_iter()
                .map(|round| round.into_iter().map(|i| edges[i].clone()).collect())
                .collect();
            return Ok(MatchingDecomposition { matchings });
        }
    }
    unreachable!("a partition into singleton matchings always exists");
}

struct DecompositionSearch<'a> {
    edges: &'a [Vec<usize>],
    masks: &'a [u64],
    capacity: usize,
    nodes: u64,
}

impl DecompositionSearch<'_> {
    fn search(
        &mut self,
        live: &[usize],
        degree: &mut [usize],
        rounds_left: usize,
    ) -> Option<Vec<Vec<usize>>> {
        self.nodes += 1;
        if self.nodes > DECOMPOSITION_NODE_BUDGET {
            return None;
        }
        if live.is_empty() {
            return Some(vec![]);
        }
        if rounds_left == 0
            || live.len() > rounds_left * self.capacity
            || degree.iter().any(|&d| d > rounds_left)
        {
            return None;
        }
        let mut round = vec![live[0]];
        let mut rounds = Vec::new();
        self.branch_rounds(live, self.masks[live[0]], &mut round, degree, rounds_left, &mut rounds)
            .then_some(rounds)
    }

    /// Extend the current round to every maximal matching containing the
    /// first live edge, recursing on the remainder; returns true on success
    /// with `out` filled.
    fn branch_rounds(
        &mut self,
        live: &[usize],
        used: u64,
        round: &mut Vec<usize>,
        degree: &mut [usize],
        rounds_left: usize,
        out: &mut Vec<Vec<usize>>,
    ) -> bool {
        let start = *round.last().unwrap();
        let mut extended = false;
        for &i in live.iter().filter(|&&i| i > start) {
            if used & self.masks[i] == 0 {
                extended = true;
                round.push(i);
                if self.branch_rounds(live, used | self.masks[i], round, degree, rounds_left, out) {
                    return true;
                }
                round.pop();
            }
        }
        // Also maximal only if no earlier live edge fits.
        let maximal = !extended
            && live
                .iter()
                .all(|&i| round.contains(&i) || used & self.masks[i] != 0);
        if !maximal {
            return false;
        }
        let rest = live
            .iter()
            .copied()
            .filter(|i| !round.contains(i))
            .collect_vec();
        for &i in round.iter() {
            for &v in &self.edges[i] {
                degree[v] -= 1;
            }
        }
        let sub = self.search(&rest, degree, rounds_left - 1);
        for &i in round.iter() {
            for &v in &self.edges[i] {
                degree[v] += 1;
            }
        }
        if let Some(mut rounds) = sub {
            rounds.insert(0, round.clone());
            *out = rounds;
            return true;
        }
        false
    }
}

/// Proper coloring by repeatedly extracting a maximum independent set
/// (lexicographically least among maximums). Returns the classes and their
/// count.
pub fn proper_coloring(c: &FiniteStructure, caps: &Caps) -> Result<(Vec<Vec<usize>>, usize)> {
    if c.flavor().edge_arity() != Some(2) {
        return Err(Error::invalid("proper coloring is defined for arity-2 structures"));
    }
    if c.size() > caps.independent_set_vertices || c.size() > 64 {
        return Err(Error::CapExceeded {
            what: "independent-set search vertex count",
            required: c.size() as u128,
            cap: caps.independent_set_vertices.min(64) as u128,
        });
    }
    let adj = c.adjacency_masks().expect("arity-2, small");
    let mut alive: u64 = if c.size() == 64 {
        u64::MAX
    } else {
        (1u64 << c.size()) - 1
    };
    let mut classes = Vec::new();
    while alive != 0 {
        let class = max_independent_set(&adj, alive);
        classes.push(mask_vertices(class));
        alive &= !class;
    }
    let count = classes.len();
    Ok((classes, count))
}

fn mask_vertices(mask: u64) -> Vec<usize> {
    (0..64).filter(|&v| mask & (1 << v) != 0).collect()
}

/// Lexicographically least maximum independent set within `alive`.
fn max_independent_set(adj: &[u64], alive: u64) -> u64 {
    fn best_size(adj: &[u64], candidates: u64) -> u32 {
        if candidates == 0 {
            return 0;
        }
        let v = candidates.trailing_zeros() as usize;
        let without = best_size(adj, candidates & !(1 << v));
        let with = 1 + best_size(adj, candidates & !(1 << v) & !adj[v]);
        with.max(without)
    }
    // Greedy lexicographic construction: take each vertex in order when the
    // optimum is still attainable with it.
    let target = best_size(adj, alive);
    let mut chosen = 0u64;
    let mut candidates = alive;
    let mut remaining = target;
    while remaining > 0 {
        let v = candidates.trailing_zeros() as usize;
        let with = candidates & !(1 << v) & !adj[v];
        if 1 + best_size(adj, with) >= remaining {
            chosen |= 1 << v;
            candidates = with;
            remaining -= 1;
        } else {
            candidates &= !(1 << v);
        }
    }
    chosen
}

/// An extension task: extend the host along the designated copy of an edge
/// inside the template.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionTask {
    host: FiniteStructure,
    template: FiniteStructure,
    designated: Vec<usize>,
}

impl ExtensionTask {
    pub fn new(
        host: FiniteStructure,
        template: FiniteStructure,
        designated: Vec<usize>,
    ) -> Result<Self> {
        if host.flavor() != template.flavor() {
            return Err(Error::FlavorMismatch {
                left: host.flavor(),
                right: template.flavor(),
            });
        }
        let arity = template
            .flavor()
            .edge_arity()
            .ok_or_else(|| Error::invalid("extension tasks need a relational flavor"))?;
        let mut sorted = designated.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != arity
            || designated.len() != arity
            || !template.contains_edge(&sorted)
        {
            return Err(Error::DesignatedNotEdge {
                vertices: designated,
            });
        }
        Ok(ExtensionTask {
            host,
            template,
            designated,
        })
    }

    pub fn host(&self) -> &FiniteStructure {
        &self.host
    }

    pub fn template(&self) -> &FiniteStructure {
        &self.template
    }

    pub fn designated(&self) -> &[usize] {
        &self.designated
    }

    fn template_rest(&self) -> Vec<usize> {
        (0..self.template.size())
            .filter(|v| !self.designated.contains(v))
            .collect()
    }
}

/// One fresh block of vertices attached for matching/class index `i` and
/// embedding index `j`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttachmentBlock {
    pub i: usize,
    pub j: usize,
    pub vertices: Vec<usize>,
}

/// The extended structure with its host inclusion and attachment records.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtensionResult {
    pub extended: FiniteStructure,
    pub host_embedding: Embedding,
    pub attachments: Vec<AttachmentBlock>,
}

impl ExtensionResult {
    fn new(
        host: &FiniteStructure,
        extended: FiniteStructure,
        attachments: Vec<AttachmentBlock>,
    ) -> Result<Self> {
        let host_embedding = Embedding::new(
            host.clone(),
            extended.clone(),
            (0..host.size()).collect(),
        )?;
        Ok(ExtensionResult {
            extended,
            host_embedding,
            attachments,
        })
    }
}

/// Extend an `r`-uniform host along `e <= B`: one block of `|B| - r` fresh
/// vertices per (matching, edge-embedding) pair, wired so that every
/// embedding of the edge into the host extends to the template.
pub fn extend_hypergraph(task: &ExtensionTask) -> Result<ExtensionResult> {
    let arity = match task.host.flavor() {
        Flavor::Graph => 2,
        Flavor::Hypergraph { arity } => arity,
        other => {
            return Err(Error::invalid(format!(
                "hypergraph extension expects a graph or hypergraph host, got {other}"
            )))
        }
    };
    let decomposition = matching_decomposition(&task.host)?;
    let ell = decomposition.count();
    let block_size = task.template.size() - arity;
    let bijections = (1..=arity).product::<usize>();
    let rest = task.template_rest();

    let mut vertex_count = task.host.size();
    let mut edges: BTreeSet<Vec<usize>> = task.host.relation().iter().cloned().collect();
    let mut attachments = Vec::new();

    for (i, matching) in decomposition.matchings.iter().enumerate() {
        for (j, perm_pick) in (0..arity).permutations(arity).enumerate() {
            let block: Vec<usize> = (0..block_size).map(|t| vertex_count + t).collect();
            vertex_count += block_size;
            // Internal copy of the template minus the designated edge.
            let iso = |v: usize| {
                let t = rest.iter().position(|&u| u == v).expect("non-designated");
                block[t]
            };
            for tuple in task.template.relation() {
                if tuple.iter().all(|v| rest.contains(v)) {
                    let image = tuple.iter().map(|&v| iso(v)).sorted().collect_vec();
                    edges.insert(image);
                }
            }
            // Wire every edge of the matching through this block: the j-th
            // bijection of the designated copy onto the matched edge.
            for edge in matching {
                for tuple in task.template.relation() {
                    let crosses = tuple.iter().any(|v| task.designated.contains(v))
                        && tuple.iter().any(|v| !task.designated.contains(v));
                    if !crosses {
                        continue;
                    }
                    let image = tuple
                        .iter()
                        .map(|&v| match task.designated.iter().position(|&d| d == v) {
                            Some(k) => edge[perm_pick[k]],
                            None => iso(v),
                        })
                        .sorted()
                        .collect_vec();
                    edges.insert(image);
                }
            }
            attachments.push(AttachmentBlock {
                i,
                j,
                vertices: block,
            });
        }
        let _ = bijections;
    }

    let extended = FiniteStructure::new(task.host.flavor(), vertex_count, edges)?;
    debug_assert_eq!(
        extended.size(),
        task.host.size() + ell * bijections * block_size
    );
    ExtensionResult::new(&task.host, extended, attachments)
}

/// Extend a `K_r`-free host along a designated edge of a `K_r`-free
/// template: one block of `|B| - 2` fresh vertices per ordered pair of
/// color classes, wired through the class pair of each edge embedding.
pub fn extend_kr_free(task: &ExtensionTask, caps: &Caps) -> Result<ExtensionResult> {
    let Flavor::KrFree { .. } = task.host.flavor() else {
        return Err(Error::invalid(
            "K_r-free extension expects hosts with an explicit clique bound",
        ));
    };
    let (classes, ell) = proper_coloring(&task.host, caps)?;
    let mut class_of = vec![0usize; task.host.size()];
    for (c, class) in classes.iter().enumerate() {
        for &v in class {
            class_of[v] = c;
        }
    }
    let block_size = task.template.size() - 2;
    let rest = task.template_rest();
    let a = task.designated[0];
    let b = task.designated[1];

    let mut vertex_count = task.host.size();
    let mut edges: BTreeSet<Vec<usize>> = task.host.relation().iter().cloned().collect();
    let mut attachments = Vec::new();

    for i in 0..ell {
        for j in 0..ell {
            if i == j {
                continue;
            }
            let block: Vec<usize> = (0..block_size).map(|t| vertex_count + t).collect();
            vertex_count += block_size;
            let iso = |v: usize| {
                let t = rest.iter().position(|&u| u == v).expect("non-designated");
                block[t]
            };
            for tuple in task.template.relation() {
                if tuple.iter().all(|v| rest.contains(v)) {
                    let image = tuple.iter().map(|&v| iso(v)).sorted().collect_vec();
                    edges.insert(image);
                }
            }
            // Every adjacent ordered pair (u, v) with classes (i, j) routes
            // through this block.
            for host_edge in task.host.relation() {
                for (u, v) in [
                    (host_edge[0], host_edge[1]),
                    (host_edge[1], host_edge[0]),
                ] {
                    if class_of[u] != i || class_of[v] != j {
                        continue;
                    }
                    for tuple in task.template.relation() {
                        let crosses = tuple.iter().any(|&w| w == a || w == b)
                            && tuple.iter().any(|w| rest.contains(w));
                        if !crosses {
                            continue;
                        }
                        let image = tuple
                            .iter()
                            .map(|&w| {
                                if w == a {
                                    u
                                } else if w == b {
                                    v
                                } else {
                                    iso(w)
                                }
                            })
                            .sorted()
                            .collect_vec();
                        edges.insert(image);
                    }
                }
            }
            attachments.push(AttachmentBlock {
                i,
                j,
                vertices: block,
            });
        }
    }

    // Construction preserves K_r-freeness; the constructor re-checks it.
    let extended = FiniteStructure::new(task.host.flavor(), vertex_count, edges)?;
    debug_assert_eq!(
        extended.size(),
        task.host.size() + ell * (ell.saturating_sub(1)) * block_size
    );
    ExtensionResult::new(&task.host, extended, attachments)
}

/// Outcome of the exhaustive extension check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VerifyOutcome {
    Verified { checked: usize },
    /// An edge embedding into the host with no template extension.
    Failed { orphan: Embedding },
}

impl VerifyOutcome {
    pub fn verified(&self) -> bool {
        matches!(self, VerifyOutcome::Verified { .. })
    }
}

/// Exhaustively re-check an extension result: class membership of the
/// extended structure, validity of the host inclusion, and the extension
/// property for every embedding of the designated edge into the host.
pub fn verify_extension(result: &ExtensionResult, task: &ExtensionTask) -> Result<VerifyOutcome> {
    result.extended.validate()?;
    if result.host_embedding.source() != &task.host
        || result.host_embedding.target() != &result.extended
    {
        return Err(Error::EndpointMismatch {
            detail: "host embedding does not connect the task host to the extension".into(),
        });
    }
    // Rebuild the host embedding to re-run preserve/reflect validation.
    Embedding::new(
        task.host.clone(),
        result.extended.clone(),
        result.host_embedding.map().to_vec(),
    )?;

    let edge = FiniteStructure::single_edge(task.host.flavor())?;
    let mut checked = 0;
    for f in enumerate_embeddings(&edge, &task.host)? {
        let pins = task
            .designated
            .iter()
            .enumerate()
            .map(|(k, &d)| (d, result.host_embedding.apply(f.apply(k))))
            .collect_vec();
        if extend_partial(&task.template, &result.extended, &pins)?.is_none() {
            return Ok(VerifyOutcome::Failed { orphan: f });
        }
        checked += 1;
    }
    Ok(VerifyOutcome::Verified { checked })
}

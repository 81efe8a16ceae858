//! Finite-structure combinatorics at desk scale: embedding calculus over
//! sets, graphs, hypergraphs and `K_r`-free graphs; thick/thin families and
//! Ramsey partition kernels; linear-order expansions with pattern counting;
//! the two constructive extension lemmas; agreement sets and block orders;
//! and the shadow/closure calculus with its near-closedness census.
//!
//! Everything is exact and exhaustive: operations that would have to sample
//! or truncate refuse instead (see [`cost::Caps`]).

pub mod cost;
pub mod error;

pub mod closure;
pub mod embedding;
pub mod extensions;
pub mod family;
pub mod orders;
pub mod patterns;
pub mod structures;
pub mod thickness;
pub mod tuples;

pub use cost::Caps;
pub use error::{Error, Result};

pub use closure::{
    count_clique_free, enumerate_closed_sets, has_clique, is_near_closed, lambda_op,
    near_closed_census, psi, random_hypergraph, shadow, CensusMode, CensusReport,
    CliqueFreeReport, ClosureEngine, ClosurePair, NearClosedQuery, NearClosedWitness,
};
pub use embedding::{
    compose, dual_surjective, enumerate_embeddings, extend_partial, left_inverse_extension,
    DualSurjectivity, Embedding,
};
pub use extensions::{
    extend_hypergraph, extend_kr_free, matching_decomposition, proper_coloring,
    verify_extension, AttachmentBlock, ExtensionResult, ExtensionTask, MatchingDecomposition,
    VerifyOutcome,
};
pub use family::{lift_along, EmbeddingBasis, OrderedFamily};
pub use orders::{
    agreement_set, anti_agreement_set, build_block_orders, mono_clique_guarantee,
    pull_agreement_to_m, ramsey_refine_blocks, tilde, BlockPartition, BlockVote, LinearOrder,
};
pub use patterns::{
    build_full_pattern_witness, canonical_level, dense_pattern_lower_bound,
    expansion_property_witness, is_ramsey_witness, minimal_pattern_bound, minimal_set,
    monochromatic_copy, n_patterns, pattern_of, separation_crossing, CrossingReport,
    ExpansionVerdict, FullPatternWitness, MinimalSetSpec, Pattern, PatternSet,
    RamseyObjectVerdict,
};
pub use structures::{FiniteStructure, Flavor};
pub use thickness::{
    forget_order, is_saturated, mixed_set_is_thin, partition_mono_clique,
    ramsey_partition_check, saturate, thick_witness_upto_ordered, MixedReport, RamseyPartition,
    ThickSearch,
};
pub use tuples::{SubsetIndex, TupleFamily};

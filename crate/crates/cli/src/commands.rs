//! Subcommand definitions and handlers. Every handler produces an
//! [`ExperimentReport`]; verdicts decide the exit code (0 when all hold,
//! 1 otherwise), and input or cost-cap errors surface as `Err` (exit 2).

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use forge_core::closure::{CensusMode, ClosurePair};
use forge_core::embedding::DualSurjectivity;
use forge_core::extensions::ExtensionResult;
use forge_core::thickness::{RamseyPartition, ThickSearch};
use forge_core::patterns::{ExpansionVerdict, RamseyObjectVerdict};
use forge_core::{
    agreement_set, anti_agreement_set, build_block_orders, build_full_pattern_witness,
    count_clique_free, dense_pattern_lower_bound, dual_surjective, enumerate_closed_sets,
    enumerate_embeddings, expansion_property_witness, extend_hypergraph, extend_kr_free,
    forget_order, is_near_closed, is_ramsey_witness, lambda_op, left_inverse_extension,
    matching_decomposition, minimal_pattern_bound, minimal_set, mixed_set_is_thin,
    n_patterns, near_closed_census, proper_coloring, psi, pull_agreement_to_m, ramsey_partition_check,
    ramsey_refine_blocks, random_hypergraph, shadow, thick_witness_upto_ordered, tilde,
    verify_extension, BlockPartition, Caps, Embedding, Flavor, MinimalSetSpec, NearClosedQuery,
    VerifyOutcome,
};

use crate::input::{
    parse_blocks, parse_class, parse_family, parse_order, parse_orders, parse_structure,
    parse_structure_as, parse_vertices,
};
use crate::report::{ExperimentReport, ReportFormat};

#[derive(Parser, Debug)]
#[command(
    name = "forge",
    version,
    about = "Desk-scale experiments over finite structures: embeddings, thick sets, \
             patterns, extensions, order agreement, and the shadow/closure calculus"
)]
pub struct Cli {
    /// Write the report to this path instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,

    /// Report format (CSV is meant for --out).
    #[arg(long, global = true, value_enum, default_value_t)]
    pub format: ReportFormat,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Embedding calculus: enumeration, dual-map surjectivity, left inverses.
    Emb {
        #[command(subcommand)]
        cmd: EmbCmd,
    },
    /// Thickness witnesses, the Ramsey partition kernel, mixed-set thinness.
    Thick {
        #[command(subcommand)]
        cmd: ThickCmd,
    },
    /// Minimal sets, pattern counting, witnesses and checkers.
    Patterns {
        #[command(subcommand)]
        cmd: PatternsCmd,
    },
    /// Run an extension construction and verify it exhaustively.
    Extend(ExtendArgs),
    /// Linear-order agreement machinery and the block constructions.
    Orders {
        #[command(subcommand)]
        cmd: OrdersCmd,
    },
    /// Shadow/lambda/psi calculus, closed sets, clique-free counting.
    Closure {
        #[command(subcommand)]
        cmd: ClosureCmd,
    },
    /// Near-closedness census with the counting inequality.
    Census(CensusArgs),
    /// Scan for the stage where dense pattern counts overtake minimal ones.
    Pestov(PestovArgs),
}

#[derive(Subcommand, Debug)]
pub enum EmbCmd {
    /// List all embeddings of one structure into another.
    List {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
    },
    /// Check surjectivity of the dual map of `map: source -> target` over a
    /// universe.
    Dual {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        /// The embedding as its image list, e.g. `0,1`.
        #[arg(long)]
        map: String,
        #[arg(long)]
        universe: String,
    },
    /// Find a stage and left inverse turning `map` into an inclusion.
    LeftInverse {
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        #[arg(long)]
        map: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum ThickCmd {
    /// Search for a level-N thickness witness in a tuple family.
    Witness {
        /// Tuple family JSON (inline or a file path).
        #[arg(long)]
        family: String,
        #[arg(long)]
        level: usize,
        /// Search the ordered form over the saturation of the family.
        #[arg(long)]
        ordered: bool,
    },
    /// Exhaustively check that every 2-partition of the host's pairs has a
    /// monochromatic clique of the target size.
    Ramsey {
        #[arg(long)]
        target: usize,
        #[arg(long)]
        host: usize,
    },
    /// Certify thinness of the mixed family of a level-m set.
    Mixed {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum PatternsCmd {
    /// Materialize a minimal set from an expansion set and a witness order.
    Minimal(MinimalArgs),
    /// Count the patterns of a minimal set on a stage.
    Count {
        #[command(flatten)]
        minimal: MinimalArgs,
        #[arg(long)]
        stage: String,
    },
    /// Evaluate the minimal-combination and dense lower bounds at a stage.
    Bound {
        #[arg(long)]
        class: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        stage: usize,
    },
    /// Build the universe realizing every subset of `Emb(A_m, stage)` as a
    /// pattern.
    Witness {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        stage: String,
    },
    /// Exhaustive Ramsey-object check for a triple of structures.
    RamseyObject {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        c: String,
        #[arg(short, long, default_value_t = 2)]
        r: usize,
    },
    /// Check the expansion property of an ordered structure against a target.
    Expansion {
        #[arg(long)]
        a: String,
        /// Order on `a` as a ranking, e.g. `0,1`.
        #[arg(long)]
        order: String,
        #[arg(long)]
        b: String,
    },
}

#[derive(Args, Debug)]
pub struct MinimalArgs {
    /// Level size m.
    #[arg(long)]
    level: usize,
    /// Expansion set: rankings separated by `;`, e.g. `0,1` or `0,1;1,0`.
    #[arg(long)]
    expansion: String,
    /// Witness order on the universe as a ranking.
    #[arg(long)]
    witness_order: String,
    #[arg(long)]
    universe: String,
    #[arg(long)]
    class: Option<String>,
}

#[derive(Args, Debug)]
pub struct ExtendArgs {
    /// Class of the construction: `graph`, `hypergraph:R` or `krfree:R`.
    #[arg(long)]
    class: String,
    #[arg(long)]
    host: String,
    #[arg(long)]
    template: String,
    /// Designated copy of the edge inside the template (defaults to its
    /// lexicographically first edge).
    #[arg(long)]
    edge: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum OrdersCmd {
    /// Agreement (or anti-agreement) set of two orders at arity m.
    Agreement {
        #[arg(long)]
        o0: String,
        #[arg(long)]
        o1: String,
        #[arg(long, default_value_t = 2)]
        m: usize,
        #[arg(long)]
        anti: bool,
    },
    /// Pull a pair-agreement family up to arity m.
    Pull {
        #[arg(long)]
        pairs: String,
        #[arg(long)]
        m: usize,
    },
    /// The union over blocks of all pairs inside the marked set.
    Tilde {
        #[arg(long)]
        a: String,
        #[arg(long)]
        blocks: String,
        #[arg(long)]
        universe: usize,
    },
    /// Build two orders whose pair agreement set is exactly the tilde
    /// family.
    Build {
        #[arg(long)]
        a: String,
        #[arg(long)]
        blocks: String,
        #[arg(long)]
        universe: usize,
    },
    /// Per-block maximum monochromatic subsets under a pair coloring.
    Refine {
        #[arg(long)]
        blocks: String,
        #[arg(long)]
        universe: usize,
        /// Pairs in the second color cell, as a tuple family.
        #[arg(long)]
        coloring: String,
    },
}

#[derive(Subcommand, Debug)]
pub enum ClosureCmd {
    Shadow {
        #[arg(long)]
        family: String,
        #[arg(long)]
        m: usize,
    },
    Lambda {
        #[arg(long)]
        family: String,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        universe: Option<usize>,
    },
    Psi {
        #[arg(long)]
        family: String,
        #[arg(long)]
        m: usize,
    },
    /// Enumerate all closed sets of a closure pair.
    Closed {
        #[arg(long)]
        universe: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// Count clique-free families exactly and compare with the sparse-family
    /// bound.
    CliqueFree {
        #[arg(long)]
        universe: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        ell: usize,
    },
    /// Decide near-closedness of a family.
    NearClosed {
        #[arg(long)]
        family: String,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        ell: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
    },
    /// Sample a random hypergraph (deterministic per seed).
    Random {
        #[arg(long)]
        universe: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
pub struct CensusArgs {
    #[arg(long)]
    universe: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    ell: usize,
    #[arg(long, default_value_t = 1)]
    k: usize,
    /// Sample this many families instead of exhausting the space.
    #[arg(long)]
    sample: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
pub struct PestovArgs {
    #[arg(long)]
    class: String,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
}

/// Caps from the environment override, if any.
pub fn caps_from_env() -> Caps {
    std::env::var("FORGE_MAX_COST")
        .ok()
        .and_then(|v| v.parse::<u64>().ok())
        .map(Caps::with_max_cost)
        .unwrap_or_default()
}

pub fn run(command: Command) -> anyhow::Result<ExperimentReport> {
    let caps = caps_from_env();
    match command {
        Command::Emb { cmd } => run_emb(cmd),
        Command::Thick { cmd } => run_thick(cmd, &caps),
        Command::Patterns { cmd } => run_patterns(cmd, &caps),
        Command::Extend(args) => run_extend(args, &caps),
        Command::Orders { cmd } => run_orders(cmd),
        Command::Closure { cmd } => run_closure(cmd, &caps),
        Command::Census(args) => run_census(args, &caps),
        Command::Pestov(args) => run_pestov(args),
    }
}

fn embedding_from(source: &str, target: &str, map: &str) -> anyhow::Result<Embedding> {
    let source = parse_structure(source)?;
    let target = parse_structure(target)?;
    Ok(Embedding::new(source, target, parse_vertices(map)?)?)
}

fn run_emb(cmd: EmbCmd) -> anyhow::Result<ExperimentReport> {
    match cmd {
        EmbCmd::List { source, target } => {
            let mut report = ExperimentReport::new("emb.list");
            report.parameter("source", &source);
            report.parameter("target", &target);
            let embeddings =
                enumerate_embeddings(&parse_structure(&source)?, &parse_structure(&target)?)?;
            report.counter("count", embeddings.len());
            report.witness(
                "embeddings",
                embeddings.iter().map(|e| e.map().to_vec()).collect::<Vec<_>>(),
            );
            Ok(report)
        }
        EmbCmd::Dual {
            source,
            target,
            map,
            universe,
        } => {
            let mut report = ExperimentReport::new("emb.dual");
            report.parameter("source", &source);
            report.parameter("target", &target);
            report.parameter("map", &map);
            report.parameter("universe", &universe);
            let f = embedding_from(&source, &target, &map)?;
            match dual_surjective(&f, &parse_structure(&universe)?)? {
                DualSurjectivity::Surjective { sections } => {
                    report.verdict("surjective", true);
                    report.counter("points", sections.len());
                    report.witness(
                        "sections",
                        sections
                            .iter()
                            .map(|(x, s)| json!({"point": x.map(), "section": s.map()}))
                            .collect::<Vec<_>>(),
                    );
                }
                DualSurjectivity::NotSurjective { unhit } => {
                    report.verdict("surjective", false);
                    report.witness("unhit", unhit.map());
                }
            }
            Ok(report)
        }
        EmbCmd::LeftInverse {
            source,
            target,
            map,
        } => {
            let mut report = ExperimentReport::new("emb.left_inverse");
            report.parameter("source", &source);
            report.parameter("target", &target);
            report.parameter("map", &map);
            let f = embedding_from(&source, &target, &map)?;
            let (stage, h) = left_inverse_extension(&f)?;
            report.counter("stage_size", stage.size());
            report.witness("stage", &stage);
            report.witness("left_inverse", h.map());
            Ok(report)
        }
    }
}

fn run_thick(cmd: ThickCmd, caps: &Caps) -> anyhow::Result<ExperimentReport> {
    match cmd {
        ThickCmd::Witness {
            family,
            level,
            ordered,
        } => {
            let mut report = ExperimentReport::new("thick.witness");
            report.parameter("level", level);
            report.parameter("ordered", ordered);
            let fam = parse_family(&family)?;
            report.parameter("family_size", fam.len());
            if ordered {
                // Ordered search over the phi-preimage of the family.
                let universe = forge_core::FiniteStructure::set(fam.universe());
                let source = forge_core::FiniteStructure::set(fam.arity());
                let basis = forge_core::EmbeddingBasis::new(&source, &universe)?;
                let preimage = forge_core::OrderedFamily::from_fn(basis, |map| {
                    let mut sorted = map.to_vec();
                    sorted.sort_unstable();
                    fam.contains(&sorted)
                });
                let stage = forge_core::FiniteStructure::set(level);
                match thick_witness_upto_ordered(&preimage, &stage)? {
                    ThickSearch::Found { witness, .. } => {
                        report.verdict("thick_upto_level", true);
                        report.witness("stage_embedding", witness.map());
                    }
                    ThickSearch::Absent => report.verdict("thick_upto_level", false),
                    ThickSearch::Exhausted => {
                        report.verdict("thick_upto_level", false);
                        report.counter("reason", "exhausted");
                    }
                }
            } else {
                match fam.thick_witness_upto(level)? {
                    ThickSearch::Found { witness, .. } => {
                        report.verdict("thick_upto_level", true);
                        report.witness("vertex_set", witness);
                    }
                    ThickSearch::Absent => report.verdict("thick_upto_level", false),
                    ThickSearch::Exhausted => {
                        report.verdict("thick_upto_level", false);
                        report.counter("reason", "exhausted");
                    }
                }
            }
            Ok(report)
        }
        ThickCmd::Ramsey { target, host } => {
            let mut report = ExperimentReport::new("thick.ramsey");
            report.parameter("target", target);
            report.parameter("host", host);
            match ramsey_partition_check(target, host, caps)? {
                RamseyPartition::Holds { partitions_checked } => {
                    report.verdict("every_partition_has_clique", true);
                    report.counter("partitions_checked", partitions_checked);
                }
                RamseyPartition::Fails { second_cell } => {
                    report.verdict("every_partition_has_clique", false);
                    report.witness("second_cell", &second_cell);
                }
            }
            Ok(report)
        }
        ThickCmd::Mixed { family, n } => {
            let mut report = ExperimentReport::new("thick.mixed");
            report.parameter("n", n);
            let fam = parse_family(&family)?;
            let mixed = mixed_set_is_thin(&fam, n)?;
            report.verdict("thin_certified", mixed.thin_certified);
            report.counter("largest_clique", mixed.largest_clique);
            report.counter("mixed_size", mixed.mixed.len());
            report.witness("clique", &mixed.clique);
            if let Some((obstruction, inside)) = &mixed.obstruction {
                report.witness(
                    "obstruction",
                    json!({"tuple": obstruction, "inside_family": inside}),
                );
            }
            Ok(report)
        }
    }
}

fn minimal_family(
    args: &MinimalArgs,
) -> anyhow::Result<(forge_core::OrderedFamily, forge_core::FiniteStructure)> {
    let class = args.class.as_deref().map(parse_class).transpose()?;
    let universe = parse_structure_as(&args.universe, class)?;
    let level = forge_core::canonical_level(universe.flavor(), args.level)?;
    let spec = MinimalSetSpec::new(
        level,
        parse_orders(&args.expansion)?,
        parse_order(&args.witness_order)?,
    )?;
    Ok((minimal_set(&spec, &universe)?, universe))
}

fn run_patterns(cmd: PatternsCmd, caps: &Caps) -> anyhow::Result<ExperimentReport> {
    match cmd {
        PatternsCmd::Minimal(args) => {
            let mut report = ExperimentReport::new("patterns.minimal");
            report.parameter("level", args.level);
            report.parameter("expansion", &args.expansion);
            report.parameter("witness_order", &args.witness_order);
            report.parameter("universe", &args.universe);
            let (family, _) = minimal_family(&args)?;
            report.counter("size", family.len());
            report.witness(
                "members",
                family.member_maps().map(|m| m.to_vec()).collect::<Vec<_>>(),
            );
            report.witness("ranges", forget_order(&family));
            Ok(report)
        }
        PatternsCmd::Count { minimal, stage } => {
            let mut report = ExperimentReport::new("patterns.count");
            report.parameter("level", minimal.level);
            report.parameter("expansion", &minimal.expansion);
            report.parameter("witness_order", &minimal.witness_order);
            report.parameter("universe", &minimal.universe);
            report.parameter("stage", &stage);
            let class = minimal.class.as_deref().map(parse_class).transpose()?;
            let stage = parse_structure_as(&stage, class)?;
            let (family, _) = minimal_family(&minimal)?;
            let patterns = n_patterns(&family, &stage)?;
            let bound =
                forge_core::patterns::per_minimal_set_pattern_bound(minimal.level, stage.size());
            report.counter("patterns", patterns.len());
            report.counter("per_minimal_set_bound", bound.to_string());
            report.verdict(
                "within_bound",
                num_cmp(patterns.len(), &bound),
            );
            Ok(report)
        }
        PatternsCmd::Bound { class, n, k, stage } => {
            let mut report = ExperimentReport::new("patterns.bound");
            report.parameter("class", &class);
            report.parameter("n", n);
            report.parameter("k", k);
            report.parameter("stage", stage);
            let flavor = parse_class(&class)?;
            let base = match flavor {
                Flavor::Hypergraph { arity } => arity,
                _ => 2,
            };
            let minimal = minimal_pattern_bound(n, stage, k)?;
            let dense = dense_pattern_lower_bound(flavor, base, stage)?;
            report.counter("minimal_bound", minimal.to_string());
            report.counter("dense_bound", dense.to_string());
            report.counter("dense_exceeds_minimal", dense > minimal);
            Ok(report)
        }
        PatternsCmd::Witness { m, stage } => {
            let mut report = ExperimentReport::new("patterns.witness");
            report.parameter("m", m);
            report.parameter("stage", &stage);
            let stage = parse_structure(&stage)?;
            let witness = build_full_pattern_witness(m, &stage, caps)?;
            report.counter("blocks", witness.blocks);
            report.counter("universe_size", witness.universe.size());
            report.counter("family_size", witness.members.len());
            report.verdict("all_patterns_realized", witness.verified);
            Ok(report)
        }
        PatternsCmd::RamseyObject { a, b, c, r } => {
            let mut report = ExperimentReport::new("patterns.ramsey_object");
            report.parameter("a", &a);
            report.parameter("b", &b);
            report.parameter("c", &c);
            report.parameter("r", r);
            let verdict = is_ramsey_witness(
                &parse_structure(&a)?,
                &parse_structure(&b)?,
                &parse_structure(&c)?,
                r,
                caps,
            )?;
            match verdict {
                RamseyObjectVerdict::Ramsey { slots } => {
                    report.verdict("ramsey", true);
                    report.counter("slots", slots);
                }
                RamseyObjectVerdict::NotRamsey { bad_coloring } => {
                    report.verdict("ramsey", false);
                    report.witness("bad_coloring", bad_coloring);
                }
            }
            Ok(report)
        }
        PatternsCmd::Expansion { a, order, b } => {
            let mut report = ExperimentReport::new("patterns.expansion");
            report.parameter("a", &a);
            report.parameter("order", &order);
            report.parameter("b", &b);
            let verdict = expansion_property_witness(
                &parse_structure(&a)?,
                &parse_order(&order)?,
                &parse_structure(&b)?,
                caps,
            )?;
            match verdict {
                ExpansionVerdict::Holds { orders_checked } => {
                    report.verdict("expansion_property", true);
                    report.counter("orders_checked", orders_checked as u64);
                }
                ExpansionVerdict::Fails { bad_order } => {
                    report.verdict("expansion_property", false);
                    report.witness("bad_order", &bad_order);
                }
            }
            Ok(report)
        }
    }
}

fn num_cmp(count: usize, bound: &num_bigint::BigUint) -> bool {
    num_bigint::BigUint::from(count) <= *bound
}

fn extension_json(result: &ExtensionResult) -> serde_json::Value {
    json!({
        "structure": result.extended,
        "host_embedding": result.host_embedding.map(),
        "attachments": result.attachments,
    })
}

fn run_extend(args: ExtendArgs, caps: &Caps) -> anyhow::Result<ExperimentReport> {
    let mut report = ExperimentReport::new("extend");
    report.parameter("class", &args.class);
    report.parameter("host", &args.host);
    report.parameter("template", &args.template);
    let flavor = parse_class(&args.class)?;
    let host = parse_structure_as(&args.host, Some(flavor))?;
    let template = parse_structure_as(&args.template, Some(flavor))?;
    let designated = match &args.edge {
        Some(edge) => parse_vertices(edge)?,
        None => template
            .relation()
            .iter()
            .next()
            .cloned()
            .ok_or_else(|| anyhow::anyhow!("template has no edges"))?,
    };
    report.parameter("edge", &designated);

    let task = forge_core::ExtensionTask::new(host.clone(), template, designated)?;
    let (result, ell) = match flavor {
        Flavor::Graph | Flavor::Hypergraph { .. } => {
            let ell = matching_decomposition(&host)?.count();
            (extend_hypergraph(&task)?, ell)
        }
        Flavor::KrFree { .. } => {
            let (_, ell) = proper_coloring(&host, caps)?;
            (extend_kr_free(&task, caps)?, ell)
        }
        Flavor::Set => anyhow::bail!("extension constructions need a relational class"),
    };
    report.counter("ell", ell);
    report.counter("host_size", host.size());
    report.counter("extended_size", result.extended.size());
    report.witness("extension", extension_json(&result));
    match verify_extension(&result, &task)? {
        VerifyOutcome::Verified { checked } => {
            report.verdict("verified", true);
            report.counter("edge_embeddings_checked", checked);
        }
        VerifyOutcome::Failed { orphan } => {
            report.verdict("verified", false);
            report.witness("orphan", orphan.map());
        }
    }
    Ok(report)
}

fn run_orders(cmd: OrdersCmd) -> anyhow::Result<ExperimentReport> {
    match cmd {
        OrdersCmd::Agreement { o0, o1, m, anti } => {
            let mut report = ExperimentReport::new("orders.agreement");
            report.parameter("o0", &o0);
            report.parameter("o1", &o1);
            report.parameter("m", m);
            report.parameter("anti", anti);
            let o0 = parse_order(&o0)?;
            let o1 = parse_order(&o1)?;
            let family = if anti {
                anti_agreement_set(&o0, &o1, m)?
            } else {
                agreement_set(&o0, &o1, m)?
            };
            report.counter("size", family.len());
            report.witness("family", &family);
            Ok(report)
        }
        OrdersCmd::Pull { pairs, m } => {
            let mut report = ExperimentReport::new("orders.pull");
            report.parameter("m", m);
            let family = pull_agreement_to_m(&parse_family(&pairs)?, m)?;
            report.counter("size", family.len());
            report.witness("family", &family);
            Ok(report)
        }
        OrdersCmd::Tilde {
            a,
            blocks,
            universe,
        } => {
            let mut report = ExperimentReport::new("orders.tilde");
            report.parameter("a", &a);
            report.parameter("blocks", &blocks);
            report.parameter("universe", universe);
            let partition = BlockPartition::new(universe, parse_blocks(&blocks)?)?;
            let family = tilde(&parse_vertices(&a)?, &partition)?;
            report.counter("size", family.len());
            report.witness("family", &family);
            Ok(report)
        }
        OrdersCmd::Build {
            a,
            blocks,
            universe,
        } => {
            let mut report = ExperimentReport::new("orders.build");
            report.parameter("a", &a);
            report.parameter("blocks", &blocks);
            report.parameter("universe", universe);
            let partition = BlockPartition::new(universe, parse_blocks(&blocks)?)?;
            let marked = parse_vertices(&a)?;
            let (o0, o1) = build_block_orders(&marked, &partition)?;
            let achieved = agreement_set(&o0, &o1, 2)?;
            let expected = tilde(&marked, &partition)?;
            report.verdict("agreement_matches_tilde", achieved == expected);
            report.witness("o0", &o0);
            report.witness("o1", &o1);
            report.witness("agreement", &achieved);
            Ok(report)
        }
        OrdersCmd::Refine {
            blocks,
            universe,
            coloring,
        } => {
            let mut report = ExperimentReport::new("orders.refine");
            report.parameter("blocks", &blocks);
            report.parameter("universe", universe);
            let partition = BlockPartition::new(universe, parse_blocks(&blocks)?)?;
            let votes = ramsey_refine_blocks(&partition, &parse_family(&coloring)?)?;
            report.verdict(
                "floors_met",
                votes.iter().all(|v| v.subset.len() >= v.guarantee),
            );
            report.witness(
                "votes",
                votes
                    .iter()
                    .map(|v| {
                        json!({
                            "block": v.block,
                            "subset": v.subset,
                            "color": v.color,
                            "guarantee": v.guarantee,
                        })
                    })
                    .collect::<Vec<_>>(),
            );
            Ok(report)
        }
    }
}

fn run_closure(cmd: ClosureCmd, caps: &Caps) -> anyhow::Result<ExperimentReport> {
    match cmd {
        ClosureCmd::Shadow { family, m } => {
            let mut report = ExperimentReport::new("closure.shadow");
            report.parameter("m", m);
            let out = shadow(&parse_family(&family)?, m)?;
            report.counter("size", out.len());
            report.witness("family", &out);
            Ok(report)
        }
        ClosureCmd::Lambda {
            family,
            n,
            universe,
        } => {
            let mut report = ExperimentReport::new("closure.lambda");
            report.parameter("n", n);
            let fam = parse_family(&family)?;
            let u = universe.unwrap_or_else(|| fam.universe());
            report.parameter("universe", u);
            let out = lambda_op(&fam, n, u)?;
            report.counter("size", out.len());
            report.witness("family", &out);
            Ok(report)
        }
        ClosureCmd::Psi { family, m } => {
            let mut report = ExperimentReport::new("closure.psi");
            report.parameter("m", m);
            let fam = parse_family(&family)?;
            let out = psi(&fam, m)?;
            report.counter("size", out.len());
            report.counter("is_fixed_point", out == fam);
            report.witness("family", &out);
            Ok(report)
        }
        ClosureCmd::Closed { universe, n, m } => {
            let mut report = ExperimentReport::new("closure.closed");
            report.parameter("universe", universe);
            report.parameter("n", n);
            report.parameter("m", m);
            let closed = enumerate_closed_sets(ClosurePair::new(universe, n, m)?, caps)?;
            report.counter("count", closed.len());
            // Large enumerations report the count only.
            if closed.len() <= 4096 {
                report.witness("closed_sets", &closed);
            }
            Ok(report)
        }
        ClosureCmd::CliqueFree { universe, n, ell } => {
            let mut report = ExperimentReport::new("closure.clique_free");
            report.parameter("universe", universe);
            report.parameter("n", n);
            report.parameter("ell", ell);
            let out = count_clique_free(universe, n, ell, caps)?;
            report.counter("total", out.total.to_string());
            report.counter("clique_free", out.clique_free.to_string());
            report.counter("bound_numerator", out.bound_numerator.to_string());
            report.counter("bound_denominator", out.bound_denominator.to_string());
            report.counter("sparse_family_size", out.sparse_family.len());
            report.verdict("bound_holds", out.bound_holds());
            report.witness("sparse_family", &out.sparse_family);
            Ok(report)
        }
        ClosureCmd::NearClosed {
            family,
            m,
            ell,
            k,
        } => {
            let mut report = ExperimentReport::new("closure.near_closed");
            report.parameter("m", m);
            report.parameter("ell", ell);
            report.parameter("k", k);
            let query = NearClosedQuery::new(parse_family(&family)?, m, ell, k)?;
            match is_near_closed(&query, caps)? {
                Some(witness) => {
                    report.verdict("near_closed", true);
                    report.witness("closed_parts", &witness.closed_parts);
                    report.witness("difference", &witness.difference);
                }
                None => report.verdict("near_closed", false),
            }
            Ok(report)
        }
        ClosureCmd::Random {
            universe,
            n,
            p,
            seed,
        } => {
            let mut report = ExperimentReport::new("closure.random");
            report.parameter("universe", universe);
            report.parameter("n", n);
            report.parameter("p", p);
            report.seed = Some(seed);
            let fam = random_hypergraph(universe, n, p, seed)?;
            report.counter("size", fam.len());
            report.witness("family", &fam);
            Ok(report)
        }
    }
}

fn run_census(args: CensusArgs, caps: &Caps) -> anyhow::Result<ExperimentReport> {
    let mut report = ExperimentReport::new("census");
    report.parameter("universe", args.universe);
    report.parameter("n", args.n);
    report.parameter("m", args.m);
    report.parameter("ell", args.ell);
    report.parameter("k", args.k);
    let mode = match args.sample {
        Some(trials) => {
            report.seed = Some(args.seed);
            CensusMode::Sample {
                trials,
                seed: args.seed,
            }
        }
        None => CensusMode::Exhaustive,
    };
    let out = near_closed_census(args.universe, args.n, args.m, args.ell, args.k, mode, caps)?;
    report.counter("total", out.total.to_string());
    report.counter("near_closed", out.near_closed.to_string());
    report.counter("closed_count", out.closed_count);
    report.counter("clique_free_count", out.clique_free_count.to_string());
    report.counter("bound_lhs", out.bound_lhs.to_string());
    report.counter("bound_rhs", out.bound_rhs.to_string());
    report.verdict("bound_holds", out.bound_holds);
    if let Some(stats) = &out.sample {
        report.witness(
            "sample",
            json!({
                "trials": stats.trials,
                "hits": stats.hits,
                "proportion": stats.proportion,
                "std_error": stats.std_error,
                "wilson_low": stats.wilson_low,
                "wilson_high": stats.wilson_high,
            }),
        );
    }
    Ok(report)
}

fn run_pestov(args: PestovArgs) -> anyhow::Result<ExperimentReport> {
    let mut report = ExperimentReport::new("pestov");
    report.parameter("class", &args.class);
    report.parameter("n", args.n);
    report.parameter("k", args.k);
    let flavor = parse_class(&args.class)?;
    let crossing = forge_core::separation_crossing(flavor, args.n, args.k)?;
    report.parameter("m", crossing.base_level);
    report.counter("N", crossing.crossing);
    report.counter("minimal_bound", crossing.minimal_bound.to_string());
    report.counter("dense_bound", crossing.dense_bound.to_string());
    report.counter("crossing_flag", true);
    report.verdict("crossing_found", true);
    Ok(report)
}

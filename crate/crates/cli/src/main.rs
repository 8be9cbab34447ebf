//! `ep`: packing/cover certificates from the command line.
//!
//! Exit codes: 0 success (or a packing), 10 a cover was returned, 1 a
//! checked object is invalid or a fuzz run found violations, 2 error.

mod gadget;

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ep_core::bench::{self, GapParams, GenSpec, Instance};
use ep_core::certificates::{detector_by_name, Certificate, EpOutcome, PatternDetector, QualityReport};
use ep_core::cycles::{ep_cycles, DEFAULT_C};
use ep_core::decomp::{self, Ceiling, TreeDecomposition};
use ep_core::graph::{Mode, MultiGraph, VertexId};
use ep_core::io;
use ep_core::iso::pattern_by_name;
use ep_core::oracles::{self, Budget, DEFAULT_COPY_CAP, DEFAULT_NODE_CAP};
use ep_core::tree_partition::{self, TreePartition};
use ep_core::trees;

const COVER_EXIT: u8 = 10;

#[derive(Parser)]
#[command(name = "ep", version, about = "Erdős–Pósa packing/cover certificates")]
struct Cli {
    /// Seed for randomized commands
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// Search-node cap for exact solvers
    #[arg(long, global = true, env = "EP_BUDGET", default_value_t = DEFAULT_NODE_CAP)]
    budget: u64,
    /// Output file (stdout when absent)
    #[arg(short = 'o', long = "output", global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Either k disjoint cycles or a small cycle cover
    Cycles {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short)]
        k: usize,
        #[arg(long, default_value = "v")]
        mode: Mode,
        #[arg(long = "c-const", default_value_t = DEFAULT_C)]
        c: f64,
    },
    /// Exact packing and cover numbers
    Oracle {
        #[arg(value_enum)]
        which: OracleKind,
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, default_value = "k3")]
        pattern: String,
        #[arg(long, default_value = "v")]
        mode: Mode,
    },
    /// Subtree families of a tree
    #[command(subcommand)]
    Trees(TreesCmd),
    /// Tree decompositions
    #[command(subcommand)]
    Decomp(DecompCmd),
    /// Tree partitions
    #[command(subcommand)]
    Tp(TpCmd),
    /// Lower-bound gadgets
    #[command(subcommand)]
    Gadget(gadget::GadgetCmd),
    /// Randomized checks of the Tuza and Jones conjectures
    Fuzz {
        #[arg(value_enum)]
        conjecture: Conjecture,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long = "max-n", default_value_t = 10)]
        max_n: usize,
    },
    /// Realized cycle cover sizes against the claimed bound, as CSV
    Bench {
        #[arg(long, default_value = "v")]
        mode: Mode,
        #[arg(long = "k-max", default_value_t = 8)]
        k_max: usize,
        #[command(flatten)]
        hosts: GenArgs,
        #[arg(long, default_value_t = 4)]
        instances: usize,
        #[arg(long = "c-const", default_value_t = DEFAULT_C)]
        c: f64,
    },
    /// Check a certificate against a graph
    Verify {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short, long)]
        certificate: PathBuf,
        #[arg(long, default_value = "cycles")]
        pattern: String,
    },
    /// Random instances
    Gen(GenArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleKind {
    VpackCycles,
    VcoverCycles,
    EpackCycles,
    EcoverCycles,
    PackSub,
    CoverSub,
}

#[derive(Clone, Copy, ValueEnum)]
enum Conjecture {
    Tuza,
    Jones,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Gnp,
    PlanarStacked,
    Tree,
    SubtreeFamily,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long = "gen", value_enum, default_value = "gnp")]
    kind: GenKind,
    #[arg(short, long, default_value_t = 20)]
    n: usize,
    #[arg(short, long, default_value_t = 0.1)]
    p: f64,
    #[arg(long, default_value_t = 0)]
    deletions: usize,
    #[arg(long, default_value_t = 8)]
    members: usize,
    #[arg(long = "max-size", default_value_t = 4)]
    max_size: usize,
}

impl GenArgs {
    fn spec(&self) -> GenSpec {
        match self.kind {
            GenKind::Gnp => GenSpec::Gnp { n: self.n, p: self.p },
            GenKind::PlanarStacked => GenSpec::PlanarStacked {
                n: self.n,
                deletions: self.deletions,
            },
            GenKind::Tree => GenSpec::Tree { n: self.n },
            GenKind::SubtreeFamily => GenSpec::SubtreeFamily {
                n: self.n,
                members: self.members,
                max_size: self.max_size,
            },
        }
    }
}

#[derive(Subcommand)]
enum TreesCmd {
    /// Maximum disjoint members and a minimum hitting set
    Gallai {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// k pairwise disjoint members from each family
    Select {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(short)]
        k: usize,
    },
}

#[derive(Args)]
struct GraphTd {
    #[arg(short, long)]
    input: PathBuf,
    /// Decomposition file; a heuristic one is computed when absent
    #[arg(long)]
    td: Option<PathBuf>,
}

#[derive(Subcommand)]
enum DecompCmd {
    /// Check a decomposition (exit 1 when invalid)
    Validate {
        #[command(flatten)]
        src: GraphTd,
    },
    /// Write a decomposition, exact for small graphs
    Compute {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Convert to nice form; writes its bags as a .td file
    Nice {
        #[command(flatten)]
        src: GraphTd,
    },
    /// Balanced separation for cycle packings
    Separate {
        #[command(flatten)]
        src: GraphTd,
    },
    /// Cover of a connected pattern on a bounded-treewidth host
    Cover {
        #[command(flatten)]
        src: GraphTd,
        #[arg(long, default_value = "cycles")]
        pattern: String,
        /// Linear ceiling `a,b` meaning f(k) = a*k + b; required for
        /// patterns other than cycles
        #[arg(long)]
        ceiling: Option<String>,
    },
    /// Packing or cover of a disjoint union of connected patterns
    Disconnected {
        #[command(flatten)]
        src: GraphTd,
        #[arg(short)]
        k: usize,
        /// Comma-separated component patterns
        #[arg(long, default_value = "cycles,cycles")]
        parts: String,
    },
}

#[derive(Args)]
struct GraphTp {
    #[arg(short, long)]
    input: PathBuf,
    /// Partition file; BFS layering is used when absent
    #[arg(long)]
    tp: Option<PathBuf>,
}

#[derive(Subcommand)]
enum TpCmd {
    /// Check a partition (exit 1 when invalid)
    Validate {
        #[command(flatten)]
        src: GraphTp,
    },
    /// Print the partition width
    Width {
        #[command(flatten)]
        src: GraphTp,
    },
    /// Write the BFS layering partition
    Layer {
        #[arg(short, long)]
        input: PathBuf,
    },
    /// Edge packing or cover along the partition
    Cover {
        #[command(flatten)]
        src: GraphTp,
        #[arg(short)]
        k: usize,
        #[arg(long, default_value = "cycles")]
        pattern: String,
    },
}

pub(crate) fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub(crate) fn read_graph(path: &Path) -> Result<MultiGraph> {
    io::read_gr(&read_text(path)?).with_context(|| format!("in {}", path.display()))
}

pub(crate) fn emit(output: &Option<PathBuf>, text: &str) -> Result<()> {
    match output {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn outcome_exit(o: &EpOutcome) -> u8 {
    match o.certificate {
        Certificate::Packing(_) => 0,
        Certificate::Cover(_) => COVER_EXIT,
    }
}

fn one_based(xs: &BTreeSet<VertexId>) -> Vec<usize> {
    xs.iter().map(|v| v + 1).collect()
}

fn load_td(src: &GraphTd) -> Result<(MultiGraph, TreeDecomposition)> {
    let g = read_graph(&src.input)?;
    let td = match &src.td {
        Some(p) => io::read_td(&read_text(p)?).with_context(|| format!("in {}", p.display()))?,
        None => decomp::best_effort_td(&g),
    };
    Ok((g, td))
}

fn load_tp(src: &GraphTp) -> Result<(MultiGraph, TreePartition)> {
    let g = read_graph(&src.input)?;
    let tp = match &src.tp {
        Some(p) => io::read_tp(&read_text(p)?).with_context(|| format!("in {}", p.display()))?,
        None => tree_partition::bfs_layering(&g),
    };
    Ok((g, tp))
}

pub(crate) fn pattern_graph(name: &str) -> Result<MultiGraph> {
    if let Some(h) = pattern_by_name(name) {
        return Ok(h);
    }
    let path = Path::new(name);
    if path.exists() {
        return read_graph(path);
    }
    bail!("unknown pattern {name:?}: use a name like k3, path3, k5 or a .gr file")
}

fn run(cli: Cli) -> Result<u8> {
    let budget = Budget {
        nodes: cli.budget,
        copies: DEFAULT_COPY_CAP,
    };
    let out = &cli.output;
    match cli.command {
        Command::Cycles { input, k, mode, c } => {
            let g = read_graph(&input)?;
            let o = ep_cycles(&g, k, mode, c)?;
            emit(out, &io::write_outcome(&o))?;
            Ok(outcome_exit(&o))
        }
        Command::Oracle {
            which,
            input,
            pattern,
            mode,
        } => {
            let g = read_graph(&input)?;
            let r = match which {
                OracleKind::VpackCycles => oracles::exact_vpack_cycles_with(&g, budget)?,
                OracleKind::VcoverCycles => oracles::exact_vcover_cycles_with(&g, budget)?,
                OracleKind::EpackCycles => oracles::exact_epack_cycles_with(&g, budget)?,
                OracleKind::EcoverCycles => oracles::exact_ecover_cycles(&g),
                OracleKind::PackSub => oracles::exact_pack_subgraph(&g, &pattern_graph(&pattern)?, mode, budget)?,
                OracleKind::CoverSub => oracles::exact_cover_subgraph(&g, &pattern_graph(&pattern)?, mode, budget)?,
            };
            println!("{}", r.value);
            if out.is_some() {
                emit(out, &io::write_certificate(&r.witness))?;
            }
            Ok(0)
        }
        Command::Trees(cmd) => run_trees(cmd, cli.budget, out),
        Command::Decomp(cmd) => run_decomp(cmd, out),
        Command::Tp(cmd) => run_tp(cmd, out),
        Command::Gadget(cmd) => gadget::run(cmd, out),
        Command::Fuzz {
            conjecture,
            trials,
            max_n,
        } => {
            let report = match conjecture {
                Conjecture::Tuza => bench::fuzz_tuza(trials, max_n, cli.seed, budget)?,
                Conjecture::Jones => bench::fuzz_jones(trials, max_n, cli.seed, budget)?,
            };
            eprintln!(
                "{}: {} trials, max ratio {}, {} violations",
                report.conjecture,
                report.trials,
                report.max_ratio,
                report.violations.len()
            );
            emit(out, &(serde_json::to_string_pretty(&report)? + "\n"))?;
            Ok(if report.violations.is_empty() { 0 } else { 1 })
        }
        Command::Bench {
            mode,
            k_max,
            hosts,
            instances,
            c,
        } => {
            let params = GapParams {
                mode,
                k_max,
                hosts: hosts.spec(),
                instances,
                c,
                seed: cli.seed,
            };
            emit(out, &bench::bench_gap(&params)?.to_csv())?;
            Ok(0)
        }
        Command::Verify {
            input,
            certificate,
            pattern,
        } => {
            let g = read_graph(&input)?;
            let o = io::read_outcome(&read_text(&certificate)?)?;
            let det = detector_by_name(&pattern)?;
            match o.verify(&g, det.as_ref()) {
                Ok(()) => {
                    println!("valid");
                    Ok(0)
                }
                Err(v) => {
                    println!("invalid: {v}");
                    Ok(1)
                }
            }
        }
        Command::Gen(args) => {
            let text = match bench::gen_random(args.spec(), cli.seed)? {
                Instance::Graph(g) => io::write_gr(&g),
                Instance::Family(f) => io::write_family(&f),
            };
            emit(out, &text)?;
            Ok(0)
        }
    }
}

fn run_trees(cmd: TreesCmd, cap: u64, out: &Option<PathBuf>) -> Result<u8> {
    match cmd {
        TreesCmd::Gallai { input } => {
            let fam = io::read_family(&read_text(&input)?)?;
            let (p, c) = trees::gallai(&fam)?;
            let json = serde_json::json!({
                "packing": p.members.iter().map(|w| one_based(&w.vertices)).collect::<Vec<_>>(),
                "cover": one_based(&c.elements),
            });
            emit(out, &(serde_json::to_string_pretty(&json)? + "\n"))?;
            Ok(0)
        }
        TreesCmd::Select { input, k } => {
            let (tree, families) = io::read_families(&read_text(&input)?)?;
            match trees::rs_selection(&tree, &families, k, cap)? {
                Some(sel) => {
                    let sel: Vec<Vec<usize>> = sel.iter().map(|f| f.iter().map(|i| i + 1).collect()).collect();
                    emit(out, &(serde_json::to_string_pretty(&serde_json::json!({ "selection": sel }))? + "\n"))?;
                    Ok(0)
                }
                None => {
                    eprintln!("no selection of {k} disjoint members per family exists");
                    Ok(1)
                }
            }
        }
    }
}

fn linear_ceiling(spec: &str) -> Result<Ceiling> {
    let parts: Vec<usize> = spec
        .split(',')
        .map(|s| s.trim().parse::<usize>())
        .collect::<std::result::Result<_, _>>()
        .with_context(|| format!("ceiling {spec:?} must be `a,b`"))?;
    let [a, b] = parts[..] else {
        bail!("ceiling {spec:?} must be `a,b`")
    };
    Ok(Ceiling::new(format!("f(k) = {a}k + {b}"), move |k| a * k + b))
}

fn run_decomp(cmd: DecompCmd, out: &Option<PathBuf>) -> Result<u8> {
    match cmd {
        DecompCmd::Validate { src } => {
            let (g, td) = load_td(&src)?;
            match decomp::validate_td(&g, &td) {
                Ok(()) => {
                    println!("valid, width {}", td.width());
                    Ok(0)
                }
                Err(v) => {
                    println!("invalid: {v}");
                    Ok(1)
                }
            }
        }
        DecompCmd::Compute { input } => {
            let g = read_graph(&input)?;
            let td = decomp::best_effort_td(&g);
            eprintln!("width {}", td.width());
            emit(out, &io::write_td(&td, g.vertex_count()))?;
            Ok(0)
        }
        DecompCmd::Nice { src } => {
            let (g, td) = load_td(&src)?;
            let ntd = decomp::to_nice(&g, &td)?;
            let joins = ntd.nodes.iter().filter(|n| n.kind == decomp::NiceKind::Join).count();
            eprintln!("{} nodes, {} joins, width {}", ntd.nodes.len(), joins, ntd.width());
            emit(out, &io::write_td(&ntd.to_td(), g.vertex_count()))?;
            Ok(0)
        }
        DecompCmd::Separate { src } => {
            let (g, td) = load_td(&src)?;
            let ntd = decomp::to_nice(&g, &td)?;
            let sep = decomp::balanced_separation(&g, &ntd, &decomp::cycle_vpack_oracle())?;
            let json = serde_json::json!({
                "order": sep.order(),
                "a": one_based(&sep.a),
                "b": one_based(&sep.b),
                "separator": one_based(&sep.separator()),
            });
            emit(out, &(serde_json::to_string_pretty(&json)? + "\n"))?;
            Ok(0)
        }
        DecompCmd::Cover { src, pattern, ceiling } => {
            let (g, td) = load_td(&src)?;
            let det: Arc<dyn PatternDetector> = Arc::from(detector_by_name(&pattern)?);
            let (ceiling, oracle): (Ceiling, Box<decomp::PackOracle>) = match (ceiling, pattern.as_str()) {
                (Some(spec), _) => (linear_ceiling(&spec)?, Box::new(decomp::detector_vpack_oracle(det.clone()))),
                (None, "cycles") => (decomp::cycle_tw_ceiling(), Box::new(decomp::cycle_vpack_oracle())),
                (None, _) => bail!("--ceiling is required for pattern {pattern:?}"),
            };
            decomp::validate_td(&g, &td).map_err(|v| anyhow::anyhow!("invalid decomposition: {v}"))?;
            let c = decomp::cover_connected_bounded_tw(&g, det.as_ref(), oracle.as_ref(), &ceiling, Some(&td))?;
            let o = EpOutcome {
                certificate: Certificate::Cover(c.cover),
                quality: QualityReport {
                    bound_claimed: c.bound,
                    hypotheses_held: c.within_bound,
                    notes: vec![format!("pack {}, widest decomposition {}", c.pack, c.max_width)],
                },
            };
            emit(out, &io::write_outcome(&o))?;
            Ok(COVER_EXIT)
        }
        DecompCmd::Disconnected { src, k, parts } => {
            let (g, td) = load_td(&src)?;
            let dets = parts
                .split(',')
                .map(|p| detector_by_name(p.trim()))
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let refs: Vec<&dyn PatternDetector> = dets.iter().map(|d| d.as_ref()).collect();
            let o = decomp::disconnected_pattern_ep(&g, &td, &refs, k)?;
            emit(out, &io::write_outcome(&o))?;
            Ok(outcome_exit(&o))
        }
    }
}

fn run_tp(cmd: TpCmd, out: &Option<PathBuf>) -> Result<u8> {
    match cmd {
        TpCmd::Validate { src } => {
            let (g, tp) = load_tp(&src)?;
            match tree_partition::validate_tp(&g, &tp) {
                Ok(()) => {
                    println!("valid, width {}", tree_partition::tp_width(&g, &tp));
                    Ok(0)
                }
                Err(v) => {
                    println!("invalid: {v}");
                    Ok(1)
                }
            }
        }
        TpCmd::Width { src } => {
            let (g, tp) = load_tp(&src)?;
            tree_partition::validate_tp(&g, &tp).map_err(|v| anyhow::anyhow!("invalid partition: {v}"))?;
            println!("{}", tree_partition::tp_width(&g, &tp));
            Ok(0)
        }
        TpCmd::Layer { input } => {
            let g = read_graph(&input)?;
            emit(out, &io::write_tp(&tree_partition::bfs_layering(&g), g.vertex_count()))?;
            Ok(0)
        }
        TpCmd::Cover { src, k, pattern } => {
            let (g, tp) = load_tp(&src)?;
            let det = detector_by_name(&pattern)?;
            let o = tree_partition::tp_edge_cover(&g, &tp, det.as_ref(), k)?;
            emit(out, &io::write_outcome(&o))?;
            Ok(outcome_exit(&o))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

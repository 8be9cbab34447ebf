//! Instance generators, conjecture fuzzers and the gap table.
//!
//! Trial `i` of a run seeded with `s` draws from `Rng::derived(s, i)`, so
//! reports do not depend on scheduling.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::certificates::{
    verify_cover, verify_packing, Certificate, CycleDetector, FixedSubgraphDetector, PatternDetector,
};
use crate::cycles::ep_cycles;
use crate::error::{EpError, Result};
use crate::graph::{named, Mode, MultiGraph};
use crate::io::graph_hash;
use crate::oracles::{
    exact_cover_subgraph, exact_pack_subgraph, exact_vcover_cycles_with, exact_vpack_cycles_with, Budget, ExactResult,
};
use crate::random::{gnp, planar_stacked, random_tree, subtree_family, Rng};
use crate::trees::SubtreeFamily;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GenSpec {
    Gnp { n: usize, p: f64 },
    PlanarStacked { n: usize, deletions: usize },
    Tree { n: usize },
    SubtreeFamily { n: usize, members: usize, max_size: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    Graph(MultiGraph),
    Family(SubtreeFamily),
}

impl Instance {
    pub fn graph(self) -> Result<MultiGraph> {
        match self {
            Instance::Graph(g) => Ok(g),
            Instance::Family(f) => Ok(f.tree),
        }
    }
}

pub fn gen_random(spec: GenSpec, seed: u64) -> Result<Instance> {
    let rng = &mut Rng::new(seed);
    Ok(match spec {
        GenSpec::Gnp { n, p } => Instance::Graph(gnp(n, p, rng)?),
        GenSpec::PlanarStacked { n, deletions } => Instance::Graph(planar_stacked(n, deletions, rng)?),
        GenSpec::Tree { n } => {
            if n == 0 {
                return Err(EpError::InvalidParameter("tree needs n >= 1".into()));
            }
            Instance::Graph(random_tree(n, rng))
        }
        GenSpec::SubtreeFamily { n, members, max_size } => Instance::Family(subtree_family(n, members, max_size, rng)?),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzRow {
    pub index: usize,
    pub hash: String,
    pub n: usize,
    pub m: usize,
    pub pack: usize,
    pub cover: usize,
    /// cover / pack, 0 when both are 0
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub conjecture: String,
    pub trials: usize,
    pub max_n: usize,
    pub seed: u64,
    pub rows: Vec<FuzzRow>,
    pub max_ratio: f64,
    /// indices of trials with cover > 2 * pack
    pub violations: Vec<usize>,
}

impl FuzzReport {
    fn assemble(conjecture: &str, trials: usize, max_n: usize, seed: u64, mut rows: Vec<FuzzRow>) -> Self {
        rows.sort_by_key(|r| r.index);
        let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
        let violations = rows.iter().filter(|r| r.cover > 2 * r.pack).map(|r| r.index).collect();
        FuzzReport {
            conjecture: conjecture.into(),
            trials,
            max_n,
            seed,
            rows,
            max_ratio,
            violations,
        }
    }
}

fn checked(g: &MultiGraph, det: &dyn PatternDetector, r: &ExactResult) -> Result<usize> {
    let verdict = match &r.witness {
        Certificate::Packing(p) => verify_packing(g, det, p).map(|_| p.len()),
        Certificate::Cover(c) => verify_cover(g, det, c).map(|_| c.len()),
    };
    match verdict {
        Ok(len) if len == r.value => Ok(len),
        Ok(len) => Err(EpError::OracleFailure(format!("witness of size {len} for value {}", r.value))),
        Err(e) => Err(EpError::OracleFailure(format!("oracle witness rejected: {e}"))),
    }
}

fn row(index: usize, g: &MultiGraph, pack: usize, cover: usize) -> Result<FuzzRow> {
    if pack > cover {
        return Err(EpError::OracleFailure(format!("trial {index}: pack {pack} exceeds cover {cover}")));
    }
    Ok(FuzzRow {
        index,
        hash: graph_hash(g),
        n: g.vertex_count(),
        m: g.edge_count(),
        pack,
        cover,
        ratio: if pack == 0 { 0.0 } else { cover as f64 / pack as f64 },
    })
}

/// Exact triangle edge packing and cover of one host.
pub fn tuza_trial(index: usize, g: &MultiGraph, budget: Budget) -> Result<FuzzRow> {
    let k3 = named::complete(3);
    let det = FixedSubgraphDetector::triangle();
    let pack = checked(g, &det, &exact_pack_subgraph(g, &k3, Mode::Edge, budget)?)?;
    let cover = checked(g, &det, &exact_cover_subgraph(g, &k3, Mode::Edge, budget)?)?;
    row(index, g, pack, cover)
}

/// Exact cycle vertex packing and feedback vertex set of one host.
pub fn jones_trial(index: usize, g: &MultiGraph, budget: Budget) -> Result<FuzzRow> {
    let pack = checked(g, &CycleDetector, &exact_vpack_cycles_with(g, budget)?)?;
    let cover = checked(g, &CycleDetector, &exact_vcover_cycles_with(g, budget)?)?;
    row(index, g, pack, cover)
}

/// G(n, p) hosts with `n` uniform in `3..=max_n` and `p` uniform.
pub fn fuzz_tuza(trials: usize, max_n: usize, seed: u64, budget: Budget) -> Result<FuzzReport> {
    if max_n < 3 {
        return Err(EpError::InvalidParameter("fuzz_tuza needs max_n >= 3".into()));
    }
    let rows = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = Rng::derived(seed, i as u64);
            let n = rng.range(3, max_n);
            let p = rng.unit();
            tuza_trial(i, &gnp(n, p, &mut rng)?, budget)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FuzzReport::assemble("tuza", trials, max_n, seed, rows))
}

/// Stacked triangulations with a uniform number of deleted edges.
pub fn fuzz_jones(trials: usize, max_n: usize, seed: u64, budget: Budget) -> Result<FuzzReport> {
    if max_n < 3 {
        return Err(EpError::InvalidParameter("fuzz_jones needs max_n >= 3".into()));
    }
    let rows = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = Rng::derived(seed, i as u64);
            let n = rng.range(3, max_n);
            let edges = if n == 3 { 3 } else { 3 * n - 6 };
            let deletions = rng.below(edges + 1);
            jones_trial(i, &planar_stacked(n, deletions, &mut rng)?, budget)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(FuzzReport::assemble("jones", trials, max_n, seed, rows))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapRow {
    pub k: usize,
    pub n: usize,
    pub pack: usize,
    pub cover: usize,
    pub bound: usize,
    pub hypotheses_held: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct GapTable {
    pub rows: Vec<GapRow>,
}

pub const GAP_HEADER: &str = "k,n,pack,cover,bound,hypotheses_held";

impl GapTable {
    pub fn to_csv(&self) -> String {
        let mut out = format!("{GAP_HEADER}\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{},{},{}", r.k, r.n, r.pack, r.cover, r.bound, r.hypotheses_held);
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapParams {
    pub mode: Mode,
    pub k_max: usize,
    pub hosts: GenSpec,
    pub instances: usize,
    pub c: f64,
    pub seed: u64,
}

/// Runs `ep_cycles` for every `k` in `1..=k_max` on each host; rows are
/// ordered by host, then `k`. `pack` is the size of a returned packing
/// (0 for covers) and `cover` the size of a returned cover (0 for
/// packings). Every certificate is verified first.
pub fn bench_gap(params: &GapParams) -> Result<GapTable> {
    let hosts = (0..params.instances)
        .map(|i| gen_random(params.hosts, Rng::derived(params.seed, i as u64).next_u64())?.graph())
        .collect::<Result<Vec<_>>>()?;
    let per_host = hosts
        .par_iter()
        .map(|g| {
            (1..=params.k_max)
                .map(|k| {
                    let out = ep_cycles(g, k, params.mode, params.c)?;
                    out.verify(g, &CycleDetector)
                        .map_err(|e| EpError::OracleFailure(format!("ep_cycles certificate rejected: {e}")))?;
                    Ok(GapRow {
                        k,
                        n: g.vertex_count(),
                        pack: out.packing().map_or(0, |p| p.len()),
                        cover: out.cover().map_or(0, |c| c.len()),
                        bound: out.quality.bound_claimed,
                        hypotheses_held: out.quality.hypotheses_held,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GapTable {
        rows: per_host.into_iter().flatten().collect(),
    })
}

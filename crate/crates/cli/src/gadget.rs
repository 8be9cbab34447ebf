//! `ep gadget`: writes the host as `.gr` plus a `.meta` sidecar holding
//! the recipe, a hash of the host, and labels in file numbering. `route`
//! rebuilds the gadget from the recipe and refuses a hash mismatch.

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Subcommand;
use serde::{Deserialize, Serialize};

use ep_core::gadgets::{self, Gadget, GadgetKind};
use ep_core::graph::{EdgeId, VertexId};
use ep_core::io;

use crate::{emit, pattern_graph, read_graph, read_text};

#[derive(Subcommand)]
pub enum GadgetCmd {
    /// The grid gadget on its own
    Gamma {
        #[arg(short)]
        d: usize,
        #[arg(short)]
        k: usize,
    },
    /// Replace every vertex of a pattern by a grid gadget
    Thicken {
        /// k5, k33, another named pattern, or a .gr file
        #[arg(long)]
        pattern: String,
        #[arg(short)]
        k: usize,
        /// Also replace degree >= 4 vertices by subcubic trees
        #[arg(long, conflicts_with = "subcubic")]
        minor: bool,
        /// Require a subcubic pattern
        #[arg(long)]
        subcubic: bool,
    },
    /// Model of the pattern avoiding the given host vertices
    Route {
        /// Sidecar written by `gamma` or `thicken`
        #[arg(short, long)]
        input: PathBuf,
        /// Comma-separated 1-based host vertices
        #[arg(short, default_value = "")]
        x: String,
    },
}

#[derive(Debug, Serialize, Deserialize)]
struct CopyMeta {
    pattern_vertex: usize,
    apices: Vec<Vec<usize>>,
    /// `ports[p][j]`: j-th port vertex of block p
    ports: Vec<Vec<Vec<usize>>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct BundleMeta {
    pattern_edge: usize,
    host_edges: Vec<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Meta {
    kind: GadgetKind,
    k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    d: Option<usize>,
    /// pattern as `.gr` text
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pattern: Option<String>,
    graph: String,
    vertices: usize,
    edges: usize,
    hash: String,
    copies: Vec<CopyMeta>,
    bundles: Vec<BundleMeta>,
}

fn build(kind: GadgetKind, k: usize, d: Option<usize>, pattern: Option<&str>) -> Result<Gadget> {
    let h = || -> Result<_> {
        let text = pattern.context("sidecar lacks the pattern")?;
        Ok(io::read_gr(text)?)
    };
    Ok(match kind {
        GadgetKind::Gamma => gadgets::gamma(d.context("sidecar lacks d")?, k)?,
        GadgetKind::Thick => gadgets::thicken(&h()?, k)?,
        GadgetKind::Subcubic => gadgets::thicken_subcubic(&h()?, k)?,
        GadgetKind::Minor => gadgets::thicken_minor(&h()?, k)?,
    })
}

fn meta_of(g: &Gadget, d: Option<usize>, graph_file: &str) -> Meta {
    let (vpos, epos) = io::gr_numbering(&g.graph);
    let labels = |v: VertexId| -> Vec<usize> {
        match g.trees.get(&v) {
            Some(t) => t.iter().map(|u| vpos[u] + 1).collect(),
            None => vec![vpos[&v] + 1],
        }
    };
    let copies = g
        .copies
        .iter()
        .map(|(&x, c)| CopyMeta {
            pattern_vertex: x + 1,
            apices: c.apices.iter().map(|&a| labels(a)).collect(),
            ports: (0..c.d)
                .map(|p| (0..g.k).map(|j| labels(c.port_vertex(g.k, p, j))).collect())
                .collect(),
        })
        .collect();
    let host_edge = |e: EdgeId| epos[g.edge_map.get(&e).unwrap_or(&e)] + 1;
    let bundles = g
        .bundles
        .iter()
        .map(|(&e, b)| BundleMeta {
            pattern_edge: e + 1,
            host_edges: b.iter().map(|&f| host_edge(f)).collect(),
        })
        .collect();
    Meta {
        kind: g.kind,
        k: g.k,
        d,
        pattern: g.pattern.as_ref().map(io::write_gr),
        graph: graph_file.into(),
        vertices: g.graph.vertex_count(),
        edges: g.graph.edge_count(),
        hash: io::graph_hash(&g.graph),
        copies,
        bundles,
    }
}

fn write_gadget(g: &Gadget, d: Option<usize>, out: &Option<PathBuf>) -> Result<u8> {
    let Some(path) = out else {
        bail!("gadget commands need -o <file.gr>; the sidecar goes next to it")
    };
    let name = path.file_name().context("output needs a file name")?.to_string_lossy();
    let meta_path = path.with_extension("meta");
    emit(out, &io::write_gr(&g.graph))?;
    let meta = meta_of(g, d, &name);
    std::fs::write(&meta_path, serde_json::to_string_pretty(&meta)? + "\n")
        .with_context(|| format!("writing {}", meta_path.display()))?;
    eprintln!(
        "{} vertices, {} edges; sidecar {}",
        meta.vertices,
        meta.edges,
        meta_path.display()
    );
    Ok(0)
}

fn load(meta_path: &Path) -> Result<Gadget> {
    let meta: Meta = serde_json::from_str(&read_text(meta_path)?).with_context(|| format!("in {}", meta_path.display()))?;
    let g = build(meta.kind, meta.k, meta.d, meta.pattern.as_deref())?;
    if io::graph_hash(&g.graph) != meta.hash {
        bail!("rebuilt gadget does not match the hash in {}", meta_path.display());
    }
    let host = meta_path.with_file_name(&meta.graph);
    if host.exists() && io::graph_hash(&read_graph(&host)?) != meta.hash {
        bail!("{} does not match its sidecar", host.display());
    }
    Ok(g)
}

pub fn run(cmd: GadgetCmd, out: &Option<PathBuf>) -> Result<u8> {
    match cmd {
        GadgetCmd::Gamma { d, k } => write_gadget(&gadgets::gamma(d, k)?, Some(d), out),
        GadgetCmd::Thicken {
            pattern,
            k,
            minor,
            subcubic,
        } => {
            let h = io::normalize(&pattern_graph(&pattern)?);
            let g = if minor {
                gadgets::thicken_minor(&h, k)?
            } else if subcubic {
                gadgets::thicken_subcubic(&h, k)?
            } else {
                gadgets::thicken(&h, k)?
            };
            write_gadget(&g, None, out)
        }
        GadgetCmd::Route { input, x } => {
            let g = load(&input)?;
            let (vpos, epos) = io::gr_numbering(&g.graph);
            let by_pos: BTreeMap<usize, VertexId> = vpos.iter().map(|(&v, &i)| (i + 1, v)).collect();
            let xs = x
                .split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(|s| {
                    let i: usize = s.parse().with_context(|| format!("bad vertex {s:?}"))?;
                    by_pos.get(&i).copied().with_context(|| format!("no host vertex {i}"))
                })
                .collect::<Result<BTreeSet<_>>>()?;
            let model = gadgets::route_avoiding(&g, &xs)?;
            let h = g.pattern.as_ref().context("gadget has no pattern")?;
            if let Err(why) = model.verify(&g.graph, h) {
                bail!("routed model failed verification: {why}");
            }
            if model.vertices().iter().any(|v| xs.contains(v)) {
                bail!("routed model meets X");
            }
            let file = model.map_ids(|v| vpos[&v] + 1, |e| epos[&e] + 1, |v| v + 1, |e| e + 1);
            emit(out, &(serde_json::to_string_pretty(&file)? + "\n"))?;
            Ok(0)
        }
    }
}

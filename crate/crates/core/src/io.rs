//! Text formats. Files use 1-based vertex, edge and node numbers; in
//! memory everything is 0-based.
//!
//! - `.gr`: `p gr <n> <m>` then one `u v` line per edge. The writer
//!   sorts edges lexicographically; the reader numbers edges in line order.
//! - `.td`: `s td <bags> <width+1> <n>`, `b <i> <v...>` per bag, then
//!   `i j` per tree edge.
//! - tree partition: `s tp <bags> <n>`, `b <i> <v...>`, tree edges; bag 1
//!   is the root.
//! - subtree family: `t <n>`, n-1 tree edge lines `u v`, then one line of
//!   vertex ids per member. Several families over one tree are separated
//!   by lines holding just `f`.
//!
//! Lines starting with `c` are comments.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::certificates::{Certificate, CoverCertificate, EpOutcome, PackingCertificate, PatternWitness, QualityReport};
use crate::decomp::TreeDecomposition;
use crate::error::{EpError, Result};
use crate::graph::{EdgeId, Mode, MultiGraph, VertexId};
use crate::trees::SubtreeFamily;
use crate::tree_partition::TreePartition;

fn parse_err(line: usize, msg: impl Into<String>) -> EpError {
    EpError::Parse { line, msg: msg.into() }
}

/// Non-comment lines with their 1-based line numbers, split on whitespace.
fn tokens(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split_whitespace().collect::<Vec<_>>()))
        .filter(|(_, t)| !t.is_empty() && t[0] != "c")
}

fn num(line: usize, s: &str) -> Result<usize> {
    s.parse().map_err(|_| parse_err(line, format!("expected a number, found {s:?}")))
}

/// 1-based id to 0-based, checked against `limit`.
fn id(line: usize, s: &str, limit: usize, what: &str) -> Result<usize> {
    let v = num(line, s)?;
    if v == 0 || v > limit {
        return Err(parse_err(line, format!("{what} {v} outside 1..={limit}")));
    }
    Ok(v - 1)
}

pub fn read_gr(text: &str) -> Result<MultiGraph> {
    let mut lines = tokens(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    if header.len() != 4 || header[0] != "p" || !matches!(header[1], "gr" | "tw") {
        return Err(parse_err(hl, "header must be `p gr <n> <m>`"));
    }
    let (n, m) = (num(hl, header[2])?, num(hl, header[3])?);
    let mut g = MultiGraph::with_vertices(n);
    for (l, t) in lines {
        if t.len() != 2 {
            return Err(parse_err(l, "edge line must have two endpoints"));
        }
        let (u, v) = (id(l, t[0], n, "vertex")?, id(l, t[1], n, "vertex")?);
        g.add_edge(u, v).map_err(|e| parse_err(l, e.to_string()))?;
    }
    if g.edge_count() != m {
        return Err(parse_err(hl, format!("header promises {m} edges, found {}", g.edge_count())));
    }
    Ok(g)
}

/// 0-based file positions of every vertex and edge in [`write_gr`] output.
pub fn gr_numbering(g: &MultiGraph) -> (BTreeMap<VertexId, usize>, BTreeMap<EdgeId, usize>) {
    let pos: BTreeMap<VertexId, usize> = g.vertices().enumerate().map(|(i, v)| (v, i)).collect();
    let mut lines: Vec<((usize, usize), EdgeId)> = g
        .edges()
        .map(|(e, a, b)| ((pos[&a].min(pos[&b]), pos[&a].max(pos[&b])), e))
        .collect();
    lines.sort_unstable();
    let edges = lines.into_iter().enumerate().map(|(i, (_, e))| (e, i)).collect();
    (pos, edges)
}

/// Writes `g` with vertices renumbered by ascending id, each edge as
/// `min max`, lines sorted. Reading the result back gives edge ids in
/// that sorted order; see [`gr_numbering`].
pub fn write_gr(g: &MultiGraph) -> String {
    let pos: BTreeMap<VertexId, usize> = g.vertices().enumerate().map(|(i, v)| (v, i + 1)).collect();
    let mut pairs: Vec<(usize, usize)> = g
        .edges()
        .map(|(_, a, b)| (pos[&a].min(pos[&b]), pos[&a].max(pos[&b])))
        .collect();
    pairs.sort_unstable();
    let mut out = format!("p gr {} {}\n", g.vertex_count(), g.edge_count());
    for (a, b) in pairs {
        let _ = writeln!(out, "{a} {b}");
    }
    out
}

/// The graph as it reads back from its own `.gr` text: vertices
/// `0..n`, edges numbered in sorted order.
pub fn normalize(g: &MultiGraph) -> MultiGraph {
    read_gr(&write_gr(g)).expect("writer output parses")
}

fn read_bags(
    text: &str,
    kind: &str,
    header_len: usize,
) -> Result<(Vec<usize>, Vec<BTreeSet<VertexId>>, Vec<(usize, usize)>)> {
    let mut lines = tokens(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    if header.len() != header_len || header[0] != "s" || header[1] != kind {
        return Err(parse_err(hl, format!("header must start with `s {kind}`")));
    }
    let nums: Vec<usize> = header[2..].iter().map(|s| num(hl, s)).collect::<Result<_>>()?;
    let (bags_n, n) = (nums[0], *nums.last().unwrap());
    let mut bags: Vec<Option<BTreeSet<VertexId>>> = vec![None; bags_n];
    let mut edges = Vec::new();
    for (l, t) in lines {
        if t[0] == "b" {
            if t.len() < 2 {
                return Err(parse_err(l, "bag line needs an index"));
            }
            let i = id(l, t[1], bags_n, "bag")?;
            if bags[i].is_some() {
                return Err(parse_err(l, format!("bag {} given twice", i + 1)));
            }
            bags[i] = Some(t[2..].iter().map(|s| id(l, s, n, "vertex")).collect::<Result<_>>()?);
        } else {
            if t.len() != 2 {
                return Err(parse_err(l, "tree edge line must have two nodes"));
            }
            edges.push((id(l, t[0], bags_n, "bag")?, id(l, t[1], bags_n, "bag")?));
        }
    }
    let bags = bags
        .into_iter()
        .enumerate()
        .map(|(i, b)| b.ok_or_else(|| parse_err(hl, format!("bag {} missing", i + 1))))
        .collect::<Result<_>>()?;
    Ok((nums, bags, edges))
}

fn write_bag_lines(out: &mut String, bags: &[&BTreeSet<VertexId>]) {
    for (i, bag) in bags.iter().enumerate() {
        let _ = write!(out, "b {}", i + 1);
        for v in bag.iter() {
            let _ = write!(out, " {}", v + 1);
        }
        out.push('\n');
    }
}

pub fn read_td(text: &str) -> Result<TreeDecomposition> {
    let (nums, bags, edges) = read_bags(text, "td", 5)?;
    let td = TreeDecomposition::from_bags(bags, &edges).map_err(|e| parse_err(1, e.to_string()))?;
    if td.max_bag() > nums[1] {
        return Err(parse_err(1, format!("bag of size {} exceeds the declared {}", td.max_bag(), nums[1])));
    }
    Ok(td)
}

/// Writes the decomposition of a host on `n` vertices.
pub fn write_td(td: &TreeDecomposition, n: usize) -> String {
    let nodes: Vec<usize> = td.bags.keys().copied().collect();
    let pos: BTreeMap<usize, usize> = nodes.iter().enumerate().map(|(i, &t)| (t, i + 1)).collect();
    let mut out = format!("s td {} {} {}\n", nodes.len(), td.max_bag(), n);
    write_bag_lines(&mut out, &td.bags.values().collect::<Vec<_>>());
    for (_, a, b) in td.tree.edges() {
        let _ = writeln!(out, "{} {}", pos[&a], pos[&b]);
    }
    out
}

pub fn read_tp(text: &str) -> Result<TreePartition> {
    let (_, bags, edges) = read_bags(text, "tp", 4)?;
    TreePartition::from_bags(bags, &edges, 0).map_err(|e| parse_err(1, e.to_string()))
}

/// Writes the partition with the root as bag 1 and the other bags in
/// ascending node order.
pub fn write_tp(tp: &TreePartition, n: usize) -> String {
    let mut nodes: Vec<usize> = vec![tp.root];
    nodes.extend(tp.bags.keys().copied().filter(|&t| t != tp.root));
    let pos: BTreeMap<usize, usize> = nodes.iter().enumerate().map(|(i, &t)| (t, i + 1)).collect();
    let mut out = format!("s tp {} {}\n", nodes.len(), n);
    write_bag_lines(&mut out, &nodes.iter().map(|t| &tp.bags[t]).collect::<Vec<_>>());
    for (_, a, b) in tp.tree.edges() {
        let _ = writeln!(out, "{} {}", pos[&a], pos[&b]);
    }
    out
}

/// Reads a tree with one or more member lists.
pub fn read_families(text: &str) -> Result<(MultiGraph, Vec<Vec<BTreeSet<VertexId>>>)> {
    let mut lines = tokens(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "missing header"))?;
    if header.len() != 2 || header[0] != "t" {
        return Err(parse_err(hl, "header must be `t <n>`"));
    }
    let n = num(hl, header[1])?;
    if n == 0 {
        return Err(parse_err(hl, "tree needs a vertex"));
    }
    let mut tree = MultiGraph::with_vertices(n);
    let mut families = vec![Vec::new()];
    for (l, t) in lines {
        if tree.edge_count() + 1 < n {
            if t.len() != 2 {
                return Err(parse_err(l, format!("expected tree edge {} of {}", tree.edge_count() + 1, n - 1)));
            }
            tree.add_edge(id(l, t[0], n, "vertex")?, id(l, t[1], n, "vertex")?)
                .map_err(|e| parse_err(l, e.to_string()))?;
        } else if t == ["f"] {
            families.push(Vec::new());
        } else {
            let m = t.iter().map(|s| id(l, s, n, "vertex")).collect::<Result<_>>()?;
            families.last_mut().unwrap().push(m);
        }
    }
    if families[0].is_empty() && families.len() > 1 {
        families.remove(0);
    }
    Ok((tree, families))
}

/// Reads a single family; `f` separators are rejected.
pub fn read_family(text: &str) -> Result<SubtreeFamily> {
    let (tree, mut families) = read_families(text)?;
    if families.len() != 1 {
        return Err(parse_err(1, format!("expected one family, found {}", families.len())));
    }
    SubtreeFamily::new(tree, families.pop().unwrap())
}

pub fn write_families(tree: &MultiGraph, families: &[Vec<BTreeSet<VertexId>>]) -> String {
    let mut out = format!("t {}\n", tree.vertex_count());
    let mut pairs: Vec<(usize, usize)> = tree.edges().map(|(_, a, b)| (a.min(b) + 1, a.max(b) + 1)).collect();
    pairs.sort_unstable();
    for (a, b) in pairs {
        let _ = writeln!(out, "{a} {b}");
    }
    for fam in families {
        if families.len() > 1 {
            out.push_str("f\n");
        }
        for m in fam {
            let line: Vec<String> = m.iter().map(|v| (v + 1).to_string()).collect();
            let _ = writeln!(out, "{}", line.join(" "));
        }
    }
    out
}

pub fn write_family(fam: &SubtreeFamily) -> String {
    write_families(&fam.tree, std::slice::from_ref(&fam.members))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct WitnessFile {
    vertices: Vec<usize>,
    edges: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
enum CertificateFile {
    Packing { mode: String, members: Vec<WitnessFile> },
    Cover { mode: String, elements: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct OutcomeFile {
    #[serde(flatten)]
    certificate: CertificateFile,
    #[serde(default)]
    bound_claimed: usize,
    #[serde(default)]
    hypotheses_held: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    notes: Vec<String>,
}

fn plus1(xs: &BTreeSet<usize>) -> Vec<usize> {
    xs.iter().map(|x| x + 1).collect()
}

fn minus1(xs: &[usize]) -> Result<BTreeSet<usize>> {
    xs.iter()
        .map(|&x| x.checked_sub(1).ok_or_else(|| parse_err(0, "ids are 1-based")))
        .collect()
}

fn to_file(c: &Certificate) -> CertificateFile {
    match c {
        Certificate::Packing(p) => CertificateFile::Packing {
            mode: p.mode.as_str().into(),
            members: p
                .members
                .iter()
                .map(|w| WitnessFile {
                    vertices: plus1(&w.vertices),
                    edges: plus1(&w.edges),
                })
                .collect(),
        },
        Certificate::Cover(c) => CertificateFile::Cover {
            mode: c.mode.as_str().into(),
            elements: plus1(&c.elements),
        },
    }
}

fn from_file(f: CertificateFile) -> Result<Certificate> {
    let mode = |s: &str| s.parse::<Mode>().map_err(|_| parse_err(0, format!("unknown mode {s:?}")));
    Ok(match f {
        CertificateFile::Packing { mode: m, members } => Certificate::Packing(PackingCertificate {
            mode: mode(&m)?,
            members: members
                .into_iter()
                .map(|w| Ok(PatternWitness::new(minus1(&w.vertices)?, minus1(&w.edges)?)))
                .collect::<Result<_>>()?,
        }),
        CertificateFile::Cover { mode: m, elements } => Certificate::Cover(CoverCertificate {
            mode: mode(&m)?,
            elements: minus1(&elements)?,
        }),
    })
}

fn json_err(e: serde_json::Error) -> EpError {
    parse_err(e.line(), e.to_string())
}

pub fn write_certificate(c: &Certificate) -> String {
    serde_json::to_string_pretty(&to_file(c)).expect("certificate serializes") + "\n"
}

pub fn read_certificate(text: &str) -> Result<Certificate> {
    from_file(serde_json::from_str(text).map_err(json_err)?)
}

pub fn write_outcome(o: &EpOutcome) -> String {
    let f = OutcomeFile {
        certificate: to_file(&o.certificate),
        bound_claimed: o.quality.bound_claimed,
        hypotheses_held: o.quality.hypotheses_held,
        notes: o.quality.notes.clone(),
    };
    serde_json::to_string_pretty(&f).expect("outcome serializes") + "\n"
}

/// Reads an outcome; a bare certificate gets a default quality report.
pub fn read_outcome(text: &str) -> Result<EpOutcome> {
    let f: OutcomeFile = serde_json::from_str(text).map_err(json_err)?;
    Ok(EpOutcome {
        certificate: from_file(f.certificate)?,
        quality: QualityReport {
            bound_claimed: f.bound_claimed,
            hypotheses_held: f.hypotheses_held,
            notes: f.notes,
        },
    })
}

/// First 16 hex digits of the SHA-256 of the `.gr` text.
pub fn graph_hash(g: &MultiGraph) -> String {
    hex::encode(&Sha256::digest(write_gr(g).as_bytes())[..8])
}

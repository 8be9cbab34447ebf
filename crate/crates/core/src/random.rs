//! Seeded instance generators.
//!
//! All randomness comes from SplitMix64 (state `s += 0x9E3779B97F4A7C15`,
//! output mixed by `z = (z ^ z >> 30) * 0xBF58476D1CE4E5B9`,
//! `z = (z ^ z >> 27) * 0x94D049BB133111EB`, `z ^ z >> 31`). Derived values:
//! `unit() = (next >> 11) * 2^-53`, `below(n) = (next * n) >> 64` on 128-bit
//! integers, `coin(p) = unit() < p`.

use std::collections::BTreeSet;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::error::{EpError, Result};
use crate::graph::{MultiGraph, VertexId};
use crate::trees::SubtreeFamily;

pub struct Rng(SplitMix64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(SplitMix64::seed_from_u64(seed))
    }

    /// Generator for sub-task `index` of a run seeded with `seed`.
    pub fn derived(seed: u64, index: u64) -> Self {
        let mut base = SplitMix64::seed_from_u64(seed.wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15)));
        Rng::new(base.next_u64())
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn below(&mut self, n: usize) -> usize {
        ((self.next_u64() as u128 * n as u128) >> 64) as usize
    }

    /// Uniform in `lo..=hi`.
    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        lo + self.below(hi - lo + 1)
    }

    pub fn coin(&mut self, p: f64) -> bool {
        self.unit() < p
    }
}

/// G(n, p) over pairs in lexicographic order.
pub fn gnp(n: usize, p: f64, rng: &mut Rng) -> Result<MultiGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(EpError::InvalidParameter(format!("edge probability {p} outside [0, 1]")));
    }
    let mut g = MultiGraph::with_vertices(n);
    for u in 0..n {
        for w in u + 1..n {
            if rng.coin(p) {
                g.add_edge(u, w)?;
            }
        }
    }
    Ok(g)
}

/// Stacked triangulation on `n` vertices with `deletions` random edges
/// removed afterwards. Planar by construction.
pub fn planar_stacked(n: usize, deletions: usize, rng: &mut Rng) -> Result<MultiGraph> {
    let mut edges: Vec<(VertexId, VertexId)> = Vec::new();
    if n <= 3 {
        for u in 0..n {
            for w in u + 1..n {
                edges.push((u, w));
            }
        }
    } else {
        edges.extend([(0, 1), (1, 2), (0, 2)]);
        // inner and outer face of the base triangle
        let mut faces = vec![[0, 1, 2], [0, 1, 2]];
        for v in 3..n {
            let f = rng.below(faces.len());
            let [a, b, c] = faces[f];
            edges.extend([(a, v), (b, v), (c, v)]);
            faces[f] = [a, b, v];
            faces.push([b, c, v]);
            faces.push([a, c, v]);
        }
    }
    edges.sort_unstable();
    for _ in 0..deletions.min(edges.len()) {
        let i = rng.below(edges.len());
        edges.remove(i);
    }
    MultiGraph::from_edges(n, &edges)
}

/// Random recursive tree: vertex `i` attaches to a uniform earlier vertex.
pub fn random_tree(n: usize, rng: &mut Rng) -> MultiGraph {
    let mut g = MultiGraph::with_vertices(n);
    for v in 1..n {
        let p = rng.below(v);
        g.add_edge(p, v).unwrap();
    }
    g
}

/// A connected vertex set of `tree` grown from a random vertex to at most
/// `size` vertices.
pub fn random_subtree(tree: &MultiGraph, size: usize, rng: &mut Rng) -> BTreeSet<VertexId> {
    let verts: Vec<VertexId> = tree.vertices().collect();
    let mut set = BTreeSet::from([verts[rng.below(verts.len())]]);
    while set.len() < size {
        let frontier: Vec<VertexId> = set
            .iter()
            .flat_map(|&v| tree.neighbors(v))
            .filter(|w| !set.contains(w))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        if frontier.is_empty() {
            break;
        }
        set.insert(frontier[rng.below(frontier.len())]);
    }
    set
}

/// Random tree on `n` vertices with `members` random subtrees of at most
/// `max_size` vertices.
pub fn subtree_family(n: usize, members: usize, max_size: usize, rng: &mut Rng) -> Result<SubtreeFamily> {
    if n == 0 || max_size == 0 {
        return Err(EpError::InvalidParameter("subtree family needs n >= 1 and max_size >= 1".into()));
    }
    let tree = random_tree(n, rng);
    let ms = (0..members)
        .map(|_| {
            let size = rng.range(1, max_size);
            random_subtree(&tree, size, rng)
        })
        .collect();
    SubtreeFamily::new(tree, ms)
}

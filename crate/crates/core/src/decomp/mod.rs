//! Tree decompositions, nice decompositions, balanced separations and the
//! cover constructions built on them.

mod cover;
mod nice;
mod separation;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{EpError, Result};
use crate::graph::{EdgeId, MultiGraph, VertexId};

pub use cover::{
    compose_ep, connected_gap, cover_connected_bounded_tw, cycle_tw_ceiling, cycle_vpack_oracle, detector_vpack_oracle,
    disconnected_pattern_ep, treewidth_estimate, BoundedCover, BoundedSolver, Ceiling, Composed, PackOracle,
    ParameterEstimate, TwCoverSolver,
};
pub use nice::{to_nice, NiceKind, NiceNode, NiceTreeDecomposition};
pub use separation::{balanced_separation, Separation};

/// Largest host on which `exact_treewidth` runs.
pub const EXACT_TW_LIMIT: usize = 15;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeDecomposition {
    pub tree: MultiGraph,
    pub bags: BTreeMap<usize, BTreeSet<VertexId>>,
}

/// First condition a decomposition fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TdViolation {
    NotATree,
    MissingBag { node: usize },
    UnknownVertex { node: usize, vertex: VertexId },
    VertexUncovered { vertex: VertexId },
    EdgeUncovered { edge: EdgeId, u: VertexId, v: VertexId },
    Disconnected { vertex: VertexId },
}

impl fmt::Display for TdViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TdViolation::NotATree => write!(f, "decomposition tree is not a tree"),
            TdViolation::MissingBag { node } => write!(f, "node {node} has no bag"),
            TdViolation::UnknownVertex { node, vertex } => write!(f, "bag {node} holds unknown vertex {vertex}"),
            TdViolation::VertexUncovered { vertex } => write!(f, "vertex {vertex} is in no bag"),
            TdViolation::EdgeUncovered { edge, u, v } => write!(f, "edge {edge} = {{{u}, {v}}} is in no bag"),
            TdViolation::Disconnected { vertex } => write!(f, "bags holding vertex {vertex} are not connected"),
        }
    }
}

impl TreeDecomposition {
    /// A single bag holding every vertex.
    pub fn trivial(g: &MultiGraph) -> Self {
        TreeDecomposition {
            tree: MultiGraph::with_vertices(1),
            bags: BTreeMap::from([(0, g.vertex_set())]),
        }
    }

    pub fn from_bags(bags: Vec<BTreeSet<VertexId>>, tree_edges: &[(usize, usize)]) -> Result<Self> {
        let tree = MultiGraph::from_edges(bags.len(), tree_edges)?;
        Ok(TreeDecomposition {
            tree,
            bags: bags.into_iter().enumerate().collect(),
        })
    }

    /// Largest bag size minus one (0 for a decomposition without vertices).
    pub fn width(&self) -> usize {
        self.max_bag().saturating_sub(1)
    }

    pub fn max_bag(&self) -> usize {
        self.bags.values().map(|b| b.len()).max().unwrap_or(0)
    }

    /// Nodes whose bags contain `v`.
    pub fn nodes_with(&self, v: VertexId) -> BTreeSet<usize> {
        self.bags.iter().filter(|(_, b)| b.contains(&v)).map(|(&t, _)| t).collect()
    }

    /// Nodes whose bags meet `vs`.
    pub fn trace(&self, vs: &BTreeSet<VertexId>) -> BTreeSet<usize> {
        self.bags.iter().filter(|(_, b)| !b.is_disjoint(vs)).map(|(&t, _)| t).collect()
    }

    /// The decomposition of `g[keep]` obtained by intersecting every bag
    /// with `keep`.
    pub fn restrict(&self, keep: &BTreeSet<VertexId>) -> TreeDecomposition {
        TreeDecomposition {
            tree: self.tree.clone(),
            bags: self
                .bags
                .iter()
                .map(|(&t, b)| (t, b.intersection(keep).copied().collect()))
                .collect(),
        }
    }
}

pub fn validate_td(g: &MultiGraph, td: &TreeDecomposition) -> std::result::Result<(), TdViolation> {
    let t = &td.tree;
    if t.vertex_count() == 0 || !t.is_connected() || !t.is_forest() {
        return Err(TdViolation::NotATree);
    }
    for node in t.vertices() {
        if !td.bags.contains_key(&node) {
            return Err(TdViolation::MissingBag { node });
        }
    }
    for (&node, bag) in &td.bags {
        if !t.has_vertex(node) {
            return Err(TdViolation::NotATree);
        }
        if let Some(&v) = bag.iter().find(|v| !g.has_vertex(**v)) {
            return Err(TdViolation::UnknownVertex { node, vertex: v });
        }
    }
    let mut holders: BTreeMap<VertexId, BTreeSet<usize>> = BTreeMap::new();
    for (&node, bag) in &td.bags {
        for &v in bag {
            holders.entry(v).or_default().insert(node);
        }
    }
    for v in g.vertices() {
        if !holders.contains_key(&v) {
            return Err(TdViolation::VertexUncovered { vertex: v });
        }
    }
    for (e, u, v) in g.edges() {
        if holders[&u].is_disjoint(&holders[&v]) {
            return Err(TdViolation::EdgeUncovered { edge: e, u, v });
        }
    }
    for (&v, nodes) in &holders {
        if !t.is_connected_set(nodes) {
            return Err(TdViolation::Disconnected { vertex: v });
        }
    }
    Ok(())
}

pub fn width(td: &TreeDecomposition) -> usize {
    td.width()
}

/// Simple adjacency (parallel edges merged).
fn simple_adjacency(g: &MultiGraph) -> BTreeMap<VertexId, BTreeSet<VertexId>> {
    g.vertices().map(|v| (v, g.neighbors(v))).collect()
}

/// The decomposition induced by eliminating vertices in `order`.
pub fn td_from_ordering(g: &MultiGraph, order: &[VertexId]) -> Result<TreeDecomposition> {
    let mut sorted = order.to_vec();
    sorted.sort_unstable();
    if !sorted.iter().copied().eq(g.vertices()) {
        return Err(EpError::InvalidParameter("elimination order must list every vertex once".into()));
    }
    if order.is_empty() {
        return Ok(TreeDecomposition::trivial(g));
    }
    let pos: BTreeMap<VertexId, usize> = order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut adj = simple_adjacency(g);
    let mut bags = Vec::new();
    let mut parent: Vec<Option<usize>> = Vec::new();
    for &v in order {
        let later: BTreeSet<VertexId> = adj[&v].iter().copied().filter(|w| pos[w] > pos[&v]).collect();
        for &a in &later {
            for &b in &later {
                if a != b {
                    adj.get_mut(&a).unwrap().insert(b);
                }
            }
        }
        parent.push(later.iter().map(|w| pos[w]).min());
        let mut bag = later;
        bag.insert(v);
        bags.push(bag);
    }
    let mut edges = Vec::new();
    let mut last_root: Option<usize> = None;
    for (i, p) in parent.iter().enumerate() {
        match p {
            Some(p) => edges.push((i, *p)),
            None => {
                if let Some(r) = last_root {
                    edges.push((r, i));
                }
                last_root = Some(i);
            }
        }
    }
    Ok(compress(TreeDecomposition::from_bags(bags, &edges)?))
}

/// Merges every node whose bag is contained in a neighbour's bag.
fn compress(td: TreeDecomposition) -> TreeDecomposition {
    let mut adj: BTreeMap<usize, BTreeSet<usize>> = td.tree.vertices().map(|t| (t, td.tree.neighbors(t))).collect();
    let mut bags = td.bags;
    loop {
        let mut merge = None;
        'search: for (&u, ns) in &adj {
            for &v in ns {
                if bags[&u].is_subset(&bags[&v]) {
                    merge = Some((u, v));
                    break 'search;
                }
            }
        }
        let Some((u, v)) = merge else { break };
        let ns = adj.remove(&u).unwrap();
        bags.remove(&u);
        for w in ns {
            let set = adj.get_mut(&w).unwrap();
            set.remove(&u);
            if w != v {
                set.insert(v);
                adj.get_mut(&v).unwrap().insert(w);
            }
        }
    }
    // relabel nodes densely
    let ids: BTreeMap<usize, usize> = adj.keys().enumerate().map(|(i, &t)| (t, i)).collect();
    let mut edges = Vec::new();
    for (&u, ns) in &adj {
        for &w in ns {
            if u < w {
                edges.push((ids[&u], ids[&w]));
            }
        }
    }
    let bags: Vec<BTreeSet<VertexId>> = adj.keys().map(|t| bags[t].clone()).collect();
    TreeDecomposition::from_bags(bags, &edges).expect("compressed decomposition is a tree")
}

/// Greedy min-fill elimination order (ties to the smallest vertex).
pub fn min_fill_order(g: &MultiGraph) -> Vec<VertexId> {
    let mut adj = simple_adjacency(g);
    let mut order = Vec::new();
    while !adj.is_empty() {
        let v = *adj
            .iter()
            .min_by_key(|(&v, ns)| {
                let ns: Vec<&VertexId> = ns.iter().collect();
                let mut fill = 0;
                for i in 0..ns.len() {
                    for j in i + 1..ns.len() {
                        if !adj[ns[i]].contains(ns[j]) {
                            fill += 1;
                        }
                    }
                }
                (fill, ns.len(), v)
            })
            .unwrap()
            .0;
        let ns = adj.remove(&v).unwrap();
        for &a in &ns {
            let set = adj.get_mut(&a).unwrap();
            set.remove(&v);
            for &b in &ns {
                if a != b {
                    set.insert(b);
                }
            }
        }
        order.push(v);
    }
    order
}

pub fn min_fill_td(g: &MultiGraph) -> TreeDecomposition {
    td_from_ordering(g, &min_fill_order(g)).expect("min-fill order is a permutation")
}

/// Exact treewidth with an optimal decomposition, by dynamic programming
/// over vertex subsets. Only for graphs with at most `EXACT_TW_LIMIT`
/// vertices.
pub fn exact_treewidth(g: &MultiGraph) -> Result<(usize, TreeDecomposition)> {
    let vs: Vec<VertexId> = g.vertices().collect();
    let n = vs.len();
    if n > EXACT_TW_LIMIT {
        return Err(EpError::BudgetExceeded {
            what: "exact treewidth vertices",
            limit: EXACT_TW_LIMIT as u64,
        });
    }
    if n == 0 {
        return Ok((0, TreeDecomposition::trivial(g)));
    }
    let idx: BTreeMap<VertexId, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let adj: Vec<u32> = vs
        .iter()
        .map(|&v| g.neighbors(v).iter().fold(0u32, |m, w| m | 1 << idx[w]))
        .collect();
    // q(s, v): vertices outside s ∪ {v} reachable from v through s
    let q = |s: u32, v: usize| -> u32 {
        let mut seen = 1u32 << v;
        let mut frontier = 1u32 << v;
        let mut out = 0u32;
        while frontier != 0 {
            let mut next = 0u32;
            let mut f = frontier;
            while f != 0 {
                let x = f.trailing_zeros() as usize;
                f &= f - 1;
                let nb = adj[x] & !seen;
                out |= nb & !s;
                next |= nb & s;
                seen |= nb;
            }
            frontier = next;
        }
        out
    };
    let full = (1u32 << n) - 1;
    let mut tw = vec![u32::MAX; 1 << n];
    let mut choice = vec![0u8; 1 << n];
    tw[0] = 0;
    for s in 1..=full {
        let mut best = u32::MAX;
        let mut bv = 0;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let prev = s & !(1 << v);
            let val = tw[prev as usize].max(q(prev, v).count_ones());
            if val < best {
                best = val;
                bv = v;
            }
        }
        tw[s as usize] = best;
        choice[s as usize] = bv as u8;
    }
    let mut order = Vec::new();
    let mut s = full;
    while s != 0 {
        let v = choice[s as usize] as usize;
        order.push(vs[v]);
        s &= !(1 << v);
    }
    order.reverse();
    let td = td_from_ordering(g, &order)?;
    let width = tw[full as usize] as usize;
    debug_assert_eq!(td.width(), width);
    Ok((width, td))
}

/// Exact decomposition for small graphs, min-fill otherwise.
pub fn best_effort_td(g: &MultiGraph) -> TreeDecomposition {
    match exact_treewidth(g) {
        Ok((_, td)) => td,
        Err(_) => min_fill_td(g),
    }
}

use std::collections::{BTreeMap, BTreeSet};

use super::{validate_td, TreeDecomposition};
use crate::error::{EpError, Result};
use crate::graph::{MultiGraph, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NiceKind {
    Base,
    Introduce(VertexId),
    Forget(VertexId),
    Join,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceNode {
    pub kind: NiceKind,
    pub bag: BTreeSet<VertexId>,
    pub children: Vec<usize>,
}

/// Rooted nice decomposition. Children always precede their parent in
/// `nodes`, so index order is a post-order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NiceTreeDecomposition {
    pub nodes: Vec<NiceNode>,
    pub root: usize,
}

impl NiceTreeDecomposition {
    pub fn width(&self) -> usize {
        self.nodes.iter().map(|n| n.bag.len()).max().unwrap_or(0).saturating_sub(1)
    }

    /// Vertices in the bags of each node's subtree.
    pub fn below(&self) -> Vec<BTreeSet<VertexId>> {
        let mut out: Vec<BTreeSet<VertexId>> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let mut set = node.bag.clone();
            for &c in &node.children {
                set.extend(out[c].iter().copied());
            }
            out.push(set);
        }
        out
    }

    /// Checks the node-type rules; returns the first broken one.
    pub fn audit(&self) -> std::result::Result<(), String> {
        let root = self.nodes.get(self.root).ok_or("root out of range")?;
        if !root.bag.is_empty() {
            return Err("root bag is not empty".into());
        }
        let mut parents = vec![0usize; self.nodes.len()];
        for (i, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                if c >= i {
                    return Err(format!("node {i} has child {c} out of order"));
                }
                parents[c] += 1;
            }
            let child_bag = |j: usize| &self.nodes[node.children[j]].bag;
            let ok = match node.kind {
                NiceKind::Base => node.children.is_empty() && node.bag.is_empty(),
                NiceKind::Introduce(v) => {
                    node.children.len() == 1 && !child_bag(0).contains(&v) && {
                        let mut b = child_bag(0).clone();
                        b.insert(v);
                        b == node.bag
                    }
                }
                NiceKind::Forget(v) => {
                    node.children.len() == 1 && child_bag(0).contains(&v) && {
                        let mut b = child_bag(0).clone();
                        b.remove(&v);
                        b == node.bag
                    }
                }
                NiceKind::Join => node.children.len() == 2 && *child_bag(0) == node.bag && *child_bag(1) == node.bag,
            };
            if !ok {
                return Err(format!("node {i} breaks the {:?} rule", node.kind));
            }
        }
        for (i, &p) in parents.iter().enumerate() {
            if (i == self.root && p != 0) || (i != self.root && p != 1) {
                return Err(format!("node {i} has {p} parents"));
            }
        }
        Ok(())
    }

    /// The underlying unrooted decomposition.
    pub fn to_td(&self) -> TreeDecomposition {
        let mut edges = Vec::new();
        for (i, node) in self.nodes.iter().enumerate() {
            for &c in &node.children {
                edges.push((c, i));
            }
        }
        TreeDecomposition::from_bags(self.nodes.iter().map(|n| n.bag.clone()).collect(), &edges)
            .expect("nice nodes form a tree")
    }

    fn push(&mut self, kind: NiceKind, bag: BTreeSet<VertexId>, children: Vec<usize>) -> usize {
        self.nodes.push(NiceNode { kind, bag, children });
        self.nodes.len() - 1
    }

    /// Forgets then introduces vertices to move from node `at` to `target`.
    fn morph(&mut self, mut at: usize, target: &BTreeSet<VertexId>) -> usize {
        let from = self.nodes[at].bag.clone();
        let mut bag = from.clone();
        for &v in from.difference(target) {
            bag.remove(&v);
            at = self.push(NiceKind::Forget(v), bag.clone(), vec![at]);
        }
        for &v in target.difference(&from) {
            bag.insert(v);
            at = self.push(NiceKind::Introduce(v), bag.clone(), vec![at]);
        }
        at
    }
}

/// Nice form of a valid decomposition, rooted at its smallest node, with
/// the same width.
pub fn to_nice(g: &MultiGraph, td: &TreeDecomposition) -> Result<NiceTreeDecomposition> {
    validate_td(g, td).map_err(|v| EpError::InvalidDecomposition(v.to_string()))?;
    let root = td.tree.vertices().next().expect("validated tree is non-empty");
    // children lists by DFS from the root, then build bottom-up
    let mut order = vec![root];
    let mut parent: BTreeMap<usize, usize> = BTreeMap::new();
    let mut i = 0;
    while i < order.len() {
        let t = order[i];
        for c in td.tree.neighbors(t) {
            if parent.get(&t) != Some(&c) {
                parent.insert(c, t);
                order.push(c);
            }
        }
        i += 1;
    }
    let mut out = NiceTreeDecomposition {
        nodes: Vec::new(),
        root: 0,
    };
    let mut built: BTreeMap<usize, usize> = BTreeMap::new();
    for &t in order.iter().rev() {
        let bag = &td.bags[&t];
        let mut tops: Vec<usize> = td
            .tree
            .neighbors(t)
            .into_iter()
            .filter(|c| parent.get(c) == Some(&t))
            .map(|c| out.morph(built[&c], bag))
            .collect();
        if tops.is_empty() {
            let base = out.push(NiceKind::Base, BTreeSet::new(), vec![]);
            tops.push(out.morph(base, bag));
        }
        let mut acc = tops[0];
        for &next in &tops[1..] {
            acc = out.push(NiceKind::Join, bag.clone(), vec![acc, next]);
        }
        built.insert(t, acc);
    }
    out.root = out.morph(built[&root], &BTreeSet::new());
    Ok(out)
}

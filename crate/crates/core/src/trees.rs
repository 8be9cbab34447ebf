//! Subtree families on trees: the Helly min-max greedy and disjoint
//! selection across several families.

use std::collections::{BTreeSet, VecDeque};

use crate::certificates::{CoverCertificate, PackingCertificate, PatternDetector, PatternWitness};
use crate::error::{EpError, Result};
use crate::graph::{Mode, MultiGraph, VertexId};

/// Default node cap for `rs_selection`.
pub const DEFAULT_SELECTION_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubtreeFamily {
    pub tree: MultiGraph,
    pub members: Vec<BTreeSet<VertexId>>,
}

impl SubtreeFamily {
    pub fn new(tree: MultiGraph, members: Vec<BTreeSet<VertexId>>) -> Result<Self> {
        check_tree(&tree)?;
        for (i, m) in members.iter().enumerate() {
            check_member(&tree, m).map_err(|why| EpError::InvalidFamily(format!("member {i}: {why}")))?;
        }
        Ok(SubtreeFamily { tree, members })
    }

    pub fn witness(&self, i: usize) -> PatternWitness {
        subtree_witness(&self.tree, &self.members[i])
    }
}

pub(crate) fn check_tree(tree: &MultiGraph) -> Result<()> {
    if tree.vertex_count() > 0 && !(tree.is_forest() && tree.is_connected()) {
        return Err(EpError::InvalidFamily("host is not a tree".into()));
    }
    Ok(())
}

fn check_member(tree: &MultiGraph, m: &BTreeSet<VertexId>) -> std::result::Result<(), String> {
    if m.is_empty() {
        return Err("empty".into());
    }
    if let Some(v) = m.iter().find(|v| !tree.has_vertex(**v)) {
        return Err(format!("vertex {v} not in the tree"));
    }
    if !tree.is_connected_set(m) {
        return Err("not connected".into());
    }
    Ok(())
}

fn subtree_witness(tree: &MultiGraph, m: &BTreeSet<VertexId>) -> PatternWitness {
    let edges = tree
        .edges()
        .filter(|(_, a, b)| m.contains(a) && m.contains(b))
        .map(|(e, _, _)| e)
        .collect();
    PatternWitness::new(m.clone(), edges)
}

/// Depth of every vertex with the tree rooted at its smallest vertex.
fn depths(tree: &MultiGraph) -> std::collections::BTreeMap<VertexId, usize> {
    let mut depth = std::collections::BTreeMap::new();
    let Some(root) = tree.vertices().next() else {
        return depth;
    };
    depth.insert(root, 0);
    let mut queue = VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for w in tree.neighbors(u) {
            if !depth.contains_key(&w) {
                depth.insert(w, depth[&u] + 1);
                queue.push_back(w);
            }
        }
    }
    depth
}

/// Maximum packing and minimum vertex cover of a subtree family, of equal
/// size. Repeatedly takes the member whose top vertex is deepest, puts the
/// top vertex in the cover and drops every member through it.
pub fn gallai(fam: &SubtreeFamily) -> Result<(PackingCertificate, CoverCertificate)> {
    for (i, m) in fam.members.iter().enumerate() {
        check_member(&fam.tree, m).map_err(|why| EpError::InvalidFamily(format!("member {i}: {why}")))?;
    }
    let depth = depths(&fam.tree);
    let tops: Vec<VertexId> = fam
        .members
        .iter()
        .map(|m| *m.iter().min_by_key(|&&v| (depth[&v], v)).unwrap())
        .collect();
    let mut alive: Vec<usize> = (0..fam.members.len()).collect();
    let mut packing = Vec::new();
    let mut cover = BTreeSet::new();
    while !alive.is_empty() {
        let &i = alive
            .iter()
            .min_by_key(|&&i| (std::cmp::Reverse(depth[&tops[i]]), tops[i], i))
            .unwrap();
        let x = tops[i];
        cover.insert(x);
        packing.push(fam.witness(i));
        alive.retain(|&j| !fam.members[j].contains(&x));
    }
    Ok((
        PackingCertificate {
            mode: Mode::Vertex,
            members: packing,
        },
        CoverCertificate {
            mode: Mode::Vertex,
            elements: cover,
        },
    ))
}

/// Finds a member of the family still present in the host.
#[derive(Debug, Clone)]
pub struct SubtreeMembershipDetector {
    pub members: Vec<BTreeSet<VertexId>>,
}

impl PatternDetector for SubtreeMembershipDetector {
    fn name(&self) -> String {
        "subtree-family".into()
    }

    fn find(&self, g: &MultiGraph) -> Result<Option<PatternWitness>> {
        Ok(self
            .members
            .iter()
            .find(|m| m.iter().all(|v| g.has_vertex(*v)) && g.is_connected_set(m))
            .map(|m| subtree_witness(g, m)))
    }

    fn accepts(&self, g: &MultiGraph, w: &PatternWitness) -> Result<bool> {
        let sub = w.as_graph(g)?;
        self.find(&sub).map(|f| f.is_some())
    }

    fn connected_patterns(&self) -> bool {
        true
    }

    fn delta_tilde_bound(&self) -> Option<usize> {
        None
    }
}

/// Whether every family has `k * q` pairwise disjoint members.
pub fn rs_hypothesis(tree: &MultiGraph, families: &[Vec<BTreeSet<VertexId>>], k: usize) -> Result<bool> {
    let q = families.len();
    for f in families {
        let fam = SubtreeFamily::new(tree.clone(), f.clone())?;
        if gallai(&fam)?.0.len() < k * q {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `k` members from each family, all pairwise vertex-disjoint, as member
/// indices per family.
pub fn rs_selection(
    tree: &MultiGraph,
    families: &[Vec<BTreeSet<VertexId>>],
    k: usize,
    cap: u64,
) -> Result<Option<Vec<Vec<usize>>>> {
    if families.is_empty() || k == 0 {
        return Err(EpError::InvalidParameter("rs_selection needs q >= 1 and k >= 1".into()));
    }
    check_tree(tree)?;
    for (fi, f) in families.iter().enumerate() {
        for (i, m) in f.iter().enumerate() {
            check_member(tree, m).map_err(|why| EpError::InvalidFamily(format!("family {fi} member {i}: {why}")))?;
        }
    }
    // candidates per family, smallest first
    let order: Vec<Vec<usize>> = families
        .iter()
        .map(|f| {
            let mut idx: Vec<usize> = (0..f.len()).collect();
            idx.sort_by_key(|&i| (f[i].len(), i));
            idx
        })
        .collect();
    let q = families.len();
    let mut chosen: Vec<Vec<usize>> = vec![Vec::new(); q];
    let mut used = BTreeSet::new();
    let mut explored = 0u64;

    #[allow(clippy::too_many_arguments)]
    fn rec(
        families: &[Vec<BTreeSet<VertexId>>],
        order: &[Vec<usize>],
        k: usize,
        slot: usize,
        chosen: &mut Vec<Vec<usize>>,
        used: &mut BTreeSet<VertexId>,
        explored: &mut u64,
        cap: u64,
    ) -> Result<bool> {
        *explored += 1;
        if *explored > cap {
            return Err(EpError::BudgetExceeded {
                what: "subtree selection",
                limit: cap,
            });
        }
        let q = families.len();
        if slot == k * q {
            return Ok(true);
        }
        // fill the family with the fewest usable candidates next
        let fi = (0..q)
            .filter(|&f| chosen[f].len() < k)
            .min_by_key(|&f| {
                families[f]
                    .iter()
                    .filter(|m| m.is_disjoint(used))
                    .count()
            })
            .unwrap();
        let after = chosen[fi].last().map(|&i| order[fi].iter().position(|&x| x == i).unwrap() + 1).unwrap_or(0);
        for pos in after..order[fi].len() {
            let i = order[fi][pos];
            let m = &families[fi][i];
            if !m.is_disjoint(used) {
                continue;
            }
            used.extend(m.iter().copied());
            chosen[fi].push(i);
            if rec(families, order, k, slot + 1, chosen, used, explored, cap)? {
                return Ok(true);
            }
            chosen[fi].pop();
            for v in m {
                used.remove(v);
            }
        }
        Ok(false)
    }

    let found = rec(families, &order, k, 0, &mut chosen, &mut used, &mut explored, cap)?;
    Ok(found.then_some(chosen))
}

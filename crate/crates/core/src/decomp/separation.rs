use std::collections::BTreeSet;

use super::nice::{NiceKind, NiceTreeDecomposition};
use super::PackOracle;
use crate::error::{EpError, Result};
use crate::graph::{MultiGraph, VertexId};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Separation {
    pub a: BTreeSet<VertexId>,
    pub b: BTreeSet<VertexId>,
}

impl Separation {
    pub fn order(&self) -> usize {
        self.a.intersection(&self.b).count()
    }

    pub fn a_only(&self) -> BTreeSet<VertexId> {
        self.a.difference(&self.b).copied().collect()
    }

    pub fn b_only(&self) -> BTreeSet<VertexId> {
        self.b.difference(&self.a).copied().collect()
    }

    pub fn separator(&self) -> BTreeSet<VertexId> {
        self.a.intersection(&self.b).copied().collect()
    }

    /// A ∪ B = V(g) and no edge joins A \ B to B \ A.
    pub fn is_separation_of(&self, g: &MultiGraph) -> bool {
        let union: BTreeSet<VertexId> = self.a.union(&self.b).copied().collect();
        if union != g.vertex_set() {
            return false;
        }
        let (ao, bo) = (self.a_only(), self.b_only());
        g.edges()
            .all(|(_, x, y)| !(ao.contains(&x) && bo.contains(&y) || ao.contains(&y) && bo.contains(&x)))
    }
}

/// Separation of order at most width + 1 with both sides packing at most
/// ⌊2k/3⌋ patterns, where k is the packing number of `g`.
///
/// Descends from the root to the deepest node t with pack(G_t^−) > 2k/3
/// and splits at t's forget child or at the heavier join child.
pub fn balanced_separation(g: &MultiGraph, ntd: &NiceTreeDecomposition, pack: &PackOracle) -> Result<Separation> {
    let k = pack(g)?.len();
    let all = g.vertex_set();
    if k == 0 {
        return Ok(Separation {
            a: all,
            b: BTreeSet::new(),
        });
    }
    let below = ntd.below();
    let minus = |t: usize| -> BTreeSet<VertexId> { below[t].difference(&ntd.nodes[t].bag).copied().collect() };
    let pack_minus = |t: usize| -> Result<usize> { Ok(pack(&g.induced(&minus(t)))?.len()) };
    let heavy = |p: usize| 3 * p > 2 * k;

    let mut t = ntd.root;
    if !heavy(pack_minus(t)?) {
        return Err(EpError::OracleFailure("root subgraph packs fewer patterns than the host".into()));
    }
    'descend: loop {
        for &c in &ntd.nodes[t].children {
            if heavy(pack_minus(c)?) {
                t = c;
                continue 'descend;
            }
        }
        break;
    }
    let node = &ntd.nodes[t];
    let u = match node.kind {
        NiceKind::Forget(_) => node.children[0],
        NiceKind::Join => {
            let mut pick = None;
            for &c in &node.children {
                if 3 * pack_minus(c)? >= k {
                    pick = Some(c);
                    break;
                }
            }
            pick.ok_or_else(|| EpError::OracleFailure("no join child packs k/3 patterns".into()))?
        }
        kind => {
            return Err(EpError::OracleFailure(format!(
                "minimal heavy node is {kind:?}; pack oracle is not monotone"
            )))
        }
    };
    let a = below[u].clone();
    let b: BTreeSet<VertexId> = all.difference(&minus(u)).copied().collect();
    let sep = Separation { a, b };
    for side in [sep.a_only(), sep.b_only()] {
        if 3 * pack(&g.induced(&side))?.len() > 2 * k {
            return Err(EpError::OracleFailure("separation side packs more than 2k/3 patterns".into()));
        }
    }
    debug_assert!(sep.is_separation_of(g));
    Ok(sep)
}

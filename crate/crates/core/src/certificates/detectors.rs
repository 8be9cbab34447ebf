use std::collections::BTreeSet;

use super::{PatternDetector, PatternWitness};
use crate::error::{EpError, Result};
use crate::graph::{EdgeId, MultiGraph, VertexId};
use crate::iso;

/// Default number of connected sets the θ_t search may visit.
pub const DEFAULT_THETA_BUDGET: u64 = 2_000_000;

/// Detects cycles, i.e. θ_2 minors. The witness is a shortest cycle.
#[derive(Debug, Clone, Copy, Default)]
pub struct CycleDetector;

impl PatternDetector for CycleDetector {
    fn name(&self) -> String {
        "cycles".into()
    }

    fn find(&self, g: &MultiGraph) -> Result<Option<PatternWitness>> {
        Ok(g.shortest_cycle().map(|c| PatternWitness::from_cycle(&c)))
    }

    fn minimal(&self, g: &MultiGraph) -> Result<Option<PatternWitness>> {
        self.find(g)
    }

    fn enumerate(&self, g: &MultiGraph, cap: usize) -> Result<Vec<PatternWitness>> {
        Ok(g.cycles(cap, false)?.iter().map(PatternWitness::from_cycle).collect())
    }

    fn connected_patterns(&self) -> bool {
        true
    }

    fn delta_tilde_bound(&self) -> Option<usize> {
        Some(2)
    }
}

/// Detects θ_t minors: two disjoint connected vertex sets joined by at
/// least `t` edges.
#[derive(Debug, Clone, Copy)]
pub struct ThetaDetector {
    pub t: usize,
    pub budget: u64,
}

impl ThetaDetector {
    pub fn new(t: usize) -> Result<Self> {
        if t < 2 {
            return Err(EpError::InvalidParameter(format!("theta_t needs t >= 2, got {t}")));
        }
        Ok(ThetaDetector {
            t,
            budget: DEFAULT_THETA_BUDGET,
        })
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    fn witness(g: &MultiGraph, a: &BTreeSet<VertexId>, b: &BTreeSet<VertexId>, t: usize) -> PatternWitness {
        let mut edges = BTreeSet::new();
        for side in [a, b] {
            edges.extend(spanning_tree_edges(g, side));
        }
        let mut cross = Vec::new();
        for &v in a {
            for e in g.incident(v) {
                if let Some(w) = g.opposite(e, v) {
                    if b.contains(&w) {
                        cross.push(e);
                    }
                }
            }
        }
        cross.sort_unstable();
        edges.extend(cross.into_iter().take(t));
        PatternWitness::new(a.union(b).copied().collect(), edges)
    }
}

/// Edges of a BFS spanning tree of `g[side]` (assumed connected).
fn spanning_tree_edges(g: &MultiGraph, side: &BTreeSet<VertexId>) -> Vec<EdgeId> {
    let mut out = Vec::new();
    let Some(&root) = side.iter().next() else {
        return out;
    };
    let mut seen = BTreeSet::from([root]);
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(u) = queue.pop_front() {
        for e in g.incident(u) {
            let w = g.opposite(e, u).unwrap();
            if side.contains(&w) && seen.insert(w) {
                out.push(e);
                queue.push_back(w);
            }
        }
    }
    out
}

/// Calls `visit` once for every nonempty connected vertex set of `g`
/// (ESU enumeration). Stops early when `visit` returns `true`.
pub(crate) fn for_each_connected_set(
    g: &MultiGraph,
    budget: u64,
    visit: &mut dyn FnMut(&BTreeSet<VertexId>) -> bool,
) -> Result<bool> {
    fn extend(
        g: &MultiGraph,
        root: VertexId,
        sub: &mut BTreeSet<VertexId>,
        border: &BTreeSet<VertexId>,
        mut ext: Vec<VertexId>,
        count: &mut u64,
        budget: u64,
        visit: &mut dyn FnMut(&BTreeSet<VertexId>) -> bool,
    ) -> Result<bool> {
        *count += 1;
        if *count > budget {
            return Err(EpError::BudgetExceeded {
                what: "connected set enumeration",
                limit: budget,
            });
        }
        if visit(sub) {
            return Ok(true);
        }
        while let Some(w) = ext.pop() {
            let mut next_ext = ext.clone();
            let mut next_border = border.clone();
            for u in g.neighbors(w) {
                if u > root && !sub.contains(&u) && !border.contains(&u) {
                    next_ext.push(u);
                }
                next_border.insert(u);
            }
            sub.insert(w);
            let stop = extend(g, root, sub, &next_border, next_ext, count, budget, visit)?;
            sub.remove(&w);
            if stop {
                return Ok(true);
            }
        }
        Ok(false)
    }

    let mut count = 0;
    for root in g.vertices() {
        let mut sub = BTreeSet::from([root]);
        let mut border: BTreeSet<VertexId> = g.neighbors(root).into_iter().collect();
        border.insert(root);
        let ext: Vec<VertexId> = g.neighbors(root).into_iter().filter(|&u| u > root).collect();
        if extend(g, root, &mut sub, &border, ext, &mut count, budget, visit)? {
            return Ok(true);
        }
    }
    Ok(false)
}

impl PatternDetector for ThetaDetector {
    fn name(&self) -> String {
        format!("theta{}", self.t)
    }

    fn find(&self, g: &MultiGraph) -> Result<Option<PatternWitness>> {
        if self.t == 2 {
            return CycleDetector.find(g);
        }
        // a θ_t minor needs t edges between the two sides and a cycle overall
        if g.edge_count() < self.t || g.is_forest() {
            return Ok(None);
        }
        for u in g.vertices() {
            for w in g.neighbors(u) {
                if w > u && g.multiplicity(u, w) >= self.t {
                    return Ok(Some(Self::witness(g, &BTreeSet::from([u]), &BTreeSet::from([w]), self.t)));
                }
            }
        }
        let t = self.t;
        let mut found = None;
        for_each_connected_set(g, self.budget, &mut |a| {
            let rest: BTreeSet<VertexId> = g.vertices().filter(|v| !a.contains(v)).collect();
            let residue = g.induced(&rest);
            for comp in residue.components() {
                let b: BTreeSet<VertexId> = comp.into_iter().collect();
                let cross = a
                    .iter()
                    .flat_map(|&v| g.neighbors(v).into_iter().filter(|w| b.contains(w)).map(move |w| g.multiplicity(v, w)))
                    .sum::<usize>();
                if cross >= t {
                    found = Some(Self::witness(g, a, &b, t));
                    return true;
                }
            }
            false
        })?;
        Ok(found)
    }

    fn connected_patterns(&self) -> bool {
        true
    }

    fn delta_tilde_bound(&self) -> Option<usize> {
        Some(self.t)
    }
}

/// Detects copies of a fixed graph `H` as a subgraph.
#[derive(Debug, Clone)]
pub struct FixedSubgraphDetector {
    pub label: String,
    pub pattern: MultiGraph,
}

impl FixedSubgraphDetector {
    pub fn new(label: impl Into<String>, pattern: MultiGraph) -> Self {
        FixedSubgraphDetector {
            label: label.into(),
            pattern,
        }
    }

    pub fn triangle() -> Self {
        Self::new("k3", crate::graph::named::complete(3))
    }
}

impl PatternDetector for FixedSubgraphDetector {
    fn name(&self) -> String {
        self.label.clone()
    }

    fn find(&self, g: &MultiGraph) -> Result<Option<PatternWitness>> {
        Ok(iso::find_copy(&self.pattern, g).map(|c| PatternWitness::new(c.vertices, c.edges)))
    }

    fn minimal(&self, g: &MultiGraph) -> Result<Option<PatternWitness>> {
        self.find(g)
    }

    fn enumerate(&self, g: &MultiGraph, cap: usize) -> Result<Vec<PatternWitness>> {
        Ok(iso::enumerate_copies(&self.pattern, g, true, cap)?
            .into_iter()
            .map(|c| PatternWitness::new(c.vertices, c.edges))
            .collect())
    }

    fn connected_patterns(&self) -> bool {
        self.pattern.is_connected()
    }

    fn delta_tilde_bound(&self) -> Option<usize> {
        Some(self.pattern.max_degree())
    }
}

/// Detects vertex-disjoint unions with one witness from each component
/// detector.
pub struct DisjointUnionDetector {
    pub parts: Vec<Box<dyn PatternDetector>>,
    pub cap: usize,
}

impl DisjointUnionDetector {
    pub fn new(parts: Vec<Box<dyn PatternDetector>>) -> Self {
        DisjointUnionDetector { parts, cap: 100_000 }
    }

    /// Vertex-disjoint choice of one witness per list, if one exists.
    pub fn choose(lists: &[Vec<PatternWitness>]) -> Option<Vec<PatternWitness>> {
        fn rec(
            lists: &[Vec<PatternWitness>],
            i: usize,
            used: &mut BTreeSet<VertexId>,
            out: &mut Vec<PatternWitness>,
        ) -> bool {
            if i == lists.len() {
                return true;
            }
            for w in &lists[i] {
                if w.vertices.is_disjoint(used) {
                    used.extend(w.vertices.iter().copied());
                    out.push(w.clone());
                    if rec(lists, i + 1, used, out) {
                        return true;
                    }
                    out.pop();
                    for v in &w.vertices {
                        used.remove(v);
                    }
                }
            }
            false
        }
        let mut out = Vec::new();
        rec(lists, 0, &mut BTreeSet::new(), &mut out).then_some(out)
    }
}

impl PatternDetector for DisjointUnionDetector {
    fn name(&self) -> String {
        let names: Vec<String> = self.parts.iter().map(|p| p.name()).collect();
        format!("union({})", names.join(","))
    }

    fn find(&self, g: &MultiGraph) -> Result<Option<PatternWitness>> {
        let mut lists = Vec::new();
        for p in &self.parts {
            let ws = p.enumerate(g, self.cap)?;
            if ws.is_empty() {
                return Ok(None);
            }
            lists.push(ws);
        }
        Ok(Self::choose(&lists).map(|ws| {
            ws.iter()
                .fold(PatternWitness::default(), |acc, w| acc.union(w))
        }))
    }

    fn connected_patterns(&self) -> bool {
        self.parts.len() <= 1 && self.parts.iter().all(|p| p.connected_patterns())
    }

    fn delta_tilde_bound(&self) -> Option<usize> {
        self.parts
            .iter()
            .map(|p| p.delta_tilde_bound())
            .try_fold(0, |m, d| d.map(|d| m.max(d)))
    }
}

/// Detector by command-line name: `cycles`, `theta<t>`, or a named pattern.
pub fn detector_by_name(name: &str) -> Result<Box<dyn PatternDetector>> {
    if name == "cycles" || name == "theta2" {
        return Ok(Box::new(CycleDetector));
    }
    if let Some(t) = name.strip_prefix("theta") {
        let t: usize = t
            .parse()
            .map_err(|_| EpError::InvalidParameter(format!("bad theta size in {name}")))?;
        return Ok(Box::new(ThetaDetector::new(t)?));
    }
    match iso::pattern_by_name(name) {
        Some(h) => Ok(Box::new(FixedSubgraphDetector::new(name, h))),
        None => Err(EpError::InvalidParameter(format!("unknown pattern {name}"))),
    }
}

/// Cycles, θ_3, θ_4, and triangles.
pub fn builtin_detectors() -> Vec<Box<dyn PatternDetector>> {
    vec![
        Box::new(CycleDetector),
        Box::new(ThetaDetector::new(3).unwrap()),
        Box::new(ThetaDetector::new(4).unwrap()),
        Box::new(FixedSubgraphDetector::triangle()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    #[test]
    fn theta3_on_k4() {
        let g = complete(4);
        let det = ThetaDetector::new(3).unwrap();
        let w = det.find(&g).unwrap().unwrap();
        assert_eq!(w.vertices.len(), 4);
        assert!(det.find(&cycle(6)).unwrap().is_none());
        assert!(det.find(&theta(3)).unwrap().is_some());
        assert!(ThetaDetector::new(4).unwrap().find(&g).unwrap().is_some());
        assert!(ThetaDetector::new(5).unwrap().find(&g).unwrap().is_none());
        assert!(CycleDetector.find(&path(4)).unwrap().is_none());
    }

    #[test]
    fn connected_sets_of_path_and_k4() {
        let mut n = 0;
        for_each_connected_set(&path(4), 100, &mut |_| {
            n += 1;
            false
        })
        .unwrap();
        assert_eq!(n, 10);
        let mut n = 0;
        for_each_connected_set(&complete(4), 100, &mut |_| {
            n += 1;
            false
        })
        .unwrap();
        assert_eq!(n, 15);
    }

    #[test]
    fn minimal_cycle_witness_of_theta_is_two_cycle() {
        let det = FixedSubgraphDetector::triangle();
        let w = det.minimal(&complete(5)).unwrap().unwrap();
        assert_eq!(w.edges.len(), 3);
        let union = DisjointUnionDetector::new(vec![Box::new(CycleDetector), Box::new(CycleDetector)]);
        assert!(union.find(&complete(5)).unwrap().is_none());
        assert!(union.find(&complete(6)).unwrap().is_some());
    }
}

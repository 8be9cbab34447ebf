//! Loopless undirected multigraphs with stable identifiers.
//!
//! Vertex and edge identifiers are dense integers handed out monotonically;
//! they are never reused, so certificates computed on a subgraph keep
//! referring to the same elements of the host.

mod cycle;
mod enumerate;
mod trace;

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{EpError, Result};

pub use cycle::Cycle;
pub use trace::{ReductionEvent, ReductionTrace};

pub type VertexId = usize;
pub type EdgeId = usize;

/// Selects which elements a packing must keep disjoint and a cover removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "v")]
    Vertex,
    #[serde(rename = "e")]
    Edge,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Vertex => "v",
            Mode::Edge => "e",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = EpError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "v" | "vertex" => Ok(Mode::Vertex),
            "e" | "edge" => Ok(Mode::Edge),
            other => Err(EpError::InvalidParameter(format!("unknown mode {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Element {
    Vertex(VertexId),
    Edge(EdgeId),
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MultiGraph {
    adj: BTreeMap<VertexId, BTreeSet<EdgeId>>,
    // endpoints stored with the smaller identifier first
    edges: BTreeMap<EdgeId, (VertexId, VertexId)>,
    next_vertex: VertexId,
    next_edge: EdgeId,
}

impl MultiGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph on vertices `0..n` without edges.
    pub fn with_vertices(n: usize) -> Self {
        let mut g = Self::new();
        for _ in 0..n {
            g.add_vertex();
        }
        g
    }

    /// Graph on vertices `0..n`; edge `i` of the slice gets identifier `i`.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut g = Self::with_vertices(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self) -> VertexId {
        let v = self.next_vertex;
        self.next_vertex += 1;
        self.adj.insert(v, BTreeSet::new());
        v
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId> {
        if u == v {
            return Err(EpError::Loop(u));
        }
        for x in [u, v] {
            if !self.adj.contains_key(&x) {
                return Err(EpError::UnknownVertex(x));
            }
        }
        let e = self.next_edge;
        self.next_edge += 1;
        self.edges.insert(e, (u.min(v), u.max(v)));
        self.adj.get_mut(&u).unwrap().insert(e);
        self.adj.get_mut(&v).unwrap().insert(e);
        Ok(e)
    }

    pub fn remove_vertex(&mut self, v: VertexId) -> Result<()> {
        let inc = self.adj.remove(&v).ok_or(EpError::UnknownVertex(v))?;
        for e in inc {
            let (a, b) = self.edges.remove(&e).unwrap();
            let other = if a == v { b } else { a };
            if let Some(s) = self.adj.get_mut(&other) {
                s.remove(&e);
            }
        }
        Ok(())
    }

    pub fn remove_edge(&mut self, e: EdgeId) -> Result<()> {
        let (a, b) = self.edges.remove(&e).ok_or(EpError::UnknownEdge(e))?;
        self.adj.get_mut(&a).unwrap().remove(&e);
        self.adj.get_mut(&b).unwrap().remove(&e);
        Ok(())
    }

    /// `|G|`
    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    /// `‖G‖`, counting multiplicities.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adj.keys().copied()
    }

    pub fn vertex_set(&self) -> BTreeSet<VertexId> {
        self.adj.keys().copied().collect()
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        self.edges.iter().map(|(&e, &(u, v))| (e, u, v))
    }

    pub fn edge_set(&self) -> BTreeSet<EdgeId> {
        self.edges.keys().copied().collect()
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, e: EdgeId) -> bool {
        self.edges.contains_key(&e)
    }

    pub fn endpoints(&self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        self.edges.get(&e).copied()
    }

    /// The endpoint of `e` other than `v`.
    pub fn opposite(&self, e: EdgeId, v: VertexId) -> Option<VertexId> {
        let (a, b) = self.endpoints(e)?;
        if a == v {
            Some(b)
        } else if b == v {
            Some(a)
        } else {
            None
        }
    }

    pub fn incident(&self, v: VertexId) -> impl Iterator<Item = EdgeId> + '_ {
        self.adj.get(&v).into_iter().flat_map(|s| s.iter().copied())
    }

    pub fn neighbors(&self, v: VertexId) -> BTreeSet<VertexId> {
        self.incident(v)
            .filter_map(|e| self.opposite(e, v))
            .collect()
    }

    pub fn edges_between(&self, u: VertexId, v: VertexId) -> Vec<EdgeId> {
        self.incident(u)
            .filter(|&e| self.opposite(e, u) == Some(v))
            .collect()
    }

    pub fn multiplicity(&self, u: VertexId, v: VertexId) -> usize {
        self.edges_between(u, v).len()
    }

    /// Degree counting parallel edges.
    pub fn degree(&self, v: VertexId) -> usize {
        self.adj.get(&v).map_or(0, |s| s.len())
    }

    pub fn degrees(&self) -> BTreeMap<VertexId, usize> {
        self.adj.iter().map(|(&v, s)| (v, s.len())).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.values().map(|s| s.len()).max().unwrap_or(0)
    }

    /// Next identifier that `add_vertex` would return.
    pub fn next_vertex_id(&self) -> VertexId {
        self.next_vertex
    }

    pub fn next_edge_id(&self) -> EdgeId {
        self.next_edge
    }

    /// `G \ X` for a homogeneous element set.
    pub fn delete(&self, xs: &[Element]) -> Result<MultiGraph> {
        let has_v = xs.iter().any(|x| matches!(x, Element::Vertex(_)));
        let has_e = xs.iter().any(|x| matches!(x, Element::Edge(_)));
        if has_v && has_e {
            return Err(EpError::MixedElementKinds);
        }
        for x in xs {
            match *x {
                Element::Vertex(v) if !self.has_vertex(v) => return Err(EpError::UnknownVertex(v)),
                Element::Edge(e) if !self.has_edge(e) => return Err(EpError::UnknownEdge(e)),
                _ => {}
            }
        }
        let mut g = self.clone();
        for x in xs {
            // duplicates in xs are harmless
            match *x {
                Element::Vertex(v) => {
                    let _ = g.remove_vertex(v);
                }
                Element::Edge(e) => {
                    let _ = g.remove_edge(e);
                }
            }
        }
        Ok(g)
    }

    /// Removes the listed vertices, silently skipping unknown ones.
    pub fn without_vertices<'a>(&self, vs: impl IntoIterator<Item = &'a VertexId>) -> MultiGraph {
        let mut g = self.clone();
        for &v in vs {
            let _ = g.remove_vertex(v);
        }
        g
    }

    /// Removes the listed edges, silently skipping unknown ones.
    pub fn without_edges<'a>(&self, es: impl IntoIterator<Item = &'a EdgeId>) -> MultiGraph {
        let mut g = self.clone();
        for &e in es {
            let _ = g.remove_edge(e);
        }
        g
    }

    /// Removes the elements of `mode` listed in `xs`.
    pub fn without(&self, mode: Mode, xs: &BTreeSet<usize>) -> MultiGraph {
        match mode {
            Mode::Vertex => self.without_vertices(xs),
            Mode::Edge => self.without_edges(xs),
        }
    }

    /// `G[X]`, keeping identifiers.
    pub fn induced(&self, xs: &BTreeSet<VertexId>) -> MultiGraph {
        let mut g = MultiGraph {
            adj: BTreeMap::new(),
            edges: BTreeMap::new(),
            next_vertex: self.next_vertex,
            next_edge: self.next_edge,
        };
        for &v in xs {
            if self.has_vertex(v) {
                g.adj.insert(v, BTreeSet::new());
            }
        }
        for (&e, &(u, v)) in &self.edges {
            if g.adj.contains_key(&u) && g.adj.contains_key(&v) {
                g.edges.insert(e, (u, v));
                g.adj.get_mut(&u).unwrap().insert(e);
                g.adj.get_mut(&v).unwrap().insert(e);
            }
        }
        g
    }

    /// Subgraph made of the given vertices and edges. Edges whose endpoints are
    /// not both listed are rejected.
    pub fn subgraph(&self, vs: &BTreeSet<VertexId>, es: &BTreeSet<EdgeId>) -> Result<MultiGraph> {
        let mut g = MultiGraph {
            adj: BTreeMap::new(),
            edges: BTreeMap::new(),
            next_vertex: self.next_vertex,
            next_edge: self.next_edge,
        };
        for &v in vs {
            if !self.has_vertex(v) {
                return Err(EpError::UnknownVertex(v));
            }
            g.adj.insert(v, BTreeSet::new());
        }
        for &e in es {
            let (u, v) = self.endpoints(e).ok_or(EpError::UnknownEdge(e))?;
            if !vs.contains(&u) {
                return Err(EpError::UnknownVertex(u));
            }
            if !vs.contains(&v) {
                return Err(EpError::UnknownVertex(v));
            }
            g.edges.insert(e, (u, v));
            g.adj.get_mut(&u).unwrap().insert(e);
            g.adj.get_mut(&v).unwrap().insert(e);
        }
        Ok(g)
    }

    /// Contracts `e = {x, y}` into a fresh vertex. Edges from `x` or `y` to
    /// third vertices keep their identifiers and are re-attached to the new
    /// vertex; every `x`-`y` edge disappears.
    pub fn contract(&self, e: EdgeId) -> Result<(MultiGraph, VertexId)> {
        let (x, y) = self.endpoints(e).ok_or(EpError::UnknownEdge(e))?;
        let mut g = self.clone();
        let merged = g.add_vertex();
        let mut moved = Vec::new();
        for end in [x, y] {
            for f in self.incident(end) {
                let other = self.opposite(f, end).unwrap();
                if other != x && other != y {
                    moved.push((f, other));
                }
            }
        }
        g.remove_vertex(x)?;
        g.remove_vertex(y)?;
        for (f, other) in moved {
            g.edges.insert(f, (merged.min(other), merged.max(other)));
            g.adj.get_mut(&merged).unwrap().insert(f);
            g.adj.get_mut(&other).unwrap().insert(f);
        }
        Ok((g, merged))
    }

    /// Lifts `e1 = {x, y}` and `e2 = {y, z}` into a new edge `{x, z}`.
    pub fn lift(&self, e1: EdgeId, e2: EdgeId) -> Result<(MultiGraph, EdgeId)> {
        let (a1, b1) = self.endpoints(e1).ok_or(EpError::UnknownEdge(e1))?;
        let (a2, b2) = self.endpoints(e2).ok_or(EpError::UnknownEdge(e2))?;
        if e1 == e2 {
            return Err(EpError::WouldCreateLoop(e1, e2));
        }
        let shared = [a1, b1]
            .into_iter()
            .find(|&s| s == a2 || s == b2)
            .ok_or(EpError::NoSharedEndpoint(e1, e2))?;
        let x = if a1 == shared { b1 } else { a1 };
        let z = if a2 == shared { b2 } else { a2 };
        if x == z {
            return Err(EpError::WouldCreateLoop(e1, e2));
        }
        let mut g = self.clone();
        g.remove_edge(e1)?;
        g.remove_edge(e2)?;
        let new = g.add_edge(x, z)?;
        Ok((g, new))
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<BTreeSet<VertexId>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for s in self.vertices() {
            if seen.contains(&s) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut queue = VecDeque::from([s]);
            seen.insert(s);
            while let Some(v) = queue.pop_front() {
                comp.insert(v);
                for e in self.incident(v) {
                    let w = self.opposite(e, v).unwrap();
                    if seen.insert(w) {
                        queue.push_back(w);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn component_count(&self) -> usize {
        self.components().len()
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() <= 1
    }

    /// A forest satisfies `‖G‖ = |G| − c(G)`.
    pub fn is_forest(&self) -> bool {
        self.edge_count() + self.component_count() == self.vertex_count()
    }

    /// Whether the vertices in `xs` induce a connected subgraph (false when empty).
    pub fn is_connected_set(&self, xs: &BTreeSet<VertexId>) -> bool {
        let Some(&s) = xs.iter().next() else {
            return false;
        };
        if !xs.iter().all(|v| self.has_vertex(*v)) {
            return false;
        }
        let mut seen = BTreeSet::from([s]);
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for e in self.incident(v) {
                let w = self.opposite(e, v).unwrap();
                if xs.contains(&w) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == xs.len()
    }

    /// Edges of a spanning forest, grown by BFS from the smallest vertex of
    /// every component, preferring smaller edge identifiers.
    pub fn spanning_forest(&self) -> BTreeSet<EdgeId> {
        let mut seen = BTreeSet::new();
        let mut forest = BTreeSet::new();
        for s in self.vertices() {
            if !seen.insert(s) {
                continue;
            }
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                for e in self.incident(v) {
                    let w = self.opposite(e, v).unwrap();
                    if seen.insert(w) {
                        forest.insert(e);
                        queue.push_back(w);
                    }
                }
            }
        }
        forest
    }

    /// Shortest path between `s` and `t` avoiding the edge `skip`, as an
    /// edge sequence; `max_len` bounds the number of edges.
    fn bfs_path(&self, s: VertexId, t: VertexId, skip: EdgeId, max_len: usize) -> Option<Vec<EdgeId>> {
        let mut pred: BTreeMap<VertexId, (VertexId, EdgeId)> = BTreeMap::new();
        let mut dist: BTreeMap<VertexId, usize> = BTreeMap::from([(s, 0)]);
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            let d = dist[&v];
            if d >= max_len {
                continue;
            }
            // explore by (neighbour, edge) so paths prefer small identifiers
            let mut next: Vec<(VertexId, EdgeId)> = self
                .incident(v)
                .filter(|&e| e != skip)
                .map(|e| (self.opposite(e, v).unwrap(), e))
                .collect();
            next.sort_unstable();
            for (w, e) in next {
                if dist.contains_key(&w) {
                    continue;
                }
                dist.insert(w, d + 1);
                pred.insert(w, (v, e));
                if w == t {
                    let mut path = Vec::new();
                    let mut cur = t;
                    while cur != s {
                        let (p, pe) = pred[&cur];
                        path.push(pe);
                        cur = p;
                    }
                    path.reverse();
                    return Some(path);
                }
                queue.push_back(w);
            }
        }
        None
    }

    /// A shortest cycle, or `None` on forests. Two parallel edges form a
    /// cycle of length 2. Among the candidates found (one per edge, via BFS
    /// in `G − e`) the canonical form with the smallest identifier sequence
    /// wins.
    pub fn shortest_cycle(&self) -> Option<Cycle> {
        if self.is_forest() {
            return None;
        }
        let mut best: Option<Cycle> = None;
        for (e, u, v) in self.edges() {
            let limit = best.as_ref().map_or(usize::MAX, |c| c.len() - 1);
            let Some(path) = self.bfs_path(u, v, e, limit) else {
                continue;
            };
            let mut vertices = vec![u];
            let mut cur = u;
            for &pe in &path {
                cur = self.opposite(pe, cur).unwrap();
                vertices.push(cur);
            }
            let mut edges = path;
            edges.push(e);
            let cand = Cycle::new(vertices, edges).canonical();
            let better = match &best {
                None => true,
                Some(b) => cand.sort_key() < b.sort_key(),
            };
            if better {
                best = Some(cand);
            }
        }
        best
    }

    /// Length of a shortest cycle.
    pub fn girth(&self) -> Option<usize> {
        self.shortest_cycle().map(|c| c.len())
    }

    /// Checks that a cycle is present in this graph.
    pub fn contains_cycle(&self, c: &Cycle) -> bool {
        let n = c.len();
        if n < 2 || c.edges.len() != n {
            return false;
        }
        let vs: BTreeSet<_> = c.vertices.iter().collect();
        let es: BTreeSet<_> = c.edges.iter().collect();
        if vs.len() != n || es.len() != n {
            return false;
        }
        (0..n).all(|i| {
            let a = c.vertices[i];
            let b = c.vertices[(i + 1) % n];
            self.endpoints(c.edges[i]) == Some((a.min(b), a.max(b)))
        })
    }

    /// Disjoint union; the vertices and edges of `other` are renumbered after
    /// ours. Returns the vertex map of `other`.
    pub fn absorb(&mut self, other: &MultiGraph) -> BTreeMap<VertexId, VertexId> {
        let map: BTreeMap<_, _> = other.vertices().map(|v| (v, self.add_vertex())).collect();
        for (_, u, v) in other.edges() {
            self.add_edge(map[&u], map[&v]).unwrap();
        }
        map
    }

    /// Copy with vertices renumbered `0..n` in ascending order and edges
    /// renumbered `0..m` in ascending `(u, v, id)` order.
    pub fn compacted(&self) -> (MultiGraph, BTreeMap<VertexId, VertexId>) {
        let map: BTreeMap<_, _> = self.vertices().enumerate().map(|(i, v)| (v, i)).collect();
        let mut list: Vec<(VertexId, VertexId, EdgeId)> =
            self.edges().map(|(e, u, v)| (map[&u], map[&v], e)).collect();
        list.sort_unstable();
        let pairs: Vec<_> = list.iter().map(|&(u, v, _)| (u, v)).collect();
        (MultiGraph::from_edges(map.len(), &pairs).unwrap(), map)
    }
}

/// Small named graphs used across tests, examples and the CLI.
pub mod named {
    use super::MultiGraph;

    pub fn path(n: usize) -> MultiGraph {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        MultiGraph::from_edges(n, &edges).unwrap()
    }

    pub fn cycle(n: usize) -> MultiGraph {
        assert!(n >= 2);
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        MultiGraph::from_edges(n, &edges).unwrap()
    }

    pub fn complete(n: usize) -> MultiGraph {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                edges.push((i, j));
            }
        }
        MultiGraph::from_edges(n, &edges).unwrap()
    }

    pub fn complete_bipartite(a: usize, b: usize) -> MultiGraph {
        let mut edges = Vec::new();
        for i in 0..a {
            for j in 0..b {
                edges.push((i, a + j));
            }
        }
        MultiGraph::from_edges(a + b, &edges).unwrap()
    }

    pub fn star(leaves: usize) -> MultiGraph {
        let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
        MultiGraph::from_edges(leaves + 1, &edges).unwrap()
    }

    /// θ_t: two vertices joined by `t` parallel edges.
    pub fn theta(t: usize) -> MultiGraph {
        MultiGraph::from_edges(2, &vec![(0, 1); t]).unwrap()
    }

    /// Outer 5-cycle `0..5`, spokes `i`-`i+5`, inner pentagram.
    pub fn petersen() -> MultiGraph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
        }
        MultiGraph::from_edges(10, &edges).unwrap()
    }

    /// `copies` disjoint copies of `g`.
    pub fn disjoint_copies(g: &MultiGraph, copies: usize) -> MultiGraph {
        let mut out = MultiGraph::new();
        for _ in 0..copies {
            out.absorb(g);
        }
        out
    }
}

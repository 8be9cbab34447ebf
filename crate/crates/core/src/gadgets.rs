//! Thickened copies of a pattern H: the grid gadget Γ_{d,k}, the graph
//! G_k built from one gadget per vertex of H, its subcubic and minor
//! variants, and the routing that finds a model of H avoiding any set of
//! fewer than k vertices.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{EpError, Result};
use crate::graph::{EdgeId, MultiGraph, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GadgetKind {
    Gamma,
    Thick,
    Subcubic,
    Minor,
}

/// Labels of one Γ_{d,k} copy, as vertices of the base graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaCopy {
    pub d: usize,
    /// `grid[row][col]`; row 0 is the apex side, the last row holds the ports.
    pub grid: Vec<Vec<VertexId>>,
    pub apices: Vec<VertexId>,
    /// Neighbours in H by rank (ascending id).
    pub neighbors: Vec<VertexId>,
}

impl GammaCopy {
    pub fn width(&self) -> usize {
        self.grid.first().map_or(0, |r| r.len())
    }

    /// Column of the `j`-th vertex of port `p`.
    pub fn port_column(&self, k: usize, p: usize, j: usize) -> usize {
        p * k + j
    }

    pub fn port_vertex(&self, k: usize, p: usize, j: usize) -> VertexId {
        self.grid[self.grid.len() - 1][self.port_column(k, p, j)]
    }

    fn column(&self, c: usize) -> impl Iterator<Item = VertexId> + '_ {
        self.grid.iter().map(move |r| r[c])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gadget {
    pub kind: GadgetKind,
    pub k: usize,
    pub pattern: Option<MultiGraph>,
    /// G_k (or Γ_{d,k}) before any subcubic replacement.
    pub base: MultiGraph,
    pub graph: MultiGraph,
    /// Copy per pattern vertex (a single copy for `Gamma`).
    pub copies: BTreeMap<VertexId, GammaCopy>,
    /// Inter-copy edges of the base graph per pattern edge, by index.
    pub bundles: BTreeMap<EdgeId, Vec<EdgeId>>,
    /// Vertices of `graph` standing for each base vertex.
    pub trees: BTreeMap<VertexId, BTreeSet<VertexId>>,
    /// Edge of `graph` for each base edge.
    pub edge_map: BTreeMap<EdgeId, EdgeId>,
}

impl Gadget {
    /// Checks the construction against its labels; returns the first
    /// mismatch.
    pub fn audit(&self) -> std::result::Result<(), String> {
        let k = self.k;
        let mut expected = 0;
        for (v, c) in &self.copies {
            let d = c.d;
            let (w, h) = (d * k, if d == 0 { 0 } else { d + k - 1 });
            expected += w * h + k;
            if c.grid.len() != h || c.grid.iter().any(|r| r.len() != w) || c.apices.len() != k {
                return Err(format!("copy {v} has the wrong shape"));
            }
            for (i, &a) in c.apices.iter().enumerate() {
                let seen: BTreeSet<VertexId> = self.base.neighbors(a);
                let want: BTreeSet<VertexId> = (i * d..(i + 1) * d).map(|col| c.grid[0][col]).collect();
                if seen != want {
                    return Err(format!("apex {i} of copy {v} sees the wrong first-row block"));
                }
            }
        }
        if self.base.vertex_count() != expected {
            return Err("vertex count does not match the copies".into());
        }
        if let Some(h) = &self.pattern {
            for (e, u, v) in h.edges() {
                let (cu, cv) = (&self.copies[&u], &self.copies[&v]);
                let pu = cu.neighbors.iter().position(|&x| x == v).ok_or("neighbour ranks are inconsistent")?;
                let pv = cv.neighbors.iter().position(|&x| x == u).ok_or("neighbour ranks are inconsistent")?;
                for (i, &b) in self.bundles[&e].iter().enumerate() {
                    let (x, y) = self.base.endpoints(b).ok_or("bundle edge missing")?;
                    if (x, y) != (cu.port_vertex(k, pu, i), cv.port_vertex(k, pv, i)) {
                        return Err(format!("bundle edge {i} of pattern edge {e} joins the wrong ports"));
                    }
                }
            }
        }
        if matches!(self.kind, GadgetKind::Subcubic | GadgetKind::Minor) && self.graph.max_degree() > 3 {
            return Err("replaced gadget is not subcubic".into());
        }
        Ok(())
    }

    /// Base vertex represented by each vertex of `graph`.
    pub fn owner(&self) -> BTreeMap<VertexId, VertexId> {
        self.trees.iter().flat_map(|(&b, s)| s.iter().map(move |&v| (v, b))).collect()
    }
}

fn add_gamma(g: &mut MultiGraph, d: usize, k: usize, neighbors: Vec<VertexId>) -> GammaCopy {
    let (w, h) = (d * k, if d == 0 { 0 } else { d + k - 1 });
    let grid: Vec<Vec<VertexId>> = (0..h).map(|_| (0..w).map(|_| g.add_vertex()).collect()).collect();
    let apices: Vec<VertexId> = (0..k).map(|_| g.add_vertex()).collect();
    for r in 0..h {
        for c in 0..w {
            if c + 1 < w {
                g.add_edge(grid[r][c], grid[r][c + 1]).unwrap();
            }
            if r + 1 < h {
                g.add_edge(grid[r][c], grid[r + 1][c]).unwrap();
            }
        }
    }
    for (i, &a) in apices.iter().enumerate() {
        for c in i * d..(i + 1) * d {
            g.add_edge(a, grid[0][c]).unwrap();
        }
    }
    GammaCopy {
        d,
        grid,
        apices,
        neighbors,
    }
}

fn identity_maps(g: &MultiGraph) -> (BTreeMap<VertexId, BTreeSet<VertexId>>, BTreeMap<EdgeId, EdgeId>) {
    (
        g.vertices().map(|v| (v, BTreeSet::from([v]))).collect(),
        g.edges().map(|(e, _, _)| (e, e)).collect(),
    )
}

/// Grid of width dk and height d + k − 1 plus k apices; apex i sees the
/// i-th block of d first-row vertices.
pub fn gamma(d: usize, k: usize) -> Result<Gadget> {
    if d == 0 || k == 0 {
        return Err(EpError::InvalidParameter("gamma needs d >= 1 and k >= 1".into()));
    }
    let mut g = MultiGraph::new();
    let copy = add_gamma(&mut g, d, k, vec![]);
    let (trees, edge_map) = identity_maps(&g);
    Ok(Gadget {
        kind: GadgetKind::Gamma,
        k,
        pattern: None,
        base: g.clone(),
        graph: g,
        copies: BTreeMap::from([(0, copy)]),
        bundles: BTreeMap::new(),
        trees,
        edge_map,
    })
}

/// G_k: one Γ_{deg(v),k} per vertex of `h`, with k parallel edges between
/// the matching ports of adjacent copies.
pub fn thicken(h: &MultiGraph, k: usize) -> Result<Gadget> {
    if k == 0 {
        return Err(EpError::InvalidParameter("k must be at least 1".into()));
    }
    if h.edges().any(|(_, a, b)| h.multiplicity(a, b) > 1) {
        return Err(EpError::InvalidParameter("pattern must be simple".into()));
    }
    let mut g = MultiGraph::new();
    let mut copies = BTreeMap::new();
    for v in h.vertices() {
        let ns: Vec<VertexId> = h.neighbors(v).into_iter().collect();
        copies.insert(v, add_gamma(&mut g, ns.len(), k, ns));
    }
    let mut bundles = BTreeMap::new();
    for (e, u, v) in h.edges() {
        let (cu, cv) = (&copies[&u], &copies[&v]);
        let pu = cu.neighbors.iter().position(|&x| x == v).unwrap();
        let pv = cv.neighbors.iter().position(|&x| x == u).unwrap();
        let es = (0..k)
            .map(|i| g.add_edge(cu.port_vertex(k, pu, i), cv.port_vertex(k, pv, i)).unwrap())
            .collect();
        bundles.insert(e, es);
    }
    let (trees, edge_map) = identity_maps(&g);
    Ok(Gadget {
        kind: GadgetKind::Thick,
        k,
        pattern: Some(h.clone()),
        base: g.clone(),
        graph: g,
        copies,
        bundles,
        trees,
        edge_map,
    })
}

/// Replaces every vertex of `gadget.graph` of degree at least 4 by a
/// caterpillar whose leaves are its former neighbours in ascending order.
fn replace_high_degree(mut gadget: Gadget) -> Gadget {
    let mut g = gadget.graph.clone();
    let mut to_base: BTreeMap<EdgeId, EdgeId> = gadget.edge_map.iter().map(|(&b, &f)| (f, b)).collect();
    let heavy: Vec<VertexId> = g.vertices().filter(|&v| g.degree(v) >= 4).collect();
    for w in heavy {
        let mut inc: Vec<(VertexId, EdgeId)> = g.incident(w).map(|e| (g.opposite(e, w).unwrap(), e)).collect();
        inc.sort_unstable();
        let m = inc.len();
        let spine: Vec<VertexId> = (0..m - 2).map(|_| g.add_vertex()).collect();
        for pair in spine.windows(2) {
            g.add_edge(pair[0], pair[1]).unwrap();
        }
        for (j, &(n, e)) in inc.iter().enumerate() {
            let s = match j {
                0 | 1 => spine[0],
                j if j == m - 1 => spine[m - 3],
                j => spine[j - 1],
            };
            g.remove_edge(e).unwrap();
            let ne = g.add_edge(s, n).unwrap();
            let b = to_base.remove(&e).unwrap();
            to_base.insert(ne, b);
        }
        g.remove_vertex(w).unwrap();
        let owner = gadget
            .trees
            .iter()
            .find(|(_, s)| s.contains(&w))
            .map(|(&b, _)| b)
            .unwrap();
        gadget.trees.insert(owner, spine.into_iter().collect());
    }
    gadget.edge_map = to_base.into_iter().map(|(f, b)| (b, f)).collect();
    gadget.graph = g;
    gadget
}

/// G'_k: G_k with every vertex of degree at least 4 replaced by a subcubic
/// caterpillar. The pattern must be subcubic so that apices stay single
/// vertices.
pub fn thicken_subcubic(h: &MultiGraph, k: usize) -> Result<Gadget> {
    if h.max_degree() > 3 {
        return Err(EpError::InvalidParameter("subcubic thickening needs a subcubic pattern".into()));
    }
    let mut g = replace_high_degree(thicken(h, k)?);
    g.kind = GadgetKind::Subcubic;
    Ok(g)
}

/// G''_k: every vertex of degree at least 4, apices included, replaced
/// by a subcubic caterpillar.
pub fn thicken_minor(h: &MultiGraph, k: usize) -> Result<Gadget> {
    let mut g = replace_high_degree(thicken(h, k)?);
    g.kind = GadgetKind::Minor;
    Ok(g)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HostPath {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionModel {
    pub branch: BTreeMap<VertexId, VertexId>,
    /// Path per pattern edge, from the image of its first endpoint.
    pub paths: BTreeMap<EdgeId, HostPath>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorModel {
    pub branch_sets: BTreeMap<VertexId, BTreeSet<VertexId>>,
    pub edges: BTreeMap<EdgeId, EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum Model {
    Subdivision(SubdivisionModel),
    Minor(MinorModel),
}

impl Model {
    pub fn verify(&self, g: &MultiGraph, h: &MultiGraph) -> std::result::Result<(), String> {
        match self {
            Model::Subdivision(m) => verify_subdivision_model(g, h, m),
            Model::Minor(m) => verify_minor_model(g, h, m),
        }
    }

    /// Renames host vertices and edges with `hv`, `he` and pattern
    /// vertices and edges with `pv`, `pe`.
    pub fn map_ids(
        &self,
        hv: impl Fn(VertexId) -> VertexId,
        he: impl Fn(EdgeId) -> EdgeId,
        pv: impl Fn(VertexId) -> VertexId,
        pe: impl Fn(EdgeId) -> EdgeId,
    ) -> Model {
        match self {
            Model::Subdivision(m) => Model::Subdivision(SubdivisionModel {
                branch: m.branch.iter().map(|(&x, &v)| (pv(x), hv(v))).collect(),
                paths: m
                    .paths
                    .iter()
                    .map(|(&e, p)| {
                        let path = HostPath {
                            vertices: p.vertices.iter().map(|&v| hv(v)).collect(),
                            edges: p.edges.iter().map(|&f| he(f)).collect(),
                        };
                        (pe(e), path)
                    })
                    .collect(),
            }),
            Model::Minor(m) => Model::Minor(MinorModel {
                branch_sets: m
                    .branch_sets
                    .iter()
                    .map(|(&x, set)| (pv(x), set.iter().map(|&v| hv(v)).collect()))
                    .collect(),
                edges: m.edges.iter().map(|(&e, &f)| (pe(e), he(f))).collect(),
            }),
        }
    }

    pub fn vertices(&self) -> BTreeSet<VertexId> {
        match self {
            Model::Subdivision(m) => m
                .branch
                .values()
                .copied()
                .chain(m.paths.values().flat_map(|p| p.vertices.iter().copied()))
                .collect(),
            Model::Minor(m) => m.branch_sets.values().flatten().copied().collect(),
        }
    }
}

pub fn verify_subdivision_model(g: &MultiGraph, h: &MultiGraph, m: &SubdivisionModel) -> std::result::Result<(), String> {
    if m.branch.keys().copied().ne(h.vertices()) {
        return Err("branch vertices do not match the pattern's vertices".into());
    }
    let images: BTreeSet<VertexId> = m.branch.values().copied().collect();
    if images.len() != m.branch.len() {
        return Err("two pattern vertices share a branch vertex".into());
    }
    if let Some(v) = images.iter().find(|v| !g.has_vertex(**v)) {
        return Err(format!("branch vertex {v} is not in the host"));
    }
    if m.paths.keys().copied().ne(h.edges().map(|(e, _, _)| e)) {
        return Err("paths do not match the pattern's edges".into());
    }
    let mut inner: BTreeSet<VertexId> = BTreeSet::new();
    let mut used: BTreeSet<EdgeId> = BTreeSet::new();
    for (e, a, b) in h.edges() {
        let p = &m.paths[&e];
        let n = p.vertices.len();
        if n < 2 || p.edges.len() != n - 1 {
            return Err(format!("path for edge {e} is malformed"));
        }
        if p.vertices[0] != m.branch[&a] || p.vertices[n - 1] != m.branch[&b] {
            return Err(format!("path for edge {e} does not join its branch vertices"));
        }
        for (i, &x) in p.edges.iter().enumerate() {
            let (s, t) = (p.vertices[i], p.vertices[i + 1]);
            match g.endpoints(x) {
                Some((y, z)) if (y, z) == (s, t) || (y, z) == (t, s) => {}
                _ => return Err(format!("path for edge {e} uses edge {x} between {s} and {t}, which is not there")),
            }
            if !used.insert(x) {
                return Err(format!("host edge {x} is used twice"));
            }
        }
        for &v in &p.vertices[1..n - 1] {
            if images.contains(&v) || !inner.insert(v) {
                return Err(format!("vertex {v} is shared between paths"));
            }
        }
    }
    Ok(())
}

pub fn verify_minor_model(g: &MultiGraph, h: &MultiGraph, m: &MinorModel) -> std::result::Result<(), String> {
    if m.branch_sets.keys().copied().ne(h.vertices()) {
        return Err("branch sets do not match the pattern's vertices".into());
    }
    let mut seen = BTreeSet::new();
    for (v, set) in &m.branch_sets {
        if set.is_empty() || set.iter().any(|x| !g.has_vertex(*x)) {
            return Err(format!("branch set of {v} is empty or leaves the host"));
        }
        if !g.is_connected_set(set) {
            return Err(format!("branch set of {v} is not connected"));
        }
        for &x in set {
            if !seen.insert(x) {
                return Err(format!("vertex {x} is in two branch sets"));
            }
        }
    }
    if m.edges.keys().copied().ne(h.edges().map(|(e, _, _)| e)) {
        return Err("edge assignment does not match the pattern's edges".into());
    }
    let distinct: BTreeSet<EdgeId> = m.edges.values().copied().collect();
    if distinct.len() != m.edges.len() {
        return Err("two pattern edges share a host edge".into());
    }
    for (e, a, b) in h.edges() {
        let x = m.edges[&e];
        let Some((y, z)) = g.endpoints(x) else {
            return Err(format!("host edge {x} does not exist"));
        };
        let (sa, sb) = (&m.branch_sets[&a], &m.branch_sets[&b]);
        if !(sa.contains(&y) && sb.contains(&z) || sa.contains(&z) && sb.contains(&y)) {
            return Err(format!("host edge {x} does not join the branch sets of edge {e}"));
        }
    }
    Ok(())
}

/// Model of the pattern with no vertex removed.
pub fn canonical_model(gadget: &Gadget) -> Result<Model> {
    route_avoiding(gadget, &BTreeSet::new())
}

/// Vertex-disjoint paths from `source` to every vertex of `targets`
/// inside `allowed`, one path per target, by unit-capacity augmenting
/// paths.
fn fan(g: &MultiGraph, allowed: &BTreeSet<VertexId>, source: VertexId, targets: &[VertexId]) -> Option<Vec<Vec<VertexId>>> {
    let ids: Vec<VertexId> = allowed.iter().copied().collect();
    let idx: BTreeMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let sink = 2 * ids.len();
    let mut to: Vec<usize> = Vec::new();
    let mut cap: Vec<u8> = Vec::new();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); sink + 1];
    let mut arc = |a: usize, b: usize, to: &mut Vec<usize>, cap: &mut Vec<u8>| {
        adj[a].push(to.len());
        to.push(b);
        cap.push(1);
        adj[b].push(to.len());
        to.push(a);
        cap.push(0);
    };
    for (i, &v) in ids.iter().enumerate() {
        if v != source {
            arc(2 * i, 2 * i + 1, &mut to, &mut cap);
        }
        for w in g.neighbors(v) {
            if w != source {
                if let Some(&j) = idx.get(&w) {
                    arc(2 * i + 1, 2 * j, &mut to, &mut cap);
                }
            }
        }
    }
    for t in targets {
        arc(2 * idx[t] + 1, sink, &mut to, &mut cap);
    }
    let start = 2 * idx[&source] + 1;
    for _ in 0..targets.len() {
        let mut prev: Vec<Option<usize>> = vec![None; sink + 1];
        let mut queue = VecDeque::from([start]);
        let mut reached = false;
        while let Some(x) = queue.pop_front() {
            if x == sink {
                reached = true;
                break;
            }
            for &a in &adj[x] {
                let y = to[a];
                if cap[a] > 0 && y != start && prev[y].is_none() {
                    prev[y] = Some(a);
                    queue.push_back(y);
                }
            }
        }
        if !reached {
            return None;
        }
        let mut x = sink;
        while x != start {
            let a = prev[x].unwrap();
            cap[a] -= 1;
            cap[a ^ 1] += 1;
            x = to[a ^ 1];
        }
    }
    // forward arcs carry flow when their capacity dropped to 0
    let mut paths = Vec::new();
    for &a0 in &adj[start] {
        if a0 % 2 == 1 || cap[a0] != 0 {
            continue;
        }
        let mut path = vec![source];
        let mut x = to[a0];
        while x != sink {
            let v = ids[x / 2];
            if x % 2 == 0 {
                path.push(v);
            }
            let a = adj[x].iter().copied().find(|&a| a % 2 == 0 && cap[a] == 0).unwrap();
            cap[a] = 1;
            x = to[a];
        }
        paths.push(path);
    }
    Some(paths)
}

/// Model of the pattern in `gadget.graph` that avoids `x`, for |x| < k.
///
/// For each pattern edge picks a bundle index whose columns on both sides
/// avoid x; for each copy picks an apex whose column block avoids x, then
/// links it to the chosen port vertices by disjoint paths in the copy.
pub fn route_avoiding(gadget: &Gadget, x: &BTreeSet<VertexId>) -> Result<Model> {
    let Some(h) = &gadget.pattern else {
        return Err(EpError::InvalidParameter("routing needs a thickened pattern".into()));
    };
    let k = gadget.k;
    if x.len() >= k {
        return Err(EpError::PreconditionViolated(format!("|X| = {} is not below k = {k}", x.len())));
    }
    let owner = gadget.owner();
    let mut xb = BTreeSet::new();
    for v in x {
        xb.insert(
            *owner
                .get(v)
                .ok_or_else(|| EpError::InvalidParameter(format!("vertex {v} is not in the gadget")))?,
        );
    }
    let base = &gadget.base;
    let free_col = |c: &GammaCopy, col: usize| c.column(col).all(|v| !xb.contains(&v));

    // endpoint in each copy per pattern edge, and the bundle edge used
    let mut ends: BTreeMap<(VertexId, VertexId), VertexId> = BTreeMap::new();
    let mut link: BTreeMap<EdgeId, EdgeId> = BTreeMap::new();
    for (e, u, v) in h.edges() {
        let (cu, cv) = (&gadget.copies[&u], &gadget.copies[&v]);
        let pu = cu.neighbors.iter().position(|&y| y == v).unwrap();
        let pv = cv.neighbors.iter().position(|&y| y == u).unwrap();
        let j = (0..k)
            .find(|&j| free_col(cu, cu.port_column(k, pu, j)) && free_col(cv, cv.port_column(k, pv, j)))
            .ok_or_else(|| EpError::RoutingFailed(format!("every bundle of pattern edge {e} meets X")))?;
        ends.insert((u, v), cu.port_vertex(k, pu, j));
        ends.insert((v, u), cv.port_vertex(k, pv, j));
        link.insert(e, gadget.bundles[&e][j]);
    }

    // apex-to-port paths per copy
    let mut apex: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    let mut fans: BTreeMap<(VertexId, VertexId), Vec<VertexId>> = BTreeMap::new();
    for (&v, c) in &gadget.copies {
        let d = c.d;
        let s = (0..k)
            .find(|&s| !xb.contains(&c.apices[s]) && (s * d..(s + 1) * d).all(|col| free_col(c, col)))
            .ok_or_else(|| EpError::RoutingFailed(format!("every apex of copy {v} meets X")))?;
        let a = c.apices[s];
        apex.insert(v, a);
        if d == 0 {
            continue;
        }
        let mut allowed: BTreeSet<VertexId> = c.grid.iter().flatten().copied().filter(|w| !xb.contains(w)).collect();
        allowed.insert(a);
        let targets: Vec<VertexId> = c.neighbors.iter().map(|&u| ends[&(v, u)]).collect();
        let paths =
            fan(base, &allowed, a, &targets).ok_or_else(|| EpError::RoutingFailed(format!("no fan in copy {v}")))?;
        for p in paths {
            let end = *p.last().unwrap();
            let u = c.neighbors[targets.iter().position(|&t| t == end).unwrap()];
            fans.insert((v, u), p);
        }
    }

    match gadget.kind {
        GadgetKind::Minor => {
            let mut branch_sets = BTreeMap::new();
            for &v in gadget.copies.keys() {
                let mut set: BTreeSet<VertexId> = gadget.trees[&apex[&v]].clone();
                for (_, p) in fans.range((v, 0)..=(v, usize::MAX)) {
                    for w in p {
                        set.extend(gadget.trees[w].iter().copied());
                    }
                }
                branch_sets.insert(v, set);
            }
            let edges = link.iter().map(|(&e, b)| (e, gadget.edge_map[b])).collect();
            Ok(Model::Minor(MinorModel { branch_sets, edges }))
        }
        _ => {
            let mut paths = BTreeMap::new();
            for (e, u, v) in h.edges() {
                let mut walk = fans[&(u, v)].clone();
                walk.extend(fans[&(v, u)].iter().rev());
                let mut base_edges = Vec::new();
                for pair in walk.windows(2) {
                    if (pair[0], pair[1]) == (ends[&(u, v)], ends[&(v, u)]) {
                        base_edges.push(link[&e]);
                    } else {
                        base_edges.push(base.edges_between(pair[0], pair[1])[0]);
                    }
                }
                paths.insert(e, lift_path(gadget, &walk, &base_edges));
            }
            let branch = apex.iter().map(|(&v, a)| (v, *gadget.trees[a].iter().next().unwrap())).collect();
            Ok(Model::Subdivision(SubdivisionModel { branch, paths }))
        }
    }
}

/// Maps a base path into `gadget.graph`, crossing each replaced vertex
/// along its caterpillar.
fn lift_path(gadget: &Gadget, walk: &[VertexId], base_edges: &[EdgeId]) -> HostPath {
    let g = &gadget.graph;
    let fe: Vec<EdgeId> = base_edges.iter().map(|b| gadget.edge_map[b]).collect();
    let first = *gadget.trees[&walk[0]].iter().next().unwrap();
    let mut vertices = vec![first];
    let mut edges = Vec::new();
    for (i, &e) in fe.iter().enumerate() {
        let here = *vertices.last().unwrap();
        let next = g.opposite(e, here).expect("lifted edge leaves the current vertex");
        edges.push(e);
        vertices.push(next);
        if i + 1 < fe.len() {
            // walk inside the tree of walk[i + 1] to the tail of the next edge
            let tree = &gadget.trees[&walk[i + 1]];
            let (a, b) = g.endpoints(fe[i + 1]).unwrap();
            let exit = if tree.contains(&a) { a } else { b };
            let inner = tree_path(g, tree, next, exit);
            for pair in inner.windows(2) {
                edges.push(g.edges_between(pair[0], pair[1])[0]);
                vertices.push(pair[1]);
            }
        }
    }
    HostPath { vertices, edges }
}

fn tree_path(g: &MultiGraph, tree: &BTreeSet<VertexId>, from: VertexId, to: VertexId) -> Vec<VertexId> {
    let mut prev = BTreeMap::from([(from, from)]);
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        for y in g.neighbors(x) {
            if tree.contains(&y) && !prev.contains_key(&y) {
                prev.insert(y, x);
                queue.push_back(y);
            }
        }
    }
    let mut path = vec![to];
    while *path.last().unwrap() != from {
        path.push(prev[path.last().unwrap()]);
    }
    path.reverse();
    path
}

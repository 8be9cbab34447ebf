//! Backtracking subgraph-isomorphism search for small fixed patterns.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{EpError, Result};
use crate::graph::{EdgeId, MultiGraph, VertexId};

/// One occurrence of a pattern as a (not necessarily induced) subgraph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Copy {
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeSet<EdgeId>,
}

/// Pattern vertices in an order where each vertex after the first of its
/// component is adjacent to an earlier one, highest degree first.
fn search_order(pattern: &MultiGraph) -> Vec<VertexId> {
    let mut order = Vec::new();
    let mut placed = BTreeSet::new();
    while placed.len() < pattern.vertex_count() {
        let start = pattern
            .vertices()
            .filter(|v| !placed.contains(v))
            .max_by_key(|&v| (pattern.degree(v), std::cmp::Reverse(v)))
            .unwrap();
        placed.insert(start);
        order.push(start);
        loop {
            let next = pattern
                .vertices()
                .filter(|v| !placed.contains(v))
                .filter(|&v| pattern.neighbors(v).iter().any(|w| placed.contains(w)))
                .max_by_key(|&v| {
                    let back = pattern.neighbors(v).iter().filter(|w| placed.contains(w)).count();
                    (back, pattern.degree(v), std::cmp::Reverse(v))
                });
            match next {
                Some(v) => {
                    placed.insert(v);
                    order.push(v);
                }
                None => break,
            }
        }
    }
    order
}

struct Matcher<'a> {
    pattern: &'a MultiGraph,
    host: &'a MultiGraph,
    order: Vec<VertexId>,
    host_vertices: Vec<VertexId>,
    map: BTreeMap<VertexId, VertexId>,
    used: BTreeSet<VertexId>,
}

impl<'a> Matcher<'a> {
    fn feasible(&self, p: VertexId, h: VertexId) -> bool {
        if self.host.degree(h) < self.pattern.degree(p) {
            return false;
        }
        for w in self.pattern.neighbors(p) {
            if let Some(&hw) = self.map.get(&w) {
                if self.host.multiplicity(h, hw) < self.pattern.multiplicity(p, w) {
                    return false;
                }
            }
        }
        true
    }

    fn run(&mut self, depth: usize, visit: &mut dyn FnMut(&BTreeMap<VertexId, VertexId>) -> bool) -> bool {
        if depth == self.order.len() {
            return visit(&self.map);
        }
        let p = self.order[depth];
        let candidates: Vec<VertexId> = match self
            .pattern
            .neighbors(p)
            .into_iter()
            .find_map(|w| self.map.get(&w).copied())
        {
            Some(anchor) => self.host.neighbors(anchor).into_iter().collect(),
            None => self.host_vertices.clone(),
        };
        for h in candidates {
            if self.used.contains(&h) || !self.feasible(p, h) {
                continue;
            }
            self.map.insert(p, h);
            self.used.insert(h);
            let stop = self.run(depth + 1, visit);
            self.map.remove(&p);
            self.used.remove(&h);
            if stop {
                return true;
            }
        }
        false
    }
}

/// Visits every injective homomorphism of `pattern` into `host`; the visitor
/// returns `true` to stop.
fn for_each_embedding(
    pattern: &MultiGraph,
    host: &MultiGraph,
    visit: &mut dyn FnMut(&BTreeMap<VertexId, VertexId>) -> bool,
) {
    if pattern.vertex_count() > host.vertex_count() || pattern.edge_count() > host.edge_count() {
        return;
    }
    let mut m = Matcher {
        pattern,
        host,
        order: search_order(pattern),
        host_vertices: host.vertices().collect(),
        map: BTreeMap::new(),
        used: BTreeSet::new(),
    };
    m.run(0, visit);
}

/// Host edges realising each pattern edge, smallest identifiers first.
fn image_edges(pattern: &MultiGraph, host: &MultiGraph, map: &BTreeMap<VertexId, VertexId>) -> BTreeSet<EdgeId> {
    let mut out = BTreeSet::new();
    let mut done = BTreeSet::new();
    for (_, a, b) in pattern.edges() {
        if !done.insert((a, b)) {
            continue;
        }
        let need = pattern.multiplicity(a, b);
        out.extend(host.edges_between(map[&a], map[&b]).into_iter().take(need));
    }
    out
}

/// First occurrence of `pattern` in `host`, if any.
pub fn find_copy(pattern: &MultiGraph, host: &MultiGraph) -> Option<Copy> {
    let mut found = None;
    for_each_embedding(pattern, host, &mut |map| {
        found = Some(Copy {
            vertices: map.values().copied().collect(),
            edges: image_edges(pattern, host, map),
        });
        true
    });
    found
}

/// Every distinct occurrence of `pattern` in `host`. With `edge_level`
/// occurrences are distinguished by their edge sets (parallel host edges
/// give different copies), otherwise by vertex set.
pub fn enumerate_copies(pattern: &MultiGraph, host: &MultiGraph, edge_level: bool, cap: usize) -> Result<Vec<Copy>> {
    let mut seen: BTreeSet<Copy> = BTreeSet::new();
    let mut seen_vertex_sets: BTreeSet<BTreeSet<VertexId>> = BTreeSet::new();
    let mut overflow = false;
    for_each_embedding(pattern, host, &mut |map| {
        let vertices: BTreeSet<VertexId> = map.values().copied().collect();
        if !edge_level {
            if seen_vertex_sets.insert(vertices.clone()) {
                seen.insert(Copy {
                    vertices,
                    edges: image_edges(pattern, host, map),
                });
            }
        } else {
            // product over parallel choices of each pattern edge class
            let mut classes: Vec<(Vec<EdgeId>, usize)> = Vec::new();
            let mut done = BTreeSet::new();
            for (_, a, b) in pattern.edges() {
                if done.insert((a, b)) {
                    classes.push((host.edges_between(map[&a], map[&b]), pattern.multiplicity(a, b)));
                }
            }
            let mut partial: Vec<BTreeSet<EdgeId>> = vec![BTreeSet::new()];
            for (avail, need) in &classes {
                let subsets = combinations(avail, *need);
                let mut next = Vec::new();
                for p in &partial {
                    for s in &subsets {
                        let mut q = p.clone();
                        q.extend(s.iter().copied());
                        next.push(q);
                    }
                }
                partial = next;
            }
            for edges in partial {
                seen.insert(Copy {
                    vertices: vertices.clone(),
                    edges,
                });
            }
        }
        if seen.len() > cap {
            overflow = true;
            return true;
        }
        false
    });
    if overflow {
        return Err(EpError::BudgetExceeded {
            what: "pattern copy enumeration",
            limit: cap as u64,
        });
    }
    Ok(seen.into_iter().collect())
}

fn combinations(items: &[EdgeId], k: usize) -> Vec<Vec<EdgeId>> {
    if k == 0 {
        return vec![vec![]];
    }
    if items.len() < k {
        return vec![];
    }
    let mut out = Vec::new();
    for (i, &x) in items.iter().enumerate() {
        for mut rest in combinations(&items[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

/// Named small patterns accepted on the command line.
pub fn pattern_by_name(name: &str) -> Option<MultiGraph> {
    use crate::graph::named;
    let g = match name {
        "k2" => named::complete(2),
        "k3" | "triangle" => named::complete(3),
        "k4" => named::complete(4),
        "k5" => named::complete(5),
        "k33" => named::complete_bipartite(3, 3),
        "path3" | "p3" => named::path(3),
        "path4" | "p4" => named::path(4),
        "c4" => named::cycle(4),
        "star3" => named::star(3),
        _ => return None,
    };
    Some(g)
}

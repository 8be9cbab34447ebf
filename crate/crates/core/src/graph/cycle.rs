use std::collections::BTreeSet;

use super::{EdgeId, VertexId};

/// Alternating vertex/edge sequence: `edges[i]` joins `vertices[i]` and
/// `vertices[(i + 1) % len]`. Parallel edges stay distinguishable.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cycle {
    pub vertices: Vec<VertexId>,
    pub edges: Vec<EdgeId>,
}

impl Cycle {
    pub fn new(vertices: Vec<VertexId>, edges: Vec<EdgeId>) -> Self {
        debug_assert_eq!(vertices.len(), edges.len());
        Cycle { vertices, edges }
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn vertex_set(&self) -> BTreeSet<VertexId> {
        self.vertices.iter().copied().collect()
    }

    pub fn edge_set(&self) -> BTreeSet<EdgeId> {
        self.edges.iter().copied().collect()
    }

    fn rotated(&self, r: usize) -> Cycle {
        let mut vertices = self.vertices.clone();
        let mut edges = self.edges.clone();
        vertices.rotate_left(r);
        edges.rotate_left(r);
        Cycle { vertices, edges }
    }

    fn reversed(&self) -> Cycle {
        let n = self.len();
        let vertices = (0..n).map(|i| self.vertices[(n - i) % n]).collect();
        let edges = (0..n).map(|i| self.edges[n - 1 - i]).collect();
        Cycle { vertices, edges }
    }

    /// Starts at the smallest vertex, oriented so the sequence is smallest.
    pub fn canonical(&self) -> Cycle {
        if self.is_empty() {
            return self.clone();
        }
        let start = (0..self.len()).min_by_key(|&i| self.vertices[i]).unwrap();
        let a = self.rotated(start);
        let b = a.reversed();
        if (&b.vertices, &b.edges) < (&a.vertices, &a.edges) {
            b
        } else {
            a
        }
    }

    pub(crate) fn sort_key(&self) -> (usize, &[VertexId], &[EdgeId]) {
        (self.len(), &self.vertices, &self.edges)
    }
}

use std::collections::BTreeMap;

use super::{Cycle, EdgeId, MultiGraph, VertexId};
use crate::error::{EpError, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReductionEvent {
    DeleteVertex {
        vertex: VertexId,
    },
    /// `vertex` had exactly the edges `first = {a, vertex}` and
    /// `second = {vertex, b}` with `a ≠ b`; both were replaced by
    /// `replacement = {a, b}`.
    Suppress {
        vertex: VertexId,
        first: EdgeId,
        second: EdgeId,
        replacement: EdgeId,
        ends: (VertexId, VertexId),
    },
}

/// Ordered record of the low-degree reductions applied to a graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ReductionTrace {
    events: Vec<ReductionEvent>,
    // replacement edge -> (a, b, first, second, suppressed vertex)
    replaced: BTreeMap<EdgeId, (VertexId, VertexId, EdgeId, EdgeId, VertexId)>,
}

impl ReductionTrace {
    pub fn events(&self) -> &[ReductionEvent] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub(crate) fn push(&mut self, ev: ReductionEvent) {
        if let ReductionEvent::Suppress {
            vertex,
            first,
            second,
            replacement,
            ends,
            ..
        } = ev
        {
            self.replaced
                .insert(replacement, (ends.0, ends.1, first, second, vertex));
        }
        self.events.push(ev);
    }

    /// Vertices suppressed along the way (in event order).
    pub fn suppressed(&self) -> Vec<VertexId> {
        self.events
            .iter()
            .filter_map(|ev| match ev {
                ReductionEvent::Suppress { vertex, .. } => Some(*vertex),
                _ => None,
            })
            .collect()
    }

    pub fn is_replacement(&self, e: EdgeId) -> bool {
        self.replaced.contains_key(&e)
    }

    /// Re-applies every event to `g`.
    pub fn replay(&self, g: &MultiGraph) -> Result<MultiGraph> {
        let mut g = g.clone();
        for ev in &self.events {
            match *ev {
                ReductionEvent::DeleteVertex { vertex } => g.remove_vertex(vertex)?,
                ReductionEvent::Suppress {
                    vertex,
                    first,
                    second,
                    replacement,
                    ends,
                } => {
                    if g.degree(vertex) != 2
                        || g.opposite(first, vertex) != Some(ends.0)
                        || g.opposite(second, vertex) != Some(ends.1)
                    {
                        return Err(EpError::PreconditionViolated(format!(
                            "trace does not apply at vertex {vertex}"
                        )));
                    }
                    g.remove_vertex(vertex)?;
                    let e = g.add_edge(ends.0, ends.1)?;
                    if e != replacement {
                        return Err(EpError::PreconditionViolated(format!(
                            "replacement edge {replacement} replayed as {e}"
                        )));
                    }
                }
            }
        }
        Ok(g)
    }

    /// Original edges of the path that `e` stands for, listed from `from`.
    pub fn expand_edge(&self, e: EdgeId, from: VertexId) -> Vec<EdgeId> {
        let mut out = Vec::new();
        self.expand_into(e, from, &mut out);
        out
    }

    fn expand_into(&self, e: EdgeId, from: VertexId, out: &mut Vec<EdgeId>) {
        match self.replaced.get(&e) {
            None => out.push(e),
            Some(&(a, _b, first, second, mid)) => {
                if from == a {
                    self.expand_into(first, a, out);
                    self.expand_into(second, mid, out);
                } else {
                    self.expand_into(second, from, out);
                    self.expand_into(first, mid, out);
                }
            }
        }
    }

    /// An original edge standing for `e`: itself, or the first original edge
    /// of its expansion. Removing it destroys every cycle through `e`.
    pub fn representative(&self, e: EdgeId) -> EdgeId {
        let mut cur = e;
        while let Some(&(_, _, first, _, _)) = self.replaced.get(&cur) {
            cur = first;
        }
        cur
    }

    /// Maps a cycle of the reduced graph to the cycle of `original` it
    /// stands for.
    pub fn expand_cycle(&self, original: &MultiGraph, c: &Cycle) -> Result<Cycle> {
        let n = c.len();
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        for i in 0..n {
            let from = c.vertices[i];
            let mut cur = from;
            for f in self.expand_edge(c.edges[i], from) {
                vertices.push(cur);
                edges.push(f);
                cur = original.opposite(f, cur).ok_or(EpError::UnknownEdge(f))?;
            }
            if cur != c.vertices[(i + 1) % n] {
                return Err(EpError::PreconditionViolated(
                    "expanded edge does not end where the cycle continues".into(),
                ));
            }
        }
        Ok(Cycle::new(vertices, edges))
    }
}

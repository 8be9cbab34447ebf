//! Packing and cover certificates, the pattern-detector interface, and the
//! independent verifiers.

mod detectors;

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{EpError, Result};
use crate::graph::{Cycle, EdgeId, Mode, MultiGraph, VertexId};

pub use detectors::{
    builtin_detectors, detector_by_name, CycleDetector, DisjointUnionDetector, FixedSubgraphDetector,
    ThetaDetector, DEFAULT_THETA_BUDGET,
};

/// A subgraph of the host graph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct PatternWitness {
    pub vertices: BTreeSet<VertexId>,
    pub edges: BTreeSet<EdgeId>,
}

impl PatternWitness {
    pub fn new(vertices: BTreeSet<VertexId>, edges: BTreeSet<EdgeId>) -> Self {
        PatternWitness { vertices, edges }
    }

    pub fn from_cycle(c: &Cycle) -> Self {
        PatternWitness {
            vertices: c.vertex_set(),
            edges: c.edge_set(),
        }
    }

    /// `A_x` of the witness.
    pub fn elements(&self, mode: Mode) -> &BTreeSet<usize> {
        match mode {
            Mode::Vertex => &self.vertices,
            Mode::Edge => &self.edges,
        }
    }

    pub fn as_graph(&self, host: &MultiGraph) -> Result<MultiGraph> {
        host.subgraph(&self.vertices, &self.edges)
    }

    /// Union of two witnesses.
    pub fn union(&self, other: &PatternWitness) -> PatternWitness {
        PatternWitness {
            vertices: self.vertices.union(&other.vertices).copied().collect(),
            edges: self.edges.union(&other.edges).copied().collect(),
        }
    }
}

/// Predicate and witness finder for a graph family `𝓗`.
///
/// `find` returns `None` exactly when the graph has no subgraph in the
/// family. Detectors hold no mutable state.
pub trait PatternDetector: Send + Sync {
    fn name(&self) -> String;

    fn find(&self, g: &MultiGraph) -> Result<Option<PatternWitness>>;

    /// A witness with no proper subgraph that is also a witness. The default
    /// removes edges, then vertices, one at a time while a witness survives.
    fn minimal(&self, g: &MultiGraph) -> Result<Option<PatternWitness>> {
        let Some(w) = self.find(g)? else {
            return Ok(None);
        };
        let mut cur = w.as_graph(g)?;
        let edges: Vec<EdgeId> = cur.edge_set().into_iter().collect();
        for e in edges {
            let mut trial = cur.clone();
            trial.remove_edge(e)?;
            if self.find(&trial)?.is_some() {
                cur = trial;
            }
        }
        let verts: Vec<VertexId> = cur.vertices().collect();
        for v in verts {
            let mut trial = cur.clone();
            trial.remove_vertex(v)?;
            if self.find(&trial)?.is_some() {
                cur = trial;
            }
        }
        Ok(Some(PatternWitness::new(cur.vertex_set(), cur.edge_set())))
    }

    /// Whether `w` (a subgraph of `g`) contains a member of the family.
    fn accepts(&self, g: &MultiGraph, w: &PatternWitness) -> Result<bool> {
        let sub = w.as_graph(g)?;
        Ok(self.find(&sub)?.is_some())
    }

    /// Every witness of `g` up to `cap`, distinct by vertex set.
    fn enumerate(&self, _g: &MultiGraph, _cap: usize) -> Result<Vec<PatternWitness>> {
        Err(EpError::InvalidParameter(format!(
            "detector {} cannot enumerate witnesses",
            self.name()
        )))
    }

    /// All members of the family are connected.
    fn connected_patterns(&self) -> bool;

    /// Upper bound on the degree of any vertex in a subgraph-minimal member.
    fn delta_tilde_bound(&self) -> Option<usize>;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackingCertificate {
    pub mode: Mode,
    pub members: Vec<PatternWitness>,
}

impl PackingCertificate {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverCertificate {
    pub mode: Mode,
    pub elements: BTreeSet<usize>,
}

impl CoverCertificate {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Packing(PackingCertificate),
    Cover(CoverCertificate),
}

impl Certificate {
    pub fn mode(&self) -> Mode {
        match self {
            Certificate::Packing(p) => p.mode,
            Certificate::Cover(c) => c.mode,
        }
    }

    pub fn is_packing(&self) -> bool {
        matches!(self, Certificate::Packing(_))
    }
}

/// How good the produced certificate is relative to the claimed gap.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct QualityReport {
    /// Bound claimed for the cover side (or the packing target).
    pub bound_claimed: usize,
    /// Whether the hypotheses behind `bound_claimed` held on this run.
    pub hypotheses_held: bool,
    pub notes: Vec<String>,
}

/// Either a packing of the requested size or a cover, plus a report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpOutcome {
    pub certificate: Certificate,
    pub quality: QualityReport,
}

impl EpOutcome {
    pub fn packing(&self) -> Option<&PackingCertificate> {
        match &self.certificate {
            Certificate::Packing(p) => Some(p),
            Certificate::Cover(_) => None,
        }
    }

    pub fn cover(&self) -> Option<&CoverCertificate> {
        match &self.certificate {
            Certificate::Cover(c) => Some(c),
            Certificate::Packing(_) => None,
        }
    }

    pub fn verify(&self, g: &MultiGraph, det: &dyn PatternDetector) -> Verdict {
        match &self.certificate {
            Certificate::Packing(p) => verify_packing(g, det, p),
            Certificate::Cover(c) => verify_cover(g, det, c),
        }
    }
}

/// First reason a certificate fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    UnknownVertex { member: usize, vertex: VertexId },
    UnknownEdge { member: usize, edge: EdgeId },
    EdgeLeavesMember { member: usize, edge: EdgeId },
    NotAWitness { member: usize },
    Overlap { first: usize, second: usize, element: usize },
    UnknownElement { element: usize },
    PatternRemains { witness: PatternWitness },
    DetectorFailed { error: EpError },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UnknownVertex { member, vertex } => write!(f, "member {member}: unknown vertex {vertex}"),
            Violation::UnknownEdge { member, edge } => write!(f, "member {member}: unknown edge {edge}"),
            Violation::EdgeLeavesMember { member, edge } => {
                write!(f, "member {member}: edge {edge} has an endpoint outside the member")
            }
            Violation::NotAWitness { member } => write!(f, "member {member} is not a pattern witness"),
            Violation::Overlap { first, second, element } => {
                write!(f, "members {first} and {second} share element {element}")
            }
            Violation::UnknownElement { element } => write!(f, "cover element {element} not in graph"),
            Violation::PatternRemains { witness } => {
                write!(f, "pattern survives the cover on vertices {:?}", witness.vertices)
            }
            Violation::DetectorFailed { error } => write!(f, "detector failed: {error}"),
        }
    }
}

pub type Verdict = std::result::Result<(), Violation>;

/// Checks membership, witness-hood and pairwise `A_x`-disjointness.
pub fn verify_packing(g: &MultiGraph, det: &dyn PatternDetector, p: &PackingCertificate) -> Verdict {
    for (i, m) in p.members.iter().enumerate() {
        if let Some(&v) = m.vertices.iter().find(|v| !g.has_vertex(**v)) {
            return Err(Violation::UnknownVertex { member: i, vertex: v });
        }
        for &e in &m.edges {
            let Some((a, b)) = g.endpoints(e) else {
                return Err(Violation::UnknownEdge { member: i, edge: e });
            };
            if !m.vertices.contains(&a) || !m.vertices.contains(&b) {
                return Err(Violation::EdgeLeavesMember { member: i, edge: e });
            }
        }
        match det.accepts(g, m) {
            Ok(true) => {}
            Ok(false) => return Err(Violation::NotAWitness { member: i }),
            Err(error) => return Err(Violation::DetectorFailed { error }),
        }
    }
    for i in 0..p.members.len() {
        for j in i + 1..p.members.len() {
            let a = p.members[i].elements(p.mode);
            let b = p.members[j].elements(p.mode);
            if let Some(&x) = a.intersection(b).next() {
                return Err(Violation::Overlap {
                    first: i,
                    second: j,
                    element: x,
                });
            }
        }
    }
    Ok(())
}

/// Checks that deleting the cover leaves no witness.
pub fn verify_cover(g: &MultiGraph, det: &dyn PatternDetector, c: &CoverCertificate) -> Verdict {
    for &x in &c.elements {
        let known = match c.mode {
            Mode::Vertex => g.has_vertex(x),
            Mode::Edge => g.has_edge(x),
        };
        if !known {
            return Err(Violation::UnknownElement { element: x });
        }
    }
    let rest = g.without(c.mode, &c.elements);
    match det.find(&rest) {
        Ok(None) => Ok(()),
        Ok(Some(witness)) => Err(Violation::PatternRemains { witness }),
        Err(error) => Err(Violation::DetectorFailed { error }),
    }
}

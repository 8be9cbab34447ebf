use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::{balanced_separation, best_effort_td, exact_treewidth, min_fill_td, to_nice, TreeDecomposition};
use crate::certificates::{
    verify_cover, Certificate, CoverCertificate, EpOutcome, PackingCertificate, PatternDetector, PatternWitness,
    QualityReport,
};
use crate::error::{EpError, Result};
use crate::graph::{Mode, MultiGraph, VertexId};
use crate::oracles::{exact_vpack_cycles, max_set_packing, DEFAULT_COPY_CAP, DEFAULT_NODE_CAP};
use crate::trees::{gallai, rs_selection, SubtreeFamily, DEFAULT_SELECTION_CAP};

/// Exact maximum vertex packing on any graph handed to it.
pub type PackOracle = dyn Fn(&MultiGraph) -> Result<PackingCertificate> + Send + Sync;

/// Exact vertex packing of cycles.
pub fn cycle_vpack_oracle() -> impl Fn(&MultiGraph) -> Result<PackingCertificate> + Send + Sync {
    |g: &MultiGraph| match exact_vpack_cycles(g)?.witness {
        Certificate::Packing(p) => Ok(p),
        Certificate::Cover(_) => unreachable!("packing oracle returned a cover"),
    }
}

/// Exact vertex packing over the witnesses `det` enumerates.
pub fn detector_vpack_oracle(
    det: Arc<dyn PatternDetector>,
) -> impl Fn(&MultiGraph) -> Result<PackingCertificate> + Send + Sync {
    move |g: &MultiGraph| {
        let ws = det.enumerate(g, DEFAULT_COPY_CAP)?;
        let universe = g.next_vertex_id();
        let sets: Vec<FixedBitSet> = ws
            .iter()
            .map(|w| {
                let mut s = FixedBitSet::with_capacity(universe);
                w.vertices.iter().for_each(|&v| s.insert(v));
                s
            })
            .collect();
        let (chosen, _) = max_set_packing(&sets, universe, DEFAULT_NODE_CAP)?;
        Ok(PackingCertificate {
            mode: Mode::Vertex,
            members: chosen.into_iter().map(|i| ws[i].clone()).collect(),
        })
    }
}

/// Caller-supplied bound of the parameter in terms of the packing number.
#[derive(Clone)]
pub struct Ceiling {
    f: Arc<dyn Fn(usize) -> usize + Send + Sync>,
    pub note: String,
}

impl fmt::Debug for Ceiling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ceiling({})", self.note)
    }
}

impl Ceiling {
    pub fn new(note: impl Into<String>, f: impl Fn(usize) -> usize + Send + Sync + 'static) -> Self {
        Ceiling {
            f: Arc::new(f),
            note: note.into(),
        }
    }

    pub fn eval(&self, k: usize) -> usize {
        (self.f)(k)
    }

    /// Checks monotonicity and f(x) + f(y) ≤ f(x + y) for 1 ≤ x, y with
    /// x + y ≤ `upto`.
    pub fn check(&self, upto: usize) -> Result<()> {
        for x in 0..upto {
            if self.eval(x) > self.eval(x + 1) {
                return Err(EpError::InvalidParameter(format!("ceiling decreases at {x}")));
            }
        }
        for x in 1..upto {
            for y in x..=upto - x {
                if self.eval(x) + self.eval(y) > self.eval(x + y) {
                    return Err(EpError::InvalidParameter(format!("ceiling not superadditive at ({x}, {y})")));
                }
            }
        }
        Ok(())
    }
}

/// Treewidth in terms of the cycle packing number: a forest has width at
/// most 1, and otherwise tw ≤ fvs + 1 ≤ 2k(2⌈log2(k+1)⌉ + 2) + 1.
pub fn cycle_tw_ceiling() -> Ceiling {
    Ceiling::new("tw <= fvs + 1 with fvs <= 2k(2 ceil(log2(k+1)) + 2)", |k| {
        if k == 0 {
            1
        } else {
            2 * k * (2 * ceil_log2(k + 1) + 2) + 1
        }
    })
}

fn ceil_log2(x: usize) -> usize {
    (usize::BITS - x.saturating_sub(1).leading_zeros()) as usize
}

/// 6 f(k) log2(k + 1), rounded down.
pub fn connected_gap(ceiling: &Ceiling, k: usize) -> usize {
    (6.0 * ceiling.eval(k) as f64 * ((k + 1) as f64).log2()).floor() as usize
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedCover {
    pub cover: CoverCertificate,
    /// Exact packing number of the host.
    pub pack: usize,
    pub bound: usize,
    pub within_bound: bool,
    /// Largest decomposition width used in the recursion.
    pub max_width: usize,
}

/// Vertex cover for a connected pattern family on a host whose treewidth
/// is bounded by `ceiling` in terms of its packing number. Splits along
/// balanced separations and keeps every separator.
///
/// `td` seeds the top-level decomposition; deeper levels restrict it and
/// keep whichever of the restriction and a fresh decomposition is
/// narrower.
pub fn cover_connected_bounded_tw(
    g: &MultiGraph,
    det: &dyn PatternDetector,
    pack: &PackOracle,
    ceiling: &Ceiling,
    td: Option<&TreeDecomposition>,
) -> Result<BoundedCover> {
    if !det.connected_patterns() {
        return Err(EpError::PreconditionViolated(format!(
            "detector {} has disconnected patterns",
            det.name()
        )));
    }
    fn rec(
        h: &MultiGraph,
        seed: Option<&TreeDecomposition>,
        pack: &PackOracle,
        ceiling: &Ceiling,
    ) -> Result<(BTreeSet<VertexId>, usize)> {
        let p = pack(h)?.len();
        if p == 0 {
            return Ok((BTreeSet::new(), 0));
        }
        let mut td = best_effort_td(h);
        if let Some(s) = seed {
            let r = s.restrict(&h.vertex_set());
            if r.width() < td.width() {
                td = r;
            }
        }
        let w = td.width();
        // on hosts above EXACT_TW_LIMIT the width is a min-fill upper bound
        if w > ceiling.eval(p) {
            return Err(EpError::CeilingViolated {
                observed: w,
                pack: p,
                ceiling: ceiling.eval(p),
            });
        }
        let ntd = to_nice(h, &td)?;
        let sep = balanced_separation(h, &ntd, pack)?;
        let (ga, gb) = (h.induced(&sep.a_only()), h.induced(&sep.b_only()));
        let (ra, rb) = rayon::join(|| rec(&ga, Some(&td), pack, ceiling), || rec(&gb, Some(&td), pack, ceiling));
        let ((ca, wa), (cb, wb)) = (ra?, rb?);
        let mut cover = sep.separator();
        cover.extend(ca);
        cover.extend(cb);
        Ok((cover, w.max(wa).max(wb)))
    }
    if let Some(td) = td {
        super::validate_td(g, td).map_err(|v| EpError::InvalidDecomposition(v.to_string()))?;
    }
    let k = pack(g)?.len();
    let (elements, max_width) = rec(g, td, pack, ceiling)?;
    let cover = CoverCertificate {
        mode: Mode::Vertex,
        elements,
    };
    verify_cover(g, det, &cover).map_err(|v| EpError::OracleFailure(format!("cover does not verify: {v}")))?;
    let bound = connected_gap(ceiling, k);
    Ok(BoundedCover {
        within_bound: cover.len() <= bound,
        cover,
        pack: k,
        bound,
        max_width,
    })
}

/// Packing of `k` vertex-disjoint unions of one witness per component
/// detector, or a vertex cover assembled from bags.
///
/// Each witness F is traced to the decomposition nodes whose bags meet
/// it. If every family of traces has kq disjoint members the traces are
/// selected disjointly; otherwise a Gallai cover of the deficient family
/// picks the bags to delete.
pub fn disconnected_pattern_ep(
    g: &MultiGraph,
    td: &TreeDecomposition,
    components: &[&dyn PatternDetector],
    k: usize,
) -> Result<EpOutcome> {
    let q = components.len();
    if q == 0 || k == 0 {
        return Err(EpError::InvalidParameter("need at least one component and k >= 1".into()));
    }
    super::validate_td(g, td).map_err(|v| EpError::InvalidDecomposition(v.to_string()))?;
    let mut families: Vec<Vec<BTreeSet<usize>>> = Vec::with_capacity(q);
    let mut witnesses: Vec<Vec<PatternWitness>> = Vec::with_capacity(q);
    for det in components {
        let mut by_trace: BTreeMap<BTreeSet<usize>, PatternWitness> = BTreeMap::new();
        for w in det.enumerate(g, DEFAULT_COPY_CAP)? {
            let trace = td.trace(&w.vertices);
            if !td.tree.is_connected_set(&trace) {
                return Err(EpError::PreconditionViolated(format!(
                    "witness trace of {} is disconnected",
                    det.name()
                )));
            }
            by_trace.entry(trace).or_insert(w);
        }
        let (ts, ws) = by_trace.into_iter().unzip();
        families.push(ts);
        witnesses.push(ws);
    }
    let mut packs = Vec::with_capacity(q);
    for fam in &families {
        packs.push(gallai(&SubtreeFamily::new(td.tree.clone(), fam.clone())?)?);
    }
    let max_bag = td.max_bag();
    let narrow_bound = td.width().saturating_sub(1) * (k * q - 1);
    if let Some(i) = packs.iter().position(|(p, _)| p.len() < k * q) {
        let x = &packs[i].1.elements;
        let y: BTreeSet<VertexId> = x.iter().flat_map(|t| td.bags[t].iter().copied()).collect();
        let bound = max_bag * x.len();
        let mut notes = vec![format!(
            "component {i} has {} disjoint traces < kq = {}; |X| = {}, |Y| = {}",
            packs[i].0.len(),
            k * q,
            x.len(),
            y.len()
        )];
        if y.len() > narrow_bound {
            notes.push(format!("|Y| exceeds (w-1)(kq-1) = {narrow_bound}"));
        }
        return Ok(EpOutcome {
            certificate: Certificate::Cover(CoverCertificate {
                mode: Mode::Vertex,
                elements: y.clone(),
            }),
            quality: QualityReport {
                bound_claimed: max_bag * (k * q - 1),
                hypotheses_held: y.len() <= bound,
                notes,
            },
        });
    }
    let sel = rs_selection(&td.tree, &families, k, DEFAULT_SELECTION_CAP)?
        .ok_or_else(|| EpError::OracleFailure("no disjoint selection although every family packs kq".into()))?;
    let members = (0..k)
        .map(|j| {
            (0..q)
                .map(|i| witnesses[i][sel[i][j]].clone())
                .reduce(|a, b| a.union(&b))
                .expect("q >= 1")
        })
        .collect();
    Ok(EpOutcome {
        certificate: Certificate::Packing(PackingCertificate {
            mode: Mode::Vertex,
            members,
        }),
        quality: QualityReport {
            bound_claimed: max_bag * (k * q - 1),
            hypotheses_held: true,
            notes: vec![],
        },
    })
}

/// Solver for hosts whose parameter is at most a fixed value.
pub trait BoundedSolver: Send + Sync {
    /// Packing of `k` patterns or a cover.
    fn solve(&self, g: &MultiGraph, k: usize) -> Result<EpOutcome>;
    /// Cover size guaranteed when no packing of `k` is returned.
    fn gap(&self, k: usize) -> usize;
}

/// Connected patterns on bounded-treewidth hosts via
/// `cover_connected_bounded_tw`.
#[derive(Clone)]
pub struct TwCoverSolver {
    pub det: Arc<dyn PatternDetector>,
    pub pack: Arc<PackOracle>,
    pub ceiling: Ceiling,
}

impl TwCoverSolver {
    pub fn cycles(ceiling: Ceiling) -> Self {
        TwCoverSolver {
            det: Arc::new(crate::certificates::CycleDetector),
            pack: Arc::new(cycle_vpack_oracle()),
            ceiling,
        }
    }
}

impl BoundedSolver for TwCoverSolver {
    fn solve(&self, g: &MultiGraph, k: usize) -> Result<EpOutcome> {
        let p = (self.pack)(g)?;
        if k > 0 && p.len() >= k {
            return Ok(EpOutcome {
                certificate: Certificate::Packing(PackingCertificate {
                    mode: Mode::Vertex,
                    members: p.members.into_iter().take(k).collect(),
                }),
                quality: QualityReport {
                    bound_claimed: self.gap(k),
                    hypotheses_held: true,
                    notes: vec![],
                },
            });
        }
        let c = cover_connected_bounded_tw(g, self.det.as_ref(), self.pack.as_ref(), &self.ceiling, None)?;
        Ok(EpOutcome {
            certificate: Certificate::Cover(c.cover),
            quality: QualityReport {
                bound_claimed: self.gap(k),
                hypotheses_held: c.within_bound,
                notes: vec![format!("exact pack {}, widest decomposition {}", c.pack, c.max_width)],
            },
        })
    }

    fn gap(&self, k: usize) -> usize {
        connected_gap(&self.ceiling, k)
    }
}

/// Parameter estimate: value and whether it is exact.
pub type ParameterEstimate = dyn Fn(&MultiGraph) -> Option<(usize, bool)> + Send + Sync;

/// Treewidth estimate: exact up to `EXACT_TW_LIMIT` vertices, min-fill
/// upper bound beyond.
pub fn treewidth_estimate(g: &MultiGraph) -> Option<(usize, bool)> {
    match exact_treewidth(g) {
        Ok((w, _)) => Some((w, true)),
        Err(_) => Some((min_fill_td(g).width(), false)),
    }
}

/// General solver assembled from bounded-parameter solvers and a ceiling.
pub struct Composed {
    pub ceiling: Ceiling,
    pub family: Box<dyn Fn(usize) -> Box<dyn BoundedSolver> + Send + Sync>,
    pub estimate: Box<ParameterEstimate>,
}

/// Combines `solver_family(r)`, correct when the parameter is at most r,
/// into a solver for every host whose parameter is bounded by the ceiling.
pub fn compose_ep(
    ceiling: Ceiling,
    solver_family: impl Fn(usize) -> Box<dyn BoundedSolver> + Send + Sync + 'static,
    estimate: impl Fn(&MultiGraph) -> Option<(usize, bool)> + Send + Sync + 'static,
) -> Composed {
    Composed {
        ceiling,
        family: Box::new(solver_family),
        estimate: Box::new(estimate),
    }
}

impl Composed {
    /// Packing of `k` or a cover bounded by h_{f(k)}(k).
    ///
    /// If pack(G) < k then the parameter is at most f(k - 1) ≤ f(k), so
    /// the solver for f(k) is sound. A larger estimate falls back to the
    /// solver for the estimate. A returned cover of size c bounds pack by
    /// c, so an exact parameter above f(c) refutes the ceiling.
    pub fn solve(&self, g: &MultiGraph, k: usize) -> Result<EpOutcome> {
        let (p, exact) = (self.estimate)(g)
            .ok_or_else(|| EpError::ParameterEstimateUnavailable("estimator returned nothing".into()))?;
        let r = self.ceiling.eval(k);
        let solver = (self.family)(r.max(p));
        let mut out = solver.solve(g, k)?;
        if let Certificate::Cover(c) = &out.certificate {
            if exact && p > self.ceiling.eval(c.len()) {
                return Err(EpError::CeilingViolated {
                    observed: p,
                    pack: c.len(),
                    ceiling: self.ceiling.eval(c.len()),
                });
            }
        }
        out.quality.bound_claimed = solver.gap(k);
        out.quality.notes.push(format!(
            "parameter {} {p}, f({k}) = {r}",
            if exact { "=" } else { "<=" }
        ));
        if p > r {
            out.quality.notes.push("parameter estimate exceeds f(k)".into());
        }
        Ok(out)
    }
}

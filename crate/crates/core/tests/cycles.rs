mod common;

use std::collections::BTreeSet;

use common::*;
use ep_core::certificates::{verify_cover, verify_packing, CycleDetector, FixedSubgraphDetector, PatternDetector};
use ep_core::certificates::{CoverCertificate, PackingCertificate, PatternWitness, Violation};
use ep_core::cycles::*;
use ep_core::graph::{named, Mode, MultiGraph};
use ep_core::random::Rng;
use proptest::prelude::*;

fn host(seed: u64, max_n: usize) -> MultiGraph {
    let mut rng = Rng::new(seed);
    let n = rng.range(1, max_n);
    let p = (0.5 + 3.0 * rng.unit()) / n as f64;
    let extra = rng.below(4);
    random_multigraph(&mut rng, n, p.min(1.0), extra)
}

fn forest_after(g: &MultiGraph, mode: Mode, xs: &BTreeSet<usize>) -> bool {
    let (n, es, _) = dense(&g.without(mode, xs));
    is_forest(n, &es)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn ep_cycles_certificates_verify(seed in any::<u64>(), k in 1usize..5, edge in any::<bool>()) {
        let g = host(seed, 40);
        let mode = if edge { Mode::Edge } else { Mode::Vertex };
        let out = ep_cycles(&g, k, mode, DEFAULT_C).unwrap();
        prop_assert_eq!(out.verify(&g, &CycleDetector), Ok(()));
        if let Some(c) = out.cover() {
            prop_assert!(forest_after(&g, mode, &c.elements));
            if out.quality.hypotheses_held {
                let bound = (4.0 * ((3 * k) as f64).log2()).ceil() as usize * k;
                prop_assert!(c.len() <= bound);
            }
        }
    }

    #[test]
    fn reduction_keeps_cycle_structure(seed in any::<u64>()) {
        let g = host(seed, 25);
        let (r, trace) = reduce_low_degree(&g);
        let (n, es, _) = dense(&g);
        let (rn, res, _) = dense(&r);
        prop_assert_eq!(is_forest(n, &es), is_forest(rn, &res));
        let rank = |h: &MultiGraph| h.edge_count() + h.component_count() - h.vertex_count();
        prop_assert_eq!(rank(&g), rank(&r));
        prop_assert_eq!(trace.replay(&g).unwrap(), r.clone());
        for v in r.vertices() {
            prop_assert!(r.degree(v) >= 3 || r.neighbors(v).len() == 1);
        }
    }

    #[test]
    fn classify_agrees_with_forest_check(seed in any::<u64>(), q in 2usize..10) {
        let g = host(seed, 25);
        let (r, _) = reduce_low_degree(&g);
        let (n, es, _) = dense(&g);
        match classify(&r, q, DEFAULT_C).unwrap() {
            Trichotomy::Forest => prop_assert!(is_forest(n, &es)),
            Trichotomy::ShortCycle { cycle, .. } => {
                prop_assert!(cycle.len() <= girth_threshold(q, DEFAULT_C));
                prop_assert!(r.contains_cycle(&cycle));
            }
            Trichotomy::GirthCertificate { girth, .. } => prop_assert!(girth > girth_threshold(q, DEFAULT_C)),
            Trichotomy::LowDegreeVertex { .. } => prop_assert!(!is_forest(n, &es)),
        }
    }

    #[test]
    fn cover_verdict_matches_forest_check(seed in any::<u64>(), mask in any::<u64>(), edge in any::<bool>()) {
        let g = host(seed, 12);
        let mode = if edge { Mode::Edge } else { Mode::Vertex };
        let universe: Vec<usize> = match mode {
            Mode::Vertex => g.vertices().collect(),
            Mode::Edge => g.edges().map(|(e, _, _)| e).collect(),
        };
        let xs: BTreeSet<usize> = universe.iter().enumerate().filter(|(i, _)| mask >> (i % 64) & 1 == 1).map(|(_, &x)| x).collect();
        let cert = CoverCertificate { mode, elements: xs.clone() };
        prop_assert_eq!(verify_cover(&g, &CycleDetector, &cert).is_ok(), forest_after(&g, mode, &xs));
    }

    #[test]
    fn detectors_agree_with_brute_force(seed in any::<u64>()) {
        let g = host(seed, 10);
        let (n, es, _) = dense(&g);
        prop_assert_eq!(CycleDetector.find(&g).unwrap().is_some(), !is_forest(n, &es));
        let tri = FixedSubgraphDetector::triangle();
        prop_assert_eq!(tri.find(&g).unwrap().is_some(), !triangles(n, &es).is_empty());
        if let Some(w) = CycleDetector.minimal(&g).unwrap() {
            prop_assert_eq!(w.vertices.len(), w.edges.len());
            prop_assert!(CycleDetector.accepts(&g, &w).unwrap());
        }
    }
}

#[test]
fn packing_violations_are_reported() {
    let g = named::theta(3);
    let path = PatternWitness::new([0, 1].into(), [0].into());
    let c01 = PatternWitness::new([0, 1].into(), [0, 1].into());
    let c12 = PatternWitness::new([0, 1].into(), [1, 2].into());
    let p = |members: Vec<PatternWitness>, mode| PackingCertificate { mode, members };
    assert!(matches!(
        verify_packing(&g, &CycleDetector, &p(vec![c01.clone(), c12.clone()], Mode::Edge)),
        Err(Violation::Overlap { .. })
    ));
    assert_eq!(verify_packing(&g, &CycleDetector, &p(vec![c01.clone()], Mode::Edge)), Ok(()));
    assert!(matches!(
        verify_packing(&g, &CycleDetector, &p(vec![path], Mode::Vertex)),
        Err(Violation::NotAWitness { member: 0 })
    ));
    let bogus = PatternWitness::new([0, 7].into(), [].into());
    assert!(matches!(
        verify_packing(&g, &CycleDetector, &p(vec![bogus], Mode::Vertex)),
        Err(Violation::UnknownVertex { vertex: 7, .. })
    ));
}

#[test]
fn cover_lifts_differ_only_in_size() {
    // a long cycle hanging off a triangle
    let mut g = named::cycle(3);
    let mut prev = 0;
    for _ in 0..6 {
        let v = g.add_vertex();
        g.add_edge(prev, v).unwrap();
        prev = v;
    }
    g.add_edge(prev, 1).unwrap();
    for lift in [CoverLift::Expanded, CoverLift::Reduced] {
        let out = ep_cycles_with(&g, 3, Mode::Vertex, CycleOptions { c: DEFAULT_C, lift }).unwrap();
        assert_eq!(out.verify(&g, &CycleDetector), Ok(()));
        assert!(out.cover().is_some());
    }
}

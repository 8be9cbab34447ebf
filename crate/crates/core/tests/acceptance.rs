//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints one PASS/FAIL line; exits non-zero if any fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::Instant;

use common::*;
use ep_core::bench::{fuzz_jones, fuzz_tuza, tuza_trial};
use ep_core::certificates::{verify_cover, verify_packing, CycleDetector, FixedSubgraphDetector};
use ep_core::cycles::{ep_cycles, DEFAULT_C};
use ep_core::decomp::{balanced_separation, cover_connected_bounded_tw, cycle_tw_ceiling, cycle_vpack_oracle};
use ep_core::decomp::{exact_treewidth, to_nice};
use ep_core::error::EpError;
use ep_core::gadgets::{route_avoiding, thicken};
use ep_core::graph::{named, Mode, MultiGraph};
use ep_core::io;
use ep_core::oracles::*;
use ep_core::random::{gnp, planar_stacked, random_subtree, random_tree, subtree_family, Rng};
use ep_core::tree_partition::{tp_edge_cover, tp_width, validate_tp};
use ep_core::trees::{gallai, rs_hypothesis, rs_selection, DEFAULT_SELECTION_CAP};

type Check = fn() -> Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        if !$cond {
            return Err(format!($($fmt)+));
        }
    };
}

fn ok<T>(r: ep_core::error::Result<T>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

fn k3() -> MultiGraph {
    named::complete(3)
}

fn duality(g: &MultiGraph) -> Result<(), String> {
    let b = Budget::default();
    let vp = ok(exact_vpack_cycles_with(g, b), "vpack")?.value;
    let vc = ok(exact_vcover_cycles_with(g, b), "vcover")?.value;
    let ep = ok(exact_epack_cycles_with(g, b), "epack")?.value;
    let ec = exact_ecover_cycles(g).value;
    let tp = ok(exact_pack_subgraph(g, &k3(), Mode::Edge, b), "triangle pack")?.value;
    let tc = ok(exact_cover_subgraph(g, &k3(), Mode::Edge, b), "triangle cover")?.value;
    ensure!(
        vp <= vc && ep <= ec && tp <= tc,
        "pack > cover on {}: v {vp}/{vc}, e {ep}/{ec}, triangles {tp}/{tc}",
        io::write_gr(g)
    );
    Ok(())
}

fn c1_duality() -> Result<String, String> {
    let mut count = 0;
    for g in graphs_up_to(7) {
        duality(&g)?;
        count += 1;
    }
    for i in 0..1000 {
        let mut rng = Rng::derived(101, i);
        let n = rng.range(1, 12);
        let p = 0.1 + 0.4 * rng.unit();
        let extra = rng.below(4);
        duality(&random_multigraph(&mut rng, n, p, extra))?;
    }
    Ok(format!("{count} graphs on <= 7 vertices, 1000 random multigraphs on <= 12"))
}

fn c2_anchors() -> Result<String, String> {
    let b = Budget::default();
    for (name, g, want) in [
        ("K4", named::complete(4), (1, 2)),
        ("K5", named::complete(5), (1, 3)),
        ("Petersen", named::petersen(), (2, 3)),
    ] {
        let got = (
            ok(exact_vpack_cycles(&g), "vpack")?.value,
            ok(exact_vcover_cycles(&g), "vcover")?.value,
        );
        ensure!(got == want, "{name}: cycle (v-pack, v-cover) {got:?}, expected {want:?}");
        ensure!(got == (brute_vpack(&g), brute_vcover(&g)), "{name}: brute force disagrees");
    }
    let mut checked = 0;
    let mut closed_form = |g: &MultiGraph| -> Result<(), String> {
        let formula = g.edge_count() + g.component_count() - g.vertex_count();
        let value = exact_ecover_cycles(g).value;
        ensure!(
            value == formula && value == brute_ecover(g),
            "e-cover {value}, m-n+c {formula} on {}",
            io::write_gr(g)
        );
        checked += 1;
        Ok(())
    };
    for g in graphs_up_to(7).iter().filter(|g| g.edge_count() <= 12) {
        closed_form(g)?;
    }
    for i in 0..500 {
        let mut rng = Rng::derived(102, i);
        let n = rng.range(1, 10);
        let extra = rng.below(4);
        let g = random_multigraph(&mut rng, n, 0.3, extra);
        let keep: BTreeSet<usize> = g.edges().map(|(e, _, _)| e).take(12).collect();
        let drop: Vec<usize> = g.edges().map(|(e, _, _)| e).filter(|e| !keep.contains(e)).collect();
        closed_form(&g.without_edges(&drop))?;
    }
    let k5 = ok(exact_epack_cycles(&named::complete(5)), "epack")?.value;
    ensure!(k5 == 3 && brute_epack(&named::complete(5)) == 3, "e-pack(K5) = {k5}");
    let k4 = named::complete(4);
    let tri = (
        ok(exact_pack_subgraph(&k4, &k3(), Mode::Edge, b), "triangle pack")?.value,
        ok(exact_cover_subgraph(&k4, &k3(), Mode::Edge, b), "triangle cover")?.value,
    );
    ensure!(tri == (1, 2), "triangles on K4: {tri:?}");
    Ok(format!("K4, K5, Petersen, e-pack(K5) = 3, K4 triangles (1, 2), closed form on {checked} graphs"))
}

fn c3_ep_cycles() -> Result<String, String> {
    let mut covers = 0;
    for i in 0..1000u64 {
        let mut rng = Rng::derived(103, i);
        let n = rng.range(2, 60);
        let g = match i % 3 {
            0 => gnp(n, ((0.5 + 2.5 * rng.unit()) / n as f64).min(1.0), &mut rng).unwrap(),
            1 => {
                let del = rng.below(3 * n);
                planar_stacked(n, del, &mut rng).unwrap()
            }
            _ => {
                let extra = rng.below(5);
                random_multigraph(&mut rng, n, 1.5 / n as f64, extra)
            }
        };
        let k = rng.range(1, 6);
        let mode = if rng.coin(0.5) { Mode::Vertex } else { Mode::Edge };
        let out = ok(ep_cycles(&g, k, mode, DEFAULT_C), "ep_cycles")?;
        out.verify(&g, &CycleDetector).map_err(|v| format!("instance {i}: {v}"))?;
        if let Some(c) = out.cover() {
            covers += 1;
            let bound = (4.0 * ((3 * k) as f64).log2()).ceil() as usize * k;
            ensure!(
                !out.quality.hypotheses_held || c.len() <= bound,
                "instance {i}: cover {} above {bound}",
                c.len()
            );
        }
    }
    Ok(format!("1000 instances verified, {covers} covers within bound"))
}

fn c4_gallai() -> Result<String, String> {
    for i in 0..500 {
        let mut rng = Rng::derived(104, i);
        let n = rng.range(1, 12);
        let members = rng.range(0, 10);
        let fam = ok(subtree_family(n, members, 5, &mut rng), "family")?;
        let (p, c) = ok(gallai(&fam), "gallai")?;
        let best = (brute_subtree_pack(&fam.members), brute_subtree_cover(n, &fam.members));
        ensure!(
            p.len() == c.len() && (p.len(), c.len()) == best,
            "family {i}: gallai ({}, {}), optimum {best:?}",
            p.len(),
            c.len()
        );
    }
    Ok("500 families optimal, |packing| = |cover|".into())
}

fn c5_selection() -> Result<String, String> {
    let mut found = 0;
    let mut attempt = 0u64;
    while found < 500 {
        attempt += 1;
        ensure!(attempt < 20_000, "only {found} hypothesis instances generated");
        let mut rng = Rng::derived(105, attempt);
        let (k, q) = (rng.range(1, 3), rng.range(1, 3));
        let tree = random_tree(rng.range(k * q, 3 * k * q + 6), &mut rng);
        let families: Vec<Vec<BTreeSet<usize>>> = (0..q)
            .map(|_| {
                let size = rng.range(k * q, k * q + 6);
                (0..size).map(|_| {
                    let s = rng.range(1, 3);
                    random_subtree(&tree, s, &mut rng)
                }).collect()
            })
            .collect();
        if !ok(rs_hypothesis(&tree, &families, k), "hypothesis")? {
            continue;
        }
        found += 1;
        let sel = ok(rs_selection(&tree, &families, k, DEFAULT_SELECTION_CAP), "selection")?
            .ok_or(format!("instance {attempt}: no selection"))?;
        let mut used = BTreeSet::new();
        for (f, picks) in sel.iter().enumerate() {
            ensure!(picks.len() == k, "instance {attempt}: family {f} got {} members", picks.len());
            for &m in picks {
                for &v in &families[f][m] {
                    ensure!(used.insert(v), "instance {attempt}: vertex {v} reused");
                }
            }
        }
    }
    Ok(format!("500 hypothesis instances (of {attempt} drawn) all selected"))
}

fn c6_separation() -> Result<String, String> {
    let oracle = cycle_vpack_oracle();
    for i in 0..200 {
        let mut rng = Rng::derived(106, i);
        let n = rng.range(1, 14);
        let w = rng.range(1, 4);
        let keep = 0.5 + 0.5 * rng.unit();
        let g = partial_ktree(&mut rng, n, w, keep);
        let (tw, td) = ok(exact_treewidth(&g), "treewidth")?;
        let ntd = ok(to_nice(&g, &td), "nice")?;
        let sep = ok(balanced_separation(&g, &ntd, &oracle), "separation")?;
        ensure!(sep.is_separation_of(&g), "instance {i}: not a separation");
        ensure!(sep.order() <= tw + 1, "instance {i}: order {} > tw + 1 = {}", sep.order(), tw + 1);
        let k = brute_vpack(&g);
        for side in [sep.a_only(), sep.b_only()] {
            let p = brute_vpack(&g.induced(&side));
            ensure!(3 * p <= 2 * k, "instance {i}: side packs {p} of {k}");
        }
    }
    Ok("200 instances, order <= tw + 1, sides <= 2k/3".into())
}

fn c7_connected_cover() -> Result<String, String> {
    let ceiling = cycle_tw_ceiling();
    let oracle = cycle_vpack_oracle();
    let (mut within, mut violated) = (0, 0);
    for i in 0..100 {
        let mut rng = Rng::derived(107, i);
        let n = rng.range(4, 40);
        let w = rng.range(1, 3);
        let g = partial_ktree(&mut rng, n, w, 0.7);
        match cover_connected_bounded_tw(&g, &CycleDetector, &oracle, &ceiling, None) {
            Ok(c) => {
                verify_cover(&g, &CycleDetector, &c.cover).map_err(|v| format!("instance {i}: {v}"))?;
                let k = c.pack;
                let bound = (6.0 * ceiling.eval(k) as f64 * ((k + 1) as f64).log2()).floor() as usize;
                ensure!(c.cover.len() <= bound, "instance {i}: cover {} above {bound}", c.cover.len());
                within += 1;
            }
            Err(EpError::CeilingViolated { .. }) => violated += 1,
            Err(e) => return Err(format!("instance {i}: {e}")),
        }
    }
    Ok(format!("{within} covers within 6 f(k) log2(k+1), {violated} ceiling violations surfaced"))
}

fn c8_tree_partition() -> Result<String, String> {
    let mut covers = 0;
    for i in 0..100 {
        let mut rng = Rng::derived(108, i);
        let nodes = rng.range(1, 8);
        let (g, tp) = tree_partitioned(&mut rng, nodes, 3, 0.45);
        validate_tp(&g, &tp).map_err(|v| format!("instance {i}: {v}"))?;
        let r = tp_width(&g, &tp);
        let k = rng.range(1, 4);
        let out = ok(tp_edge_cover(&g, &tp, &CycleDetector, k), "tp cover")?;
        out.verify(&g, &CycleDetector).map_err(|v| format!("instance {i}: {v}"))?;
        if let Some(c) = out.cover() {
            covers += 1;
            ensure!(c.len() <= k * (r + 2 * r * r), "instance {i}: cover {} above k(r + 2r^2)", c.len());
        }
    }
    Ok(format!("100 hosts verified, {covers} covers within k(r + 2r^2)"))
}

fn c9_greedy() -> Result<String, String> {
    let patterns = [("k2", named::complete(2)), ("path3", named::path(3)), ("k3", named::complete(3))];
    for i in 0..500 {
        let mut rng = Rng::derived(109, i);
        let (name, h) = &patterns[rng.below(3)];
        let n = rng.range(1, 14);
        let extra = rng.below(3);
        let p = 0.1 + 0.4 * rng.unit();
        let g = random_multigraph(&mut rng, n, p, extra);
        let mode = if rng.coin(0.5) { Mode::Vertex } else { Mode::Edge };
        let det = FixedSubgraphDetector::new(*name, h.clone());
        let (p, c) = ok(greedy_subgraph_ep(&g, h, mode), "greedy")?;
        verify_packing(&g, &det, &p).map_err(|v| format!("instance {i}: {v}"))?;
        verify_cover(&g, &det, &c).map_err(|v| format!("instance {i}: {v}"))?;
        let ax = match mode {
            Mode::Vertex => h.vertex_count(),
            Mode::Edge => h.edge_count(),
        };
        ensure!(c.len() <= p.len() * ax, "instance {i}: cover {} > {} * {ax}", c.len(), p.len());
    }
    Ok("500 (G, H) pairs, |cover| <= |packing| |A_x(H)|".into())
}

fn c10_gadgets() -> Result<String, String> {
    let two = ok(thicken(&named::complete(5), 2), "thicken k=2")?;
    let k5 = named::complete(5);
    let mut routed = 0;
    for v in two.graph.vertices() {
        let x = BTreeSet::from([v]);
        let m = ok(route_avoiding(&two, &x), "route")?;
        m.verify(&two.graph, &k5).map_err(|e| format!("X = {{{v}}}: {e}"))?;
        ensure!(!m.vertices().contains(&v), "X = {{{v}}}: model uses X");
        routed += 1;
    }
    let three = ok(thicken(&named::complete(5), 3), "thicken k=3")?;
    let vs: Vec<usize> = three.graph.vertices().collect();
    let mut rng = Rng::new(110);
    for _ in 0..200 {
        let a = vs[rng.below(vs.len())];
        let mut b = a;
        while b == a {
            b = vs[rng.below(vs.len())];
        }
        let x = BTreeSet::from([a, b]);
        let m = ok(route_avoiding(&three, &x), "route")?;
        m.verify(&three.graph, &k5).map_err(|e| format!("X = {x:?}: {e}"))?;
        ensure!(m.vertices().is_disjoint(&x), "X = {x:?}: model uses X");
    }
    Ok(format!(
        "k=2: all {routed} single deletions; k=3 ({} vertices): 200 sampled pairs",
        three.graph.vertex_count()
    ))
}

fn c11_fuzzers() -> Result<String, String> {
    let tuza = ok(fuzz_tuza(1000, 10, 111, Budget::default()), "fuzz_tuza")?;
    let jones = ok(fuzz_jones(500, 12, 111, Budget::default()), "fuzz_jones")?;
    for r in [&tuza, &jones] {
        ensure!(r.violations.is_empty(), "{}: violations at {:?}", r.conjecture, r.violations);
        ensure!(r.max_ratio <= 2.0, "{}: max ratio {}", r.conjecture, r.max_ratio);
    }
    let k4 = ok(tuza_trial(0, &named::complete(4), Budget::default()), "K4")?;
    ensure!(k4.ratio == 2.0, "K4 Tuza ratio {}", k4.ratio);
    Ok(format!(
        "tuza max ratio {}, jones max ratio {}, K4 ratio 2",
        tuza.max_ratio, jones.max_ratio
    ))
}

fn c12_round_trips() -> Result<String, String> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus");
    let mut files: Vec<_> = std::fs::read_dir(&dir).map_err(|e| e.to_string())?.map(|e| e.unwrap().path()).collect();
    files.sort();
    let n_of = |t: &str| -> usize { t.lines().next().unwrap().split_whitespace().last().unwrap().parse().unwrap() };
    let mut counts = [0usize; 4];
    for path in &files {
        let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
        let again = match ext {
            "gr" => {
                counts[0] += 1;
                io::write_gr(&ok(io::read_gr(&text), "gr")?)
            }
            "td" => {
                counts[1] += 1;
                io::write_td(&ok(io::read_td(&text), "td")?, n_of(&text))
            }
            "tp" => {
                counts[2] += 1;
                io::write_tp(&ok(io::read_tp(&text), "tp")?, n_of(&text))
            }
            "json" => {
                counts[3] += 1;
                if text.contains("bound_claimed") {
                    io::write_outcome(&ok(io::read_outcome(&text), "outcome")?)
                } else {
                    io::write_certificate(&ok(io::read_certificate(&text), "certificate")?)
                }
            }
            _ => continue,
        };
        ensure!(again == text, "{} changed on rewrite", path.display());
    }
    ensure!(counts.iter().all(|&c| c > 0), "corpus lacks a format: {counts:?}");
    Ok(format!(
        "{} .gr, {} .td, {} tree-partition, {} certificate files byte-identical",
        counts[0], counts[1], counts[2], counts[3]
    ))
}

fn main() {
    let criteria: [(&str, Check); 12] = [
        ("duality inequality", c1_duality),
        ("exact anchors", c2_anchors),
        ("ep_cycles soundness", c3_ep_cycles),
        ("subtree packing min-max", c4_gallai),
        ("disjoint selection", c5_selection),
        ("balanced separation", c6_separation),
        ("connected cover bound", c7_connected_cover),
        ("tree-partition cover bound", c8_tree_partition),
        ("greedy subgraph bound", c9_greedy),
        ("gadget routing", c10_gadgets),
        ("conjecture fuzzers", c11_fuzzers),
        ("format round-trips", c12_round_trips),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS {:>2} {name} ({secs:.1}s): {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

//! Brute-force reference oracles. These share no code with the library's
//! solvers beyond the graph type.
#![allow(dead_code)]

use std::collections::BTreeSet;

use ep_core::graph::{EdgeId, MultiGraph, VertexId};

/// Union-find forest test: m == n - components.
pub fn is_forest(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut p: Vec<usize> = (0..n).collect();
    fn root(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &(a, b) in edges {
        let (ra, rb) = (root(&mut p, a), root(&mut p, b));
        if ra == rb {
            return false;
        }
        p[ra] = rb;
    }
    true
}

/// Dense copy of `g`: vertices relabelled 0..n, edges in id order.
pub fn dense(g: &MultiGraph) -> (usize, Vec<(usize, usize)>, Vec<EdgeId>) {
    let vs: Vec<VertexId> = g.vertices().collect();
    let pos = |v: VertexId| vs.iter().position(|&x| x == v).unwrap();
    let mut es = Vec::new();
    let mut ids = Vec::new();
    for (e, a, b) in g.edges() {
        es.push((pos(a), pos(b)));
        ids.push(e);
    }
    (vs.len(), es, ids)
}

/// Every cycle as (vertex bitmask, edge-index bitmask), edge level.
pub fn all_cycles(n: usize, edges: &[(usize, usize)]) -> Vec<(u64, u128)> {
    let mut out = Vec::new();
    // 2-cycles
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            let (a, b) = edges[i];
            let (c, d) = edges[j];
            if (a == c && b == d) || (a == d && b == c) {
                out.push(((1u64 << a) | (1u64 << b), (1u128 << i) | (1u128 << j)));
            }
        }
    }
    // longer cycles: start at their smallest vertex, first edge index below last
    fn walk(
        edges: &[(usize, usize)],
        start: usize,
        cur: usize,
        vmask: u64,
        emask: u128,
        len: usize,
        first: usize,
        out: &mut Vec<(u64, u128)>,
    ) {
        for (i, &(a, b)) in edges.iter().enumerate() {
            if emask >> i & 1 == 1 {
                continue;
            }
            let next = if a == cur {
                b
            } else if b == cur {
                a
            } else {
                continue;
            };
            if next == start && len >= 2 {
                if first < i {
                    out.push((vmask, emask | 1u128 << i));
                }
            } else if next > start && vmask >> next & 1 == 0 {
                let f = if len == 0 { i } else { first };
                walk(edges, start, next, vmask | 1 << next, emask | 1u128 << i, len + 1, f, out);
            }
        }
    }
    for s in 0..n {
        walk(edges, s, s, 1 << s, 0, 0, usize::MAX, &mut out);
    }
    out
}

fn max_disjoint<T: Copy + std::ops::BitAnd<Output = T> + PartialEq + Default + std::ops::BitOr<Output = T>>(
    sets: &[T],
    i: usize,
    used: T,
) -> usize {
    if i == sets.len() {
        return 0;
    }
    let skip = max_disjoint(sets, i + 1, used);
    if sets[i] & used == T::default() {
        skip.max(1 + max_disjoint(sets, i + 1, used | sets[i]))
    } else {
        skip
    }
}

pub fn brute_vpack(g: &MultiGraph) -> usize {
    let (n, es, _) = dense(g);
    let mut vs: Vec<u64> = all_cycles(n, &es).into_iter().map(|c| c.0).collect();
    vs.sort_unstable();
    vs.dedup();
    max_disjoint(&vs, 0, 0)
}

pub fn brute_epack(g: &MultiGraph) -> usize {
    let (n, es, _) = dense(g);
    let cs: Vec<u128> = all_cycles(n, &es).into_iter().map(|c| c.1).collect();
    // best(mask) = max(best(mask - low), 1 + best(mask - c)) over cycles c ⊆ mask through low
    fn best(mask: u128, cs: &[u128], memo: &mut std::collections::HashMap<u128, usize>) -> usize {
        if mask == 0 {
            return 0;
        }
        if let Some(&v) = memo.get(&mask) {
            return v;
        }
        let low = mask & mask.wrapping_neg();
        let mut v = best(mask & !low, cs, memo);
        for &c in cs {
            if c & low != 0 && c & !mask == 0 {
                v = v.max(1 + best(mask & !c, cs, memo));
            }
        }
        memo.insert(mask, v);
        v
    }
    let full = if es.len() == 128 { !0 } else { (1u128 << es.len()) - 1 };
    best(full, &cs, &mut std::collections::HashMap::new())
}

/// Smallest vertex set whose removal leaves a forest.
pub fn brute_vcover(g: &MultiGraph) -> usize {
    let (n, es, _) = dense(g);
    (0u32..1 << n)
        .filter(|&s| {
            let rest: Vec<(usize, usize)> =
                es.iter().copied().filter(|&(a, b)| s >> a & 1 == 0 && s >> b & 1 == 0).collect();
            is_forest(n, &rest)
        })
        .map(|s| s.count_ones() as usize)
        .min()
        .unwrap()
}

/// Smallest edge set whose removal leaves a forest.
pub fn brute_ecover(g: &MultiGraph) -> usize {
    let (n, es, _) = dense(g);
    let m = es.len();
    assert!(m <= 20);
    (0u32..1 << m)
        .filter(|&s| {
            let rest: Vec<(usize, usize)> =
                es.iter().enumerate().filter(|(i, _)| s >> i & 1 == 0).map(|(_, e)| *e).collect();
            is_forest(n, &rest)
        })
        .map(|s| s.count_ones() as usize)
        .min()
        .unwrap()
}

/// Triangles as edge-index bitmasks (every choice of parallel edges).
pub fn triangles(n: usize, es: &[(usize, usize)]) -> Vec<u128> {
    let mut out = Vec::new();
    let between = |a: usize, b: usize| -> Vec<usize> {
        es.iter()
            .enumerate()
            .filter(|(_, &(x, y))| (x == a && y == b) || (x == b && y == a))
            .map(|(i, _)| i)
            .collect()
    };
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for &i in &between(a, b) {
                    for &j in &between(b, c) {
                        for &k in &between(a, c) {
                            out.push(1u128 << i | 1u128 << j | 1u128 << k);
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn brute_triangle_epack(g: &MultiGraph) -> usize {
    let (n, es, _) = dense(g);
    max_disjoint(&triangles(n, &es), 0, 0)
}

/// Smallest edge set meeting every triangle.
pub fn brute_triangle_ecover(g: &MultiGraph) -> usize {
    let (n, es, _) = dense(g);
    let ts = triangles(n, &es);
    if ts.is_empty() {
        return 0;
    }
    let m = es.len();
    for size in 1..=m {
        let mut found = false;
        combos(m, size, &mut |s: u128| {
            if ts.iter().all(|t| t & s != 0) {
                found = true;
            }
            found
        });
        if found {
            return size;
        }
    }
    unreachable!()
}

/// Calls `f` on every `k`-subset of `0..m` as a bitmask until it returns true.
pub fn combos(m: usize, k: usize, f: &mut dyn FnMut(u128) -> bool) {
    fn rec(start: usize, m: usize, k: usize, acc: u128, f: &mut dyn FnMut(u128) -> bool) -> bool {
        if k == 0 {
            return f(acc);
        }
        for i in start..m {
            if m - i < k {
                break;
            }
            if rec(i + 1, m, k - 1, acc | 1u128 << i, f) {
                return true;
            }
        }
        false
    }
    rec(0, m, k, 0, f);
}

/// Adjacency bitmask rows of a simple graph on `n` vertices.
fn canonical(n: usize, adj: &[u8]) -> Vec<u8> {
    // permutations that order vertices by nonincreasing degree
    let deg: Vec<u32> = adj.iter().map(|r| r.count_ones()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(deg[v]));
    let mut best: Option<Vec<u8>> = None;
    let mut perm = vec![0usize; n];
    let mut used = vec![false; n];
    fn rec(
        pos: usize,
        n: usize,
        adj: &[u8],
        deg: &[u32],
        order: &[usize],
        perm: &mut Vec<usize>,
        used: &mut Vec<bool>,
        best: &mut Option<Vec<u8>>,
    ) {
        if pos == n {
            // code: row i lists new-label neighbours of the vertex labelled i
            let mut inv = vec![0usize; n];
            for (new, &old) in perm.iter().enumerate() {
                inv[old] = new;
            }
            let code: Vec<u8> = (0..n)
                .map(|new| {
                    let old = perm[new];
                    (0..n).filter(|&w| adj[old] >> w & 1 == 1).fold(0u8, |m, w| m | 1 << inv[w])
                })
                .collect();
            if best.as_ref().is_none_or(|b| code < *b) {
                *best = Some(code);
            }
            return;
        }
        let want = deg[order[pos]];
        for v in 0..n {
            if !used[v] && deg[v] == want {
                used[v] = true;
                perm[pos] = v;
                rec(pos + 1, n, adj, deg, order, perm, used, best);
                used[v] = false;
            }
        }
    }
    rec(0, n, adj, &deg, &order, &mut perm, &mut used, &mut best);
    best.unwrap()
}

/// All simple graphs on exactly `n` vertices up to isomorphism (n ≤ 7).
pub fn nonisomorphic_graphs(n: usize) -> Vec<MultiGraph> {
    assert!(n <= 7);
    let mut level: BTreeSet<Vec<u8>> = BTreeSet::from([vec![]]);
    for k in 1..=n {
        let mut next = BTreeSet::new();
        for g in &level {
            for nb in 0u8..(1u16 << (k - 1)) as u8 {
                let mut adj = g.clone();
                for (v, row) in adj.iter_mut().enumerate() {
                    if nb >> v & 1 == 1 {
                        *row |= 1 << (k - 1);
                    }
                }
                adj.push(nb);
                next.insert(canonical(k, &adj));
            }
        }
        level = next;
    }
    level
        .into_iter()
        .map(|adj| {
            let mut edges = Vec::new();
            for u in 0..n {
                for w in u + 1..n {
                    if adj[u] >> w & 1 == 1 {
                        edges.push((u, w));
                    }
                }
            }
            MultiGraph::from_edges(n, &edges).unwrap()
        })
        .collect()
}

/// All simple graphs on at most `n` vertices up to isomorphism.
pub fn graphs_up_to(n: usize) -> Vec<MultiGraph> {
    (1..=n).flat_map(nonisomorphic_graphs).collect()
}

/// Random multigraph: G(n, p) plus a few parallel copies of existing edges.
pub fn random_multigraph(rng: &mut ep_core::random::Rng, n: usize, p: f64, extra: usize) -> MultiGraph {
    let mut g = ep_core::random::gnp(n, p, rng).unwrap();
    for _ in 0..extra {
        let es: Vec<(EdgeId, VertexId, VertexId)> = g.edges().collect();
        if es.is_empty() {
            break;
        }
        let (_, a, b) = es[rng.below(es.len())];
        g.add_edge(a, b).unwrap();
    }
    g
}

/// Host built along a random tree of `nodes` bags: edges only inside a
/// bag or between adjacent bags, some doubled.
pub fn tree_partitioned(
    rng: &mut ep_core::random::Rng,
    nodes: usize,
    max_bag: usize,
    p: f64,
) -> (MultiGraph, ep_core::tree_partition::TreePartition) {
    let tree = ep_core::random::random_tree(nodes, rng);
    let mut bags = Vec::new();
    let mut next = 0;
    for _ in 0..nodes {
        let size = rng.range(1, max_bag);
        bags.push((next..next + size).collect::<std::collections::BTreeSet<usize>>());
        next += size;
    }
    let mut g = MultiGraph::with_vertices(next);
    let mut pairs: Vec<(usize, usize)> = (0..nodes).map(|t| (t, t)).collect();
    pairs.extend(tree.edges().map(|(_, a, b)| (a, b)));
    for (s, t) in pairs {
        for &u in &bags[s] {
            for &w in &bags[t] {
                if (s != t || u < w) && rng.coin(p) {
                    g.add_edge(u, w).unwrap();
                    if rng.coin(0.15) {
                        g.add_edge(u, w).unwrap();
                    }
                }
            }
        }
    }
    let edges: Vec<(usize, usize)> = tree.edges().map(|(_, a, b)| (a, b)).collect();
    let root = rng.below(nodes);
    (g, ep_core::tree_partition::TreePartition::from_bags(bags, &edges, root).unwrap())
}

fn vertex_mask(m: &BTreeSet<usize>) -> u32 {
    m.iter().fold(0, |acc, v| acc | 1 << v)
}

/// Largest set of pairwise disjoint members, over all member subsets.
pub fn brute_subtree_pack(members: &[BTreeSet<usize>]) -> usize {
    let ms: Vec<u32> = members.iter().map(vertex_mask).collect();
    (0u32..1 << ms.len())
        .filter(|s| {
            let mut used = 0;
            (0..ms.len()).filter(|i| s >> i & 1 == 1).all(|i| {
                let ok = used & ms[i] == 0;
                used |= ms[i];
                ok
            })
        })
        .map(|s| s.count_ones() as usize)
        .max()
        .unwrap()
}

/// Smallest vertex set of `0..n` meeting every member.
pub fn brute_subtree_cover(n: usize, members: &[BTreeSet<usize>]) -> usize {
    let ms: Vec<u32> = members.iter().map(vertex_mask).collect();
    (0u32..1 << n)
        .filter(|x| ms.iter().all(|m| m & x != 0))
        .map(|x| x.count_ones() as usize)
        .min()
        .unwrap()
}

/// Random `w`-tree on `n` vertices with each edge kept with probability
/// `keep`; treewidth at most `w`.
pub fn partial_ktree(rng: &mut ep_core::random::Rng, n: usize, w: usize, keep: f64) -> MultiGraph {
    let mut g = MultiGraph::with_vertices(n);
    let base = n.min(w + 1);
    let mut cliques: Vec<Vec<usize>> = vec![(0..base).collect()];
    let mut edges = Vec::new();
    for a in 0..base {
        for b in a + 1..base {
            edges.push((a, b));
        }
    }
    for v in base..n {
        let c = cliques[rng.below(cliques.len())].clone();
        // attach to a w-subset of a (w+1)-clique
        let skip = if c.len() > w { rng.below(c.len()) } else { usize::MAX };
        let nbrs: Vec<usize> = c.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &u)| u).collect();
        for &u in &nbrs {
            edges.push((u, v));
        }
        let mut next = nbrs;
        next.push(v);
        cliques.push(next);
    }
    for (a, b) in edges {
        if rng.coin(keep) {
            g.add_edge(a, b).unwrap();
        }
    }
    g
}

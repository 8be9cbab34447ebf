//! Exact desk-scale solvers for cycle and fixed-subgraph packing and
//! covering, plus the greedy subgraph duality.

use std::collections::{BTreeSet, HashMap};

use fixedbitset::FixedBitSet;

use crate::certificates::{
    Certificate, CoverCertificate, FixedSubgraphDetector, PackingCertificate, PatternDetector, PatternWitness,
};
use crate::error::{EpError, Result};
use crate::graph::{Cycle, EdgeId, Mode, MultiGraph, VertexId};
use crate::iso;

/// Default search-node cap for the branch-and-bound solvers.
pub const DEFAULT_NODE_CAP: u64 = 10_000_000;
/// Default cap on enumerated pattern copies.
pub const DEFAULT_COPY_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactResult {
    pub value: usize,
    pub witness: Certificate,
    pub explored: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub nodes: u64,
    pub copies: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            nodes: DEFAULT_NODE_CAP,
            copies: DEFAULT_COPY_CAP,
        }
    }
}

struct Counter {
    explored: u64,
    cap: u64,
}

impl Counter {
    fn new(cap: u64) -> Self {
        Counter { explored: 0, cap }
    }

    fn tick(&mut self) -> Result<()> {
        self.explored += 1;
        if self.explored > self.cap {
            return Err(EpError::BudgetExceeded {
                what: "branch-and-bound nodes",
                limit: self.cap,
            });
        }
        Ok(())
    }
}

type Mask = u128;

fn bits(mut m: Mask) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

/// The graph on dense indices `0..n` with adjacency bitmasks.
struct Dense<'a> {
    g: &'a MultiGraph,
    ids: Vec<VertexId>,
    adj: Vec<Mask>,
    mult: Vec<Vec<usize>>,
}

impl<'a> Dense<'a> {
    fn new(g: &'a MultiGraph) -> Result<Self> {
        let ids: Vec<VertexId> = g.vertices().collect();
        if ids.len() > 128 {
            return Err(EpError::InvalidParameter(format!(
                "exact vertex oracles take at most 128 vertices, got {}",
                ids.len()
            )));
        }
        let idx: HashMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let n = ids.len();
        let mut adj = vec![0; n];
        let mut mult = vec![vec![0; n]; n];
        for (_, a, b) in g.edges() {
            let (i, j) = (idx[&a], idx[&b]);
            adj[i] |= 1 << j;
            adj[j] |= 1 << i;
            mult[i][j] += 1;
            mult[j][i] += 1;
        }
        Ok(Dense { g, ids, adj, mult })
    }

    fn full(&self) -> Mask {
        if self.ids.len() == 128 {
            !0
        } else {
            (1 << self.ids.len()) - 1
        }
    }

    fn degree(&self, v: usize, mask: Mask) -> usize {
        bits(self.adj[v] & mask).map(|w| self.mult[v][w]).sum()
    }

    /// Repeatedly drops vertices of degree at most 1.
    fn prune(&self, mut mask: Mask) -> Mask {
        loop {
            let low = bits(mask).find(|&v| self.degree(v, mask) <= 1);
            match low {
                Some(v) => mask &= !(1 << v),
                None => return mask,
            }
        }
    }

    fn shortest_cycle(&self, mask: Mask) -> Option<Vec<usize>> {
        for u in bits(mask) {
            for w in bits(self.adj[u] & mask) {
                if w > u && self.mult[u][w] >= 2 {
                    return Some(vec![u, w]);
                }
            }
        }
        let mut best: Option<Vec<usize>> = None;
        for u in bits(mask) {
            for w in bits(self.adj[u] & mask) {
                if w <= u {
                    continue;
                }
                // shortest u-w path avoiding the edge uw
                let mut prev = vec![usize::MAX; self.ids.len()];
                prev[u] = u;
                let mut queue = std::collections::VecDeque::from([u]);
                'bfs: while let Some(x) = queue.pop_front() {
                    for y in bits(self.adj[x] & mask) {
                        if x == u && y == w {
                            continue;
                        }
                        if prev[y] == usize::MAX {
                            prev[y] = x;
                            if y == w {
                                break 'bfs;
                            }
                            queue.push_back(y);
                        }
                    }
                }
                if prev[w] == usize::MAX {
                    continue;
                }
                let mut path = vec![w];
                while *path.last().unwrap() != u {
                    path.push(prev[*path.last().unwrap()]);
                }
                if best.as_ref().is_none_or(|b| path.len() < b.len()) {
                    best = Some(path);
                }
            }
        }
        best
    }

    /// Chordless cycles through `s` inside `mask`, plus 2-cycles at `s`.
    fn chordless_through(&self, s: usize, mask: Mask, out: &mut Vec<Vec<usize>>) {
        for w in bits(self.adj[s] & mask) {
            if self.mult[s][w] >= 2 {
                out.push(vec![s, w]);
            }
        }
        let mut path = vec![s];
        self.chordless_extend(mask, &mut path, 1 << s, out);
    }

    fn chordless_extend(&self, mask: Mask, path: &mut Vec<usize>, on: Mask, out: &mut Vec<Vec<usize>>) {
        let s = path[0];
        let last = *path.last().unwrap();
        let interior: Mask = path.get(1..path.len().saturating_sub(1)).unwrap_or(&[]).iter().fold(0, |m, &v| m | 1 << v);
        for w in bits(self.adj[last] & mask & !on) {
            if self.adj[w] & interior != 0 {
                continue;
            }
            if path.len() >= 2 && self.adj[w] >> s & 1 == 1 {
                if path[1] < w {
                    let mut c = path.clone();
                    c.push(w);
                    out.push(c);
                }
                continue;
            }
            path.push(w);
            self.chordless_extend(mask, path, on | 1 << w, out);
            path.pop();
        }
    }

    fn to_cycle(&self, c: &[usize]) -> Cycle {
        let vs: Vec<VertexId> = c.iter().map(|&i| self.ids[i]).collect();
        if vs.len() == 2 {
            let par = self.g.edges_between(vs[0], vs[1]);
            return Cycle::new(vs, vec![par[0], par[1]]);
        }
        let n = vs.len();
        let es = (0..n).map(|i| self.g.edges_between(vs[i], vs[(i + 1) % n])[0]).collect();
        Cycle::new(vs, es)
    }
}

struct VPack<'a> {
    d: Dense<'a>,
    memo: HashMap<Mask, usize>,
    counter: Counter,
}

impl VPack<'_> {
    fn solve(&mut self, mask: Mask) -> Result<usize> {
        let mask = self.d.prune(mask);
        if mask == 0 {
            return Ok(0);
        }
        if let Some(&v) = self.memo.get(&mask) {
            return Ok(v);
        }
        self.counter.tick()?;
        let Some(c) = self.d.shortest_cycle(mask) else {
            self.memo.insert(mask, 0);
            return Ok(0);
        };
        // some maximum packing has a cycle meeting c; choose the first
        // vertex of c it uses, and a chordless such cycle
        let mut best = 0;
        let mut allowed = mask;
        let ub = (mask.count_ones() as usize) / c.len();
        'outer: for &v in &c {
            let mut ds = Vec::new();
            self.d.chordless_through(v, allowed, &mut ds);
            for dcyc in ds {
                let dm: Mask = dcyc.iter().fold(0, |m, &x| m | 1 << x);
                let val = 1 + self.solve(allowed & !dm)?;
                if val > best {
                    best = val;
                    if best >= ub {
                        break 'outer;
                    }
                }
            }
            allowed &= !(1 << v);
        }
        self.memo.insert(mask, best);
        Ok(best)
    }
}

/// Maximum number of vertex-disjoint cycles.
pub fn exact_vpack_cycles(g: &MultiGraph) -> Result<ExactResult> {
    exact_vpack_cycles_with(g, Budget::default())
}

pub fn exact_vpack_cycles_with(g: &MultiGraph, budget: Budget) -> Result<ExactResult> {
    let d = Dense::new(g)?;
    let full = d.full();
    let mut s = VPack {
        d,
        memo: HashMap::new(),
        counter: Counter::new(budget.nodes),
    };
    let value = s.solve(full)?;
    let members = vpack_witness(&mut s, full, value)?;
    Ok(ExactResult {
        value,
        witness: Certificate::Packing(PackingCertificate {
            mode: Mode::Vertex,
            members: members.iter().map(PatternWitness::from_cycle).collect(),
        }),
        explored: s.counter.explored,
    })
}

/// Rebuilds a packing of the memoised optimum by re-walking the branches.
fn vpack_witness(s: &mut VPack<'_>, mask: Mask, value: usize) -> Result<Vec<Cycle>> {
    let mut out = Vec::new();
    let mut mask = mask;
    let mut need = value;
    while need > 0 {
        mask = s.d.prune(mask);
        let c = s.d.shortest_cycle(mask).expect("positive value implies a cycle");
        let mut allowed = mask;
        let mut next = None;
        'outer: for &v in &c {
            let mut ds = Vec::new();
            s.d.chordless_through(v, allowed, &mut ds);
            for dcyc in ds {
                let dm: Mask = dcyc.iter().fold(0, |m, &x| m | 1 << x);
                if 1 + s.solve(allowed & !dm)? == need {
                    next = Some((dcyc, allowed & !dm));
                    break 'outer;
                }
            }
            allowed &= !(1 << v);
        }
        let (dcyc, rest) = next.expect("memoised optimum is realised by some branch");
        out.push(s.d.to_cycle(&dcyc));
        mask = rest;
        need -= 1;
    }
    Ok(out)
}

/// Minimum feedback vertex set.
pub fn exact_vcover_cycles(g: &MultiGraph) -> Result<ExactResult> {
    exact_vcover_cycles_with(g, Budget::default())
}

pub fn exact_vcover_cycles_with(g: &MultiGraph, budget: Budget) -> Result<ExactResult> {
    let d = Dense::new(g)?;
    let mut memo: HashMap<Mask, (usize, usize)> = HashMap::new();
    let mut counter = Counter::new(budget.nodes);

    fn fvs(d: &Dense<'_>, mask: Mask, memo: &mut HashMap<Mask, (usize, usize)>, counter: &mut Counter) -> Result<usize> {
        let mask = d.prune(mask);
        if mask == 0 {
            return Ok(0);
        }
        if let Some(&(v, _)) = memo.get(&mask) {
            return Ok(v);
        }
        counter.tick()?;
        let c = d.shortest_cycle(mask).expect("pruned nonempty graph has a cycle");
        let mut best = (usize::MAX, 0);
        for &v in &c {
            let val = 1 + fvs(d, mask & !(1 << v), memo, counter)?;
            if val < best.0 {
                best = (val, v);
                if val == 1 {
                    break;
                }
            }
        }
        memo.insert(mask, best);
        Ok(best.0)
    }

    let value = fvs(&d, d.full(), &mut memo, &mut counter)?;
    let mut elements = BTreeSet::new();
    let mut mask = d.prune(d.full());
    while mask != 0 {
        let (_, v) = memo[&mask];
        elements.insert(d.ids[v]);
        mask = d.prune(mask & !(1 << v));
    }
    debug_assert_eq!(elements.len(), value);
    Ok(ExactResult {
        value,
        witness: Certificate::Cover(CoverCertificate {
            mode: Mode::Vertex,
            elements,
        }),
        explored: counter.explored,
    })
}

/// Minimum edge set meeting every cycle: the edges outside a spanning
/// forest, `m - n + c` of them.
pub fn exact_ecover_cycles(g: &MultiGraph) -> ExactResult {
    let forest = g.spanning_forest();
    let elements: BTreeSet<EdgeId> = g.edge_set().difference(&forest).copied().collect();
    ExactResult {
        value: elements.len(),
        witness: Certificate::Cover(CoverCertificate {
            mode: Mode::Edge,
            elements,
        }),
        explored: 0,
    }
}

struct EPack {
    ends: Vec<(usize, usize)>,
    ids: Vec<EdgeId>,
    vids: Vec<VertexId>,
    n: usize,
    best: usize,
    best_set: Vec<Vec<usize>>,
    stack: Vec<Vec<usize>>,
    counter: Counter,
}

impl EPack {
    fn incidence(&self, mask: Mask) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for e in bits(mask) {
            let (a, b) = self.ends[e];
            inc[a].push(e);
            inc[b].push(e);
        }
        inc
    }

    /// Drops edges at vertices of degree at most 1.
    fn prune(&self, mut mask: Mask) -> Mask {
        loop {
            let inc = self.incidence(mask);
            let mut changed = false;
            for es in &inc {
                if es.len() == 1 {
                    mask &= !(1 << es[0]);
                    changed = true;
                }
            }
            if !changed {
                return mask;
            }
        }
    }

    fn cyclomatic(&self, mask: Mask) -> usize {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            let mut y = x;
            while p[y] != r {
                let nx = p[y];
                p[y] = r;
                y = nx;
            }
            r
        }
        let mut extra = 0;
        for e in bits(mask) {
            let (a, b) = self.ends[e];
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            if ra == rb {
                extra += 1;
            } else {
                parent[ra] = rb;
            }
        }
        extra
    }

    /// All cycles (as edge lists) through edge `e` within `mask`.
    fn cycles_through(&self, e: usize, mask: Mask, cap: usize) -> Result<Vec<Vec<usize>>> {
        let inc = self.incidence(mask & !(1 << e));
        let (u, w) = self.ends[e];
        let mut out = Vec::new();
        let mut path = Vec::new();
        let mut on = vec![false; self.n];
        on[w] = true;
        fn dfs(
            inc: &[Vec<usize>],
            ends: &[(usize, usize)],
            x: usize,
            target: usize,
            on: &mut Vec<bool>,
            path: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
            cap: usize,
        ) -> bool {
            for &f in &inc[x] {
                let (a, b) = ends[f];
                let y = if a == x { b } else { a };
                if y == target {
                    let mut c = path.clone();
                    c.push(f);
                    out.push(c);
                    if out.len() > cap {
                        return false;
                    }
                } else if !on[y] {
                    on[y] = true;
                    path.push(f);
                    let ok = dfs(inc, ends, y, target, on, path, out, cap);
                    path.pop();
                    on[y] = false;
                    if !ok {
                        return false;
                    }
                }
            }
            true
        }
        if !dfs(&inc, &self.ends, w, u, &mut on, &mut path, &mut out, cap) {
            return Err(EpError::BudgetExceeded {
                what: "cycles through an edge",
                limit: cap as u64,
            });
        }
        for c in &mut out {
            c.push(e);
        }
        out.sort_by_key(|c| c.len());
        Ok(out)
    }

    fn search(&mut self, mask: Mask, cap: usize) -> Result<()> {
        self.counter.tick()?;
        let mut mask = self.prune(mask);
        let pushed = self.stack.len();
        // a parallel pair can always be packed as a 2-cycle
        loop {
            let mut pair = None;
            let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
            for e in bits(mask) {
                if let Some(&f) = seen.get(&self.ends[e]) {
                    pair = Some((f, e));
                    break;
                }
                seen.insert(self.ends[e], e);
            }
            match pair {
                Some((f, e)) => {
                    self.stack.push(vec![f, e]);
                    mask = self.prune(mask & !(1 << f) & !(1 << e));
                }
                None => break,
            }
        }
        let depth = self.stack.len();
        if depth > self.best {
            self.best = depth;
            self.best_set = self.stack.clone();
        }
        let ub = self.cyclomatic(mask).min(mask.count_ones() as usize / 3);
        if mask != 0 && depth + ub > self.best {
            let e = bits(mask).next().unwrap();
            for c in self.cycles_through(e, mask, cap)? {
                let cm: Mask = c.iter().fold(0, |m, &x| m | 1 << x);
                self.stack.push(c);
                self.search(mask & !cm, cap)?;
                self.stack.pop();
                if depth + ub <= self.best {
                    break;
                }
            }
            let rest = mask & !(1 << e);
            if depth + self.cyclomatic(rest) > self.best {
                self.search(rest, cap)?;
            }
        }
        self.stack.truncate(pushed);
        Ok(())
    }
}

/// Maximum number of edge-disjoint cycles.
pub fn exact_epack_cycles(g: &MultiGraph) -> Result<ExactResult> {
    exact_epack_cycles_with(g, Budget::default())
}

pub fn exact_epack_cycles_with(g: &MultiGraph, budget: Budget) -> Result<ExactResult> {
    if g.edge_count() > 128 {
        return Err(EpError::InvalidParameter(format!(
            "exact edge packing takes at most 128 edges, got {}",
            g.edge_count()
        )));
    }
    let vids: Vec<VertexId> = g.vertices().collect();
    let vidx: HashMap<VertexId, usize> = vids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let ids: Vec<EdgeId> = g.edges().map(|(e, _, _)| e).collect();
    let ends: Vec<(usize, usize)> = g.edges().map(|(_, a, b)| (vidx[&a], vidx[&b])).collect();
    let m = ids.len();
    let mut s = EPack {
        ends,
        ids,
        n: vids.len(),
        vids,
        best: 0,
        best_set: Vec::new(),
        stack: Vec::new(),
        counter: Counter::new(budget.nodes),
    };
    let full: Mask = if m == 128 { !0 } else { (1 << m) - 1 };
    s.search(full, budget.copies)?;
    let members = s
        .best_set
        .iter()
        .map(|c| {
            let edges: BTreeSet<EdgeId> = c.iter().map(|&i| s.ids[i]).collect();
            let vertices: BTreeSet<VertexId> = c
                .iter()
                .flat_map(|&i| [s.vids[s.ends[i].0], s.vids[s.ends[i].1]])
                .collect();
            PatternWitness::new(vertices, edges)
        })
        .collect::<Vec<_>>();
    Ok(ExactResult {
        value: s.best,
        witness: Certificate::Packing(PackingCertificate {
            mode: Mode::Edge,
            members,
        }),
        explored: s.counter.explored,
    })
}

/// Maximum set packing over `sets` (indices into a universe of `u`
/// elements). Returns the chosen set indices.
pub fn max_set_packing(sets: &[FixedBitSet], u: usize, cap: u64) -> Result<(Vec<usize>, u64)> {
    struct S<'a> {
        sets: &'a [FixedBitSet],
        min_size: usize,
        best: Vec<usize>,
        counter: Counter,
    }
    fn rec(s: &mut S<'_>, alive: &[usize], chosen: &mut Vec<usize>) -> Result<()> {
        s.counter.tick()?;
        if chosen.len() > s.best.len() {
            s.best = chosen.clone();
        }
        if alive.is_empty() {
            return Ok(());
        }
        // elements still coverable, each chosen set takes at least min_size of them
        let mut union = FixedBitSet::with_capacity(s.sets[alive[0]].len());
        for &i in alive {
            union.union_with(&s.sets[i]);
        }
        if chosen.len() + union.count_ones(..) / s.min_size.max(1) <= s.best.len() {
            return Ok(());
        }
        // branch on the element occurring in the fewest alive sets
        let mut count: HashMap<usize, usize> = HashMap::new();
        for &i in alive {
            for x in s.sets[i].ones() {
                *count.entry(x).or_default() += 1;
            }
        }
        let (&x, _) = count.iter().min_by_key(|(x, c)| (**c, **x)).unwrap();
        let with_x: Vec<usize> = alive.iter().copied().filter(|&i| s.sets[i].contains(x)).collect();
        for &i in &with_x {
            let rest: Vec<usize> = alive.iter().copied().filter(|&j| s.sets[i].is_disjoint(&s.sets[j])).collect();
            chosen.push(i);
            rec(s, &rest, chosen)?;
            chosen.pop();
        }
        let rest: Vec<usize> = alive.iter().copied().filter(|&j| !s.sets[j].contains(x)).collect();
        rec(s, &rest, chosen)
    }
    let min_size = sets.iter().map(|s| s.count_ones(..)).min().unwrap_or(1);
    // greedy start: smallest sets first
    let mut order: Vec<usize> = (0..sets.len()).collect();
    order.sort_by_key(|&i| (sets[i].count_ones(..), i));
    let mut used = FixedBitSet::with_capacity(u);
    let mut greedy = Vec::new();
    for i in order {
        if sets[i].is_disjoint(&used) {
            used.union_with(&sets[i]);
            greedy.push(i);
        }
    }
    let mut s = S {
        sets,
        min_size,
        best: greedy,
        counter: Counter::new(cap),
    };
    let alive: Vec<usize> = (0..sets.len()).collect();
    rec(&mut s, &alive, &mut Vec::new())?;
    Ok((s.best, s.counter.explored))
}

/// Minimum hitting set of `sets` over a universe of `u` elements.
pub fn min_hitting_set(sets: &[FixedBitSet], cap: u64) -> Result<(Vec<usize>, u64)> {
    struct S<'a> {
        sets: &'a [FixedBitSet],
        best: Option<Vec<usize>>,
        counter: Counter,
    }
    fn lower_bound(sets: &[FixedBitSet], open: &[usize]) -> usize {
        // disjoint open sets each need their own element
        let mut used = FixedBitSet::with_capacity(sets.first().map_or(0, |s| s.len()));
        let mut lb = 0;
        let mut order = open.to_vec();
        order.sort_by_key(|&i| sets[i].count_ones(..));
        for i in order {
            if sets[i].is_disjoint(&used) {
                used.union_with(&sets[i]);
                lb += 1;
            }
        }
        lb
    }
    fn rec(s: &mut S<'_>, open: &[usize], chosen: &mut Vec<usize>) -> Result<()> {
        s.counter.tick()?;
        if open.is_empty() {
            if s.best.as_ref().is_none_or(|b| chosen.len() < b.len()) {
                s.best = Some(chosen.clone());
            }
            return Ok(());
        }
        if let Some(b) = &s.best {
            if chosen.len() + lower_bound(s.sets, open) >= b.len() {
                return Ok(());
            }
        }
        let &i = open.iter().min_by_key(|&&i| (s.sets[i].count_ones(..), i)).unwrap();
        for x in s.sets[i].ones() {
            let rest: Vec<usize> = open.iter().copied().filter(|&j| !s.sets[j].contains(x)).collect();
            chosen.push(x);
            rec(s, &rest, chosen)?;
            chosen.pop();
        }
        Ok(())
    }
    let mut s = S {
        sets,
        best: None,
        counter: Counter::new(cap),
    };
    let open: Vec<usize> = (0..sets.len()).collect();
    rec(&mut s, &open, &mut Vec::new())?;
    Ok((s.best.unwrap_or_default(), s.counter.explored))
}

/// Copies of `h` in `g` and their `A_x` sets over a dense universe.
fn copy_sets(
    g: &MultiGraph,
    h: &MultiGraph,
    mode: Mode,
    budget: Budget,
) -> Result<(Vec<iso::Copy>, Vec<FixedBitSet>, Vec<usize>)> {
    let copies = iso::enumerate_copies(h, g, mode == Mode::Edge, budget.copies)?;
    let universe: Vec<usize> = match mode {
        Mode::Vertex => g.vertices().collect(),
        Mode::Edge => g.edges().map(|(e, _, _)| e).collect(),
    };
    let idx: HashMap<usize, usize> = universe.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let sets = copies
        .iter()
        .map(|c| {
            let mut b = FixedBitSet::with_capacity(universe.len());
            let els = match mode {
                Mode::Vertex => &c.vertices,
                Mode::Edge => &c.edges,
            };
            for x in els {
                b.insert(idx[x]);
            }
            b
        })
        .collect();
    Ok((copies, sets, universe))
}

fn check_pattern(h: &MultiGraph, mode: Mode) -> Result<()> {
    if h.vertex_count() == 0 || (mode == Mode::Edge && h.edge_count() == 0) {
        return Err(EpError::InvalidParameter("pattern must be non-trivial".into()));
    }
    Ok(())
}

/// Maximum `mode`-disjoint packing of copies of `h`.
pub fn exact_pack_subgraph(g: &MultiGraph, h: &MultiGraph, mode: Mode, budget: Budget) -> Result<ExactResult> {
    check_pattern(h, mode)?;
    let (copies, sets, universe) = copy_sets(g, h, mode, budget)?;
    let (chosen, explored) = max_set_packing(&sets, universe.len(), budget.nodes)?;
    let members = chosen
        .iter()
        .map(|&i| PatternWitness::new(copies[i].vertices.clone(), copies[i].edges.clone()))
        .collect::<Vec<_>>();
    Ok(ExactResult {
        value: members.len(),
        witness: Certificate::Packing(PackingCertificate { mode, members }),
        explored,
    })
}

/// Minimum `mode`-cover of all copies of `h`.
pub fn exact_cover_subgraph(g: &MultiGraph, h: &MultiGraph, mode: Mode, budget: Budget) -> Result<ExactResult> {
    check_pattern(h, mode)?;
    let (_, sets, universe) = copy_sets(g, h, mode, budget)?;
    let (chosen, explored) = min_hitting_set(&sets, budget.nodes)?;
    let elements: BTreeSet<usize> = chosen.iter().map(|&i| universe[i]).collect();
    Ok(ExactResult {
        value: elements.len(),
        witness: Certificate::Cover(CoverCertificate { mode, elements }),
        explored,
    })
}

/// Greedy maximal packing of copies of `h`; the union of their `A_x` sets
/// is a cover of size `|packing| * |A_x(h)|`.
pub fn greedy_subgraph_ep(g: &MultiGraph, h: &MultiGraph, mode: Mode) -> Result<(PackingCertificate, CoverCertificate)> {
    check_pattern(h, mode)?;
    let det = FixedSubgraphDetector::new("pattern", h.clone());
    let mut residue = g.clone();
    let mut members = Vec::new();
    let mut cover = BTreeSet::new();
    while let Some(w) = det.minimal(&residue)? {
        let els = w.elements(mode).clone();
        residue = residue.without(mode, &els);
        cover.extend(els);
        members.push(w);
    }
    Ok((
        PackingCertificate { mode, members },
        CoverCertificate { mode, elements: cover },
    ))
}

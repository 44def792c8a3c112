//! Backtracking colorer for the three class rules (independent, forest, DAG).
//!
//! The next vertex is the uncolored one with the fewest colors still allowed,
//! ties broken by more colored neighbors, larger degree and then smaller id.
//! Each vertex carries a mask of colors that would break its class; the mask
//! is exact because it is refreshed for every uncolored vertex whenever a
//! class grows. Colors are introduced in first-use order. Failures backjump to
//! the deepest assignment that took part in them, and short conflict sets are
//! kept as nogoods. Before searching, vertices that can always be colored last
//! are peeled off and colored greedily afterwards.

use std::cmp::Reverse;
use std::collections::VecDeque;

use super::{Meter, OracleBudget, OracleError, OracleOutcome, OracleTarget, Target, Verdict};
use crate::bits::BitSet;
use crate::graph::{AcyclicColoringCheck, Coloring, Digraph, Graph, Instance};

use serde::{Deserialize, Serialize};

const NONE: usize = usize::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Rule {
    Independent,
    Forest,
    Dag,
}

/// Relabelled subproblem on vertices `keep[0..n]` of the input.
struct Core {
    n: usize,
    words: usize,
    rule: Rule,
    nbrs: Vec<Vec<usize>>,
    degree: Vec<usize>,
    out_rows: Vec<u64>,
    in_rows: Vec<u64>,
}

impl Core {
    fn build(target: Target<'_>, rule: Rule, keep: &[usize]) -> Core {
        let n = keep.len();
        let words = n.div_ceil(64).max(1);
        let total = target.n();
        let mut local = vec![NONE; total];
        for (i, &v) in keep.iter().enumerate() {
            local[v] = i;
        }
        let mut nbrs = vec![Vec::new(); n];
        let mut out_rows = Vec::new();
        let mut in_rows = Vec::new();
        match target {
            Target::Undirected(g) => {
                for (i, &v) in keep.iter().enumerate() {
                    nbrs[i] = g.neighbors(v).iter().map(|&w| local[w]).filter(|&w| w != NONE).collect();
                }
            }
            Target::Directed(d) => {
                out_rows = vec![0u64; n * words];
                in_rows = vec![0u64; n * words];
                for (i, &v) in keep.iter().enumerate() {
                    for &w in d.out_neighbors(v) {
                        let j = local[w];
                        if j != NONE {
                            out_rows[i * words + j / 64] |= 1 << (j % 64);
                            in_rows[j * words + i / 64] |= 1 << (i % 64);
                        }
                    }
                }
                for i in 0..n {
                    let mut list: Vec<usize> = d
                        .out_neighbors(keep[i])
                        .iter()
                        .chain(d.in_neighbors(keep[i]))
                        .map(|&w| local[w])
                        .filter(|&w| w != NONE)
                        .collect();
                    list.sort_unstable();
                    list.dedup();
                    nbrs[i] = list;
                }
            }
        }
        let degree = match target {
            Target::Undirected(_) => nbrs.iter().map(Vec::len).collect(),
            Target::Directed(_) => (0..n)
                .map(|i| {
                    let row = |rows: &[u64]| -> usize {
                        rows[i * words..(i + 1) * words].iter().map(|w| w.count_ones() as usize).sum()
                    };
                    row(&out_rows) + row(&in_rows)
                })
                .collect(),
        };
        Core {
            n,
            words,
            rule,
            nbrs,
            degree,
            out_rows,
            in_rows,
        }
    }

    fn out_row(&self, v: usize) -> &[u64] {
        &self.out_rows[v * self.words..(v + 1) * self.words]
    }

    fn in_row(&self, v: usize) -> &[u64] {
        &self.in_rows[v * self.words..(v + 1) * self.words]
    }
}

struct RollbackDsu {
    parent: Vec<usize>,
    rank: Vec<u8>,
    history: Vec<(usize, usize, bool)>,
}

impl RollbackDsu {
    fn new(n: usize) -> Self {
        RollbackDsu {
            parent: (0..n).collect(),
            rank: vec![0; n],
            history: Vec::new(),
        }
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.rank[ra] < self.rank[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        let bumped = self.rank[ra] == self.rank[rb];
        if bumped {
            self.rank[ra] += 1;
        }
        self.history.push((rb, ra, bumped));
    }

    fn checkpoint(&self) -> usize {
        self.history.len()
    }

    fn rollback(&mut self, cp: usize) {
        while self.history.len() > cp {
            let (child, root, bumped) = self.history.pop().expect("history entry");
            self.parent[child] = child;
            if bumped {
                self.rank[root] -= 1;
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Flow {
    Continue,
    Stop,
    Abort,
}

/// Learned nogoods longer than this are dropped.
const MAX_NOGOOD_LEN: usize = 16;
const MAX_NOGOODS: usize = 200_000;
const STRUCTURAL: u32 = u32::MAX;

#[derive(Clone, Copy)]
struct Watch {
    id: u32,
    vertex: u32,
    color: u32,
}

struct Search<'c, 'm, F> {
    core: &'c Core,
    r: usize,
    symmetry: bool,
    color: Vec<usize>,
    class: Vec<u64>,
    mask: Vec<u64>,
    /// Why color `c` is masked at `u`, at `u * r + c`: a nogood id or `STRUCTURAL`.
    why: Vec<u32>,
    trail: Vec<(usize, u64)>,
    dsu: RollbackDsu,
    assigned: usize,
    used: usize,
    meter: &'m mut Meter,
    on_solution: F,
    reach_back: Vec<u64>,
    reach_fwd: Vec<u64>,
    stack: Vec<usize>,
    /// Conflict set per depth, `words` each.
    conflicts: Vec<u64>,
    solutions: u64,
    /// Colored neighbors of each vertex.
    touched: Vec<usize>,
    /// Learned nogoods as `(vertex, color)` literals, `nogood_at[i]..nogood_at[i + 1]`.
    literals: Vec<(u32, u32)>,
    nogood_at: Vec<usize>,
    /// Nogoods watching each `v * r + c`, with the other watched literal as
    /// a blocker: while it is false the nogood need not be looked at.
    watch: Vec<Vec<Watch>>,
    parent: Vec<usize>,
    origin: Vec<usize>,
    stamp: Vec<u32>,
    epoch: u32,
    queue: Vec<usize>,
    /// Position of each colored vertex in the assignment order.
    order: Vec<usize>,
}

fn low_bits(k: usize) -> u64 {
    if k >= 64 {
        !0
    } else {
        (1u64 << k) - 1
    }
}

impl<'c, 'm, F: FnMut(&[usize]) -> bool> Search<'c, 'm, F> {
    fn new(core: &'c Core, r: usize, symmetry: bool, meter: &'m mut Meter, on_solution: F) -> Self {
        Search {
            core,
            r,
            symmetry,
            color: vec![NONE; core.n],
            class: vec![0; r * core.words],
            mask: vec![0; core.n],
            why: vec![STRUCTURAL; core.n * r],
            trail: Vec::new(),
            dsu: RollbackDsu::new(core.n),
            assigned: 0,
            used: 0,
            meter,
            on_solution,
            reach_back: vec![0; core.words],
            reach_fwd: vec![0; core.words],
            stack: Vec::new(),
            conflicts: vec![0; (core.n + 1) * core.words],
            solutions: 0,
            touched: vec![0; core.n],
            literals: Vec::new(),
            nogood_at: vec![0],
            watch: vec![Vec::new(); core.n * r],
            parent: vec![NONE; core.n],
            origin: vec![NONE; core.n],
            stamp: vec![0; core.n],
            epoch: 0,
            queue: Vec::new(),
            order: vec![0; core.n],
        }
    }

    fn run(&mut self) -> Flow {
        self.descend(0)
    }

    /// Backtracking with conflict-directed backjumping and nogood recording.
    /// On `Continue` the conflict slot for `depth` holds assigned vertices
    /// whose colors alone rule out every completion. A value skipped by the
    /// first-use symmetry shares the conflict set of the fresh color that was
    /// tried for it, so recorded nogoods hold for every coloring.
    fn descend(&mut self, depth: usize) -> Flow {
        let words = self.core.words;
        let slot = depth * words..(depth + 1) * words;
        if self.assigned == self.core.n {
            self.solutions += 1;
            self.mark_assigned(depth);
            return if (self.on_solution)(&self.color) {
                Flow::Continue
            } else {
                Flow::Stop
            };
        }
        let limit = if self.symmetry { (self.used + 1).min(self.r) } else { self.r };
        let allowed = low_bits(limit);
        let mut best: Option<(usize, Reverse<usize>, Reverse<usize>, usize)> = None;
        for u in 0..self.core.n {
            if self.color[u] != NONE {
                continue;
            }
            let cnt = (allowed & !self.mask[u]).count_ones() as usize;
            if cnt == 0 {
                self.conflicts[slot.clone()].fill(0);
                self.explain(u, self.mask[u] & allowed, depth);
                return Flow::Continue;
            }
            let key = (cnt, Reverse(self.touched[u]), Reverse(self.core.degree[u]), u);
            if best.is_none_or(|b| key < b) {
                best = Some(key);
            }
        }
        let v = best.expect("an uncolored vertex").3;
        let (vw, vb) = (v / 64, 1u64 << (v % 64));
        let before = self.solutions;
        self.conflicts[slot.clone()].fill(0);
        self.explain(v, self.mask[v] & allowed, depth);
        let mut choices = allowed & !self.mask[v];
        while choices != 0 {
            let c = choices.trailing_zeros() as usize;
            choices &= choices - 1;
            if !self.meter.tick() {
                return Flow::Abort;
            }
            let trail_len = self.trail.len();
            let cp = self.dsu.checkpoint();
            let used = self.used;
            self.assign(v, c);
            let flow = match self.propagate(v, c) {
                Some(id) => {
                    let child = (depth + 1) * words;
                    self.conflicts[child..child + words].fill(0);
                    for i in self.nogood_at[id]..self.nogood_at[id + 1] {
                        let w = self.literals[i].0 as usize;
                        self.conflicts[child + w / 64] |= 1 << (w % 64);
                    }
                    Flow::Continue
                }
                None => self.descend(depth + 1),
            };
            self.color[v] = NONE;
            for &u in &self.core.nbrs[v] {
                self.touched[u] -= 1;
            }
            self.class[c * words + v / 64] &= !(1 << (v % 64));
            self.assigned -= 1;
            self.used = used;
            self.dsu.rollback(cp);
            while self.trail.len() > trail_len {
                let (u, old) = self.trail.pop().expect("trail entry");
                let mut added = self.mask[u] & !old;
                while added != 0 {
                    self.why[u * self.r + added.trailing_zeros() as usize] = STRUCTURAL;
                    added &= added - 1;
                }
                self.mask[u] = old;
            }
            if flow != Flow::Continue {
                return flow;
            }
            let child = (depth + 1) * words;
            if self.solutions == before && self.conflicts[child + vw] & vb == 0 {
                // v is irrelevant to the failure below: jump over it.
                self.conflicts.copy_within(child..child + words, depth * words);
                return Flow::Continue;
            }
            for w in 0..words {
                self.conflicts[depth * words + w] |= self.conflicts[child + w];
            }
        }
        self.conflicts[depth * words + vw] &= !vb;
        if self.solutions != before {
            self.mark_assigned(depth);
        } else {
            self.learn(depth);
        }
        Flow::Continue
    }

    fn mark_assigned(&mut self, depth: usize) {
        let words = self.core.words;
        for u in 0..self.core.n {
            if self.color[u] != NONE {
                self.conflicts[depth * words + u / 64] |= 1 << (u % 64);
            }
        }
    }

    /// Records the conflict slot as a nogood over the current colors,
    /// watching the two most recently assigned literals.
    fn learn(&mut self, depth: usize) {
        let words = self.core.words;
        let cs = &self.conflicts[depth * words..(depth + 1) * words];
        let len: usize = cs.iter().map(|w| w.count_ones() as usize).sum();
        if len == 0 || len > MAX_NOGOOD_LEN || self.nogood_at.len() > MAX_NOGOODS {
            return;
        }
        let id = (self.nogood_at.len() - 1) as u32;
        let start = self.literals.len();
        for (i, &word) in cs.iter().enumerate() {
            let mut bits = word;
            while bits != 0 {
                let w = i * 64 + bits.trailing_zeros() as usize;
                bits &= bits - 1;
                self.literals.push((w as u32, self.color[w] as u32));
            }
        }
        let order = &self.order;
        self.literals[start..].sort_unstable_by_key(|&(w, _)| Reverse(order[w as usize]));
        let end = self.literals.len();
        let watched = &self.literals[start..(start + 2).min(end)];
        for (k, &(w, c)) in watched.iter().enumerate() {
            let (vertex, color) = watched[watched.len() - 1 - k];
            self.watch[w as usize * self.r + c as usize].push(Watch { id, vertex, color });
        }
        self.nogood_at.push(self.literals.len());
    }

    /// Visits nogoods watching `v = c`, which just became true. Each nogood
    /// watches its first two literals; a watch moves to any literal not yet
    /// true. When none is left, the other watch decides: uncolored masks its
    /// color, true is a conflict, false means the nogood is satisfied.
    fn propagate(&mut self, v: usize, c: usize) -> Option<usize> {
        let key = v * self.r + c;
        let mut list = std::mem::take(&mut self.watch[key]);
        let mut conflict = None;
        let mut i = 0;
        while i < list.len() {
            let Watch { id, vertex, color } = list[i];
            let b = self.color[vertex as usize];
            if b != NONE && b != color as usize {
                i += 1;
                continue;
            }
            let id = id as usize;
            let (lo, hi) = (self.nogood_at[id], self.nogood_at[id + 1]);
            if hi - lo == 1 {
                conflict = Some(id);
                break;
            }
            if self.literals[lo] == (v as u32, c as u32) {
                self.literals.swap(lo, lo + 1);
            }
            let (w, d) = self.literals[lo];
            let other = Watch { id: id as u32, vertex: w, color: d };
            let (w, d) = (w as usize, d as usize);
            if self.color[w] != NONE && self.color[w] != d {
                list[i] = other;
                i += 1;
                continue;
            }
            let moved = (lo + 2..hi).find(|&j| {
                let (x, e) = self.literals[j];
                self.color[x as usize] != e as usize
            });
            if let Some(j) = moved {
                self.literals.swap(lo + 1, j);
                let (x, e) = self.literals[lo + 1];
                self.watch[x as usize * self.r + e as usize].push(other);
                list.swap_remove(i);
                continue;
            }
            list[i] = other;
            if self.color[w] == d {
                conflict = Some(id);
                break;
            }
            if self.mask[w] & (1 << d) == 0 {
                self.forbid(w, d);
                self.why[w * self.r + d] = id as u32;
            }
            i += 1;
        }
        self.watch[key] = list;
        conflict
    }

    /// Adds to the conflict slot, for each color in `colors` that the mask
    /// of uncolored `u` forbids, assigned vertices responsible for it.
    fn explain(&mut self, u: usize, mut colors: u64, depth: usize) {
        let out = depth * self.core.words;
        while colors != 0 {
            let c = colors.trailing_zeros() as usize;
            colors &= colors - 1;
            let id = self.why[u * self.r + c];
            if id != STRUCTURAL {
                let id = id as usize;
                for j in self.nogood_at[id]..self.nogood_at[id + 1] {
                    let w = self.literals[j].0 as usize;
                    if w != u {
                        self.conflicts[out + w / 64] |= 1 << (w % 64);
                    }
                }
                continue;
            }
            match self.core.rule {
                Rule::Independent => {
                    for &w in &self.core.nbrs[u] {
                        if self.color[w] == c {
                            self.conflicts[out + w / 64] |= 1 << (w % 64);
                        }
                    }
                }
                Rule::Forest | Rule::Dag => self.explain_cycle(u, c, out),
            }
        }
    }

    /// Marks one path in class `c` that closes a cycle through `u`: breadth
    /// first from the class neighbors (out-neighbors when directed) of `u`.
    fn explain_cycle(&mut self, u: usize, c: usize, out: usize) {
        let core = self.core;
        self.epoch = self.epoch.wrapping_add(1);
        if self.epoch == 0 {
            self.stamp.fill(0);
            self.epoch = 1;
        }
        let epoch = self.epoch;
        self.queue.clear();
        let directed = core.rule == Rule::Dag;
        let base = c * core.words;
        if directed {
            for i in 0..core.words {
                let mut bits = core.out_row(u)[i] & self.class[base + i];
                while bits != 0 {
                    self.enqueue(i * 64 + bits.trailing_zeros() as usize, NONE, epoch);
                    bits &= bits - 1;
                }
            }
        } else {
            for &w in &core.nbrs[u] {
                if self.color[w] == c {
                    self.enqueue(w, NONE, epoch);
                }
            }
        }
        let mut head = 0;
        let mut meet: Option<(usize, usize)> = None;
        while head < self.queue.len() && meet.is_none() {
            let x = self.queue[head];
            head += 1;
            if directed {
                if bit(core.in_row(u), x) {
                    meet = Some((x, NONE));
                    break;
                }
                for i in 0..core.words {
                    let mut bits = core.out_row(x)[i] & self.class[base + i];
                    while bits != 0 {
                        let y = i * 64 + bits.trailing_zeros() as usize;
                        bits &= bits - 1;
                        if y != u && self.stamp[y] != epoch {
                            self.enqueue(y, x, epoch);
                        }
                    }
                }
                continue;
            }
            for &y in &core.nbrs[x] {
                if y == u || self.color[y] != c {
                    continue;
                }
                if self.stamp[y] == epoch {
                    if self.origin[y] != self.origin[x] && self.parent[x] != y {
                        meet = Some((x, y));
                        break;
                    }
                    continue;
                }
                self.enqueue(y, x, epoch);
            }
        }
        let Some((a, b)) = meet else {
            // Unreachable while masks are exact; fall back to the whole class.
            for w in 0..core.n {
                if self.color[w] == c {
                    self.conflicts[out + w / 64] |= 1 << (w % 64);
                }
            }
            return;
        };
        for mut x in [a, b] {
            while x != NONE {
                self.conflicts[out + x / 64] |= 1 << (x % 64);
                x = self.parent[x];
            }
        }
    }

    fn enqueue(&mut self, y: usize, from: usize, epoch: u32) {
        self.stamp[y] = epoch;
        self.parent[y] = from;
        self.origin[y] = if from == NONE { y } else { self.origin[from] };
        self.queue.push(y);
    }

    fn forbid(&mut self, u: usize, c: usize) {
        let bit = 1u64 << c;
        if self.mask[u] & bit == 0 {
            self.trail.push((u, self.mask[u]));
            self.mask[u] |= bit;
        }
    }

    fn assign(&mut self, v: usize, c: usize) {
        let core = self.core;
        let words = core.words;
        self.color[v] = c;
        self.order[v] = self.assigned;
        for &u in &core.nbrs[v] {
            self.touched[u] += 1;
        }
        self.class[c * words + v / 64] |= 1 << (v % 64);
        self.assigned += 1;
        self.used = self.used.max(c + 1);
        let bit = 1u64 << c;
        match core.rule {
            Rule::Independent => {
                for &u in &core.nbrs[v] {
                    if self.color[u] == NONE {
                        self.forbid(u, c);
                    }
                }
            }
            Rule::Forest => {
                for &u in &core.nbrs[v] {
                    if self.color[u] == c {
                        self.dsu.union(u, v);
                    }
                }
                let root = self.dsu.find(v);
                for u in 0..core.n {
                    if self.color[u] != NONE || self.mask[u] & bit != 0 {
                        continue;
                    }
                    let hits = core.nbrs[u]
                        .iter()
                        .filter(|&&w| self.color[w] == c && self.dsu.find(w) == root)
                        .take(2)
                        .count();
                    if hits >= 2 {
                        self.forbid(u, c);
                    }
                }
            }
            Rule::Dag => {
                // A new cycle through uncolored u must pass through v:
                // u -> (reaches v) ... v ... (reached from v) -> u.
                let class = &self.class[c * words..(c + 1) * words];
                closure(core, v, class, true, &mut self.reach_back, &mut self.stack);
                closure(core, v, class, false, &mut self.reach_fwd, &mut self.stack);
                for u in 0..core.n {
                    if self.color[u] != NONE || self.mask[u] & bit != 0 {
                        continue;
                    }
                    let into = core.out_row(u).iter().zip(&self.reach_back).any(|(a, b)| a & b != 0);
                    if into && core.in_row(u).iter().zip(&self.reach_fwd).any(|(a, b)| a & b != 0) {
                        self.forbid(u, c);
                    }
                }
            }
        }
    }
}

fn bit(row: &[u64], x: usize) -> bool {
    row[x / 64] >> (x % 64) & 1 == 1
}

/// Vertices of `class` that reach `v` (backward) or are reached from it, `v` included.
fn closure(core: &Core, v: usize, class: &[u64], backward: bool, out: &mut [u64], stack: &mut Vec<usize>) {
    out.iter_mut().for_each(|w| *w = 0);
    out[v / 64] |= 1 << (v % 64);
    stack.clear();
    stack.push(v);
    while let Some(x) = stack.pop() {
        let row = if backward { core.in_row(x) } else { core.out_row(x) };
        for w in 0..core.words {
            let mut fresh = row[w] & class[w] & !out[w];
            out[w] |= fresh;
            while fresh != 0 {
                stack.push(w * 64 + fresh.trailing_zeros() as usize);
                fresh &= fresh - 1;
            }
        }
    }
}

/// Vertices removable before search, in removal order, and the rest.
fn peel(target: Target<'_>, rule: Rule, r: usize) -> (Vec<usize>, Vec<usize>) {
    let n = target.n();
    let (mut a, mut b): (Vec<usize>, Vec<usize>) = match target {
        Target::Undirected(g) => {
            let d: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
            (d.clone(), d)
        }
        Target::Directed(d) => ((0..n).map(|v| d.in_degree(v)).collect(), (0..n).map(|v| d.out_degree(v)).collect()),
    };
    let removable = |a: usize, b: usize| match rule {
        Rule::Independent => a < r,
        Rule::Forest => a < 2 * r,
        Rule::Dag => a < r || b < r,
    };
    let mut gone = vec![false; n];
    let mut order = Vec::new();
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| removable(a[v], b[v])).collect();
    let mut queued = vec![false; n];
    for &v in &queue {
        queued[v] = true;
    }
    while let Some(v) = queue.pop_front() {
        gone[v] = true;
        order.push(v);
        let mut affected = Vec::new();
        match target {
            Target::Undirected(g) => {
                for &w in g.neighbors(v) {
                    if !gone[w] {
                        a[w] -= 1;
                        b[w] -= 1;
                        affected.push(w);
                    }
                }
            }
            Target::Directed(d) => {
                for &w in d.out_neighbors(v) {
                    if !gone[w] {
                        a[w] -= 1;
                        affected.push(w);
                    }
                }
                for &w in d.in_neighbors(v) {
                    if !gone[w] {
                        b[w] -= 1;
                        affected.push(w);
                    }
                }
            }
        }
        for w in affected {
            if !queued[w] && removable(a[w], b[w]) {
                queued[w] = true;
                queue.push_back(w);
            }
        }
    }
    let keep = (0..n).filter(|&v| !gone[v]).collect();
    (order, keep)
}

fn fits(target: Target<'_>, rule: Rule, colors: &[usize], v: usize, c: usize) -> bool {
    let n = target.n();
    match (target, rule) {
        (Target::Undirected(g), Rule::Independent) => g.neighbors(v).iter().all(|&w| colors[w] != c),
        _ => {
            let members = BitSet::from_indices(n, (0..n).filter(|&w| w == v || colors[w] == c));
            match target {
                Target::Undirected(g) => g.induces_acyclic(&members),
                Target::Directed(d) => d.induces_acyclic(&members),
            }
        }
    }
}

fn check_colors(r: usize) -> Result<(), OracleError> {
    if r > 64 {
        Err(OracleError::TooManyColors(r))
    } else {
        Ok(())
    }
}

fn decide(target: Target<'_>, rule: Rule, r: usize, budget: &OracleBudget) -> Result<OracleOutcome<Coloring>, OracleError> {
    let mut meter = Meter::new(budget);
    let n = target.n();
    if n == 0 {
        return Ok(meter.finish(Verdict::Yes(Coloring::new(r, Vec::new()).expect("empty coloring"))));
    }
    if r == 0 {
        return Ok(meter.finish(Verdict::No));
    }
    if r >= n {
        let c = Coloring::new(r, (0..n).collect()).expect("distinct colors");
        return Ok(meter.finish(Verdict::Yes(c)));
    }
    check_colors(r)?;
    let (peeled, keep) = peel(target, rule, r);
    let core = Core::build(target, rule, &keep);
    let mut found: Option<Vec<usize>> = None;
    let flow = {
        let mut search = Search::new(&core, r, true, &mut meter, |colors: &[usize]| {
            found = Some(colors.to_vec());
            false
        });
        search.run()
    };
    if flow == Flow::Abort {
        return Ok(meter.finish(Verdict::Inconclusive));
    }
    let Some(core_colors) = found else {
        return Ok(meter.finish(Verdict::No));
    };
    let mut colors = vec![NONE; n];
    for (i, &v) in keep.iter().enumerate() {
        colors[v] = core_colors[i];
    }
    for &v in peeled.iter().rev() {
        let c = (0..r)
            .find(|&c| fits(target, rule, &colors, v, c))
            .expect("peeled vertices always have a free color");
        colors[v] = c;
    }
    let coloring = Coloring::new(r, colors).expect("colors below r").canonical();
    let coloring = Coloring::new(r, coloring.into_colors()).expect("canonical colors below r");
    debug_assert!(valid(target, rule, &coloring));
    Ok(meter.finish(Verdict::Yes(coloring)))
}

fn valid(target: Target<'_>, rule: Rule, c: &Coloring) -> bool {
    match (target, rule) {
        (Target::Undirected(g), Rule::Independent) => g.is_proper_coloring(c).unwrap_or(false),
        (Target::Undirected(g), _) => g.is_acyclic_coloring(c).unwrap_or(false),
        (Target::Directed(d), _) => d.is_acyclic_coloring(c).unwrap_or(false),
    }
}

fn acyclic_rule(target: Target<'_>) -> Rule {
    match target {
        Target::Undirected(_) => Rule::Forest,
        Target::Directed(_) => Rule::Dag,
    }
}

/// Does `g` admit an acyclic `r`-coloring? Graphs need forest classes,
/// digraphs and tournaments need classes without directed cycles.
pub fn decide_acyclic_colorable<T: OracleTarget + ?Sized>(
    g: &T,
    r: usize,
    budget: &OracleBudget,
) -> Result<OracleOutcome<Coloring>, OracleError> {
    let target = g.target();
    decide(target, acyclic_rule(target), r, budget)
}

/// Classical proper coloring.
pub fn decide_proper_colorable(g: &Graph, r: usize, budget: &OracleBudget) -> Result<OracleOutcome<Coloring>, OracleError> {
    decide(Target::Undirected(g), Rule::Independent, r, budget)
}

#[derive(Clone, Debug, PartialEq)]
pub struct NumberOutcome {
    /// `None` when the budget ran out before the value was pinned down.
    pub value: Option<usize>,
    pub witness: Option<Coloring>,
    pub nodes: u64,
    pub seconds: f64,
}

fn least_r(target: Target<'_>, budget: &OracleBudget) -> Result<NumberOutcome, OracleError> {
    let meter = Meter::new(budget);
    let rule = acyclic_rule(target);
    let mut nodes = 0u64;
    let mut remaining = *budget;
    for r in 0..=target.n().min(64) {
        let out = decide(target, rule, r, &remaining)?;
        nodes += out.nodes;
        remaining.node_limit = budget.node_limit.saturating_sub(nodes).max(1);
        remaining.time_limit = meter.remaining().time_limit;
        match out.verdict {
            Verdict::Yes(c) => {
                return Ok(NumberOutcome {
                    value: Some(r),
                    witness: Some(c),
                    nodes,
                    seconds: meter.seconds(),
                })
            }
            Verdict::No => {}
            Verdict::Inconclusive => break,
        }
    }
    Ok(NumberOutcome {
        value: None,
        witness: None,
        nodes,
        seconds: meter.seconds(),
    })
}

pub fn dichromatic_number(g: &Digraph, budget: &OracleBudget) -> Result<NumberOutcome, OracleError> {
    least_r(Target::Directed(g), budget)
}

pub fn vertex_arboricity(g: &Graph, budget: &OracleBudget) -> Result<NumberOutcome, OracleError> {
    least_r(Target::Undirected(g), budget)
}

#[derive(Clone, Debug, PartialEq)]
pub struct EnumerationOutcome {
    pub count: u64,
    /// False if the budget ran out or the visitor asked to stop early.
    pub complete: bool,
    pub nodes: u64,
    pub seconds: f64,
}

/// Which color classes are allowed: independent sets or acyclic sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColoringRule {
    Proper,
    Acyclic,
}

fn with_target<R>(inst: &Instance, rule: ColoringRule, f: impl FnOnce(Target<'_>, Rule) -> R) -> R {
    match rule {
        ColoringRule::Acyclic => {
            let t = inst.target();
            f(t, acyclic_rule(t))
        }
        ColoringRule::Proper => match inst {
            Instance::Graph(g) => f(Target::Undirected(g), Rule::Independent),
            Instance::Digraph(d) => f(Target::Undirected(&d.underlying_graph()), Rule::Independent),
            Instance::Tournament(t) => f(Target::Undirected(&t.as_digraph().underlying_graph()), Rule::Independent),
        },
    }
}

/// [`decide_acyclic_colorable`] or [`decide_proper_colorable`] by rule.
/// Proper coloring of a digraph means proper coloring of its underlying graph.
pub fn decide_colorable(
    inst: &Instance,
    rule: ColoringRule,
    r: usize,
    budget: &OracleBudget,
) -> Result<OracleOutcome<Coloring>, OracleError> {
    with_target(inst, rule, |t, rl| decide(t, rl, r, budget))
}

fn enumerate(
    target: Target<'_>,
    rule: Rule,
    r: usize,
    budget: &OracleBudget,
    visit: &mut dyn FnMut(&Coloring) -> bool,
) -> Result<EnumerationOutcome, OracleError> {
    check_colors(r)?;
    let n = target.n();
    let keep: Vec<usize> = (0..n).collect();
    let core = Core::build(target, rule, &keep);
    let mut meter = Meter::new(budget);
    let mut count = 0u64;
    let flow = if r == 0 && n > 0 {
        Flow::Continue
    } else {
        let mut search = Search::new(&core, r, false, &mut meter, |colors: &[usize]| {
            count += 1;
            visit(&Coloring::new(r, colors.to_vec()).expect("colors below r"))
        });
        search.run()
    };
    Ok(EnumerationOutcome {
        count,
        complete: flow == Flow::Continue,
        nodes: meter.nodes(),
        seconds: meter.seconds(),
    })
}

/// Visits every acyclic `r`-coloring (no symmetry reduction, no peeling).
/// The visitor returns `false` to stop.
pub fn enumerate_acyclic_colorings<T: OracleTarget + ?Sized>(
    g: &T,
    r: usize,
    budget: &OracleBudget,
    mut visit: impl FnMut(&Coloring) -> bool,
) -> Result<EnumerationOutcome, OracleError> {
    let target = g.target();
    enumerate(target, acyclic_rule(target), r, budget, &mut visit)
}

pub fn enumerate_colorings(
    inst: &Instance,
    rule: ColoringRule,
    r: usize,
    budget: &OracleBudget,
    mut visit: impl FnMut(&Coloring) -> bool,
) -> Result<EnumerationOutcome, OracleError> {
    with_target(inst, rule, |t, rl| enumerate(t, rl, r, budget, &mut visit))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Tournament;

    fn budget() -> OracleBudget {
        OracleBudget::nodes(1 << 21)
    }

    #[test]
    fn trivial_cases() {
        let single = Graph::empty(1);
        assert!(decide_acyclic_colorable(&single, 1, &budget()).unwrap().verdict.is_yes());
        let c3 = Digraph::directed_cycle(3);
        assert!(decide_acyclic_colorable(&c3, 1, &budget()).unwrap().verdict.is_no());
        assert!(decide_acyclic_colorable(&c3, 2, &budget()).unwrap().verdict.is_yes());
        assert_eq!(
            decide_acyclic_colorable(&c3, 65, &budget()).unwrap().verdict.label(),
            "yes"
        );
        assert!(matches!(
            decide_acyclic_colorable(&Digraph::directed_cycle(70), 65, &budget()),
            Err(OracleError::TooManyColors(65))
        ));
    }

    #[test]
    fn k5_arboricity_and_proper() {
        let k5 = Graph::complete(5);
        assert!(decide_acyclic_colorable(&k5, 2, &budget()).unwrap().verdict.is_no());
        let yes = decide_acyclic_colorable(&k5, 3, &budget()).unwrap();
        assert!(k5.is_acyclic_coloring(yes.verdict.witness().unwrap()).unwrap());
        assert_eq!(vertex_arboricity(&k5, &budget()).unwrap().value, Some(3));
        assert!(decide_proper_colorable(&Graph::complete(4), 3, &budget()).unwrap().verdict.is_no());
        assert!(decide_proper_colorable(&Graph::cycle(5), 2, &budget()).unwrap().verdict.is_no());
        assert!(decide_proper_colorable(&Graph::cycle(5), 3, &budget()).unwrap().verdict.is_yes());
        assert!(decide_proper_colorable(&Graph::grotzsch(), 3, &budget()).unwrap().verdict.is_no());
    }

    #[test]
    fn transitive_tournament_is_one_colorable() {
        let t = Tournament::transitive(9);
        assert_eq!(dichromatic_number(t.as_digraph(), &budget()).unwrap().value, Some(1));
    }

    #[test]
    fn tiny_budget_is_inconclusive() {
        let k = Graph::complete(9);
        let out = decide_acyclic_colorable(&k, 4, &OracleBudget::nodes(3)).unwrap();
        assert_eq!(out.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn enumeration_counts_directed_triangle() {
        // 2^3 colorings minus the two monochromatic ones.
        let out = enumerate_acyclic_colorings(&Digraph::directed_cycle(3), 2, &budget(), |_| true).unwrap();
        assert_eq!(out.count, 6);
        assert!(out.complete);
    }

    #[test]
    fn dsu_rollback_restores_state() {
        let mut d = RollbackDsu::new(4);
        let cp = d.checkpoint();
        d.union(0, 1);
        d.union(2, 3);
        d.union(1, 3);
        assert_eq!(d.find(0), d.find(3));
        d.rollback(cp);
        assert!((0..4).all(|x| d.find(x) == x));
        assert!(d.rank.iter().all(|&r| r == 0));
    }
}

//! Random bipartite orientations and the block blow-up of a graph.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitSet;
use crate::graph::{is_valid_acyclic_coloring, Coloring, Digraph, Graph};
use crate::oracle::{decide_proper_colorable, Meter, OracleBudget, OracleError, Verdict};
use crate::rng::SeededRng;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AmplifierError {
    #[error("pair size {m} exceeds side size {n}")]
    PairTooLarge { m: usize, n: usize },
    #[error("expected a bipartite digraph on {expected} vertices, got {got}")]
    WrongSize { expected: usize, got: usize },
    #[error("block size must be positive")]
    EmptyBlock,
    #[error("source coloring is not a proper coloring of the source graph")]
    ImproperColoring,
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// `K_{n,n}` on sides `0..n` and `n..2n`, each pair `(u, v)` visited in
/// lexicographic order and oriented `u -> v` on a head.
pub fn random_bipartite_orientation(n: usize, seed: u64) -> Digraph {
    let mut rng = SeededRng::new(seed);
    let mut arcs = Vec::with_capacity(n * n);
    for u in 0..n {
        for v in n..2 * n {
            arcs.push(if rng.coin() { (u, v) } else { (v, u) });
        }
    }
    Digraph::new(2 * n, arcs).expect("one arc per pair")
}

/// Subsets of `base..base + n` of size `m`, in lexicographic order.
fn combinations(base: usize, n: usize, m: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..m).collect();
    if m > n {
        return out;
    }
    loop {
        out.push(cur.iter().map(|&i| base + i).collect());
        let Some(i) = (0..m).rev().find(|&i| cur[i] != i + n - m) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..m {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1u64, |acc, i| acc * (n - i) as u64 / (i as u64 + 1))
}

/// Peels sources off `mask`; acyclic iff everything peels.
fn acyclic_mask(in_rows: &[u64], mut mask: u64) -> bool {
    loop {
        let sources = ones_iter(mask).filter(|&v| in_rows[v] & mask == 0).fold(0u64, |a, v| a | 1 << v);
        if sources == 0 {
            return mask == 0;
        }
        mask &= !sources;
    }
}

fn ones_iter(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            i
        })
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiacyclicSearch {
    /// Pairs `(U', V')` examined.
    pub searched: u64,
    /// Pairs inducing an acyclic digraph.
    pub acyclic: u64,
    pub first: Option<(Vec<usize>, Vec<usize>)>,
    /// Every pair was examined.
    pub exhaustive: bool,
    pub total: u64,
}

fn biacyclic(h: &Digraph, n: usize, m: usize, max_pairs: u64, stop_at_first: bool) -> Result<BiacyclicSearch, AmplifierError> {
    if h.n() != 2 * n {
        return Err(AmplifierError::WrongSize {
            expected: 2 * n,
            got: h.n(),
        });
    }
    if m > n {
        return Err(AmplifierError::PairTooLarge { m, n });
    }
    let total = binomial(n, m).saturating_mul(binomial(n, m));
    let mut res = BiacyclicSearch {
        searched: 0,
        acyclic: 0,
        first: None,
        exhaustive: false,
        total,
    };
    let left = combinations(0, n, m);
    let right = combinations(n, n, m);
    let fast = 2 * n <= 64;
    let in_rows: Vec<u64> = if fast {
        (0..2 * n).map(|v| h.in_row(v)[0]).collect()
    } else {
        Vec::new()
    };
    for a in &left {
        for b in &right {
            if res.searched >= max_pairs {
                return Ok(res);
            }
            res.searched += 1;
            let ok = if fast {
                let mask = a.iter().chain(b).fold(0u64, |acc, &v| acc | 1 << v);
                acyclic_mask(&in_rows, mask)
            } else {
                let set = BitSet::from_indices(2 * n, a.iter().chain(b).copied());
                h.topological_order_of(&set).is_some()
            };
            if ok {
                res.acyclic += 1;
                if res.first.is_none() {
                    res.first = Some((a.clone(), b.clone()));
                }
                if stop_at_first {
                    res.exhaustive = res.searched == total;
                    return Ok(res);
                }
            }
        }
    }
    res.exhaustive = true;
    Ok(res)
}

/// First pair `|U'| = |V'| = m` (sides `0..n`, `n..2n`) whose union induces
/// an acyclic digraph. A `None` answer is exhaustive only when `exhaustive`.
pub fn check_biacyclic_pair(h: &Digraph, n: usize, m: usize, max_pairs: u64) -> Result<BiacyclicSearch, AmplifierError> {
    biacyclic(h, n, m, max_pairs, true)
}

/// Like [`check_biacyclic_pair`] but counts every acyclic pair.
pub fn count_biacyclic_pairs(h: &Digraph, n: usize, m: usize, max_pairs: u64) -> Result<BiacyclicSearch, AmplifierError> {
    biacyclic(h, n, m, max_pairs, false)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupSpec {
    pub graph: Graph,
    pub block: usize,
    pub seed: u64,
}

impl BlowupSpec {
    /// Block size defaults to the number of source vertices.
    pub fn new(graph: Graph, seed: u64) -> Self {
        let block = graph.n().max(1);
        BlowupSpec { graph, block, seed }
    }

    pub fn with_block(mut self, block: usize) -> Self {
        self.block = block;
        self
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Blowup {
    pub digraph: Digraph,
    /// Source coloring copied onto the blocks; checked acyclic on `digraph`.
    pub planted: Option<Coloring>,
    pub warning: Option<String>,
}

/// Replaces vertex `i` by the independent block `i*b..(i+1)*b` and each
/// source edge `ij` (lexicographic order) by a random orientation of the
/// complete bipartite graph between the two blocks, all from one stream.
pub fn blow_up(spec: &BlowupSpec, coloring: Option<&Coloring>, budget: &OracleBudget) -> Result<Blowup, AmplifierError> {
    let b = spec.block;
    if b == 0 {
        return Err(AmplifierError::EmptyBlock);
    }
    let g = &spec.graph;
    let mut rng = SeededRng::new(spec.seed);
    let mut arcs = Vec::with_capacity(g.m() * b * b);
    for (i, j) in g.edges() {
        for x in i * b..(i + 1) * b {
            for y in j * b..(j + 1) * b {
                arcs.push(if rng.coin() { (x, y) } else { (y, x) });
            }
        }
    }
    let digraph = Digraph::new(g.n() * b, arcs).expect("blocks are disjoint");
    let (source, warning) = match coloring {
        Some(c) => {
            if !g.is_proper_coloring(c).unwrap_or(false) {
                return Err(AmplifierError::ImproperColoring);
            }
            (Some(c.clone()), None)
        }
        None => match least_proper_coloring(g, budget)? {
            Some(c) => (Some(c), None),
            None => (None, Some("no proper coloring of the source found within budget; planted coloring omitted".into())),
        },
    };
    let planted = source.map(|c| {
        let colors = (0..g.n() * b).map(|v| c.color(v / b)).collect();
        Coloring::new(c.r(), colors).expect("colors come from a valid coloring")
    });
    if let Some(p) = &planted {
        assert!(
            is_valid_acyclic_coloring(&digraph, p).unwrap_or(false),
            "block copies of a proper coloring are edgeless classes"
        );
    }
    Ok(Blowup {
        digraph,
        planted,
        warning,
    })
}

fn least_proper_coloring(g: &Graph, budget: &OracleBudget) -> Result<Option<Coloring>, AmplifierError> {
    for r in 1..=g.n().clamp(1, 64) {
        match decide_proper_colorable(g, r, budget)?.verdict {
            Verdict::Yes(c) => return Ok(Some(c)),
            Verdict::No => continue,
            Verdict::Inconclusive => return Ok(None),
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq)]
pub struct AcyclicSetOutcome {
    pub vertices: Vec<usize>,
    /// False when the budget ran out and `vertices` is only a lower bound.
    pub exact: bool,
    pub nodes: u64,
    pub seconds: f64,
}

struct Mas<'a> {
    g: &'a Digraph,
    best: BitSet,
    meter: Meter,
}

impl Mas<'_> {
    /// True if adding `v` to the acyclic set `chosen` closes a cycle.
    fn closes_cycle(&self, chosen: &BitSet, v: usize) -> bool {
        let mut seen = BitSet::new(self.g.n());
        let mut frontier = chosen.clone();
        frontier.intersect_with(self.g.out_row(v));
        while let Some(x) = frontier.first() {
            frontier.remove(x);
            if self.g.has_arc(x, v) {
                return true;
            }
            if seen.contains(x) {
                continue;
            }
            seen.insert(x);
            let mut next = chosen.clone();
            next.intersect_with(self.g.out_row(x));
            next.difference_with(seen.words());
            frontier.union_with(next.words());
        }
        false
    }

    fn expand(&mut self, mut chosen: BitSet, mut cand: BitSet) -> bool {
        // A vertex that is a source or sink of everything still possible
        // can always be added.
        loop {
            let mut all = chosen.clone();
            all.union_with(cand.words());
            let free = cand
                .iter()
                .find(|&v| !all.intersects(self.g.in_row(v)) || !all.intersects(self.g.out_row(v)));
            match free {
                Some(v) => {
                    cand.remove(v);
                    chosen.insert(v);
                }
                None => break,
            }
        }
        if chosen.count() > self.best.count() {
            self.best = chosen.clone();
        }
        let Some(v) = cand
            .iter()
            .max_by_key(|&v| (cand.intersection_count(self.g.out_row(v)) + cand.intersection_count(self.g.in_row(v)), std::cmp::Reverse(v)))
        else {
            return true;
        };
        if chosen.count() + cand.count() <= self.best.count() {
            return true;
        }
        if !self.meter.tick() {
            return false;
        }
        cand.remove(v);
        if !self.closes_cycle(&chosen, v) {
            let mut with = chosen.clone();
            with.insert(v);
            if !self.expand(with, cand.clone()) {
                return false;
            }
        }
        self.expand(chosen, cand)
    }
}

/// Largest vertex set inducing an acyclic subdigraph, by branch and bound.
pub fn largest_acyclic_induced(g: &Digraph, budget: &OracleBudget) -> AcyclicSetOutcome {
    let mut m = Mas {
        g,
        best: BitSet::new(g.n()),
        meter: Meter::new(budget),
    };
    let exact = m.expand(BitSet::new(g.n()), BitSet::full(g.n()));
    AcyclicSetOutcome {
        vertices: m.best.to_vec(),
        exact,
        nodes: m.meter.nodes(),
        seconds: m.meter.seconds(),
    }
}

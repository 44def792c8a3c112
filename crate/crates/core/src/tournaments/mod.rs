//! Random tournament models, greedy transitive extraction and recovery of
//! planted acyclic colorings.

mod recover;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::BitSet;
use crate::graph::{Coloring, Tournament};
use crate::oracle::OracleError;
use crate::rng::SeededRng;

pub use recover::{
    phase1_round, phase2_enumerate, phase3_tail, recover, Phase1Round, Phase2Outcome, Phase3Outcome, PhaseTimes,
    RecoveryConfig, RecoveryReport, RoundStats, StopReason, TailMode,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TournamentError {
    #[error("invalid planted spec: {0}")]
    InvalidSpec(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("exact tail refused: residual has {size} vertices, limit is {limit}; use the approximate tail")]
    TailTooLarge { size: usize, limit: usize },
    #[error("exact tail ran out of budget on {size} vertices")]
    TailInconclusive { size: usize },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Class sizes `s_1 >= s_2 >= ... >= s_r >= 1` and a seed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantedSpec {
    sizes: Vec<usize>,
    seed: u64,
}

impl PlantedSpec {
    pub fn new(sizes: Vec<usize>, seed: u64) -> Result<Self, TournamentError> {
        if sizes.is_empty() {
            return Err(TournamentError::InvalidSpec("at least one class is required".into()));
        }
        if sizes.contains(&0) {
            return Err(TournamentError::InvalidSpec("class sizes must be positive".into()));
        }
        if sizes.windows(2).any(|w| w[0] < w[1]) {
            return Err(TournamentError::InvalidSpec("class sizes must be nonincreasing".into()));
        }
        Ok(PlantedSpec { sizes, seed })
    }

    /// `r` classes of size `n / r`, the first `n % r` one larger.
    pub fn equal(n: usize, r: usize, seed: u64) -> Result<Self, TournamentError> {
        if r == 0 || n < r {
            return Err(TournamentError::InvalidSpec(format!("cannot split {n} vertices into {r} classes")));
        }
        PlantedSpec::new((0..r).map(|i| n / r + usize::from(i < n % r)).collect(), seed)
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn n(&self) -> usize {
        self.sizes.iter().sum()
    }
}

/// Hidden classes of a planted tournament, each listed in transitive order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlantedTruth {
    pub classes: Vec<Vec<usize>>,
}

impl PlantedTruth {
    pub fn coloring(&self) -> Coloring {
        partition_coloring(&self.classes)
    }

    /// True when `classes` is the same set partition.
    pub fn matches(&self, classes: &[Vec<usize>]) -> bool {
        normalize(&self.classes) == normalize(classes)
    }
}

pub(crate) fn normalize(classes: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = classes
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.sort_unstable();
            c
        })
        .collect();
    out.sort();
    out
}

pub(crate) fn partition_coloring(classes: &[Vec<usize>]) -> Coloring {
    let n = classes.iter().map(Vec::len).sum();
    let mut colors = vec![0; n];
    for (i, class) in classes.iter().enumerate() {
        for &v in class {
            colors[v] = i;
        }
    }
    Coloring::from_colors(colors)
}

/// Planted model: vertices are shuffled, cut into classes of the given
/// sizes, each class ordered transitively, and every cross-class pair
/// oriented by a fair coin (pairs visited in lexicographic order).
pub fn generate_planted(spec: &PlantedSpec) -> (Tournament, PlantedTruth) {
    let n = spec.n();
    let mut rng = SeededRng::new(spec.seed);
    let mut perm: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut perm);
    let mut class_of = vec![0; n];
    let mut rank = vec![0; n];
    let mut classes = Vec::with_capacity(spec.sizes.len());
    let mut at = 0;
    for (i, &s) in spec.sizes.iter().enumerate() {
        let class = perm[at..at + s].to_vec();
        for (j, &v) in class.iter().enumerate() {
            class_of[v] = i;
            rank[v] = j;
        }
        classes.push(class);
        at += s;
    }
    let t = Tournament::from_fn(n, |u, v| {
        if class_of[u] == class_of[v] {
            rank[u] < rank[v]
        } else {
            rng.coin()
        }
    });
    (t, PlantedTruth { classes })
}

/// Uniform random tournament: each pair `u < v` gets `u -> v` on a head.
pub fn generate_uniform(n: usize, seed: u64) -> Tournament {
    let mut rng = SeededRng::new(seed);
    Tournament::from_fn(n, |_, _| rng.coin())
}

/// Repeatedly takes a vertex of largest out-degree among the candidates (ties
/// to the lowest id) and keeps only its out-neighbours. The result is in
/// transitive order and has at least `ceil(log2(|set| + 1))` vertices.
pub fn greedy_transitive_in(t: &Tournament, set: &BitSet) -> Vec<usize> {
    let mut cand = set.clone();
    let mut chain = Vec::new();
    while let Some(first) = cand.first() {
        let mut best = (cand.intersection_count(t.out_row(first)), first);
        for v in cand.iter().skip(1) {
            let d = cand.intersection_count(t.out_row(v));
            if d > best.0 {
                best = (d, v);
            }
        }
        chain.push(best.1);
        cand.intersect_with(t.out_row(best.1));
    }
    chain
}

pub fn greedy_transitive(t: &Tournament) -> Vec<usize> {
    greedy_transitive_in(t, &BitSet::full(t.n()))
}

/// `ceil(log2(n + 1))`.
pub fn log2_bound(n: usize) -> usize {
    (usize::BITS - n.leading_zeros()) as usize
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GreedyColoring {
    pub coloring: Coloring,
    /// Classes extracted greedily before the remainder became singletons.
    pub extracted: usize,
    /// `n / ((1 - eps) log2 n) + n^(1 - eps)`.
    pub target: f64,
}

/// Extracts greedy transitive classes until at most `n^(1-eps)` vertices
/// remain, then gives each remaining vertex its own color.
pub fn greedy_acyclic_coloring(t: &Tournament, eps: f64) -> Result<GreedyColoring, TournamentError> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(TournamentError::InvalidParameter(format!("eps must lie in (0, 1), got {eps}")));
    }
    let n = t.n();
    let nf = n as f64;
    let stop = nf.powf(1.0 - eps);
    let mut left = BitSet::full(n);
    let mut classes = Vec::new();
    while !left.is_empty() && left.count() as f64 > stop {
        let class = greedy_transitive_in(t, &left);
        for &v in &class {
            left.remove(v);
        }
        classes.push(class);
    }
    let extracted = classes.len();
    classes.extend(left.iter().map(|v| vec![v]));
    let target = if n > 1 { nf / ((1.0 - eps) * nf.log2()) + stop } else { 1.0 };
    Ok(GreedyColoring {
        coloring: partition_coloring(&classes),
        extracted,
        target,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{is_valid_acyclic_coloring, Digraph};

    #[test]
    fn planted_small_cases() {
        let (t, truth) = generate_planted(&PlantedSpec::new(vec![5], 9).unwrap());
        assert!(t.is_transitive_set(&BitSet::full(5)));
        assert_eq!(truth.classes.len(), 1);

        let spec = PlantedSpec::new(vec![3, 3], 42).unwrap();
        let (t, truth) = generate_planted(&spec);
        assert_eq!(t.n(), 6);
        assert!(is_valid_acyclic_coloring(&t, &truth.coloring()).unwrap());
        assert_eq!(generate_planted(&spec), (t, truth));
    }

    #[test]
    fn spec_validation() {
        assert!(PlantedSpec::new(vec![2, 3], 0).is_err());
        assert!(PlantedSpec::new(vec![], 0).is_err());
        assert!(PlantedSpec::new(vec![3, 0], 0).is_err());
        assert_eq!(PlantedSpec::equal(10, 3, 1).unwrap().sizes(), &[4, 3, 3]);
    }

    #[test]
    fn uniform_is_seeded() {
        assert_eq!(generate_uniform(1, 3).as_digraph().m(), 0);
        assert_eq!(generate_uniform(20, 3), generate_uniform(20, 3));
        assert_ne!(generate_uniform(20, 3), generate_uniform(20, 4));
    }

    #[test]
    fn greedy_chain() {
        assert_eq!(greedy_transitive(&Tournament::transitive(8)), (0..8).collect::<Vec<_>>());
        let c3 = Tournament::new(Digraph::directed_cycle(3)).unwrap();
        assert_eq!(greedy_transitive(&c3).len(), 2);
        assert_eq!(log2_bound(7), 3);
        assert_eq!(log2_bound(8), 4);
        assert_eq!(log2_bound(1), 1);
    }

    #[test]
    fn greedy_coloring() {
        let g = greedy_acyclic_coloring(&Tournament::transitive(10), 0.5).unwrap();
        assert_eq!(g.coloring.r(), 1);
        let g = greedy_acyclic_coloring(&Tournament::transitive(1), 0.5).unwrap();
        assert_eq!(g.coloring.r(), 1);
        assert!(greedy_acyclic_coloring(&Tournament::transitive(3), 1.0).is_err());
        let t = generate_uniform(256, 5);
        let g = greedy_acyclic_coloring(&t, 0.5).unwrap();
        assert!(is_valid_acyclic_coloring(&t, &g.coloring).unwrap());
        assert!((g.coloring.r() as f64) <= 256.0 / 8.0 * 2.0 + 16.0, "{}", g.coloring.r());
    }
}

//! Three-phase recovery: peel off one class per round by 3-cycle counts,
//! then enumerate candidate classes from small bottom sets, then color the
//! tail exactly or greedily.

use std::collections::BTreeSet;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{greedy_transitive_in, normalize, partition_coloring, PlantedTruth, TournamentError};
use crate::bits::BitSet;
use crate::graph::{is_valid_acyclic_coloring, Tournament};
use crate::oracle::{dichromatic_number, max_transitive_subtournament, OracleBudget};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TailMode {
    Exact,
    #[default]
    Approximate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoveryConfig {
    /// Scale of the deviation radius `d_j = c * sqrt(n_j) * ln(n_j)`.
    pub c: f64,
    /// Minimum class size accepted in phase 2; `ceil(24 ln n')` if unset.
    pub k0: Option<usize>,
    /// Size of the bottom sets enumerated in phase 2; `min(3, ceil(c ln n'))` if unset.
    pub u_size: Option<usize>,
    /// Most bottom sets phase 2 will look at.
    pub cap: u64,
    pub tail: TailMode,
    /// Largest residual the exact tail will accept.
    pub exact_tail_limit: usize,
    /// Stop phase 1 after this many rounds.
    pub max_rounds: Option<usize>,
}

impl Default for RecoveryConfig {
    fn default() -> Self {
        RecoveryConfig {
            c: 0.5,
            k0: None,
            u_size: None,
            cap: 10_000_000,
            tail: TailMode::Approximate,
            exact_tail_limit: 25,
            max_rounds: None,
        }
    }
}

impl RecoveryConfig {
    pub fn validate(&self) -> Result<(), TournamentError> {
        let bad = |m: &str| Err(TournamentError::InvalidParameter(m.to_string()));
        if !(self.c.is_finite() && self.c > 0.0) {
            return bad("c must be positive");
        }
        if self.k0 == Some(0) || self.u_size == Some(0) {
            return bad("k0 and u-size must be positive");
        }
        if self.cap == 0 {
            return bad("enumeration cap must be positive");
        }
        Ok(())
    }

    pub fn k0_for(&self, n: usize) -> usize {
        self.k0.unwrap_or_else(|| (24.0 * (n.max(1) as f64).ln()).ceil().max(1.0) as usize)
    }

    pub fn u_size_for(&self, n: usize) -> usize {
        self.u_size
            .unwrap_or_else(|| ((self.c * (n.max(1) as f64).ln()).ceil() as usize).min(3))
            .max(1)
    }

    pub fn d_for(&self, n: usize) -> f64 {
        let nf = n as f64;
        self.c * nf.sqrt() * nf.ln()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    TooSmall,
    RoundLimit,
    Exhausted,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoundStats {
    pub round: usize,
    pub n_j: usize,
    /// Planted classes still present; known only after comparing with the truth.
    pub r_j: Option<usize>,
    pub d_j: f64,
    pub u_star: usize,
    pub d_diff: i64,
    pub threshold: f64,
    /// Length of the anchor chain starting at `u*`.
    pub anchors: usize,
    /// Vertices that fit the order exactly and were added after the chain.
    pub added_back: usize,
    pub class_size: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Phase1Round {
    Found { class: Vec<usize>, stats: RoundStats },
    Stop { reason: StopReason, stats: RoundStats },
}

/// Position at which `v` fits `order` without a backward arc, if any.
fn fits_at(t: &Tournament, order: &[usize], v: usize) -> Option<usize> {
    let p = order.iter().take_while(|&&w| t.beats(w, v)).count();
    order[p..].iter().all(|&w| t.beats(v, w)).then_some(p)
}

/// One phase-1 round on the vertices of `active`.
///
/// `u*` maximizes `|out - in|` and each `v` is classified by the number
/// `X(v)` of 3-cycles through `u*` and `v`. Since `u*` sits at an end of its
/// class, outsiders on the same side of `u*` as the class look like members
/// to this count, so the kept set is then narrowed along a chain of anchors
/// (each the most extreme vertex left, the set cut to its far side) until it
/// is transitive. Vertices that fit the resulting order exactly are added
/// back.
pub fn phase1_round(t: &Tournament, active: &BitSet, round: usize, cfg: &RecoveryConfig) -> Phase1Round {
    let nj = active.count();
    let d = cfg.d_for(nj);
    let mut stats = RoundStats {
        round,
        n_j: nj,
        r_j: None,
        d_j: d,
        u_star: 0,
        d_diff: 0,
        threshold: 0.0,
        anchors: 0,
        added_back: 0,
        class_size: 0,
    };
    if nj == 0 {
        return Phase1Round::Stop {
            reason: StopReason::Exhausted,
            stats,
        };
    }
    let span = nj as i64 - 1;
    let (mut u, mut best) = (usize::MAX, -1i64);
    for v in active.iter() {
        let diff = 2 * active.intersection_count(t.out_row(v)) as i64 - span;
        if diff.abs() > best {
            (u, best) = (v, diff.abs());
            stats.d_diff = diff;
        }
    }
    stats.u_star = u;
    // The class of u* lies below it when u* beats most vertices, above otherwise.
    let down = stats.d_diff >= 0;
    let far = |v: usize| if down { t.out_row(v) } else { t.in_row(v) };

    let mut in_u = active.clone();
    in_u.intersect_with(t.in_row(u));
    let mut out_u = active.clone();
    out_u.intersect_with(t.out_row(u));
    let x: Vec<(usize, usize)> = active
        .iter()
        .filter(|&v| v != u)
        .map(|v| {
            let count = if t.beats(u, v) {
                in_u.intersection_count(t.out_row(v))
            } else {
                out_u.intersection_count(t.in_row(v))
            };
            (v, count)
        })
        .collect();

    // Members expect (n_j - s*)/4 cycles and outsiders up to (n_j - 2)/4;
    // cut halfway, estimating s* from the extreme degree.
    let s_hat = best as f64 + 1.0;
    let tau = (2.0 * nj as f64 - s_hat - 2.0) / 8.0;
    stats.threshold = tau;
    let mut cand = BitSet::new(t.n());
    for &(v, c) in &x {
        if (c as f64) < tau {
            cand.insert(v);
        }
    }

    let mut chain = vec![u];
    cand.intersect_with(far(u));
    while !cand.is_empty() && !t.is_transitive_set(&cand) {
        let mut a = (0, usize::MAX);
        for v in cand.iter() {
            let k = cand.intersection_count(far(v));
            if a.1 == usize::MAX || k > a.0 {
                a = (k, v);
            }
        }
        chain.push(a.1);
        cand.remove(a.1);
        cand.intersect_with(far(a.1));
    }
    stats.anchors = chain.len();
    let rest = t.transitive_order(&cand).expect("loop ends on a transitive set");
    let mut order = if down {
        chain.extend(rest);
        chain
    } else {
        rest.into_iter().chain(chain.into_iter().rev()).collect()
    };
    for v in active.iter() {
        if order.contains(&v) {
            continue;
        }
        if let Some(p) = fits_at(t, &order, v) {
            order.insert(p, v);
            stats.added_back += 1;
        }
    }
    debug_assert!(t.is_transitive_set(&BitSet::from_indices(t.n(), order.iter().copied())));

    if order.len() as f64 <= 2.0 * d + 2.0 && order.len() != nj {
        return Phase1Round::Stop {
            reason: StopReason::TooSmall,
            stats,
        };
    }
    stats.class_size = order.len();
    Phase1Round::Found { class: order, stats }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Phase2Outcome {
    pub classes: Vec<Vec<usize>>,
    pub u_size: usize,
    pub k0: usize,
    /// Bottom sets looked at.
    pub enumerated: u64,
    /// Distinct candidate classes of size at least `k0`.
    pub candidates: usize,
    /// The enumeration cap was hit; the result may be missing classes.
    pub capped: bool,
}

struct Enum<'a> {
    t: &'a Tournament,
    verts: Vec<usize>,
    u_size: usize,
    k0: usize,
    cap: u64,
    budget: OracleBudget,
    out: Phase2Outcome,
    found: BTreeSet<Vec<usize>>,
}

impl Enum<'_> {
    /// `above` holds the vertices beating every member of `u`.
    fn extend(&mut self, from: usize, u: &mut Vec<usize>, above: &BitSet) {
        if self.out.capped {
            return;
        }
        if u.len() == self.u_size {
            self.out.enumerated += 1;
            if self.out.enumerated > self.cap {
                self.out.capped = true;
                return;
            }
            self.candidate(u, above);
            return;
        }
        for i in from..self.verts.len() {
            let x = self.verts[i];
            if !u.is_empty() && !self.keeps_transitive(u, x) {
                continue;
            }
            let mut next = above.clone();
            next.intersect_with(self.t.in_row(x));
            if next.count() + self.u_size < self.k0 {
                continue;
            }
            u.push(x);
            self.extend(i + 1, u, &next);
            u.pop();
        }
    }

    fn keeps_transitive(&self, u: &[usize], x: usize) -> bool {
        let mut s = BitSet::from_indices(self.t.n(), u.iter().copied());
        s.insert(x);
        self.t.is_transitive_set(&s)
    }

    fn candidate(&mut self, u: &[usize], above: &BitSet) {
        let rest = above.to_vec();
        let sub = self.t.induced(&rest);
        let best = max_transitive_subtournament(&sub, &self.budget);
        let mut z: Vec<usize> = best.vertices.iter().map(|&i| rest[i]).chain(u.iter().copied()).collect();
        if z.len() < self.k0 {
            return;
        }
        z.sort_unstable();
        self.found.insert(z);
    }
}

/// Candidate classes `Z = U + T` where `U` is a transitive bottom set and `T`
/// a largest transitive subset of the vertices above all of `U`. Candidates of
/// size at least `k0` are taken largest first (ties lexicographic), skipping
/// any that meet an earlier choice.
pub fn phase2_enumerate(t: &Tournament, active: &BitSet, cfg: &RecoveryConfig) -> Phase2Outcome {
    let np = active.count();
    let (u_size, k0) = (cfg.u_size_for(np), cfg.k0_for(np));
    let mut e = Enum {
        t,
        verts: active.to_vec(),
        u_size,
        k0,
        cap: cfg.cap,
        budget: OracleBudget::nodes(1_000_000),
        out: Phase2Outcome {
            u_size,
            k0,
            ..Default::default()
        },
        found: BTreeSet::new(),
    };
    if np >= k0 && np >= u_size {
        e.extend(0, &mut Vec::new(), active);
    }
    let mut found: Vec<Vec<usize>> = std::mem::take(&mut e.found).into_iter().collect();
    found.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
    let mut out = e.out;
    out.candidates = found.len();
    let mut used = BitSet::new(t.n());
    for z in found {
        if z.iter().any(|&v| used.contains(v)) {
            continue;
        }
        let set = BitSet::from_indices(t.n(), z.iter().copied());
        used.union_with(set.words());
        out.classes.push(t.transitive_order(&set).expect("candidates are transitive"));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Phase3Outcome {
    pub mode: TailMode,
    pub classes: Vec<Vec<usize>>,
    /// Worst-case ratio to the optimum for the approximate tail, `24 ln 2`.
    pub approx_factor: Option<f64>,
}

pub fn phase3_tail(t: &Tournament, active: &BitSet, cfg: &RecoveryConfig) -> Result<Phase3Outcome, TournamentError> {
    let size = active.count();
    let classes = match cfg.tail {
        TailMode::Exact => {
            if size > cfg.exact_tail_limit {
                return Err(TournamentError::TailTooLarge {
                    size,
                    limit: cfg.exact_tail_limit,
                });
            }
            let verts = active.to_vec();
            let sub = t.induced(&verts);
            let res = dichromatic_number(sub.as_digraph(), &OracleBudget::default())?;
            let Some(w) = res.witness else {
                return Err(TournamentError::TailInconclusive { size });
            };
            w.classes()
                .into_iter()
                .filter(|c| !c.is_empty())
                .map(|c| {
                    let set = BitSet::from_indices(t.n(), c.into_iter().map(|i| verts[i]));
                    t.transitive_order(&set).expect("oracle classes are transitive")
                })
                .collect()
        }
        TailMode::Approximate => {
            let mut left = active.clone();
            let mut classes = Vec::new();
            while !left.is_empty() {
                let class = greedy_transitive_in(t, &left);
                for &v in &class {
                    left.remove(v);
                }
                classes.push(class);
            }
            classes
        }
    };
    Ok(Phase3Outcome {
        mode: cfg.tail,
        classes,
        approx_factor: (cfg.tail == TailMode::Approximate).then_some(24.0 * std::f64::consts::LN_2),
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseTimes {
    pub phase1_ms: f64,
    pub phase2_ms: f64,
    pub phase3_ms: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecoveryReport {
    pub n: usize,
    /// Every class in transitive order; phase-1 classes first, then phase 2, then the tail.
    pub classes: Vec<Vec<usize>>,
    pub rounds: Vec<RoundStats>,
    pub phase1_stop: StopReason,
    pub phase1_classes: usize,
    pub phase2: Phase2Outcome,
    pub phase3: Option<Phase3Outcome>,
    pub exact_match: Option<bool>,
    pub times: PhaseTimes,
}

impl RecoveryReport {
    /// Fills in `exact_match` and the per-round count of planted classes left.
    pub fn compare(&mut self, truth: &PlantedTruth) {
        self.exact_match = Some(truth.matches(&self.classes));
        let mut gone = vec![false; self.n];
        for (j, stats) in self.rounds.iter_mut().enumerate() {
            stats.r_j = Some(truth.classes.iter().filter(|c| c.iter().any(|&v| !gone[v])).count());
            if let Some(class) = self.classes.get(j).filter(|_| j < self.phase1_classes) {
                for &v in class {
                    gone[v] = true;
                }
            }
        }
    }

    /// The partition as a coloring, class `i` getting color `i`.
    pub fn coloring(&self) -> crate::graph::Coloring {
        partition_coloring(&self.classes)
    }

    pub fn same_partition(&self, other: &[Vec<usize>]) -> bool {
        normalize(&self.classes) == normalize(other)
    }
}

pub fn recover(t: &Tournament, cfg: &RecoveryConfig) -> Result<RecoveryReport, TournamentError> {
    cfg.validate()?;
    let n = t.n();
    let mut active = BitSet::full(n);
    let mut classes: Vec<Vec<usize>> = Vec::new();
    let mut rounds = Vec::new();
    let take = |active: &mut BitSet, class: &[usize]| {
        for &v in class {
            active.remove(v);
        }
    };

    let start = Instant::now();
    let stop = loop {
        if active.is_empty() {
            break StopReason::Exhausted;
        }
        if cfg.max_rounds.is_some_and(|m| rounds.len() >= m) {
            break StopReason::RoundLimit;
        }
        match phase1_round(t, &active, rounds.len(), cfg) {
            Phase1Round::Found { class, stats } => {
                take(&mut active, &class);
                classes.push(class);
                rounds.push(stats);
            }
            Phase1Round::Stop { reason, stats } => {
                rounds.push(stats);
                break reason;
            }
        }
    };
    let phase1_ms = start.elapsed().as_secs_f64() * 1e3;
    let phase1_classes = classes.len();

    let start = Instant::now();
    let phase2 = phase2_enumerate(t, &active, cfg);
    for class in &phase2.classes {
        take(&mut active, class);
        classes.push(class.clone());
    }
    let phase2_ms = start.elapsed().as_secs_f64() * 1e3;

    let start = Instant::now();
    let phase3 = if active.is_empty() {
        None
    } else {
        let tail = phase3_tail(t, &active, cfg)?;
        classes.extend(tail.classes.iter().cloned());
        Some(tail)
    };
    let phase3_ms = start.elapsed().as_secs_f64() * 1e3;

    let report = RecoveryReport {
        n,
        classes,
        rounds,
        phase1_stop: stop,
        phase1_classes,
        phase2,
        phase3,
        exact_match: None,
        times: PhaseTimes {
            phase1_ms,
            phase2_ms,
            phase3_ms,
        },
    };
    debug_assert!(is_valid_acyclic_coloring(t, &report.coloring()).unwrap_or(false));
    Ok(report)
}

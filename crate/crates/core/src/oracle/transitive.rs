use super::{Meter, OracleBudget};
use crate::bits::BitSet;
use crate::graph::Tournament;

#[derive(Clone, Debug, PartialEq)]
pub struct TransitiveOutcome {
    /// Vertices in transitive order, from the one beating all others down.
    pub vertices: Vec<usize>,
    /// False when the budget ran out; the set is then only a lower bound.
    pub exact: bool,
    pub nodes: u64,
    pub seconds: f64,
}

struct Bnb<'a> {
    t: &'a Tournament,
    best: Vec<usize>,
    current: Vec<usize>,
    meter: Meter,
}

impl Bnb<'_> {
    // Every transitive set has a unique top, which beats the rest of the set,
    // so branching on the top vertex covers each set exactly once.
    fn expand(&mut self, cand: &BitSet) -> bool {
        if self.current.len() > self.best.len() {
            self.best = self.current.clone();
        }
        let mut tops: Vec<(usize, usize)> = cand
            .iter()
            .map(|v| (cand.intersection_count(self.t.out_row(v)), v))
            .collect();
        tops.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        for (below, v) in tops {
            if self.current.len() + 1 + below <= self.best.len() {
                break;
            }
            if !self.meter.tick() {
                return false;
            }
            let mut next = cand.clone();
            next.intersect_with(self.t.out_row(v));
            self.current.push(v);
            let ok = self.expand(&next);
            self.current.pop();
            if !ok {
                return false;
            }
        }
        true
    }
}

/// Largest vertex set inducing a transitive subtournament. The first dive of
/// the branch and bound is the greedy max-out-degree chain, which serves as
/// the initial lower bound.
pub fn max_transitive_subtournament(t: &Tournament, budget: &OracleBudget) -> TransitiveOutcome {
    let mut b = Bnb {
        t,
        best: Vec::new(),
        current: Vec::new(),
        meter: Meter::new(budget),
    };
    let exact = b.expand(&BitSet::full(t.n()));
    TransitiveOutcome {
        vertices: b.best,
        exact,
        nodes: b.meter.nodes(),
        seconds: b.meter.seconds(),
    }
}

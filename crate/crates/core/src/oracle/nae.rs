use super::{Meter, OracleBudget, OracleOutcome, Verdict};
use crate::nae::NaeInstance;

const NONE: usize = usize::MAX;

struct NaeSearch<'a> {
    inst: &'a NaeInstance,
    occ: Vec<Vec<usize>>,
    order: Vec<usize>,
    value: Vec<usize>,
    mask: Vec<u64>,
    trail: Vec<(usize, u64)>,
    meter: Meter,
}

impl NaeSearch<'_> {
    /// `Some(true)` solved, `Some(false)` exhausted, `None` out of budget.
    fn run(&mut self, depth: usize, used: usize) -> Option<bool> {
        if depth == self.order.len() {
            return Some(true);
        }
        let x = self.order[depth];
        let r = self.inst.values();
        let limit = (used + 1).min(r);
        for val in 0..limit {
            if self.mask[x] >> val & 1 == 1 {
                continue;
            }
            if !self.meter.tick() {
                return None;
            }
            let mark = self.trail.len();
            self.value[x] = val;
            if self.propagate(x) {
                match self.run(depth + 1, used.max(val + 1)) {
                    Some(true) => return Some(true),
                    None => return None,
                    Some(false) => {}
                }
            }
            self.value[x] = NONE;
            while self.trail.len() > mark {
                let (y, old) = self.trail.pop().expect("trail entry");
                self.mask[y] = old;
            }
        }
        Some(false)
    }

    /// Forbids the shared value on the last open variable of each clause whose
    /// other members now all agree. Returns false on a wipe-out.
    fn propagate(&mut self, x: usize) -> bool {
        let full = if self.inst.values() == 64 { !0 } else { (1u64 << self.inst.values()) - 1 };
        for &ci in &self.occ[x] {
            let clause = &self.inst.clauses()[ci];
            let mut open = None;
            let mut shared = Some(self.value[x]);
            for &y in clause {
                match self.value[y] {
                    NONE if open.is_none() => open = Some(y),
                    NONE => {
                        shared = None;
                        break;
                    }
                    v if Some(v) != shared => {
                        shared = None;
                        break;
                    }
                    _ => {}
                }
            }
            match (shared, open) {
                (Some(_), None) => return false,
                (Some(v), Some(y)) => {
                    let bit = 1u64 << v;
                    if self.mask[y] & bit == 0 {
                        self.trail.push((y, self.mask[y]));
                        self.mask[y] |= bit;
                        if self.mask[y] & full == full {
                            return false;
                        }
                    }
                }
                _ => {}
            }
        }
        true
    }
}

/// Exact NAE satisfiability. Values are interchangeable, so a variable may
/// only take a value already used or the next fresh one.
pub fn solve_nae(inst: &NaeInstance, budget: &OracleBudget) -> OracleOutcome<Vec<usize>> {
    let n = inst.vars();
    let mut occ = vec![Vec::new(); n];
    for (ci, clause) in inst.clauses().iter().enumerate() {
        for &x in clause {
            occ[x].push(ci);
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| (std::cmp::Reverse(occ[x].len()), x));
    let mut s = NaeSearch {
        inst,
        occ,
        order,
        value: vec![NONE; n],
        mask: vec![0; n],
        trail: Vec::new(),
        meter: Meter::new(budget),
    };
    let verdict = match s.run(0, 0) {
        Some(true) => {
            debug_assert!(inst.is_satisfied_by(&s.value));
            Verdict::Yes(s.value.clone())
        }
        Some(false) => Verdict::No,
        None => Verdict::Inconclusive,
    };
    s.meter.finish(verdict)
}

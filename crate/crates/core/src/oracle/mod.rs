//! Exact, exponential-time decision procedures used as ground truth.
//!
//! Every `Yes` carries a witness that has already been re-checked with the
//! polynomial verifiers; every `No` means the search space was exhausted. When
//! the node or time budget runs out the answer is `Inconclusive`, never a guess.

mod critical;
mod nae;
mod search;
mod transitive;

use std::time::{Duration, Instant};

use thiserror::Error;

use crate::graph::{Digraph, Graph, Instance, Tournament};

pub use critical::{make_edge_critical, make_edge_critical_with, CriticalOutcome};
pub use nae::solve_nae;
pub use search::{
    decide_acyclic_colorable, decide_colorable, decide_proper_colorable, dichromatic_number,
    enumerate_acyclic_colorings, enumerate_colorings, vertex_arboricity, ColoringRule, EnumerationOutcome,
    NumberOutcome,
};
pub use transitive::{max_transitive_subtournament, TransitiveOutcome};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("budget limits must be positive")]
    NonPositiveBudget,
    #[error("at most 64 colors are supported, got {0}")]
    TooManyColors(usize),
    #[error("instance is already {r}-colorable, so there is no critical subinstance")]
    AlreadyColorable { r: usize },
    #[error("oracle ran out of budget after removing {removed} of {total} edges")]
    CriticalInconclusive { removed: usize, total: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub node_limit: u64,
    pub time_limit: Duration,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            node_limit: 100_000_000,
            time_limit: Duration::from_secs(300),
        }
    }
}

impl OracleBudget {
    pub fn new(node_limit: u64, time_limit: Duration) -> Result<Self, OracleError> {
        if node_limit == 0 || time_limit.is_zero() {
            return Err(OracleError::NonPositiveBudget);
        }
        Ok(OracleBudget { node_limit, time_limit })
    }

    /// Node limit with the default time limit.
    pub fn nodes(node_limit: u64) -> Self {
        OracleBudget {
            node_limit: node_limit.max(1),
            ..Default::default()
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict<W> {
    Yes(W),
    No,
    Inconclusive,
}

impl<W> Verdict<W> {
    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::No)
    }

    pub fn witness(&self) -> Option<&W> {
        match self {
            Verdict::Yes(w) => Some(w),
            _ => None,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Yes(_) => "yes",
            Verdict::No => "no",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OracleOutcome<W> {
    pub verdict: Verdict<W>,
    pub nodes: u64,
    pub seconds: f64,
}

/// Which adjacency the oracle should search over.
#[derive(Clone, Copy, Debug)]
pub enum Target<'a> {
    Undirected(&'a Graph),
    Directed(&'a Digraph),
}

pub trait OracleTarget {
    fn target(&self) -> Target<'_>;
}

impl OracleTarget for Graph {
    fn target(&self) -> Target<'_> {
        Target::Undirected(self)
    }
}

impl OracleTarget for Digraph {
    fn target(&self) -> Target<'_> {
        Target::Directed(self)
    }
}

impl OracleTarget for Tournament {
    fn target(&self) -> Target<'_> {
        Target::Directed(self.as_digraph())
    }
}

impl OracleTarget for Instance {
    fn target(&self) -> Target<'_> {
        match self {
            Instance::Graph(g) => Target::Undirected(g),
            Instance::Digraph(d) => Target::Directed(d),
            Instance::Tournament(t) => Target::Directed(t.as_digraph()),
        }
    }
}

impl Target<'_> {
    pub fn n(&self) -> usize {
        match self {
            Target::Undirected(g) => g.n(),
            Target::Directed(d) => d.n(),
        }
    }
}

/// Node and wall-clock accounting shared by every search in this module.
pub(crate) struct Meter {
    nodes: u64,
    node_limit: u64,
    start: Instant,
    deadline: Instant,
    exhausted: bool,
}

impl Meter {
    pub(crate) fn new(budget: &OracleBudget) -> Self {
        let start = Instant::now();
        Meter {
            nodes: 0,
            node_limit: budget.node_limit,
            start,
            deadline: start + budget.time_limit,
            exhausted: false,
        }
    }

    /// Counts one node. Returns false once the budget is gone.
    #[inline]
    pub(crate) fn tick(&mut self) -> bool {
        if self.exhausted {
            return false;
        }
        self.nodes += 1;
        if self.nodes > self.node_limit
            || (self.nodes & 1023 == 0 && Instant::now() >= self.deadline)
        {
            self.exhausted = true;
            return false;
        }
        true
    }

    pub(crate) fn nodes(&self) -> u64 {
        self.nodes
    }

    pub(crate) fn seconds(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }

    /// Remaining budget, for chaining several searches under one allowance.
    pub(crate) fn remaining(&self) -> OracleBudget {
        OracleBudget {
            node_limit: self.node_limit.saturating_sub(self.nodes).max(1),
            time_limit: self
                .deadline
                .saturating_duration_since(Instant::now())
                .max(Duration::from_millis(1)),
        }
    }

    pub(crate) fn finish<W>(&self, verdict: Verdict<W>) -> OracleOutcome<W> {
        OracleOutcome {
            verdict,
            nodes: self.nodes,
            seconds: self.seconds(),
        }
    }
}

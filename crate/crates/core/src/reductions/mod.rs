//! Reductions from coloring and NAE problems to acyclic coloring under girth
//! and degree constraints, with maps between certificates on both sides.
//!
//! Every output is checked against its claimed girth and degree bounds before
//! it is returned.

mod assemble;
mod lift;
mod pipelines;
mod tree;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gadgets::GadgetError;
use crate::graph::{Coloring, Graph, Instance};
use crate::nae::NaeInstance;
use crate::oracle::{ColoringRule, OracleError};

pub use lift::{lift_solution, pull_back};
pub use pipelines::{
    reduce_coloring_girth, reduce_coloring_girth_with, reduce_coloring_to_acyclic_digraph, reduce_coloring_to_acyclic_digraph_with,
    reduce_coloring_to_acyclic_graph, reduce_coloring_to_acyclic_graph_with, reduce_nae_to_acyclic2_digraph,
    reduce_nae_to_acyclic2_graph, reduce_nae_to_acyclic2_graph_with, StarGadget,
};
pub use tree::{balanced_tree, split_binary_tree, TreeShape};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error(transparent)]
    Gadget(#[from] GadgetError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("emitted instance has girth {found}, below the claimed {claimed}")]
    GirthViolated { found: usize, claimed: usize },
    #[error("emitted instance has degree {found}, above the claimed {claimed}")]
    DegreeViolated { found: usize, claimed: usize },
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),
    #[error("lift produced an invalid coloring: {0}")]
    LiftFailed(String),
    #[error("pulled-back certificate does not solve the source: {0}")]
    PullBackFailed(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pipeline {
    SplitTree,
    GirthColor,
    NaeGraph,
    ColorAcyclicGraph,
    ColorAcyclicDigraph,
    NaeDigraph,
}

impl Pipeline {
    pub const ALL: [Pipeline; 5] = [
        Pipeline::GirthColor,
        Pipeline::NaeGraph,
        Pipeline::ColorAcyclicGraph,
        Pipeline::ColorAcyclicDigraph,
        Pipeline::NaeDigraph,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Pipeline::SplitTree => "split-tree",
            Pipeline::GirthColor => "girth-color",
            Pipeline::NaeGraph => "nae-graph",
            Pipeline::ColorAcyclicGraph => "color-acyclic-graph",
            Pipeline::ColorAcyclicDigraph => "color-acyclic-digraph",
            Pipeline::NaeDigraph => "nae-digraph",
        }
    }

    /// Whether the source is an NAE instance rather than a graph.
    pub fn takes_nae(self) -> bool {
        matches!(self, Pipeline::NaeGraph | Pipeline::NaeDigraph)
    }
}

impl fmt::Display for Pipeline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Pipeline {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        [Pipeline::SplitTree]
            .into_iter()
            .chain(Pipeline::ALL)
            .find(|p| p.as_str() == s)
            .ok_or_else(|| format!("unknown pipeline `{s}`"))
    }
}

/// Where an output vertex came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Provenance {
    /// Node `node` (preorder, root 0) of the tree replacing source vertex `source`.
    TreeNode { source: usize, node: usize },
    /// Position `position` of clause `clause`.
    Occurrence { clause: usize, position: usize },
    /// Star center of a variable.
    Hub { variable: usize },
    /// Vertex `internal` of gadget copy `copy`, not shared with anything else.
    GadgetInterior { copy: usize, internal: usize },
}

/// How a shared vertex is colored from a source certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Anchor {
    /// Same color as the source vertex or variable value.
    Carrier(usize),
    /// The other of two colors.
    Opposite(usize),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GadgetTemplate {
    pub name: String,
    pub instance: Instance,
    /// Template vertices glued to shared output vertices.
    pub terminals: Vec<usize>,
    pub witness: Coloring,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetCopy {
    pub template: usize,
    /// Output vertex of each template vertex.
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Source {
    Graph(Graph),
    Nae(NaeInstance),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SourceCertificate {
    /// A proper coloring of a source graph.
    Coloring(Coloring),
    /// A satisfying NAE assignment.
    Assignment(Vec<usize>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeClaim {
    /// Bound enforced at emit time; in/out-degree for digraphs.
    pub enforced: usize,
    /// Three times the largest degree inside any gadget.
    pub by_gadget_degree: usize,
    /// Three times the largest terminal degree of any gadget.
    pub by_terminal_degree: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReductionOutput {
    pub pipeline: Pipeline,
    pub instance: Instance,
    pub rule: ColoringRule,
    pub r: usize,
    pub girth_claim: usize,
    pub degree_claim: DegreeClaim,
    pub provenance: Vec<Provenance>,
    /// Shared (non-interior) vertices and how they are colored.
    pub anchors: Vec<(usize, Anchor)>,
    pub templates: Vec<GadgetTemplate>,
    pub copies: Vec<GadgetCopy>,
    pub source: Source,
}

impl ReductionOutput {
    /// Output vertices colored like source item `i`, in layout order.
    pub fn carriers(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.anchors
            .iter()
            .filter(move |(_, a)| *a == Anchor::Carrier(i))
            .map(|&(v, _)| v)
    }

    pub fn source_size(&self) -> usize {
        match &self.source {
            Source::Graph(g) => g.n(),
            Source::Nae(i) => i.vars(),
        }
    }
}

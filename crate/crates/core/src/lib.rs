//! Acyclic colorings of graphs, digraphs and tournaments: hardness gadgets,
//! reduction pipelines, exact oracles and planted-partition recovery.

pub mod amplifier;
pub mod bits;
pub mod gadgets;
pub mod graph;
pub mod io;
pub mod nae;
pub mod oracle;
pub mod reductions;
pub mod rng;
pub mod tournaments;

pub use bits::{BitMatrix, BitSet};
pub use graph::{
    is_valid_acyclic_coloring, AcyclicColoringCheck, CertificateError, Coloring, DegreeStats,
    Digraph, Graph, GraphError, Instance, InstanceKind, Tournament,
};
pub use io::{read_instance, write_instance, InstanceFile, IoError};
pub use nae::{NaeError, NaeInstance};
pub use oracle::{OracleBudget, OracleError, OracleOutcome, Verdict};
pub use rng::SeededRng;

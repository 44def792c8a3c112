//! Hardness gadgets and their oracle-checked certificates.

mod certificate;
mod hk;
mod hkr;
mod j1j2;
mod nae;
mod registry;

use thiserror::Error;

use crate::oracle::OracleError;

pub use certificate::{CheckStatus, GadgetCertificate, PropertyCheck};
pub use hk::{build_h_k, HkGadget};
pub use hkr::{build_h_k_r, certify_h_k_r, h_k_r_size, refined_size_bound, verify_h_k_r, Block, BlockedDigraph};
pub use j1j2::{derive_j1_j2, Forcing, J1J2, TerminalGadget};
pub use nae::{build_nae_hard_instance, nae_to_digraph, nae_to_graph};
pub use registry::{certify_user_gadget, registry_get, GadgetKind, RegistryEntry};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GadgetError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("construction bug: property `{property}` failed ({detail})")]
    ConstructionBug { property: String, detail: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("gadget rejected, failed properties: {}", .failed.join(", "))]
    Rejected { failed: Vec<String> },
    #[error("no {kind} gadget available for r={r}, k={k}: {reason}")]
    Unavailable { kind: String, r: usize, k: usize, reason: String },
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

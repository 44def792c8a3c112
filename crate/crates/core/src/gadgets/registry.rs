use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::certificate::{CheckStatus, GadgetCertificate};
use super::hkr::{build_h_k_r, certify_h_k_r};
use super::GadgetError;
use crate::graph::{Coloring, Graph, Instance};
use crate::oracle::{decide_colorable, make_edge_critical_with, ColoringRule, OracleBudget, OracleError, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GadgetKind {
    Proper,
    AcyclicGraph,
    AcyclicDigraph,
}

impl GadgetKind {
    pub fn rule(self) -> ColoringRule {
        match self {
            GadgetKind::Proper => ColoringRule::Proper,
            _ => ColoringRule::Acyclic,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            GadgetKind::Proper => "proper",
            GadgetKind::AcyclicGraph => "acyclic-graph",
            GadgetKind::AcyclicDigraph => "acyclic-digraph",
        }
    }
}

impl fmt::Display for GadgetKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GadgetKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "proper" => Ok(GadgetKind::Proper),
            "acyclic-graph" => Ok(GadgetKind::AcyclicGraph),
            "acyclic-digraph" => Ok(GadgetKind::AcyclicDigraph),
            other => Err(format!("unknown gadget kind `{other}`")),
        }
    }
}

/// A non-`r`-colorable gadget `K` of girth at least `k`, with a critical edge.
#[derive(Clone, Debug, PartialEq)]
pub struct RegistryEntry {
    pub kind: GadgetKind,
    pub r: usize,
    pub k: usize,
    pub name: String,
    pub instance: Instance,
    pub critical_edge: (usize, usize),
    /// A coloring of `instance` minus the critical edge.
    pub witness: Coloring,
    pub certificate: GadgetCertificate,
}

fn unavailable(kind: GadgetKind, r: usize, k: usize, reason: &str) -> GadgetError {
    GadgetError::Unavailable {
        kind: kind.to_string(),
        r,
        k,
        reason: reason.to_string(),
    }
}

fn smallest_odd_at_least(k: usize) -> usize {
    let l = k.max(3);
    if l % 2 == 1 {
        l
    } else {
        l + 1
    }
}

fn builtin(kind: GadgetKind, r: usize, k: usize) -> Result<(String, Instance), GadgetError> {
    let general = "larger girth requires the probabilistic constructions, which are not built here; \
                   supply a certified gadget file instead";
    if r == 0 {
        return Err(unavailable(kind, r, k, "every nonempty instance is trivially non-0-colorable"));
    }
    Ok(match kind {
        GadgetKind::Proper => match r {
            1 => ("K2".into(), Instance::Graph(Graph::complete(2))),
            2 => {
                let l = smallest_odd_at_least(k);
                (format!("C{l}"), Instance::Graph(Graph::cycle(l)))
            }
            3 if k <= 4 => ("Grotzsch".into(), Instance::Graph(Graph::grotzsch())),
            _ if k <= 3 => (format!("K{}", r + 1), Instance::Graph(Graph::complete(r + 1))),
            _ => return Err(unavailable(kind, r, k, general)),
        },
        GadgetKind::AcyclicGraph => match r {
            1 => {
                let l = k.max(3);
                (format!("C{l}"), Instance::Graph(Graph::cycle(l)))
            }
            _ if k <= 3 => (format!("K{}", 2 * r + 1), Instance::Graph(Graph::complete(2 * r + 1))),
            _ => return Err(unavailable(kind, r, k, general)),
        },
        GadgetKind::AcyclicDigraph => {
            let kk = k.max(3);
            (format!("H^{kk}_{r}"), Instance::Digraph(build_h_k_r(kk, r)?.digraph))
        }
    })
}

fn finish(
    kind: GadgetKind,
    r: usize,
    k: usize,
    name: String,
    instance: Instance,
    mut cert: GadgetCertificate,
    budget: &OracleBudget,
) -> Result<RegistryEntry, GadgetError> {
    let Some(uv) = instance.edge_list().first().copied() else {
        return Err(unavailable(kind, r, k, "gadget has no edges"));
    };
    let witness = match decide_colorable(&instance.without_edge(uv.0, uv.1), kind.rule(), r, budget)?.verdict {
        Verdict::Yes(w) => w,
        Verdict::No => {
            return Err(GadgetError::ConstructionBug {
                property: "edge-critical".into(),
                detail: format!("{name} minus {}-{} is not {r}-colorable", uv.0, uv.1),
            })
        }
        Verdict::Inconclusive => {
            return Err(unavailable(kind, r, k, "no coloring of the gadget minus its critical edge within budget"))
        }
    };
    cert.terminals = vec![uv.0, uv.1];
    Ok(RegistryEntry {
        kind,
        r,
        k,
        name,
        instance,
        critical_edge: uv,
        witness,
        certificate: cert,
    })
}

/// Looks up a built-in gadget and certifies it on the spot.
pub fn registry_get(kind: GadgetKind, r: usize, k: usize, budget: &OracleBudget) -> Result<RegistryEntry, GadgetError> {
    let (name, instance) = builtin(kind, r, k)?;
    let cert = match (&instance, kind) {
        (Instance::Digraph(_), GadgetKind::AcyclicDigraph) => {
            let kk = k.max(3);
            let mut cert = certify_h_k_r(&build_h_k_r(kk, r)?, kk, r, budget)?;
            cert.check_girth_at_least(&instance, k);
            cert
        }
        _ => {
            let mut cert = GadgetCertificate::new(name.clone(), &instance, kind.rule(), r, budget);
            cert.check_girth_at_least(&instance, k);
            cert.check_non_colorable(&instance, budget)?;
            cert.check_edge_critical(&instance, budget)?;
            cert
        }
    };
    if let Some(bad) = cert.checks.iter().find(|c| c.status == CheckStatus::Failed) {
        return Err(GadgetError::ConstructionBug {
            property: bad.property.clone(),
            detail: bad.detail.clone(),
        });
    }
    finish(kind, r, k, name, instance, cert, budget)
}

/// Accepts an external gadget if it has girth at least `k` and is not
/// `r`-colorable; it is first reduced to an edge-critical subgraph.
pub fn certify_user_gadget(
    kind: GadgetKind,
    r: usize,
    k: usize,
    instance: &Instance,
    budget: &OracleBudget,
) -> Result<RegistryEntry, GadgetError> {
    let directed_ok = matches!(kind, GadgetKind::AcyclicDigraph) == instance.is_directed();
    if !directed_ok {
        return Err(GadgetError::Rejected {
            failed: vec![format!("kind: a {kind} gadget cannot be a {}", instance.kind().as_str())],
        });
    }
    let mut failed = Vec::new();
    if instance.girth().is_some_and(|g| g < k) {
        failed.push("girth".to_string());
    }
    let critical = match make_edge_critical_with(instance, kind.rule(), r, budget) {
        Ok(c) => Some(c.instance),
        Err(OracleError::AlreadyColorable { .. }) => {
            failed.push("non-colorable".to_string());
            None
        }
        Err(OracleError::CriticalInconclusive { .. }) => {
            failed.push("non-colorable (undecided within budget)".to_string());
            None
        }
        Err(e) => return Err(e.into()),
    };
    let Some(reduced) = critical.filter(|_| failed.is_empty()) else {
        return Err(GadgetError::Rejected { failed });
    };
    let mut cert = GadgetCertificate::new("user", &reduced, kind.rule(), r, budget);
    cert.check_girth_at_least(&reduced, k);
    cert.check_non_colorable(&reduced, budget)?;
    cert.check_edge_critical(&reduced, budget)?;
    let failed = cert.failures();
    if !failed.is_empty() {
        return Err(GadgetError::Rejected { failed });
    }
    finish(kind, r, k, "user".into(), reduced, cert, budget)
}

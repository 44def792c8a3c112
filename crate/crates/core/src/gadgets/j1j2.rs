use serde::{Deserialize, Serialize};

use super::certificate::{CheckStatus, GadgetCertificate};
use super::GadgetError;
use crate::graph::{Coloring, Digraph, Graph, Instance};
use crate::oracle::{decide_colorable, enumerate_colorings, ColoringRule, OracleBudget, Verdict};

/// What every valid coloring of a terminal gadget does to its two terminals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Forcing {
    Equal,
    Different,
}

impl Forcing {
    pub fn holds(self, a: usize, b: usize) -> bool {
        match self {
            Forcing::Equal => a == b,
            Forcing::Different => a != b,
        }
    }
}

/// A colorable gadget whose terminals are forced equal or different.
#[derive(Clone, Debug, PartialEq)]
pub struct TerminalGadget {
    pub instance: Instance,
    pub terminals: (usize, usize),
    pub forcing: Forcing,
    pub rule: ColoringRule,
    pub r: usize,
    /// One valid coloring; others are obtained by permuting colors.
    pub witness: Coloring,
    pub certificate: GadgetCertificate,
}

impl TerminalGadget {
    /// `K - uv` with terminals `(u, v)` forced equal. Checks that the input is
    /// non-colorable and that the deletion is colorable, then enumerates every
    /// coloring of the result to confirm the forcing.
    pub fn from_critical(
        name: &str,
        k: &Instance,
        uv: (usize, usize),
        rule: ColoringRule,
        r: usize,
        budget: &OracleBudget,
    ) -> Result<TerminalGadget, GadgetError> {
        check_preconditions(k, uv, rule, r, budget)?;
        let j = k.without_edge(uv.0, uv.1);
        certify_terminal(name, j, uv, Forcing::Equal, rule, r, budget)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct J1J2 {
    pub j1: TerminalGadget,
    pub j2: TerminalGadget,
}

fn check_preconditions(
    k: &Instance,
    (u, v): (usize, usize),
    rule: ColoringRule,
    r: usize,
    budget: &OracleBudget,
) -> Result<(), GadgetError> {
    let has = match k {
        Instance::Graph(g) => g.has_edge(u, v),
        Instance::Digraph(d) => d.has_arc(u, v),
        Instance::Tournament(t) => t.beats(u, v),
    };
    if !has {
        return Err(GadgetError::Precondition(format!("{u}-{v} is not an edge of the gadget")));
    }
    match decide_colorable(k, rule, r, budget)?.verdict {
        Verdict::No => {}
        Verdict::Yes(_) => return Err(GadgetError::Precondition(format!("gadget is {r}-colorable"))),
        Verdict::Inconclusive => {
            return Err(GadgetError::Precondition(format!("could not certify that the gadget is not {r}-colorable")))
        }
    }
    match decide_colorable(&k.without_edge(u, v), rule, r, budget)?.verdict {
        Verdict::Yes(_) => Ok(()),
        Verdict::No => Err(GadgetError::Precondition(format!("{u}-{v} is not critical"))),
        Verdict::Inconclusive => Err(GadgetError::Precondition(format!(
            "could not certify a coloring of the gadget minus {u}-{v}"
        ))),
    }
}

fn certify_terminal(
    name: &str,
    inst: Instance,
    terminals: (usize, usize),
    forcing: Forcing,
    rule: ColoringRule,
    r: usize,
    budget: &OracleBudget,
) -> Result<TerminalGadget, GadgetError> {
    let mut cert = GadgetCertificate::new(name, &inst, rule, r, budget);
    cert.terminals = vec![terminals.0, terminals.1];
    let mut witness = None;
    let mut violation = None;
    let out = enumerate_colorings(&inst, rule, r, budget, |c| {
        if witness.is_none() {
            witness = Some(c.clone());
        }
        if !forcing.holds(c.color(terminals.0), c.color(terminals.1)) {
            violation = Some(c.clone());
            return false;
        }
        true
    })?;
    let Some(witness) = witness else {
        return Err(GadgetError::Precondition(format!("{name} has no {r}-coloring")));
    };
    cert.push("colorable", CheckStatus::Verified, format!("{} colorings enumerated", out.count));
    let label = match forcing {
        Forcing::Equal => "terminals-equal",
        Forcing::Different => "terminals-differ",
    };
    if let Some(bad) = violation {
        cert.push(label, CheckStatus::Failed, format!("violated by {:?}", bad.colors()));
    } else if out.complete {
        cert.push(label, CheckStatus::Verified, format!("all {} colorings checked", out.count));
    } else {
        cert.push(label, CheckStatus::Unverified, format!("{} colorings checked before budget ran out", out.count));
    }
    Ok(TerminalGadget {
        instance: inst,
        terminals,
        forcing,
        rule,
        r,
        witness,
        certificate: cert,
    })
}

/// `J1 = K - uv` and `J2 = K` with `uv` subdivided by a new vertex `w`.
///
/// Undirected terminals are `(u, v)` for `J1` and `(u, w)` for `J2`. For
/// digraphs `J1` uses `(v, u)`: any directed path from `v` to `u` in `K - uv`
/// closes a cycle with `uv`, so it has at least `girth - 1` arcs.
pub fn derive_j1_j2(k: &Instance, uv: (usize, usize), r: usize, budget: &OracleBudget) -> Result<J1J2, GadgetError> {
    let (u, v) = uv;
    check_preconditions(k, uv, ColoringRule::Acyclic, r, budget)?;
    let j1 = k.without_edge(u, v);
    let w = k.n();
    let (j2, t1) = match &j1 {
        Instance::Graph(g) => (
            Instance::Graph(Graph::new(w + 1, g.edges().chain([(u, w), (w, v)])).expect("fresh vertex")),
            (u, v),
        ),
        Instance::Digraph(d) => (
            Instance::Digraph(Digraph::new(w + 1, d.arcs().chain([(u, w), (w, v)])).expect("fresh vertex")),
            (v, u),
        ),
        Instance::Tournament(_) => unreachable!("deleting an arc never leaves a tournament"),
    };
    let j1 = certify_terminal("J1", j1, t1, Forcing::Equal, ColoringRule::Acyclic, r, budget)?;
    let j2 = certify_terminal("J2", j2, (u, w), Forcing::Different, ColoringRule::Acyclic, r, budget)?;
    for j in [&j1, &j2] {
        if let Some(p) = j.certificate.failures().first() {
            return Err(GadgetError::ConstructionBug {
                property: p.clone(),
                detail: format!("{} forcing does not hold", j.certificate.name),
            });
        }
    }
    Ok(J1J2 { j1, j2 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gadgets::build_h_k_r;

    #[test]
    fn h32_forcing() {
        let h = build_h_k_r(3, 2).unwrap();
        let k = Instance::Digraph(h.digraph);
        let out = derive_j1_j2(&k, (0, 1), 2, &OracleBudget::default()).unwrap();
        assert_eq!(out.j1.terminals, (1, 0));
        assert_eq!(out.j1.instance.n(), 7);
        assert_eq!(out.j2.instance.n(), 8);
        assert_eq!(out.j1.certificate.status("terminals-equal"), Some(CheckStatus::Verified));
        assert_eq!(out.j2.certificate.status("terminals-differ"), Some(CheckStatus::Verified));
    }

    #[test]
    fn colorable_input_rejected() {
        let k = Instance::Graph(Graph::complete(4));
        assert!(matches!(
            derive_j1_j2(&k, (0, 1), 2, &OracleBudget::default()),
            Err(GadgetError::Precondition(_))
        ));
    }
}

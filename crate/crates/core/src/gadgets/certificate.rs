use serde::{Deserialize, Serialize};

use crate::graph::Instance;
use crate::oracle::{decide_colorable, ColoringRule, OracleBudget, OracleError, Verdict};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Verified,
    Failed,
    /// Claimed but not checked at this size (budget ran out).
    Unverified,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyCheck {
    pub property: String,
    pub status: CheckStatus,
    pub detail: String,
}

/// A record of which properties of a gadget were checked and how.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GadgetCertificate {
    pub name: String,
    pub kind: String,
    pub rule: ColoringRule,
    pub vertices: usize,
    pub edges: usize,
    pub girth: Option<usize>,
    /// Color count the gadget is certified not to admit.
    pub r: usize,
    pub critical: bool,
    pub terminals: Vec<usize>,
    pub node_limit: u64,
    pub time_limit_secs: f64,
    pub checks: Vec<PropertyCheck>,
}

impl GadgetCertificate {
    pub fn new(name: impl Into<String>, inst: &Instance, rule: ColoringRule, r: usize, budget: &OracleBudget) -> Self {
        GadgetCertificate {
            name: name.into(),
            kind: inst.kind().as_str().to_string(),
            rule,
            vertices: inst.n(),
            edges: inst.m(),
            girth: inst.girth(),
            r,
            critical: false,
            terminals: Vec::new(),
            node_limit: budget.node_limit,
            time_limit_secs: budget.time_limit.as_secs_f64(),
            checks: Vec::new(),
        }
    }

    pub fn push(&mut self, property: &str, status: CheckStatus, detail: impl Into<String>) {
        self.checks.push(PropertyCheck {
            property: property.to_string(),
            status,
            detail: detail.into(),
        });
    }

    pub fn status(&self, property: &str) -> Option<CheckStatus> {
        self.checks.iter().find(|c| c.property == property).map(|c| c.status)
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| c.status == CheckStatus::Failed)
            .map(|c| c.property.clone())
            .collect()
    }

    pub fn fully_verified(&self) -> bool {
        self.checks.iter().all(|c| c.status == CheckStatus::Verified)
    }

    pub(crate) fn check_girth_at_least(&mut self, inst: &Instance, k: usize) {
        let g = inst.girth();
        let status = if g.is_none_or(|g| g >= k) {
            CheckStatus::Verified
        } else {
            CheckStatus::Failed
        };
        self.push("girth", status, format!("girth {} against required {k}", fmt_girth(g)));
    }

    pub(crate) fn check_non_colorable(&mut self, inst: &Instance, budget: &OracleBudget) -> Result<(), OracleError> {
        let out = decide_colorable(inst, self.rule, self.r, budget)?;
        let (status, detail) = match out.verdict {
            Verdict::No => (CheckStatus::Verified, format!("search exhausted after {} nodes", out.nodes)),
            Verdict::Yes(_) => (CheckStatus::Failed, format!("found a {}-coloring", self.r)),
            Verdict::Inconclusive => (CheckStatus::Unverified, format!("budget ran out after {} nodes", out.nodes)),
        };
        self.push("non-colorable", status, detail);
        Ok(())
    }

    /// Every single-edge deletion must become colorable.
    pub(crate) fn check_edge_critical(&mut self, inst: &Instance, budget: &OracleBudget) -> Result<(), OracleError> {
        let mut unverified = 0;
        let mut nodes = 0;
        let edges = inst.edge_list();
        for &(u, v) in &edges {
            let out = decide_colorable(&inst.without_edge(u, v), self.rule, self.r, budget)?;
            nodes += out.nodes;
            match out.verdict {
                Verdict::Yes(_) => {}
                Verdict::No => {
                    self.push(
                        "edge-critical",
                        CheckStatus::Failed,
                        format!("removing {u}-{v} leaves it non-{}-colorable", self.r),
                    );
                    return Ok(());
                }
                Verdict::Inconclusive => unverified += 1,
            }
        }
        if unverified == 0 {
            self.critical = true;
            self.push(
                "edge-critical",
                CheckStatus::Verified,
                format!("all {} deletions colorable, {nodes} nodes", edges.len()),
            );
        } else {
            self.push(
                "edge-critical",
                CheckStatus::Unverified,
                format!("{unverified} of {} deletions undecided", edges.len()),
            );
        }
        Ok(())
    }
}

pub(crate) fn fmt_girth(g: Option<usize>) -> String {
    g.map_or_else(|| "none".to_string(), |g| g.to_string())
}

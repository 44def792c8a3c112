use serde::{Deserialize, Serialize};

use super::certificate::{fmt_girth, CheckStatus, GadgetCertificate};
use super::GadgetError;
use crate::graph::{Digraph, Instance};
use crate::oracle::{ColoringRule, OracleBudget};

/// A top-level copy of a smaller gadget inside `H^k_r`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub start: usize,
    pub len: usize,
    /// Position in the cyclic block order.
    pub copy: usize,
    /// Recursion level of the copy, i.e. the `r` it was built for.
    pub level: usize,
}

impl Block {
    pub fn vertices(&self) -> std::ops::Range<usize> {
        self.start..self.start + self.len
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockedDigraph {
    pub digraph: Digraph,
    pub k: usize,
    pub r: usize,
    pub blocks: Vec<Block>,
}

impl BlockedDigraph {
    /// Blocks partition the vertices and each block sends every arc to the next.
    pub fn blocks_consistent(&self) -> bool {
        let n = self.digraph.n();
        if self.blocks.is_empty() {
            return n <= 1;
        }
        let mut next = 0;
        for b in &self.blocks {
            if b.start != next {
                return false;
            }
            next += b.len;
        }
        if next != n {
            return false;
        }
        let m = self.blocks.len();
        (0..m).all(|i| {
            let (a, b) = (&self.blocks[i], &self.blocks[(i + 1) % m]);
            a.vertices().all(|u| b.vertices().all(|v| self.digraph.has_arc(u, v)))
        })
    }
}

fn split(k: usize, r: usize) -> (usize, usize, usize, usize) {
    // r - 1 = a * floor((r-1)/k) + b * ceil((r-1)/k) with a + b = k.
    let q = (r - 1) / k;
    let rem = (r - 1) % k;
    let (a, b) = if rem == 0 { (k, 0) } else { (k - rem, rem) };
    let r1 = r - 1 - q;
    let r2 = r - 1 - (q + usize::from(rem != 0));
    (a, b, r1, r2)
}

/// Vertex count of `H^k_r`, without building it. `None` on overflow.
pub fn h_k_r_size(k: usize, r: usize) -> Option<usize> {
    if r == 0 {
        return Some(1);
    }
    let (a, b, r1, r2) = split(k, r);
    let s1 = h_k_r_size(k, r1)?.checked_mul(a)?;
    let s2 = if b == 0 { 0 } else { h_k_r_size(k, r2)?.checked_mul(b)? };
    s1.checked_add(s2)
}

/// `k^ceil(k (1 + ln(r/k)))`, the sharper size bound for `k <= r`.
pub fn refined_size_bound(k: usize, r: usize) -> Option<f64> {
    if k > r {
        return None;
    }
    let e = (k as f64 * (1.0 + (r as f64 / k as f64).ln())).ceil();
    Some((k as f64).powf(e))
}

fn lay_out(k: usize, r: usize, offset: usize, arcs: &mut Vec<(usize, usize)>) -> usize {
    if r == 0 {
        return 1;
    }
    let (a, b, r1, r2) = split(k, r);
    let mut spans = Vec::with_capacity(a + b);
    let mut at = offset;
    for i in 0..a + b {
        let level = if i < a { r1 } else { r2 };
        let len = lay_out(k, level, at, arcs);
        spans.push((at, len));
        at += len;
    }
    link_cyclically(&spans, arcs);
    at - offset
}

fn link_cyclically(spans: &[(usize, usize)], arcs: &mut Vec<(usize, usize)>) {
    let m = spans.len();
    for i in 0..m {
        let (s, sl) = spans[i];
        let (t, tl) = spans[(i + 1) % m];
        for u in s..s + sl {
            for v in t..t + tl {
                arcs.push((u, v));
            }
        }
    }
}

/// The digraph `H^k_r`: not acyclically `r`-colorable, every arc critical,
/// directed girth `k`, at most `k^r` vertices. `H^k_0` is a single vertex and
/// `H^k_1` is the directed `k`-cycle.
pub fn build_h_k_r(k: usize, r: usize) -> Result<BlockedDigraph, GadgetError> {
    if k < 3 {
        return Err(GadgetError::InvalidParameters(format!("k must be at least 3, got {k}")));
    }
    let n = h_k_r_size(k, r)
        .filter(|&n| n <= 1 << 24)
        .ok_or_else(|| GadgetError::InvalidParameters(format!("H^{k}_{r} is too large to build")))?;
    let mut arcs = Vec::new();
    let mut blocks = Vec::new();
    if r > 0 {
        let (a, b, r1, r2) = split(k, r);
        let mut at = 0;
        let mut spans = Vec::new();
        for copy in 0..a + b {
            let level = if copy < a { r1 } else { r2 };
            let len = lay_out(k, level, at, &mut arcs);
            blocks.push(Block { start: at, len, copy, level });
            spans.push((at, len));
            at += len;
        }
        link_cyclically(&spans, &mut arcs);
    }
    let digraph = Digraph::new(n, arcs).expect("recursion emits each arc once");
    Ok(BlockedDigraph { digraph, k, r, blocks })
}

/// Runs every check and records the outcome of each; never errors on a
/// failed property.
pub fn certify_h_k_r(g: &BlockedDigraph, k: usize, r: usize, budget: &OracleBudget) -> Result<GadgetCertificate, GadgetError> {
    let inst = Instance::Digraph(g.digraph.clone());
    let mut cert = GadgetCertificate::new(format!("H^{k}_{r}"), &inst, ColoringRule::Acyclic, r, budget);
    let n = g.digraph.n();

    let bound = (k as f64).powi(r as i32);
    let status = if (n as f64) <= bound { CheckStatus::Verified } else { CheckStatus::Failed };
    cert.push("size", status, format!("{n} vertices against k^r = {bound}"));
    if let Some(refined) = refined_size_bound(k, r) {
        let status = if (n as f64) <= refined { CheckStatus::Verified } else { CheckStatus::Failed };
        cert.push("refined-size", status, format!("{n} vertices against {refined} (natural log)"));
    }

    cert.check_non_colorable(&inst, budget)?;
    cert.check_edge_critical(&inst, budget)?;

    let girth = g.digraph.directed_girth();
    let ok = match r {
        0 => girth.is_none(),
        _ => girth == Some(k),
    };
    cert.push(
        "directed-girth",
        if ok { CheckStatus::Verified } else { CheckStatus::Failed },
        format!("directed girth {} against expected {k}", fmt_girth(girth)),
    );

    if let Some((u, v)) = g.digraph.arcs().next() {
        cert.terminals = vec![u, v];
    }
    Ok(cert)
}

/// Like [`certify_h_k_r`] but turns the first failed property into an error.
pub fn verify_h_k_r(g: &BlockedDigraph, k: usize, r: usize, budget: &OracleBudget) -> Result<GadgetCertificate, GadgetError> {
    let cert = certify_h_k_r(g, k, r, budget)?;
    if let Some(bad) = cert.checks.iter().find(|c| c.status == CheckStatus::Failed) {
        return Err(GadgetError::ConstructionBug {
            property: bad.property.clone(),
            detail: bad.detail.clone(),
        });
    }
    Ok(cert)
}

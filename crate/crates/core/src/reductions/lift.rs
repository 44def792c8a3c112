use super::{Anchor, Pipeline, ReductionError, ReductionOutput, Source, SourceCertificate};
use crate::graph::{AcyclicColoringCheck, Coloring, Instance};
use crate::oracle::ColoringRule;

fn output_valid(out: &ReductionOutput, c: &Coloring) -> Result<bool, ReductionError> {
    let ok = match (out.rule, &out.instance) {
        (ColoringRule::Proper, Instance::Graph(g)) => g.is_proper_coloring(c),
        (ColoringRule::Proper, _) => Ok(false),
        (ColoringRule::Acyclic, inst) => inst.is_acyclic_coloring(c),
    };
    ok.map_err(|e| ReductionError::InvalidCertificate(e.to_string()))
}

/// Builds an output coloring from a source certificate: shared vertices take
/// the source colors, and each gadget copy takes its template's witness
/// under a color permutation that matches the terminals.
pub fn lift_solution(out: &ReductionOutput, cert: &SourceCertificate) -> Result<Coloring, ReductionError> {
    if out.pipeline == Pipeline::SplitTree {
        return Err(ReductionError::Unsupported("tree splitting has no certificate map".into()));
    }
    let values: Vec<usize> = match (&out.source, cert) {
        (Source::Graph(g), SourceCertificate::Coloring(c)) => {
            let proper = g
                .is_proper_coloring(c)
                .map_err(|e| ReductionError::InvalidCertificate(e.to_string()))?;
            if !proper {
                return Err(ReductionError::InvalidCertificate("source coloring is not proper".into()));
            }
            if c.colors().iter().any(|&x| x >= out.r) {
                return Err(ReductionError::InvalidCertificate(format!("source coloring uses more than {} colors", out.r)));
            }
            c.colors().to_vec()
        }
        (Source::Nae(i), SourceCertificate::Assignment(a)) => {
            if !i.is_satisfied_by(a) {
                return Err(ReductionError::InvalidCertificate("assignment violates a clause".into()));
            }
            a.clone()
        }
        _ => return Err(ReductionError::InvalidCertificate("certificate kind does not match the source".into())),
    };
    let r = out.r;
    let n = out.instance.n();
    let mut colors = vec![usize::MAX; n];
    for &(v, a) in &out.anchors {
        colors[v] = match a {
            Anchor::Carrier(i) => values[i],
            Anchor::Opposite(i) => 1 - values[i],
        };
    }
    for (ci, copy) in out.copies.iter().enumerate() {
        let tpl = &out.templates[copy.template];
        let mut map = vec![usize::MAX; r];
        let mut taken = vec![false; r];
        for &t in &tpl.terminals {
            let (from, to) = (tpl.witness.color(t), colors[copy.vertices[t]]);
            if map[from] == usize::MAX && !taken[to] {
                map[from] = to;
                taken[to] = true;
            } else if map[from] != to {
                return Err(ReductionError::LiftFailed(format!(
                    "copy {ci} of {}: terminal colors contradict the gadget",
                    tpl.name
                )));
            }
        }
        let mut free = (0..r).filter(|&c| !taken[c]);
        for slot in map.iter_mut().filter(|s| **s == usize::MAX) {
            *slot = free.next().expect("a permutation has room");
        }
        for (i, &v) in copy.vertices.iter().enumerate() {
            if !tpl.terminals.contains(&i) {
                colors[v] = map[tpl.witness.color(i)];
            }
        }
    }
    let coloring = Coloring::new(r, colors).map_err(|e| ReductionError::LiftFailed(e.to_string()))?;
    if !output_valid(out, &coloring)? {
        return Err(ReductionError::LiftFailed(format!("{} output coloring has a bad class", out.pipeline)));
    }
    Ok(coloring)
}

/// Reads a source certificate off a valid output coloring: tree roots for
/// graph sources, the first occurrence (or the star center) for variables.
pub fn pull_back(out: &ReductionOutput, c: &Coloring) -> Result<SourceCertificate, ReductionError> {
    if !output_valid(out, c)? {
        return Err(ReductionError::InvalidCertificate("coloring is not valid for the output".into()));
    }
    let read = |i: usize| -> usize {
        if let Some(v) = out.carriers(i).next() {
            return c.color(v);
        }
        out.anchors
            .iter()
            .find(|(_, a)| *a == Anchor::Opposite(i))
            .map_or(0, |&(v, _)| 1 - c.color(v))
    };
    match &out.source {
        Source::Graph(g) => {
            let colors = (0..g.n()).map(read).collect();
            let coloring = Coloring::new(out.r.max(1), colors).map_err(|e| ReductionError::PullBackFailed(e.to_string()))?;
            if !g.is_proper_coloring(&coloring).unwrap_or(false) {
                return Err(ReductionError::PullBackFailed("source coloring is not proper".into()));
            }
            Ok(SourceCertificate::Coloring(coloring))
        }
        Source::Nae(inst) => {
            let a: Vec<usize> = (0..inst.vars()).map(read).collect();
            if !inst.is_satisfied_by(&a) {
                return Err(ReductionError::PullBackFailed("assignment violates a clause".into()));
            }
            Ok(SourceCertificate::Assignment(a))
        }
    }
}

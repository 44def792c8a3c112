use super::{decide_colorable, ColoringRule, OracleBudget, OracleError, Verdict};
use crate::graph::{Coloring, Instance};

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalOutcome {
    pub instance: Instance,
    /// Smallest remaining edge and an `r`-coloring of the instance without it.
    /// `None` only when no edges remain (e.g. a single vertex with `r = 0`).
    pub critical_edge: Option<((usize, usize), Coloring)>,
    pub removed: Vec<(usize, usize)>,
    pub nodes: u64,
}

/// Deletes edges in ascending order while the instance stays non-`r`-colorable.
///
/// One pass suffices: an edge kept because its removal allowed a coloring stays
/// critical, since later deletions only shrink the instance.
pub fn make_edge_critical(
    g: &Instance,
    r: usize,
    budget: &OracleBudget,
) -> Result<CriticalOutcome, OracleError> {
    make_edge_critical_with(g, ColoringRule::Acyclic, r, budget)
}

pub fn make_edge_critical_with(
    g: &Instance,
    rule: ColoringRule,
    r: usize,
    budget: &OracleBudget,
) -> Result<CriticalOutcome, OracleError> {
    let first = decide_colorable(g, rule, r, budget)?;
    let mut nodes = first.nodes;
    let edges = g.edge_list();
    match first.verdict {
        Verdict::Yes(_) => return Err(OracleError::AlreadyColorable { r }),
        Verdict::Inconclusive => {
            return Err(OracleError::CriticalInconclusive {
                removed: 0,
                total: edges.len(),
            })
        }
        Verdict::No => {}
    }
    let mut current = g.clone();
    let mut removed = Vec::new();
    let mut kept: Vec<((usize, usize), Coloring)> = Vec::new();
    for &(u, v) in &edges {
        let candidate = current.without_edge(u, v);
        let out = decide_colorable(&candidate, rule, r, budget)?;
        nodes += out.nodes;
        match out.verdict {
            Verdict::No => {
                current = candidate;
                removed.push((u, v));
            }
            Verdict::Yes(w) => kept.push(((u, v), w)),
            Verdict::Inconclusive => {
                return Err(OracleError::CriticalInconclusive {
                    removed: removed.len(),
                    total: edges.len(),
                })
            }
        }
    }
    Ok(CriticalOutcome {
        instance: current,
        critical_edge: kept.into_iter().next(),
        removed,
        nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{AcyclicColoringCheck, Digraph, Graph};

    #[test]
    fn pendant_edge_is_dropped() {
        let k5 = Graph::complete(5);
        let g = Graph::new(6, k5.edges().chain([(4, 5)])).unwrap();
        let out = make_edge_critical(&Instance::Graph(g), 2, &OracleBudget::default()).unwrap();
        assert!(out.removed.contains(&(4, 5)));
        let Instance::Graph(core) = &out.instance else { panic!() };
        assert_eq!(core.m(), 10);
        let ((u, v), w) = out.critical_edge.unwrap();
        assert_eq!((u, v), (0, 1));
        assert!(core.without_edge(u, v).is_acyclic_coloring(&w).unwrap());
    }

    #[test]
    fn triangle_is_already_critical() {
        let c3 = Instance::Digraph(Digraph::directed_cycle(3));
        let out = make_edge_critical(&c3, 1, &OracleBudget::default()).unwrap();
        assert_eq!(out.instance, c3);
        assert!(out.removed.is_empty());
    }

    #[test]
    fn colorable_input_rejected() {
        let p = Instance::Graph(Graph::path(3));
        assert_eq!(
            make_edge_critical(&p, 1, &OracleBudget::default()),
            Err(OracleError::AlreadyColorable { r: 1 })
        );
    }
}

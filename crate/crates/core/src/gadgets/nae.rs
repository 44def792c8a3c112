use crate::graph::{Digraph, Graph};
use crate::nae::NaeInstance;

fn k_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..=n - (k - cur.len()) {
            cur.push(x);
            go(x + 1, n, k, cur, out);
            cur.pop();
        }
    }
    if k <= n {
        go(0, n, k, &mut cur, &mut out);
    }
    out
}

/// `(k-1) r + 1` variables and every `k`-subset as a clause. Unsatisfiable:
/// some value is taken by `k` variables.
pub fn build_nae_hard_instance(r: usize, k: usize) -> NaeInstance {
    let n = (k - 1) * r + 1;
    NaeInstance::new(n, r, k, k_subsets(n, k)).expect("subsets are valid clauses")
}

/// One vertex per variable, one directed cycle per clause in clause order.
pub fn nae_to_digraph(inst: &NaeInstance) -> Digraph {
    let arcs = inst.clauses().iter().flat_map(|c| (0..c.len()).map(move |i| (c[i], c[(i + 1) % c.len()])));
    Digraph::from_arcs_merged(inst.vars(), arcs).expect("clause entries are valid vertices")
}

/// Undirected version of [`nae_to_digraph`].
pub fn nae_to_graph(inst: &NaeInstance) -> Graph {
    let edges = inst.clauses().iter().flat_map(|c| (0..c.len()).map(move |i| (c[i], c[(i + 1) % c.len()])));
    Graph::from_edges_merged(inst.vars(), edges).expect("clause entries are valid vertices")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hard_instance_shapes() {
        let i = build_nae_hard_instance(2, 3);
        assert_eq!((i.vars(), i.clauses().len()), (5, 10));
        let i = build_nae_hard_instance(3, 3);
        assert_eq!((i.vars(), i.clauses().len()), (7, 35));
        let i = build_nae_hard_instance(2, 4);
        assert_eq!((i.vars(), i.clauses().len()), (7, 35));
    }

    #[test]
    fn single_clause_cycle() {
        let i = NaeInstance::new(3, 2, 3, vec![vec![0, 1, 2]]).unwrap();
        let d = nae_to_digraph(&i);
        assert_eq!(d.arcs().collect::<Vec<_>>(), vec![(0, 1), (1, 2), (2, 0)]);
        assert_eq!(nae_to_graph(&i).m(), 3);
    }

    #[test]
    fn opposite_traversals_give_digons() {
        // (0,1,2) closes with 2->0, (0,2,3) starts with 0->2.
        let d = nae_to_digraph(&build_nae_hard_instance(2, 3));
        assert!(d.has_digon());
        assert_eq!(d.directed_girth(), Some(2));
    }
}

use super::assemble::Builder;
use super::{Anchor, DegreeClaim, Pipeline, Provenance, ReductionError, ReductionOutput, Source};
use crate::graph::{Graph, Instance};
use crate::oracle::ColoringRule;

/// A rooted binary tree in preorder; node 0 is the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeShape {
    pub parent: Vec<Option<usize>>,
    /// Leaves from left to right.
    pub leaves: Vec<usize>,
}

impl TreeShape {
    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// `(parent, child)` pairs in preorder of the child.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parent.iter().enumerate().filter_map(|(c, p)| p.map(|p| (p, c)))
    }
}

/// Minimum-height binary tree with `leaves` leaves: `2 leaves - 1` nodes, the
/// left subtree taking the larger half. Zero or one leaf gives a single node.
pub fn balanced_tree(leaves: usize) -> TreeShape {
    fn grow(l: usize, parent: Option<usize>, t: &mut TreeShape) {
        let id = t.parent.len();
        t.parent.push(parent);
        if l <= 1 {
            t.leaves.push(id);
            return;
        }
        grow(l.div_ceil(2), Some(id), t);
        grow(l / 2, Some(id), t);
    }
    let mut t = TreeShape {
        parent: Vec::new(),
        leaves: Vec::new(),
    };
    grow(leaves.max(1), None, &mut t);
    t
}

/// Per source vertex: output ids of its tree nodes, plus the shape.
pub(crate) struct Forest {
    pub shapes: Vec<TreeShape>,
    pub ids: Vec<Vec<usize>>,
}

impl Forest {
    /// Output vertex of the leaf of `T_x` that faces neighbor `y`.
    pub fn leaf(&self, g: &Graph, x: usize, y: usize) -> usize {
        let pos = g.neighbors(x).binary_search(&y).expect("y is a neighbor of x");
        self.ids[x][self.shapes[x].leaves[pos]]
    }
}

/// Allocates one balanced tree per source vertex, sized by its degree.
pub(crate) fn plant_forest(g: &Graph, b: &mut Builder) -> Forest {
    let mut shapes = Vec::with_capacity(g.n());
    let mut ids = Vec::with_capacity(g.n());
    for x in 0..g.n() {
        let shape = balanced_tree(g.degree(x));
        let node_ids = (0..shape.len())
            .map(|node| b.anchor(Provenance::TreeNode { source: x, node }, Anchor::Carrier(x)))
            .collect();
        shapes.push(shape);
        ids.push(node_ids);
    }
    Forest { shapes, ids }
}

/// Replaces every vertex by a balanced binary tree with one leaf per incident
/// edge, then joins the matching leaves. Maximum degree of the result is 3.
/// For digraphs tree edges point away from the root and each arc keeps its
/// direction between leaves.
pub fn split_binary_tree(g: &Instance) -> Result<ReductionOutput, ReductionError> {
    let (und, directed) = match g {
        Instance::Graph(gr) => (gr.clone(), false),
        Instance::Digraph(d) => {
            if d.has_digon() {
                return Err(ReductionError::Unsupported("digons cannot be split into single leaf edges".into()));
            }
            (d.underlying_graph(), true)
        }
        Instance::Tournament(t) => (t.as_digraph().underlying_graph(), true),
    };
    let mut b = Builder::new(directed);
    let forest = plant_forest(&und, &mut b);
    for x in 0..und.n() {
        for (p, c) in forest.shapes[x].edges() {
            b.edge(forest.ids[x][p], forest.ids[x][c]);
        }
    }
    for (x, y) in g.edge_list() {
        b.edge(forest.leaf(&und, x, y), forest.leaf(&und, y, x));
    }
    let claim = DegreeClaim {
        enforced: 3,
        by_gadget_degree: 3,
        by_terminal_degree: 3,
    };
    b.finish(Pipeline::SplitTree, ColoringRule::Acyclic, 0, 0, claim, Source::Graph(und))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tree_sizes() {
        assert_eq!(balanced_tree(0).len(), 1);
        assert_eq!(balanced_tree(1).len(), 1);
        let t = balanced_tree(3);
        assert_eq!(t.len(), 5);
        assert_eq!(t.leaves.len(), 3);
        assert_eq!(t.parent, vec![None, Some(0), Some(1), Some(1), Some(0)]);
        for l in 2..40 {
            let t = balanced_tree(l);
            assert_eq!(t.len(), 2 * l - 1);
            let height = |mut v: usize| {
                let mut h = 0;
                while let Some(p) = t.parent[v] {
                    v = p;
                    h += 1;
                }
                h
            };
            let max_h = t.leaves.iter().map(|&v| height(v)).max().unwrap();
            assert_eq!(max_h, (l as f64).log2().ceil() as usize);
        }
    }

    #[test]
    fn k4_split() {
        let out = split_binary_tree(&Instance::Graph(Graph::complete(4))).unwrap();
        assert_eq!(out.instance.n(), 20);
        assert_eq!(out.instance.degree_stats().max_degree, 3);
    }

    #[test]
    fn trivial_splits() {
        let out = split_binary_tree(&Instance::Graph(Graph::empty(1))).unwrap();
        assert_eq!((out.instance.n(), out.instance.m()), (1, 0));
        let out = split_binary_tree(&Instance::Graph(Graph::path(2))).unwrap();
        assert_eq!((out.instance.n(), out.instance.m()), (2, 1));
    }
}

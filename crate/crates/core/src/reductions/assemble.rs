use super::{
    Anchor, DegreeClaim, GadgetCopy, GadgetTemplate, Pipeline, Provenance, ReductionError, ReductionOutput, Source,
};
use crate::graph::{Digraph, Graph, Instance};
use crate::oracle::ColoringRule;

/// Collects vertices, edges and gadget copies, then emits a checked output.
/// Shared vertices must be created before any copy is attached so that they
/// occupy the low ids.
pub(crate) struct Builder {
    directed: bool,
    provenance: Vec<Provenance>,
    anchors: Vec<(usize, Anchor)>,
    edges: Vec<(usize, usize)>,
    templates: Vec<GadgetTemplate>,
    copies: Vec<GadgetCopy>,
}

impl Builder {
    pub fn new(directed: bool) -> Self {
        Builder {
            directed,
            provenance: Vec::new(),
            anchors: Vec::new(),
            edges: Vec::new(),
            templates: Vec::new(),
            copies: Vec::new(),
        }
    }

    pub fn anchor(&mut self, p: Provenance, a: Anchor) -> usize {
        let v = self.provenance.len();
        self.provenance.push(p);
        self.anchors.push((v, a));
        v
    }

    pub fn edge(&mut self, u: usize, v: usize) {
        self.edges.push((u, v));
    }

    pub fn template(&mut self, t: GadgetTemplate) -> usize {
        self.templates.push(t);
        self.templates.len() - 1
    }

    /// Glues a fresh copy of `template`, sending its i-th terminal to `targets[i]`.
    pub fn attach(&mut self, template: usize, targets: &[usize]) -> usize {
        let copy = self.copies.len();
        let t = &self.templates[template];
        assert_eq!(t.terminals.len(), targets.len(), "one target per terminal");
        let mut vertices = vec![usize::MAX; t.instance.n()];
        for (&term, &target) in t.terminals.iter().zip(targets) {
            vertices[term] = target;
        }
        for (internal, slot) in vertices.iter_mut().enumerate() {
            if *slot == usize::MAX {
                *slot = self.provenance.len();
                self.provenance.push(Provenance::GadgetInterior { copy, internal });
            }
        }
        for (a, b) in t.instance.edge_list() {
            self.edges.push((vertices[a], vertices[b]));
        }
        self.copies.push(GadgetCopy { template, vertices });
        copy
    }

    pub fn finish(
        self,
        pipeline: Pipeline,
        rule: ColoringRule,
        r: usize,
        girth_claim: usize,
        degree_claim: DegreeClaim,
        source: Source,
    ) -> Result<ReductionOutput, ReductionError> {
        let n = self.provenance.len();
        let instance = if self.directed {
            Instance::Digraph(Digraph::new(n, self.edges).expect("gadget copies share no arcs"))
        } else {
            Instance::Graph(Graph::new(n, self.edges).expect("gadget copies share no edges"))
        };
        if let Some(g) = instance.girth() {
            if g < girth_claim {
                return Err(ReductionError::GirthViolated {
                    found: g,
                    claimed: girth_claim,
                });
            }
        }
        let s = instance.degree_stats();
        let found = if self.directed {
            s.max_in_degree.max(s.max_out_degree)
        } else {
            s.max_degree
        };
        if found > degree_claim.enforced {
            return Err(ReductionError::DegreeViolated {
                found,
                claimed: degree_claim.enforced,
            });
        }
        Ok(ReductionOutput {
            pipeline,
            instance,
            rule,
            r,
            girth_claim,
            degree_claim,
            provenance: self.provenance,
            anchors: self.anchors,
            templates: self.templates,
            copies: self.copies,
            source,
        })
    }
}

/// Largest degree of a template vertex: total for graphs, in/out for digraphs.
pub(crate) fn max_degree(inst: &Instance, vertices: impl Iterator<Item = usize>) -> usize {
    vertices
        .map(|v| match inst {
            Instance::Graph(g) => g.degree(v),
            Instance::Digraph(d) => d.in_degree(v).max(d.out_degree(v)),
            Instance::Tournament(t) => t.as_digraph().in_degree(v).max(t.out_degree(v)),
        })
        .max()
        .unwrap_or(0)
}

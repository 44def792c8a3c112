use super::GadgetError;
use crate::graph::Digraph;

/// The layered digraph used for two-valued NAE: layers `S_0 .. S_{k-1}` with
/// every arc from one layer to the next and from the last back to `S_0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HkGadget {
    pub digraph: Digraph,
    pub k: usize,
    pub s0: usize,
    /// Attachment terminals, an independent set of size `t`.
    pub s1: Vec<usize>,
    pub layers: Vec<Vec<usize>>,
}

impl HkGadget {
    /// `max(k, t) + 1`.
    pub fn degree_bound(&self) -> usize {
        self.k.max(self.s1.len()) + 1
    }
}

/// `S_0` is one vertex, `S_1` has `t` independent vertices and each of
/// `S_2 .. S_{k-1}` is a directed `k`-cycle.
pub fn build_h_k(k: usize, t: usize) -> Result<HkGadget, GadgetError> {
    if k < 3 {
        return Err(GadgetError::InvalidParameters(format!("k must be at least 3, got {k}")));
    }
    if t == 0 {
        return Err(GadgetError::InvalidParameters("S_1 needs at least one vertex".into()));
    }
    let mut layers = vec![vec![0], (1..=t).collect::<Vec<_>>()];
    let mut next = t + 1;
    let mut arcs = Vec::new();
    for _ in 2..k {
        let layer: Vec<usize> = (next..next + k).collect();
        for i in 0..k {
            arcs.push((layer[i], layer[(i + 1) % k]));
        }
        next += k;
        layers.push(layer);
    }
    for i in 0..k {
        let (from, to) = (&layers[i], &layers[(i + 1) % k]);
        for &u in from {
            for &v in to {
                arcs.push((u, v));
            }
        }
    }
    let digraph = Digraph::new(next, arcs).expect("layers are disjoint");
    Ok(HkGadget {
        digraph,
        k,
        s0: 0,
        s1: layers[1].clone(),
        layers,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_and_degrees() {
        let h3 = build_h_k(3, 3).unwrap();
        assert_eq!(h3.digraph.n(), 7);
        let s = h3.digraph.degree_stats();
        assert!(s.max_in_degree <= 4 && s.max_out_degree <= 4);
        assert_eq!(build_h_k(4, 3).unwrap().digraph.n(), 12);
        let wide = build_h_k(3, 6).unwrap();
        let s = wide.digraph.degree_stats();
        assert!(s.max_in_degree.max(s.max_out_degree) <= wide.degree_bound());
        assert_eq!(h3.digraph.directed_girth(), Some(3));
    }
}

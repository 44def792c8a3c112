//! Graphs, digraphs, tournaments and colorings.
//!
//! Every type is immutable once built. Vertex ids are dense `0..n`; edge and
//! arc listings are always produced in lexicographic order so constructions
//! that go through these types are canonical.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::{ones, BitMatrix, BitSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
    #[error("duplicate arc {0}->{1}")]
    DuplicateArc(usize, usize),
    #[error("endpoint {vertex} out of range for {n} vertices")]
    OutOfRange { vertex: usize, n: usize },
    #[error("tournament has a digon between {0} and {1}")]
    Digon(usize, usize),
    #[error("tournament leaves the pair {0},{1} unoriented")]
    MissingPair(usize, usize),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertificateError {
    #[error("coloring covers {got} vertices but the instance has {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("vertex {vertex} has color {color} but only {r} colors are allowed")]
    ColorOutOfRange { vertex: usize, color: usize, r: usize },
}

fn check_endpoint(v: usize, n: usize) -> Result<(), GraphError> {
    if v >= n {
        Err(GraphError::OutOfRange { vertex: v, n })
    } else {
        Ok(())
    }
}

/// A total assignment of colors `0..r` to the vertices of an instance.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Coloring {
    r: usize,
    colors: Vec<usize>,
}

impl Coloring {
    pub fn new(r: usize, colors: Vec<usize>) -> Result<Self, CertificateError> {
        if let Some((vertex, &color)) = colors.iter().enumerate().find(|(_, &c)| c >= r) {
            return Err(CertificateError::ColorOutOfRange { vertex, color, r });
        }
        Ok(Coloring { r, colors })
    }

    /// Builds a coloring using exactly as many colors as the largest entry needs.
    pub fn from_colors(colors: Vec<usize>) -> Self {
        let r = colors.iter().map(|c| c + 1).max().unwrap_or(0);
        Coloring { r, colors }
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.colors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.colors.is_empty()
    }

    pub fn color(&self, v: usize) -> usize {
        self.colors[v]
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn into_colors(self) -> Vec<usize> {
        self.colors
    }

    /// Color classes, indexed by color, each sorted ascending.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let mut classes = vec![Vec::new(); self.r];
        for (v, &c) in self.colors.iter().enumerate() {
            classes[c].push(v);
        }
        classes
    }

    /// Re-validates against an instance size.
    pub fn check_for(&self, n: usize) -> Result<(), CertificateError> {
        if self.colors.len() != n {
            return Err(CertificateError::WrongLength {
                expected: n,
                got: self.colors.len(),
            });
        }
        if let Some((vertex, &color)) = self.colors.iter().enumerate().find(|(_, &c)| c >= self.r) {
            return Err(CertificateError::ColorOutOfRange {
                vertex,
                color,
                r: self.r,
            });
        }
        Ok(())
    }

    /// Colors relabelled in order of first appearance (vertex 0 gets color 0).
    pub fn canonical(&self) -> Coloring {
        let mut map = vec![usize::MAX; self.r];
        let mut next = 0;
        let colors = self
            .colors
            .iter()
            .map(|&c| {
                if map[c] == usize::MAX {
                    map[c] = next;
                    next += 1;
                }
                map[c]
            })
            .collect();
        Coloring { r: self.r, colors }
    }
}

/// Maximum degrees. For undirected graphs the in/out fields repeat the degree.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeStats {
    pub max_degree: usize,
    pub max_in_degree: usize,
    pub max_out_degree: usize,
}

/// Polynomial check shared by every instance kind.
pub trait AcyclicColoringCheck {
    fn vertex_count(&self) -> usize;

    /// Whether the given vertex set induces an acyclic subgraph.
    fn induces_acyclic(&self, members: &BitSet) -> bool;

    fn is_acyclic_coloring(&self, c: &Coloring) -> Result<bool, CertificateError> {
        c.check_for(self.vertex_count())?;
        let n = self.vertex_count();
        Ok(c
            .classes()
            .iter()
            .all(|class| self.induces_acyclic(&BitSet::from_indices(n, class.iter().copied()))))
    }
}

/// True iff every color class of `c` induces a forest (graphs) or has no
/// directed cycle (digraphs and tournaments).
pub fn is_valid_acyclic_coloring<G: AcyclicColoringCheck + ?Sized>(
    g: &G,
    c: &Coloring,
) -> Result<bool, CertificateError> {
    g.is_acyclic_coloring(c)
}

// ---------------------------------------------------------------------------
// Undirected graphs
// ---------------------------------------------------------------------------

#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: BitMatrix,
    nbrs: Vec<Vec<usize>>,
    m: usize,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

impl Graph {
    /// Strict constructor: rejects self-loops, duplicates and bad endpoints.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            check_endpoint(u, n)?;
            check_endpoint(v, n)?;
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let e = (u.min(v), u.max(v));
            if !set.insert(e) {
                return Err(GraphError::DuplicateEdge(e.0, e.1));
            }
        }
        Ok(Self::from_canonical(n, &set))
    }

    /// Like [`Graph::new`] but silently merges repeated edges.
    pub fn from_edges_merged(
        n: usize,
        edges: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            check_endpoint(u, n)?;
            check_endpoint(v, n)?;
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Self::from_canonical(n, &set))
    }

    fn from_canonical(n: usize, edges: &BTreeSet<(usize, usize)>) -> Self {
        let mut adj = BitMatrix::new(n);
        let mut nbrs = vec![Vec::new(); n];
        for &(u, v) in edges {
            adj.set(u, v);
            adj.set(v, u);
            nbrs[u].push(v);
            nbrs[v].push(u);
        }
        for list in nbrs.iter_mut() {
            list.sort_unstable();
        }
        Graph {
            n,
            adj,
            nbrs,
            m: edges.len(),
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_canonical(n, &BTreeSet::new())
    }

    pub fn cycle(len: usize) -> Self {
        assert!(len >= 3, "a cycle needs at least three vertices");
        Graph::new(len, (0..len).map(|i| (i, (i + 1) % len))).expect("valid cycle")
    }

    pub fn path(n: usize) -> Self {
        Graph::new(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
    }

    pub fn complete(n: usize) -> Self {
        Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).expect("valid clique")
    }

    pub fn star(leaves: usize) -> Self {
        Graph::new(leaves + 1, (1..=leaves).map(|v| (0, v))).expect("valid star")
    }

    /// The Grötzsch graph: Mycielskian of the 5-cycle, 11 vertices, 20 edges,
    /// triangle-free and 4-chromatic.
    pub fn grotzsch() -> Self {
        let mut edges = Vec::new();
        for i in 0..5 {
            // outer 5-cycle
            edges.push((i, (i + 1) % 5));
            // shadow vertex 5+i is joined to the cycle neighbours of i
            edges.push((5 + i, (i + 1) % 5));
            edges.push((5 + i, (i + 4) % 5));
            // hub
            edges.push((10, 5 + i));
        }
        Graph::new(11, edges).expect("valid Grötzsch graph")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Edges as `(u, v)` with `u < v`, lexicographic.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.nbrs[u].iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.nbrs[v]
    }

    pub fn adjacency_row(&self, v: usize) -> &[u64] {
        self.adj.row(v)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj.get(u, v)
    }

    pub fn degree(&self, v: usize) -> usize {
        self.nbrs[v].len()
    }

    pub fn without_edge(&self, u: usize, v: usize) -> Graph {
        let e = (u.min(v), u.max(v));
        let set: BTreeSet<_> = self.edges().filter(|&x| x != e).collect();
        Self::from_canonical(self.n, &set)
    }

    pub fn with_edge(&self, u: usize, v: usize) -> Result<Graph, GraphError> {
        Graph::from_edges_merged(self.n, self.edges().chain([(u, v)]))
    }

    /// Adds `extra` isolated vertices after the existing ones.
    pub fn with_vertices(&self, extra: usize) -> Graph {
        let set: BTreeSet<_> = self.edges().collect();
        Self::from_canonical(self.n + extra, &set)
    }

    pub fn degree_stats(&self) -> DegreeStats {
        let d = (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0);
        DegreeStats {
            max_degree: d,
            max_in_degree: d,
            max_out_degree: d,
        }
    }

    /// Length of a shortest cycle; `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let mut best = usize::MAX;
        let mut dist = vec![usize::MAX; self.n];
        let mut parent = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        for root in 0..self.n {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[root] = 0;
            parent[root] = usize::MAX;
            queue.clear();
            queue.push_back(root);
            while let Some(x) = queue.pop_front() {
                if 2 * dist[x] + 1 >= best {
                    break;
                }
                for &y in &self.nbrs[x] {
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        parent[y] = x;
                        queue.push_back(y);
                    } else if parent[x] != y {
                        best = best.min(dist[x] + dist[y] + 1);
                    }
                }
            }
        }
        (best != usize::MAX).then_some(best)
    }

    /// Shortest distance in edges between two vertices, if connected.
    pub fn distance(&self, from: usize, to: usize) -> Option<usize> {
        bfs_distance(self.n, from, to, |x| &self.nbrs[x])
    }

    pub fn is_proper_coloring(&self, c: &Coloring) -> Result<bool, CertificateError> {
        c.check_for(self.n)?;
        Ok(self.edges().all(|(u, v)| c.color(u) != c.color(v)))
    }
}

impl AcyclicColoringCheck for Graph {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn induces_acyclic(&self, members: &BitSet) -> bool {
        // A subgraph is a forest iff a union-find over its edges never closes a cycle.
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for u in members.iter() {
            for &v in &self.nbrs[u] {
                if v > u && members.contains(v) {
                    let (a, b) = (find(&mut parent, u), find(&mut parent, v));
                    if a == b {
                        return false;
                    }
                    parent[a] = b;
                }
            }
        }
        true
    }
}

fn bfs_distance<'a, F>(n: usize, from: usize, to: usize, next: F) -> Option<usize>
where
    F: Fn(usize) -> &'a [usize],
{
    let mut dist = vec![usize::MAX; n];
    dist[from] = 0;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        if x == to {
            return Some(dist[x]);
        }
        for &y in next(x) {
            if dist[y] == usize::MAX {
                dist[y] = dist[x] + 1;
                queue.push_back(y);
            }
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Digraphs
// ---------------------------------------------------------------------------

#[derive(Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    out: BitMatrix,
    inn: BitMatrix,
    out_nbrs: Vec<Vec<usize>>,
    in_nbrs: Vec<Vec<usize>>,
    m: usize,
}

impl std::fmt::Debug for Digraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Digraph")
            .field("n", &self.n)
            .field("arcs", &self.arcs().collect::<Vec<_>>())
            .finish()
    }
}

impl Digraph {
    /// Strict constructor. Digons are allowed; loops and repeats are not.
    pub fn new(n: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for (u, v) in arcs {
            check_endpoint(u, n)?;
            check_endpoint(v, n)?;
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if !set.insert((u, v)) {
                return Err(GraphError::DuplicateArc(u, v));
            }
        }
        Ok(Self::from_canonical(n, &set))
    }

    pub fn from_arcs_merged(
        n: usize,
        arcs: impl IntoIterator<Item = (usize, usize)>,
    ) -> Result<Self, GraphError> {
        let mut set = BTreeSet::new();
        for (u, v) in arcs {
            check_endpoint(u, n)?;
            check_endpoint(v, n)?;
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            set.insert((u, v));
        }
        Ok(Self::from_canonical(n, &set))
    }

    fn from_canonical(n: usize, arcs: &BTreeSet<(usize, usize)>) -> Self {
        let mut b = DigraphParts::new(n);
        for &(u, v) in arcs {
            b.push(u, v);
        }
        b.finish(arcs.len())
    }

    pub fn empty(n: usize) -> Self {
        Self::from_canonical(n, &BTreeSet::new())
    }

    pub fn directed_cycle(len: usize) -> Self {
        assert!(len >= 2, "a directed cycle needs at least two vertices");
        Digraph::new(len, (0..len).map(|i| (i, (i + 1) % len))).expect("valid directed cycle")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Arcs `(u, v)` meaning `u -> v`, lexicographic.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.out_nbrs[u].iter().map(move |&v| (u, v)))
    }

    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out_nbrs[v]
    }

    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        &self.in_nbrs[v]
    }

    pub fn out_row(&self, v: usize) -> &[u64] {
        self.out.row(v)
    }

    pub fn in_row(&self, v: usize) -> &[u64] {
        self.inn.row(v)
    }

    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.out.get(u, v)
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.out_nbrs[v].len()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.in_nbrs[v].len()
    }

    /// In-degree plus out-degree.
    pub fn degree(&self, v: usize) -> usize {
        self.out_degree(v) + self.in_degree(v)
    }

    pub fn has_digon(&self) -> bool {
        self.arcs().any(|(u, v)| u < v && self.has_arc(v, u))
    }

    pub fn without_arc(&self, u: usize, v: usize) -> Digraph {
        let set: BTreeSet<_> = self.arcs().filter(|&a| a != (u, v)).collect();
        Self::from_canonical(self.n, &set)
    }

    pub fn with_arc(&self, u: usize, v: usize) -> Result<Digraph, GraphError> {
        Digraph::from_arcs_merged(self.n, self.arcs().chain([(u, v)]))
    }

    pub fn with_vertices(&self, extra: usize) -> Digraph {
        let set: BTreeSet<_> = self.arcs().collect();
        Self::from_canonical(self.n + extra, &set)
    }

    /// Forgets orientation; digons collapse to a single edge.
    pub fn underlying_graph(&self) -> Graph {
        Graph::from_edges_merged(self.n, self.arcs()).expect("arcs are valid edges")
    }

    pub fn degree_stats(&self) -> DegreeStats {
        let mut s = DegreeStats {
            max_degree: 0,
            max_in_degree: 0,
            max_out_degree: 0,
        };
        for v in 0..self.n {
            s.max_degree = s.max_degree.max(self.degree(v));
            s.max_in_degree = s.max_in_degree.max(self.in_degree(v));
            s.max_out_degree = s.max_out_degree.max(self.out_degree(v));
        }
        s
    }

    /// Minimum length of a directed cycle; `None` when the digraph is acyclic.
    pub fn directed_girth(&self) -> Option<usize> {
        let mut best = usize::MAX;
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        for root in 0..self.n {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[root] = 0;
            queue.clear();
            queue.push_back(root);
            'bfs: while let Some(x) = queue.pop_front() {
                if dist[x] + 1 >= best {
                    break;
                }
                for &y in &self.out_nbrs[x] {
                    if y == root {
                        best = best.min(dist[x] + 1);
                        break 'bfs;
                    }
                    if dist[y] == usize::MAX {
                        dist[y] = dist[x] + 1;
                        queue.push_back(y);
                    }
                }
            }
        }
        (best != usize::MAX).then_some(best)
    }

    /// Shortest directed distance in arcs.
    pub fn distance(&self, from: usize, to: usize) -> Option<usize> {
        bfs_distance(self.n, from, to, |x| &self.out_nbrs[x])
    }

    /// A topological order if the digraph is acyclic.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let members = BitSet::full(self.n);
        self.topological_order_of(&members)
    }

    /// Kahn's algorithm restricted to `members`.
    pub fn topological_order_of(&self, members: &BitSet) -> Option<Vec<usize>> {
        let mut indeg = vec![0usize; self.n];
        let mut ready = Vec::new();
        let mut total = 0;
        for v in members.iter() {
            total += 1;
            indeg[v] = members.intersection_count(self.in_row(v));
            if indeg[v] == 0 {
                ready.push(v);
            }
        }
        ready.reverse();
        let mut order = Vec::with_capacity(total);
        while let Some(v) = ready.pop() {
            order.push(v);
            for w in ones(self.out_row(v)) {
                if members.contains(w) {
                    indeg[w] -= 1;
                    if indeg[w] == 0 {
                        ready.push(w);
                    }
                }
            }
        }
        (order.len() == total).then_some(order)
    }
}

impl AcyclicColoringCheck for Digraph {
    fn vertex_count(&self) -> usize {
        self.n
    }

    fn induces_acyclic(&self, members: &BitSet) -> bool {
        self.topological_order_of(members).is_some()
    }
}

struct DigraphParts {
    n: usize,
    out: BitMatrix,
    inn: BitMatrix,
    out_nbrs: Vec<Vec<usize>>,
    in_nbrs: Vec<Vec<usize>>,
}

impl DigraphParts {
    fn new(n: usize) -> Self {
        DigraphParts {
            n,
            out: BitMatrix::new(n),
            inn: BitMatrix::new(n),
            out_nbrs: vec![Vec::new(); n],
            in_nbrs: vec![Vec::new(); n],
        }
    }

    /// Arcs must arrive in lexicographic order for the lists to come out sorted.
    fn push(&mut self, u: usize, v: usize) {
        self.out.set(u, v);
        self.inn.set(v, u);
        self.out_nbrs[u].push(v);
        self.in_nbrs[v].push(u);
    }

    fn finish(self, m: usize) -> Digraph {
        Digraph {
            n: self.n,
            out: self.out,
            inn: self.inn,
            out_nbrs: self.out_nbrs,
            in_nbrs: self.in_nbrs,
            m,
        }
    }
}

// ---------------------------------------------------------------------------
// Tournaments
// ---------------------------------------------------------------------------

/// A digraph with exactly one arc between every pair of vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tournament {
    inner: Digraph,
}

impl Tournament {
    pub fn new(d: Digraph) -> Result<Self, GraphError> {
        let n = d.n();
        for u in 0..n {
            for v in u + 1..n {
                match (d.has_arc(u, v), d.has_arc(v, u)) {
                    (true, true) => return Err(GraphError::Digon(u, v)),
                    (false, false) => return Err(GraphError::MissingPair(u, v)),
                    _ => {}
                }
            }
        }
        Ok(Tournament { inner: d })
    }

    /// `u_beats_v(u, v)` is asked once per pair with `u < v`, in lexicographic
    /// pair order; `true` orients the pair `u -> v`.
    pub fn from_fn(n: usize, mut u_beats_v: impl FnMut(usize, usize) -> bool) -> Self {
        let mut orient = BitMatrix::new(n);
        for u in 0..n {
            for v in u + 1..n {
                if u_beats_v(u, v) {
                    orient.set(u, v);
                } else {
                    orient.set(v, u);
                }
            }
        }
        let mut parts = DigraphParts::new(n);
        for u in 0..n {
            for v in ones(orient.row(u)) {
                parts.push(u, v);
            }
        }
        Tournament {
            inner: parts.finish(n * n.saturating_sub(1) / 2),
        }
    }

    /// The transitive tournament where `u -> v` iff `u < v`.
    pub fn transitive(n: usize) -> Self {
        Tournament::from_fn(n, |_, _| true)
    }

    pub fn n(&self) -> usize {
        self.inner.n()
    }

    pub fn as_digraph(&self) -> &Digraph {
        &self.inner
    }

    pub fn into_digraph(self) -> Digraph {
        self.inner
    }

    #[inline]
    pub fn beats(&self, u: usize, v: usize) -> bool {
        self.inner.has_arc(u, v)
    }

    pub fn out_row(&self, v: usize) -> &[u64] {
        self.inner.out_row(v)
    }

    pub fn in_row(&self, v: usize) -> &[u64] {
        self.inner.in_row(v)
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.inner.out_degree(v)
    }

    /// The sub-tournament on `vertices`, relabelled `0..len` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Tournament {
        Tournament::from_fn(vertices.len(), |i, j| self.beats(vertices[i], vertices[j]))
    }

    /// For a transitive vertex set, its order from the vertex that beats all
    /// others down to the one beaten by all; `None` if the set has a cycle.
    pub fn transitive_order(&self, members: &BitSet) -> Option<Vec<usize>> {
        let s = members.count();
        let mut by_outdeg: Vec<(usize, usize)> = members
            .iter()
            .map(|v| (members.intersection_count(self.out_row(v)), v))
            .collect();
        by_outdeg.sort_unstable_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        // A tournament is transitive iff its score sequence is s-1, ..., 1, 0.
        by_outdeg
            .iter()
            .enumerate()
            .all(|(i, &(d, _))| d == s - 1 - i)
            .then(|| by_outdeg.into_iter().map(|(_, v)| v).collect())
    }

    pub fn is_transitive_set(&self, members: &BitSet) -> bool {
        self.transitive_order(members).is_some()
    }
}

impl AcyclicColoringCheck for Tournament {
    fn vertex_count(&self) -> usize {
        self.n()
    }

    fn induces_acyclic(&self, members: &BitSet) -> bool {
        self.is_transitive_set(members)
    }
}

// ---------------------------------------------------------------------------
// Kind-erased instances
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InstanceKind {
    Graph,
    Digraph,
    Tournament,
}

impl InstanceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            InstanceKind::Graph => "graph",
            InstanceKind::Digraph => "digraph",
            InstanceKind::Tournament => "tournament",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instance {
    Graph(Graph),
    Digraph(Digraph),
    Tournament(Tournament),
}

impl Instance {
    pub fn kind(&self) -> InstanceKind {
        match self {
            Instance::Graph(_) => InstanceKind::Graph,
            Instance::Digraph(_) => InstanceKind::Digraph,
            Instance::Tournament(_) => InstanceKind::Tournament,
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Instance::Graph(g) => g.n(),
            Instance::Digraph(d) => d.n(),
            Instance::Tournament(t) => t.n(),
        }
    }

    pub fn m(&self) -> usize {
        match self {
            Instance::Graph(g) => g.m(),
            Instance::Digraph(d) => d.m(),
            Instance::Tournament(t) => t.as_digraph().m(),
        }
    }

    pub fn is_directed(&self) -> bool {
        !matches!(self, Instance::Graph(_))
    }

    /// Edges or arcs in canonical order.
    pub fn edge_list(&self) -> Vec<(usize, usize)> {
        match self {
            Instance::Graph(g) => g.edges().collect(),
            Instance::Digraph(d) => d.arcs().collect(),
            Instance::Tournament(t) => t.as_digraph().arcs().collect(),
        }
    }

    pub fn degree_stats(&self) -> DegreeStats {
        match self {
            Instance::Graph(g) => g.degree_stats(),
            Instance::Digraph(d) => d.degree_stats(),
            Instance::Tournament(t) => t.as_digraph().degree_stats(),
        }
    }

    /// Undirected girth for graphs, directed girth otherwise.
    pub fn girth(&self) -> Option<usize> {
        match self {
            Instance::Graph(g) => g.girth(),
            Instance::Digraph(d) => d.directed_girth(),
            Instance::Tournament(t) => t.as_digraph().directed_girth(),
        }
    }

    pub fn without_edge(&self, u: usize, v: usize) -> Instance {
        match self {
            Instance::Graph(g) => Instance::Graph(g.without_edge(u, v)),
            Instance::Digraph(d) => Instance::Digraph(d.without_arc(u, v)),
            Instance::Tournament(t) => Instance::Digraph(t.as_digraph().without_arc(u, v)),
        }
    }
}

impl AcyclicColoringCheck for Instance {
    fn vertex_count(&self) -> usize {
        self.n()
    }

    fn induces_acyclic(&self, members: &BitSet) -> bool {
        match self {
            Instance::Graph(g) => g.induces_acyclic(members),
            Instance::Digraph(d) => d.induces_acyclic(members),
            Instance::Tournament(t) => t.induces_acyclic(members),
        }
    }
}

impl From<Graph> for Instance {
    fn from(g: Graph) -> Self {
        Instance::Graph(g)
    }
}

impl From<Digraph> for Instance {
    fn from(d: Digraph) -> Self {
        Instance::Digraph(d)
    }
}

impl From<Tournament> for Instance {
    fn from(t: Tournament) -> Self {
        Instance::Tournament(t)
    }
}

//! Finite undirected graphs with loops, and the operations on them that the
//! complex builders need: homomorphism search, folds and graph algebra.

mod compose;
mod fold;
mod hom;
mod named;

use std::fmt;

use crate::error::{Error, Result};
use crate::vset::{VertexSet, UNIVERSE};

pub use compose::{
    apex_plus, compose_graphs, direct_product, disjoint_union, power_graph, strong_complement, ComposeOp,
};
pub use fold::{fold_reduce, FoldTrace};
pub use hom::{
    chromatic_number_exact, count_homs, enumerate_homs, is_homomorphism, rational_chromatic_search, winding_number,
    ChromaticNumber, GraphHom, HomList, RationalBound, StateFamily,
};
pub use named::make_named_graph;

/// A finite graph on vertices `0..n`. The edge relation is symmetric and may
/// contain loops; multiple edges do not exist.
#[derive(Clone)]
pub struct Graph {
    n: usize,
    words: usize,
    bits: Vec<u64>,
    nbrs: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
}

impl Graph {
    /// The graph with `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Graph {
            n,
            words,
            bits: vec![0; words * n],
            nbrs: vec![Vec::new(); n],
            labels: None,
        }
    }

    /// Builds a graph from an edge list. Each pair is inserted in both
    /// directions; `(u, u)` inserts a loop. Duplicates are ignored.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Parameter(format!(
                    "edge ({u}, {v}) references a vertex outside 0..{n}"
                )));
            }
            g.set_edge(u, v);
        }
        g.finish();
        Ok(g)
    }

    /// Builds a graph from a symmetric predicate evaluated on all pairs `u <= v`.
    pub fn from_fn(n: usize, mut adjacent: impl FnMut(usize, usize) -> bool) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u..n {
                if adjacent(u, v) {
                    g.set_edge(u, v);
                }
            }
        }
        g.finish();
        g
    }

    fn set_edge(&mut self, u: usize, v: usize) {
        self.bits[u * self.words + v / 64] |= 1u64 << (v % 64);
        self.bits[v * self.words + u / 64] |= 1u64 << (u % 64);
    }

    fn finish(&mut self) {
        for u in 0..self.n {
            self.nbrs[u] = (0..self.n).filter(|&v| self.has_edge(u, v)).collect();
        }
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n, "one label per vertex");
        self.labels = Some(labels);
        self
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.bits[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    #[inline]
    pub fn has_loop(&self, v: usize) -> bool {
        self.has_edge(v, v)
    }

    pub fn has_loops(&self) -> bool {
        (0..self.n).any(|v| self.has_loop(v))
    }

    /// Sorted neighbor list; contains `v` itself when `v` is looped.
    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.nbrs[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.nbrs[v].len()
    }

    /// Packed adjacency row of `v`, one bit per vertex.
    pub(crate) fn row(&self, v: usize) -> &[u64] {
        &self.bits[v * self.words..(v + 1) * self.words]
    }

    pub(crate) fn words(&self) -> usize {
        self.words
    }

    /// Neighborhood of `v` as a small-universe set. Requires `n <= 64`.
    pub fn neighbor_set(&self, v: usize) -> VertexSet {
        debug_assert!(self.n <= UNIVERSE);
        VertexSet(self.bits[v * self.words])
    }

    /// Unordered edges `(u, v)` with `u <= v`, loops included.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.nbrs[u]
                .iter()
                .copied()
                .filter(move |&v| v >= u)
                .map(move |v| (u, v))
        })
    }

    /// Number of unordered edges, loops counted once.
    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    pub fn label(&self, v: usize) -> String {
        match &self.labels {
            Some(l) => l[v].clone(),
            None => v.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Induced subgraph on `vertices`, re-indexed in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut g = Graph::from_fn(vertices.len(), |i, j| self.has_edge(vertices[i], vertices[j]));
        if let Some(l) = &self.labels {
            g.labels = Some(vertices.iter().map(|&v| l[v].clone()).collect());
        }
        g
    }

    /// `G - v`.
    pub fn remove_vertex(&self, v: usize) -> Graph {
        let keep: Vec<usize> = (0..self.n).filter(|&u| u != v).collect();
        self.induced(&keep)
    }

    /// Whether `perm` is an automorphism of this graph.
    pub fn is_automorphism(&self, perm: &[usize]) -> bool {
        if perm.len() != self.n {
            return false;
        }
        let mut seen = vec![false; self.n];
        for &p in perm {
            if p >= self.n || seen[p] {
                return false;
            }
            seen[p] = true;
        }
        self.edges().all(|(u, v)| self.has_edge(perm[u], perm[v]))
    }

    /// Parses the line-oriented text format: `n <count>` followed by
    /// `e <u> <v>` lines; `#` starts a comment line.
    pub fn parse_text(text: &str) -> Result<Graph> {
        let mut n: Option<usize> = None;
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |message: String| Error::Parse { line: line_no, message };
            let mut parts = line.split_whitespace();
            let tag = parts.next().unwrap_or_default();
            let nums: Vec<&str> = parts.collect();
            let parse = |s: &str| {
                s.parse::<usize>()
                    .map_err(|_| err(format!("expected a nonnegative integer, found `{s}`")))
            };
            match tag {
                "n" => {
                    if n.is_some() {
                        return Err(err("duplicate `n` line".into()));
                    }
                    if nums.len() != 1 {
                        return Err(err("`n` takes exactly one argument".into()));
                    }
                    n = Some(parse(nums[0])?);
                }
                "e" => {
                    let count = n.ok_or_else(|| err("`e` line before `n` line".into()))?;
                    if nums.len() != 2 {
                        return Err(err("`e` takes exactly two arguments".into()));
                    }
                    let (u, v) = (parse(nums[0])?, parse(nums[1])?);
                    if u >= count || v >= count {
                        return Err(err(format!("edge ({u}, {v}) out of range for {count} vertices")));
                    }
                    edges.push((u, v));
                }
                other => return Err(err(format!("unknown directive `{other}`"))),
            }
        }
        let n = n.ok_or(Error::Parse {
            line: text.lines().count().max(1),
            message: "missing `n` line".into(),
        })?;
        Graph::from_edges(n, &edges)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("n {}\n", self.n);
        for (u, v) in self.edges() {
            out.push_str(&format!("e {u} {v}\n"));
        }
        out
    }
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.nbrs == other.nbrs
    }
}

impl Eq for Graph {}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

/// Convenience constructors for the standard families.
impl Graph {
    pub fn complete(n: usize) -> Graph {
        Graph::from_fn(n, |u, v| u != v)
    }

    /// Cycle `C_m` with edges `i ~ i+1 mod m`. Requires `m >= 3`.
    pub fn cycle(m: usize) -> Graph {
        assert!(m >= 3, "cycles need at least 3 vertices");
        Graph::from_fn(m, |u, v| (v + m - u) % m == 1 || (u + m - v) % m == 1)
    }

    /// Path `L_n` on `n` vertices.
    pub fn path(n: usize) -> Graph {
        Graph::from_fn(n, |u, v| v == u + 1)
    }

    /// A single vertex with a loop: the terminal object.
    pub fn looped_point() -> Graph {
        Graph::from_fn(1, |_, _| true)
    }
}

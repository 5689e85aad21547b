use std::cmp::Ordering;

use crate::graph::Graph;

/// A finite abstract simplicial complex on vertices `0..n`.
///
/// Simplices of each dimension are stored flat, each as a strictly increasing
/// vertex list, and sorted lexicographically so lookups are binary searches.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplicialComplex {
    n_vertices: usize,
    // payload[v]: the cell (or graph vertex) the vertex stands for
    payload: Option<Vec<usize>>,
    simplices: Vec<Vec<u32>>,
}

impl SimplicialComplex {
    /// The complex generated by `facets`: every nonempty subset of a facet is
    /// a simplex. Vertex ids must be below `n_vertices`.
    pub fn from_facets(n_vertices: usize, facets: &[Vec<usize>]) -> Self {
        let mut by_dim: Vec<std::collections::BTreeSet<Vec<u32>>> = Vec::new();
        for f in facets {
            let mut f: Vec<u32> = f.iter().map(|&v| v as u32).collect();
            f.sort_unstable();
            f.dedup();
            assert!(f.iter().all(|&v| (v as usize) < n_vertices), "vertex out of range");
            let k = f.len();
            assert!(k <= 31, "facet too large to close by subsets");
            for mask in 1u32..(1 << k) {
                let s: Vec<u32> = (0..k).filter(|&i| mask >> i & 1 == 1).map(|i| f[i]).collect();
                let d = s.len() - 1;
                if by_dim.len() <= d {
                    by_dim.resize_with(d + 1, Default::default);
                }
                by_dim[d].insert(s);
            }
        }
        let simplices = by_dim
            .into_iter()
            .map(|set| set.into_iter().flatten().collect())
            .collect();
        SimplicialComplex {
            n_vertices,
            payload: None,
            simplices,
        }
    }

    /// Assembles a complex from per-dimension flat lists that are already
    /// sorted and downward closed.
    pub(crate) fn from_sorted(n_vertices: usize, payload: Option<Vec<usize>>, simplices: Vec<Vec<u32>>) -> Self {
        let mut simplices = simplices;
        while simplices.last().is_some_and(|s| s.is_empty()) {
            simplices.pop();
        }
        SimplicialComplex {
            n_vertices,
            payload,
            simplices,
        }
    }

    pub fn with_payload(mut self, payload: Vec<usize>) -> Self {
        assert_eq!(payload.len(), self.n_vertices);
        self.payload = Some(payload);
        self
    }

    pub fn vertex_count(&self) -> usize {
        self.n_vertices
    }

    /// What vertex `v` stands for, when the builder recorded it.
    pub fn payload(&self, v: usize) -> Option<usize> {
        self.payload.as_ref().map(|p| p[v])
    }

    pub fn payloads(&self) -> Option<&[usize]> {
        self.payload.as_deref()
    }

    /// Top dimension, `-1` when there are no simplices.
    pub fn dim(&self) -> isize {
        self.simplices.len() as isize - 1
    }

    pub fn count(&self, d: usize) -> usize {
        self.simplices.get(d).map_or(0, |s| s.len() / (d + 1))
    }

    pub fn f_vector(&self) -> Vec<usize> {
        (0..self.simplices.len()).map(|d| self.count(d)).collect()
    }

    pub fn total(&self) -> usize {
        self.f_vector().iter().sum()
    }

    pub fn simplex(&self, d: usize, i: usize) -> &[u32] {
        &self.simplices[d][i * (d + 1)..(i + 1) * (d + 1)]
    }

    pub fn simplices_of_dim(&self, d: usize) -> impl Iterator<Item = &[u32]> {
        self.simplices
            .get(d)
            .map(|s| s.chunks_exact(d + 1))
            .into_iter()
            .flatten()
    }

    /// Index of a sorted vertex list among the simplices of its dimension.
    pub fn index_of(&self, s: &[u32]) -> Option<usize> {
        let d = s.len().checked_sub(1)?;
        let flat = self.simplices.get(d)?;
        let (mut lo, mut hi) = (0, flat.len() / (d + 1));
        while lo < hi {
            let mid = (lo + hi) / 2;
            match flat[mid * (d + 1)..(mid + 1) * (d + 1)].cmp(s) {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    /// Indices of the codimension-one faces, face `i` omitting vertex `i`.
    pub fn faces(&self, d: usize, i: usize) -> Vec<usize> {
        if d == 0 {
            return Vec::new();
        }
        let s = self.simplex(d, i);
        let mut buf = Vec::with_capacity(d);
        (0..=d)
            .map(|skip| {
                buf.clear();
                buf.extend(s.iter().enumerate().filter(|&(j, _)| j != skip).map(|(_, &v)| v));
                self.index_of(&buf).expect("complex is downward closed")
            })
            .collect()
    }
}

/// `Ind(G)`: simplices are the nonempty independent sets. Looped vertices
/// are never independent and do not appear; payloads are graph vertex ids.
pub fn build_independence(g: &Graph) -> SimplicialComplex {
    let verts: Vec<usize> = (0..g.vertex_count()).filter(|&v| !g.has_loop(v)).collect();
    let mut by_dim: Vec<Vec<u32>> = Vec::new();
    let mut cur: Vec<u32> = Vec::new();
    fn rec(g: &Graph, verts: &[usize], start: usize, cur: &mut Vec<u32>, by_dim: &mut Vec<Vec<u32>>) {
        for i in start..verts.len() {
            if cur.iter().any(|&j| g.has_edge(verts[j as usize], verts[i])) {
                continue;
            }
            cur.push(i as u32);
            let d = cur.len() - 1;
            if by_dim.len() <= d {
                by_dim.resize_with(d + 1, Vec::new);
            }
            by_dim[d].extend_from_slice(cur);
            rec(g, verts, i + 1, cur, by_dim);
            cur.pop();
        }
    }
    rec(g, &verts, 0, &mut cur, &mut by_dim);
    // depth-first output is lexicographic within each dimension
    SimplicialComplex::from_sorted(verts.len(), Some(verts.clone()), by_dim)
}

/// `N(G)`: generated by the neighborhoods `N(v)`; vertices are the
/// non-isolated vertices of `G`, payloads are graph vertex ids.
pub fn build_neighborhood(g: &Graph) -> SimplicialComplex {
    let verts: Vec<usize> = (0..g.vertex_count()).filter(|&v| g.degree(v) > 0).collect();
    let mut index = vec![usize::MAX; g.vertex_count()];
    for (i, &v) in verts.iter().enumerate() {
        index[v] = i;
    }
    let mut facets: Vec<Vec<usize>> = (0..g.vertex_count())
        .map(|v| g.neighbors(v).iter().map(|&u| index[u]).collect::<Vec<_>>())
        .filter(|f: &Vec<usize>| !f.is_empty())
        .collect();
    facets.sort();
    facets.dedup();
    // drop neighborhoods contained in another
    let maximal: Vec<Vec<usize>> = facets
        .iter()
        .filter(|f| {
            !facets
                .iter()
                .any(|h| h.len() > f.len() && f.iter().all(|x| h.contains(x)))
        })
        .cloned()
        .collect();
    SimplicialComplex::from_facets(verts.len(), &maximal).with_payload(verts)
}

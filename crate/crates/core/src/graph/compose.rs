use super::Graph;
use crate::error::{Error, Result};

/// Binary and unary graph constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ComposeOp {
    DisjointUnion,
    DirectProduct,
    StrongComplement,
    ApexPlus,
    Power,
}

/// Applies `op`. Binary operations require `h`. `power_cap` bounds the vertex
/// count `|V(G)|^|V(H)|` of a power graph `G^H`.
pub fn compose_graphs(op: ComposeOp, g: &Graph, h: Option<&Graph>, power_cap: usize) -> Result<Graph> {
    let need_h = || h.ok_or_else(|| Error::Parameter(format!("{op:?} requires a second graph")));
    match op {
        ComposeOp::DisjointUnion => Ok(disjoint_union(g, need_h()?)),
        ComposeOp::DirectProduct => Ok(direct_product(g, need_h()?)),
        ComposeOp::StrongComplement => Ok(strong_complement(g)),
        ComposeOp::ApexPlus => Ok(apex_plus(g)),
        ComposeOp::Power => power_graph(g, need_h()?, power_cap),
    }
}

/// `G ⊔ H`: vertices of `G` first, then those of `H` shifted by `|V(G)|`.
pub fn disjoint_union(g: &Graph, h: &Graph) -> Graph {
    let a = g.vertex_count();
    Graph::from_fn(a + h.vertex_count(), |u, v| {
        if u < a && v < a {
            g.has_edge(u, v)
        } else if u >= a && v >= a {
            h.has_edge(u - a, v - a)
        } else {
            false
        }
    })
}

/// `G × H`; the pair `(x, y)` has index `x * |V(H)| + y`.
pub fn direct_product(g: &Graph, h: &Graph) -> Graph {
    let b = h.vertex_count();
    Graph::from_fn(g.vertex_count() * b, |u, v| {
        g.has_edge(u / b, v / b) && h.has_edge(u % b, v % b)
    })
}

/// Complement including the diagonal: loops become non-loops and vice versa.
pub fn strong_complement(g: &Graph) -> Graph {
    Graph::from_fn(g.vertex_count(), |u, v| !g.has_edge(u, v))
}

/// `G_+`: adds a looped apex adjacent to everything; the apex is the last vertex.
pub fn apex_plus(g: &Graph) -> Graph {
    let a = g.vertex_count();
    Graph::from_fn(a + 1, |u, v| v == a || g.has_edge(u, v))
}

/// The power graph `K^H`. Vertices are all maps `f: V(H) -> V(K)`, indexed
/// row-major with `f(0)` most significant; `(f, g)` is an edge iff
/// `(f(v), g(w)) ∈ E(K)` for every edge `(v, w)` of `H`.
pub fn power_graph(k: &Graph, h: &Graph, cap: usize) -> Result<Graph> {
    let base = k.vertex_count();
    let exp = h.vertex_count();
    let size = (base as u128).checked_pow(exp as u32).unwrap_or(u128::MAX);
    if size > cap as u128 {
        return Err(Error::budget("power graph", size.min(usize::MAX as u128) as usize, cap));
    }
    let size = size as usize;
    let decode = |mut idx: usize| {
        let mut f = vec![0usize; exp];
        for slot in f.iter_mut().rev() {
            *slot = idx % base;
            idx /= base;
        }
        f
    };
    let maps: Vec<Vec<usize>> = (0..size).map(decode).collect();
    let h_edges: Vec<(usize, usize)> = (0..exp)
        .flat_map(|v| h.neighbors(v).iter().map(move |&w| (v, w)))
        .collect();
    Ok(Graph::from_fn(size, |a, b| {
        h_edges.iter().all(|&(v, w)| k.has_edge(maps[a][v], maps[b][w]))
    }))
}

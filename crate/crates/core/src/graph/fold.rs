use super::Graph;
use crate::error::{Error, Result};

/// Record of a greedy fold reduction. Vertex indices in `removed` refer to
/// the original graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldTrace {
    /// `(v, u)` pairs: `v` was removed because `N(u) ⊇ N(v)` at that step.
    pub removed: Vec<(usize, usize)>,
    pub result: Graph,
    /// Original indices of the vertices of `result`, in order.
    pub survivors: Vec<usize>,
    /// Original vertex to result vertex, `None` for removed vertices.
    pub survivor_map: Vec<Option<usize>>,
}

/// `N(u) ⊇ N(v)` among the live vertices.
fn dominates(g: &Graph, alive: &[bool], u: usize, v: usize) -> bool {
    g.neighbors(v).iter().filter(|&&x| alive[x]).all(|&x| g.has_edge(u, x))
}

fn find_fold(g: &Graph, alive: &[bool]) -> Option<(usize, usize)> {
    let n = g.vertex_count();
    for v in (0..n).filter(|&v| alive[v]) {
        for u in (0..n).filter(|&u| alive[u] && u != v) {
            if dominates(g, alive, u, v) {
                return Some((v, u));
            }
        }
    }
    None
}

/// Removes foldable vertices until none remain, always taking the smallest
/// foldable `v` and then its smallest witness `u`.
pub fn fold_reduce(g: &Graph) -> FoldTrace {
    let n = g.vertex_count();
    let mut alive = vec![true; n];
    let mut removed = Vec::new();
    while let Some((v, u)) = find_fold(g, &alive) {
        alive[v] = false;
        removed.push((v, u));
    }
    let survivors: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
    let mut survivor_map = vec![None; n];
    for (i, &v) in survivors.iter().enumerate() {
        survivor_map[v] = Some(i);
    }
    FoldTrace {
        removed,
        result: g.induced(&survivors),
        survivors,
        survivor_map,
    }
}

impl FoldTrace {
    /// Re-applies the recorded steps to `g`, checking each witness condition
    /// in the graph current at that step, and returns the reduced graph.
    pub fn replay(&self, g: &Graph) -> Result<Graph> {
        let n = g.vertex_count();
        let mut alive = vec![true; n];
        for (step, &(v, u)) in self.removed.iter().enumerate() {
            if v >= n || u >= n || !alive[v] || !alive[u] || u == v {
                return Err(Error::Validation(format!(
                    "step {step}: ({v}, {u}) does not name two live vertices"
                )));
            }
            if !dominates(g, &alive, u, v) {
                return Err(Error::Validation(format!(
                    "step {step}: N({u}) does not contain N({v})"
                )));
            }
            alive[v] = false;
        }
        let survivors: Vec<usize> = (0..n).filter(|&v| alive[v]).collect();
        Ok(g.induced(&survivors))
    }
}

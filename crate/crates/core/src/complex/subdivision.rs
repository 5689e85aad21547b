use super::{ProdComplex, SimplicialComplex};
use crate::error::{Error, Result};

/// Strict order relation of a complex's face poset, as sorted id lists.
#[derive(Clone, Debug)]
pub struct FacePoset {
    /// `below[c]`: every proper face of `c`.
    pub below: Vec<Vec<u32>>,
    /// `above[c]`: every cell having `c` as a proper face.
    pub above: Vec<Vec<u32>>,
}

impl FacePoset {
    pub fn new(x: &ProdComplex) -> Self {
        let n = x.len();
        let mut below: Vec<Vec<u32>> = Vec::with_capacity(n);
        // faces have smaller ids, so one pass in id order suffices
        for c in 0..n {
            let mut acc: Vec<u32> = Vec::new();
            for f in x.faces(c) {
                acc.push(f as u32);
                acc.extend_from_slice(&below[f]);
            }
            acc.sort_unstable();
            acc.dedup();
            below.push(acc);
        }
        let mut above: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (c, b) in below.iter().enumerate() {
            for &f in b {
                above[f as usize].push(c as u32);
            }
        }
        FacePoset { below, above }
    }

    pub fn len(&self) -> usize {
        self.below.len()
    }

    pub fn is_empty(&self) -> bool {
        self.below.is_empty()
    }

    /// `a < b` in the face order.
    pub fn less(&self, a: usize, b: usize) -> bool {
        self.below[b].binary_search(&(a as u32)).is_ok()
    }
}

/// Enumerates the chains whose elements all come from `starts` and their
/// upward closures, in lexicographic order per dimension.
fn chains(
    poset: &FacePoset,
    starts: impl Iterator<Item = u32>,
    keep: impl Fn(u32) -> bool,
    renumber: impl Fn(u32) -> u32,
    max_dim: usize,
    budget: usize,
) -> Result<Vec<Vec<u32>>> {
    let mut by_dim: Vec<Vec<u32>> = Vec::new();
    let mut total = 0usize;
    let mut chain: Vec<u32> = Vec::new();
    struct Ctx<'a, K, R> {
        poset: &'a FacePoset,
        keep: K,
        renumber: R,
        max_dim: usize,
        budget: usize,
    }
    fn rec<K: Fn(u32) -> bool, R: Fn(u32) -> u32>(
        ctx: &Ctx<'_, K, R>,
        chain: &mut Vec<u32>,
        by_dim: &mut Vec<Vec<u32>>,
        total: &mut usize,
    ) -> Result<()> {
        let d = chain.len() - 1;
        *total += 1;
        if *total > ctx.budget {
            return Err(Error::budget("barycentric subdivision", *total, ctx.budget));
        }
        if by_dim.len() <= d {
            by_dim.resize_with(d + 1, Vec::new);
        }
        by_dim[d].extend(chain.iter().map(|&c| (ctx.renumber)(c)));
        if d == ctx.max_dim {
            return Ok(());
        }
        let last = *chain.last().unwrap() as usize;
        for &next in &ctx.poset.above[last] {
            if !(ctx.keep)(next) {
                continue;
            }
            chain.push(next);
            rec(ctx, chain, by_dim, total)?;
            chain.pop();
        }
        Ok(())
    }
    let ctx = Ctx {
        poset,
        keep,
        renumber,
        max_dim,
        budget,
    };
    for s in starts {
        chain.push(s);
        rec(&ctx, &mut chain, &mut by_dim, &mut total)?;
        chain.pop();
    }
    Ok(by_dim)
}

/// `Bd(X)`: the order complex of the face poset. Vertex `i` is cell `i` of
/// `X`, so each simplex lists its cells in increasing dimension.
pub fn barycentric(x: &ProdComplex, budget: usize) -> Result<SimplicialComplex> {
    barycentric_skeleton(x, usize::MAX, budget)
}

/// The simplices of `Bd(X)` up to dimension `max_dim`.
pub fn barycentric_skeleton(x: &ProdComplex, max_dim: usize, budget: usize) -> Result<SimplicialComplex> {
    let poset = FacePoset::new(x);
    barycentric_from_poset(&poset, max_dim, budget)
}

pub(crate) fn barycentric_from_poset(poset: &FacePoset, max_dim: usize, budget: usize) -> Result<SimplicialComplex> {
    let n = poset.len();
    let by_dim = chains(poset, 0..n as u32, |_| true, |c| c, max_dim, budget)?;
    Ok(SimplicialComplex::from_sorted(n, Some((0..n).collect()), by_dim))
}

/// Link of the 0-cell `v`: the order complex of the cells strictly above
/// `v`. Payloads are cell ids of `X`.
pub fn link_of_vertex(x: &ProdComplex, v: usize) -> Result<SimplicialComplex> {
    if !x.vertices().contains(&v) {
        return Err(Error::Lookup(format!("{v} is not a 0-cell")));
    }
    let poset = FacePoset::new(x);
    let up = &poset.above[v];
    let mut index = vec![u32::MAX; x.len()];
    for (i, &c) in up.iter().enumerate() {
        index[c as usize] = i as u32;
    }
    let by_dim = chains(
        &poset,
        up.iter().copied(),
        |c| index[c as usize] != u32::MAX,
        |c| index[c as usize],
        usize::MAX,
        usize::MAX,
    )?;
    let payload = up.iter().map(|&c| c as usize).collect();
    Ok(SimplicialComplex::from_sorted(up.len(), Some(payload), by_dim))
}

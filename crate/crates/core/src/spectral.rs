//! The spectral sequence of the filtration of `Hom₊(T,G)` by support size,
//! pages one and two over GF(2).
//!
//! `E₁^{p,q}` is the sum over `S ⊆ V(T)` with `|S| = p+1` of
//! `H^q(Hom(T[S],G))`, and `d₁` is the sum of the pullbacks along the
//! restrictions `η ↦ η|_S` from `Hom(T[S ∪ {x}],G)`. Cohomology is taken in
//! the barycentric subdivision so that restriction is a simplicial map.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::Serialize;

use crate::algebra::{rank_gf2, BitVec, SparseBitMatrix};
use crate::complex::{barycentric, build_hom, build_hom_plus, ProdComplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::homology::{betti_gf2, euler_characteristic, CellComplex, CohomologyBasis};
use crate::vset::VertexSet;

/// Largest source graph accepted; the tableau visits every vertex subset.
pub const MAX_SOURCE_VERTICES: usize = 16;

/// `Hom(T[S],G)` with its subdivision and a cohomology basis.
#[derive(Clone, Debug)]
pub struct SubsetPiece {
    pub subset: VertexSet,
    complex: ProdComplex,
    bd: SimplicialComplex,
    basis: CohomologyBasis,
}

impl SubsetPiece {
    pub fn complex(&self) -> &ProdComplex {
        &self.complex
    }

    pub fn cohomology_dims(&self) -> Vec<usize> {
        self.basis.dims()
    }
}

/// Ranks `ranks[p][q]` of one page. Page one also keeps its summands.
#[derive(Clone, Debug, Serialize)]
pub struct Tableau {
    pub page: usize,
    pub ranks: Vec<Vec<usize>>,
    #[serde(skip)]
    pieces: Vec<SubsetPiece>,
}

impl Tableau {
    pub fn rank(&self, p: usize, q: usize) -> usize {
        self.ranks.get(p).and_then(|r| r.get(q)).copied().unwrap_or(0)
    }

    pub fn columns(&self) -> usize {
        self.ranks.len()
    }

    pub fn rows(&self) -> usize {
        self.ranks.first().map_or(0, |r| r.len())
    }

    pub fn euler(&self) -> i64 {
        let mut total = 0i64;
        for (p, col) in self.ranks.iter().enumerate() {
            for (q, &r) in col.iter().enumerate() {
                total += if (p + q) % 2 == 0 { r as i64 } else { -(r as i64) };
            }
        }
        total
    }

    /// Sum of the entries on each antidiagonal `p + q = n`.
    pub fn total_degree(&self) -> Vec<usize> {
        let mut out = vec![0; (self.columns() + self.rows()).saturating_sub(1)];
        for (p, col) in self.ranks.iter().enumerate() {
            for (q, &r) in col.iter().enumerate() {
                out[p + q] += r;
            }
        }
        while out.last() == Some(&0) {
            out.pop();
        }
        out
    }

    pub fn pieces(&self) -> &[SubsetPiece] {
        &self.pieces
    }

    /// Position of the first basis element of piece `idx` in `E₁^{p,q}`.
    fn offset(&self, idx: usize, q: usize) -> usize {
        let k = self.pieces[idx].subset.len();
        self.pieces[..idx]
            .iter()
            .filter(|s| s.subset.len() == k)
            .map(|s| s.basis.dim(q))
            .sum()
    }

    fn piece_index(&self, s: VertexSet) -> usize {
        self.pieces
            .binary_search_by(|x| (x.subset.len(), x.subset).cmp(&(s.len(), s)))
            .expect("every nonempty subset has a piece")
    }
}

fn subsets_by_size(n: usize) -> Vec<VertexSet> {
    let mut all: Vec<VertexSet> = (1u64..(1u64 << n)).map(VertexSet).collect();
    all.sort_by_key(|s| (s.len(), *s));
    all
}

fn rename_budget(e: Error, s: VertexSet) -> Error {
    match e {
        Error::Budget { stage, count, budget } => Error::Budget {
            stage: format!("{stage} for subset {:?}", s.to_vec()),
            count,
            budget,
        },
        other => other,
    }
}

fn build_piece(t: &Graph, g: &Graph, s: VertexSet, cell_budget: usize, bd_budget: usize) -> Result<SubsetPiece> {
    let ts = t.induced(&s.to_vec());
    let complex = build_hom(&ts, g, cell_budget).map_err(|e| rename_budget(e, s))?;
    let bd = barycentric(&complex, bd_budget).map_err(|e| rename_budget(e, s))?;
    let basis = CohomologyBasis::new(&bd)?;
    Ok(SubsetPiece {
        subset: s,
        complex,
        bd,
        basis,
    })
}

/// Page one. Subsets are processed in parallel.
pub fn e1_tableau(t: &Graph, g: &Graph, cell_budget: usize, bd_budget: usize) -> Result<Tableau> {
    let n = t.vertex_count();
    if n > MAX_SOURCE_VERTICES {
        return Err(Error::Parameter(format!(
            "source has {n} vertices, at most {MAX_SOURCE_VERTICES} supported"
        )));
    }
    let subsets = subsets_by_size(n);
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<Result<SubsetPiece>>>> = Mutex::new(vec![None; subsets.len()]);
    let workers = std::thread::available_parallelism()
        .map_or(1, |w| w.get())
        .min(subsets.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= subsets.len() {
                    break;
                }
                let r = build_piece(t, g, subsets[i], cell_budget, bd_budget);
                slots.lock().expect("no worker panicked")[i] = Some(r);
            });
        }
    });
    let pieces: Vec<SubsetPiece> = slots
        .into_inner()
        .expect("no worker panicked")
        .into_iter()
        .map(|r| r.expect("every subset processed"))
        .collect::<Result<_>>()?;
    let rows = pieces.iter().map(|s| s.basis.dims().len()).max().unwrap_or(0);
    let mut ranks = vec![vec![0; rows]; n];
    for s in &pieces {
        for (q, d) in s.basis.dims().into_iter().enumerate() {
            ranks[s.subset.len() - 1][q] += d;
        }
    }
    while ranks.first().is_some_and(|c| !c.is_empty()) && ranks.iter().all(|c| c.last() == Some(&0)) {
        for c in &mut ranks {
            c.pop();
        }
    }
    Ok(Tableau { page: 1, ranks, pieces })
}

/// The first differential, `maps[p][q]: E₁^{p,q} → E₁^{p+1,q}`, stored with
/// one row per source basis element listing its image coordinates.
#[derive(Clone, Debug)]
pub struct D1 {
    pub maps: Vec<Vec<SparseBitMatrix>>,
}

impl D1 {
    pub fn rank(&self, p: usize, q: usize) -> usize {
        self.maps.get(p).and_then(|r| r.get(q)).map_or(0, rank_gf2)
    }

    pub fn ranks(&self) -> Vec<Vec<usize>> {
        self.maps.iter().map(|col| col.iter().map(rank_gf2).collect()).collect()
    }

    /// Whether every composite of two consecutive maps vanishes.
    pub fn squares_to_zero(&self) -> Result<bool> {
        for p in 0..self.maps.len().saturating_sub(1) {
            for q in 0..self.maps[p].len() {
                if !self.maps[p][q].mul(&self.maps[p + 1][q])?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Cell map `Hom(T[S'],G) → Hom(T[S],G)` forgetting vertex `x` of `S'`.
fn restriction(big: &SubsetPiece, small: &SubsetPiece, x: usize) -> Result<Vec<u32>> {
    let pos = VertexSet(big.subset.0 & ((1u64 << x) - 1)).len();
    let mut eta = Vec::with_capacity(small.subset.len());
    (0..big.complex.len())
        .map(|id| {
            eta.clear();
            let full = big.complex.eta(id);
            eta.extend_from_slice(&full[..pos]);
            eta.extend_from_slice(&full[pos + 1..]);
            small
                .complex
                .lookup(&eta)
                .map(|j| j as u32)
                .ok_or_else(|| Error::Defect("restricted cell is missing".into()))
        })
        .collect()
}

/// The first differential of a page-one tableau.
pub fn d1_maps(tab: &Tableau) -> Result<D1> {
    if tab.page != 1 {
        return Err(Error::Parameter("d1 needs a page-one tableau".into()));
    }
    let cols = tab.columns();
    let rows = tab.rows();
    let mut data: Vec<Vec<Vec<Vec<u32>>>> = (0..cols.saturating_sub(1))
        .map(|p| (0..rows).map(|q| vec![Vec::new(); tab.rank(p, q)]).collect())
        .collect();
    let full = if cols == 0 {
        VertexSet::EMPTY
    } else {
        VertexSet::full(cols)
    };
    let mut buf = Vec::new();
    for (si, small) in tab.pieces.iter().enumerate() {
        let p = small.subset.len() - 1;
        for x in full.iter().filter(|&x| !small.subset.contains(x)) {
            let bi = tab.piece_index(small.subset.with(x));
            let big = &tab.pieces[bi];
            let cells = restriction(big, small, x)?;
            for q in 0..rows {
                let dim = small.basis.dim(q);
                if dim == 0 || big.basis.dim(q) == 0 || big.bd.count(q) == 0 {
                    continue;
                }
                // image of every q-simplex, None when it degenerates
                let image: Vec<Option<usize>> = big
                    .bd
                    .simplices_of_dim(q)
                    .map(|s| {
                        buf.clear();
                        buf.extend(s.iter().map(|&c| cells[c as usize]));
                        if buf.windows(2).any(|w| w[0] == w[1]) {
                            None
                        } else {
                            small.bd.index_of(&buf)
                        }
                    })
                    .collect();
                let (so, bo) = (tab.offset(si, q), tab.offset(bi, q));
                for i in 0..dim {
                    let rep =
                        BitVec::from_indices(small.bd.count(q), small.basis.rep(q, i).iter().map(|&c| c as usize));
                    let pulled: Vec<u32> = image
                        .iter()
                        .enumerate()
                        .filter(|(_, k)| k.is_some_and(|k| rep.get(k)))
                        .map(|(j, _)| j as u32)
                        .collect();
                    let coords = big.basis.express(q, &pulled).map_err(|_| {
                        Error::Defect(format!(
                            "pullback to {:?} in degree {q} is not a cocycle",
                            big.subset.to_vec()
                        ))
                    })?;
                    data[p][q][so + i].extend(coords.iter_ones().map(|c| (bo + c) as u32));
                }
            }
        }
    }
    let maps = data
        .into_iter()
        .enumerate()
        .map(|(p, col)| {
            col.into_iter()
                .enumerate()
                .map(|(q, rows_pq)| SparseBitMatrix::new(tab.rank(p, q), tab.rank(p + 1, q), rows_pq))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(D1 { maps })
}

/// Page two: `E₁^{p,q} - rank d₁^{p,q} - rank d₁^{p-1,q}`.
pub fn e2_tableau(tab: &Tableau, d1: &D1) -> Tableau {
    let r = d1.ranks();
    let get = |p: usize, q: usize| r.get(p).and_then(|c| c.get(q)).copied().unwrap_or(0);
    let ranks = (0..tab.columns())
        .map(|p| {
            (0..tab.rows())
                .map(|q| tab.rank(p, q) - get(p, q) - if p > 0 { get(p - 1, q) } else { 0 })
                .collect()
        })
        .collect();
    Tableau {
        page: 2,
        ranks,
        pieces: Vec::new(),
    }
}

/// True when no differential `d_r`, `r ≥ 2`, can be nonzero on page two,
/// judged only from which entries vanish.
pub fn collapses_by_sparsity(e2: &Tableau) -> bool {
    for p in 0..e2.columns() {
        for q in 0..e2.rows() {
            if e2.rank(p, q) == 0 {
                continue;
            }
            for r in 2..e2.columns().max(2) {
                if q + 1 >= r && e2.rank(p + r, q + 1 - r) != 0 {
                    return false;
                }
            }
        }
    }
    true
}

/// Cells of `Hom₊(T,G)` with support of one fixed size; the boundary drops
/// faces with smaller support. Its homology in degree `p + q` is
/// `E₁^{p,q}` for support size `p + 1`.
struct SupportSlice<'a> {
    x: &'a ProdComplex,
    ids: Vec<Vec<usize>>,
    local: Vec<u32>,
}

impl<'a> SupportSlice<'a> {
    fn new(x: &'a ProdComplex, size: usize) -> Self {
        let top = (x.dim() + 1).max(0) as usize;
        let mut ids = vec![Vec::new(); top];
        let mut local = vec![u32::MAX; x.len()];
        for (d, slot) in ids.iter_mut().enumerate() {
            for id in x.ids_of_dim(d) {
                if crate::complex::support(x.eta(id)).len() == size {
                    local[id] = slot.len() as u32;
                    slot.push(id);
                }
            }
        }
        SupportSlice { x, ids, local }
    }
}

impl CellComplex for SupportSlice<'_> {
    fn top_dim(&self) -> isize {
        self.ids.len() as isize - 1
    }

    fn cell_count(&self, d: usize) -> usize {
        self.ids[d].len()
    }

    fn boundary_gf2(&self, d: usize, i: usize) -> Vec<u32> {
        self.x
            .faces(self.ids[d][i])
            .into_iter()
            .map(|f| self.local[f])
            .filter(|&l| l != u32::MAX)
            .collect()
    }
}

/// Page one computed from the relative chain complexes of `Hom₊(T,G)`
/// directly, without the decomposition over subsets.
pub fn e1_direct(t: &Graph, g: &Graph, cell_budget: usize) -> Result<Vec<Vec<usize>>> {
    let x = build_hom_plus(t, g, cell_budget)?;
    let n = t.vertex_count();
    let mut ranks = vec![Vec::new(); n];
    for (p, col) in ranks.iter_mut().enumerate() {
        let slice = SupportSlice::new(&x, p + 1);
        let b = betti_gf2(&slice)?;
        *col = b.0.iter().skip(p).copied().collect();
    }
    let rows = ranks.iter().map(|c| c.len()).max().unwrap_or(0);
    for col in &mut ranks {
        col.resize(rows, 0);
    }
    Ok(ranks)
}

/// Both pages with every consistency check.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralReport {
    pub e1: Vec<Vec<usize>>,
    pub e2: Vec<Vec<usize>>,
    pub d1_ranks: Vec<Vec<usize>>,
    pub d1_squared_zero: bool,
    pub e1_direct_match: bool,
    pub euler_e1: i64,
    pub euler_e2: i64,
    pub euler_complex: i64,
    pub collapsed_by_sparsity: bool,
    pub e2_total_degree: Vec<usize>,
    pub betti: Vec<usize>,
    /// Only meaningful when the sequence collapses by sparsity.
    pub e2_matches_betti: Option<bool>,
}

impl SpectralReport {
    pub fn consistent(&self) -> bool {
        self.d1_squared_zero
            && self.e1_direct_match
            && self.euler_e1 == self.euler_complex
            && self.euler_e2 == self.euler_complex
            && self.e2_matches_betti != Some(false)
    }
}

fn pad_eq(a: &[Vec<usize>], b: &[Vec<usize>]) -> bool {
    let cols = a.len().max(b.len());
    let at = |m: &[Vec<usize>], p: usize, q: usize| m.get(p).and_then(|c| c.get(q)).copied().unwrap_or(0);
    let rows = a.iter().chain(b).map(|c| c.len()).max().unwrap_or(0);
    (0..cols).all(|p| (0..rows).all(|q| at(a, p, q) == at(b, p, q)))
}

pub fn spectral_report(t: &Graph, g: &Graph, cell_budget: usize, bd_budget: usize) -> Result<SpectralReport> {
    let e1 = e1_tableau(t, g, cell_budget, bd_budget)?;
    let d1 = d1_maps(&e1)?;
    let e2 = e2_tableau(&e1, &d1);
    let plus = build_hom_plus(t, g, cell_budget)?;
    let betti = betti_gf2(&plus)?;
    let collapsed = collapses_by_sparsity(&e2);
    let total = e2.total_degree();
    Ok(SpectralReport {
        d1_ranks: d1.ranks(),
        d1_squared_zero: d1.squares_to_zero()?,
        e1_direct_match: pad_eq(&e1.ranks, &e1_direct(t, g, cell_budget)?),
        euler_e1: e1.euler(),
        euler_e2: e2.euler(),
        euler_complex: euler_characteristic(&plus),
        collapsed_by_sparsity: collapsed,
        e2_matches_betti: collapsed.then(|| betti.same_as(&total)),
        e2_total_degree: total,
        betti: betti.0,
        e1: e1.ranks,
        e2: e2.ranks,
    })
}

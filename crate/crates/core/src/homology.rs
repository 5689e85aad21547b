//! Chain complexes over GF(2) and the integers, Betti numbers and Euler
//! characteristics.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Serialize, Serializer};

use crate::algebra::{rank_gf2, smith_normal_form, xor_sorted, BitVec, IntSparseMatrix, SparseBitMatrix};
use crate::complex::{ProdComplex, SimplicialComplex};
use crate::error::{Error, Result};

/// A finite cell complex described by cell counts and mod-2 boundaries.
pub trait CellComplex {
    /// Top dimension, `-1` when empty.
    fn top_dim(&self) -> isize;

    fn cell_count(&self, d: usize) -> usize;

    /// Mod-2 boundary of cell `i` of dimension `d`, as indices of
    /// `(d-1)`-cells. Repeated indices cancel.
    fn boundary_gf2(&self, d: usize, i: usize) -> Vec<u32>;

    fn cell_counts(&self) -> Vec<usize> {
        (0..=self.top_dim()).map(|d| self.cell_count(d as usize)).collect()
    }
}

impl CellComplex for ProdComplex {
    fn top_dim(&self) -> isize {
        self.dim()
    }

    fn cell_count(&self, d: usize) -> usize {
        self.count(d)
    }

    fn boundary_gf2(&self, d: usize, i: usize) -> Vec<u32> {
        if d == 0 {
            return Vec::new();
        }
        let base = self.dim_offset(d - 1);
        self.faces(self.dim_offset(d) + i)
            .into_iter()
            .map(|f| (f - base) as u32)
            .collect()
    }
}

impl CellComplex for SimplicialComplex {
    fn top_dim(&self) -> isize {
        self.dim()
    }

    fn cell_count(&self, d: usize) -> usize {
        self.count(d)
    }

    fn boundary_gf2(&self, d: usize, i: usize) -> Vec<u32> {
        self.faces(d, i).into_iter().map(|f| f as u32).collect()
    }
}

/// Mod-2 chain complex. `boundary[d]` has one row per `d`-cell listing its
/// `(d-1)`-faces, so it is the transpose of the usual `∂_d` and doubles as
/// the coboundary `δ_{d-1}`.
#[derive(Clone, Debug)]
pub struct ChainComplexGF2 {
    pub counts: Vec<usize>,
    pub boundary: Vec<SparseBitMatrix>,
}

/// Builds the mod-2 chain complex and checks `∂∘∂ = 0`.
pub fn chain_complex_gf2<X: CellComplex + ?Sized>(x: &X) -> Result<ChainComplexGF2> {
    let counts = x.cell_counts();
    let mut boundary = Vec::with_capacity(counts.len());
    for d in 0..counts.len() {
        let cols = if d == 0 { 0 } else { counts[d - 1] };
        let data = (0..counts[d]).map(|i| x.boundary_gf2(d, i)).collect();
        boundary.push(SparseBitMatrix::new(counts[d], cols, data)?);
    }
    for d in 2..counts.len() {
        if !boundary[d].mul(&boundary[d - 1])?.is_zero() {
            return Err(Error::Defect(format!("boundary squared is nonzero in dimension {d}")));
        }
    }
    Ok(ChainComplexGF2 { counts, boundary })
}

impl ChainComplexGF2 {
    /// `rank ∂_d` for each `d`, zero for `d = 0`.
    pub fn ranks(&self) -> Vec<usize> {
        let mut ranks = vec![0; self.counts.len()];
        std::thread::scope(|s| {
            let handles: Vec<_> = (1..self.counts.len())
                .map(|d| s.spawn(move || rank_gf2(&self.boundary[d])))
                .collect();
            for (d, h) in (1..self.counts.len()).zip(handles) {
                ranks[d] = h.join().expect("rank worker panicked");
            }
        });
        ranks
    }

    pub fn betti(&self) -> BettiVector {
        let r = self.ranks();
        let n = self.counts.len();
        BettiVector(
            (0..n)
                .map(|d| self.counts[d] - r[d] - if d + 1 < n { r[d + 1] } else { 0 })
                .collect(),
        )
    }
}

/// Unreduced mod-2 Betti numbers, one per dimension up to the top one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct BettiVector(pub Vec<usize>);

impl BettiVector {
    pub fn get(&self, d: usize) -> usize {
        self.0.get(d).copied().unwrap_or(0)
    }

    /// Equality up to trailing zeros.
    pub fn same_as(&self, other: &[usize]) -> bool {
        let n = self.0.len().max(other.len());
        (0..n).all(|d| self.get(d) == other.get(d).copied().unwrap_or(0))
    }

    pub fn euler(&self) -> i64 {
        alternating(&self.0)
    }
}

impl fmt::Display for BettiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().enumerate().map(|(d, b)| format!("b{d}={b}")).collect();
        if parts.is_empty() {
            write!(f, "empty")
        } else {
            write!(f, "{}", parts.join(" "))
        }
    }
}

/// Unreduced Betti numbers over GF(2).
pub fn betti_gf2<X: CellComplex + ?Sized>(x: &X) -> Result<BettiVector> {
    Ok(chain_complex_gf2(x)?.betti())
}

fn alternating(v: &[usize]) -> i64 {
    v.iter()
        .enumerate()
        .map(|(d, &c)| if d % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum()
}

/// Alternating sum of cell counts.
pub fn euler_characteristic<X: CellComplex + ?Sized>(x: &X) -> i64 {
    alternating(&x.cell_counts())
}

const NONE: u32 = u32::MAX;

/// Cocycle representatives of a basis of `H^q` over GF(2) for every `q`.
///
/// The coboundary columns are reduced left to right, skipping columns known
/// to vanish because their index is already a pivot one degree lower. Zero
/// columns that are not pivots carry one class each; the reduced nonzero
/// columns span the coboundaries. Every cochain below is a sorted list of
/// cell indices.
#[derive(Clone, Debug)]
pub struct CohomologyBasis {
    counts: Vec<usize>,
    reps: Vec<Vec<Vec<u32>>>,
    // per degree: leading cell -> representative number
    rep_lead: Vec<Vec<u32>>,
    // per degree: leading cell -> reduced coboundary with that lead
    exact_lead: Vec<Vec<u32>>,
    exact: Vec<Vec<Vec<u32>>>,
}

impl CohomologyBasis {
    pub fn new<X: CellComplex + ?Sized>(x: &X) -> Result<Self> {
        let cc = chain_complex_gf2(x)?;
        let top = cc.counts.len();
        let mut basis = CohomologyBasis {
            counts: cc.counts.clone(),
            reps: Vec::with_capacity(top),
            rep_lead: Vec::with_capacity(top),
            exact_lead: Vec::with_capacity(top + 1),
            exact: Vec::with_capacity(top + 1),
        };
        basis
            .exact_lead
            .push(vec![NONE; cc.counts.first().copied().unwrap_or(0)]);
        basis.exact.push(Vec::new());
        for q in 0..top {
            let n = cc.counts[q];
            let next = cc.counts.get(q + 1).copied().unwrap_or(0);
            let cofaces = if q + 1 < top {
                cc.boundary[q + 1].transpose()
            } else {
                SparseBitMatrix::zeros(n, 0)
            };
            let mut owner = vec![NONE; next];
            let mut cols: Vec<Vec<u32>> = Vec::new();
            let mut vs: Vec<Vec<u32>> = Vec::new();
            let mut reps = Vec::new();
            let mut rep_lead = vec![NONE; n];
            for j in 0..n {
                if basis.exact_lead[q][j] != NONE {
                    continue;
                }
                let mut col = cofaces.row(j).to_vec();
                let mut v = vec![j as u32];
                while let Some(&low) = col.last() {
                    let o = owner[low as usize];
                    if o == NONE {
                        break;
                    }
                    col = xor_sorted(&col, &cols[o as usize]);
                    v = xor_sorted(&v, &vs[o as usize]);
                }
                if let Some(&low) = col.last() {
                    owner[low as usize] = cols.len() as u32;
                    cols.push(col);
                    vs.push(v);
                } else {
                    rep_lead[j] = reps.len() as u32;
                    reps.push(v);
                }
            }
            let mut lead = vec![NONE; next];
            for (i, c) in cols.iter().enumerate() {
                lead[*c.last().expect("nonzero column") as usize] = i as u32;
            }
            basis.reps.push(reps);
            basis.rep_lead.push(rep_lead);
            basis.exact_lead.push(lead);
            basis.exact.push(cols);
        }
        Ok(basis)
    }

    /// Rank of `H^q`.
    pub fn dim(&self, q: usize) -> usize {
        self.reps.get(q).map_or(0, |r| r.len())
    }

    pub fn dims(&self) -> Vec<usize> {
        self.reps.iter().map(|r| r.len()).collect()
    }

    pub fn cell_count(&self, q: usize) -> usize {
        self.counts.get(q).copied().unwrap_or(0)
    }

    /// Representative cocycle of the `i`-th class in degree `q`.
    pub fn rep(&self, q: usize, i: usize) -> &[u32] {
        &self.reps[q][i]
    }

    /// Coordinates of the class of a cocycle. Fails if the cochain is not
    /// closed.
    pub fn express(&self, q: usize, cochain: &[u32]) -> Result<BitVec> {
        let mut coords = BitVec::zeros(self.dim(q));
        let mut c = cochain.to_vec();
        while let Some(&l) = c.last() {
            let l = l as usize;
            let e = self.exact_lead[q].get(l).copied().unwrap_or(NONE);
            if e != NONE {
                c = xor_sorted(&c, &self.exact[q][e as usize]);
                continue;
            }
            let r = self.rep_lead.get(q).and_then(|v| v.get(l)).copied().unwrap_or(NONE);
            if r == NONE {
                return Err(Error::Defect(format!("cochain in degree {q} is not closed")));
            }
            coords.flip(r as usize);
            c = xor_sorted(&c, &self.reps[q][r as usize]);
        }
        Ok(coords)
    }
}

/// One integral homology group: free rank plus torsion coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntegerGroup {
    pub rank: usize,
    #[serde(serialize_with = "serialize_bigints")]
    pub torsion: Vec<BigInt>,
}

fn serialize_bigints<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for b in v {
        match u64::try_from(b) {
            Ok(small) => seq.serialize_element(&small)?,
            Err(_) => seq.serialize_element(&b.to_string())?,
        }
    }
    seq.end()
}

impl fmt::Display for IntegerGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        match self.rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        parts.extend(self.torsion.iter().map(|t| format!("Z/{t}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Signed simplicial boundary with faces ordered by the sorted vertex lists:
/// face `i` (omitting vertex `i`) carries sign `(-1)^i`.
pub fn integer_boundary(y: &SimplicialComplex, d: usize) -> Result<IntSparseMatrix> {
    let cols = if d == 0 { 0 } else { y.count(d - 1) };
    let rows = (0..y.count(d))
        .map(|i| {
            y.faces(d, i)
                .into_iter()
                .enumerate()
                .map(|(k, f)| (f as u32, if k % 2 == 0 { 1 } else { -1 }))
                .collect()
        })
        .collect();
    IntSparseMatrix::from_rows_i64(y.count(d), cols, rows)
}

/// Integral homology `H_d` for every dimension of a simplicial complex.
pub fn integer_homology(y: &SimplicialComplex) -> Result<Vec<IntegerGroup>> {
    let top = y.dim();
    if top < 0 {
        return Ok(Vec::new());
    }
    let top = top as usize;
    let mut factors: Vec<Vec<BigInt>> = vec![Vec::new(); top + 2];
    for d in 1..=top {
        factors[d] = smith_normal_form(&integer_boundary(y, d)?);
    }
    Ok((0..=top)
        .map(|d| {
            let rank_out = factors[d].len();
            let rank_in = factors[d + 1].len();
            IntegerGroup {
                rank: y.count(d) - rank_out - rank_in,
                torsion: factors[d + 1].iter().filter(|f| !f.is_one()).cloned().collect(),
            }
        })
        .collect())
}

/// Combined report for the command line.
#[derive(Clone, Debug, Serialize)]
pub struct HomologyReport {
    pub cells: Vec<usize>,
    pub euler: i64,
    pub betti_gf2: BettiVector,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub integer: Option<Vec<IntegerGroup>>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{barycentric, build_hom, build_hom_plus, build_independence, build_neighborhood};
    use crate::graph::{fold_reduce, make_named_graph, Graph};

    /// Minimal 6-vertex triangulation of the real projective plane.
    fn rp2() -> SimplicialComplex {
        let facets = [
            [0, 1, 2],
            [0, 2, 3],
            [0, 3, 4],
            [0, 4, 5],
            [0, 1, 5],
            [1, 2, 4],
            [2, 3, 5],
            [1, 3, 4],
            [1, 3, 5],
            [2, 4, 5],
        ];
        SimplicialComplex::from_facets(6, &facets.iter().map(|f| f.to_vec()).collect::<Vec<_>>())
    }

    fn hom(t: &Graph, g: &Graph) -> ProdComplex {
        build_hom(t, g, 1_000_000).unwrap()
    }

    #[test]
    fn rp2_fixture() {
        let x = rp2();
        assert_eq!(x.f_vector(), vec![6, 15, 10]);
        let h = integer_homology(&x).unwrap();
        assert_eq!(
            h[0],
            IntegerGroup {
                rank: 1,
                torsion: vec![]
            }
        );
        assert_eq!(
            h[1],
            IntegerGroup {
                rank: 0,
                torsion: vec![BigInt::from(2)]
            }
        );
        assert_eq!(
            h[2],
            IntegerGroup {
                rank: 0,
                torsion: vec![]
            }
        );
        assert_eq!(betti_gf2(&x).unwrap().0, vec![1, 1, 1]);
        assert_eq!(h[1].to_string(), "Z/2");
    }

    #[test]
    fn hexagon_boundary_columns() {
        let x = hom(&Graph::complete(2), &Graph::complete(3));
        let c = chain_complex_gf2(&x).unwrap();
        assert!((0..6).all(|i| c.boundary[1].row(i).len() == 2));
        assert_eq!(c.betti().0, vec![1, 1]);
        assert_eq!(euler_characteristic(&x), 0);
    }

    #[test]
    fn square_cell_has_four_sides() {
        let x = hom(&Graph::empty(2), &Graph::complete(2));
        assert_eq!(x.boundary_gf2(2, 0).len(), 4);
        assert_eq!(betti_gf2(&x).unwrap().0, vec![1, 0, 0]);
    }

    #[test]
    fn odd_cycle_coloring_complex() {
        let x = hom(&Graph::cycle(5), &Graph::complete(3));
        chain_complex_gf2(&x).unwrap();
        assert_eq!(betti_gf2(&x).unwrap().0, vec![2, 2]);
        let y = hom(&Graph::cycle(6), &Graph::complete(3));
        assert_eq!(betti_gf2(&y).unwrap().get(0), 7);
    }

    #[test]
    fn wedge_of_circles() {
        let x = hom(&Graph::complete(3), &Graph::complete(4));
        let b = betti_gf2(&x).unwrap();
        assert_eq!((b.get(0), b.get(1)), (1, 13));
    }

    #[test]
    fn euler_examples() {
        let oct = build_hom_plus(&Graph::complete(2), &Graph::complete(3), 100).unwrap();
        assert_eq!(euler_characteristic(&oct), 2);
        assert_eq!(euler_characteristic(&hom(&Graph::complete(3), &Graph::complete(3))), 6);
        let b = betti_gf2(&oct).unwrap();
        assert_eq!(b.euler(), 2);
    }

    #[test]
    fn integer_sphere() {
        let bd = barycentric(&hom(&Graph::complete(2), &Graph::complete(4)), 1_000_000).unwrap();
        let h = integer_homology(&bd).unwrap();
        let ranks: Vec<usize> = h.iter().map(|g| g.rank).collect();
        assert_eq!(ranks, vec![1, 0, 1]);
        assert!(h.iter().all(|g| g.torsion.is_empty()));
    }

    #[test]
    fn subdivision_preserves_betti() {
        for (t, g) in [
            (Graph::cycle(5), Graph::complete(3)),
            (Graph::complete(3), Graph::complete(4)),
            (Graph::path(3), Graph::complete(3)),
        ] {
            let x = hom(&t, &g);
            let bd = barycentric(&x, 10_000_000).unwrap();
            assert!(betti_gf2(&x).unwrap().same_as(&betti_gf2(&bd).unwrap().0));
            let chi_int: i64 = integer_homology(&bd)
                .unwrap()
                .iter()
                .enumerate()
                .map(|(d, h)| if d % 2 == 0 { h.rank as i64 } else { -(h.rank as i64) })
                .sum();
            assert_eq!(chi_int, euler_characteristic(&x));
        }
    }

    #[test]
    fn independence_complexes_of_cycles() {
        assert!(betti_gf2(&build_independence(&Graph::cycle(6)))
            .unwrap()
            .same_as(&[1, 2]));
        assert_eq!(betti_gf2(&build_independence(&Graph::cycle(5))).unwrap().0, vec![1, 1]);
    }

    #[test]
    fn neighborhood_agrees_with_edge_hom() {
        let k4 = Graph::complete(4);
        let n = betti_gf2(&build_neighborhood(&k4)).unwrap();
        assert_eq!(n.0, vec![1, 0, 1]);
        for g in [
            k4,
            Graph::cycle(5),
            make_named_graph("kneser:5,2").unwrap(),
            Graph::path(4),
        ] {
            let a = betti_gf2(&build_neighborhood(&g)).unwrap();
            let b = betti_gf2(&hom(&Graph::complete(2), &g)).unwrap();
            assert!(a.same_as(&b.0), "{a} vs {b}");
        }
    }

    #[test]
    fn folding_preserves_betti() {
        let tree = Graph::from_edges(5, &[(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap();
        let k3 = Graph::complete(3);
        let before = betti_gf2(&hom(&tree, &k3)).unwrap();
        let after = betti_gf2(&hom(&fold_reduce(&tree).result, &k3)).unwrap();
        assert!(before.same_as(&after.0));
        assert_eq!(after.0, vec![1, 1]);
    }

    #[test]
    fn cohomology_basis_matches_betti() {
        let cases: Vec<Box<dyn Fn() -> SimplicialComplex>> = vec![
            Box::new(rp2),
            Box::new(|| barycentric(&hom(&Graph::cycle(5), &Graph::complete(3)), 100_000).unwrap()),
            Box::new(|| barycentric(&hom(&Graph::complete(3), &Graph::complete(4)), 100_000).unwrap()),
            Box::new(|| build_independence(&Graph::cycle(9))),
        ];
        for make in cases {
            let y = make();
            let basis = CohomologyBasis::new(&y).unwrap();
            let b = betti_gf2(&y).unwrap();
            assert!(b.same_as(&basis.dims()));
            let cc = chain_complex_gf2(&y).unwrap();
            for q in 0..basis.dims().len() {
                for i in 0..basis.dim(q) {
                    let rep = basis.rep(q, i);
                    if q + 1 < cc.counts.len() {
                        let z = BitVec::from_indices(cc.counts[q], rep.iter().map(|&c| c as usize));
                        assert!(cc.boundary[q + 1].mul_vec(&z).unwrap().is_zero());
                    }
                    let coords = basis.express(q, rep).unwrap();
                    assert_eq!(coords.iter_ones().collect::<Vec<_>>(), vec![i]);
                }
            }
        }
    }

    #[test]
    fn express_rejects_open_cochains_and_kills_coboundaries() {
        let y = barycentric(&hom(&Graph::complete(2), &Graph::complete(3)), 1000).unwrap();
        let basis = CohomologyBasis::new(&y).unwrap();
        assert_eq!(basis.dims(), vec![1, 1]);
        assert!(basis.express(0, &[0]).is_err());
        // coboundary of a vertex: the two edges containing it
        let star: Vec<u32> = (0..y.count(1) as u32)
            .filter(|&e| y.simplex(1, e as usize).contains(&0))
            .collect();
        assert!(basis.express(1, &star).unwrap().is_zero());
        let all: Vec<u32> = (0..y.count(0) as u32).collect();
        assert_eq!(basis.express(0, &all).unwrap().count_ones(), 1);
    }

    #[test]
    fn display_forms() {
        assert_eq!(BettiVector(vec![2, 2]).to_string(), "b0=2 b1=2");
        let g = IntegerGroup {
            rank: 2,
            torsion: vec![BigInt::from(2)],
        };
        assert_eq!(g.to_string(), "Z^2 + Z/2");
    }
}

//! Free involutions on Hom complexes, orbit quotients of the barycentric
//! subdivision, powers of the first Stiefel-Whitney class and the height.

use serde::Serialize;

use crate::algebra::{solve_gf2, BitVec, SparseBitMatrix};
use crate::complex::{barycentric_skeleton, ProdComplex, SimplicialComplex};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::homology::CellComplex;
use crate::vset::VertexSet;

/// Default cap on the number of simplices of the subdivision.
pub const DEFAULT_BD_BUDGET: usize = 5_000_000;

/// Cellular involution on a Hom complex induced by automorphisms of the
/// source and target.
#[derive(Clone, Debug)]
pub struct Z2Action {
    gamma_t: Vec<usize>,
    gamma_g: Vec<usize>,
    map: Vec<u32>,
    fixed: Option<usize>,
    flips_edge: bool,
}

fn check_involution(g: &Graph, perm: &[usize], which: &str) -> Result<()> {
    if perm.len() != g.vertex_count() {
        return Err(Error::Validation(format!(
            "{which} permutation has length {}, graph has {} vertices",
            perm.len(),
            g.vertex_count()
        )));
    }
    if !g.is_automorphism(perm) {
        return Err(Error::Validation(format!("{which} permutation is not an automorphism")));
    }
    if (0..perm.len()).any(|v| perm[perm[v]] != v) {
        return Err(Error::Validation(format!(
            "{which} permutation does not square to the identity"
        )));
    }
    Ok(())
}

fn map_set(s: VertexSet, perm: &[usize]) -> VertexSet {
    VertexSet::from_iter(s.iter().map(|v| perm[v]))
}

/// The involution `η ↦ γ_G ∘ η ∘ γ_T⁻¹` on the cells of `x`.
pub fn induced_action(x: &ProdComplex, gamma_t: &[usize], gamma_g: &[usize]) -> Result<Z2Action> {
    let (t, g) = (x.source(), x.target());
    check_involution(t, gamma_t, "source")?;
    check_involution(g, gamma_g, "target")?;
    let n = t.vertex_count();
    let mut map = Vec::with_capacity(x.len());
    let mut fixed = None;
    let mut image = vec![VertexSet::EMPTY; n];
    for id in 0..x.len() {
        let eta = x.eta(id);
        for v in 0..n {
            image[v] = map_set(eta[gamma_t[v]], gamma_g);
        }
        let j = x
            .lookup(&image)
            .ok_or_else(|| Error::Defect(format!("image of cell {id} is not a cell")))?;
        if j == id && fixed.is_none() {
            fixed = Some(id);
        }
        map.push(j as u32);
    }
    let flips_edge = (0..n).any(|v| t.has_edge(v, gamma_t[v]));
    Ok(Z2Action {
        gamma_t: gamma_t.to_vec(),
        gamma_g: gamma_g.to_vec(),
        map,
        fixed,
        flips_edge,
    })
}

impl Z2Action {
    pub fn image(&self, cell: usize) -> usize {
        self.map[cell] as usize
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn gamma_t(&self) -> &[usize] {
        &self.gamma_t
    }

    pub fn gamma_g(&self) -> &[usize] {
        &self.gamma_g
    }

    pub fn is_free(&self) -> bool {
        self.fixed.is_none()
    }

    pub fn fixed_cell(&self) -> Option<usize> {
        self.fixed
    }

    pub fn flips_edge(&self) -> bool {
        self.flips_edge
    }

    pub fn require_free(&self) -> Result<()> {
        match self.fixed {
            Some(cell) => Err(Error::NotFree { cell }),
            None => Ok(()),
        }
    }

    /// Advisory notes about the action.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if !self.flips_edge {
            w.push("source involution flips no edge; freeness is not guaranteed in general".to_string());
        }
        w
    }
}

/// Orbit complex of the subdivision under a free involution. Each orbit of
/// `k`-simplices is one cell; its faces are the orbits of the faces of a
/// representative. Labels assign every subdivision vertex to A or B.
#[derive(Clone, Debug)]
pub struct QuotientComplex {
    bd: SimplicialComplex,
    partner_cell: Vec<u32>,
    orbit: Vec<Vec<u32>>,
    reps: Vec<Vec<u32>>,
    label_a: Vec<bool>,
}

/// Full quotient of `Bd(X)`.
pub fn quotient_complex(x: &ProdComplex, a: &Z2Action, bd_budget: usize) -> Result<QuotientComplex> {
    quotient_skeleton(x, a, usize::MAX, bd_budget)
}

/// Quotient of the `max_dim`-skeleton of `Bd(X)`.
pub fn quotient_skeleton(x: &ProdComplex, a: &Z2Action, max_dim: usize, bd_budget: usize) -> Result<QuotientComplex> {
    a.require_free()?;
    if a.len() != x.len() {
        return Err(Error::Shape("action and complex have different cell counts".into()));
    }
    let bd = barycentric_skeleton(x, max_dim, bd_budget)?;
    Ok(QuotientComplex::from_subdivision(bd, a.map.clone()))
}

impl QuotientComplex {
    fn from_subdivision(bd: SimplicialComplex, partner_cell: Vec<u32>) -> Self {
        let top = bd.dim();
        let mut orbit = Vec::new();
        let mut reps = Vec::new();
        let mut buf = Vec::new();
        for d in 0..=top.max(-1) {
            let d = d as usize;
            let n = bd.count(d);
            let mut orb = vec![u32::MAX; n];
            let mut rep = Vec::with_capacity(n / 2);
            for i in 0..n {
                if orb[i] != u32::MAX {
                    continue;
                }
                // images of chains stay sorted since the action preserves dimension
                buf.clear();
                buf.extend(bd.simplex(d, i).iter().map(|&c| partner_cell[c as usize]));
                let j = bd.index_of(&buf).expect("subdivision is closed under the action");
                debug_assert_ne!(i, j);
                orb[i] = rep.len() as u32;
                orb[j] = rep.len() as u32;
                rep.push(i.min(j) as u32);
            }
            orbit.push(orb);
            reps.push(rep);
        }
        let label_a = (0..partner_cell.len()).map(|c| c < partner_cell[c] as usize).collect();
        QuotientComplex {
            bd,
            partner_cell,
            orbit,
            reps,
            label_a,
        }
    }

    pub fn subdivision(&self) -> &SimplicialComplex {
        &self.bd
    }

    /// Quotient vertex of a subdivision vertex.
    pub fn vertex_orbit(&self, v: usize) -> usize {
        self.orbit[0][v] as usize
    }

    pub fn orbit_of(&self, d: usize, simplex: usize) -> usize {
        self.orbit[d][simplex] as usize
    }

    /// Representative subdivision simplex of an orbit.
    pub fn representative(&self, d: usize, orbit: usize) -> &[u32] {
        self.bd.simplex(d, self.reps[d][orbit] as usize)
    }

    pub fn is_a(&self, v: usize) -> bool {
        self.label_a[v]
    }

    pub fn labels(&self) -> &[bool] {
        &self.label_a
    }

    /// Swaps A and B on the orbit of each listed subdivision vertex.
    pub fn flip_orbits(&mut self, vertices: &[usize]) {
        for &v in vertices {
            let w = self.partner_cell[v] as usize;
            self.label_a[v] = !self.label_a[v];
            self.label_a[w] = !self.label_a[w];
        }
    }

    /// Coboundary `δ_{k-1}`: one row per `k`-cell listing its `(k-1)`-faces.
    pub fn coboundary(&self, k: usize) -> Result<SparseBitMatrix> {
        let rows = self.cell_count(k);
        let cols = if k == 0 { 0 } else { self.cell_count(k - 1) };
        let data = (0..rows).map(|o| self.boundary_gf2(k, o)).collect();
        SparseBitMatrix::new(rows, cols, data)
    }
}

impl CellComplex for QuotientComplex {
    fn top_dim(&self) -> isize {
        self.reps.len() as isize - 1
    }

    fn cell_count(&self, d: usize) -> usize {
        self.reps.get(d).map_or(0, |r| r.len())
    }

    fn boundary_gf2(&self, d: usize, i: usize) -> Vec<u32> {
        if d == 0 {
            return Vec::new();
        }
        self.bd
            .faces(d, self.reps[d][i] as usize)
            .into_iter()
            .map(|f| self.orbit[d - 1][f])
            .collect()
    }
}

/// Whether the class is zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Nontrivial,
    Trivial,
}

/// The cochain representing the `k`-th power and its coboundary test.
#[derive(Clone, Debug, Serialize)]
pub struct SwCertificate {
    pub k: usize,
    pub verdict: Verdict,
    /// Number of multicolored orbits.
    pub support: usize,
    #[serde(skip)]
    pub cocycle: BitVec,
    #[serde(skip)]
    pub witness: Option<BitVec>,
}

impl SwCertificate {
    /// Rechecks a trivial verdict against the quotient.
    pub fn verify(&self, q: &QuotientComplex) -> Result<bool> {
        match (&self.witness, self.verdict) {
            (Some(c), Verdict::Trivial) => Ok(q.coboundary(self.k)?.mul_vec(c)? == self.cocycle),
            (None, Verdict::Nontrivial) => Ok(true),
            _ => Ok(false),
        }
    }
}

/// Indicator of the `k`-orbits whose chain-ordered labels alternate. The
/// cochain is checked to be closed.
pub fn sw_power_cocycle(q: &QuotientComplex, k: usize) -> Result<BitVec> {
    let n = q.cell_count(k);
    let mut z = BitVec::zeros(n);
    for o in 0..n {
        let s = q.representative(k, o);
        if s.windows(2).all(|w| q.is_a(w[0] as usize) != q.is_a(w[1] as usize)) {
            z.set(o, true);
        }
    }
    if q.cell_count(k + 1) > 0 && !q.coboundary(k + 1)?.mul_vec(&z)?.is_zero() {
        return Err(Error::Defect(format!("power {k} cochain is not closed")));
    }
    Ok(z)
}

/// Tests whether the `k`-th power is a coboundary.
pub fn certify(q: &QuotientComplex, k: usize) -> Result<SwCertificate> {
    if k == 0 {
        return Err(Error::Parameter("power must be at least 1".into()));
    }
    let z = sw_power_cocycle(q, k)?;
    let support = z.count_ones();
    let delta = q.coboundary(k)?;
    let witness = solve_gf2(&delta, &z)?;
    if let Some(c) = &witness {
        if delta.mul_vec(c)? != z {
            return Err(Error::Defect(format!("witness for power {k} does not verify")));
        }
    }
    let verdict = if witness.is_some() {
        Verdict::Trivial
    } else {
        Verdict::Nontrivial
    };
    Ok(SwCertificate {
        k,
        verdict,
        support,
        cocycle: z,
        witness,
    })
}

/// Largest `k` with a nonzero `k`-th power, `-1` for the empty complex.
#[derive(Clone, Debug, Serialize)]
pub struct HeightResult {
    #[serde(rename = "height")]
    pub h: i64,
    pub k_max: usize,
    pub free: bool,
    /// Every searched power was nontrivial, so `h` is only a lower bound.
    pub capped: bool,
    pub certificates: Vec<SwCertificate>,
}

/// Height of a free complex. Powers are tested in increasing order and the
/// search stops at the first trivial one. The subdivision is grown one
/// dimension at a time so that only the needed skeleton is built.
pub fn height(x: &ProdComplex, a: &Z2Action, k_max: Option<usize>, bd_budget: usize) -> Result<HeightResult> {
    a.require_free()?;
    let dim = x.dim();
    let k_max = k_max.unwrap_or((dim + 1).max(1) as usize);
    if k_max == 0 {
        return Err(Error::Parameter("k_max must be at least 1".into()));
    }
    let mut res = HeightResult {
        h: -1,
        k_max,
        free: true,
        capped: false,
        certificates: Vec::new(),
    };
    if x.is_empty() {
        return Ok(res);
    }
    res.h = 0;
    let dim = dim as usize;
    let mut q: Option<QuotientComplex> = None;
    for k in 1..=k_max {
        if k > dim {
            res.certificates.push(SwCertificate {
                k,
                verdict: Verdict::Trivial,
                support: 0,
                cocycle: BitVec::zeros(0),
                witness: Some(BitVec::zeros(0)),
            });
            return Ok(res);
        }
        let need = (k + 1).min(dim);
        if q.as_ref().map_or(true, |q| (q.top_dim() as usize) < need) {
            q = Some(quotient_skeleton(x, a, need, bd_budget)?);
        }
        let cert = certify(q.as_ref().expect("quotient built"), k)?;
        let trivial = cert.verdict == Verdict::Trivial;
        res.certificates.push(cert);
        if trivial {
            return Ok(res);
        }
        res.h = k as i64;
    }
    res.capped = true;
    Ok(res)
}

//! Hom and Hom₊ complexes as explicit lists of product cells, plus the
//! simplicial complexes derived from them.

mod simplicial;
mod subdivision;

use std::cmp::Ordering;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::vset::{VertexSet, UNIVERSE};

pub use simplicial::{build_independence, build_neighborhood, SimplicialComplex};
pub use subdivision::{barycentric, barycentric_skeleton, link_of_vertex, FacePoset};

/// Cell budget used when the caller does not supply one.
pub const DEFAULT_CELL_BUDGET: usize = 5_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComplexKind {
    /// Lists are nonempty; `dim = Σ(|η(x)| − 1)`.
    Hom,
    /// Lists may be empty but not all of them; `dim = Σ|η(x)| − 1`.
    HomPlus,
}

impl ComplexKind {
    fn dim_of(self, eta: &[VertexSet]) -> usize {
        let total: usize = eta.iter().map(|s| s.len()).sum();
        match self {
            ComplexKind::Hom => total - eta.len(),
            ComplexKind::HomPlus => total - 1,
        }
    }
}

/// One cell `η`: a vertex set of the target per source vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cell {
    pub eta: Vec<VertexSet>,
}

impl Cell {
    /// Source vertices with a nonempty list.
    pub fn support(&self) -> VertexSet {
        support(&self.eta)
    }
}

/// `supp η`: the source vertices whose list is nonempty.
pub fn support(eta: &[VertexSet]) -> VertexSet {
    debug_assert!(eta.len() <= UNIVERSE);
    VertexSet::from_iter((0..eta.len()).filter(|&x| !eta[x].is_empty()))
}

/// A finite Hom or Hom₊ complex.
///
/// Cell ids are assigned in increasing `(dim, η)` order, so every face of a
/// cell has a smaller id than the cell itself.
#[derive(Clone, Debug)]
pub struct ProdComplex {
    kind: ComplexKind,
    source: Graph,
    target: Graph,
    width: usize,
    etas: Vec<VertexSet>,
    // ids of dimension d are offsets[d]..offsets[d + 1]
    offsets: Vec<usize>,
}

impl ProdComplex {
    fn from_flat(kind: ComplexKind, t: &Graph, g: &Graph, mut flat: Vec<VertexSet>) -> Self {
        let width = t.vertex_count();
        let count = if width == 0 {
            flat.len().min(1)
        } else {
            flat.len() / width
        };
        let mut order: Vec<usize> = (0..count).collect();
        let dims: Vec<usize> = (0..count)
            .map(|i| kind.dim_of(&flat[i * width..(i + 1) * width]))
            .collect();
        order.sort_by(|&a, &b| {
            dims[a]
                .cmp(&dims[b])
                .then_with(|| flat[a * width..(a + 1) * width].cmp(&flat[b * width..(b + 1) * width]))
        });
        let mut etas = Vec::with_capacity(flat.len());
        for &i in &order {
            etas.extend_from_slice(&flat[i * width..(i + 1) * width]);
        }
        flat.clear();
        let top = order.last().map(|&i| dims[i]);
        let mut offsets = vec![0usize];
        if let Some(top) = top {
            let mut pos = 0;
            for d in 0..=top {
                while pos < count && dims[order[pos]] == d {
                    pos += 1;
                }
                offsets.push(pos);
            }
        }
        ProdComplex {
            kind,
            source: t.clone(),
            target: g.clone(),
            width,
            etas,
            offsets,
        }
    }

    /// Builds a complex from an explicit cell list, checking that every cell
    /// satisfies the edge condition and that the list is closed under faces.
    pub fn from_cells(kind: ComplexKind, t: &Graph, g: &Graph, cells: &[Cell]) -> Result<Self> {
        check_target(g)?;
        let nt = t.vertex_count();
        let mut flat = Vec::with_capacity(cells.len() * nt);
        let mut seen = std::collections::BTreeSet::new();
        for c in cells {
            if c.eta.len() != nt {
                return Err(Error::Shape(format!(
                    "cell has {} lists, source has {nt} vertices",
                    c.eta.len()
                )));
            }
            if !is_valid_eta(kind, t, g, &c.eta) {
                return Err(Error::Validation(format!("{:?} is not a cell", c.eta)));
            }
            if seen.insert(c.eta.clone()) {
                flat.extend_from_slice(&c.eta);
            }
        }
        let x = ProdComplex::from_flat(kind, t, g, flat);
        for id in 0..x.len() {
            for (_, face) in x.face_etas(id) {
                if x.lookup(&face).is_none() {
                    return Err(Error::Validation(format!(
                        "face {face:?} of cell {:?} is missing",
                        x.eta(id)
                    )));
                }
            }
        }
        Ok(x)
    }

    pub fn kind(&self) -> ComplexKind {
        self.kind
    }

    pub fn source(&self) -> &Graph {
        &self.source
    }

    pub fn target(&self) -> &Graph {
        &self.target
    }

    /// Total number of cells.
    pub fn len(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Top dimension, `-1` for the empty complex.
    pub fn dim(&self) -> isize {
        self.offsets.len() as isize - 2
    }

    /// Number of cells of dimension `d`.
    pub fn count(&self, d: usize) -> usize {
        if d + 1 < self.offsets.len() {
            self.offsets[d + 1] - self.offsets[d]
        } else {
            0
        }
    }

    /// Cell counts per dimension.
    pub fn f_vector(&self) -> Vec<usize> {
        self.offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    /// Ids of the cells of dimension `d`.
    pub fn ids_of_dim(&self, d: usize) -> std::ops::Range<usize> {
        if d + 1 < self.offsets.len() {
            self.offsets[d]..self.offsets[d + 1]
        } else {
            0..0
        }
    }

    /// First id of dimension `d`; ids within a dimension are contiguous.
    pub fn dim_offset(&self, d: usize) -> usize {
        self.offsets[d.min(self.offsets.len() - 1)]
    }

    pub fn dim_of(&self, id: usize) -> usize {
        self.offsets.partition_point(|&o| o <= id) - 1
    }

    pub fn eta(&self, id: usize) -> &[VertexSet] {
        if self.width == 0 {
            return &[];
        }
        &self.etas[id * self.width..(id + 1) * self.width]
    }

    pub fn cell(&self, id: usize) -> Cell {
        Cell {
            eta: self.eta(id).to_vec(),
        }
    }

    /// Id of the cell with lists `eta`, if stored.
    pub fn lookup(&self, eta: &[VertexSet]) -> Option<usize> {
        if eta.len() != self.width {
            return None;
        }
        if self.kind == ComplexKind::HomPlus && eta.iter().all(|s| s.is_empty()) {
            return None;
        }
        if self.kind == ComplexKind::Hom && eta.iter().any(|s| s.is_empty()) {
            return None;
        }
        let range = self.ids_of_dim(self.kind.dim_of(eta));
        let (mut lo, mut hi) = (range.start, range.end);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.eta(mid).cmp(eta) {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    fn face_etas(&self, id: usize) -> Vec<(usize, Vec<VertexSet>)> {
        let eta = self.eta(id);
        let min_len = match self.kind {
            ComplexKind::Hom => 2,
            ComplexKind::HomPlus => 1,
        };
        if self.kind == ComplexKind::HomPlus && self.dim_of(id) == 0 {
            return Vec::new();
        }
        let mut out = Vec::new();
        for x in 0..eta.len() {
            if eta[x].len() < min_len {
                continue;
            }
            for v in eta[x].iter() {
                let mut face = eta.to_vec();
                face[x] = eta[x].without(v);
                out.push((x, face));
            }
        }
        out
    }

    /// Codimension-one faces of `id`, as ids. Each face is obtained by
    /// deleting one vertex from one list.
    pub fn faces(&self, id: usize) -> Vec<usize> {
        self.face_etas(id)
            .into_iter()
            .map(|(_, f)| self.lookup(&f).expect("complex is closed under faces"))
            .collect()
    }

    /// Ids of the 0-cells.
    pub fn vertices(&self) -> std::ops::Range<usize> {
        self.ids_of_dim(0)
    }

    /// For a Hom complex, the homomorphism encoded by a 0-cell.
    pub fn vertex_map(&self, id: usize) -> Vec<usize> {
        self.eta(id).iter().map(|s| s.first().unwrap_or(usize::MAX)).collect()
    }

    /// Text dump, one cell per line: `dim | S0;S1;...` where each list is
    /// comma separated and `-` marks an empty list.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for id in 0..self.len() {
            let lists: Vec<String> = self
                .eta(id)
                .iter()
                .map(|s| {
                    if s.is_empty() {
                        "-".to_string()
                    } else {
                        s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
                    }
                })
                .collect();
            let _ = writeln!(out, "{} | {}", self.dim_of(id), lists.join(";"));
        }
        out
    }

    /// Cells whose support is all of `V(T)`.
    pub fn full_support_cells(&self) -> Vec<usize> {
        let full = VertexSet::full(self.width);
        (0..self.len()).filter(|&id| support(self.eta(id)) == full).collect()
    }
}

fn check_target(g: &Graph) -> Result<()> {
    if g.vertex_count() > UNIVERSE {
        return Err(Error::Parameter(format!(
            "target graph has {} vertices; at most {UNIVERSE} are supported",
            g.vertex_count()
        )));
    }
    Ok(())
}

/// Common neighbors of every vertex in `s`; all of `V(G)` when `s` is empty.
fn common_nbrs(g: &Graph, s: VertexSet) -> VertexSet {
    s.iter().fold(VertexSet::full(g.vertex_count()), |acc, b| {
        acc.intersection(g.neighbor_set(b))
    })
}

fn is_valid_eta(kind: ComplexKind, t: &Graph, g: &Graph, eta: &[VertexSet]) -> bool {
    let all = VertexSet::full(g.vertex_count());
    if eta.iter().any(|s| !s.is_subset(all)) {
        return false;
    }
    match kind {
        ComplexKind::Hom if eta.iter().any(|s| s.is_empty()) => return false,
        ComplexKind::HomPlus if eta.iter().all(|s| s.is_empty()) => return false,
        _ => {}
    }
    t.edges()
        .all(|(x, y)| eta[x].is_empty() || eta[y].is_empty() || eta[y].is_subset(common_nbrs(g, eta[x])))
}

struct Enumerator<'a> {
    t: &'a Graph,
    g: &'a Graph,
    plus: bool,
    budget: usize,
    looped: VertexSet,
    allowed: Vec<VertexSet>,
    eta: Vec<VertexSet>,
    out: Vec<VertexSet>,
    count: usize,
}

impl Enumerator<'_> {
    fn rec(&mut self, x: usize) -> Result<()> {
        let nt = self.t.vertex_count();
        if x == nt {
            if self.plus && self.eta.iter().all(|s| s.is_empty()) {
                return Ok(());
            }
            self.count += 1;
            if self.count > self.budget {
                return Err(Error::budget("cell enumeration", self.count, self.budget));
            }
            self.out.extend_from_slice(&self.eta);
            return Ok(());
        }
        let dom = self.allowed[x];
        let looped_x = self.t.has_loop(x);
        for s in dom.nonempty_subsets() {
            let cn = common_nbrs(self.g, s);
            if looped_x && !s.is_subset(cn) {
                continue;
            }
            let later: Vec<usize> = self.t.neighbors(x).iter().copied().filter(|&y| y > x).collect();
            let saved: Vec<VertexSet> = later.iter().map(|&y| self.allowed[y]).collect();
            let mut ok = true;
            for &y in &later {
                let a = self.allowed[y].intersection(cn);
                self.allowed[y] = a;
                // a nonempty valid list exists iff a valid singleton does
                let usable = if self.t.has_loop(y) {
                    a.intersection(self.looped)
                } else {
                    a
                };
                if !self.plus && usable.is_empty() {
                    ok = false;
                    break;
                }
            }
            if ok {
                self.eta[x] = s;
                self.rec(x + 1)?;
            }
            for (&y, &a) in later.iter().zip(&saved) {
                self.allowed[y] = a;
            }
        }
        if self.plus {
            self.eta[x] = VertexSet::EMPTY;
            self.rec(x + 1)?;
        }
        Ok(())
    }
}

fn build(kind: ComplexKind, t: &Graph, g: &Graph, budget: usize) -> Result<ProdComplex> {
    check_target(g)?;
    if budget == 0 {
        return Err(Error::Parameter("budget must be at least 1".into()));
    }
    let nt = t.vertex_count();
    let looped = VertexSet::from_iter((0..g.vertex_count()).filter(|&v| g.has_loop(v)));
    let mut e = Enumerator {
        t,
        g,
        plus: kind == ComplexKind::HomPlus,
        budget,
        looped,
        allowed: vec![VertexSet::full(g.vertex_count()); nt],
        eta: vec![VertexSet::EMPTY; nt],
        out: Vec::new(),
        count: 0,
    };
    e.rec(0)?;
    if nt == 0 && e.count == 1 {
        // the empty map: a single point
        return Ok(ProdComplex {
            kind,
            source: t.clone(),
            target: g.clone(),
            width: 0,
            etas: Vec::new(),
            offsets: vec![0, 1],
        });
    }
    Ok(ProdComplex::from_flat(kind, t, g, e.out))
}

/// `Hom(T, G)`: all `η` with nonempty lists and `η(x) × η(y) ⊆ E(G)` for
/// every edge `xy` of `T`. Fails with a budget error past `budget` cells.
pub fn build_hom(t: &Graph, g: &Graph, budget: usize) -> Result<ProdComplex> {
    build(ComplexKind::Hom, t, g, budget)
}

/// `Hom₊(T, G)`: as [`build_hom`] but lists may be empty (not all at once),
/// and the edge condition only applies where both lists are nonempty.
pub fn build_hom_plus(t: &Graph, g: &Graph, budget: usize) -> Result<ProdComplex> {
    build(ComplexKind::HomPlus, t, g, budget)
}

/// Checks that `X` is determined by its 1-skeleton: every product of
/// simplices whose vertices and edges all lie in `X` is itself a cell of `X`.
pub fn skeleton_determination_check(x: &ProdComplex) -> bool {
    match x.kind {
        ComplexKind::Hom => hom_skeleton_check(x),
        ComplexKind::HomPlus => plus_skeleton_check(x),
    }
}

fn hom_skeleton_check(x: &ProdComplex) -> bool {
    let w = x.width;
    let ng = x.target.vertex_count();
    for v in x.vertices() {
        let phi = x.eta(v).to_vec();
        // admissible values per coordinate, not below phi(x)
        let mut choices: Vec<Vec<usize>> = Vec::with_capacity(w);
        for i in 0..w {
            let base = phi[i].first().unwrap();
            let mut opts = Vec::new();
            for a in base + 1..ng {
                let mut m = phi.clone();
                m[i] = VertexSet::singleton(a);
                if x.lookup(&m).is_some() {
                    opts.push(a);
                }
            }
            choices.push(opts);
        }
        // every candidate box with minimal corner phi
        let mut idx = vec![0u64; w];
        loop {
            let eta: Vec<VertexSet> = (0..w)
                .map(|i| {
                    let mut s = phi[i];
                    for (j, &a) in choices[i].iter().enumerate() {
                        if idx[i] >> j & 1 == 1 {
                            s.insert(a);
                        }
                    }
                    s
                })
                .collect();
            if x.kind.dim_of(&eta) >= 2 && box_skeleton_present(x, &eta) && x.lookup(&eta).is_none() {
                return false;
            }
            // advance the mixed-radix counter
            let mut i = 0;
            loop {
                if i == w {
                    break;
                }
                idx[i] += 1;
                if idx[i] < 1u64 << choices[i].len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
            if i == w {
                break;
            }
        }
    }
    true
}

/// All vertices and edges of the box `eta` are cells of `x`.
fn box_skeleton_present(x: &ProdComplex, eta: &[VertexSet]) -> bool {
    let w = eta.len();
    let lists: Vec<Vec<usize>> = eta.iter().map(|s| s.to_vec()).collect();
    let mut pick = vec![0usize; w];
    loop {
        let corner: Vec<VertexSet> = (0..w).map(|i| VertexSet::singleton(lists[i][pick[i]])).collect();
        if x.lookup(&corner).is_none() {
            return false;
        }
        for i in 0..w {
            for &b in &lists[i][pick[i] + 1..] {
                let mut edge = corner.clone();
                edge[i].insert(b);
                if x.lookup(&edge).is_none() {
                    return false;
                }
            }
        }
        let mut i = 0;
        while i < w {
            pick[i] += 1;
            if pick[i] < lists[i].len() {
                break;
            }
            pick[i] = 0;
            i += 1;
        }
        if i == w {
            return true;
        }
    }
}

fn plus_skeleton_check(x: &ProdComplex) -> bool {
    // vertices are single entries (position, value)
    let verts: Vec<(usize, usize)> = x
        .vertices()
        .map(|id| {
            let eta = x.eta(id);
            let p = (0..eta.len()).find(|&i| !eta[i].is_empty()).unwrap();
            (p, eta[p].first().unwrap())
        })
        .collect();
    let n = verts.len();
    let as_eta = |set: &[usize]| {
        let mut eta = vec![VertexSet::EMPTY; x.width];
        for &i in set {
            eta[verts[i].0].insert(verts[i].1);
        }
        eta
    };
    let adj: Vec<Vec<bool>> = (0..n)
        .map(|i| (0..n).map(|j| i != j && x.lookup(&as_eta(&[i, j])).is_some()).collect())
        .collect();
    fn rec(
        x: &ProdComplex,
        adj: &[Vec<bool>],
        clique: &mut Vec<usize>,
        cands: Vec<usize>,
        as_eta: &dyn Fn(&[usize]) -> Vec<VertexSet>,
    ) -> bool {
        if clique.len() >= 3 && x.lookup(&as_eta(clique)).is_none() {
            return false;
        }
        for (k, &c) in cands.iter().enumerate() {
            let next: Vec<usize> = cands[k + 1..].iter().copied().filter(|&d| adj[c][d]).collect();
            clique.push(c);
            let ok = rec(x, adj, clique, next, as_eta);
            clique.pop();
            if !ok {
                return false;
            }
        }
        true
    }
    rec(x, &adj, &mut Vec::new(), (0..n).collect(), &as_eta)
}

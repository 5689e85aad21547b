use std::fmt;

use crate::error::{Error, Result};

/// A dense vector over GF(2), packed 64 entries per word.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = BitVec::zeros(len);
        for i in 0..len {
            v.set(i, true);
        }
        v
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = BitVec::zeros(len);
        for i in ones {
            v.flip(i);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        BitVec::from_indices(bits.len(), (0..bits.len()).filter(|&i| bits[i]))
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % 64);
        if value {
            self.words[i / 64] |= mask;
        } else {
            self.words[i / 64] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] ^= 1u64 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.first_one_from(0)
    }

    fn first_one_from(&self, start: usize) -> Option<usize> {
        let mut w = start / 64;
        if w >= self.words.len() {
            return None;
        }
        let mut word = self.words[w] & (u64::MAX << (start % 64));
        loop {
            if word != 0 {
                return Some(w * 64 + word.trailing_zeros() as usize);
            }
            w += 1;
            if w == self.words.len() {
                return None;
            }
            word = self.words[w];
        }
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(w, &word)| {
            let mut bits = word;
            std::iter::from_fn(move || {
                if bits == 0 {
                    return None;
                }
                let b = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(w * 64 + b)
            })
        })
    }

    /// Inner product over GF(2).
    pub fn dot(&self, other: &BitVec) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect();
        write!(f, "BitVec({s})")
    }
}

/// A sparse matrix over GF(2): each row is a strictly increasing list of
/// column indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseBitMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<u32>>,
}

/// Sorts and cancels repeated entries in pairs.
fn normalize(row: &mut Vec<u32>) {
    row.sort_unstable();
    let mut out = Vec::with_capacity(row.len());
    for &c in row.iter() {
        if out.last() == Some(&c) {
            out.pop();
        } else {
            out.push(c);
        }
    }
    *row = out;
}

/// Symmetric difference of two sorted lists.
pub fn xor_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl SparseBitMatrix {
    /// Builds a matrix from row entry lists. Entries may come in any order;
    /// an index listed twice cancels.
    pub fn new(rows: usize, cols: usize, mut data: Vec<Vec<u32>>) -> Result<Self> {
        if data.len() != rows {
            return Err(Error::Shape(format!("{} row lists for {rows} rows", data.len())));
        }
        for row in data.iter_mut() {
            if let Some(&c) = row.iter().find(|&&c| c as usize >= cols) {
                return Err(Error::Shape(format!("column {c} out of range for {cols} columns")));
            }
            normalize(row);
        }
        Ok(SparseBitMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseBitMatrix {
            rows,
            cols,
            data: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        SparseBitMatrix {
            rows: n,
            cols: n,
            data: (0..n as u32).map(|i| vec![i]).collect(),
        }
    }

    pub fn from_dense(rows: &[BitVec], cols: usize) -> Self {
        SparseBitMatrix {
            rows: rows.len(),
            cols,
            data: rows.iter().map(|r| r.iter_ones().map(|c| c as u32).collect()).collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.data[i]
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i].binary_search(&(j as u32)).is_ok()
    }

    pub fn transpose(&self) -> SparseBitMatrix {
        let mut data = vec![Vec::new(); self.cols];
        for (i, row) in self.data.iter().enumerate() {
            for &c in row {
                data[c as usize].push(i as u32);
            }
        }
        SparseBitMatrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// `M · x`.
    pub fn mul_vec(&self, x: &BitVec) -> Result<BitVec> {
        if x.len() != self.cols {
            return Err(Error::Shape(format!(
                "vector of length {} for {} columns",
                x.len(),
                self.cols
            )));
        }
        let mut out = BitVec::zeros(self.rows);
        for (i, row) in self.data.iter().enumerate() {
            if row.iter().filter(|&&c| x.get(c as usize)).count() % 2 == 1 {
                out.set(i, true);
            }
        }
        Ok(out)
    }

    /// `A · B`, over GF(2).
    pub fn mul(&self, other: &SparseBitMatrix) -> Result<SparseBitMatrix> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut acc: Vec<u32> = row
                    .iter()
                    .flat_map(|&k| other.data[k as usize].iter().copied())
                    .collect();
                normalize(&mut acc);
                acc
            })
            .collect();
        Ok(SparseBitMatrix {
            rows: self.rows,
            cols: other.cols,
            data,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    pub fn to_dense(&self) -> Vec<BitVec> {
        self.data
            .iter()
            .map(|r| BitVec::from_indices(self.cols, r.iter().map(|&c| c as usize)))
            .collect()
    }

    /// Column relabeling that puts the sparsest columns first. Returns
    /// `key[col]` and its inverse.
    fn column_order(&self) -> (Vec<u32>, Vec<u32>) {
        let mut counts = vec![0u32; self.cols];
        for row in &self.data {
            for &c in row {
                counts[c as usize] += 1;
            }
        }
        let mut order: Vec<u32> = (0..self.cols as u32).collect();
        order.sort_by_key(|&c| (counts[c as usize], c));
        let mut key = vec![0u32; self.cols];
        for (k, &c) in order.iter().enumerate() {
            key[c as usize] = k as u32;
        }
        (key, order)
    }
}

/// Echelon form built row by row; `pivot[k]` holds the stored row whose
/// leading key is `k`.
struct SparseEchelon {
    pivot: Vec<u32>,
    rows: Vec<(Vec<u32>, bool)>,
}

const NONE: u32 = u32::MAX;

impl SparseEchelon {
    fn new(keys: usize) -> Self {
        SparseEchelon {
            pivot: vec![NONE; keys],
            rows: Vec::new(),
        }
    }

    /// Reduces `(row, rhs)`; stores it if it stays nonzero. Returns the
    /// residual right-hand side when the row reduces to zero.
    fn insert(&mut self, mut row: Vec<u32>, mut rhs: bool) -> Option<bool> {
        while let Some(&lead) = row.first() {
            let p = self.pivot[lead as usize];
            if p == NONE {
                self.pivot[lead as usize] = self.rows.len() as u32;
                self.rows.push((row, rhs));
                return None;
            }
            let (prow, prhs) = &self.rows[p as usize];
            row = xor_sorted(&row, prow);
            rhs ^= prhs;
        }
        Some(rhs)
    }
}

/// Rank over GF(2). Columns are eliminated sparsest first to limit fill.
pub fn rank_gf2(m: &SparseBitMatrix) -> usize {
    let (key, _) = m.column_order();
    let mut ech = SparseEchelon::new(m.cols);
    // short rows first keeps pivot rows sparse
    let mut order: Vec<usize> = (0..m.rows).collect();
    order.sort_by_key(|&i| m.data[i].len());
    for i in order {
        let mut row: Vec<u32> = m.data[i].iter().map(|&c| key[c as usize]).collect();
        row.sort_unstable();
        ech.insert(row, false);
    }
    ech.rows.len()
}

/// Some `x` with `M x = b`, or `None` when the system is inconsistent.
pub fn solve_gf2(m: &SparseBitMatrix, b: &BitVec) -> Result<Option<BitVec>> {
    if b.len() != m.rows {
        return Err(Error::Shape(format!(
            "right-hand side has length {}, matrix has {} rows",
            b.len(),
            m.rows
        )));
    }
    let (key, order) = m.column_order();
    let mut ech = SparseEchelon::new(m.cols);
    let mut rows: Vec<usize> = (0..m.rows).collect();
    rows.sort_by_key(|&i| m.data[i].len());
    for i in rows {
        let mut row: Vec<u32> = m.data[i].iter().map(|&c| key[c as usize]).collect();
        row.sort_unstable();
        if ech.insert(row, b.get(i)) == Some(true) {
            return Ok(None);
        }
    }
    // back substitution, free variables zero
    let mut xk = BitVec::zeros(m.cols);
    let mut pivots: Vec<(u32, u32)> = ech
        .pivot
        .iter()
        .enumerate()
        .filter(|&(_, &p)| p != NONE)
        .map(|(k, &p)| (k as u32, p))
        .collect();
    pivots.sort_unstable_by(|a, b| b.0.cmp(&a.0));
    for (lead, p) in pivots {
        let (row, rhs) = &ech.rows[p as usize];
        let mut v = *rhs;
        for &c in &row[1..] {
            v ^= xk.get(c as usize);
        }
        xk.set(lead as usize, v);
    }
    let mut x = BitVec::zeros(m.cols);
    for k in xk.iter_ones() {
        x.set(order[k] as usize, true);
    }
    Ok(Some(x))
}

/// Basis of `{x : M x = 0}`.
pub fn kernel_basis(m: &SparseBitMatrix) -> Vec<BitVec> {
    let n = m.cols;
    let mut rows = m.to_dense();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else {
            continue;
        };
        rows.swap(r, p);
        let pr = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && row.get(c) {
                row.xor_assign(&pr);
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    let is_pivot = {
        let mut v = vec![false; n];
        for &c in &pivot_cols {
            v[c] = true;
        }
        v
    };
    (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = BitVec::zeros(n);
            v.set(f, true);
            for (i, &c) in pivot_cols.iter().enumerate() {
                if rows[i].get(f) {
                    v.set(c, true);
                }
            }
            v
        })
        .collect()
}

/// Dense echelon basis whose rows carry tags recording how each was
/// combined, so reducing a vector also yields its coordinates.
#[derive(Clone, Debug)]
pub struct TaggedEchelon {
    width: usize,
    tag_width: usize,
    pivot: Vec<Option<usize>>,
    rows: Vec<(BitVec, BitVec)>,
}

impl TaggedEchelon {
    pub fn new(width: usize, tag_width: usize) -> Self {
        TaggedEchelon {
            width,
            tag_width,
            pivot: vec![None; width],
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn tag_width(&self) -> usize {
        self.tag_width
    }

    /// Reduces `v` and returns the residual and the accumulated tag.
    pub fn reduce(&self, v: &BitVec) -> (BitVec, BitVec) {
        assert_eq!(v.len(), self.width);
        let mut v = v.clone();
        let mut tag = BitVec::zeros(self.tag_width);
        let mut from = 0;
        while let Some(lead) = v.first_one_from(from) {
            match self.pivot[lead] {
                Some(p) => {
                    v.xor_assign(&self.rows[p].0);
                    tag.xor_assign(&self.rows[p].1);
                }
                None => from = lead + 1,
            }
        }
        (v, tag)
    }

    /// Adds `v` with tag `tag`; returns whether it was independent.
    pub fn insert(&mut self, v: &BitVec, tag: &BitVec) -> bool {
        let (r, t) = self.reduce(v);
        let Some(lead) = r.first_one() else {
            return false;
        };
        let mut tag = tag.clone();
        tag.xor_assign(&t);
        self.pivot[lead] = Some(self.rows.len());
        self.rows.push((r, tag));
        true
    }
}

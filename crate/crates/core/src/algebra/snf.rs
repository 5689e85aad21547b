use std::cmp::Reverse;
use std::collections::BinaryHeap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{CheckedMul, CheckedSub, One, Signed, Zero};

use crate::error::{Error, Result};

/// A sparse integer matrix with arbitrary-precision entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntSparseMatrix {
    rows: usize,
    cols: usize,
    // per row, sorted by column, no zeros
    data: Vec<Vec<(u32, BigInt)>>,
}

impl IntSparseMatrix {
    /// Builds a matrix from `(row, col, value)` triples. Duplicate positions
    /// and out-of-range indices are rejected; zero values are dropped.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        entries: impl IntoIterator<Item = (usize, usize, BigInt)>,
    ) -> Result<Self> {
        let mut data: Vec<Vec<(u32, BigInt)>> = vec![Vec::new(); rows];
        for (r, c, v) in entries {
            if r >= rows || c >= cols {
                return Err(Error::Shape(format!("entry ({r}, {c}) outside {rows}x{cols}")));
            }
            if !v.is_zero() {
                data[r].push((c as u32, v));
            }
        }
        for row in data.iter_mut() {
            row.sort_by_key(|e| e.0);
            if row.windows(2).any(|w| w[0].0 == w[1].0) {
                return Err(Error::Shape("duplicate entry position".into()));
            }
        }
        Ok(IntSparseMatrix { rows, cols, data })
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let entries = rows
            .iter()
            .enumerate()
            .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, &v)| (i, j, BigInt::from(v))));
        IntSparseMatrix::from_triplets(rows.len(), cols, entries).expect("rectangular input")
    }

    /// Rows given as sparse `(col, value)` lists with small values.
    pub fn from_rows_i64(rows: usize, cols: usize, data: Vec<Vec<(u32, i64)>>) -> Result<Self> {
        let entries = data
            .into_iter()
            .enumerate()
            .flat_map(|(i, r)| r.into_iter().map(move |(c, v)| (i, c as usize, BigInt::from(v))));
        IntSparseMatrix::from_triplets(rows, cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn get(&self, r: usize, c: usize) -> BigInt {
        self.data[r]
            .binary_search_by_key(&(c as u32), |e| e.0)
            .map_or_else(|_| BigInt::zero(), |i| self.data[r][i].1.clone())
    }
}

/// Entry type for the sparse elimination pass.
trait Scalar: Clone + Zero + One + Signed + CheckedMul + CheckedSub + Integer + Into<BigInt> {}
impl Scalar for i64 {}
impl Scalar for BigInt {}

/// Nonzero invariant factors `d₁ | d₂ | …`, all positive. The rank is their
/// count.
pub fn smith_normal_form(m: &IntSparseMatrix) -> Vec<BigInt> {
    let small: Option<Vec<Vec<(u32, i64)>>> = m
        .data
        .iter()
        .map(|r| r.iter().map(|(c, v)| i64::try_from(v).ok().map(|v| (*c, v))).collect())
        .collect();
    let reduced = small
        .and_then(|rows| eliminate_units(rows, m.cols))
        .or_else(|| eliminate_units(m.data.clone(), m.cols))
        .expect("arbitrary precision cannot overflow");
    let (units, rest) = reduced;
    // units already divide everything, so only the remainder needs the chain pass
    let mut tail = dense_snf(rest);
    normalize_chain(&mut tail);
    let mut factors: Vec<BigInt> = vec![BigInt::one(); units];
    factors.extend(tail);
    factors
}

type Reduced = (usize, Vec<Vec<BigInt>>);

/// Removes unit pivots greedily (short rows, then sparse columns). Returns
/// the number of unit factors and the dense remainder, or `None` on
/// overflow.
fn eliminate_units<T: Scalar>(mut rows: Vec<Vec<(u32, T)>>, cols: usize) -> Option<Reduced> {
    let n = rows.len();
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); cols];
    for (i, r) in rows.iter().enumerate() {
        for (c, _) in r {
            col_rows[*c as usize].push(i as u32);
        }
    }
    let mut active = vec![true; n];
    let mut heap: BinaryHeap<Reverse<(usize, u32)>> = (0..n).map(|i| Reverse((rows[i].len(), i as u32))).collect();
    let mut units = 0usize;
    while let Some(Reverse((len, i))) = heap.pop() {
        let i = i as usize;
        if !active[i] || rows[i].len() != len || len == 0 {
            continue;
        }
        // unit entry in the sparsest column
        let pick = rows[i]
            .iter()
            .filter(|(_, v)| v.abs().is_one())
            .min_by_key(|(c, _)| col_rows[*c as usize].len())
            .map(|(c, v)| (*c, v.clone()));
        let Some((pc, pv)) = pick else {
            continue;
        };
        active[i] = false;
        units += 1;
        let pivot_row = std::mem::take(&mut rows[i]);
        let mut others = std::mem::take(&mut col_rows[pc as usize]);
        others.sort_unstable();
        others.dedup();
        for r in others {
            let r = r as usize;
            if !active[r] {
                continue;
            }
            let Ok(pos) = rows[r].binary_search_by_key(&pc, |e| e.0) else {
                continue;
            };
            // row_r -= (a_r / p) * pivot_row, exact since p = ±1
            let factor = rows[r][pos].1.checked_mul(&pv)?;
            let mut merged: Vec<(u32, T)> = Vec::with_capacity(rows[r].len() + pivot_row.len());
            let (a, b) = (&rows[r], &pivot_row);
            let (mut x, mut y) = (0, 0);
            while x < a.len() || y < b.len() {
                let ca = a.get(x).map(|e| e.0).unwrap_or(u32::MAX);
                let cb = b.get(y).map(|e| e.0).unwrap_or(u32::MAX);
                if ca < cb {
                    merged.push(a[x].clone());
                    x += 1;
                } else {
                    let prod = factor.checked_mul(&b[y].1)?;
                    let val = if ca == cb {
                        let v = a[x].1.checked_sub(&prod)?;
                        x += 1;
                        v
                    } else {
                        col_rows[cb as usize].push(r as u32);
                        T::zero().checked_sub(&prod)?
                    };
                    y += 1;
                    if !val.is_zero() {
                        merged.push((cb, val));
                    }
                }
            }
            rows[r] = merged;
            heap.push(Reverse((rows[r].len(), r as u32)));
        }
    }
    // dense remainder over the columns still in use
    let live: Vec<usize> = (0..n).filter(|&i| active[i] && !rows[i].is_empty()).collect();
    let mut used: Vec<u32> = live.iter().flat_map(|&i| rows[i].iter().map(|e| e.0)).collect();
    used.sort_unstable();
    used.dedup();
    let rest = live
        .iter()
        .map(|&i| {
            let mut dense = vec![BigInt::zero(); used.len()];
            for (c, v) in &rows[i] {
                let j = used.binary_search(c).unwrap();
                dense[j] = v.clone().into();
            }
            dense
        })
        .collect();
    Some((units, rest))
}

/// Textbook Smith reduction of a dense matrix; returns the nonzero diagonal.
fn dense_snf(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let m = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let mut diag = Vec::new();
    for t in 0..m.min(n) {
        let Some((pi, pj)) = min_entry(&a, t..m, t..n) else {
            break;
        };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t].clone();
            let mut clean = true;
            for i in t + 1..m {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&p);
                for j in t..n {
                    let d = &q * &a[t][j];
                    a[i][j] -= d;
                }
                clean &= a[i][t].is_zero();
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&p);
                for row in a.iter_mut().skip(t) {
                    let d = &q * &row[t];
                    row[j] -= d;
                }
                clean &= a[t][j].is_zero();
            }
            if !clean {
                // a smaller remainder appeared in row or column t
                let (bi, bj) = min_entry_cross(&a, t);
                a.swap(t, bi);
                for row in a.iter_mut() {
                    row.swap(t, bj);
                }
                continue;
            }
            // enforce divisibility of the remaining block
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !a[i][j].is_multiple_of(&p)));
            match bad {
                Some(i) => {
                    for j in t..n {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
    }
    diag
}

fn min_entry(a: &[Vec<BigInt>], rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in rows {
        for j in cols.clone() {
            if a[i][j].is_zero() {
                continue;
            }
            if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                best = Some((i, j));
            }
        }
    }
    best
}

/// Smallest nonzero entry in row `t` or column `t`.
fn min_entry_cross(a: &[Vec<BigInt>], t: usize) -> (usize, usize) {
    let m = a.len();
    let n = a[0].len();
    let cells = (t..m).map(|i| (i, t)).chain((t + 1..n).map(|j| (t, j)));
    cells
        .filter(|&(i, j)| !a[i][j].is_zero())
        .min_by(|&(i, j), &(k, l)| a[i][j].abs().cmp(&a[k][l].abs()))
        .expect("pivot is nonzero")
}

/// Rewrites a diagonal into a divisibility chain via `(a, b) ↦ (gcd, lcm)`.
fn normalize_chain(d: &mut [BigInt]) {
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = d[i].lcm(&d[j]);
            d[i] = g;
            d[j] = l;
        }
    }
}

//! Exact integer rank and invariant factors.
//!
//! Sparse elimination on unit (`±1`) pivots first; each such step splits
//! off a `1` on the Smith diagonal. Whatever is left has no unit entry and
//! goes through a dense Smith normal form over arbitrary-precision integers.
//! The sparse phase runs on `i64` with checked arithmetic and restarts on
//! `BigInt` if anything would overflow.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::complex::{facet_rows, FlagComplex};
use crate::error::{Error, Result};

/// Sparse integer matrix; each column is a row-sorted list of nonzero entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerMatrix {
    n_rows: usize,
    columns: Vec<Vec<(u32, i64)>>,
}

impl IntegerMatrix {
    pub fn new(n_rows: usize, columns: Vec<Vec<(u32, i64)>>) -> Result<Self> {
        for (j, col) in columns.iter().enumerate() {
            if col.windows(2).any(|w| w[0].0 >= w[1].0) {
                return Err(Error::invalid(format!("column {j} rows not strictly ascending")));
            }
            if col.iter().any(|&(r, v)| r as usize >= n_rows || v == 0) {
                return Err(Error::invalid(format!("column {j} has a bad entry")));
            }
        }
        Ok(IntegerMatrix { n_rows, columns })
    }

    /// Builds from a dense row-major array, dropping zeros.
    pub fn from_dense(rows: &[Vec<i64>]) -> Result<Self> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != n_cols) {
            return Err(Error::invalid("ragged dense matrix"));
        }
        let columns = (0..n_cols)
            .map(|j| {
                (0..n_rows)
                    .filter(|&i| rows[i][j] != 0)
                    .map(|i| (i as u32, rows[i][j]))
                    .collect()
            })
            .collect();
        Ok(IntegerMatrix { n_rows, columns })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.columns.len()
    }

    pub fn column(&self, j: usize) -> &[(u32, i64)] {
        &self.columns[j]
    }
}

/// Signed boundary `∂_d [v_0 … v_d] = Σ (-1)^i [v_0 … v̂_i … v_d]`.
pub fn signed_boundary(complex: &FlagComplex, d: usize) -> Result<IntegerMatrix> {
    let (n_rows, cols) = facet_rows(complex, d)?;
    // facet_rows lists the facet dropping vertex i = d, d-1, ..., 0
    let columns = cols
        .into_iter()
        .map(|rows| {
            rows.into_iter()
                .enumerate()
                .map(|(pos, r)| {
                    let i = d - pos;
                    (r, if i % 2 == 0 { 1 } else { -1 })
                })
                .collect()
        })
        .collect();
    Ok(IntegerMatrix { n_rows, columns })
}

/// Rank plus the nonzero Smith invariant factors `d_1 | d_2 | …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithSummary {
    pub rank: usize,
    /// Invariant factors greater than one, ascending.
    pub torsion: Vec<BigUint>,
}

trait Entry: Clone {
    fn nil(&self) -> bool;
    fn unit(&self) -> bool;
    /// `self - f * b`, `None` on overflow.
    fn sub_mul(&self, f: &Self, b: &Self) -> Option<Self>;
    /// `-(f * b)`, `None` on overflow.
    fn neg_mul(f: &Self, b: &Self) -> Option<Self>;
    fn times(&self, b: &Self) -> Option<Self>;
    fn from_i64(v: i64) -> Self;
    fn to_big(&self) -> BigInt;
}

impl Entry for i64 {
    fn nil(&self) -> bool {
        *self == 0
    }
    fn unit(&self) -> bool {
        *self == 1 || *self == -1
    }
    fn sub_mul(&self, f: &Self, b: &Self) -> Option<Self> {
        self.checked_sub(f.checked_mul(*b)?)
    }
    fn neg_mul(f: &Self, b: &Self) -> Option<Self> {
        f.checked_mul(*b)?.checked_neg()
    }
    fn times(&self, b: &Self) -> Option<Self> {
        self.checked_mul(*b)
    }
    fn from_i64(v: i64) -> Self {
        v
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl Entry for BigInt {
    fn nil(&self) -> bool {
        Zero::is_zero(self)
    }
    fn unit(&self) -> bool {
        self.magnitude().is_one()
    }
    fn sub_mul(&self, f: &Self, b: &Self) -> Option<Self> {
        Some(self - f * b)
    }
    fn neg_mul(f: &Self, b: &Self) -> Option<Self> {
        Some(-(f * b))
    }
    fn times(&self, b: &Self) -> Option<Self> {
        Some(self * b)
    }
    fn from_i64(v: i64) -> Self {
        BigInt::from(v)
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

type Column<T> = Vec<(u32, T)>;

fn entry_at<T>(col: &Column<T>, row: u32) -> Option<&T> {
    col.binary_search_by_key(&row, |e| e.0).ok().map(|i| &col[i].1)
}

/// `target - f * pivot`, merged on rows. Rows newly introduced into
/// `target` are appended to `fresh`.
fn axpy<T: Entry>(
    target: &Column<T>,
    f: &T,
    pivot: &Column<T>,
    fresh: &mut Vec<u32>,
) -> Option<Column<T>> {
    let mut out = Vec::with_capacity(target.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < target.len() || j < pivot.len() {
        let ti = target.get(i).map(|e| e.0);
        let pj = pivot.get(j).map(|e| e.0);
        match (ti, pj) {
            (Some(a), Some(b)) if a == b => {
                let v = target[i].1.sub_mul(f, &pivot[j].1)?;
                if !v.nil() {
                    out.push((a, v));
                }
                i += 1;
                j += 1;
            }
            (Some(a), Some(b)) if a < b => {
                out.push(target[i].clone());
                i += 1;
            }
            (Some(_), None) => {
                out.push(target[i].clone());
                i += 1;
            }
            (_, Some(b)) => {
                out.push((b, T::neg_mul(f, &pivot[j].1)?));
                fresh.push(b);
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    Some(out)
}

/// Eliminates unit pivots until none remain. Returns the number of pivots
/// and the remaining nonzero columns, or `None` on overflow.
fn eliminate_units<T: Entry>(n_rows: usize, mut cols: Vec<Column<T>>) -> Option<(usize, Vec<Column<T>>)> {
    let mut row_index: Vec<Vec<u32>> = vec![Vec::new(); n_rows];
    for (j, col) in cols.iter().enumerate() {
        for &(r, _) in col {
            row_index[r as usize].push(j as u32);
        }
    }
    let mut alive = vec![true; cols.len()];
    let mut rank = 0;
    let mut fresh = Vec::new();
    loop {
        let mut order: Vec<usize> = (0..cols.len())
            .filter(|&j| alive[j] && !cols[j].is_empty())
            .collect();
        order.sort_by_key(|&j| (cols[j].len(), j));
        let mut progressed = false;
        for j in order {
            if !alive[j] || cols[j].is_empty() {
                continue;
            }
            let Some(&(r, ref v)) = cols[j]
                .iter()
                .filter(|e| e.1.unit())
                .min_by_key(|e| (row_index[e.0 as usize].len(), e.0))
            else {
                continue;
            };
            let v = v.clone();
            let pivot = std::mem::take(&mut cols[j]);
            alive[j] = false;
            let users = std::mem::take(&mut row_index[r as usize]);
            for c in users {
                let c = c as usize;
                if c == j || !alive[c] {
                    continue;
                }
                let Some(a) = entry_at(&cols[c], r) else {
                    continue;
                };
                // v = ±1 is its own inverse
                let f = a.times(&v)?;
                fresh.clear();
                let next = axpy(&cols[c], &f, &pivot, &mut fresh)?;
                cols[c] = next;
                for &row in &fresh {
                    if row != r {
                        row_index[row as usize].push(c as u32);
                    }
                }
            }
            rank += 1;
            progressed = true;
        }
        if !progressed {
            break;
        }
    }
    let rest = cols
        .into_iter()
        .zip(alive)
        .filter(|(c, a)| *a && !c.is_empty())
        .map(|(c, _)| c)
        .collect();
    Some((rank, rest))
}

/// Nonzero diagonal of the Smith normal form of a dense matrix, as
/// nonnegative values with `d_i | d_{i+1}`.
pub fn smith_diagonal(mut a: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut diag = Vec::new();
    let mut t = 0;
    while t < m.min(n) {
        // pivot: smallest nonzero magnitude in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..m {
            for j in t..n {
                if !a[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| a[i][j].magnitude() < a[bi][bj].magnitude())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        a.swap(t, pi);
        for row in a.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = a[t][t].clone();
            let mut dirty = None;
            for i in t + 1..m {
                if !a[i][t].is_zero() {
                    let q = a[i][t].div_floor(&p);
                    if !q.is_zero() {
                        for j in t..n {
                            let sub = &q * &a[t][j];
                            a[i][j] -= sub;
                        }
                    }
                    if !a[i][t].is_zero() {
                        dirty = Some((i, t));
                    }
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() {
                    let q = a[t][j].div_floor(&p);
                    if !q.is_zero() {
                        for i in t..m {
                            let sub = &q * &a[i][t];
                            a[i][j] -= sub;
                        }
                    }
                    if !a[t][j].is_zero() {
                        dirty = Some((t, j));
                    }
                }
            }
            if let Some((i, j)) = dirty {
                // a remainder smaller than the pivot became the new pivot
                if i != t {
                    a.swap(t, i);
                } else {
                    for row in a.iter_mut() {
                        row.swap(t, j);
                    }
                }
                continue;
            }
            // row and column cleared; enforce divisibility of the block
            let bad = (t + 1..m)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !(&a[i][j] % &p).is_zero());
            match bad {
                Some((i, _)) => {
                    for j in t..n {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        diag.push(a[t][t].abs());
        t += 1;
    }
    diag
}

/// Rank and torsion of an integer matrix.
pub fn smith_summary(matrix: &IntegerMatrix) -> SmithSummary {
    let cols: Vec<Column<i64>> = matrix.columns.clone();
    let (rank, rest) = match eliminate_units::<i64>(matrix.n_rows, cols) {
        Some((rank, rest)) => (
            rank,
            rest.into_iter()
                .map(|c| c.into_iter().map(|(r, v)| (r, v.to_big())).collect())
                .collect(),
        ),
        None => {
            let big: Vec<Column<BigInt>> = matrix
                .columns
                .iter()
                .map(|c| c.iter().map(|&(r, v)| (r, BigInt::from_i64(v))).collect())
                .collect();
            eliminate_units::<BigInt>(matrix.n_rows, big).expect("BigInt never overflows")
        }
    };
    let rest: Vec<Column<BigInt>> = rest;
    let mut rows: Vec<u32> = rest.iter().flat_map(|c| c.iter().map(|e| e.0)).collect();
    rows.sort_unstable();
    rows.dedup();
    let mut dense = vec![vec![BigInt::zero(); rest.len()]; rows.len()];
    for (j, col) in rest.iter().enumerate() {
        for (r, v) in col {
            let i = rows.binary_search(r).expect("row collected above");
            dense[i][j] = v.clone();
        }
    }
    let diag = smith_diagonal(dense);
    let torsion = diag
        .iter()
        .filter(|d| !d.magnitude().is_one())
        .map(|d| d.magnitude().clone())
        .collect();
    SmithSummary {
        rank: rank + diag.len(),
        torsion,
    }
}

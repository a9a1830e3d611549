//! Column reduction over GF(2).

use crate::complex::SparseBitMatrix;

const NO_PIVOT: u32 = u32::MAX;

/// Result of reducing one boundary matrix.
#[derive(Clone, Debug, Default)]
pub struct Reduction {
    pub rank: usize,
    /// Column indices whose reduced column is nonzero; their lows are in
    /// `pivot_rows` at the same position.
    pub pivot_cols: Vec<u32>,
    pub pivot_rows: Vec<u32>,
}

/// Symmetric difference of two sorted supports.
fn xor_into(a: &[u32], b: &[u32], out: &mut Vec<u32>) {
    out.clear();
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
}

/// Left-to-right reduction with a row -> column pivot map. Columns flagged
/// in `cleared` are known to reduce to zero and are skipped.
pub fn reduce(n_rows: usize, columns: Vec<Vec<u32>>, cleared: Option<&[bool]>) -> Reduction {
    let mut pivot_of_row = vec![NO_PIVOT; n_rows];
    let mut reduced: Vec<Vec<u32>> = Vec::with_capacity(columns.len());
    let mut out = Reduction::default();
    let mut scratch = Vec::new();
    for (j, mut col) in columns.into_iter().enumerate() {
        if cleared.is_some_and(|c| c[j]) {
            reduced.push(Vec::new());
            continue;
        }
        while let Some(&low) = col.last() {
            let p = pivot_of_row[low as usize];
            if p == NO_PIVOT {
                pivot_of_row[low as usize] = j as u32;
                out.rank += 1;
                out.pivot_cols.push(j as u32);
                out.pivot_rows.push(low);
                break;
            }
            xor_into(&col, &reduced[p as usize], &mut scratch);
            std::mem::swap(&mut col, &mut scratch);
        }
        reduced.push(col);
    }
    out
}

/// Rank of a GF(2) matrix.
pub fn rank(matrix: &SparseBitMatrix) -> usize {
    reduce(matrix.n_rows(), matrix.columns().to_vec(), None).rank
}

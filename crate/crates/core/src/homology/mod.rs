//! Betti numbers over GF(2) and integral homology of flag complexes.

pub mod cycle;
pub mod gf2;
pub mod integer;

use std::time::Instant;

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use crate::complex::{facet_rows, FlagComplex};
use crate::error::{Error, Result};

pub use cycle::expected_cycle_profile;
pub use integer::{signed_boundary, smith_diagonal, smith_summary, IntegerMatrix, SmithSummary};

/// Default cap on columns per boundary matrix handed to Smith normal form.
pub const DEFAULT_SNF_COLUMN_BUDGET: usize = 1_000_000;

/// Resource caps for one homology run. The deadline is only looked at
/// between boundary matrices.
#[derive(Clone, Copy, Debug)]
pub struct Limits {
    pub snf_columns: usize,
    pub deadline: Option<Instant>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            snf_columns: DEFAULT_SNF_COLUMN_BUDGET,
            deadline: None,
        }
    }
}

impl Limits {
    fn check_time(&self, reached_dim: usize) -> Result<()> {
        match self.deadline {
            Some(t) if Instant::now() > t => Err(Error::TimeBudget { reached_dim }),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coefficients {
    Gf2,
    Integer,
}

impl std::fmt::Display for Coefficients {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Coefficients::Gf2 => "gf2",
            Coefficients::Integer => "integer",
        })
    }
}

/// Per-dimension homology ranks, torsion and Euler characteristic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiProfile {
    pub coefficients: Coefficients,
    pub betti: Vec<u64>,
    /// Invariant factors greater than one of `H_d`, per dimension.
    #[serde(serialize_with = "serialize_torsion")]
    pub torsion: Vec<Vec<BigUint>>,
    /// Alternating sum of `betti`.
    pub euler: i64,
    /// Set when simplices exist above the last reported dimension.
    pub truncated_at: Option<usize>,
}

fn serialize_torsion<S: Serializer>(t: &[Vec<BigUint>], s: S) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut outer = s.serialize_seq(Some(t.len()))?;
    for dim in t {
        let row: Vec<serde_json::Value> = dim
            .iter()
            .map(|f| match u64::try_from(f) {
                Ok(v) => serde_json::Value::from(v),
                Err(_) => serde_json::Value::from(f.to_string()),
            })
            .collect();
        outer.serialize_element(&row)?;
    }
    outer.end()
}

impl BettiProfile {
    /// An untruncated profile with no torsion.
    pub fn from_betti(coefficients: Coefficients, betti: Vec<u64>) -> Self {
        let torsion = vec![Vec::new(); betti.len()];
        BettiProfile {
            coefficients,
            euler: alternating(&betti),
            betti,
            torsion,
            truncated_at: None,
        }
    }

    pub fn is_truncated(&self) -> bool {
        self.truncated_at.is_some()
    }

    pub fn has_torsion(&self) -> bool {
        self.torsion.iter().any(|t| !t.is_empty())
    }

    /// `betti[d]`, zero past the computed range.
    pub fn get(&self, d: usize) -> u64 {
        self.betti.get(d).copied().unwrap_or(0)
    }

    /// Reduced Betti numbers (`β̃_0 = β_0 - 1`).
    pub fn reduced(&self) -> Vec<u64> {
        let mut r = self.betti.clone();
        if let Some(b0) = r.first_mut() {
            *b0 = b0.saturating_sub(1);
        }
        r
    }

    /// Whether the Betti numbers agree with `expected` (trailing zeros ignored).
    pub fn betti_equals(&self, expected: &[u64]) -> bool {
        let len = self.betti.len().max(expected.len());
        (0..len).all(|d| self.get(d) == expected.get(d).copied().unwrap_or(0))
    }
}

fn alternating(values: &[u64]) -> i64 {
    values
        .iter()
        .enumerate()
        .map(|(d, &b)| if d % 2 == 0 { b as i64 } else { -(b as i64) })
        .sum()
}

/// Checks that `∂_{max+1}` is available, either enumerated or provably zero.
fn check_depth(complex: &FlagComplex, max_dim: usize) -> Result<()> {
    if complex.max_dim() > max_dim || !complex.is_truncated() {
        Ok(())
    } else {
        Err(Error::InsufficientDepth {
            needed: max_dim + 1,
            have: complex.max_dim(),
        })
    }
}

fn truncation(complex: &FlagComplex, max_dim: usize) -> Option<usize> {
    let above = complex.is_truncated() || complex.top_dim().is_some_and(|t| t > max_dim);
    above.then_some(max_dim)
}

/// Betti numbers over GF(2) for dimensions `0..=max_betti_dim`.
///
/// Boundary matrices are reduced from the top dimension down; a
/// `d`-simplex that is the pivot of a reduced `∂_{d+1}` column is a
/// boundary, so its own column in `∂_d` is skipped.
pub fn betti_gf2(complex: &FlagComplex, max_betti_dim: usize) -> Result<BettiProfile> {
    betti_gf2_with_limits(complex, max_betti_dim, &Limits::default())
}

pub fn betti_gf2_with_limits(
    complex: &FlagComplex,
    max_betti_dim: usize,
    limits: &Limits,
) -> Result<BettiProfile> {
    check_depth(complex, max_betti_dim)?;
    let counts = complex.counts();
    let top = (max_betti_dim + 1).min(complex.max_dim());
    // ranks[d] = rank ∂_d, for d in 0..=top + 1
    let mut ranks = vec![0usize; top + 2];
    let mut cleared: Option<Vec<bool>> = None;
    for d in (1..=top).rev() {
        limits.check_time(d)?;
        let (n_rows, cols) = facet_rows(complex, d)?;
        let red = gf2::reduce(n_rows, cols, cleared.as_deref());
        ranks[d] = red.rank;
        let mut next = vec![false; n_rows];
        for &r in &red.pivot_rows {
            next[r as usize] = true;
        }
        cleared = Some(next);
    }
    let betti: Vec<u64> = (0..=max_betti_dim)
        .map(|d| {
            let c = counts.get(d).copied().unwrap_or(0);
            let below = ranks.get(d).copied().unwrap_or(0);
            let above = ranks.get(d + 1).copied().unwrap_or(0);
            (c - below - above) as u64
        })
        .collect();
    Ok(BettiProfile {
        coefficients: Coefficients::Gf2,
        torsion: vec![Vec::new(); betti.len()],
        euler: alternating(&betti),
        betti,
        truncated_at: truncation(complex, max_betti_dim),
    })
}

/// Integral homology `H_d ≅ ℤ^{β_d} ⊕ ⊕ ℤ/f` for `d <= max_dim`, with the
/// default Smith normal form budget.
pub fn homology_integer(complex: &FlagComplex, max_dim: usize) -> Result<BettiProfile> {
    homology_integer_with_limits(complex, max_dim, &Limits::default())
}

pub fn homology_integer_with_budget(
    complex: &FlagComplex,
    max_dim: usize,
    column_budget: usize,
) -> Result<BettiProfile> {
    let limits = Limits {
        snf_columns: column_budget,
        deadline: None,
    };
    homology_integer_with_limits(complex, max_dim, &limits)
}

pub fn homology_integer_with_limits(
    complex: &FlagComplex,
    max_dim: usize,
    limits: &Limits,
) -> Result<BettiProfile> {
    let column_budget = limits.snf_columns;
    check_depth(complex, max_dim)?;
    let counts = complex.counts();
    let top = (max_dim + 1).min(complex.max_dim());
    let mut summaries: Vec<Option<SmithSummary>> = vec![None; top + 2];
    for d in 1..=top {
        limits.check_time(d)?;
        let cols = counts[d];
        if cols > column_budget {
            return Err(Error::Budget {
                what: "smith normal form column",
                limit: column_budget,
                reached_dim: d,
            });
        }
        summaries[d] = Some(smith_summary(&signed_boundary(complex, d)?));
    }
    let rank = |d: usize| summaries.get(d).and_then(|s| s.as_ref()).map_or(0, |s| s.rank);
    let betti: Vec<u64> = (0..=max_dim)
        .map(|d| {
            let c = counts.get(d).copied().unwrap_or(0);
            (c - rank(d) - rank(d + 1)) as u64
        })
        .collect();
    let torsion = (0..=max_dim)
        .map(|d| {
            summaries
                .get(d + 1)
                .and_then(|s| s.as_ref())
                .map_or_else(Vec::new, |s| s.torsion.clone())
        })
        .collect();
    Ok(BettiProfile {
        coefficients: Coefficients::Integer,
        euler: alternating(&betti),
        betti,
        torsion,
        truncated_at: truncation(complex, max_dim),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{enumerate_simplices, vr_graph, Graph};
    use crate::metric::FiniteMetricSpace;

    fn torus(n: u32, k: u32, dim: usize) -> FlagComplex {
        enumerate_simplices(&vr_graph(&FiniteMetricSpace::torus(n).unwrap(), k), dim).unwrap()
    }

    #[test]
    fn table_cells_small() {
        assert_eq!(betti_gf2(&torus(4, 2, 4), 3).unwrap().betti, vec![1, 0, 0, 9]);
        assert_eq!(betti_gf2(&torus(7, 2, 3), 2).unwrap().betti, vec![1, 2, 1]);
        assert_eq!(betti_gf2(&torus(4, 1, 2), 1).unwrap().betti, vec![1, 17]);
    }

    #[test]
    fn single_vertex() {
        let c = enumerate_simplices(&Graph::empty(1), 0).unwrap();
        let p = betti_gf2(&c, 0).unwrap();
        assert_eq!(p.betti, vec![1]);
        assert_eq!(p.truncated_at, None);
    }

    #[test]
    fn insufficient_depth_is_rejected() {
        let c = torus(4, 2, 3);
        assert!(c.is_truncated());
        assert!(matches!(betti_gf2(&c, 3), Err(Error::InsufficientDepth { .. })));
        assert!(betti_gf2(&c, 2).is_ok());
    }

    #[test]
    fn hollow_triangle_integral() {
        // ∂_1 of the boundary of a triangle; no 2-cells
        let d1 = IntegerMatrix::new(3, vec![vec![(0, -1), (1, 1)], vec![(0, -1), (2, 1)], vec![(1, -1), (2, 1)]]).unwrap();
        let s = smith_summary(&d1);
        assert_eq!(s.rank, 2);
        assert!(s.torsion.is_empty());
        // H_1 = ker ∂_1 = 3 - rank
        assert_eq!(3 - s.rank, 1);
        let sq = enumerate_simplices(&vr_graph(&FiniteMetricSpace::cycle(4).unwrap(), 1), 2).unwrap();
        let p = homology_integer(&sq, 1).unwrap();
        assert_eq!(p.betti, vec![1, 1]);
        assert!(!p.has_torsion());
    }

    #[test]
    fn integral_matches_gf2_without_torsion() {
        for (n, k) in [(4, 2), (5, 2), (6, 2), (7, 2)] {
            let c = torus(n, k, 4);
            let a = betti_gf2(&c, 3).unwrap();
            let b = homology_integer(&c, 3).unwrap();
            assert!(!b.has_torsion());
            assert_eq!(a.betti, b.betti, "n={n} k={k}");
        }
    }

    #[test]
    fn snf_budget_is_enforced() {
        let c = torus(6, 2, 3);
        let err = homology_integer_with_budget(&c, 2, 10).unwrap_err();
        assert!(matches!(err, Error::Budget { .. }));
    }

    #[test]
    fn expired_deadline() {
        let c = torus(5, 2, 3);
        let limits = Limits {
            deadline: Some(Instant::now() - std::time::Duration::from_secs(1)),
            ..Limits::default()
        };
        assert!(matches!(betti_gf2_with_limits(&c, 2, &limits), Err(Error::TimeBudget { .. })));
        assert!(matches!(homology_integer_with_limits(&c, 2, &limits), Err(Error::TimeBudget { .. })));
    }

    #[test]
    fn profile_json_shape() {
        let mut p = BettiProfile::from_betti(Coefficients::Integer, vec![1, 0, 0]);
        p.torsion[1] = vec![BigUint::from(2u32)];
        let v = serde_json::to_value(&p).unwrap();
        assert_eq!(v["coefficients"], "integer");
        assert_eq!(v["torsion"][1][0], 2);
        assert_eq!(v["euler"], 1);
    }
}

//! Vietoris–Rips complexes of torus grids, cycles and `ℤ²` windows at
//! integer scales, with GF(2) and integral homology, closed-form facet
//! catalogs and topological certificates.

pub mod certify;
pub mod cli;
pub mod complex;
pub mod error;
pub mod facets;
pub mod homology;
pub mod metric;

pub use error::{Error, Result};

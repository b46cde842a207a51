//! Exact verification and search of spectral sets and translational tiles in
//! finite abelian groups `Z_{n_1} x ... x Z_{n_d}`.
//!
//! Character sums are decided exactly as sums of roots of unity; searches
//! distinguish "none exists" from "budget exceeded" and re-verify every
//! certificate they return.

mod clique;
pub mod cyclotomic;
pub mod diagonal;
pub mod error;
mod exact_cover;
pub mod group;
pub mod lifting;
pub mod search;
pub mod setfile;
pub mod spectral;
pub mod tiling;

pub use error::{Error, Result};
pub use group::{GroupElement, GroupSpec, PointSet, ProductGroup};
pub use search::{SearchConfig, SearchOutcome, Verdict};

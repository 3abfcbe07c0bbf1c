//! Exact computations on small matroids: covering numbers, weighted covers,
//! thickness and firmness analysis, uniform-minor detection, and pyramid
//! constructions.
//!
//! Everything here is exact and deterministic: searches are exhaustive with
//! explicit node budgets, weights are overflow-checked integers, and every
//! constructive routine re-validates its output before returning it.
//!
//! The main types, roughly bottom-up:
//!
//! * [`Subset`] — a set of up to 64 ground elements, as a bitmask;
//! * [`FieldSpec`] — GF(q) for prime powers q up to 16, with precomputed
//!   tables;
//! * [`Matroid`] / [`Minor`] — rank oracles and minor views;
//! * [`SetFamily`] — ordered families of subsets with similarity classes;
//! * [`cover`] — exact minimum flat covers, plain and weighted;
//! * [`structure`] — thickness, firmness, scatteredness, uniform minors;
//! * [`extract`] — firm-subfamily extraction, contraction choice,
//!   skew-or-concentrate splitting;
//! * [`pyramid`] — pyramids and their operations;
//! * [`catalog`] — the deterministic instance catalog;
//! * [`io`] — text formats for all of the above.

pub mod budget;
pub mod catalog;
pub mod cover;
pub mod error;
pub mod extract;
pub mod family;
pub mod field;
pub mod flats;
pub mod io;
pub mod matroid;
pub mod pyramid;
pub mod structure;
pub mod subset;
pub mod verdict;

pub use budget::DEFAULT_NODE_BUDGET;
pub use error::{Error, Result};
pub use family::{SetFamily, SimClass};
pub use field::{FieldElement, FieldSpec};
pub use matroid::{Kind, LinearRep, Matroid, Minor};
pub use subset::{Subset, MAX_GROUND};
pub use verdict::Verdict;

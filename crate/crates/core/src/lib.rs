//! Numerical laboratory for error terms in the prime number theorem.
//!
//! The crate evaluates zero-free regions `η(t)`, minimizes the exponent
//! `ω(x) = min_{t≥3} {η(t) log x + log t}`, evaluates zero-density bounds,
//! checks the truncated explicit formula for `ψ(x)` against real zeta zeros
//! and sieved prime data, and compares the resulting error bounds in log
//! space.
//!
//! Data-parallel loops (sieve segments, zero sums, grid sweeps) run on rayon
//! when the `parallel` feature is enabled, and sequentially otherwise. Every
//! parallel reduction is ordered, so results do not depend on the thread
//! count.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod bounds;
pub mod cli;
pub mod density;
pub mod error;
pub mod explicit_formula;
pub mod numeric;
pub mod omega;
pub mod par;
pub mod regions;
pub mod sieve;
pub mod zeros;

pub use bounds::{BoundKind, LogBound};
pub use density::DensityEstimate;
pub use error::{LabError, Result};
pub use explicit_formula::SplitSums;
pub use omega::OmegaResult;
pub use par::Parallelism;
pub use regions::{RegionFamily, ZeroFreeRegion};
pub use sieve::PrimeTables;
pub use zeros::{ZeroSet, ZeroSource};

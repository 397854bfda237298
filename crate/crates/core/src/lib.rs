//! Joint cumulants, weighted dependency graphs and exact moment oracles for
//! five combinatorial models.
//!
//! The crate is `no_std` and only needs `alloc`. Exact computations use
//! arbitrary precision rationals; floats are reserved for eigenvalue
//! quantities and Monte Carlo estimates.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod algebra;
pub mod combinatorics;
pub mod error;
pub mod linalg;
pub mod models;
pub mod montecarlo;
pub mod scalar;
pub mod wdg;
pub mod wgraph;

pub use error::{Error, Result};
pub use scalar::{rat, Rational, Scalar};

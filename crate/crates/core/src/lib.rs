//! Frobenius numbers of random coprime vectors.
//!
//! The crate bundles an exact Frobenius engine, the Monte Carlo harness that
//! estimates the limit distribution of normalized Frobenius numbers, exact
//! reference values for three coefficients, and the lattice machinery
//! (kernel lattices, LLL, successive minima, simplex covering radii in the
//! plane) the limit laws are phrased in.

// `!(x > 0.0)` style checks are meant to reject NaN too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytic;
pub mod coprime;
mod error;
pub mod frobenius;
pub mod lattice;
pub mod quadrature;
pub mod rng;
pub mod simplex;
pub mod statistics;

pub use coprime::{CoprimeVector, NormalizationKind};
pub use error::{Error, Result};
pub use frobenius::{frobenius, FrobeniusResult, FrobeniusSolver};
pub use lattice::{LatticeBasis, MinimaProfile};
pub use statistics::{EmpiricalDistribution, ExperimentConfig};

//! Finite-dimensional quantum probability for coins, dice, and decisions.
//!
//! The crate models measurements on small Hilbert spaces end to end:
//!
//! - [`linalg`]: dense complex matrices and vectors, tensor products,
//!   partial traces, Gram-Schmidt, density-matrix validation.
//! - [`space`]: labeled tensor-factor bookkeeping.
//! - [`state`]: density operators and unitary evolution models.
//! - [`measure`]: projection-valued measures, Lüders reduction, and
//!   conditional probabilities of consecutive measurements.
//! - [`decision`]: subject ⊗ alternatives composites, factor-confined
//!   reduction, and separation-time dynamics between measurements.
//! - [`sync`]: joint and conditional probabilities of simultaneous
//!   measurements in different factors.
//! - [`qdt`]: prospects with emotion amplitudes, their operator measure,
//!   and the utility/attraction decomposition `p = f + q`.
//! - [`classical`]: fair distributions, classical conditionals, and a
//!   seeded deterministic Monte Carlo sampler.

pub mod classical;
pub mod decision;
pub mod error;
pub mod linalg;
pub mod measure;
pub mod qdt;
pub mod space;
pub mod state;
pub mod sync;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use linalg::{Complex64, ComplexMatrix, ComplexVector, DEFAULT_TOL};
pub use space::CompositeSpace;
pub use state::{DensityOperator, EvolutionModel, Observable};

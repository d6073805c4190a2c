//! Certification of quantum channels and measurements with zero
//! false-negative probability.
//!
//! A channel `Φ₀` can be certified against alternatives `Φ₁, …, Φ_m` exactly
//! when the span of its Kraus operators is not contained in the joint span of
//! the alternatives' Kraus operators. This crate decides that condition
//! numerically, builds the certifying input state and accepting effect,
//! evaluates single-shot and parallel false-positive probabilities, and ships
//! brute-force and Monte Carlo cross-checks for all of it.

pub mod certify;
pub mod channels;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod oracle;
pub mod povm;
pub mod random;

pub use certify::{CertificationCertificate, QueryBound};
pub use channels::{DensityMatrix, PureState, QuantumChannel};
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Subspace, Tolerance};
pub use povm::{Permutation, Povm, SicPovm};

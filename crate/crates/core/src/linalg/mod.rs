//! Complex dense linear algebra: products, spans, projectors and the
//! numerical-range distance of unitaries.

mod matrix;
mod numerical_range;
mod subspace;

pub use matrix::{inner, kron, kron_vec, norm, pauli, ComplexMatrix, MAX_ENTRIES};
pub(crate) use matrix::check_entries;
pub use numerical_range::{hull_distance_from_origin, nu_distance};
pub use subspace::{projector_onto, span_of, span_of_vectors, subspace_contains, Subspace, Tolerance};

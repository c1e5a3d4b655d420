pub mod classify;
pub mod enumerate;
pub mod error;
pub mod field;
pub mod indices;
pub mod io;
pub mod matrix;
pub mod polynomial;
pub mod preserver;
pub mod sample;
pub mod subspace;
pub mod witness;

pub use error::AlgebraError;
pub use field::{Field, FieldElem};
pub use matrix::{Matrix, Vector};
pub use polynomial::{minimal_polynomial, Polynomial};
pub use subspace::Subspace;

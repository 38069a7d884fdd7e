//! Rational cohomology of Frobenius kernels and of their coefficient
//! functors, computed exactly over small prime fields.

#![allow(clippy::needless_range_loop)]

pub mod bar;
pub mod budget;
pub mod complexes;
pub mod error;
pub mod field;
pub mod functor;
pub mod hochschild;
pub mod hopf;
pub mod linalg;
pub mod ring;
pub mod sparse;

pub use budget::Budget;
pub use error::{Error, Result};
pub use field::{gf, Field, FieldElem};
pub use linalg::{quotient_basis, rank, rank_kernel_image, solve, Subspace};
pub use sparse::{SparseMatrix, SparseVec};

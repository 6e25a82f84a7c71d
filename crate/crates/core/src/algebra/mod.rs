//! Exact rational scalars, dense matrices, sparse polynomials and the
//! linear-algebra kernels the rest of the crate is built on.

pub mod linalg;
pub mod matrix;
pub mod poly;
pub mod scalar;

pub use linalg::{
    det_division_free, interpolate, interpolate_coefficient, inverse, nullspace_basis, rank,
    EchelonBasis,
};
pub use matrix::{Matrix, Ring};
pub use poly::{Monomial, SparsePoly};
pub use scalar::{format_scalar, int, parse_scalar, ratio, Scalar};

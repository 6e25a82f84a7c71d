//! Exact-arithmetic algebraic branching programs, polynomial identity
//! testing, Hasse derivatives, diagonal-circuit hitting sets, and decision
//! procedures for matrix tuples under simultaneous conjugation.

pub mod algebra;
pub mod branching;
pub mod diagonal;
pub mod error;
pub mod hasse;
pub mod invariants;
pub mod io;
pub mod pit;
pub mod sample;

pub use algebra::{Matrix, Monomial, Scalar, SparsePoly};
pub use branching::{Abp, AffineForm, Roabp, RoabpLayer, TracePower};
pub use diagonal::{DiagonalCircuit, DiagonalTerm};
pub use error::{Error, Result};
pub use hasse::MonomialOrdering;
pub use invariants::{MatrixTuple, OrbitVerdict};
pub use pit::{HittingSet, PitVerdict};

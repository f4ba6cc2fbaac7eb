//! Maslov index of paths of Lagrangian planes, together with the Morse index
//! and spectral flow identities it satisfies for self-adjoint Schrödinger
//! operators on intervals and lattice cells.
//!
//! The crate is layered bottom-up:
//!
//! - [`symplectic`]: complex symplectic spaces, Lagrangian planes and their
//!   graph unitaries.
//! - [`maslov`]: paths of planes, the Maslov index, crossing forms and
//!   spectral flow of eigenvalue tracks.
//! - [`schrodinger`]: one-dimensional Schrödinger operators, boundary traces,
//!   extension planes and a finite-difference spectral oracle.
//! - [`band`]: Galerkin truncations of scaled periodic Schrödinger operators.
//! - [`scenarios`]: homotopy squares and end-to-end identity checks.

pub mod band;
pub mod error;
pub mod linalg;
pub mod maslov;
pub mod scenarios;
pub mod schrodinger;
pub mod symplectic;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;
/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
/// Dense complex column vector.
pub type CVector = nalgebra::DVector<C64>;

//! Periodic Schrödinger operators `-t^{-2} Laplacian + V(t x)` on a lattice
//! cell with quasi-periodic conditions, truncated to a Fourier basis.

mod galerkin;
mod lattice;
mod scaling;

pub use galerkin::{galerkin_matrix, morse_index, morse_vs_t, FourierPotential, FourierTruncation, MorseRow, ScaledFamily};
pub use lattice::{exact_laplacian_spectrum, LatticeCell};
pub use scaling::{verify_y19, ScalingOptions, ScalingReport, SmallScaleBranch};

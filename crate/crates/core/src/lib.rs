//! Finite-precision p-adic linear algebra and a truncated-normal-form
//! polynomial system solver over Q_p.
//!
//! Numbers carry an absolute precision `O(p^N)` and follow the zealous
//! (interval) propagation rules. Matrices are dense grids of such numbers.
//! On top of that sit QR/SVD factorizations, Hessenberg reduction, power
//! iteration and LR iteration eigensolvers, and a Macaulay-matrix based
//! solver for zero-dimensional systems.

pub mod eigen;
pub mod error;
pub mod matrix;
pub mod padic;
pub mod par;
pub mod random;
pub mod residue;
pub mod solver;

pub use error::{Error, Result};
pub use matrix::PadicMatrix;
pub use padic::Padic;
pub use residue::{ResidueElem, ResidueMatrix, ResiduePoly};

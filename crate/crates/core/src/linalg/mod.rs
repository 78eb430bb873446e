//! Small dense complex linear algebra.
//!
//! Everything here is sized for matrices of a few hundred rows at most: the
//! mean matrix of an operator spec, Galerkin discretizations and monodromy
//! matrices. Eigenvalues come from an explicit-shift Hessenberg QR iteration,
//! numerical ranks from one-sided Jacobi singular values, so the crate stays
//! independent of external linear-algebra stacks.

mod eig;
mod lu;
mod matrix;
mod structure;
mod svd;

pub use eig::{eig, eigenvalues, rayleigh_refine, Eig, EigOptions};
pub use lu::{det, LuFactors};
pub use matrix::{CMat, RMat};
pub use structure::{spectral_structure, SpectralEntry, SpectralStructure};
pub use svd::{numerical_rank, singular_values};

use core::fmt;

/// Default relative tolerance for rank and cluster decisions.
pub const DEFAULT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub enum LinalgError {
    /// QR iteration exceeded its sweep budget.
    NoConvergence { dim: usize },
    /// Input matrix is not square.
    NotSquare { rows: usize, cols: usize },
    /// Dimension exceeds the configured cap.
    DimensionCap { dim: usize, cap: usize },
    /// Two eigenvalue clusters sit closer than 10× the cluster radius; the
    /// caller must pick a different tolerance.
    ClusterAmbiguity { detail: &'static str },
}

impl fmt::Display for LinalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinalgError::NoConvergence { dim } => {
                write!(f, "QR iteration did not converge (dim {dim})")
            }
            LinalgError::NotSquare { rows, cols } => {
                write!(f, "matrix is not square ({rows}x{cols})")
            }
            LinalgError::DimensionCap { dim, cap } => {
                write!(f, "matrix dimension {dim} exceeds cap {cap}")
            }
            LinalgError::ClusterAmbiguity { detail } => {
                write!(f, "eigenvalue clustering is ambiguous: {detail}")
            }
        }
    }
}

impl core::error::Error for LinalgError {}

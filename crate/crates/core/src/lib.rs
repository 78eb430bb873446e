//! Bloch-spectrum computations for differential operators of order n > 2 with
//! m×m PT-symmetric periodic matrix coefficients.
//!
//! The crate is organized around two independent engines and the closed-form
//! theory that ties them together:
//!
//! * [`coefficients`] — trigonometric-polynomial matrix coefficients, the mean
//!   matrix `C`, and the homotopy weight ε that interpolates between the
//!   constant-coefficient operator and the full one.
//! * [`linalg`] — small dense complex linear algebra (Hessenberg/QR
//!   eigenvalues, pivoted determinants, Jordan-type spectral structure of a
//!   real matrix via rank sequences).
//! * [`unperturbed`] — everything that is known in closed form for the
//!   constant-coefficient operator: band functions, collision and gap windows,
//!   admissible quasimomentum intervals, localization radii.
//! * [`bloch`] — the Fourier–Galerkin engine: assembly, windowed eigenvalue
//!   extraction with a truncation-doubling certificate, branch tracing and the
//!   conjugate-symmetry check.
//! * [`monodromy`] — the shooting engine: fundamental solutions, Floquet
//!   multipliers, the characteristic determinant (evaluated through a
//!   multiple-shooting block determinant so large |λ| stay tractable), and
//!   spectrum membership tests.
//! * [`analysis`] — real-axis scans, gap detection and the verification
//!   routines for localization decay, gap containment and real-line coverage.
//!
//! The crate is `no_std` (with `alloc`); all IO, file formats and the CLI live
//! in the companion crate. Float math resolves through `num_traits::Float`
//! (libm-backed); builds that link std shadow those imports with inherent
//! methods, so the imports carry `allow(unused_imports)`.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod bloch;
pub mod calibration;
pub mod coefficients;
pub mod linalg;
pub mod monodromy;
pub mod ode;
pub mod unperturbed;

pub use calibration::Calibration;
pub use coefficients::{build_spec, OperatorSpec, RawHarmonic, RawSeries, SpecError};
pub use linalg::{CMat, RMat, SpectralStructure};

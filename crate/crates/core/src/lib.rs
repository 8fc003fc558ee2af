//! Fourth-order compact implicit finite-difference schemes for
//!
//! ```text
//!     u_t = (θ(x) u_x)_x + f(t, x)          (diffusion)
//!     u_t = (iθ(x) u_x)_x + f(t, x)         (Leontovich–Levin / Schrödinger type)
//! ```
//!
//! on `x ∈ [0, 2π]` with a smooth positive time-independent coefficient `θ`.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: double-sweep, dense LU, Jacobi SVD null spaces, Hessenberg–QR eigenvalues.
//! * [`problem`] and [`samples`]: grids, problem descriptions and the manufactured solutions.
//! * [`fit`]: local log-quartic fits of `θ`.
//! * [`interior`]: the 12 coefficients of an interior compact row and their test-function oracle.
//! * [`boundary`]: Neumann boundary rows (compact, reduced, classic).
//! * [`stepper`]: global operators and time integration for the compact and classic schemes.
//! * [`analysis`]: convergence studies, Richardson extrapolation, spectra, asymmetry, first integrals.

pub mod analysis;
pub mod boundary;
mod error;
pub mod fit;
pub mod interior;
pub mod linalg;
pub mod problem;
pub mod samples;
pub mod stepper;

pub use error::{Error, Result};
pub use linalg::Scalar;
pub use num_complex::Complex64;

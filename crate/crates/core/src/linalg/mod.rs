//! Small self-contained linear algebra over real and complex scalars.

mod dense;
mod eigen;
mod scalar;
mod svd;
mod tridiag;

pub use dense::{frobenius, solve_dense, DenseMatrix, Lu};
pub use eigen::{eigenvalues, hessenberg};
pub use scalar::Scalar;
pub use svd::{equilibrate_columns, null_space_1d, numerical_rank, null_space_1d_with_tol, singular_values, DEFAULT_RANK_TOL};
pub use tridiag::{solve_tridiag, SweepSolution, Tridiag};

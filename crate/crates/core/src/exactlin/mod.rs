//! Exact field arithmetic and dense matrix kernels.

mod field;
mod mat;
mod orbits;

pub use field::{Field, Scalar};
pub use mat::{Echelon, Mat};
pub use orbits::{rref_count, rref_matrices};

use crate::error::Result;

pub fn rank(m: &Mat) -> usize {
    m.rank()
}

/// Columns span the null space of `m`.
pub fn kernel_basis(m: &Mat) -> Mat {
    m.kernel_basis()
}

/// `X` with `b * X = a`, or `None` when `a` does not factor through `b`.
pub fn solve_factorization(a: &Mat, b: &Mat) -> Result<Option<Mat>> {
    Mat::solve_factorization(a, b)
}

//! Fixed-shape (2×2, 3×3) complex matrix arithmetic: tolerance-aware ranks,
//! null vectors, symmetric/skew splits, and the pencil polynomial
//! `det(xAᵀ − A)` with its roots.

mod cosquare;
mod matrix;
mod poly;
pub mod svd;

pub use cosquare::{cosquare_structure, CosquareStructure};
pub use matrix::{format_complex, ComplexMatrix};
pub use poly::{pencil_charpoly, poly_roots, PolyCoeffs};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Numerical thresholds. `rank_tol` is relative to the largest singular value;
/// `eig_tol` is absolute and governs eigenvalue clustering and ±1 snapping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub rank_tol: f64,
    pub eig_tol: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self { rank_tol: 1e-8, eig_tol: 1e-6 }
    }
}

impl Tolerance {
    pub fn new(rank_tol: f64, eig_tol: f64) -> Result<Self> {
        for (name, v) in [("rank_tol", rank_tol), ("eig_tol", eig_tol)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::InvalidTolerance(format!("{name} = {v} must lie in (0, 1)")));
            }
        }
        Ok(Self { rank_tol, eig_tol })
    }
}

pub fn sym_skew_parts(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    a.sym_skew_parts()
}

pub fn singular_values(a: &ComplexMatrix) -> Vec<f64> {
    svd::jacobi_svd(&a.columns()).singular_values
}

/// Numerical rank: singular values above `rank_tol · σ_max`. The zero matrix has rank 0.
pub fn rank_tol(a: &ComplexMatrix, tol: &Tolerance) -> usize {
    let sv = singular_values(a);
    let smax = sv.first().copied().unwrap_or(0.0);
    if smax == 0.0 {
        return 0;
    }
    svd::count_above(&sv, tol.rank_tol * smax)
}

/// Rank of `m` measured against an external scale (e.g. σ_max of the matrix
/// `m` was derived from). Used for the symmetric/skew parts and pencil values,
/// where a relative threshold on `m` itself would promote rounding noise.
pub fn rank_relative_to(m: &ComplexMatrix, scale: f64, tol: &Tolerance) -> usize {
    if scale == 0.0 {
        return 0;
    }
    svd::count_above(&singular_values(m), tol.rank_tol * scale)
}

/// Spectral norm.
pub fn norm2(a: &ComplexMatrix) -> f64 {
    singular_values(a)[0]
}

/// Scales `v` to unit length and fixes its phase so that the first
/// component of non-negligible modulus is real and positive.
pub fn normalize_phase(v: &mut [Complex64]) {
    let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if norm == 0.0 {
        return;
    }
    let pivot = v
        .iter()
        .copied()
        .find(|z| z.norm() > 1e-10 * norm)
        .unwrap_or(Complex64::new(norm, 0.0));
    let factor = pivot.conj() / (pivot.norm() * norm);
    for z in v.iter_mut() {
        *z *= factor;
    }
}

/// Right and left null vectors (`Av ≈ 0`, `uᵀA ≈ 0`) of a matrix of numerical rank `n − 1`.
pub fn null_pair(a: &ComplexMatrix, tol: &Tolerance) -> Result<(Vec<Complex64>, Vec<Complex64>)> {
    let n = a.n();
    let r = rank_tol(a, tol);
    if r + 1 != n {
        return Err(Error::RankMismatch { expected: n - 1, found: r });
    }
    let mut v = right_null_and_complement(a).0;
    let mut u = right_null_and_complement(&a.transpose()).0;
    normalize_phase(&mut v);
    normalize_phase(&mut u);
    Ok((v, u))
}

/// Smallest right singular vector together with the other right singular
/// vectors (an orthonormal complement of it).
pub(crate) fn right_null_and_complement(
    a: &ComplexMatrix,
) -> (Vec<Complex64>, Vec<Vec<Complex64>>) {
    let mut svd = svd::jacobi_svd(&a.columns());
    let v = svd.right_vectors.pop().expect("non-empty matrix");
    (v, svd.right_vectors)
}

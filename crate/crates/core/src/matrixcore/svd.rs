//! One-sided (Hestenes) Jacobi SVD for small dense complex matrices.
//!
//! Works on columns: right-multiplies by unitary plane rotations until all
//! column pairs are orthogonal. Singular values are then the column norms and
//! the accumulated rotations are the right singular vectors. Relative accuracy
//! is ~eps·σ_max, which is what the rank decisions need.

use num_complex::Complex64;

const MAX_SWEEPS: usize = 60;

/// Result of [`jacobi_svd`]: singular values in descending order and the
/// matching right singular vectors (columns of `V`).
#[derive(Debug, Clone)]
pub struct Svd {
    pub singular_values: Vec<f64>,
    pub right_vectors: Vec<Vec<Complex64>>,
}

fn dot_h(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm_sqr(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// SVD of the matrix whose columns are `columns` (all of equal length).
pub fn jacobi_svd(columns: &[Vec<Complex64>]) -> Svd {
    let k = columns.len();
    let mut a: Vec<Vec<Complex64>> = columns.to_vec();
    let mut v: Vec<Vec<Complex64>> = (0..k)
        .map(|j| {
            let mut e = vec![Complex64::new(0.0, 0.0); k];
            e[j] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..k {
            for q in (p + 1)..k {
                let alpha = norm_sqr(&a[p]);
                let beta = norm_sqr(&a[q]);
                let gamma = dot_h(&a[p], &a[q]);
                let g = gamma.norm();
                if g == 0.0 || g <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                // Rotate the phase out of gamma, then apply a real Jacobi rotation.
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let ph = phase.conj();
                for cols in [&mut a, &mut v] {
                    for r in 0..cols[p].len() {
                        let xp = cols[p][r];
                        let xq = cols[q][r] * ph;
                        cols[p][r] = xp * c - xq * s;
                        cols[q][r] = xp * s + xq * c;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<(f64, usize)> = a.iter().map(|c| norm_sqr(c).sqrt()).zip(0..).collect();
    order.sort_by(|x, y| y.0.total_cmp(&x.0));
    Svd {
        singular_values: order.iter().map(|&(s, _)| s).collect(),
        right_vectors: order.iter().map(|&(_, j)| v[j].clone()).collect(),
    }
}

/// Number of singular values strictly above `threshold`.
pub fn count_above(singular_values: &[f64], threshold: f64) -> usize {
    singular_values.iter().filter(|&&s| s > threshold).count()
}

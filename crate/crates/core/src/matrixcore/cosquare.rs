use num_complex::Complex64;

use super::poly::quadratic_roots;
use super::{norm2, pencil_charpoly, rank_relative_to, rank_tol, ComplexMatrix, Tolerance};
use crate::error::{Error, Result};

/// Spectrum of the cosquare `A⁻ᵀA` of a nonsingular matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CosquareStructure {
    /// Eigenvalues with multiplicity; the reciprocal pair first, then `1` when `n = 3`.
    pub spectrum: Vec<Complex64>,
    /// Geometric multiplicity of each distinct eigenvalue, in order of first appearance.
    pub geo_mult: Vec<(Complex64, usize)>,
    /// `μ + 1/μ` for the reciprocal pair `{μ, 1/μ}`.
    pub trace_pair: Complex64,
    /// Distance of the unsnapped pair to the nearest of ±1.
    pub boundary_distance: f64,
    /// Whether the pair was snapped onto ±1.
    pub snapped: bool,
}

impl CosquareStructure {
    pub fn geo_mult_of(&self, mu: Complex64) -> Option<usize> {
        self.geo_mult.iter().find(|(m, _)| *m == mu).map(|&(_, g)| g)
    }

    /// The reciprocal pair `{μ, 1/μ}`.
    pub fn pair(&self) -> [Complex64; 2] {
        [self.spectrum[0], self.spectrum[1]]
    }
}

/// Cosquare spectrum and geometric multiplicities.
///
/// `p(x) = det(xAᵀ − A)` satisfies `c_k = (−1)^n c_{n−k}`, so for `n = 3`
/// the root `1` factors out exactly and in both dimensions the remaining
/// roots solve `x² − tx + 1 = 0`. Using that structure keeps a triple root
/// at 1 accurate to ~√eps instead of eps^{1/3}.
///
/// Repeated eigenvalues can only be ±1 after snapping; their geometric
/// multiplicity is `n − rank(A − μAᵀ)`, equal to `n − rank(A⁻ᵀA − μI)`.
pub fn cosquare_structure(a: &ComplexMatrix, tol: &Tolerance) -> Result<CosquareStructure> {
    let n = a.n();
    if rank_tol(a, tol) != n {
        return Err(Error::SingularMatrix);
    }
    let p = pencil_charpoly(a);
    let trace_pair = if n == 2 {
        let lead = (p.coeff(2) + p.coeff(0)) * 0.5;
        -p.coeff(1) / lead
    } else {
        let lead = (p.coeff(3) - p.coeff(0)) * 0.5;
        let c2 = (p.coeff(2) - p.coeff(1)) * 0.5;
        -(c2 / lead) - 1.0
    };
    let [m1, m2] = quadratic_roots(-trace_pair, Complex64::new(1.0, 0.0));
    let one = Complex64::new(1.0, 0.0);
    let d_plus = (m1 - one).norm().min((m2 - one).norm());
    let d_minus = (m1 + one).norm().min((m2 + one).norm());
    let boundary_distance = d_plus.min(d_minus);

    let (pair, snapped) = if d_plus <= tol.eig_tol && d_plus <= d_minus {
        ([one, one], true)
    } else if d_minus <= tol.eig_tol {
        ([-one, -one], true)
    } else {
        ([m1, m2], false)
    };
    // inversion closure of the pair
    if (pair[0] * pair[1] - one).norm() > tol.eig_tol.sqrt() {
        return Err(Error::UnclassifiableStructure(format!(
            "cosquare pair {} , {} is not closed under inversion",
            pair[0], pair[1]
        )));
    }

    let mut spectrum = pair.to_vec();
    if n == 3 {
        spectrum.push(one);
    }

    let scale = norm2(a);
    let mut geo_mult: Vec<(Complex64, usize)> = Vec::new();
    for &mu in &spectrum {
        if geo_mult.iter().any(|(m, _)| *m == mu) {
            continue;
        }
        let alg = spectrum.iter().filter(|&&x| x == mu).count();
        let geo = if alg == 1 {
            1
        } else {
            let pencil = *a - a.transpose().scale(mu);
            n - rank_relative_to(&pencil, scale, tol)
        };
        geo_mult.push((mu, geo));
    }

    Ok(CosquareStructure { spectrum, geo_mult, trace_pair, boundary_distance, snapped })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(rows: &[&[f64]]) -> ComplexMatrix {
        ComplexMatrix::from_real_rows(rows).unwrap()
    }

    #[test]
    fn skew_two_by_two() {
        let cs = cosquare_structure(&real(&[&[0.0, 1.0], &[-1.0, 0.0]]), &Tolerance::default()).unwrap();
        let m1 = Complex64::new(-1.0, 0.0);
        assert_eq!(cs.spectrum, vec![m1, m1]);
        assert_eq!(cs.geo_mult_of(m1), Some(2));
    }

    #[test]
    fn gamma_two() {
        let cs = cosquare_structure(&real(&[&[0.0, -1.0], &[1.0, 1.0]]), &Tolerance::default()).unwrap();
        let m1 = Complex64::new(-1.0, 0.0);
        assert_eq!(cs.spectrum, vec![m1, m1]);
        assert_eq!(cs.geo_mult_of(m1), Some(1));
    }

    #[test]
    fn h_one_lambda() {
        let cs = cosquare_structure(&real(&[&[0.0, 1.0], &[3.0, 0.0]]), &Tolerance::default()).unwrap();
        let mut got: Vec<f64> = cs.spectrum.iter().map(|z| z.re).collect();
        got.sort_by(f64::total_cmp);
        assert!((got[0] - 1.0 / 3.0).abs() < 1e-14 && (got[1] - 3.0).abs() < 1e-14);
        assert!(cs.spectrum.iter().all(|z| z.im.abs() < 1e-14));
    }

    #[test]
    fn singular_rejected() {
        let err = cosquare_structure(&real(&[&[1.0, 0.0], &[0.0, 0.0]]), &Tolerance::default());
        assert_eq!(err, Err(Error::SingularMatrix));
    }

    #[test]
    fn gamma_three_triple_one() {
        let g3 = real(&[&[0.0, 0.0, 1.0], &[0.0, -1.0, -1.0], &[1.0, 1.0, 0.0]]);
        let cs = cosquare_structure(&g3, &Tolerance::default()).unwrap();
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(cs.spectrum, vec![one; 3]);
        assert_eq!(cs.geo_mult_of(one), Some(1));
    }
}

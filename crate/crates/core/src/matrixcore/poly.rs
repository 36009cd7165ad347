use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Polynomial `c₀ + c₁x + … + c_d x^d` with `d ≤ 3`; `coeffs[k] = c_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyCoeffs {
    coeffs: Vec<Complex64>,
}

impl PolyCoeffs {
    /// `coeffs[k]` is the coefficient of `x^k`; the degree is `coeffs.len() − 1`.
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.len() > 4 {
            return Err(Error::Parse(format!(
                "polynomial needs 1..=4 coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    fn derivative_at(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, (k, &c)| acc * x + c * k as f64)
    }

    pub fn scale_max(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Coefficients of `det(xAᵀ − A)`.
///
/// Expanding the determinant column by column, the coefficient of `x^k` is
/// `(−1)^{n−k}` times the sum of determinants of the matrices that take `k`
/// columns from `Aᵀ` and the remaining ones from `A`.
pub fn pencil_charpoly(a: &ComplexMatrix) -> PolyCoeffs {
    let n = a.n();
    let b = a.transpose();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); n + 1];
    for mask in 0u32..(1 << n) {
        let mut m = *a;
        for j in 0..n {
            if mask & (1 << j) != 0 {
                for i in 0..n {
                    m[(i, j)] = b[(i, j)];
                }
            }
        }
        let k = mask.count_ones() as usize;
        let sign = if (n - k).is_multiple_of(2) { 1.0 } else { -1.0 };
        coeffs[k] += m.det() * sign;
    }
    PolyCoeffs { coeffs }
}

/// Stable roots of the monic quadratic `x² + bx + c`.
pub(crate) fn quadratic_roots(b: Complex64, c: Complex64) -> [Complex64; 2] {
    let disc = (b * b - c * 4.0).sqrt();
    // choose the sign that avoids cancellation
    let q = if (b.conj() * disc).re >= 0.0 { -(b + disc) * 0.5 } else { -(b - disc) * 0.5 };
    if q.norm() == 0.0 {
        return [Complex64::new(0.0, 0.0); 2];
    }
    [q, c / q]
}

/// Cardano's formula for the monic cubic `x³ + ax² + bx + c`.
fn cubic_roots(a: Complex64, b: Complex64, c: Complex64) -> [Complex64; 3] {
    let shift = a / 3.0;
    let p = b - a * a / 3.0;
    let q = a * a * a * (2.0 / 27.0) - a * b / 3.0 + c;
    let disc = (q * q / 4.0 + p * p * p / 27.0).sqrt();
    let half_q = -q / 2.0;
    let u3 = if (half_q + disc).norm() >= (half_q - disc).norm() { half_q + disc } else { half_q - disc };
    let omega = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
    if u3.norm() == 0.0 {
        // p = q = 0: triple root
        return [-shift; 3];
    }
    let u = u3.powf(1.0 / 3.0);
    let mut roots = [Complex64::new(0.0, 0.0); 3];
    let mut w = Complex64::new(1.0, 0.0);
    for r in roots.iter_mut() {
        let uk = u * w;
        *r = uk - p / (uk * 3.0) - shift;
        w *= omega;
    }
    roots
}

/// All complex roots (with multiplicity) of a polynomial of degree 1–3.
/// Cubic roots get one Newton step, kept only if it lowers the residual.
pub fn poly_roots(p: &PolyCoeffs) -> Result<Vec<Complex64>> {
    let d = p.degree();
    let lead = p.coeff(d);
    let scale = p.scale_max();
    if d == 0 || scale == 0.0 || lead.norm() <= 1e-14 * scale {
        return Err(Error::DegenerateLeadingCoefficient);
    }
    let m: Vec<Complex64> = p.coeffs.iter().map(|c| c / lead).collect();
    let mut roots = match d {
        1 => vec![-m[0]],
        2 => quadratic_roots(m[1], m[0]).to_vec(),
        _ => cubic_roots(m[2], m[1], m[0]).to_vec(),
    };
    if d == 3 {
        for r in roots.iter_mut() {
            let f = p.eval(*r);
            let df = p.derivative_at(*r);
            if df.norm() > 0.0 {
                let cand = *r - f / df;
                if p.eval(cand).norm() < f.norm() {
                    *r = cand;
                }
            }
        }
    }
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn sorted_re(mut v: Vec<Complex64>) -> Vec<f64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re));
        v.iter().map(|z| z.re).collect()
    }

    #[test]
    fn charpoly_of_nine_deformation() {
        let (eps, delta) = (0.3, -0.7);
        let a = ComplexMatrix::from_real_rows(&[
            [0.0, 1.0, 0.0],
            [0.0, 0.0, 1.0],
            [eps, 0.0, delta],
        ])
        .unwrap();
        let p = pencil_charpoly(&a);
        let want = [-eps, -delta, delta, eps];
        for (k, w) in want.iter().enumerate() {
            assert!((p.coeff(k) - c(*w)).norm() < 1e-15, "c{k}");
        }
    }

    #[test]
    fn charpoly_of_htx_matrix() {
        let (eps, delta) = (0.2, 0.05);
        let a = ComplexMatrix::from_real_rows(&[[1.0, 0.0], [eps, delta]]).unwrap();
        let p = pencil_charpoly(&a);
        let want = [delta, delta * (eps * eps / delta - 2.0), delta];
        for (k, w) in want.iter().enumerate() {
            assert!((p.coeff(k) - c(*w)).norm() < 1e-15, "c{k}");
        }
    }

    #[test]
    fn charpoly_of_identity() {
        let p = pencil_charpoly(&ComplexMatrix::identity(3).unwrap());
        assert_eq!(p.coeffs(), &[c(-1.0), c(3.0), c(-3.0), c(1.0)]);
    }

    #[test]
    fn root_examples() {
        let r = poly_roots(&PolyCoeffs::from_real(&[1.0, 2.0, 1.0]).unwrap()).unwrap();
        assert_eq!(sorted_re(r), vec![-1.0, -1.0]);

        // ε(x−1)(x+1)² = ε(x³ + x² − x − 1)
        let e = 1e-3;
        let r = poly_roots(&PolyCoeffs::from_real(&[-e, -e, e, e]).unwrap()).unwrap();
        let got = sorted_re(r);
        for (g, w) in got.iter().zip([-1.0, -1.0, 1.0]) {
            assert!((g - w).abs() < 1e-7, "{got:?}");
        }

        let r = poly_roots(&PolyCoeffs::from_real(&[-1.0, 3.0, -3.0, 1.0]).unwrap()).unwrap();
        assert_eq!(r, vec![c(1.0); 3]);
    }

    #[test]
    fn degenerate_leading() {
        let p = PolyCoeffs::from_real(&[1.0, 1.0, 0.0]).unwrap();
        assert_eq!(poly_roots(&p), Err(Error::DegenerateLeadingCoefficient));
        let p = PolyCoeffs::from_real(&[0.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(poly_roots(&p), Err(Error::DegenerateLeadingCoefficient));
    }
}

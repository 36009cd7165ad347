//! Tangent space `V_A = {CᵀA + AC}` to a congruence class, codimensions, and
//! the miniversal deformation patterns of the canonical matrices.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::canonical::{canonical_matrix, CanonicalClass, ClassTag, FAMILY_SAMPLES};
use crate::error::{Error, Result};
use crate::matrixcore::{svd, ComplexMatrix, Tolerance};

/// Matrix of `C ↦ CᵀA + AC` in the basis `E_ij`, `(i, j)` lexicographic,
/// with images flattened row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentMap {
    n: usize,
    columns: Vec<Vec<Complex64>>,
}

impl TangentMap {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Column `k` is the image of `E_ij` with `k = i·n + j`.
    pub fn columns(&self) -> &[Vec<Complex64>] {
        &self.columns
    }

    /// Entry `(r, k)` of the n²×n² matrix.
    pub fn entry(&self, r: usize, k: usize) -> Complex64 {
        self.columns[k][r]
    }

    pub fn singular_values(&self) -> Vec<f64> {
        svd::jacobi_svd(&self.columns).singular_values
    }

    /// Numerical rank relative to the largest singular value.
    pub fn rank(&self, tol: &Tolerance) -> usize {
        let sv = self.singular_values();
        if sv[0] == 0.0 {
            return 0;
        }
        svd::count_above(&sv, tol.rank_tol * sv[0])
    }

    /// `M · vec(C)`, returned as a matrix.
    pub fn apply(&self, c: &ComplexMatrix) -> ComplexMatrix {
        let n = self.n;
        let mut out = ComplexMatrix::zeros(n).expect("n is 2 or 3");
        for (k, col) in self.columns.iter().enumerate() {
            let ck = c[(k / n, k % n)];
            for (r, &m) in col.iter().enumerate() {
                out[(r / n, r % n)] += m * ck;
            }
        }
        out
    }
}

pub fn tangent_map(a: &ComplexMatrix) -> TangentMap {
    let n = a.n();
    let mut columns = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            // (E_ijᵀA)_{r,c} = [r = j]·A_{i,c};  (A E_ij)_{r,c} = [c = j]·A_{r,i}
            let mut img = vec![Complex64::new(0.0, 0.0); n * n];
            for c in 0..n {
                img[j * n + c] += a[(i, c)];
            }
            for r in 0..n {
                img[r * n + j] += a[(r, i)];
            }
            columns.push(img);
        }
    }
    TangentMap { n, columns }
}

/// Codimension of the congruence class of `a`: `n² − rank(tangent_map(a))`.
pub fn codimension(a: &ComplexMatrix, tol: &Tolerance) -> usize {
    a.n() * a.n() - tangent_map(a).rank(tol)
}

/// Star positions (0-indexed) of a miniversal deformation of a canonical matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeformationPattern {
    pub base: CanonicalClass,
    mask: Vec<Vec<bool>>,
}

impl DeformationPattern {
    /// Pattern with a caller-supplied mask (used to test transversality of other layouts).
    pub fn with_mask(base: CanonicalClass, mask: Vec<Vec<bool>>) -> Result<Self> {
        let n = base.n();
        if mask.len() != n || mask.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidDimension(mask.len()));
        }
        Ok(Self { base, mask })
    }

    pub fn n(&self) -> usize {
        self.mask.len()
    }

    pub fn mask(&self) -> &[Vec<bool>] {
        &self.mask
    }

    pub fn is_star(&self, i: usize, j: usize) -> bool {
        self.mask[i][j]
    }

    /// Star positions in lexicographic order, 0-indexed.
    pub fn stars(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| self.mask[i][j]).collect()
    }

    pub fn star_count(&self) -> usize {
        self.stars().len()
    }

    /// `A + D(values)`, the values placed at the stars in lexicographic order.
    pub fn deform(&self, values: &[Complex64]) -> Result<ComplexMatrix> {
        let stars = self.stars();
        if values.len() != stars.len() {
            return Err(Error::Parse(format!("expected {} star values, got {}", stars.len(), values.len())));
        }
        let mut m = canonical_matrix(&self.base);
        for (&(i, j), &v) in stars.iter().zip(values) {
            m[(i, j)] += v;
        }
        Ok(m)
    }

    /// Rows of `*` and `·`, e.g. `* ·\n* *`.
    pub fn render(&self) -> String {
        self.mask
            .iter()
            .map(|r| r.iter().map(|&s| if s { "*" } else { "." }).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

// 1-indexed (row, col) star lists
fn star_table(tag: ClassTag) -> &'static [(usize, usize)] {
    use ClassTag::*;
    match tag {
        I => &[(1, 1), (1, 2), (2, 1), (2, 2)],
        II => &[(1, 1), (2, 1), (2, 2)],
        III => &[(2, 1), (2, 2)],
        IV => &[(1, 1)],
        V => &[(2, 1)],
        VI => &[(2, 1)],
        T1 => &[(1, 1), (1, 2), (1, 3), (2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)],
        T2 => &[(1, 1), (2, 1), (2, 2), (3, 1), (3, 2), (3, 3)],
        T3 => &[(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3)],
        T4 => &[(1, 1), (3, 1), (3, 2), (3, 3)],
        T5 => &[(2, 1), (3, 1), (3, 2), (3, 3)],
        T6 => &[(2, 1), (3, 1), (3, 2), (3, 3)],
        T7 => &[(1, 1), (2, 1), (2, 2)],
        T8 => &[(2, 1), (3, 1), (3, 2)],
        T9 => &[(3, 1), (3, 3)],
        T10 => &[(1, 1)],
        T11 => &[(2, 1)],
        T12 => &[(2, 1)],
    }
}

// At λ = 0 the (2,1) entry of 5_λ lies in the tangent space (the image of
// CᵀA + AC for A = E_12 ⊕ 0 is spanned by column 2 and row 1), so the star
// moves to (2,3).
const T5_ZERO: [(usize, usize); 4] = [(2, 1), (2, 3), (3, 1), (3, 3)];

/// Star pattern of the miniversal deformation of the canonical matrix of `c`.
pub fn miniversal_pattern(c: &CanonicalClass) -> DeformationPattern {
    let n = c.n();
    let mut mask = vec![vec![false; n]; n];
    let table = match (c.tag(), c.param()) {
        (ClassTag::T5, Some(l)) if l.norm() == 0.0 => &T5_ZERO[..],
        (tag, _) => star_table(tag),
    };
    for &(i, j) in table {
        mask[i - 1][j - 1] = true;
    }
    DeformationPattern { base: *c, mask }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransversalityReport {
    pub tangent_rank: usize,
    pub star_count: usize,
    pub stacked_rank: usize,
    /// `V_A ⊕ D(ℂ) = ℂ^{n×n}`: spanning and dimensions add up.
    pub direct_sum: bool,
}

pub fn transversality_report(p: &DeformationPattern, tol: &Tolerance) -> TransversalityReport {
    let n = p.n();
    let tm = tangent_map(&canonical_matrix(&p.base));
    let tangent_rank = tm.rank(tol);
    let mut cols = tm.columns().to_vec();
    for (i, j) in p.stars() {
        let mut e = vec![Complex64::new(0.0, 0.0); n * n];
        e[i * n + j] = Complex64::new(1.0, 0.0);
        cols.push(e);
    }
    let sv = svd::jacobi_svd(&cols).singular_values;
    let stacked_rank = svd::count_above(&sv, tol.rank_tol * sv[0]);
    let star_count = p.star_count();
    TransversalityReport {
        tangent_rank,
        star_count,
        stacked_rank,
        direct_sum: stacked_rank == n * n && tangent_rank + star_count == n * n,
    }
}

pub fn verify_transversality(c: &CanonicalClass, tol: &Tolerance) -> bool {
    transversality_report(&miniversal_pattern(c), tol).direct_sum
}

/// Every pattern of dimension `n`, families at the sample parameters.
pub fn all_patterns(n: usize) -> Result<Vec<DeformationPattern>> {
    Ok(CanonicalClass::catalog(n)?.iter().map(miniversal_pattern).collect())
}

/// Sample parameters used when checking families.
pub fn family_samples() -> &'static [Complex64] {
    &FAMILY_SAMPLES
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(tag: ClassTag) -> CanonicalClass {
        CanonicalClass::new(tag).unwrap()
    }

    #[test]
    fn tangent_of_zero_and_identity() {
        let tol = Tolerance::default();
        let z = tangent_map(&ComplexMatrix::zeros(2).unwrap());
        assert!(z.columns().iter().flatten().all(|c| c.norm() == 0.0));
        assert_eq!(z.rank(&tol), 0);
        assert_eq!(tangent_map(&ComplexMatrix::identity(2).unwrap()).rank(&tol), 3);
    }

    #[test]
    fn tangent_map_matches_definition() {
        let a = ComplexMatrix::from_rows(&[
            vec![Complex64::new(1.0, 2.0), Complex64::new(0.0, -1.0), Complex64::new(3.0, 0.0)],
            vec![Complex64::new(0.5, 0.0), Complex64::new(2.0, 1.0), Complex64::new(0.0, 0.0)],
            vec![Complex64::new(-1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, -1.0)],
        ])
        .unwrap();
        let c = ComplexMatrix::from_real_rows(&[[0.3, -1.0, 2.0], [1.0, 0.0, 0.5], [0.0, 4.0, -2.0]]).unwrap();
        let want = c.transpose() * a + a * c;
        let got = tangent_map(&a).apply(&c);
        assert!((got - want).frobenius_norm() < 1e-13);
    }

    #[test]
    fn codimension_examples() {
        let tol = Tolerance::default();
        assert_eq!(codimension(&canonical_matrix(&class(ClassTag::II)), &tol), 3);
        assert_eq!(tangent_map(&canonical_matrix(&class(ClassTag::II))).rank(&tol), 1);
        assert_eq!(codimension(&canonical_matrix(&class(ClassTag::T1)), &tol), 9);
        assert_eq!(codimension(&canonical_matrix(&class(ClassTag::T12)), &tol), 1);
    }

    #[test]
    fn pattern_examples() {
        let p = miniversal_pattern(&class(ClassTag::II));
        assert_eq!(p.stars(), vec![(0, 0), (1, 0), (1, 1)]);
        assert_eq!(miniversal_pattern(&class(ClassTag::T9)).stars(), vec![(2, 0), (2, 2)]);
        assert_eq!(miniversal_pattern(&class(ClassTag::T8)).stars(), vec![(1, 0), (2, 0), (2, 1)]);
        assert_eq!(p.render(), "* .\n* *");
    }

    #[test]
    fn transversality_examples() {
        let tol = Tolerance::default();
        assert!(verify_transversality(&class(ClassTag::II), &tol));
        let t5 = CanonicalClass::family(ClassTag::T5, Complex64::new(2.0, 0.0), &tol).unwrap();
        assert!(verify_transversality(&t5, &tol));
        let reduced =
            DeformationPattern::with_mask(class(ClassTag::II), vec![vec![true, false], vec![false, false]]).unwrap();
        assert!(!transversality_report(&reduced, &tol).direct_sum);
    }

    #[test]
    fn family_five_at_zero_needs_its_own_mask() {
        let tol = Tolerance::default();
        let c = CanonicalClass::family(ClassTag::T5, Complex64::new(0.0, 0.0), &tol).unwrap();
        let generic: Vec<Vec<bool>> = vec![
            vec![false, false, false],
            vec![true, false, false],
            vec![true, true, true],
        ];
        let r = transversality_report(&DeformationPattern::with_mask(c, generic).unwrap(), &tol);
        assert_eq!((r.tangent_rank, r.stacked_rank, r.direct_sum), (5, 8, false));
        assert_eq!(miniversal_pattern(&c).stars(), vec![(1, 0), (1, 2), (2, 0), (2, 2)]);
        assert!(verify_transversality(&c, &tol));
    }

    #[test]
    fn deform_places_values() {
        let p = miniversal_pattern(&class(ClassTag::T9));
        let e = Complex64::new(1e-3, 0.0);
        let m = p.deform(&[e, e]).unwrap();
        assert_eq!(m[(2, 0)], e);
        assert_eq!(m[(2, 2)], e);
        assert_eq!(m[(0, 1)], Complex64::new(1.0, 0.0));
        assert!(p.deform(&[e]).is_err());
    }

    #[test]
    fn every_pattern_counts_the_codimension() {
        let tol = Tolerance::default();
        for n in [2, 3] {
            for p in all_patterns(n).unwrap() {
                let a = canonical_matrix(&p.base);
                assert_eq!(codimension(&a, &tol), p.base.codim(), "{}", p.base);
                assert_eq!(p.star_count(), p.base.codim(), "{}", p.base);
                assert!(verify_transversality(&p.base, &tol), "{}", p.base);
            }
        }
    }
}

// Independent checks against nalgebra's SVD and Schur decompositions.

use congrua::deformation::{codimension, tangent_map};
use congrua::matrixcore::{cosquare_structure, rank_tol, singular_values};
use congrua::perturbation::{random_congruence, RngConfig};
use congrua::{canonical_matrix, CanonicalClass, Complex64, ComplexMatrix, Tolerance};
use nalgebra::DMatrix;

fn to_na(a: &ComplexMatrix) -> DMatrix<Complex64> {
    let n = a.n();
    DMatrix::from_fn(n, n, |i, j| a[(i, j)])
}

fn na_rank(m: &DMatrix<Complex64>, rel: f64) -> usize {
    let sv = m.clone().svd(false, false).singular_values;
    let smax = sv.max();
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel * smax).count()
}

/// Tangent space of congruence at `a`, assembled directly: columns vec(EᵀA + AE) over the unit matrices E.
fn na_tangent(a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = a.nrows();
    let mut t = DMatrix::<Complex64>::zeros(n * n, n * n);
    for k in 0..n * n {
        let mut e = DMatrix::<Complex64>::zeros(n, n);
        e[(k / n, k % n)] = Complex64::new(1.0, 0.0);
        let v = e.transpose() * a + a * e;
        for r in 0..n * n {
            t[(r, k)] = v[(r / n, r % n)];
        }
    }
    t
}

fn members() -> Vec<(CanonicalClass, ComplexMatrix)> {
    let rng = RngConfig::new(11, 10.0).unwrap();
    let mut out = Vec::new();
    for n in [2, 3] {
        for (i, c) in CanonicalClass::catalog(n).unwrap().into_iter().enumerate() {
            let a = canonical_matrix(&c);
            out.push((c, a));
            let s = random_congruence(n, 10.0, &mut rng.stream(100 * n as u64 + i as u64));
            out.push((c, a.congruence(&s)));
        }
    }
    out
}

#[test]
fn singular_values_match_nalgebra() {
    for (c, a) in members() {
        let mut want: Vec<f64> = to_na(&a).svd(false, false).singular_values.iter().copied().collect();
        want.sort_by(|x, y| y.partial_cmp(x).unwrap());
        let got = singular_values(&a);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() <= 1e-12 * want[0].max(1.0), "{c}: {got:?} vs {want:?}");
        }
    }
}

#[test]
fn ranks_match_nalgebra() {
    let tol = Tolerance::default();
    for (c, a) in members() {
        assert_eq!(rank_tol(&a, &tol), na_rank(&to_na(&a), tol.rank_tol), "{c}");
    }
}

#[test]
fn tangent_map_matches_direct_assembly() {
    for (c, a) in members() {
        let t = tangent_map(&a);
        let want = na_tangent(&to_na(&a));
        let n2 = a.n() * a.n();
        for r in 0..n2 {
            for k in 0..n2 {
                assert!((t.entry(r, k) - want[(r, k)]).norm() < 1e-12, "{c} ({r},{k})");
            }
        }
    }
}

#[test]
fn codimension_matches_nalgebra_rank() {
    let tol = Tolerance::default();
    for (c, a) in members() {
        let n2 = a.n() * a.n();
        let oracle = n2 - na_rank(&na_tangent(&to_na(&a)), tol.rank_tol);
        assert_eq!(codimension(&a, &tol), oracle, "{c}");
        assert_eq!(oracle, c.codim(), "{c}");
    }
}

#[test]
fn cosquare_spectrum_matches_schur() {
    let tol = Tolerance::default();
    for (c, a) in members() {
        if a.det().norm() < 1e-9 {
            continue;
        }
        let na = to_na(&a);
        let q = na.transpose().try_inverse().unwrap() * &na;
        let want: Vec<Complex64> = q.schur().eigenvalues().unwrap().iter().copied().collect();
        let got = cosquare_structure(&a, &tol).unwrap().spectrum;
        // Jordan blocks split like a root of the rounding error, so compare loosely.
        for w in &want {
            let d = got.iter().map(|g| (g - w).norm()).fold(f64::INFINITY, f64::min);
            assert!(d < 1e-4, "{c}: {got:?} vs {want:?}");
        }
    }
}

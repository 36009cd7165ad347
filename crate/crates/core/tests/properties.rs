use congrua::deformation::codimension;
use congrua::matrixcore::{cosquare_structure, pencil_charpoly, rank_tol};
use congrua::perturbation::{random_congruence, RngConfig};
use congrua::{canonical_matrix, classify, CanonicalClass, Complex64, ComplexMatrix, Tolerance};
use proptest::prelude::*;

fn matrix(n: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), n * n).prop_map(move |v| {
        let rows: Vec<Vec<Complex64>> =
            v.chunks(n).map(|r| r.iter().map(|&(a, b)| Complex64::new(a, b)).collect()).collect();
        ComplexMatrix::from_rows(&rows).unwrap()
    })
}

fn any_matrix() -> impl Strategy<Value = ComplexMatrix> {
    prop_oneof![matrix(2), matrix(3)]
}

fn catalog_entry() -> impl Strategy<Value = CanonicalClass> {
    let all: Vec<CanonicalClass> =
        [2, 3].iter().flat_map(|&n| CanonicalClass::catalog(n).unwrap()).collect();
    prop::sample::select(all)
}

fn congruence(n: usize, seed: u64) -> ComplexMatrix {
    random_congruence(n, 10.0, &mut RngConfig::new(seed, 10.0).unwrap().stream(0))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn symmetric_and_skew_parts(a in any_matrix()) {
        let (s, k) = a.sym_skew_parts();
        prop_assert_eq!(s.transpose(), s);
        prop_assert_eq!(k.transpose(), -k);
        prop_assert!((s + k - a).max_abs() <= 4.0 * f64::EPSILON * a.max_abs().max(1.0));
    }

    #[test]
    fn rank_is_a_congruence_invariant(c in catalog_entry(), seed in any::<u64>()) {
        let tol = Tolerance::default();
        let a = canonical_matrix(&c);
        let s = congruence(c.n(), seed);
        prop_assert_eq!(rank_tol(&a.congruence(&s), &tol), rank_tol(&a, &tol));
    }

    #[test]
    fn pencil_polynomial_scales_by_det_squared(a in any_matrix(), seed in any::<u64>()) {
        let s = congruence(a.n(), seed);
        let d2 = s.det() * s.det();
        let p = pencil_charpoly(&a);
        let q = pencil_charpoly(&a.congruence(&s));
        let scale = p.scale_max().max(1.0) * d2.norm().max(1.0);
        for k in 0..=a.n() {
            prop_assert!((q.coeff(k) - d2 * p.coeff(k)).norm() <= 1e-10 * scale, "x^{}", k);
        }
    }

    #[test]
    fn cosquare_spectrum_multiplies_to_one(a in any_matrix()) {
        let tol = Tolerance::default();
        prop_assume!(a.det().norm() > 1e-3);
        let cs = cosquare_structure(&a, &tol).unwrap();
        let prod: Complex64 = cs.spectrum.iter().product();
        prop_assert!((prod - 1.0).norm() < 1e-6, "{:?}", cs.spectrum);
    }

    #[test]
    fn codimension_is_a_congruence_invariant(c in catalog_entry(), seed in any::<u64>()) {
        let tol = Tolerance::default();
        let a = canonical_matrix(&c).congruence(&congruence(c.n(), seed));
        prop_assert_eq!(codimension(&a, &tol), c.codim());
    }

    #[test]
    fn classification_is_a_congruence_invariant(c in catalog_entry(), seed in any::<u64>()) {
        let tol = Tolerance::default();
        let a = canonical_matrix(&c).congruence(&congruence(c.n(), seed));
        let got = classify(&a, &tol).unwrap().class;
        prop_assert!(got.matches(&c, 1e-6), "{} classified as {}", c, got);
    }
}

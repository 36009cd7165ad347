// Star patterns of the miniversal deformations and their transversality.

use congrua::canonical::ClassTag;
use congrua::deformation::{miniversal_pattern, transversality_report};
use congrua::{CanonicalClass, Complex64, Tolerance};

pub fn run_example() -> Vec<String> {
    let tol = Tolerance::default();
    let mut out = Vec::new();
    for n in [2, 3] {
        for &t in ClassTag::all(n).unwrap() {
            let c = if t.is_family() {
                CanonicalClass::family(t, Complex64::new(2.0, 0.0), &tol).unwrap()
            } else {
                CanonicalClass::new(t).unwrap()
            };
            let p = miniversal_pattern(&c);
            let r = transversality_report(&p, &tol);
            out.push(format!("{c}: {} stars, transversal = {}\n{}", p.star_count(), r.direct_sum, p.render()));
        }
    }
    // At lambda = 0 the 5_lambda family needs a different mask.
    let zero = CanonicalClass::family(ClassTag::T5, Complex64::new(0.0, 0.0), &tol).unwrap();
    out.push(format!("{zero}:\n{}", miniversal_pattern(&zero).render()));
    out
}

fn main() {
    for s in run_example() {
        println!("{s}\n");
    }
}

// Classify a few matrices up to congruence and print the diagnostics.

use congrua::{classify, ComplexMatrix, Complex64, Tolerance};

pub fn run_example() -> Vec<String> {
    let tol = Tolerance::default();
    let c = |re: f64, im: f64| Complex64::new(re, im);
    let inputs = [
        ComplexMatrix::from_real_rows(&[[0.0, 1.0], [-1.0, 0.0]]).unwrap(),
        ComplexMatrix::from_real_rows(&[[1.0, 2.0], [0.0, 1.0]]).unwrap(),
        ComplexMatrix::from_rows(&[[c(0.0, 0.0), c(1.0, 0.0)], [c(0.0, 2.0), c(0.0, 0.0)]]).unwrap(),
        ComplexMatrix::from_real_rows(&[[0.0, 1.0, 0.0], [0.0, 0.0, 0.0], [0.0, 0.0, 1.0]]).unwrap(),
        ComplexMatrix::from_real_rows(&[[2.0, 1.0, 0.0], [0.0, 3.0, 1.0], [1.0, 0.0, 5.0]]).unwrap(),
    ];
    let mut lines = Vec::new();
    for a in &inputs {
        let r = classify(a, &tol).unwrap();
        lines.push(format!("{a} -> {} (codim {}, rank {})", r.class, r.class.codim(), r.diagnostics.rank));
    }
    lines
}

fn main() {
    for l in run_example() {
        println!("{l}");
    }
}

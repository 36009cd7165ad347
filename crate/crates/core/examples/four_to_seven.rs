// A one-parameter family through class 4 whose other members all lie in class 7,
// so class 4 sits in the closure of class 7.

use congrua::{classify, ComplexMatrix, Tolerance};

pub fn a_gamma(g: f64) -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[[0.0, -1.0, 0.0], [1.0, 1.0, 0.0], [0.0, g, g * g / 4.0]]).unwrap()
}

pub fn run_example() -> Vec<(f64, String)> {
    let tol = Tolerance::default();
    [0.0, 1e-3, 1e-2, 1e-1, 1.0]
        .into_iter()
        .map(|g| (g, classify(&a_gamma(g), &tol).unwrap().class.to_string()))
        .collect()
}

fn main() {
    for (g, c) in run_example() {
        println!("gamma = {g:<6} -> {c}");
    }
}

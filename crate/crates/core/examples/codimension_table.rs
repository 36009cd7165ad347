// Codimension of every class, computed from the tangent map of its canonical matrix.

use congrua::deformation::codimension;
use congrua::{canonical_matrix, CanonicalClass, Tolerance};

pub fn run_example() -> Vec<(String, usize, usize)> {
    let tol = Tolerance::default();
    let mut rows = Vec::new();
    for n in [2, 3] {
        for c in CanonicalClass::catalog(n).unwrap() {
            rows.push((c.to_string(), c.codim(), codimension(&canonical_matrix(&c), &tol)));
        }
    }
    rows
}

fn main() {
    println!("{:<16} {:>5} {:>9}", "class", "table", "computed");
    for (c, want, got) in run_example() {
        println!("{c:<16} {want:>5} {got:>9}");
    }
}

// Explicit perturbations realising each arrow of the closure graphs.

use congrua::perturbation::verify_witnesses;
use congrua::Tolerance;

pub fn run_example() -> (usize, Vec<String>) {
    let checks = verify_witnesses(&[1e-2, 1e-3, 1e-4], &Tolerance::default()).unwrap();
    let failed = checks
        .iter()
        .filter(|c| !c.passed())
        .map(|c| format!("{} at eps={:e} observed {}", c.label, c.eps, c.observed))
        .collect();
    (checks.len(), failed)
}

fn main() {
    let (total, failed) = run_example();
    println!("{total} witness checks, {} failed", failed.len());
    for f in failed {
        println!("  {f}");
    }
}

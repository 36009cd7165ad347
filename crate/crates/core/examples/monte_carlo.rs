// Random perturbations of random class members land in the up-set.

use congrua::closuregraph::Level;
use congrua::perturbation::{drift_law, genericity, monte_carlo_verify, RngConfig};
use congrua::Tolerance;

pub fn run_example(trials: usize) -> Vec<String> {
    let tol = Tolerance::default();
    let rng = RngConfig::default();
    let mut out = Vec::new();
    for n in [2, 3] {
        let r = monte_carlo_verify(n, Level::Bundles, trials, 1e-3, &rng, &tol).unwrap();
        out.push(format!(
            "n={n}: {} trials, {:.2}% clean, {} violations",
            r.total_trials(),
            100.0 * r.clean_fraction(),
            r.violations.len()
        ));
        let g = genericity(n, trials, &rng, &tol).unwrap();
        out.push(format!("n={n}: generic fraction {:.3}", g.generic_fraction));
    }
    let d = drift_law(trials, 1e-3, &rng, &tol).unwrap();
    out.push(format!("drift from ii: max |lambda+1| = {:.4} (bound {})", d.max_deviation, d.bound));
    out
}

fn main() {
    for l in run_example(1000) {
        println!("{l}");
    }
}

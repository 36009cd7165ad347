// Evidence against arrows that are absent from the closure graph.

use congrua::closuregraph::{any_violated, necessary_conditions, CheckStatus, REFUTED_PAIRS};
use congrua::perturbation::{nonedge_probe, RngConfig};
use congrua::{CanonicalClass, Complex64, Tolerance};

fn instance(t: congrua::ClassTag, l: f64, tol: &Tolerance) -> CanonicalClass {
    if t.is_family() {
        CanonicalClass::family(t, Complex64::new(l, 0.0), tol).unwrap()
    } else {
        CanonicalClass::new(t).unwrap()
    }
}

pub fn run_example(trials: usize) -> Vec<(String, bool, usize)> {
    let tol = Tolerance::default();
    let rng = RngConfig::default();
    REFUTED_PAIRS
        .iter()
        .map(|&(v, w)| {
            let (vc, wc) = (instance(v, 2.0, &tol), instance(w, 3.0, &tol));
            let checks = necessary_conditions(&vc, &wc, &tol).unwrap();
            let probe = nonedge_probe(&vc, &wc, trials, 1e-3, &rng, &tol).unwrap();
            let why: Vec<String> =
                checks.iter().filter(|c| c.status == CheckStatus::Violated).map(|c| c.detail.clone()).collect();
            (format!("{} -/-> {}: {}", v.label(), w.label(), why.join("; ")), any_violated(&checks), probe.hits)
        })
        .collect()
}

fn main() {
    for (line, refuted, hits) in run_example(1000) {
        println!("{line} [refuted: {refuted}, probe hits: {hits}]");
    }
}

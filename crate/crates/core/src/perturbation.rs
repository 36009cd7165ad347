//! Perturbation witnesses for the arrows of the closure graphs, random
//! class members and perturbations, and the Monte-Carlo checks that confront
//! the classifier with the graphs.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canonical::{
    bundle_of, bundle_of_tag, canonical_matrix, classify, Bundle, CanonicalClass, ClassTag, FAMILY_SAMPLES,
};
use crate::closuregraph::{bundle_graph, class_graph, reach_set, Direction, Level};
use crate::deformation::miniversal_pattern;
use crate::error::{Error, Result};
use crate::matrixcore::{singular_values, ComplexMatrix, Tolerance};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// Seed and the condition bound for random congruences.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RngConfig {
    pub seed: u64,
    pub condition_bound: f64,
}

impl Default for RngConfig {
    fn default() -> Self {
        Self { seed: 42, condition_bound: 10.0 }
    }
}

impl RngConfig {
    pub fn new(seed: u64, condition_bound: f64) -> Result<Self> {
        if condition_bound.is_nan() || condition_bound < 1.0 {
            return Err(Error::Parse(format!("condition bound {condition_bound} must be ≥ 1")));
        }
        Ok(Self { seed, condition_bound })
    }

    /// Independent stream for trial `index`; the same (seed, index) always
    /// gives the same numbers regardless of scheduling.
    pub fn stream(&self, index: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index);
        rng
    }
}

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Matrix with independent standard complex-Gaussian entries.
pub fn gaussian_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n).expect("n is 2 or 3");
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = gaussian(rng);
        }
    }
    m
}

/// Random `S` with `σ_max = 1` and `σ_max/σ_min ≤ condition_bound`.
pub fn random_congruence<R: Rng + ?Sized>(n: usize, condition_bound: f64, rng: &mut R) -> ComplexMatrix {
    loop {
        let s = gaussian_matrix(n, rng);
        let sv = singular_values(&s);
        let smin = sv[n - 1];
        if smin > 0.0 && sv[0] / smin <= condition_bound {
            return s.scale(c(1.0 / sv[0]));
        }
    }
}

/// `SᵀA_cS` for a random well-conditioned `S`, rescaled (itself a congruence
/// by a multiple of the identity) to the Frobenius norm of `A_c`.
pub fn sample_class_member<R: Rng + ?Sized>(class: &CanonicalClass, condition_bound: f64, rng: &mut R) -> ComplexMatrix {
    sample_member_with_frame(class, condition_bound, rng).0
}

/// Like [`sample_class_member`], also returning the transform `T` with
/// member `= TᵀA_cT`.
pub fn sample_member_with_frame<R: Rng + ?Sized>(
    class: &CanonicalClass,
    condition_bound: f64,
    rng: &mut R,
) -> (ComplexMatrix, ComplexMatrix) {
    let a = canonical_matrix(class);
    let s = random_congruence(a.n(), condition_bound, rng);
    let m = a.congruence(&s);
    let (fa, fm) = (a.frobenius_norm(), m.frobenius_norm());
    if fa == 0.0 || fm == 0.0 {
        return (m, s);
    }
    let t = s.scale(c((fa / fm).sqrt()));
    (a.congruence(&t), t)
}

/// `A + E` with complex-Gaussian `E` scaled to `‖E‖_F = ε`.
pub fn random_perturbation<R: Rng + ?Sized>(a: &ComplexMatrix, eps: f64, rng: &mut R) -> ComplexMatrix {
    if eps == 0.0 {
        return *a;
    }
    let e = gaussian_matrix(a.n(), rng);
    *a + e.scale(c(eps / e.frobenius_norm()))
}

/// Allowed parameter drift of family observations at perturbation size `ε`.
/// A calibration constant (square-root splitting of a double eigenvalue),
/// equal to 0.1 at `ε = 10⁻³`.
pub fn drift_bound(eps: f64) -> f64 {
    (10.0 * eps).sqrt().max(1e-2)
}

/// Distance between parameters of the families, where `λ` and `1/λ` name
/// the same class.
pub fn param_distance(p: Complex64, q: Complex64) -> f64 {
    let reps = |z: Complex64| -> Vec<Complex64> {
        if z.norm() == 0.0 {
            vec![z]
        } else {
            vec![z, z.inv()]
        }
    };
    let mut best = f64::INFINITY;
    for a in reps(p) {
        for b in reps(q) {
            best = best.min((a - b).norm());
        }
    }
    best
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum WitnessTarget {
    Class(CanonicalClass),
    Bundle(Bundle),
}

impl fmt::Display for WitnessTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WitnessTarget::Class(c) => write!(f, "{c}"),
            WitnessTarget::Bundle(b) => write!(f, "bundle {b}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Form {
    IToII,
    IToIII,
    IIToIV,
    IIIToIV,
    IIIToVI,
    IIIToV(Complex64),
    T2ToT7,
    T4ToT9,
    T5ToT9(Complex64),
    T6ToT9,
    T8ToT12,
    T9ToT10,
    T9ToT11(Complex64),
    T9ToT12,
    IVToVVi,
    T4ToB5,
    T10ToB11,
    T6ToB5,
    Padded(&'static Form, f64),
    PaddedV(Complex64, f64),
}

/// A matrix path `ε ↦ A(ε)` from a member of the source class (`ε = 0`)
/// into the target for every small `ε ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Witness {
    pub source: CanonicalClass,
    pub target: WitnessTarget,
    form: Form,
}

impl Witness {
    /// `A(ε)` for `0 < ε ≤ 0.1`.
    pub fn matrix(&self, eps: f64) -> Result<ComplexMatrix> {
        if !(eps > 0.0 && eps <= 0.1) {
            return Err(Error::InvalidEpsilon(eps));
        }
        Ok(form_matrix(self.form, eps))
    }

    /// `A(0)`, a member of the source class.
    pub fn origin(&self) -> ComplexMatrix {
        form_matrix(self.form, 0.0)
    }

    pub fn label(&self) -> String {
        format!("{} -> {}", self.source, self.target)
    }

    pub fn is_bundle_witness(&self) -> bool {
        matches!(self.target, WitnessTarget::Bundle(_))
    }

    /// Classifies `A(ε)` and `A(0)` and compares them with target and source.
    pub fn check(&self, eps: f64, tol: &Tolerance) -> Result<WitnessCheck> {
        let a = self.matrix(eps)?;
        let observed = classify(&a, tol).map(|r| r.class);
        let origin = classify(&self.origin(), tol).map(|r| r.class);
        let reached = match (&observed, self.target) {
            (Ok(o), WitnessTarget::Class(t)) => o.matches(&t, 1e-6),
            (Ok(o), WitnessTarget::Bundle(b)) => bundle_of(o) == b,
            (Err(_), _) => false,
        };
        let starts = matches!(&origin, Ok(o) if o.matches(&self.source, 1e-6));
        Ok(WitnessCheck {
            label: self.label(),
            eps,
            observed: observed.map(|o| o.to_string()).unwrap_or_else(|e| format!("error: {e}")),
            reached,
            starts_in_source: starts,
            distance: (a - self.origin()).frobenius_norm(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessCheck {
    pub label: String,
    pub eps: f64,
    pub observed: String,
    pub reached: bool,
    pub starts_in_source: bool,
    /// `‖A(ε) − A(0)‖_F`.
    pub distance: f64,
}

impl WitnessCheck {
    pub fn passed(&self) -> bool {
        self.reached && self.starts_in_source
    }
}

fn m2(rows: [[Complex64; 2]; 2]) -> ComplexMatrix {
    ComplexMatrix::from_rows(&rows).expect("2x2")
}

fn m3(rows: [[Complex64; 3]; 3]) -> ComplexMatrix {
    ComplexMatrix::from_rows(&rows).expect("3x3")
}

fn form_matrix(form: Form, e: f64) -> ComplexMatrix {
    let z = c(0.0);
    let one = c(1.0);
    let ce = c(e);
    match form {
        Form::IToII => m2([[z, ce], [-ce, z]]),
        Form::IToIII => m2([[ce, z], [z, z]]),
        Form::IIToIV => m2([[z, one], [-one, ce]]),
        Form::IIIToIV => m2([[one, ce], [-ce, z]]),
        Form::IIIToVI => m2([[one, z], [z, ce]]),
        Form::IIIToV(l) if l.norm() == 0.0 => m2([[one, ce], [z, z]]),
        // ε²/δ − 2 = −λ − 1/λ with δ = ε
        Form::IIIToV(l) => m2([[one, z], [(ce * (c(2.0) - l - l.inv())).sqrt(), ce]]),
        Form::T2ToT7 => m3([[z, one, z], [-one, z, z], [z, z, ce]]),
        Form::T4ToT9 => m3([[z, -one, z], [one, one, ce], [z, z, z]]),
        Form::T5ToT9(l) => m3([[z, one, z], [l, z, ce], [z, z, z]]),
        Form::T6ToT9 => m3([[one, z, Complex64::new(0.0, -e)], [z, one, ce], [z, z, z]]),
        Form::T8ToT12 => m3([[z, z, one], [z, -one, -ce], [one, ce, z]]),
        Form::T9ToT10 => m3([[z, one, z], [z, z, one], [ce, z, ce]]),
        Form::T9ToT11(m) if m.norm() == 0.0 => m3([[z, one, z], [z, z, one], [z, z, ce]]),
        Form::T9ToT11(m) => m3([[z, one, z], [z, z, one], [ce, z, -ce * (one + m + m.inv())]]),
        Form::T9ToT12 => m3([[z, one, z], [z, z, one], [ce, z, c(-3.0 * e)]]),
        Form::IVToVVi => m2([[z, c(-1.0 + e)], [one, one]]),
        Form::T4ToB5 => m3([[z, c(-1.0 + e), z], [one, one, z], [z, z, z]]),
        Form::T10ToB11 => m3([[z, c(-1.0 + e), z], [one, one, z], [z, z, one]]),
        Form::T6ToB5 => m3([[one, z, z], [ce, one, z], [z, z, z]]),
        Form::Padded(inner, pad) => form_matrix(*inner, e).direct_sum_scalar(c(pad)).expect("2x2 base"),
        Form::PaddedV(l, pad) => form_matrix(Form::IIIToV(l), e).direct_sum_scalar(c(pad)).expect("2x2 base"),
    }
}

fn plain(t: ClassTag) -> CanonicalClass {
    CanonicalClass::new(t).expect("plain tag")
}

fn fam(t: ClassTag, l: Complex64) -> CanonicalClass {
    CanonicalClass::family(t, l, &Tolerance::default()).expect("sample parameter is allowed")
}

/// All witnesses: every arrow of both class graphs (families at the sample
/// parameters) and the bundle-only arrows.
pub fn witness_catalog() -> Vec<Witness> {
    use ClassTag::*;
    let cls = |s, t, form| Witness { source: plain(s), target: WitnessTarget::Class(plain(t)), form };
    let mut out = vec![
        cls(I, II, Form::IToII),
        cls(I, III, Form::IToIII),
        cls(II, IV, Form::IIToIV),
        cls(III, IV, Form::IIIToIV),
        cls(III, VI, Form::IIIToVI),
    ];
    for &l in &FAMILY_SAMPLES {
        out.push(Witness { source: plain(III), target: WitnessTarget::Class(fam(V, l)), form: Form::IIIToV(l) });
    }
    out.extend([
        cls(T1, T2, Form::Padded(&Form::IToII, 0.0)),
        cls(T1, T3, Form::Padded(&Form::IToIII, 0.0)),
        cls(T2, T4, Form::Padded(&Form::IIToIV, 0.0)),
        cls(T2, T7, Form::T2ToT7),
        cls(T3, T4, Form::Padded(&Form::IIIToIV, 0.0)),
    ]);
    for &l in &FAMILY_SAMPLES {
        out.push(Witness { source: plain(T3), target: WitnessTarget::Class(fam(T5, l)), form: Form::PaddedV(l, 0.0) });
    }
    out.extend([
        cls(T3, T6, Form::Padded(&Form::IIIToVI, 0.0)),
        cls(T3, T7, Form::Padded(&Form::IToII, 1.0)),
        cls(T4, T9, Form::T4ToT9),
    ]);
    for &l in &FAMILY_SAMPLES {
        let source = fam(T5, l);
        // the matrix uses the normalized parameter, which is congruent to the sampled one
        let p = source.param().expect("family");
        out.push(Witness { source, target: WitnessTarget::Class(plain(T9)), form: Form::T5ToT9(p) });
    }
    out.extend([
        cls(T6, T8, Form::Padded(&Form::IIIToVI, 1.0)),
        cls(T6, T9, Form::T6ToT9),
        cls(T7, T10, Form::Padded(&Form::IIToIV, 1.0)),
        cls(T8, T12, Form::T8ToT12),
        cls(T9, T10, Form::T9ToT10),
    ]);
    for &m in &FAMILY_SAMPLES {
        out.push(Witness { source: plain(T9), target: WitnessTarget::Class(fam(T11, m)), form: Form::T9ToT11(m) });
    }
    out.push(cls(T9, T12, Form::T9ToT12));
    let bnd = |s, b, form| Witness { source: plain(s), target: WitnessTarget::Bundle(b), form };
    out.extend([
        bnd(IV, Bundle::VVi, Form::IVToVVi),
        bnd(T4, Bundle::B(5), Form::T4ToB5),
        bnd(T6, Bundle::B(5), Form::T6ToB5),
        bnd(T10, Bundle::B(11), Form::T10ToB11),
    ]);
    out
}

/// Looks up the witness for `source → target`. Class tags select class
/// arrows; a bundle name that is not a class tag (`v&vi`) or `level =
/// Bundles` selects the bundle-only arrows. Families use `param` (default 2).
pub fn find_witness(source: &str, target: &str, level: Level, param: Option<Complex64>) -> Result<Witness> {
    let unknown = || Error::UnknownEdge(source.to_string(), target.to_string());
    let s: ClassTag = source.parse().map_err(|_| unknown())?;
    let tol = Tolerance::default();
    let catalog = witness_catalog();
    if level == Level::Bundles || target.contains('&') {
        let b: Bundle = target.parse().map_err(|_| unknown())?;
        return catalog
            .into_iter()
            .find(|w| w.source.tag() == s && w.target == WitnessTarget::Bundle(b))
            .ok_or_else(unknown);
    }
    let t: ClassTag = target.parse().map_err(|_| unknown())?;
    let want = param.unwrap_or(c(2.0));
    let want = crate::canonical::normalize_lambda(want, &tol)?;
    catalog
        .into_iter()
        .find(|w| {
            let WitnessTarget::Class(tc) = w.target else { return false };
            let source_ok = w.source.tag() == s && (!s.is_family() || w.source.param() == Some(want));
            let target_ok = tc.tag() == t && (!t.is_family() || tc.param() == Some(want));
            source_ok && target_ok
        })
        .ok_or_else(unknown)
}

/// Witness matrix for `source → target` at `ε`.
pub fn witness(source: &str, target: &str, eps: f64) -> Result<ComplexMatrix> {
    find_witness(source, target, Level::Classes, None)?.matrix(eps)
}

pub fn verify_witnesses(eps_values: &[f64], tol: &Tolerance) -> Result<Vec<WitnessCheck>> {
    let mut out = Vec::new();
    for w in witness_catalog() {
        for &e in eps_values {
            out.push(w.check(e, tol)?);
        }
    }
    Ok(out)
}

/// Source classes for the random checks (families at the sample parameters).
pub fn sources(n: usize) -> Result<Vec<CanonicalClass>> {
    CanonicalClass::catalog(n)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub source: String,
    pub observed: String,
    pub perturbed: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SourceTally {
    pub source: String,
    pub trials: usize,
    /// Observation inside the up-set with no warning.
    pub clean: usize,
    /// Trials carrying a classifier warning or an unclassifiable result.
    pub flagged: usize,
    pub observed: BTreeMap<String, usize>,
    /// Largest parameter drift seen for family observations at class level.
    pub max_drift: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub n: usize,
    pub level: Level,
    pub eps: f64,
    pub trials_per_source: usize,
    pub sources: Vec<SourceTally>,
    /// Observations outside the up-set that carried no warning.
    pub violations: Vec<Violation>,
}

impl VerificationReport {
    pub fn total_trials(&self) -> usize {
        self.sources.iter().map(|s| s.trials).sum()
    }

    pub fn clean_fraction(&self) -> f64 {
        let clean: usize = self.sources.iter().map(|s| s.clean).sum();
        clean as f64 / self.total_trials().max(1) as f64
    }

    pub fn passed(&self, min_clean: f64) -> bool {
        self.violations.is_empty() && self.sources.iter().all(|s| s.clean as f64 >= min_clean * s.trials as f64)
    }
}

enum Outcome {
    Clean(String, f64),
    Flagged(String),
    Violation(String, String),
}

/// Draws members of every source, perturbs them by `ε` and checks each
/// observation against the up-set of the source. At bundle level only
/// bundles are compared. At class level a plain observation must lie in
/// the class up-set; a family observation is accepted when the family is
/// reached by an arrow from another class (arrows into a family hold for
/// every parameter), or when its parameter lies within `drift_bound(ε')` of
/// the source's own parameter or of ±1. Here `ε' = ‖T⁻ᵀET⁻¹‖_F` is the size
/// of the perturbation `E` pulled back to the canonical matrix (member `TᵀA_cT`).
pub fn monte_carlo_verify(
    n: usize,
    level: Level,
    trials: usize,
    eps: f64,
    rng: &RngConfig,
    tol: &Tolerance,
) -> Result<VerificationReport> {
    let classes = class_graph(n)?;
    let bundles = bundle_graph(n)?;
    let mut tallies = Vec::new();
    let mut violations = Vec::new();
    for (si, source) in sources(n)?.iter().enumerate() {
        let b_up = reach_set(&bundles, &bundle_of(source).label(), Direction::Up)?;
        let c_up = reach_set(&classes, source.tag().label(), Direction::Up)?;
        let outcomes: Vec<Outcome> = (0..trials)
            .into_par_iter()
            .map(|t| {
                let mut r = rng.stream(((si as u64) << 32) | t as u64);
                let (a, frame) = sample_member_with_frame(source, rng.condition_bound, &mut r);
                let p = random_perturbation(&a, eps, &mut r);
                let report = match classify(&p, tol) {
                    Ok(rep) => rep,
                    Err(e) => return Outcome::Flagged(format!("unclassified ({e})")),
                };
                let obs = report.class;
                let mut drift_seen = 0.0;
                let drift = match frame.inverse() {
                    Ok(ti) => drift_bound((p - a).congruence(&ti).frobenius_norm()),
                    Err(_) => drift_bound(eps),
                };
                let inside = match level {
                    Level::Bundles => b_up.contains(&bundle_of(&obs).label()),
                    Level::Classes => {
                        let tag = obs.tag();
                        if !tag.is_family() {
                            c_up.iter().any(|l| l == tag.label())
                        } else {
                            let q = obs.param().expect("family");
                            let near_boundary = param_distance(q, c(1.0)).min(param_distance(q, c(-1.0)));
                            if tag == source.tag() {
                                drift_seen = param_distance(q, source.param().expect("family"));
                                drift_seen.min(near_boundary) <= drift
                            } else if c_up.iter().any(|l| l == tag.label()) {
                                true
                            } else {
                                drift_seen = near_boundary;
                                near_boundary <= drift
                            }
                        }
                    }
                };
                let label = match level {
                    Level::Bundles => bundle_of(&obs).label(),
                    Level::Classes => obs.tag().label().to_string(),
                };
                if !report.warnings.is_empty() {
                    Outcome::Flagged(label)
                } else if inside {
                    Outcome::Clean(label, drift_seen)
                } else {
                    Outcome::Violation(label, p.to_string())
                }
            })
            .collect();
        let mut tally = SourceTally { source: source.to_string(), trials, ..Default::default() };
        for o in outcomes {
            match o {
                Outcome::Clean(l, d) => {
                    tally.clean += 1;
                    tally.max_drift = tally.max_drift.max(d);
                    *tally.observed.entry(l).or_default() += 1;
                }
                Outcome::Flagged(l) => {
                    tally.flagged += 1;
                    *tally.observed.entry(l).or_default() += 1;
                }
                Outcome::Violation(l, m) => {
                    *tally.observed.entry(l.clone()).or_default() += 1;
                    violations.push(Violation { source: source.to_string(), observed: l, perturbed: m });
                }
            }
        }
        tallies.push(tally);
    }
    Ok(VerificationReport { n, level, eps, trials_per_source: trials, sources: tallies, violations })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub source: String,
    pub target: String,
    pub trials: usize,
    pub hits: usize,
    pub flagged: usize,
    pub observed: BTreeMap<String, usize>,
    /// Observed class whose codimension is nearest to the target's.
    pub closest: Option<String>,
}

/// Looks for perturbations of members of `v` that classify as `w`. Half of
/// the trials use full complex-Gaussian perturbations, the other half put
/// the perturbation on a random non-empty subset of the star positions of
/// `v` (then move to a random member by congruence), so that degenerate
/// directions are also exercised. A family target counts as hit only with
/// parameter within 10⁻³ of the query parameter. A statistical probe: zero
/// hits corroborates a non-arrow but cannot prove it.
pub fn nonedge_probe(
    v: &CanonicalClass,
    w: &CanonicalClass,
    trials: usize,
    eps: f64,
    rng: &RngConfig,
    tol: &Tolerance,
) -> Result<ProbeReport> {
    if v.n() != w.n() {
        return Err(Error::InvalidDimension(w.n()));
    }
    let stars = miniversal_pattern(v).stars();
    let base = canonical_matrix(v);
    let results: Vec<Option<CanonicalClass>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut r = rng.stream(t as u64);
            let p = if t % 2 == 0 || stars.is_empty() {
                let a = sample_class_member(v, rng.condition_bound, &mut r);
                random_perturbation(&a, eps, &mut r)
            } else {
                let mut d = ComplexMatrix::zeros(v.n()).expect("n is 2 or 3");
                let mut chosen: Vec<(usize, usize)> = stars.iter().copied().filter(|_| r.random_bool(0.5)).collect();
                if chosen.is_empty() {
                    chosen.push(stars[r.random_range(0..stars.len())]);
                }
                for &(i, j) in &chosen {
                    d[(i, j)] = gaussian(&mut r);
                }
                let d = d.scale(c(eps / d.frobenius_norm()));
                let s = random_congruence(v.n(), rng.condition_bound, &mut r);
                (base + d).congruence(&s)
            };
            classify(&p, tol).ok().map(|rep| rep.class)
        })
        .collect();
    let mut observed: BTreeMap<String, usize> = BTreeMap::new();
    let (mut hits, mut flagged) = (0, 0);
    for res in &results {
        match res {
            None => flagged += 1,
            Some(o) => {
                *observed.entry(o.tag().label().to_string()).or_default() += 1;
                let hit = o.tag() == w.tag()
                    && match (o.param(), w.param()) {
                        (Some(p), Some(q)) => param_distance(p, q) <= 1e-3,
                        _ => true,
                    };
                hits += usize::from(hit);
            }
        }
    }
    let closest = observed
        .iter()
        .filter_map(|(l, &k)| l.parse::<ClassTag>().ok().map(|t| (t, l, k)))
        .filter(|(t, _, _)| t.n() == w.n())
        .min_by_key(|&(t, _, k)| (t.codim().abs_diff(w.codim()), std::cmp::Reverse(k)))
        .map(|(_, l, _)| l.clone());
    Ok(ProbeReport {
        source: v.to_string(),
        target: w.to_string(),
        trials,
        hits,
        flagged,
        observed,
        closest,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriftReport {
    pub trials: usize,
    pub eps: f64,
    pub bound: f64,
    pub observed: BTreeMap<String, usize>,
    /// Largest `|λ + 1|` over observations in the `v_λ` family.
    pub max_deviation: f64,
    /// Family observations with `|λ + 1|` above the bound.
    pub outside: usize,
}

/// Perturbs the canonical matrix of `ii` and records how far the
/// parameter of the `v_λ` observations is from −1.
pub fn drift_law(trials: usize, eps: f64, rng: &RngConfig, tol: &Tolerance) -> Result<DriftReport> {
    let ii = canonical_matrix(&plain(ClassTag::II));
    let bound = drift_bound(eps);
    let results: Vec<Option<CanonicalClass>> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut r = rng.stream(t as u64);
            classify(&random_perturbation(&ii, eps, &mut r), tol).ok().map(|rep| rep.class)
        })
        .collect();
    let mut observed: BTreeMap<String, usize> = BTreeMap::new();
    let (mut max_deviation, mut outside) = (0.0f64, 0);
    for res in results {
        let key = res.map(|o| o.tag().label().to_string()).unwrap_or_else(|| "unclassified".into());
        *observed.entry(key).or_default() += 1;
        if let Some(o) = res.filter(|o| o.tag() == ClassTag::V) {
            let dev = param_distance(o.param().expect("family"), c(-1.0));
            max_deviation = max_deviation.max(dev);
            outside += usize::from(dev > bound);
        }
    }
    Ok(DriftReport { trials, eps, bound, observed, max_deviation, outside })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenericityReport {
    pub n: usize,
    pub samples: usize,
    pub observed: BTreeMap<String, usize>,
    /// Fraction landing in the generic family (`v_λ` or `11_μ`).
    pub generic_fraction: f64,
}

/// Classifies random complex-Gaussian matrices.
pub fn genericity(n: usize, samples: usize, rng: &RngConfig, tol: &Tolerance) -> Result<GenericityReport> {
    let generic = match n {
        2 => ClassTag::V,
        3 => ClassTag::T11,
        _ => return Err(Error::InvalidDimension(n)),
    };
    let tags: Vec<Option<ClassTag>> = (0..samples)
        .into_par_iter()
        .map(|t| {
            let mut r = rng.stream(t as u64);
            classify(&gaussian_matrix(n, &mut r), tol).ok().map(|rep| rep.class.tag())
        })
        .collect();
    let mut observed: BTreeMap<String, usize> = BTreeMap::new();
    for t in &tags {
        *observed.entry(t.map(|t| t.label().to_string()).unwrap_or_else(|| "unclassified".into())).or_default() += 1;
    }
    let hits = tags.iter().filter(|t| **t == Some(generic)).count();
    Ok(GenericityReport { n, samples, observed, generic_fraction: hits as f64 / samples.max(1) as f64 })
}

/// Bundle containing a class tag; re-exported for report consumers.
pub fn bundle_label(tag: ClassTag) -> String {
    bundle_of_tag(tag).label()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perturbation_norm() {
        let mut r = RngConfig::default().stream(0);
        let a = canonical_matrix(&plain(ClassTag::II));
        assert_eq!(random_perturbation(&a, 0.0, &mut r), a);
        let p = random_perturbation(&a, 1e-3, &mut r);
        assert!(((p - a).frobenius_norm() - 1e-3).abs() < 1e-12);
    }

    #[test]
    fn streams_are_reproducible() {
        let cfg = RngConfig::default();
        let a = gaussian_matrix(3, &mut cfg.stream(7));
        let b = gaussian_matrix(3, &mut cfg.stream(7));
        let d = gaussian_matrix(3, &mut cfg.stream(8));
        assert_eq!(a, b);
        assert_ne!(a, d);
    }

    #[test]
    fn members_keep_their_class() {
        let tol = Tolerance::default();
        let cfg = RngConfig::new(1, 10.0).unwrap();
        let mut r = cfg.stream(0);
        let t8 = plain(ClassTag::T8);
        let m = sample_class_member(&t8, 10.0, &mut r);
        assert!((m - m.transpose()).frobenius_norm() < 1e-12);
        assert_eq!(classify(&m, &tol).unwrap().class.tag(), ClassTag::T8);
        let v2 = fam(ClassTag::V, c(2.0));
        let got = classify(&sample_class_member(&v2, 10.0, &mut r), &tol).unwrap().class;
        assert!(got.matches(&v2, 1e-6), "{got}");
        let t1 = sample_class_member(&plain(ClassTag::T1), 10.0, &mut r);
        assert_eq!(t1, ComplexMatrix::zeros(3).unwrap());
    }

    #[test]
    fn witness_examples() {
        let tol = Tolerance::default();
        let w = witness("ii", "iv", 1e-3).unwrap();
        assert_eq!(w, ComplexMatrix::from_real_rows(&[[0.0, 1.0], [-1.0, 1e-3]]).unwrap());
        assert_eq!(classify(&w, &tol).unwrap().class.tag(), ClassTag::IV);

        let w = witness("9", "12", 1e-3).unwrap();
        let p = crate::matrixcore::pencil_charpoly(&w);
        let k = p.coeff(3);
        for (j, want) in [-1.0, 3.0, -3.0, 1.0].iter().enumerate() {
            assert!((p.coeff(j) - k * *want).norm() < 1e-15);
        }

        let b = find_witness("iv", "v&vi", Level::Bundles, None).unwrap();
        let got = classify(&b.matrix(1e-2).unwrap(), &tol).unwrap().class;
        assert_eq!(got.tag(), ClassTag::V);
        assert!(param_distance(got.param().unwrap(), c(-1.0)) < 0.05);

        assert!(matches!(witness("ii", "vi", 1e-3), Err(Error::UnknownEdge(_, _))));
        assert!(matches!(witness("ii", "iv", 0.5), Err(Error::InvalidEpsilon(_))));
    }

    #[test]
    fn witnesses_start_in_their_source() {
        let tol = Tolerance::default();
        for w in witness_catalog() {
            let got = classify(&w.origin(), &tol).unwrap().class;
            assert!(got.matches(&w.source, 1e-6), "{}: origin is {got}", w.label());
        }
    }

    #[test]
    fn drift_bound_calibration() {
        assert!((drift_bound(1e-3) - 0.1).abs() < 1e-15);
        assert_eq!(drift_bound(1e-8), 1e-2);
    }

    #[test]
    fn param_distance_identifies_inverses() {
        assert!(param_distance(c(2.0), c(0.5)) < 1e-15);
        assert!(param_distance(c(0.0), c(1e4)) <= 1e-4);
    }
}

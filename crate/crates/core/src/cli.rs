//! Command-line front end. [`run`] parses arguments, executes one
//! subcommand and returns the process exit code:
//! 0 success, 1 usage or input error, 2 unclassifiable input,
//! 3 verification violation.

use std::io::{Read, Write};
use std::path::Path;

use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::canonical::{bundle_of, canonical_matrix, classify, CanonicalClass, ClassTag, FAMILY_SAMPLES};
use crate::closuregraph::{
    any_violated, bundle_graph, bundle_necessary_conditions, class_graph, derive_bundles, export, has_path,
    necessary_conditions, reach_set, validate, CheckKind, CheckStatus, Direction, ExportFormat, Level, REFUTED_PAIRS,
};
use crate::deformation::{codimension, miniversal_pattern, transversality_report};
use crate::error::{Error, Result};
use crate::matrixcore::{format_complex, ComplexMatrix, Tolerance};
use crate::perturbation::{
    drift_law, genericity, monte_carlo_verify, nonedge_probe, verify_witnesses, RngConfig,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_UNCLASSIFIABLE: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

pub const ENV_RANK_TOL: &str = "CONGRUA_TOL_RANK";
pub const ENV_EIG_TOL: &str = "CONGRUA_TOL_EIG";

/// File format for matrices: `n` and the entries as `[re, im]` pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub n: usize,
    pub entries: Vec<Vec<[f64; 2]>>,
}

impl MatrixDocument {
    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self {
            n: m.n(),
            entries: m.rows().iter().map(|r| r.iter().map(|z| [z.re, z.im]).collect()).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        if self.entries.len() != self.n {
            return Err(Error::Parse(format!("document says n = {} but has {} rows", self.n, self.entries.len())));
        }
        let rows: Vec<Vec<Complex64>> =
            self.entries.iter().map(|r| r.iter().map(|&[re, im]| Complex64::new(re, im)).collect()).collect();
        ComplexMatrix::from_rows(&rows)
    }
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (also with `j`), e.g. `1e-3-2i`.
pub fn parse_complex(token: &str) -> Result<Complex64> {
    let t: String = token.trim().trim_matches(|c| c == '(' || c == ')').chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("cannot read `{token}` as a complex number"));
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix(['i', 'j']) else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re_part, im_part) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im_part {
        "" | "+" => 1.0,
        "-" => -1.0,
        s => s.parse::<f64>().map_err(|_| bad())?,
    };
    let re = re_part.parse::<f64>().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

fn json_entry(v: &Value, row: usize, col: usize) -> Result<Complex64> {
    let at = |msg: String| Error::Parse(format!("row {}, column {}: {msg}", row + 1, col + 1));
    match v {
        Value::Number(x) => x.as_f64().map(|re| Complex64::new(re, 0.0)).ok_or_else(|| at("not a number".into())),
        Value::String(s) => parse_complex(s).map_err(|e| at(e.to_string())),
        Value::Array(p) if p.len() == 2 => match (p[0].as_f64(), p[1].as_f64()) {
            (Some(re), Some(im)) => Ok(Complex64::new(re, im)),
            _ => Err(at("expected [re, im] with numeric parts".into())),
        },
        other => Err(at(format!("unexpected value {other}"))),
    }
}

fn rows_to_matrix(rows: Vec<Vec<Complex64>>) -> Result<ComplexMatrix> {
    let n = rows.len();
    for (i, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(Error::Parse(format!("row {} has {} entries, expected {n}", i + 1, r.len())));
        }
    }
    ComplexMatrix::from_rows(&rows)
}

/// Reads a matrix from a [`MatrixDocument`], a JSON array of rows (numbers,
/// `[re, im]` pairs or `"a+bi"` strings), or plain text with one row per line
/// (or rows separated by `;`) and entries separated by spaces or commas.
pub fn parse_matrix(text: &str) -> Result<ComplexMatrix> {
    let trimmed = text.trim();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        let v: Value = serde_json::from_str(trimmed).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
        let rows = match &v {
            Value::Object(map) => {
                if map.contains_key("n") {
                    let doc: MatrixDocument =
                        serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("invalid matrix document: {e}")))?;
                    return doc.to_matrix();
                }
                map.get("entries").cloned().ok_or_else(|| Error::Parse("missing `entries`".into()))?
            }
            _ => v,
        };
        let Value::Array(rows) = rows else {
            return Err(Error::Parse("expected an array of rows".into()));
        };
        let mut out = Vec::new();
        for (i, r) in rows.iter().enumerate() {
            let Value::Array(cells) = r else {
                return Err(Error::Parse(format!("row {} is not an array", i + 1)));
            };
            out.push(cells.iter().enumerate().map(|(j, x)| json_entry(x, i, j)).collect::<Result<Vec<_>>>()?);
        }
        return rows_to_matrix(out);
    }
    let mut out = Vec::new();
    for line in trimmed.split(['\n', ';']).map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')) {
        let i = out.len();
        let row = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .enumerate()
            .map(|(j, t)| parse_complex(t).map_err(|e| Error::Parse(format!("row {}, column {}: {e}", i + 1, j + 1))))
            .collect::<Result<Vec<_>>>()?;
        out.push(row);
    }
    if out.is_empty() {
        return Err(Error::Parse("empty input".into()));
    }
    rows_to_matrix(out)
}

#[derive(Debug, Parser)]
#[command(name = "congrua", version, about = "Congruence classes, codimensions and closure graphs of 2x2 and 3x3 complex matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SuiteArg {
    Witness,
    Montecarlo,
    Nonedge,
    Deformation,
    Bundles,
    All,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify a matrix given as a file, `-` for stdin, or an inline literal such as '[[0,1],[-1,0]]'
    Classify {
        input: String,
        #[arg(long)]
        json: bool,
    },
    /// Print the canonical matrix of a class
    Canonical {
        tag: String,
        /// Family parameter as `re,im`
        #[arg(long, allow_hyphen_values = true)]
        param: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Codimension of a class (by tag) or of a matrix (file, `-` or literal)
    Codim {
        target: String,
        #[arg(long, allow_hyphen_values = true)]
        param: Option<String>,
    },
    /// Miniversal deformation pattern of a class
    Pattern {
        tag: String,
        #[arg(long, allow_hyphen_values = true)]
        param: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Export a closure graph
    Graph {
        level: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "json")]
        format: String,
    },
    /// Up-set or down-set of a vertex
    Reach {
        tag: String,
        #[arg(long, default_value = "up")]
        direction: String,
        #[arg(long, default_value = "classes")]
        level: String,
        #[arg(long)]
        n: usize,
    },
    /// Run a verification suite and print a JSON report
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        /// Perturbation size; the witness suite uses 1e-2, 1e-3, 1e-4 unless given
        #[arg(long)]
        eps: Option<f64>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
}

/// Numerical settings after applying the environment overrides.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CliConfig {
    pub tol: Tolerance,
}

impl CliConfig {
    pub fn from_env(env: &dyn Fn(&str) -> Option<String>) -> Result<Self> {
        let d = Tolerance::default();
        let read = |key: &str, default: f64| -> Result<f64> {
            match env(key) {
                None => Ok(default),
                Some(s) => s.trim().parse::<f64>().map_err(|_| Error::InvalidTolerance(format!("{key}={s}"))),
            }
        };
        Ok(Self { tol: Tolerance::new(read(ENV_RANK_TOL, d.rank_tol)?, read(ENV_EIG_TOL, d.eig_tol)?)? })
    }
}

struct Io<'a> {
    stdin: &'a mut dyn Read,
    out: &'a mut dyn Write,
}

impl Io<'_> {
    fn read_input(&mut self, input: &str) -> Result<String> {
        if input == "-" {
            let mut s = String::new();
            self.stdin.read_to_string(&mut s).map_err(|e| Error::Parse(format!("stdin: {e}")))?;
            return Ok(s);
        }
        let t = input.trim_start();
        if t.starts_with('[') || t.starts_with('{') {
            return Ok(input.to_string());
        }
        std::fs::read_to_string(input).map_err(|e| Error::Parse(format!("{input}: {e}")))
    }
}

fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::UnclassifiableStructure(_) => EXIT_UNCLASSIFIABLE,
        _ => EXIT_INPUT,
    }
}

fn parse_param(s: &str) -> Result<Complex64> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|_| Error::Parse(format!("bad parameter `{s}` (expected re,im)")));
    match parts.as_slice() {
        [re] => parse_complex(re),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(Error::Parse(format!("bad parameter `{s}` (expected re,im)"))),
    }
}

fn class_from(tag: &str, param: Option<&str>, tol: &Tolerance) -> Result<CanonicalClass> {
    let t: ClassTag = tag.parse()?;
    let p = param.map(parse_param).transpose()?;
    match (t.is_family(), p) {
        (true, None) => Err(Error::InvalidClass(format!("{t} needs --param re,im"))),
        _ => CanonicalClass::from_parts(t, p, tol),
    }
}

fn param_json(p: Option<Complex64>) -> Value {
    p.map(|z| json!([z.re, z.im])).unwrap_or(Value::Null)
}

fn matrix_text(m: &ComplexMatrix) -> String {
    m.rows()
        .iter()
        .map(|r| r.iter().map(|&z| format_complex(z)).collect::<Vec<_>>().join("  "))
        .collect::<Vec<_>>()
        .join("\n")
}

fn cmd_classify(io: &mut Io<'_>, input: &str, as_json: bool, tol: &Tolerance) -> Result<()> {
    let a = parse_matrix(&io.read_input(input)?)?;
    let r = classify(&a, tol)?;
    let pattern = miniversal_pattern(&r.class);
    let codim = r.class.codim();
    if as_json {
        let v = json!({
            "class": r.class.tag().label(),
            "param": param_json(r.class.param()),
            "codim": codim,
            "bundle": bundle_of(&r.class).label(),
            "pattern": pattern.mask(),
            "diagnostics": r.diagnostics,
            "warnings": r.warnings,
        });
        writeln!(io.out, "{}", serde_json::to_string(&v).expect("json")).ok();
        return Ok(());
    }
    let d = &r.diagnostics;
    let mut s = format!("class: {}\n", r.class.tag().label());
    if let Some(p) = r.class.param() {
        s += &format!("param: {}\n", format_complex(p));
    }
    s += &format!("codim: {codim}\nbundle: {}\npattern:\n{}\n", bundle_of(&r.class), pattern.render());
    s += &format!("rank: {}, symmetric part rank: {}, skew part rank: {}\n", d.rank, d.sym_rank, d.skew_rank);
    let sv: Vec<String> = d.singular_values.iter().map(|x| format!("{x:.6e}")).collect();
    s += &format!("singular values: {}\n", sv.join(", "));
    if let Some(sp) = &d.cosquare_spectrum {
        let sp: Vec<String> = sp.iter().map(|&z| format_complex(z)).collect();
        s += &format!("cosquare spectrum: {}\n", sp.join(", "));
    }
    if let Some(p) = d.null_vectors_parallel {
        s += &format!("null vectors parallel: {p}\n");
    }
    if r.warnings.is_empty() {
        s += "warnings: none\n";
    } else {
        for w in &r.warnings {
            s += &format!("warning: {w}\n");
        }
    }
    write!(io.out, "{s}").ok();
    Ok(())
}

fn status(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

struct Suite {
    name: &'static str,
    ok: bool,
    report: Value,
}

fn suite_witness(eps: Option<f64>, tol: &Tolerance) -> Result<Suite> {
    let eps_values: Vec<f64> = eps.map(|e| vec![e]).unwrap_or_else(|| vec![1e-2, 1e-3, 1e-4]);
    let checks = verify_witnesses(&eps_values, tol)?;
    let failed = checks.iter().filter(|c| !c.passed()).count();
    let rows: Vec<Value> = checks
        .iter()
        .map(|c| {
            json!({"edge": c.label, "eps": c.eps, "observed": c.observed, "status": status(c.passed()), "distance": c.distance})
        })
        .collect();
    Ok(Suite {
        name: "witness",
        ok: failed == 0,
        report: json!({"checks": rows.len(), "failed": failed, "results": rows}),
    })
}

fn suite_montecarlo(trials: usize, eps: f64, rng: &RngConfig, tol: &Tolerance) -> Result<Suite> {
    let mut ok = true;
    let mut runs = Vec::new();
    for n in [2, 3] {
        for level in [Level::Bundles, Level::Classes] {
            let r = monte_carlo_verify(n, level, trials, eps, rng, tol)?;
            let pass = r.passed(0.999);
            ok &= pass;
            runs.push(json!({
                "n": n,
                "level": level,
                "status": status(pass),
                "clean_fraction": r.clean_fraction(),
                "violations": r.violations,
                "sources": r.sources,
            }));
        }
    }
    Ok(Suite { name: "montecarlo", ok, report: json!({"eps": eps, "trials_per_source": trials, "runs": runs}) })
}

fn family_instance(t: ClassTag, l: f64, tol: &Tolerance) -> Result<CanonicalClass> {
    if t.is_family() {
        CanonicalClass::family(t, Complex64::new(l, 0.0), tol)
    } else {
        CanonicalClass::new(t)
    }
}

fn suite_nonedge(trials: usize, eps: f64, rng: &RngConfig, tol: &Tolerance) -> Result<Suite> {
    let mut ok = true;
    let mut rows = Vec::new();
    for (v, w) in REFUTED_PAIRS {
        let vc = family_instance(v, 2.0, tol)?;
        let wc = family_instance(w, 3.0, tol)?;
        let checks = necessary_conditions(&vc, &wc, tol)?;
        let refuted = any_violated(&checks);
        let probe = nonedge_probe(&vc, &wc, trials, eps, rng, tol)?;
        let pass = refuted && probe.hits == 0;
        ok &= pass;
        let violated: Vec<CheckKind> =
            checks.iter().filter(|c| c.status == CheckStatus::Violated).map(|c| c.kind).collect();
        rows.push(json!({
            "pair": [v.label(), w.label()],
            "status": status(pass),
            "violated_checks": violated,
            "probe_hits": probe.hits,
            "probe_trials": probe.trials,
            "closest": probe.closest,
        }));
    }
    Ok(Suite {
        name: "nonedge",
        ok,
        report: json!({
            "pairs": rows,
            "note": "probes are statistical corroboration; zero hits cannot prove that an arrow is absent",
        }),
    })
}

fn suite_deformation(tol: &Tolerance) -> Result<Suite> {
    let mut ok = true;
    let mut rows = Vec::new();
    for n in [2, 3] {
        for &t in ClassTag::all(n)? {
            let instances: Vec<CanonicalClass> = if t.is_family() {
                FAMILY_SAMPLES.iter().map(|&l| CanonicalClass::family(t, l, tol)).collect::<Result<_>>()?
            } else {
                vec![CanonicalClass::new(t)?]
            };
            let mut pass = true;
            for c in &instances {
                let p = miniversal_pattern(c);
                let rep = transversality_report(&p, tol);
                let cd = codimension(&canonical_matrix(c), tol);
                pass &= rep.direct_sum && cd == t.codim() && p.star_count() == cd;
            }
            ok &= pass;
            rows.push(json!({"class": t.label(), "codim": t.codim(), "instances": instances.len(), "status": status(pass)}));
        }
    }
    let passed = rows.iter().filter(|r| r["status"] == "pass").count();
    Ok(Suite { name: "deformation", ok, report: json!({"passed": passed, "total": rows.len(), "classes": rows}) })
}

fn suite_bundles(tol: &Tolerance) -> Result<Suite> {
    let mut ok = true;
    let mut rows = Vec::new();
    for n in [2, 3] {
        let cg = class_graph(n)?;
        let bg = bundle_graph(n)?;
        let derived = derive_bundles(&cg)?;
        let mut names = derived.block_names();
        let mut want: Vec<String> = bg.vertices().iter().map(|v| v.tag.clone()).collect();
        names.sort();
        want.sort();
        let partition_ok = names == want;
        let vc = validate(&cg);
        let vb = validate(&bg);
        let mut quotient_ok = true;
        for (a, b) in cg.edges() {
            let (ba, bb) = (derived.block_name(a).unwrap_or_default(), derived.block_name(b).unwrap_or_default());
            quotient_ok &= ba == bb || has_path(&bg, &ba, &bb)?;
        }
        let mut edges_ok = true;
        for (a, b) in bg.edges() {
            edges_ok &= !any_violated(&bundle_necessary_conditions(a.parse()?, b.parse()?, tol)?);
        }
        let pass = partition_ok && vc.is_ok() && vb.is_ok() && quotient_ok && edges_ok;
        ok &= pass;
        rows.push(json!({
            "n": n,
            "status": status(pass),
            "blocks": derived.blocks,
            "partition_matches": partition_ok,
            "class_graph": vc,
            "bundle_graph": vb,
            "quotient_consistent": quotient_ok,
            "bundle_edges_pass_necessary_conditions": edges_ok,
        }));
    }
    Ok(Suite { name: "bundles", ok, report: json!({"dimensions": rows}) })
}

fn cmd_verify(io: &mut Io<'_>, suite: SuiteArg, trials: usize, eps: Option<f64>, seed: u64, tol: &Tolerance) -> Result<i32> {
    if trials == 0 {
        return Err(Error::Parse("--trials must be at least 1".into()));
    }
    if let Some(e) = eps {
        if !(e > 0.0 && e <= 0.1) {
            return Err(Error::InvalidEpsilon(e));
        }
    }
    let rng = RngConfig::new(seed, 10.0)?;
    let mc_eps = eps.unwrap_or(1e-3);
    let mut suites = Vec::new();
    let all = matches!(suite, SuiteArg::All);
    if all || matches!(suite, SuiteArg::Witness) {
        suites.push(suite_witness(eps, tol)?);
    }
    if all || matches!(suite, SuiteArg::Montecarlo) {
        suites.push(suite_montecarlo(trials, mc_eps, &rng, tol)?);
    }
    if all || matches!(suite, SuiteArg::Nonedge) {
        suites.push(suite_nonedge(trials, mc_eps, &rng, tol)?);
    }
    if all || matches!(suite, SuiteArg::Deformation) {
        suites.push(suite_deformation(tol)?);
    }
    if all || matches!(suite, SuiteArg::Bundles) {
        suites.push(suite_bundles(tol)?);
    }
    if all {
        let drift = drift_law(trials, mc_eps, &rng, tol)?;
        let g2 = genericity(2, trials, &rng, tol)?;
        let g3 = genericity(3, trials, &rng, tol)?;
        suites.push(Suite { name: "drift", ok: drift.outside == 0, report: serde_json::to_value(&drift).expect("json") });
        suites.push(Suite {
            name: "genericity",
            ok: g2.generic_fraction >= 0.99 && g3.generic_fraction >= 0.99,
            report: json!({"n2": g2, "n3": g3}),
        });
    }
    let ok = suites.iter().all(|s| s.ok);
    let mut map = serde_json::Map::new();
    for s in suites {
        let mut r = s.report;
        if let Value::Object(o) = &mut r {
            o.insert("status".into(), json!(status(s.ok)));
        }
        map.insert(s.name.into(), r);
    }
    let doc = json!({"status": status(ok), "seed": seed, "suites": map});
    writeln!(io.out, "{}", serde_json::to_string_pretty(&doc).expect("json")).ok();
    Ok(if ok { EXIT_OK } else { EXIT_VIOLATION })
}

fn dispatch(cli: Cli, io: &mut Io<'_>, cfg: &CliConfig) -> Result<i32> {
    let tol = &cfg.tol;
    match cli.command {
        Command::Classify { input, json } => cmd_classify(io, &input, json, tol).map(|_| EXIT_OK),
        Command::Canonical { tag, param, json } => {
            let c = class_from(&tag, param.as_deref(), tol)?;
            let m = canonical_matrix(&c);
            if json {
                let doc = MatrixDocument::from_matrix(&m);
                let v = json!({"class": c.tag().label(), "param": param_json(c.param()), "n": doc.n, "entries": doc.entries});
                writeln!(io.out, "{}", serde_json::to_string(&v).expect("json")).ok();
            } else {
                writeln!(io.out, "{}", matrix_text(&m)).ok();
            }
            Ok(EXIT_OK)
        }
        Command::Codim { target, param } => {
            let as_tag = !Path::new(&target).exists() && target != "-" && !target.trim_start().starts_with(['[', '{']);
            let k = if as_tag {
                let t: ClassTag = target.parse()?;
                match param {
                    Some(p) => codimension(&canonical_matrix(&class_from(&target, Some(&p), tol)?), tol),
                    None => t.codim(),
                }
            } else {
                codimension(&parse_matrix(&io.read_input(&target)?)?, tol)
            };
            writeln!(io.out, "{k}").ok();
            Ok(EXIT_OK)
        }
        Command::Pattern { tag, param, json } => {
            let t: ClassTag = tag.parse()?;
            let c = match (t.is_family(), &param) {
                (true, None) => CanonicalClass::family(t, Complex64::new(2.0, 0.0), tol)?,
                _ => class_from(&tag, param.as_deref(), tol)?,
            };
            let p = miniversal_pattern(&c);
            if json {
                let stars: Vec<[usize; 2]> = p.stars().iter().map(|&(i, j)| [i + 1, j + 1]).collect();
                let v = json!({"class": t.label(), "param": param_json(c.param()), "stars": stars, "mask": p.mask()});
                writeln!(io.out, "{}", serde_json::to_string(&v).expect("json")).ok();
            } else {
                writeln!(io.out, "{}", p.render()).ok();
            }
            Ok(EXIT_OK)
        }
        Command::Graph { level, n, format } => {
            let level: Level = level.parse()?;
            let g = match level {
                Level::Classes => class_graph(n)?,
                Level::Bundles => bundle_graph(n)?,
            };
            let f: ExportFormat = format.parse()?;
            write!(io.out, "{}", export(&g, f)).ok();
            if f == ExportFormat::Json {
                writeln!(io.out).ok();
            }
            Ok(EXIT_OK)
        }
        Command::Reach { tag, direction, level, n } => {
            let level: Level = level.parse()?;
            let d: Direction = direction.parse()?;
            let g = match level {
                Level::Classes => class_graph(n)?,
                Level::Bundles => bundle_graph(n)?,
            };
            let v = g.resolve(&tag)?;
            let set = reach_set(&g, &v, d)?;
            for vert in g.vertices().iter().filter(|x| set.contains(&x.tag)) {
                if vert.family {
                    writeln!(io.out, "{} (family)", vert.tag).ok();
                } else {
                    writeln!(io.out, "{}", vert.tag).ok();
                }
            }
            Ok(EXIT_OK)
        }
        Command::Verify { suite, trials, eps, seed } => cmd_verify(io, suite, trials, eps, seed, tol),
    }
}

/// Runs the command line `args` (program name first) with the given
/// environment lookup and streams; returns the exit code.
pub fn run<I, T>(
    args: I,
    env: &dyn Fn(&str) -> Option<String>,
    stdin: &mut dyn Read,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
            let text = e.render().to_string();
            if code == EXIT_OK {
                write!(stdout, "{text}").ok();
            } else {
                write!(stderr, "{text}").ok();
            }
            return code;
        }
    };
    let cfg = match CliConfig::from_env(env) {
        Ok(c) => c,
        Err(e) => {
            writeln!(stderr, "error: {e}").ok();
            return EXIT_INPUT;
        }
    };
    let mut io = Io { stdin, out: stdout };
    match dispatch(cli, &mut io, &cfg) {
        Ok(code) => code,
        Err(e) => {
            writeln!(stderr, "error: {e}").ok();
            exit_code_for(&e)
        }
    }
}

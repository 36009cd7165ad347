//! Closure graphs of congruence classes and bundles (`n = 2, 3`), bundle
//! derivation from vertex neighborhoods, reachability, structural
//! validation, necessary conditions for arrows, and DOT/JSON export.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::canonical::{canonical_matrix, classify, Bundle, CanonicalClass, ClassTag};
use crate::error::{Error, Result};
use crate::matrixcore::Tolerance;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Classes,
    Bundles,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Level::Classes => "classes",
            Level::Bundles => "bundles",
        })
    }
}

impl FromStr for Level {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "classes" | "class" => Ok(Level::Classes),
            "bundles" | "bundle" => Ok(Level::Bundles),
            _ => Err(Error::Parse(format!("unknown level {s:?} (expected classes or bundles)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Up,
    Down,
}

impl FromStr for Direction {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "up" => Ok(Direction::Up),
            "down" => Ok(Direction::Down),
            _ => Err(Error::Parse(format!("unknown direction {s:?} (expected up or down)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub tag: String,
    pub family: bool,
    pub codim: usize,
}

/// Hasse diagram of the closure order: an arrow `v → w` means `v` lies in
/// the closure of `w`, i.e. arbitrarily small perturbations of `v` reach `w`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClosureGraph {
    level: Level,
    n: usize,
    vertices: Vec<Vertex>,
    edges: Vec<(usize, usize)>,
    index: HashMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    level: Level,
    n: usize,
    vertices: Vec<Vertex>,
    edges: Vec<(String, String)>,
}

const CLASS_EDGES_2: [(&str, &str); 6] =
    [("i", "ii"), ("i", "iii"), ("ii", "iv"), ("iii", "iv"), ("iii", "v_lambda"), ("iii", "vi")];

const CLASS_EDGES_3: [(&str, &str); 17] = [
    ("1", "2"),
    ("1", "3"),
    ("2", "4"),
    ("2", "7"),
    ("3", "4"),
    ("3", "5_lambda"),
    ("3", "6"),
    ("3", "7"),
    ("4", "9"),
    ("5_lambda", "9"),
    ("6", "8"),
    ("6", "9"),
    ("7", "10"),
    ("8", "12"),
    ("9", "10"),
    ("9", "11_mu"),
    ("9", "12"),
];

const BUNDLE_EDGES_2: [(&str, &str); 5] =
    [("i", "ii"), ("i", "iii"), ("ii", "iv"), ("iii", "iv"), ("iv", "v&vi")];

const BUNDLE_EDGES_3: [(&str, &str); 17] = [
    ("1", "2"),
    ("1", "3"),
    ("2", "4"),
    ("2", "7"),
    ("3", "4"),
    ("3", "6"),
    ("3", "7"),
    ("4", "5"),
    ("6", "5"),
    ("6", "8"),
    ("5", "9"),
    ("7", "10"),
    ("8", "12"),
    ("9", "10"),
    ("9", "12"),
    ("10", "11"),
    ("12", "11"),
];

/// Class pairs with no arrow whose refutation is a limit argument on the cosquare spectrum.
pub const COSQUARE_LIMIT_PAIRS: [(ClassTag, ClassTag); 3] =
    [(ClassTag::II, ClassTag::V), (ClassTag::II, ClassTag::VI), (ClassTag::T2, ClassTag::T5)];

/// Non-arrows argued individually for `n = 2, 3`.
pub const REFUTED_PAIRS: [(ClassTag, ClassTag); 10] = [
    (ClassTag::II, ClassTag::V),
    (ClassTag::II, ClassTag::VI),
    (ClassTag::T2, ClassTag::T5),
    (ClassTag::T4, ClassTag::T7),
    (ClassTag::T5, ClassTag::T7),
    (ClassTag::T6, ClassTag::T7),
    (ClassTag::T4, ClassTag::T8),
    (ClassTag::T5, ClassTag::T8),
    (ClassTag::T7, ClassTag::T9),
    (ClassTag::T8, ClassTag::T9),
];

impl ClosureGraph {
    /// Graph from explicit data. Fails on duplicate or unknown vertex names.
    pub fn new(level: Level, n: usize, vertices: Vec<Vertex>, edges: &[(&str, &str)]) -> Result<Self> {
        let mut index = HashMap::new();
        for (k, v) in vertices.iter().enumerate() {
            if index.insert(v.tag.clone(), k).is_some() {
                return Err(Error::Parse(format!("duplicate vertex {}", v.tag)));
            }
        }
        let mut g = Self { level, n, vertices, edges: Vec::new(), index };
        for &(a, b) in edges {
            let e = (g.position(a)?, g.position(b)?);
            if !g.edges.contains(&e) {
                g.edges.push(e);
            }
        }
        Ok(g)
    }

    /// Copy with one extra edge.
    pub fn with_edge(&self, from: &str, to: &str) -> Result<Self> {
        let mut g = self.clone();
        let e = (g.position(from)?, g.position(to)?);
        if !g.edges.contains(&e) {
            g.edges.push(e);
        }
        Ok(g)
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, tag: &str) -> Result<&Vertex> {
        Ok(&self.vertices[self.position(tag)?])
    }

    pub fn edges(&self) -> Vec<(&str, &str)> {
        self.edges
            .iter()
            .map(|&(a, b)| (self.vertices[a].tag.as_str(), self.vertices[b].tag.as_str()))
            .collect()
    }

    pub fn has_edge(&self, from: &str, to: &str) -> bool {
        match (self.index.get(from), self.index.get(to)) {
            (Some(&a), Some(&b)) => self.edges.contains(&(a, b)),
            _ => false,
        }
    }

    fn position(&self, tag: &str) -> Result<usize> {
        self.index.get(tag).copied().ok_or_else(|| Error::UnknownVertex(tag.to_string()))
    }

    /// Maps user spellings (`v`, `T5`, `5`, `v&vi`...) onto a vertex name.
    pub fn resolve(&self, name: &str) -> Result<String> {
        if self.index.contains_key(name) {
            return Ok(name.to_string());
        }
        let label = match self.level {
            Level::Classes => name.parse::<ClassTag>().ok().filter(|t| t.n() == self.n).map(|t| t.label().to_string()),
            Level::Bundles => name.parse::<Bundle>().ok().filter(|b| b.n() == self.n).map(|b| b.label()),
        };
        label.filter(|l| self.index.contains_key(l)).ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    fn successors(&self, k: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter(move |e| e.0 == k).map(|e| e.1)
    }

    fn predecessors(&self, k: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter(move |e| e.1 == k).map(|e| e.0)
    }

    fn reach_indices(&self, start: usize, dir: Direction) -> BTreeSet<usize> {
        let mut seen = BTreeSet::from([start]);
        let mut stack = vec![start];
        while let Some(k) = stack.pop() {
            let next: Vec<usize> = match dir {
                Direction::Up => self.successors(k).collect(),
                Direction::Down => self.predecessors(k).collect(),
            };
            for m in next {
                if seen.insert(m) {
                    stack.push(m);
                }
            }
        }
        seen
    }
}

fn class_vertex(t: ClassTag) -> Vertex {
    Vertex { tag: t.label().to_string(), family: t.is_family(), codim: t.codim() }
}

fn bundle_vertex(b: Bundle) -> Vertex {
    Vertex { tag: b.label(), family: b.is_family(), codim: b.codim() }
}

pub fn class_graph(n: usize) -> Result<ClosureGraph> {
    let vertices = ClassTag::all(n)?.iter().map(|&t| class_vertex(t)).collect();
    let edges: &[(&str, &str)] = if n == 2 { &CLASS_EDGES_2 } else { &CLASS_EDGES_3 };
    ClosureGraph::new(Level::Classes, n, vertices, edges)
}

pub fn bundle_graph(n: usize) -> Result<ClosureGraph> {
    let vertices = Bundle::all(n)?.into_iter().map(bundle_vertex).collect();
    let edges: &[(&str, &str)] = if n == 2 { &BUNDLE_EDGES_2 } else { &BUNDLE_EDGES_3 };
    ClosureGraph::new(Level::Bundles, n, vertices, edges)
}

/// Up-set (everything reachable, the vertex included) or down-set.
pub fn reach_set(g: &ClosureGraph, v: &str, direction: Direction) -> Result<Vec<String>> {
    let k = g.position(v)?;
    Ok(g.reach_indices(k, direction).into_iter().map(|i| g.vertices[i].tag.clone()).collect())
}

pub fn has_path(g: &ClosureGraph, v: &str, w: &str) -> Result<bool> {
    let (a, b) = (g.position(v)?, g.position(w)?);
    Ok(g.reach_indices(a, Direction::Up).contains(&b))
}

/// Partition of class vertices into bundles.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BundlePartition {
    pub blocks: Vec<Vec<String>>,
}

impl BundlePartition {
    /// Name of the block containing `tag`: member names with the family
    /// suffix removed, joined by `&`.
    pub fn block_name(&self, tag: &str) -> Option<String> {
        self.blocks.iter().find(|b| b.iter().any(|m| m == tag)).map(|b| {
            b.iter()
                .map(|m| m.split('_').next().unwrap_or(m).to_string())
                .collect::<Vec<_>>()
                .join("&")
        })
    }

    pub fn block_names(&self) -> Vec<String> {
        self.blocks.iter().map(|b| self.block_name(&b[0]).unwrap_or_default()).collect()
    }
}

/// Vertices `v`, `w` are equivalent when neither arrow joins them and they
/// have the same in- and out-neighbors; a family vertex stands for all of
/// its (mutually equivalent) members.
pub fn derive_bundles(g: &ClosureGraph) -> Result<BundlePartition> {
    if g.level != Level::Classes {
        return Err(Error::Parse("bundle derivation needs a class-level graph".into()));
    }
    let mut groups: BTreeMap<(Vec<usize>, Vec<usize>), Vec<usize>> = BTreeMap::new();
    for k in 0..g.vertices.len() {
        let mut ins: Vec<usize> = g.predecessors(k).collect();
        let mut outs: Vec<usize> = g.successors(k).collect();
        ins.sort_unstable();
        outs.sort_unstable();
        groups.entry((ins, outs)).or_default().push(k);
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for members in groups.into_values() {
        // equal neighborhoods already exclude arrows inside a group unless a
        // vertex has a self loop; split those out defensively
        let (looped, clean): (Vec<usize>, Vec<usize>) =
            members.into_iter().partition(|&k| g.edges.contains(&(k, k)));
        blocks.extend(looped.into_iter().map(|k| vec![k]));
        if !clean.is_empty() {
            blocks.push(clean);
        }
    }
    blocks.sort_by_key(|b| b[0]);
    Ok(BundlePartition {
        blocks: blocks.into_iter().map(|b| b.into_iter().map(|k| g.vertices[k].tag.clone()).collect()).collect(),
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    /// Vertices lying on a directed cycle.
    pub cycle_vertices: Vec<String>,
    /// Edges that do not lower the codimension.
    pub codim_violations: Vec<(String, String)>,
    /// Edges implied by a longer path.
    pub redundant_edges: Vec<(String, String)>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.cycle_vertices.is_empty() && self.codim_violations.is_empty() && self.redundant_edges.is_empty()
    }

    pub fn violation_count(&self) -> usize {
        self.cycle_vertices.len() + self.codim_violations.len() + self.redundant_edges.len()
    }
}

pub fn validate(g: &ClosureGraph) -> ValidationReport {
    let name = |k: usize| g.vertices[k].tag.clone();
    let mut report = ValidationReport::default();
    for k in 0..g.vertices.len() {
        let back = g.successors(k).any(|m| g.reach_indices(m, Direction::Up).contains(&k));
        if back {
            report.cycle_vertices.push(name(k));
        }
    }
    for &(a, b) in &g.edges {
        if g.vertices[a].codim <= g.vertices[b].codim {
            report.codim_violations.push((name(a), name(b)));
        }
        let alternative = g
            .successors(a)
            .filter(|&m| m != b)
            .any(|m| g.reach_indices(m, Direction::Up).contains(&b));
        if alternative {
            report.redundant_edges.push((name(a), name(b)));
        }
    }
    report
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    Dot,
    Json,
}

impl FromStr for ExportFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "dot" => Ok(ExportFormat::Dot),
            "json" => Ok(ExportFormat::Json),
            _ => Err(Error::UnknownFormat(s.to_string())),
        }
    }
}

fn display_label(tag: &str) -> String {
    tag.replace("_lambda", "_λ").replace("_mu", "_μ")
}

pub fn export(g: &ClosureGraph, format: ExportFormat) -> String {
    match format {
        ExportFormat::Json => {
            let doc = GraphJson {
                level: g.level,
                n: g.n,
                vertices: g.vertices.clone(),
                edges: g.edges().into_iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
            };
            serde_json::to_string_pretty(&doc).expect("graph serializes")
        }
        ExportFormat::Dot => {
            let mut out = format!("digraph \"{}_n{}\" {{\n  rankdir=TB;\n", g.level, g.n);
            for v in &g.vertices {
                out += &format!("  \"{}\" [label=\"{}\", codim={}", v.tag, display_label(&v.tag), v.codim);
                if v.family {
                    out += ", family=true";
                }
                out += "];\n";
            }
            let mut by_codim: BTreeMap<std::cmp::Reverse<usize>, Vec<&str>> = BTreeMap::new();
            for v in &g.vertices {
                by_codim.entry(std::cmp::Reverse(v.codim)).or_default().push(&v.tag);
            }
            for tags in by_codim.values() {
                let names: Vec<String> = tags.iter().map(|t| format!("\"{t}\";")).collect();
                out += &format!("  {{ rank=same; {} }}\n", names.join(" "));
            }
            for (a, b) in g.edges() {
                out += &format!("  \"{a}\" -> \"{b}\";\n");
            }
            out += "}\n";
            out
        }
    }
}

pub fn export_str(g: &ClosureGraph, format: &str) -> Result<String> {
    Ok(export(g, format.parse()?))
}

/// Reads the JSON produced by [`export`].
pub fn from_json(text: &str) -> Result<ClosureGraph> {
    let doc: GraphJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let edges: Vec<(&str, &str)> = doc.edges.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    ClosureGraph::new(doc.level, doc.n, doc.vertices, &edges)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Rank,
    SymRank,
    SkewRank,
    Codim,
    /// Continuity of the cosquare spectrum (of the matrix, or of the
    /// deflated core when both ranks are `n − 1` with parallel null vectors).
    CosquareLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Passed,
    Violated,
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub kind: CheckKind,
    pub status: CheckStatus,
    pub detail: String,
}

fn spectra_match(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let mut used = vec![false; b.len()];
    a.iter().all(|x| {
        let hit = (0..b.len()).find(|&j| !used[j] && (b[j] - x).norm() <= tol);
        hit.map(|j| used[j] = true).is_some()
    })
}

fn necessary_checks(v: &CanonicalClass, w: &CanonicalClass, compare_spectra: bool, tol: &Tolerance) -> Result<Vec<Check>> {
    if v.n() != w.n() {
        return Err(Error::InvalidDimension(w.n()));
    }
    let rv = classify(&canonical_matrix(v), tol)?.diagnostics;
    let rw = classify(&canonical_matrix(w), tol)?.diagnostics;
    let le = |kind, a: usize, b: usize, what: &str| Check {
        kind,
        status: if a <= b { CheckStatus::Passed } else { CheckStatus::Violated },
        detail: format!("{what} {a} ≤ {b}"),
    };
    let mut checks = vec![
        le(CheckKind::Rank, rv.rank, rw.rank, "rank"),
        le(CheckKind::SymRank, rv.sym_rank, rw.sym_rank, "symmetric part rank"),
        le(CheckKind::SkewRank, rv.skew_rank, rw.skew_rank, "skew part rank"),
        Check {
            kind: CheckKind::Codim,
            status: if v.codim() > w.codim() { CheckStatus::Passed } else { CheckStatus::Violated },
            detail: format!("codim {} > {}", v.codim(), w.codim()),
        },
    ];
    let n = v.n();
    let comparable = rv.rank == rw.rank
        && (rv.rank == n || (rv.rank + 1 == n && rv.null_vectors_parallel == Some(true) && rw.null_vectors_parallel == Some(true)));
    let limit = match (&rv.cosquare_spectrum, &rw.cosquare_spectrum) {
        (Some(sv), Some(sw)) if comparable && compare_spectra => {
            let ok = spectra_match(sv, sw, 1e3 * tol.eig_tol);
            Check {
                kind: CheckKind::CosquareLimit,
                status: if ok { CheckStatus::Passed } else { CheckStatus::Violated },
                detail: if ok {
                    "cosquare spectra agree".into()
                } else {
                    "cosquare spectrum cannot jump under small perturbation".into()
                },
            }
        }
        _ => Check {
            kind: CheckKind::CosquareLimit,
            status: CheckStatus::NotApplicable,
            detail: "spectra not comparable".into(),
        },
    };
    checks.push(limit);
    Ok(checks)
}

/// Semicontinuity tests an arrow `v → w` must pass: ranks of the matrix
/// and of its symmetric and skew parts cannot drop, the codimension must
/// drop, and cosquare spectra of comparable (nonsingular, or singular with
/// parallel null vectors) classes must agree.
pub fn necessary_conditions(v: &CanonicalClass, w: &CanonicalClass, tol: &Tolerance) -> Result<Vec<Check>> {
    necessary_checks(v, w, true, tol)
}

/// Representative class of a bundle; families use the member `λ = 2`.
pub fn bundle_representative(b: Bundle) -> CanonicalClass {
    let t = b.members()[0];
    if t.is_family() {
        CanonicalClass::family(t, Complex64::new(2.0, 0.0), &Tolerance::default()).expect("λ = 2 is allowed")
    } else {
        CanonicalClass::new(t).expect("plain tag")
    }
}

/// Bundle-level version: the target parameter may drift, so spectra are not
/// compared when the target is a family bundle.
pub fn bundle_necessary_conditions(v: Bundle, w: Bundle, tol: &Tolerance) -> Result<Vec<Check>> {
    let mut checks = necessary_checks(&bundle_representative(v), &bundle_representative(w), !w.is_family(), tol)?;
    for c in checks.iter_mut().filter(|c| c.kind == CheckKind::Codim) {
        c.status = if v.codim() > w.codim() { CheckStatus::Passed } else { CheckStatus::Violated };
        c.detail = format!("codim {} > {}", v.codim(), w.codim());
    }
    Ok(checks)
}

pub fn any_violated(checks: &[Check]) -> bool {
    checks.iter().any(|c| c.status == CheckStatus::Violated)
}

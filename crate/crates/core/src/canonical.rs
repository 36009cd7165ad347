//! Congruence canonical classes of 2×2 and 3×3 matrices, their block
//! constructors, and the classifier.
//!
//! Every square complex matrix is congruent to a direct sum of blocks
//! `H_m(λ)`, `Γ_n`, `J_k(0)` (k odd), unique up to permuting summands, with
//! each nonzero `λ` determined up to `λ ↦ 1/λ`. For `n = 2` this gives the six
//! classes `i … vi`; for `n = 3` the twelve classes `1 … 12`, two of which
//! (`v_λ`, `5_λ`, `11_μ`) are one-parameter families.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrixcore::{
    cosquare_structure, format_complex, rank_relative_to, right_null_and_complement,
    singular_values, svd, ComplexMatrix, CosquareStructure, Tolerance,
};

/// Parameter values at which the families are sampled in checks.
pub const FAMILY_SAMPLES: [Complex64; 5] = [
    Complex64::new(0.0, 0.0),
    Complex64::new(2.0, 0.0),
    Complex64::new(-3.0, 0.0),
    Complex64::new(0.0, 0.5),
    Complex64::new(1.0, 1.0),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassTag {
    I,
    II,
    III,
    IV,
    V,
    VI,
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
    T8,
    T9,
    T10,
    T11,
    T12,
}

impl ClassTag {
    pub const TWO: [ClassTag; 6] =
        [ClassTag::I, ClassTag::II, ClassTag::III, ClassTag::IV, ClassTag::V, ClassTag::VI];
    pub const THREE: [ClassTag; 12] = [
        ClassTag::T1,
        ClassTag::T2,
        ClassTag::T3,
        ClassTag::T4,
        ClassTag::T5,
        ClassTag::T6,
        ClassTag::T7,
        ClassTag::T8,
        ClassTag::T9,
        ClassTag::T10,
        ClassTag::T11,
        ClassTag::T12,
    ];

    pub fn all(n: usize) -> Result<&'static [ClassTag]> {
        match n {
            2 => Ok(&Self::TWO),
            3 => Ok(&Self::THREE),
            _ => Err(Error::InvalidDimension(n)),
        }
    }

    pub fn n(self) -> usize {
        if (self as u8) < 6 {
            2
        } else {
            3
        }
    }

    pub fn is_family(self) -> bool {
        matches!(self, ClassTag::V | ClassTag::T5 | ClassTag::T11)
    }

    /// Vertex label, e.g. `iii`, `v_lambda`, `5_lambda`, `11_mu`, `12`.
    pub fn label(self) -> &'static str {
        use ClassTag::*;
        match self {
            I => "i",
            II => "ii",
            III => "iii",
            IV => "iv",
            V => "v_lambda",
            VI => "vi",
            T1 => "1",
            T2 => "2",
            T3 => "3",
            T4 => "4",
            T5 => "5_lambda",
            T6 => "6",
            T7 => "7",
            T8 => "8",
            T9 => "9",
            T10 => "10",
            T11 => "11_mu",
            T12 => "12",
        }
    }

    /// Codimension of the congruence class (constant along the families).
    pub fn codim(self) -> usize {
        use ClassTag::*;
        match self {
            I => 4,
            II => 3,
            III => 2,
            IV | V | VI => 1,
            T1 => 9,
            T2 | T3 => 6,
            T4 | T5 | T6 => 4,
            T7 | T8 => 3,
            T9 => 2,
            T10 | T11 | T12 => 1,
        }
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for ClassTag {
    type Err = Error;

    /// Accepts vertex labels plus a few short spellings (`v`, `5`, `11`, `T5`, `11_0`...).
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let t = t.strip_prefix('t').filter(|r| r.starts_with(|c: char| c.is_ascii_digit())).unwrap_or(&t);
        let head = t.split(['_', '(']).next().unwrap_or("");
        use ClassTag::*;
        let tag = match head {
            "i" => I,
            "ii" => II,
            "iii" => III,
            "iv" => IV,
            "v" => V,
            "vi" => VI,
            "1" => T1,
            "2" => T2,
            "3" => T3,
            "4" => T4,
            "5" => T5,
            "6" => T6,
            "7" => T7,
            "8" => T8,
            "9" => T9,
            "10" => T10,
            "11" => T11,
            "12" => T12,
            _ => return Err(Error::UnknownVertex(s.to_string())),
        };
        Ok(tag)
    }
}

/// A canonical class: a tag plus, for the families, the normalized parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalClass {
    tag: ClassTag,
    param: Option<Complex64>,
}

impl CanonicalClass {
    /// Parameter-free class. Fails for the families.
    pub fn new(tag: ClassTag) -> Result<Self> {
        if tag.is_family() {
            return Err(Error::InvalidClass(format!("{tag} needs a parameter")));
        }
        Ok(Self { tag, param: None })
    }

    /// Family member; the parameter is normalized with [`normalize_lambda`].
    pub fn family(tag: ClassTag, lambda: Complex64, tol: &Tolerance) -> Result<Self> {
        if !tag.is_family() {
            return Err(Error::InvalidClass(format!("{tag} takes no parameter")));
        }
        Ok(Self { tag, param: Some(normalize_lambda(lambda, tol)?) })
    }

    /// `new` for plain tags, `family` for parametric ones.
    pub fn from_parts(tag: ClassTag, param: Option<Complex64>, tol: &Tolerance) -> Result<Self> {
        match (tag.is_family(), param) {
            (true, Some(l)) => Self::family(tag, l, tol),
            (false, None) => Self::new(tag),
            (true, None) => Err(Error::InvalidClass(format!("{tag} needs a parameter"))),
            (false, Some(_)) => Err(Error::InvalidClass(format!("{tag} takes no parameter"))),
        }
    }

    pub fn tag(&self) -> ClassTag {
        self.tag
    }

    pub fn param(&self) -> Option<Complex64> {
        self.param
    }

    pub fn n(&self) -> usize {
        self.tag.n()
    }

    pub fn codim(&self) -> usize {
        self.tag.codim()
    }

    /// All classes of dimension `n`, families sampled at [`FAMILY_SAMPLES`].
    pub fn catalog(n: usize) -> Result<Vec<CanonicalClass>> {
        let tol = Tolerance::default();
        let mut out = Vec::new();
        for &tag in ClassTag::all(n)? {
            if tag.is_family() {
                for &l in &FAMILY_SAMPLES {
                    out.push(Self::family(tag, l, &tol)?);
                }
            } else {
                out.push(Self::new(tag)?);
            }
        }
        Ok(out)
    }

    /// Same tag, and parameters (if any) within `param_tol`.
    pub fn matches(&self, other: &CanonicalClass, param_tol: f64) -> bool {
        self.tag == other.tag
            && match (self.param, other.param) {
                (Some(a), Some(b)) => (a - b).norm() <= param_tol,
                (None, None) => true,
                _ => false,
            }
    }
}

impl fmt::Display for CanonicalClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.param {
            Some(p) => write!(f, "{}({})", self.tag, format_complex(p)),
            None => write!(f, "{}", self.tag),
        }
    }
}

/// Bundles under congruence: `v_λ` and `vi` merge for `n = 2`; each family
/// collapses to one bundle for `n = 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Bundle {
    I,
    II,
    III,
    IV,
    VVi,
    B(u8),
}

impl Bundle {
    pub fn all(n: usize) -> Result<Vec<Bundle>> {
        match n {
            2 => Ok(vec![Bundle::I, Bundle::II, Bundle::III, Bundle::IV, Bundle::VVi]),
            3 => Ok((1..=12).map(Bundle::B).collect()),
            _ => Err(Error::InvalidDimension(n)),
        }
    }

    pub fn n(self) -> usize {
        match self {
            Bundle::B(_) => 3,
            _ => 2,
        }
    }

    pub fn label(self) -> String {
        match self {
            Bundle::I => "i".into(),
            Bundle::II => "ii".into(),
            Bundle::III => "iii".into(),
            Bundle::IV => "iv".into(),
            Bundle::VVi => "v&vi".into(),
            Bundle::B(k) => k.to_string(),
        }
    }

    pub fn is_family(self) -> bool {
        matches!(self, Bundle::VVi | Bundle::B(5) | Bundle::B(11))
    }

    /// Class tags whose union forms this bundle.
    pub fn members(self) -> Vec<ClassTag> {
        match self {
            Bundle::I => vec![ClassTag::I],
            Bundle::II => vec![ClassTag::II],
            Bundle::III => vec![ClassTag::III],
            Bundle::IV => vec![ClassTag::IV],
            Bundle::VVi => vec![ClassTag::V, ClassTag::VI],
            Bundle::B(k) => vec![ClassTag::THREE[k as usize - 1]],
        }
    }

    /// Codimension of the bundle: the least over its member classes of the
    /// class codimension minus the number of free parameters.
    pub fn codim(self) -> usize {
        self.members()
            .into_iter()
            .map(|t| t.codim() - usize::from(t.is_family()))
            .min()
            .unwrap_or(0)
    }
}

impl fmt::Display for Bundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for Bundle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        match t.as_str() {
            "i" => Ok(Bundle::I),
            "ii" => Ok(Bundle::II),
            "iii" => Ok(Bundle::III),
            "iv" => Ok(Bundle::IV),
            "v&vi" | "v" | "vi" | "v_lambda" => Ok(Bundle::VVi),
            _ => {
                let tag: ClassTag = t.parse().map_err(|_| Error::UnknownVertex(s.to_string()))?;
                if tag.n() == 3 {
                    Ok(Bundle::B(tag as u8 - ClassTag::T1 as u8 + 1))
                } else {
                    Err(Error::UnknownVertex(s.to_string()))
                }
            }
        }
    }
}

pub fn bundle_of_tag(tag: ClassTag) -> Bundle {
    match tag {
        ClassTag::I => Bundle::I,
        ClassTag::II => Bundle::II,
        ClassTag::III => Bundle::III,
        ClassTag::IV => Bundle::IV,
        ClassTag::V | ClassTag::VI => Bundle::VVi,
        t => Bundle::B(t as u8 - ClassTag::T1 as u8 + 1),
    }
}

pub fn bundle_of(c: &CanonicalClass) -> Bundle {
    bundle_of_tag(c.tag())
}

/// Canonical direct summands.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Block {
    /// `H_m(λ) = [[0, I_m], [J_m(λ), 0]]`, size `2m`.
    H { m: usize, lambda: Complex64 },
    /// `Γ_n`, size `n`.
    Gamma(usize),
    /// `J_k(0)` with `k` odd, size `k`.
    J(usize),
}

impl Block {
    pub fn size(&self) -> usize {
        match *self {
            Block::H { m, .. } => 2 * m,
            Block::Gamma(n) => n,
            Block::J(k) => k,
        }
    }

    /// Dense entries (row-major) of the block.
    pub fn entries(&self) -> Result<Vec<Vec<Complex64>>> {
        let z = |re: f64| Complex64::new(re, 0.0);
        match *self {
            Block::H { m, lambda } => {
                if m != 1 {
                    return Err(Error::InvalidBlockParameter(format!(
                        "H_{m} does not fit in a 3×3 matrix"
                    )));
                }
                // λ ≠ (−1)^{m+1}
                if lambda == z(1.0) {
                    return Err(Error::InvalidBlockParameter("H_1(λ) requires λ ≠ 1".into()));
                }
                Ok(vec![vec![z(0.0), z(1.0)], vec![lambda, z(0.0)]])
            }
            Block::Gamma(n) => match n {
                1 => Ok(vec![vec![z(1.0)]]),
                2 => Ok(vec![vec![z(0.0), z(-1.0)], vec![z(1.0), z(1.0)]]),
                3 => Ok(vec![
                    vec![z(0.0), z(0.0), z(1.0)],
                    vec![z(0.0), z(-1.0), z(-1.0)],
                    vec![z(1.0), z(1.0), z(0.0)],
                ]),
                _ => Err(Error::InvalidBlockParameter(format!("Γ_{n} does not fit in a 3×3 matrix"))),
            },
            Block::J(k) => {
                if k % 2 == 0 {
                    return Err(Error::InvalidBlockParameter(format!("J_{k}(0) requires odd k")));
                }
                if k > 3 {
                    return Err(Error::InvalidBlockParameter(format!("J_{k}(0) does not fit in a 3×3 matrix")));
                }
                Ok((0..k)
                    .map(|i| (0..k).map(|j| z(if j == i + 1 { 1.0 } else { 0.0 })).collect())
                    .collect())
            }
        }
    }
}

/// Builds a single block as a 2×2 or 3×3 matrix.
pub fn block(kind: Block) -> Result<ComplexMatrix> {
    direct_sum(&[kind])
}

/// Block-diagonal direct sum; the total size must be 2 or 3.
pub fn direct_sum(blocks: &[Block]) -> Result<ComplexMatrix> {
    let n: usize = blocks.iter().map(Block::size).sum();
    let mut m = ComplexMatrix::zeros(n)?;
    let mut off = 0;
    for b in blocks {
        let e = b.entries()?;
        for (i, row) in e.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m[(off + i, off + j)] = v;
            }
        }
        off += b.size();
    }
    Ok(m)
}

/// Block decomposition of the canonical matrix of `c`.
pub fn canonical_blocks(c: &CanonicalClass) -> Vec<Block> {
    use Block::*;
    use ClassTag::*;
    let minus_one = Complex64::new(-1.0, 0.0);
    let lam = c.param().unwrap_or_default();
    match c.tag() {
        I => vec![J(1), J(1)],
        II => vec![H { m: 1, lambda: minus_one }],
        III => vec![Gamma(1), J(1)],
        IV => vec![Gamma(2)],
        V => vec![H { m: 1, lambda: lam }],
        VI => vec![Gamma(1), Gamma(1)],
        T1 => vec![J(1), J(1), J(1)],
        T2 => vec![H { m: 1, lambda: minus_one }, J(1)],
        T3 => vec![Gamma(1), J(1), J(1)],
        T4 => vec![Gamma(2), J(1)],
        T5 => vec![H { m: 1, lambda: lam }, J(1)],
        T6 => vec![Gamma(1), Gamma(1), J(1)],
        T7 => vec![H { m: 1, lambda: minus_one }, Gamma(1)],
        T8 => vec![Gamma(1), Gamma(1), Gamma(1)],
        T9 => vec![J(3)],
        T10 => vec![Gamma(2), Gamma(1)],
        T11 => vec![H { m: 1, lambda: lam }, Gamma(1)],
        T12 => vec![Gamma(3)],
    }
}

pub fn canonical_matrix(c: &CanonicalClass) -> ComplexMatrix {
    direct_sum(&canonical_blocks(c)).expect("catalog blocks are valid")
}

/// Representative of `{λ, 1/λ}`: the member of modulus > 1, or on the unit
/// circle the member with positive imaginary part. `0` maps to itself.
pub fn normalize_lambda(lambda: Complex64, tol: &Tolerance) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    if !(lambda.re.is_finite() && lambda.im.is_finite()) {
        return Err(Error::InvalidClass(format!("non-finite parameter {lambda}")));
    }
    if (lambda - one).norm() <= tol.eig_tol || (lambda + one).norm() <= tol.eig_tol {
        return Err(Error::ExcludedParameter(format_complex(lambda)));
    }
    if lambda.norm() == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let inv = lambda.inv();
    if (lambda.norm() - 1.0).abs() <= tol.eig_tol {
        Ok(if lambda.im > 0.0 { lambda } else { inv })
    } else if lambda.norm() > 1.0 {
        Ok(lambda)
    } else {
        Ok(inv)
    }
}

/// Something the classifier noticed near one of its thresholds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Warning {
    /// A singular value ratio within two decades of `rank_tol`.
    NearRankThreshold { quantity: String, ratio: f64 },
    /// A cosquare eigenvalue within `10·eig_tol` of ±1 (snapped or not).
    NearUnitEigenvalue { distance: f64, snapped: bool },
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Warning::NearRankThreshold { quantity, ratio } => {
                write!(f, "{quantity}: singular value ratio {ratio:.3e} is close to the rank threshold")
            }
            Warning::NearUnitEigenvalue { distance, snapped } => write!(
                f,
                "cosquare eigenvalue at distance {distance:.3e} from ±1 ({})",
                if *snapped { "snapped" } else { "kept" }
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub rank: usize,
    pub sym_rank: usize,
    pub skew_rank: usize,
    pub singular_values: Vec<f64>,
    /// Cosquare spectrum (of the matrix, or of the deflated 2×2 core for rank-2 3×3 inputs).
    pub cosquare_spectrum: Option<Vec<Complex64>>,
    /// For rank `n − 1`: whether the left and right null vectors are parallel.
    pub null_vectors_parallel: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub class: CanonicalClass,
    pub diagnostics: Diagnostics,
    pub warnings: Vec<Warning>,
}

struct Ctx<'a> {
    tol: &'a Tolerance,
    warnings: Vec<Warning>,
}

impl Ctx<'_> {
    fn check_ratio(&mut self, quantity: &str, ratio: f64) {
        let lo = 0.1 * self.tol.rank_tol;
        let hi = 100.0 * self.tol.rank_tol;
        if ratio >= lo && ratio <= hi {
            self.warnings.push(Warning::NearRankThreshold { quantity: quantity.to_string(), ratio });
        }
    }

    fn check_singular_values(&mut self, quantity: &str, sv: &[f64], scale: f64) {
        if scale == 0.0 {
            return;
        }
        for &s in sv {
            self.check_ratio(quantity, s / scale);
        }
    }

    fn check_cosquare(&mut self, cs: &CosquareStructure) {
        let d = cs.boundary_distance;
        if d >= 0.1 * self.tol.eig_tol && d <= 10.0 * self.tol.eig_tol {
            self.warnings.push(Warning::NearUnitEigenvalue { distance: d, snapped: cs.snapped });
        }
    }
}

fn unclassifiable(msg: impl Into<String>) -> Error {
    Error::UnclassifiableStructure(msg.into())
}

/// Classifies a nonsingular matrix by its cosquare spectrum and the
/// geometric multiplicities at ±1. Returns the 2×2 or 3×3 class.
fn classify_nonsingular(
    a: &ComplexMatrix,
    ctx: &mut Ctx<'_>,
) -> Result<(CanonicalClass, CosquareStructure)> {
    let cs = cosquare_structure(a, ctx.tol)?;
    ctx.check_cosquare(&cs);
    let one = Complex64::new(1.0, 0.0);
    let n = a.n();
    let class = if cs.snapped {
        let mu = cs.spectrum[0];
        let g = cs.geo_mult_of(mu).unwrap_or(0);
        let tag = match (n, mu == one, g) {
            (2, true, 2) => ClassTag::VI,
            (2, false, 2) => ClassTag::II,
            (2, false, 1) => ClassTag::IV,
            (3, true, 3) => ClassTag::T8,
            (3, true, 1) => ClassTag::T12,
            (3, false, 2) => ClassTag::T7,
            (3, false, 1) => ClassTag::T10,
            _ => {
                return Err(unclassifiable(format!(
                    "eigenvalue {} of multiplicity {} has geometric multiplicity {g}",
                    format_complex(mu),
                    cs.spectrum.iter().filter(|&&x| x == mu).count()
                )))
            }
        };
        CanonicalClass::new(tag)?
    } else {
        let tag = if n == 2 { ClassTag::V } else { ClassTag::T11 };
        CanonicalClass::family(tag, cs.spectrum[0], ctx.tol)?
    };
    Ok((class, cs))
}

/// Determines the congruence class of a 2×2 or 3×3 matrix.
///
/// Decision tree: rank; for rank 1 whether the matrix is symmetric; for
/// rank `n` the cosquare spectrum with geometric multiplicities at ±1; for
/// rank 2 of a 3×3 matrix whether the left and right null vectors are
/// parallel. Parallel null vectors `v` let the matrix deflate to a
/// nonsingular 2×2 core `WᵀAW` (with `[W | v]` unitary). Otherwise the class is
/// `9` or `11_0`, told apart by the congruence invariant `vᵀAu` (zero for `9`).
pub fn classify(a: &ComplexMatrix, tol: &Tolerance) -> Result<ClassificationReport> {
    if !a.is_finite() {
        return Err(Error::NonFinite { row: 0, col: 0 });
    }
    let n = a.n();
    let mut ctx = Ctx { tol, warnings: Vec::new() };
    let sv = singular_values(a);
    let smax = sv[0];
    let rank = if smax == 0.0 { 0 } else { svd::count_above(&sv, tol.rank_tol * smax) };
    ctx.check_singular_values("matrix", &sv, smax);
    let (s, k) = a.sym_skew_parts();
    let sym_rank = rank_relative_to(&s, smax, tol);
    let skew_rank = rank_relative_to(&k, smax, tol);

    let mut spectrum = None;
    let mut parallel = None;
    let zero = Complex64::new(0.0, 0.0);

    let class = match (n, rank) {
        (2, 0) => CanonicalClass::new(ClassTag::I)?,
        (3, 0) => CanonicalClass::new(ClassTag::T1)?,
        (_, 1) => {
            ctx.check_singular_values("skew part", &singular_values(&k), smax);
            match (n, skew_rank) {
                (2, 0) => CanonicalClass::new(ClassTag::III)?,
                (3, 0) => CanonicalClass::new(ClassTag::T3)?,
                (2, _) => CanonicalClass::family(ClassTag::V, zero, tol)?,
                _ => CanonicalClass::family(ClassTag::T5, zero, tol)?,
            }
        }
        (3, 2) => {
            let (v, w) = right_null_and_complement(a);
            let (u, _) = right_null_and_complement(&a.transpose());
            // vᵀA, and vᵀAu
            let vt_a: Vec<Complex64> = (0..3).map(|j| (0..3).map(|i| v[i] * a[(i, j)]).sum()).collect();
            let left_residual = vt_a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt() / smax;
            ctx.check_ratio("left residual of right null vector", left_residual);
            if left_residual <= tol.rank_tol {
                parallel = Some(true);
                let mut core = ComplexMatrix::zeros(2)?;
                for p in 0..2 {
                    for q in 0..2 {
                        core[(p, q)] = (0..3)
                            .flat_map(|i| (0..3).map(move |j| (i, j)))
                            .map(|(i, j)| w[p][i] * a[(i, j)] * w[q][j])
                            .sum();
                    }
                }
                let core_sv = singular_values(&core);
                if core_sv[1] <= tol.rank_tol * smax {
                    return Err(unclassifiable("deflated 2×2 core is singular"));
                }
                let (core_class, cs) = classify_nonsingular(&core, &mut ctx)?;
                spectrum = Some(cs.spectrum.clone());
                match core_class.tag() {
                    ClassTag::II => CanonicalClass::new(ClassTag::T2)?,
                    ClassTag::IV => CanonicalClass::new(ClassTag::T4)?,
                    ClassTag::VI => CanonicalClass::new(ClassTag::T6)?,
                    ClassTag::V => CanonicalClass::family(
                        ClassTag::T5,
                        core_class.param().expect("family has a parameter"),
                        tol,
                    )?,
                    other => return Err(unclassifiable(format!("unexpected core class {other}"))),
                }
            } else {
                parallel = Some(false);
                let vau: Complex64 = (0..3)
                    .flat_map(|i| (0..3).map(move |j| (i, j)))
                    .map(|(i, j)| v[i] * a[(i, j)] * u[j])
                    .sum();
                let ratio = vau.norm() / smax;
                ctx.check_ratio("vᵀAu", ratio);
                if ratio <= tol.rank_tol {
                    CanonicalClass::new(ClassTag::T9)?
                } else {
                    CanonicalClass::family(ClassTag::T11, zero, tol)?
                }
            }
        }
        (2, 2) | (3, 3) => {
            let (c, cs) = classify_nonsingular(a, &mut ctx)?;
            if cs.snapped {
                let which = if cs.spectrum[0].re > 0.0 { &k } else { &s };
                ctx.check_singular_values("pencil at ±1", &singular_values(which), smax);
            }
            spectrum = Some(cs.spectrum);
            c
        }
        _ => unreachable!("rank ≤ n"),
    };

    Ok(ClassificationReport {
        class,
        diagnostics: Diagnostics {
            rank,
            sym_rank,
            skew_rank,
            singular_values: sv,
            cosquare_spectrum: spectrum,
            null_vectors_parallel: parallel,
        },
        warnings: ctx.warnings,
    })
}

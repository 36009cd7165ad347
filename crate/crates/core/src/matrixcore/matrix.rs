use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense `n × n` complex matrix with `n ∈ {2, 3}`, stored row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    n: usize,
    data: [Complex64; 9],
}

fn check_dim(n: usize) -> Result<()> {
    if n == 2 || n == 3 {
        Ok(())
    } else {
        Err(Error::InvalidDimension(n))
    }
}

impl ComplexMatrix {
    pub fn zeros(n: usize) -> Result<Self> {
        check_dim(n)?;
        Ok(Self { n, data: [ZERO; 9] })
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = Self::zeros(n)?;
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        Ok(m)
    }

    /// Builds a matrix from complex rows. Rejects ragged input and non-finite entries.
    pub fn from_rows<R: AsRef<[Complex64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut m = Self::zeros(n)?;
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != n {
                return Err(Error::Parse(format!(
                    "row {} has {} entries, expected {}",
                    i + 1,
                    row.len(),
                    n
                )));
            }
            for (j, &z) in row.iter().enumerate() {
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFinite { row: i + 1, col: j + 1 });
                }
                m[(i, j)] = z;
            }
        }
        Ok(m)
    }

    pub fn from_real_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.as_ref().iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn diag(entries: &[Complex64]) -> Result<Self> {
        let mut m = Self::zeros(entries.len())?;
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        Ok(m)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)]).collect())
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn is_finite(&self) -> bool {
        self.entries().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn entries(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.data[..self.n * self.n].iter().copied()
    }

    /// Plain transpose (no conjugation).
    pub fn transpose(&self) -> Self {
        let mut t = *self;
        for i in 0..self.n {
            for j in 0..self.n {
                t[(i, j)] = self[(j, i)];
            }
        }
        t
    }

    pub fn conj_transpose(&self) -> Self {
        let mut t = self.transpose();
        for z in t.data.iter_mut() {
            *z = z.conj();
        }
        t
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let mut m = *self;
        for z in m.data.iter_mut() {
            *z *= s;
        }
        m
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.entries().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn det(&self) -> Complex64 {
        let a = |i, j| self[(i, j)];
        match self.n {
            2 => a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0),
            _ => {
                a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
                    - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
                    + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0))
            }
        }
    }

    /// Inverse via the adjugate. Returns `SingularMatrix` when the determinant is exactly zero.
    pub fn inverse(&self) -> Result<Self> {
        let d = self.det();
        if d == ZERO {
            return Err(Error::SingularMatrix);
        }
        let a = |i: usize, j: usize| self[(i, j)];
        let mut inv = *self;
        match self.n {
            2 => {
                inv[(0, 0)] = a(1, 1);
                inv[(0, 1)] = -a(0, 1);
                inv[(1, 0)] = -a(1, 0);
                inv[(1, 1)] = a(0, 0);
            }
            _ => {
                for i in 0..3 {
                    for j in 0..3 {
                        // cofactor of (j, i)
                        let (r0, r1) = others(j);
                        let (c0, c1) = others(i);
                        let minor = a(r0, c0) * a(r1, c1) - a(r0, c1) * a(r1, c0);
                        let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                        inv[(i, j)] = minor * sign;
                    }
                }
            }
        }
        Ok(inv.scale(d.inv()))
    }

    /// `SᵀAS`.
    pub fn congruence(&self, s: &ComplexMatrix) -> ComplexMatrix {
        s.transpose() * *self * *s
    }

    /// Symmetric and skew-symmetric parts `(A + Aᵀ)/2`, `(A − Aᵀ)/2`.
    pub fn sym_skew_parts(&self) -> (ComplexMatrix, ComplexMatrix) {
        let t = self.transpose();
        let half = Complex64::new(0.5, 0.0);
        let mut s = *self;
        let mut k = *self;
        for i in 0..self.n {
            for j in 0..self.n {
                s[(i, j)] = (self[(i, j)] + t[(i, j)]) * half;
                k[(i, j)] = (self[(i, j)] - t[(i, j)]) * half;
            }
        }
        (s, k)
    }

    /// `A ⊕ [c]`: pads a 2×2 matrix to 3×3.
    pub fn direct_sum_scalar(&self, c: Complex64) -> Result<Self> {
        if self.n != 2 {
            return Err(Error::InvalidDimension(self.n + 1));
        }
        let mut m = Self::zeros(3)?;
        for i in 0..2 {
            for j in 0..2 {
                m[(i, j)] = self[(i, j)];
            }
        }
        m[(2, 2)] = c;
        Ok(m)
    }

    /// Column-major copy, used by the SVD routines.
    pub(crate) fn columns(&self) -> Vec<Vec<Complex64>> {
        (0..self.n).map(|j| self.column(j)).collect()
    }
}

fn others(k: usize) -> (usize, usize) {
    match k {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        debug_assert!(i < self.n && j < self.n);
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        debug_assert!(i < self.n && j < self.n);
        &mut self.data[i * self.n + j]
    }
}

impl Add for ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(mut self, rhs: ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(rhs.data.iter()) {
            *a += b;
        }
        self
    }
}

impl Sub for ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(mut self, rhs: ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(rhs.data.iter()) {
            *a -= b;
        }
        self
    }
}

impl Neg for ComplexMatrix {
    type Output = ComplexMatrix;
    fn neg(self) -> ComplexMatrix {
        self.scale(-ONE)
    }
}

impl Mul for ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.n, rhs.n, "dimension mismatch");
        let n = self.n;
        let mut out = ComplexMatrix { n, data: [ZERO; 9] };
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (0..n).map(|k| self[(i, k)] * rhs[(k, j)]).sum();
            }
        }
        out
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.n {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", format_complex(self[(i, j)]))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

pub fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else if z.re == 0.0 {
        format!("{}i", z.im)
    } else if z.im < 0.0 {
        format!("{}-{}i", z.re, -z.im)
    } else {
        format!("{}+{}i", z.re, z.im)
    }
}

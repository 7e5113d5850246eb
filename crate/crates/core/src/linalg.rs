//! Small dense complex matrices and the predicate checks used by every
//! other module (unitary, projection, partial isometry, PSD).
//!
//! All residuals are Frobenius norms.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// Residual bounds used by every check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    /// Bound on equality residuals.
    pub eps_eq: f64,
    /// Slack allowed below zero for the smallest eigenvalue of a PSD matrix.
    pub eps_psd: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { eps_eq: 1e-9, eps_psd: 1e-8 }
    }
}

impl Tolerance {
    pub fn new(eps_eq: f64, eps_psd: f64) -> Result<Self> {
        if !(eps_eq > 0.0 && eps_psd > 0.0) {
            return Err(Error::BadTolerance { eps_eq, eps_psd });
        }
        Ok(Tolerance { eps_eq, eps_psd })
    }
}

/// Outcome of a single numerical predicate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Check {
    pub pass: bool,
    pub residual: f64,
}

impl Check {
    fn within(residual: f64, eps: f64) -> Self {
        Check { pass: residual <= eps, residual }
    }
}

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    /// Builds from rows of equal length. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        ComplexMatrix { rows: rows.len(), cols, data: rows.concat() }
    }

    pub fn from_real(rows: &[&[f64]]) -> Self {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&v| Complex64::new(v, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    /// Matrix unit `E_{ij}` of size `n`, 0-based.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(n, n);
        m[(i, j)] = ONE;
        m
    }

    /// Column vector.
    pub fn column(entries: &[Complex64]) -> Self {
        ComplexMatrix { rows: entries.len(), cols: 1, data: entries.to_vec() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[Complex64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m[(c, r)] = self[(r, c)].conj();
            }
        }
        m
    }

    pub fn scale(&self, s: Complex64) -> Self {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Trace divided by dimension, so the identity has trace one.
    pub fn normalized_trace(&self) -> Complex64 {
        if self.rows == 0 {
            return ZERO;
        }
        self.trace() / self.rows as f64
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Exactly zero in every entry.
    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn pow(&self, k: usize) -> Self {
        assert!(self.is_square());
        (0..k).fold(Self::identity(self.rows), |acc, _| &acc * self)
    }

    /// Block `(r0, c0)` of size `h x w`.
    pub fn submatrix(&self, r0: usize, c0: usize, h: usize, w: usize) -> Self {
        let mut m = Self::zeros(h, w);
        for r in 0..h {
            for c in 0..w {
                m[(r, c)] = self[(r0 + r, c0 + c)];
            }
        }
        m
    }

    pub fn set_submatrix(&mut self, r0: usize, c0: usize, block: &Self) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self[(r0 + r, c0 + c)] = block[(r, c)];
            }
        }
    }

    /// Commutator `AB - BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = ComplexMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(r, k)];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let rhs_row = rhs.row(k);
                let out_row = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        out
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn neg(self) -> ComplexMatrix {
        self.scale_real(-1.0)
    }
}

/// JSON: row-major nested arrays of `[re, im]` pairs.
impl Serialize for ComplexMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..self.rows)
            .map(|r| self.row(r).iter().map(|z| [z.re, z.im]).collect())
            .collect();
        rows.serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(serde::de::Error::custom("ragged matrix rows"));
        }
        let data = rows.iter().flatten().map(|&[re, im]| Complex64::new(re, im)).collect();
        Ok(ComplexMatrix { rows: rows.len(), cols, data })
    }
}

/// `M*M = I` and `MM* = I`; residual is the larger of the two norms.
pub fn is_unitary(m: &ComplexMatrix, tol: &Tolerance) -> Result<Check> {
    m.require_square()?;
    let id = ComplexMatrix::identity(m.rows);
    let adj = m.adjoint();
    let left = (&adj * m).distance(&id);
    let right = (m * &adj).distance(&id);
    Ok(Check::within(left.max(right), tol.eps_eq))
}

/// `M^2 = M` and `M* = M`.
pub fn is_projection(m: &ComplexMatrix, tol: &Tolerance) -> Result<Check> {
    m.require_square()?;
    let idem = (m * m).distance(m);
    let herm = m.adjoint().distance(m);
    Ok(Check::within(idem.max(herm), tol.eps_eq))
}

/// `M M* M = M`.
pub fn is_partial_isometry(m: &ComplexMatrix, tol: &Tolerance) -> Result<Check> {
    m.require_square()?;
    let mmm = &(m * &m.adjoint()) * m;
    Ok(Check::within(mmm.distance(m), tol.eps_eq))
}

/// Eigenvalues of `(M + M*)/2` in ascending order.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    m.require_square()?;
    if m.rows == 0 {
        return Ok(Vec::new());
    }
    let sym = (m + &m.adjoint()).scale_real(0.5);
    let mut eig: Vec<f64> = sym.to_nalgebra().symmetric_eigenvalues().iter().copied().collect();
    eig.sort_by(f64::total_cmp);
    Ok(eig)
}

pub fn min_eigenvalue_hermitian(m: &ComplexMatrix) -> Result<f64> {
    let eig = hermitian_eigenvalues(m)?;
    Ok(eig.first().copied().unwrap_or(0.0))
}

/// Spectral projections of an order-`k` unitary,
/// `e_a = (1/k) sum_b w^{-ab} u^b` with `w = exp(2 pi i / k)`,
/// so that `u = sum_a w^a e_a`.
pub fn spectral_projections(
    u: &ComplexMatrix,
    k: usize,
    tol: &Tolerance,
) -> Result<Vec<ComplexMatrix>> {
    u.require_square()?;
    assert!(k >= 1, "order must be positive");
    let d = u.rows;
    let powers: Vec<ComplexMatrix> = std::iter::successors(Some(ComplexMatrix::identity(d)), |p| {
        Some(p * u)
    })
    .take(k + 1)
    .collect();
    let residual = powers[k].distance(&ComplexMatrix::identity(d));
    if residual > tol.eps_eq {
        return Err(Error::NotOrderK { k, residual });
    }
    let projections = (0..k)
        .map(|a| {
            let mut e = ComplexMatrix::zeros(d, d);
            for (b, p) in powers.iter().take(k).enumerate() {
                let phase = root_of_unity(k, -((a * b % k) as i64));
                e = &e + &p.scale(phase);
            }
            e.scale_real(1.0 / k as f64)
        })
        .collect();
    Ok(projections)
}

/// `exp(2 pi i m / k)`.
pub fn root_of_unity(k: usize, m: i64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * m as f64 / k as f64)
}

/// Haar-distributed unitary via Gram-Schmidt on a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> ComplexMatrix {
    loop {
        let mut cols: Vec<Vec<Complex64>> = (0..d)
            .map(|_| {
                (0..d)
                    .map(|_| {
                        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
                    })
                    .collect()
            })
            .collect();
        let mut degenerate = false;
        for j in 0..d {
            for i in 0..j {
                let proj: Complex64 =
                    cols[i].iter().zip(&cols[j]).map(|(a, b)| a.conj() * b).sum();
                let qi = cols[i].clone();
                for (x, q) in cols[j].iter_mut().zip(&qi) {
                    *x -= proj * q;
                }
            }
            let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm < 1e-8 {
                degenerate = true;
                break;
            }
            cols[j].iter_mut().for_each(|z| *z /= norm);
        }
        if degenerate {
            continue;
        }
        let mut m = ComplexMatrix::zeros(d, d);
        for (c, col) in cols.iter().enumerate() {
            for (r, &z) in col.iter().enumerate() {
                m[(r, c)] = z;
            }
        }
        return m;
    }
}

/// Uniformly random unit-modulus complex number.
pub fn random_phase<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.random_range(0.0..2.0 * PI))
}

//! Small dense complex matrices.
//!
//! Everything in this crate lives in spaces of dimension at most N+1 with
//! N around a dozen, so matrices are plain row-major `Vec<Complex64>`
//! buffers. The only non-trivial kernel is the exponential of a Hermitian
//! generator, computed from its real spectrum so that every propagator is
//! unitary to round-off.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Maximum tolerated deviation from Hermitian symmetry.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[inline]
pub fn cis(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_diag(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds a matrix from a row-major buffer.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::validation(format!(
                "cannot build a {rows}x{cols} matrix from {} entries",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows<const C: usize>(rows: &[[C64; C]]) -> Self {
        let data = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self {
            rows: rows.len(),
            cols: C,
            data,
        }
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

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest |H_jk - conj(H_kj)| over all index pairs, diagonal included.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Leading `n`×`n` sub-block.
    pub fn leading_block(&self, n: usize) -> Self {
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = self[(i, j)];
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::validation(format!(
                "shape mismatch in product: {}x{} * {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.data[k * rhs.cols + j];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &CVector) -> Result<CVector> {
        if self.cols != x.dim() {
            return Err(Error::validation("shape mismatch in matrix-vector product"));
        }
        let out = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self[(i, j)] * x[j]).sum())
            .collect();
        Ok(CVector::new(out))
    }

    pub fn determinant(&self) -> Result<C64> {
        if !self.is_square() {
            return Err(Error::validation("determinant of a non-square matrix"));
        }
        Ok(self.to_nalgebra().determinant())
    }

    fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    fn from_nalgebra(m: &DMatrix<C64>) -> Self {
        let mut out = Self::zeros(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                out[(i, j)] = m[(i, j)];
            }
        }
        out
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Panics on shape mismatch; use [`CMatrix::matmul`] for checked products.
impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CVector {
    data: Vec<C64>,
}

impl CVector {
    pub fn new(data: Vec<C64>) -> Self {
        Self { data }
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut data = vec![C64::new(0.0, 0.0); dim];
        data[k] = C64::new(1.0, 0.0);
        Self { data }
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `|‖x‖₂ - 1|`.
    pub fn normalization_defect(&self) -> f64 {
        (self.norm() - 1.0).abs()
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(Error::validation(
                "cannot normalize a zero or non-finite vector",
            ));
        }
        Ok(Self::new(self.data.iter().map(|z| z / n).collect()))
    }

    /// Inner product ⟨self|other⟩ (conjugate-linear in `self`).
    pub fn inner(&self, other: &Self) -> C64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// The projector-like outer product |self⟩⟨other|.
    pub fn outer(&self, other: &Self) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim(), other.dim());
        for (i, a) in self.data.iter().enumerate() {
            for (j, b) in other.data.iter().enumerate() {
                m[(i, j)] = a * b.conj();
            }
        }
        m
    }

    pub fn axpy(&mut self, alpha: C64, x: &Self) {
        for (y, xi) in self.data.iter_mut().zip(&x.data) {
            *y += alpha * xi;
        }
    }

    /// Zero-pads to `dim`, appending trailing zero components.
    pub fn padded(&self, dim: usize) -> Self {
        let mut data = self.data.clone();
        data.resize(dim, C64::new(0.0, 0.0));
        Self { data }
    }
}

impl Index<usize> for CVector {
    type Output = C64;
    fn index(&self, i: usize) -> &C64 {
        &self.data[i]
    }
}

#[inline]
fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-6 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// `exp(-i·H·t)` for Hermitian `H`, via its real spectral decomposition.
///
/// The 2×2 case uses the closed-form spectrum of `c₀·I + c⃗·σ⃗`; larger
/// matrices go through a Hermitian eigensolver.
pub fn expm_hermitian(h: &CMatrix, t: f64) -> Result<CMatrix> {
    if !h.is_square() {
        return Err(Error::validation("generator must be square"));
    }
    if !h.is_finite() || !t.is_finite() {
        return Err(Error::validation("generator or duration is not finite"));
    }
    let defect = h.hermitian_defect();
    if defect > HERMITIAN_TOL {
        return Err(Error::validation(format!(
            "generator is not Hermitian (defect {defect:e})"
        )));
    }
    let n = h.rows();
    if n == 1 {
        return Ok(CMatrix::from_diag(&[cis(-h[(0, 0)].re * t)]));
    }
    if n == 2 {
        let (p, q, r) = (h[(0, 0)].re, h[(0, 1)], h[(1, 1)].re);
        let c0 = 0.5 * (p + r);
        let d = 0.5 * (p - r);
        let w = (d * d + q.norm_sqr()).sqrt();
        let cos = C64::new((w * t).cos(), 0.0);
        // sin(w t)/w, well defined as w -> 0
        let s = C64::new(0.0, -t * sinc(w * t));
        let global = cis(-c0 * t);
        return Ok(CMatrix::from_rows(&[
            [global * (cos + s * d), global * s * q],
            [global * s * q.conj(), global * (cos - s * d)],
        ]));
    }

    let eig = h.to_nalgebra().symmetric_eigen();
    let vecs = &eig.eigenvectors;
    let phases: Vec<C64> = eig.eigenvalues.iter().map(|&l| cis(-l * t)).collect();
    let mut out = DMatrix::<C64>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[(i, j)] = (0..n)
                .map(|k| vecs[(i, k)] * phases[k] * vecs[(j, k)].conj())
                .sum();
        }
    }
    Ok(CMatrix::from_nalgebra(&out))
}

/// `sqrt(Σ|X_jk - Y_jk|²)`.
pub fn frobenius_distance(x: &CMatrix, y: &CMatrix) -> Result<f64> {
    if (x.rows, x.cols) != (y.rows, y.cols) {
        return Err(Error::validation(format!(
            "shape mismatch: {}x{} vs {}x{}",
            x.rows, x.cols, y.rows, y.cols
        )));
    }
    Ok(x.data
        .iter()
        .zip(&y.data)
        .map(|(a, b)| (a - b).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// `‖U†U - I‖_F`.
pub fn unitarity_defect(u: &CMatrix) -> Result<f64> {
    if !u.is_square() {
        return Err(Error::validation("unitarity defect of a non-square matrix"));
    }
    frobenius_distance(&(&u.adjoint() * u), &CMatrix::identity(u.rows()))
}

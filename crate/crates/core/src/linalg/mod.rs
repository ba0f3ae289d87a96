//! Dense complex linear algebra for small matrices.
//!
//! Everything here is sized for bipartite systems of a few dozen composite
//! dimensions. Matrices are row-major and the composite index of a pair
//! `(i, j)` is always `i * n + j` (first factor major), which is the ordering
//! shared by [`kron`], [`reshape`] and the product-state coordinates.

mod qr;
mod svd;

use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use qr::{qr_unitary, solve};
pub use svd::{svd, SvdResult};

/// Complex scalar used throughout the crate.
pub type C64 = Complex64;

/// Orthonormality tolerance (max absolute deviation of a Gram matrix from identity).
pub const TOL_ORTHO: f64 = 1e-10;
/// Relative residual below which a column counts as linearly dependent.
pub const TOL_RANK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("empty vector or matrix")]
    Empty,
    #[error("non-finite entry at index {0}")]
    NonFinite(usize),
    #[error("zero vector cannot be normalized")]
    ZeroVector,
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("SVD did not converge after {sweeps} Jacobi sweeps")]
    NonConvergence { sweeps: usize },
    #[error("rank deficient: column {column} has relative residual {residual:e}")]
    RankDeficient { column: usize, residual: f64 },
    #[error("singular matrix (zero pivot in column {0})")]
    Singular(usize),
}

fn check_finite(entries: &[C64]) -> Result<(), LinalgError> {
    match entries.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
        Some(i) => Err(LinalgError::NonFinite(i)),
        None => Ok(()),
    }
}

/// A non-empty vector of finite complex amplitudes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<C64>", into = "Vec<C64>")]
pub struct ComplexVector {
    entries: Vec<C64>,
}

impl TryFrom<Vec<C64>> for ComplexVector {
    type Error = LinalgError;

    fn try_from(entries: Vec<C64>) -> Result<Self, Self::Error> {
        Self::new(entries)
    }
}

impl From<ComplexVector> for Vec<C64> {
    fn from(v: ComplexVector) -> Self {
        v.entries
    }
}

impl ComplexVector {
    pub fn new(entries: Vec<C64>) -> Result<Self, LinalgError> {
        if entries.is_empty() {
            return Err(LinalgError::Empty);
        }
        check_finite(&entries)?;
        Ok(Self { entries })
    }

    pub fn from_real(values: &[f64]) -> Result<Self, LinalgError> {
        Self::new(values.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    /// Computational basis vector `e_index` of the given length.
    ///
    /// Panics if `index >= len`.
    pub fn basis(len: usize, index: usize) -> Self {
        assert!(index < len, "basis index {index} out of range for length {len}");
        let mut entries = vec![C64::new(0.0, 0.0); len];
        entries[index] = C64::new(1.0, 0.0);
        Self { entries }
    }

    pub(crate) fn from_vec_unchecked(entries: Vec<C64>) -> Self {
        debug_assert!(!entries.is_empty());
        Self { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    /// Always false; kept for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, C64> {
        self.entries.iter()
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.entries
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    pub fn normalized(&self) -> Result<Self, LinalgError> {
        let norm = self.norm();
        if norm == 0.0 {
            return Err(LinalgError::ZeroVector);
        }
        Ok(self.scale(C64::new(1.0 / norm, 0.0)))
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner(&self, other: &ComplexVector) -> C64 {
        assert_eq!(self.len(), other.len(), "dimension mismatch in inner product");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            entries: self.entries.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            entries: self.entries.iter().map(|z| z.conj()).collect(),
        }
    }

    /// Rotates the global phase so the first entry with modulus above
    /// `1e-12` is real and positive.
    pub fn with_canonical_phase(&self) -> Self {
        match self.entries.iter().find(|z| z.norm() > 1e-12) {
            Some(z) => self.scale(z.conj() / z.norm()),
            None => self.clone(),
        }
    }
}

impl Index<usize> for ComplexVector {
    type Output = C64;

    fn index(&self, i: usize) -> &C64 {
        &self.entries[i]
    }
}

/// Tensor product `a ⊗ b`; entry `i * b.len() + j` is `a[i] * b[j]`.
pub fn kron(a: &ComplexVector, b: &ComplexVector) -> ComplexVector {
    let mut entries = Vec::with_capacity(a.len() * b.len());
    for x in &a.entries {
        for y in &b.entries {
            entries.push(x * y);
        }
    }
    ComplexVector { entries }
}

/// Matricization of a composite vector: entry `(i, j)` is `v[i * n + j]`.
pub fn reshape(v: &ComplexVector, m: usize, n: usize) -> Result<ComplexMatrix, LinalgError> {
    if m == 0 || n == 0 {
        return Err(LinalgError::Empty);
    }
    if v.len() != m * n {
        return Err(LinalgError::DimensionMismatch {
            expected: m * n,
            found: v.len(),
        });
    }
    Ok(ComplexMatrix {
        rows: m,
        cols: n,
        data: v.entries.clone(),
    })
}

/// Row-major dense complex matrix with finite entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 {
            return Err(LinalgError::Empty);
        }
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        check_finite(&data)?;
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        Self {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(k: usize) -> Self {
        Self::from_fn(k, k, |i, j| if i == j { C64::new(1.0, 0.0) } else { C64::new(0.0, 0.0) })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m.data[i * cols + j] = f(i, j);
            }
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[ComplexVector]) -> Result<Self, LinalgError> {
        let rows = columns.first().ok_or(LinalgError::Empty)?.len();
        if let Some(bad) = columns.iter().find(|c| c.len() != rows) {
            return Err(LinalgError::DimensionMismatch {
                expected: rows,
                found: bad.len(),
            });
        }
        Ok(Self::from_fn(rows, columns.len(), |i, j| columns[j][i]))
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

    /// Row-major entries as a vector (the inverse of [`reshape`]).
    pub fn flatten(&self) -> ComplexVector {
        ComplexVector::from_vec_unchecked(self.data.clone())
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        ComplexVector::from_vec_unchecked((0..self.rows).map(|i| self[(i, j)]).collect())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch in add");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(C64::new(-1.0, 0.0)))
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch in matmul");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let row = &self.data[i * self.cols..(i + 1) * self.cols];
            let out_row = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (k, a) in row.iter().enumerate() {
                if *a == C64::new(0.0, 0.0) {
                    continue;
                }
                let other_row = &other.data[k * other.cols..(k + 1) * other.cols];
                for (o, b) in out_row.iter_mut().zip(other_row) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &ComplexVector) -> ComplexVector {
        assert_eq!(self.cols, v.len(), "shape mismatch in matrix-vector product");
        let entries = self
            .data
            .chunks_exact(self.cols)
            .map(|row| row.iter().zip(&v.entries).map(|(a, b)| a * b).sum())
            .collect();
        ComplexVector { entries }
    }

    /// `self† v` without forming the adjoint.
    pub fn adjoint_mul_vec(&self, v: &ComplexVector) -> ComplexVector {
        assert_eq!(self.rows, v.len(), "shape mismatch in adjoint matrix-vector product");
        let mut entries = vec![C64::new(0.0, 0.0); self.cols];
        for (row, x) in self.data.chunks_exact(self.cols).zip(&v.entries) {
            for (o, a) in entries.iter_mut().zip(row) {
                *o += a.conj() * x;
            }
        }
        ComplexVector { entries }
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (r, c) = (other.rows, other.cols);
        Self::from_fn(self.rows * r, self.cols * c, |i, j| {
            self[(i / r, j / c)] * other[(i % r, j % c)]
        })
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `max |(A†A − I)_{ij}|`; zero exactly for a unitary (or isometry).
    pub fn unitarity_defect(&self) -> f64 {
        let gram = self.adjoint().matmul(self);
        gram.sub(&Self::identity(self.cols)).max_abs()
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

/// Max absolute deviation of the Gram matrix of `vectors` from identity.
pub fn orthonormality_defect(vectors: &[ComplexVector]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in vectors.iter().enumerate() {
        for (j, b) in vectors.iter().enumerate() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((a.inner(b) - target).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn v(entries: &[C64]) -> ComplexVector {
        ComplexVector::new(entries.to_vec()).unwrap()
    }

    #[test]
    fn kron_basis_cases() {
        let e0 = ComplexVector::basis(2, 0);
        let e1 = ComplexVector::basis(2, 1);
        assert_eq!(kron(&e0, &e0), ComplexVector::basis(4, 0));
        assert_eq!(kron(&e0, &e1), ComplexVector::basis(4, 1));
    }

    #[test]
    fn kron_distributes_scalar() {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let a = v(&[c(s, s), c(0.0, 0.0)]);
        let b = ComplexVector::basis(2, 1);
        let out = kron(&a, &b);
        assert_eq!(out.as_slice(), &[c(0.0, 0.0), c(s, s), c(0.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn reshape_identity_and_outer_product() {
        let bell = ComplexVector::from_real(&[1.0, 0.0, 0.0, 1.0]).unwrap();
        assert_eq!(reshape(&bell, 2, 2).unwrap(), ComplexMatrix::identity(2));

        let prod = kron(&ComplexVector::basis(2, 0), &ComplexVector::basis(2, 1));
        let m = reshape(&prod, 2, 2).unwrap();
        let expected = ComplexMatrix::from_fn(2, 2, |i, j| if (i, j) == (0, 1) { c(1.0, 0.0) } else { c(0.0, 0.0) });
        assert_eq!(m, expected);
    }

    #[test]
    fn reshape_flatten_round_trip() {
        let m = ComplexMatrix::from_fn(3, 4, |i, j| c(i as f64 - 0.5, j as f64 * 0.25));
        assert_eq!(reshape(&m.flatten(), 3, 4).unwrap(), m);
    }

    #[test]
    fn reshape_rejects_wrong_length() {
        let x = ComplexVector::basis(5, 0);
        assert_eq!(
            reshape(&x, 2, 3),
            Err(LinalgError::DimensionMismatch { expected: 6, found: 5 })
        );
    }

    #[test]
    fn constructors_reject_bad_input() {
        assert_eq!(ComplexVector::new(vec![]), Err(LinalgError::Empty));
        assert_eq!(
            ComplexVector::new(vec![c(0.0, 0.0), c(f64::NAN, 0.0)]),
            Err(LinalgError::NonFinite(1))
        );
        assert!(ComplexMatrix::new(2, 2, vec![c(0.0, 0.0); 3]).is_err());
        assert_eq!(
            ComplexVector::from_real(&[0.0, 0.0]).unwrap().normalized(),
            Err(LinalgError::ZeroVector)
        );
    }

    #[test]
    fn matrix_kron_matches_vector_kron() {
        let a = ComplexMatrix::from_fn(2, 2, |i, j| c(i as f64 + 1.0, j as f64));
        let b = ComplexMatrix::from_fn(3, 3, |i, j| c(j as f64, -(i as f64)));
        let x = v(&[c(1.0, 2.0), c(-0.5, 0.0)]);
        let y = v(&[c(0.0, 1.0), c(2.0, 0.0), c(1.0, 1.0)]);
        let lhs = a.kron(&b).mul_vec(&kron(&x, &y));
        let rhs = kron(&a.mul_vec(&x), &b.mul_vec(&y));
        for (p, q) in lhs.iter().zip(rhs.iter()) {
            assert!((p - q).norm() < 1e-12);
        }
    }

    #[test]
    fn adjoint_mul_vec_matches_explicit_adjoint() {
        let a = ComplexMatrix::from_fn(3, 2, |i, j| c(i as f64 * 0.3, j as f64 - 1.0));
        let x = v(&[c(1.0, -1.0), c(0.5, 0.25), c(-2.0, 0.0)]);
        assert_eq!(a.adjoint_mul_vec(&x), a.adjoint().mul_vec(&x));
    }

    #[test]
    fn canonical_phase_makes_leading_entry_positive() {
        let x = v(&[c(0.0, 0.0), c(0.0, -2.0), c(1.0, 1.0)]);
        let y = x.with_canonical_phase();
        assert!(y[1].im.abs() < 1e-15 && y[1].re > 0.0);
        assert!((y.norm() - x.norm()).abs() < 1e-14);
    }
}

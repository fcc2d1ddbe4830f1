//! Small dense linear algebra for real symmetric matrices.
//!
//! Everything here is sized for desk-scale problems (dimension up to a few
//! dozen). Factorizations are written out explicitly rather than delegated so
//! that results are deterministic and scale exactly: multiplying an input by a
//! power of two scales the Cholesky factor, triangular solves and Jacobi
//! rotations by the corresponding power of two with no rounding difference.

use std::fmt;
use std::ops::{Index, IndexMut};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance on `|a_ij - a_ji|` accepted as symmetric.
pub const SYMMETRY_RTOL: f64 = 1e-12;

const MAX_JACOBI_SWEEPS: usize = 100;

/// Dense square matrix stored row-major.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct Matrix {
    dim: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Matrix {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diagonal(&vec![1.0; dim])
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Matrix { dim, data }
    }

    /// Builds a matrix from row-major nested rows; every row must have
    /// `rows.len()` entries.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        if dim == 0 {
            return Err(Error::invalid("matrix", "matrix has no rows"));
        }
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Matrix { dim, data })
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data
            .chunks(self.dim.max(1))
            .map(<[f64]>::to_vec)
            .collect()
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "matmul dimension mismatch");
        let d = self.dim;
        let mut out = Matrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..d {
                    out.data[i * d + j] += a * rhs.data[k * d + j];
                }
            }
        }
        out
    }

    /// `Bᵀ · self · B`, symmetrized when `self` is symmetric.
    pub fn congruence(&self, b: &Matrix) -> Matrix {
        b.transpose().matmul(self).matmul(b).symmetrized()
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.mul_vec_into(x, &mut out);
        out
    }

    pub fn mul_vec_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim);
        for (i, o) in out.iter_mut().enumerate() {
            let row = &self.data[i * self.dim..(i + 1) * self.dim];
            *o = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    /// `xᵀ · self · x`
    pub fn quadratic_form(&self, x: &[f64]) -> f64 {
        let d = self.dim;
        let mut acc = 0.0;
        for i in 0..d {
            let row = &self.data[i * d..(i + 1) * d];
            let ri: f64 = row.iter().zip(x).map(|(a, b)| a * b).sum();
            acc += x[i] * ri;
        }
        acc
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Matrix {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    /// `self += s * rhs`
    pub fn add_scaled(&mut self, s: f64, rhs: &Matrix) {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        for (a, b) in self.data.iter_mut().zip(&rhs.data) {
            *a += s * b;
        }
    }

    fn zip_with(&self, rhs: &Matrix, f: impl Fn(f64, f64) -> f64) -> Matrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        Matrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// `(A + Aᵀ) / 2`
    pub fn symmetrized(&self) -> Matrix {
        Matrix::from_fn(self.dim, |i, j| {
            if i == j {
                self[(i, i)]
            } else {
                0.5 * (self[(i, j)] + self[(j, i)])
            }
        })
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest `|a_ij - a_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.dim + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows()).finish()
    }
}

impl TryFrom<Vec<Vec<f64>>> for Matrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Matrix::from_rows(&rows)
    }
}

impl From<Matrix> for Vec<Vec<f64>> {
    fn from(m: Matrix) -> Self {
        m.rows()
    }
}

/// Lower-triangular Cholesky factor `L` with `A = L Lᵀ`.
///
/// Fails on the first pivot that is not strictly positive and finite.
pub fn cholesky(a: &Matrix) -> Result<Matrix> {
    let d = a.dim();
    let mut l = Matrix::zeros(d);
    for j in 0..d {
        let mut s = a[(j, j)];
        for k in 0..j {
            s -= l[(j, k)] * l[(j, k)];
        }
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::NotPositiveDefinite { pivot: j, value: s });
        }
        let pivot = s.sqrt();
        l[(j, j)] = pivot;
        for i in (j + 1)..d {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / pivot;
        }
    }
    Ok(l)
}

/// Solves `L y = b` in place for lower-triangular `L`.
pub fn solve_lower_in_place(l: &Matrix, b: &mut [f64]) {
    for i in 0..l.dim() {
        let mut s = b[i];
        for k in 0..i {
            s -= l[(i, k)] * b[k];
        }
        b[i] = s / l[(i, i)];
    }
}

/// Solves `Lᵀ x = b` in place for lower-triangular `L`.
pub fn solve_lower_transpose_in_place(l: &Matrix, b: &mut [f64]) {
    let d = l.dim();
    for i in (0..d).rev() {
        let mut s = b[i];
        for k in (i + 1)..d {
            s -= l[(k, i)] * b[k];
        }
        b[i] = s / l[(i, i)];
    }
}

/// Eigen-decomposition of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymEigen {
    /// Eigenvalues in ascending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, matching `values`.
    pub vectors: Matrix,
}

impl SymEigen {
    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// Rebuilds `V · diag(f(λ)) · Vᵀ`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Matrix {
        let d = self.values.len();
        let fl: Vec<f64> = self.values.iter().map(|&v| f(v)).collect();
        let v = &self.vectors;
        Matrix::from_fn(d, |i, j| {
            (0..d).map(|k| v[(i, k)] * fl[k] * v[(j, k)]).sum()
        })
        .symmetrized()
    }
}

/// Cyclic Jacobi eigen-solver. The input is symmetrized first.
pub fn sym_eigen(a: &Matrix) -> SymEigen {
    let d = a.dim();
    let mut m = a.symmetrized();
    let mut v = Matrix::identity(d);
    let norm = m.as_slice().iter().map(|x| x * x).sum::<f64>().sqrt();
    let skip = f64::EPSILON * 1e-2 * norm;

    if norm > 0.0 {
        for _ in 0..MAX_JACOBI_SWEEPS {
            let mut rotated = false;
            for p in 0..d {
                for q in (p + 1)..d {
                    let apq = m[(p, q)];
                    if apq.abs() <= skip {
                        continue;
                    }
                    rotated = true;
                    let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                    let t = if theta.abs() > 1e150 {
                        0.5 / theta
                    } else {
                        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                    };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    m[(p, p)] -= t * apq;
                    m[(q, q)] += t * apq;
                    m[(p, q)] = 0.0;
                    m[(q, p)] = 0.0;
                    for r in 0..d {
                        if r != p && r != q {
                            let arp = m[(r, p)];
                            let arq = m[(r, q)];
                            let np = c * arp - s * arq;
                            let nq = s * arp + c * arq;
                            m[(r, p)] = np;
                            m[(p, r)] = np;
                            m[(r, q)] = nq;
                            m[(q, r)] = nq;
                        }
                        let vrp = v[(r, p)];
                        let vrq = v[(r, q)];
                        v[(r, p)] = c * vrp - s * vrq;
                        v[(r, q)] = s * vrp + c * vrq;
                    }
                }
            }
            if !rotated {
                break;
            }
        }
    }

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&i, &j| m[(i, i)].total_cmp(&m[(j, j)]));
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = Matrix::from_fn(d, |r, c| v[(r, order[c])]);
    SymEigen { values, vectors }
}

/// Real symmetric positive-definite matrix with its Cholesky factor.
///
/// The stored matrix is exactly symmetric: inputs within
/// [`SYMMETRY_RTOL`] of symmetric are averaged with their transpose.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Matrix", into = "Matrix")]
pub struct SymmetricPD {
    matrix: Matrix,
    factor: Matrix,
}

impl SymmetricPD {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if matrix.dim() == 0 {
            return Err(Error::invalid("matrix", "dimension must be at least 1"));
        }
        if !matrix.is_finite() {
            return Err(Error::invalid("matrix", "entries must be finite"));
        }
        let tolerance = SYMMETRY_RTOL * matrix.max_abs();
        let asymmetry = matrix.asymmetry();
        if asymmetry > tolerance {
            return Err(Error::NotSymmetric {
                asymmetry,
                tolerance,
            });
        }
        let matrix = matrix.symmetrized();
        let factor = cholesky(&matrix)?;
        Ok(SymmetricPD { matrix, factor })
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(Matrix::from_diagonal(diag))
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(Matrix::identity(dim)).expect("identity is positive definite")
    }

    #[inline]
    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Lower-triangular Cholesky factor.
    #[inline]
    pub fn factor(&self) -> &Matrix {
        &self.factor
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn eigen(&self) -> SymEigen {
        sym_eigen(&self.matrix)
    }

    /// `λ · A` for `λ > 0`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::invalid("scale", "must be positive and finite"));
        }
        Self::new(self.matrix.scale(lambda))
    }
}

impl fmt::Debug for SymmetricPD {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.matrix.fmt(f)
    }
}

impl TryFrom<Matrix> for SymmetricPD {
    type Error = Error;

    fn try_from(m: Matrix) -> Result<Self> {
        SymmetricPD::new(m)
    }
}

impl From<SymmetricPD> for Matrix {
    fn from(a: SymmetricPD) -> Matrix {
        a.matrix
    }
}

/// `A⁻¹` through the Cholesky factor.
pub fn pd_inverse(a: &SymmetricPD) -> Result<SymmetricPD> {
    let d = a.dim();
    let l = a.factor();
    let mut inv = Matrix::zeros(d);
    let mut col = vec![0.0; d];
    for j in 0..d {
        col.iter_mut().for_each(|c| *c = 0.0);
        col[j] = 1.0;
        solve_lower_in_place(l, &mut col);
        solve_lower_transpose_in_place(l, &mut col);
        for i in 0..d {
            inv[(i, j)] = col[i];
        }
    }
    SymmetricPD::new(inv.symmetrized())
}

/// `A^{-1/2}`, the symmetric inverse square root.
pub fn pd_inv_sqrt(a: &SymmetricPD) -> Result<SymmetricPD> {
    let eig = a.eigen();
    if eig.min() <= 0.0 {
        return Err(Error::NotPositiveDefinite {
            pivot: 0,
            value: eig.min(),
        });
    }
    SymmetricPD::new(eig.map(|v| 1.0 / v.sqrt()))
}

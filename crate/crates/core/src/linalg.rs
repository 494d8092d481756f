//! Small dense row-major matrices.
//!
//! The hot path (gradient evaluation inside trajectories) only needs
//! allocation-free matrix-vector products, which live here. Singular values
//! and linear solves go through `nalgebra`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense real matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n_rows = rows.len();
        if n_rows == 0 {
            return Err(Error::input("matrix has no rows"));
        }
        let n_cols = rows[0].len();
        if n_cols == 0 {
            return Err(Error::input("matrix has no columns"));
        }
        let mut data = Vec::with_capacity(n_rows * n_cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n_cols {
                return Err(Error::input(format!(
                    "matrix row {i} has {} entries, expected {n_cols}",
                    row.len()
                )));
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(Error::input(format!("matrix row {i} has a non-finite entry")));
            }
            data.extend(row);
        }
        Ok(Matrix {
            rows: n_rows,
            cols: n_cols,
            data,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n])
    }

    pub fn diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut data = vec![0.0; n * n];
        for (i, &v) in diag.iter().enumerate() {
            data[i * n + i] = v;
        }
        Matrix {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v * factor).collect(),
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.cols).map(|r| r.to_vec()).collect()
    }

    /// `out = A x`.
    #[inline]
    pub fn mul_vec_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.cols);
        debug_assert_eq!(out.len(), self.rows);
        for (o, row) in out.iter_mut().zip(self.data.chunks_exact(self.cols)) {
            *o = row.iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }

    /// `out += scale * Aᵀ y`.
    #[inline]
    pub fn tr_mul_vec_acc(&self, y: &[f64], scale: f64, out: &mut [f64]) {
        debug_assert_eq!(y.len(), self.rows);
        debug_assert_eq!(out.len(), self.cols);
        for (row, &yi) in self.data.chunks_exact(self.cols).zip(y) {
            let s = scale * yi;
            for (o, a) in out.iter_mut().zip(row) {
                *o += s * a;
            }
        }
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.rows];
        self.mul_vec_into(x, &mut out);
        out
    }

    /// `Aᵀ A`.
    pub fn gram(&self) -> Matrix {
        let n = self.cols;
        let mut data = vec![0.0; n * n];
        for row in self.data.chunks_exact(n) {
            for i in 0..n {
                for j in 0..n {
                    data[i * n + j] += row[i] * row[j];
                }
            }
        }
        Matrix {
            rows: n,
            cols: n,
            data,
        }
    }

    fn to_nalgebra(&self) -> DMatrix<f64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    /// Singular values in descending order.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut sv: Vec<f64> = self.to_nalgebra().singular_values().iter().copied().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }

    /// Operator 2-norm (largest singular value).
    pub fn spectral_norm(&self) -> f64 {
        self.singular_values().first().copied().unwrap_or(0.0)
    }

    pub fn min_singular_value(&self) -> f64 {
        self.singular_values().last().copied().unwrap_or(0.0)
    }

    /// Solves `A x = b` for square `A`.
    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        if self.rows != self.cols || b.len() != self.rows {
            return Err(Error::input("solve needs a square matrix and matching right-hand side"));
        }
        let lu = self.to_nalgebra().lu();
        let rhs = nalgebra::DVector::from_column_slice(b);
        lu.solve(&rhs)
            .map(|x| x.iter().copied().collect())
            .ok_or_else(|| Error::Construction("matrix is singular".into()))
    }
}

impl TryFrom<Vec<Vec<f64>>> for Matrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Matrix::from_rows(rows)
    }
}

impl From<Matrix> for Vec<Vec<f64>> {
    fn from(m: Matrix) -> Self {
        m.to_rows()
    }
}

pub fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

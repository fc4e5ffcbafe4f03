//! Small dense linear algebra: a row-major matrix and Cholesky factorization.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Dense row-major matrix of `f64`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Wraps row-major `data`; fails unless `data.len() == rows * cols`.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from equally long rows. An empty slice gives a 0×0
    /// matrix.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
            data.extend_from_slice(r);
        }
        Ok(Self { rows: rows.len(), cols, data })
    }

    /// An empty matrix with a fixed column count, ready for [`Matrix::push_row`].
    pub fn with_cols(cols: usize) -> Self {
        Self { rows: 0, cols, data: Vec::new() }
    }

    pub fn push_row(&mut self, row: &[f64]) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: row.len() });
        }
        self.data.extend_from_slice(row);
        self.rows += 1;
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_mut(&mut self, i: usize) -> &mut [f64] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn iter_rows(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        // chunks_exact on an empty slice with cols == 0 would panic
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.iter_rows().map(|r| r[j]).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mat_vec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.cols);
        self.iter_rows().map(|r| dot(r, x)).collect()
    }

    pub fn mat_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let src = other.row(k);
                for (o, b) in out.row_mut(i).iter_mut().zip(src) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Submatrix picking the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out[(a, b)] = self[(i, j)];
            }
        }
        out
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn max_abs_asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..i {
                worst = worst.max(libm::fabs(self[(i, j)] - self[(j, i)]));
            }
        }
        worst
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }
}

impl core::ops::Index<(usize, usize)> for Matrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.cols + j]
    }
}

impl core::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Lower-triangular Cholesky factor `L` with `A = L Lᵀ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cholesky {
    lower: Matrix,
}

impl Cholesky {
    /// Strict factorization: every pivot must be strictly positive.
    pub fn new(a: &Matrix) -> Result<Self> {
        factor(a, None)
    }

    /// Factorization of a symmetric positive semidefinite matrix. Pivots down
    /// to `-1e-10 * max(diag)` are clamped to zero (the corresponding column
    /// of `L` is zeroed); anything more negative is an error.
    pub fn semidefinite(a: &Matrix) -> Result<Self> {
        let scale = a.diagonal().into_iter().fold(0.0_f64, f64::max);
        factor(a, Some(1e-10 * scale))
    }

    pub fn lower(&self) -> &Matrix {
        &self.lower
    }

    pub fn into_lower(self) -> Matrix {
        self.lower
    }

    pub fn dim(&self) -> usize {
        self.lower.rows
    }

    /// Solves `L x = b`.
    pub fn solve_lower(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut x = b.to_vec();
        for i in 0..n {
            let row = self.lower.row(i);
            let s = dot(&row[..i], &x[..i]);
            x[i] = (x[i] - s) / row[i];
        }
        x
    }

    /// Solves `Lᵀ x = b`.
    pub fn solve_upper(&self, b: &[f64]) -> Vec<f64> {
        let n = self.dim();
        let mut x = b.to_vec();
        for i in (0..n).rev() {
            let mut s = x[i];
            for (k, xk) in x.iter().enumerate().skip(i + 1) {
                s -= self.lower[(k, i)] * xk;
            }
            x[i] = s / self.lower[(i, i)];
        }
        x
    }

    /// Solves `A x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        self.solve_upper(&self.solve_lower(b))
    }

    /// `log det A = 2 Σ log L_ii`.
    pub fn log_det(&self) -> f64 {
        2.0 * (0..self.dim()).map(|i| libm::log(self.lower[(i, i)])).sum::<f64>()
    }

    /// `L Lᵀ`.
    pub fn reconstruct(&self) -> Matrix {
        let n = self.dim();
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v = dot(&self.lower.row(i)[..=j], &self.lower.row(j)[..=j]);
                out[(i, j)] = v;
                out[(j, i)] = v;
            }
        }
        out
    }
}

fn factor(a: &Matrix, clamp: Option<f64>) -> Result<Cholesky> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch { expected: a.rows, found: a.cols });
    }
    let n = a.rows;
    let mut l = Matrix::zeros(n, n);
    for j in 0..n {
        let mut pivot = a[(j, j)];
        for k in 0..j {
            pivot -= l[(j, k)] * l[(j, k)];
        }
        if !pivot.is_finite() {
            return Err(Error::NotPositiveDefinite);
        }
        let diag = match clamp {
            None if pivot > 0.0 => libm::sqrt(pivot),
            None => return Err(Error::NotPositiveDefinite),
            Some(tol) if pivot > tol => libm::sqrt(pivot),
            Some(tol) if pivot >= -tol => 0.0,
            Some(_) => return Err(Error::NotPositiveDefinite),
        };
        l[(j, j)] = diag;
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = if diag > 0.0 { s / diag } else { 0.0 };
        }
    }
    Ok(Cholesky { lower: l })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cholesky_reconstructs() {
        let a = Matrix::from_rows(&[[4.0, 2.0, 0.4], [2.0, 5.0, 1.0], [0.4, 1.0, 3.0]]).unwrap();
        let c = Cholesky::new(&a).unwrap();
        let r = c.reconstruct();
        for (x, y) in r.as_slice().iter().zip(a.as_slice()) {
            assert!((x - y).abs() < 1e-12);
        }
        let b = [1.0, -2.0, 0.5];
        let x = c.solve(&b);
        let back = a.mat_vec(&x);
        for (u, v) in back.iter().zip(b) {
            assert!((u - v).abs() < 1e-12);
        }
        let det: f64 = 4.0 * (5.0 * 3.0 - 1.0) - 2.0 * (2.0 * 3.0 - 0.4) + 0.4 * (2.0 - 5.0 * 0.4);
        assert!((c.log_det() - det.ln()).abs() < 1e-12);
    }

    #[test]
    fn strict_rejects_singular_but_semidefinite_clamps() {
        let a = Matrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]]).unwrap();
        assert_eq!(Cholesky::new(&a), Err(Error::NotPositiveDefinite));
        let c = Cholesky::semidefinite(&a).unwrap();
        assert_eq!(c.lower()[(1, 1)], 0.0);
        let r = c.reconstruct();
        assert!((r[(1, 1)] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn semidefinite_rejects_indefinite() {
        let a = Matrix::from_rows(&[[1.0, 2.0], [2.0, 1.0]]).unwrap();
        assert_eq!(Cholesky::semidefinite(&a), Err(Error::NotPositiveDefinite));
    }

    #[test]
    fn shape_errors() {
        assert!(Matrix::from_vec(2, 2, alloc::vec![1.0; 3]).is_err());
        assert!(Matrix::from_rows(&[alloc::vec![1.0, 2.0], alloc::vec![1.0]]).is_err());
        let empty: [[f64; 0]; 0] = [];
        assert_eq!(Matrix::from_rows(&empty).unwrap().rows(), 0);
    }
}

//! Dense matrices over an exact coefficient ring.
//!
//! Structural operations are generic; field arithmetic (determinant,
//! inverse) is provided for Gaussian-rational entries, which is what the
//! symplectic and unitary twist data require.

use std::fmt;
use std::ops::{Add, Mul, Neg};

use num_traits::{One, Zero};

use crate::poly::Coeff;
use crate::scalar::GaussianRational;
use crate::{Error, Result};

/// Dense `rows x cols` matrix in row-major order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    /// Builds a matrix from a row-major entry list.
    pub fn from_rows(rows: usize, cols: usize, entries: Vec<T>) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count must be rows*cols");
        Matrix { rows, cols, entries }
    }

    /// Number of rows.
    pub fn rows(&self) -> usize {
        self.rows
    }

    /// Number of columns.
    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Entry `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.cols + j]
    }

    /// Replaces entry `(i, j)`.
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.entries[i * self.cols + j] = v;
    }

    /// Applies a map entrywise.
    pub fn map<U: Clone>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix::from_rows(self.rows, self.cols, self.entries.iter().map(f).collect())
    }

    /// Builds a matrix entry by entry from index positions.
    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix::from_rows(rows, cols, entries)
    }

    /// The transpose.
    pub fn transpose(&self) -> Matrix<T> {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        Matrix::from_rows(self.cols, self.rows, entries)
    }

    /// All entries, row-major.
    pub fn entries(&self) -> &[T] {
        &self.entries
    }
}

impl<T: Clone + Zero> Matrix<T> {
    /// The zero matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_rows(rows, cols, (0..rows * cols).map(|_| T::zero()).collect())
    }
}

impl<T: Clone + Zero + One> Matrix<T> {
    /// The identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }
}

impl<T> Matrix<T>
where
    T: Clone + Zero + Add<Output = T> + Neg<Output = T>,
    for<'a> &'a T: Mul<&'a T, Output = T>,
{
    /// Matrix product.
    pub fn mul_mat(&self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!(self.cols, rhs.rows, "inner dimensions must agree");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = T::zero();
                for k in 0..self.cols {
                    acc = acc + self.get(i, k) * rhs.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// Entrywise sum.
    pub fn add_mat(&self, rhs: &Matrix<T>) -> Matrix<T> {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Matrix::from_rows(self.rows, self.cols, entries)
    }

    /// Entrywise difference.
    pub fn sub_mat(&self, rhs: &Matrix<T>) -> Matrix<T> {
        self.add_mat(&rhs.neg_mat())
    }

    /// Entrywise negation.
    pub fn neg_mat(&self) -> Matrix<T> {
        Matrix::from_rows(
            self.rows,
            self.cols,
            self.entries.iter().map(|a| -a.clone()).collect(),
        )
    }

    /// Multiplies every entry by `c`.
    pub fn scale_entries(&self, c: &T) -> Matrix<T> {
        Matrix::from_rows(
            self.rows,
            self.cols,
            self.entries.iter().map(|a| a * c).collect(),
        )
    }

    /// The trace of a square matrix.
    pub fn trace(&self) -> T {
        assert_eq!(self.rows, self.cols, "trace requires a square matrix");
        let mut acc = T::zero();
        for i in 0..self.rows {
            acc = acc + self.get(i, i).clone();
        }
        acc
    }

    /// `k`-th power of a square matrix.
    pub fn pow(&self, k: usize) -> Matrix<T>
    where
        T: One,
    {
        assert_eq!(self.rows, self.cols);
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..k {
            acc = acc.mul_mat(self);
        }
        acc
    }
}

impl Matrix<GaussianRational> {
    /// Builds a matrix of Gaussian rationals from integer numerators and
    /// denominators `(re_num, re_den, im_num, im_den)`.
    pub fn from_gauss(rows: usize, cols: usize, entries: &[(i64, i64, i64, i64)]) -> Self {
        Matrix::from_rows(
            rows,
            cols,
            entries
                .iter()
                .map(|(rn, rd, in_, id)| crate::scalar::gauss(*rn, *rd, *in_, *id))
                .collect(),
        )
    }

    /// Determinant by fraction-full Gaussian elimination.
    pub fn det(&self) -> GaussianRational {
        assert_eq!(self.rows, self.cols, "determinant requires a square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut det = GaussianRational::one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero());
            let pivot = match pivot {
                Some(p) => p,
                None => return GaussianRational::zero(),
            };
            if pivot != col {
                for j in 0..n {
                    let tmp = a.get(col, j).clone();
                    a.set(col, j, a.get(pivot, j).clone());
                    a.set(pivot, j, tmp);
                }
                det = -det;
            }
            let pv = a.get(col, col).clone();
            det *= pv.clone();
            let pv_inv = pv.inv();
            for r in col + 1..n {
                let factor = a.get(r, col) * &pv_inv;
                if factor.is_zero() {
                    continue;
                }
                for j in col..n {
                    let v = a.get(r, j) - &(a.get(col, j) * &factor);
                    a.set(r, j, v);
                }
            }
        }
        det
    }

    /// Inverse by Gauss-Jordan elimination; [`Error::SingularMatrix`] when
    /// the matrix is not invertible.
    pub fn inverse(&self) -> Result<Matrix<GaussianRational>> {
        assert_eq!(self.rows, self.cols, "inverse requires a square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::<GaussianRational>::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a.get(r, col).is_zero())
                .ok_or(Error::SingularMatrix)?;
            if pivot != col {
                for j in 0..n {
                    let tmp = a.get(col, j).clone();
                    a.set(col, j, a.get(pivot, j).clone());
                    a.set(pivot, j, tmp);
                    let tmp = inv.get(col, j).clone();
                    inv.set(col, j, inv.get(pivot, j).clone());
                    inv.set(pivot, j, tmp);
                }
            }
            let pv_inv = a.get(col, col).inv();
            for j in 0..n {
                a.set(col, j, a.get(col, j) * &pv_inv);
                inv.set(col, j, inv.get(col, j) * &pv_inv);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone();
                for j in 0..n {
                    let v = a.get(r, j) - &(a.get(col, j) * &factor);
                    a.set(r, j, v);
                    let v = inv.get(r, j) - &(inv.get(col, j) * &factor);
                    inv.set(r, j, v);
                }
            }
        }
        Ok(inv)
    }

    /// Multiplicative order, searching up to `max`; `None` if not found.
    pub fn finite_order(&self, max: usize) -> Option<usize> {
        assert_eq!(self.rows, self.cols);
        let id = Matrix::<GaussianRational>::identity(self.rows);
        let mut acc = self.clone();
        for k in 1..=max {
            if acc == id {
                return Some(k);
            }
            acc = acc.mul_mat(self);
        }
        None
    }
}

/// The standard symplectic Gram matrix `omega_{ij}` on generators ordered
/// `p1, q1, .., pn, qn`: `omega(p_s, q_s) = 1`.
pub fn symplectic_gram(n: usize) -> Matrix<GaussianRational> {
    let mut m = Matrix::<GaussianRational>::zeros(2 * n, 2 * n);
    for s in 0..n {
        m.set(2 * s, 2 * s + 1, GaussianRational::one());
        m.set(2 * s + 1, 2 * s, -GaussianRational::one());
    }
    m
}

/// Checks `S^T omega S = omega` for the standard Gram matrix.
pub fn is_symplectic(s: &Matrix<GaussianRational>) -> bool {
    if s.rows() != s.cols() || !s.rows().is_multiple_of(2) {
        return false;
    }
    let omega = symplectic_gram(s.rows() / 2);
    s.transpose().mul_mat(&omega).mul_mat(s) == omega
}

/// Checks `omega X + X^T omega = 0`, membership in the symplectic Lie
/// algebra (equivalently `omega X` symmetric).
pub fn is_sp_element(x: &Matrix<GaussianRational>) -> bool {
    if x.rows() != x.cols() || !x.rows().is_multiple_of(2) {
        return false;
    }
    let omega = symplectic_gram(x.rows() / 2);
    let ox = omega.mul_mat(x);
    ox == ox.transpose()
}

impl<T: Clone + fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Matrix with [`Coeff`] entries scaled by a coefficient.
pub fn scale_matrix<C: Coeff>(m: &Matrix<C>, c: &C) -> Matrix<C> {
    m.map(|a| a.clone() * c.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::gauss;

    #[test]
    fn inverse_roundtrips() {
        let m = Matrix::from_gauss(2, 2, &[(1, 1, 0, 1), (1, 1, 1, 1), (0, 1, 1, 1), (2, 1, 0, 1)]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul_mat(&inv), Matrix::identity(2));
        assert_eq!(inv.mul_mat(&m), Matrix::identity(2));
    }

    #[test]
    fn det_of_rotation_is_one() {
        let r = Matrix::from_gauss(2, 2, &[(0, 1, 0, 1), (-1, 1, 0, 1), (1, 1, 0, 1), (0, 1, 0, 1)]);
        assert_eq!(r.det(), gauss(1, 1, 0, 1));
        assert!(is_symplectic(&r));
        assert_eq!(r.finite_order(8), Some(4));
    }

    #[test]
    fn singular_matrix_reports_error() {
        let m = Matrix::from_gauss(2, 2, &[(1, 1, 0, 1), (2, 1, 0, 1), (2, 1, 0, 1), (4, 1, 0, 1)]);
        assert!(m.inverse().is_err());
        assert!(m.det().is_zero());
    }

    #[test]
    fn sp_membership() {
        let x = Matrix::from_gauss(2, 2, &[(1, 1, 0, 1), (0, 1, 0, 1), (0, 1, 0, 1), (-1, 1, 0, 1)]);
        assert!(is_sp_element(&x));
        let y = Matrix::from_gauss(2, 2, &[(1, 1, 0, 1), (0, 1, 0, 1), (0, 1, 0, 1), (1, 1, 0, 1)]);
        assert!(!is_sp_element(&y));
    }
}

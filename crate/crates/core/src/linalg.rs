//! Dense complex vectors and matrices.
//!
//! Only the handful of operations the link model needs: outer products,
//! row-vector/matrix products, diagonal scaling and norms. Storage is
//! row-major and the shape is fixed at construction.

use std::ops::Index;

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector<T> {
    data: Vec<Complex<T>>,
}

impl<T: Scalar> ComplexVector<T> {
    pub fn from_vec(data: Vec<Complex<T>>) -> Self {
        Self { data }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Complex<T>> {
        self.data.iter()
    }

    pub fn conj(&self) -> Self {
        Self::from_vec(self.data.iter().map(|z| z.conj()).collect())
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self::from_vec(self.data.iter().map(|&z| z * s).collect())
    }

    /// Squared Euclidean norm.
    pub fn norm_sqr(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    /// Unconjugated product `sum_i self[i] * other[i]`, i.e. a row vector
    /// times a column vector.
    pub fn dot(&self, other: &Self) -> Result<Complex<T>> {
        check_len("dot operand", other.len(), self.len())?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(Complex::zero(), |acc, (&a, &b)| acc + a * b))
    }

    /// Entrywise product, i.e. `self * diag(d)` for a row vector.
    pub fn hadamard(&self, d: &Self) -> Result<Self> {
        check_len("diagonal", d.len(), self.len())?;
        Ok(Self::from_vec(
            self.data
                .iter()
                .zip(&d.data)
                .map(|(&a, &b)| a * b)
                .collect(),
        ))
    }

    /// Row vector times matrix: `self (1 x rows) * m (rows x cols)`.
    pub fn row_times(&self, m: &ComplexMatrix<T>) -> Result<Self> {
        check_len("row vector", self.len(), m.rows)?;
        let mut out = vec![Complex::zero(); m.cols];
        for (r, &v) in self.data.iter().enumerate() {
            for (o, &a) in out.iter_mut().zip(m.row(r)) {
                *o = *o + v * a;
            }
        }
        Ok(Self::from_vec(out))
    }
}

impl<T> Index<usize> for ComplexVector<T> {
    type Output = Complex<T>;

    fn index(&self, i: usize) -> &Complex<T> {
        &self.data[i]
    }
}

impl<T> IntoIterator for ComplexVector<T> {
    type Item = Complex<T>;
    type IntoIter = std::vec::IntoIter<Complex<T>>;

    fn into_iter(self) -> Self::IntoIter {
        self.data.into_iter()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> ComplexMatrix<T> {
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self> {
        check_len("matrix storage", data.len(), rows * cols)?;
        Ok(Self { rows, cols, data })
    }

    pub fn from_diagonal(diag: &ComplexVector<T>) -> Self {
        let n = diag.len();
        let mut data = vec![Complex::zero(); n * n];
        for (i, &d) in diag.iter().enumerate() {
            data[i * n + i] = d;
        }
        Self {
            rows: n,
            cols: n,
            data,
        }
    }

    /// `scale * u v^H`.
    pub fn outer(scale: Complex<T>, u: &ComplexVector<T>, v: &ComplexVector<T>) -> Self {
        let data = u
            .iter()
            .flat_map(|&a| v.iter().map(move |&b| scale * a * b.conj()))
            .collect();
        Self {
            rows: u.len(),
            cols: v.len(),
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> Complex<T> {
        self.data[r * self.cols + c]
    }

    pub fn row(&self, r: usize) -> &[Complex<T>] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }

    /// Diagonal entries; the off-diagonal part is ignored.
    pub fn diagonal(&self) -> ComplexVector<T> {
        ComplexVector::from_vec(
            (0..self.rows.min(self.cols))
                .map(|i| self.get(i, i))
                .collect(),
        )
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &ComplexVector<T>) -> Result<ComplexVector<T>> {
        check_len("column vector", v.len(), self.cols)?;
        Ok(ComplexVector::from_vec(
            (0..self.rows)
                .map(|r| {
                    self.row(r)
                        .iter()
                        .zip(v.iter())
                        .fold(Complex::zero(), |acc, (&a, &b)| acc + a * b)
                })
                .collect(),
        ))
    }
}

fn check_len(what: &'static str, got: usize, expected: usize) -> Result<()> {
    if got == expected {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            what,
            got,
            expected,
        })
    }
}

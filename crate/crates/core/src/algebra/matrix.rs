//! Dense row-major matrices over an arbitrary entry type.

use std::ops::{Neg, Sub};

use num_traits::{One, Zero};

use super::scalar::Scalar;
use crate::error::{Error, Result};

/// Commutative ring operations needed for matrix products and determinants.
pub trait Ring: Clone + Zero + One + Neg<Output = Self> + Sub<Output = Self> {}

impl<T> Ring for T where T: Clone + Zero + One + Neg<Output = T> + Sub<Output = T> {}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix<T = Scalar> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

impl<T> Matrix<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Matrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn from_vec(rows: usize, cols: usize, entries: Vec<T>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::dimension(
                "matrix entries",
                rows * cols,
                entries.len(),
            ));
        }
        Ok(Matrix {
            rows,
            cols,
            entries,
        })
    }

    /// Builds from a list of rows; every row must have the same length.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(nrows * ncols);
        for row in rows {
            if row.len() != ncols {
                return Err(Error::dimension("matrix row length", ncols, row.len()));
            }
            entries.extend(row);
        }
        Ok(Matrix {
            rows: nrows,
            cols: ncols,
            entries,
        })
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

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.entries[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<T> {
        self.entries
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<T>>
    where
        T: Clone,
    {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    pub fn try_map<U, E>(&self, f: impl FnMut(&T) -> Result<U, E>) -> Result<Matrix<U>, E> {
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(f).collect::<Result<_, E>>()?,
        })
    }
}

impl<T: Clone> Matrix<T> {
    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// The `1 × cols` matrix holding row `i`.
    pub fn row_matrix(&self, i: usize) -> Self {
        Matrix::from_fn(1, self.cols, |_, j| self.get(i, j).clone())
    }

    /// The `rows × 1` matrix holding column `j`.
    pub fn col_matrix(&self, j: usize) -> Self {
        Matrix::from_fn(self.rows, 1, |i, _| self.get(i, j).clone())
    }

    /// Deletes row `skip_row` and column `skip_col`.
    pub fn minor(&self, skip_row: usize, skip_col: usize) -> Self {
        let rows: Vec<usize> = (0..self.rows).filter(|&i| i != skip_row).collect();
        let cols: Vec<usize> = (0..self.cols).filter(|&j| j != skip_col).collect();
        Matrix::from_fn(rows.len(), cols.len(), |i, j| {
            self.get(rows[i], cols[j]).clone()
        })
    }

    pub fn submatrix(&self, row0: usize, col0: usize, rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |i, j| self.get(row0 + i, col0 + j).clone())
    }
}

impl<T: Clone + Zero> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |_, _| T::zero())
    }

    /// This matrix in the top-left corner of a `rows × cols` zero matrix.
    pub fn padded(&self, rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |i, j| {
            if i < self.rows && j < self.cols {
                self.get(i, j).clone()
            } else {
                T::zero()
            }
        })
    }

    /// Copies `block` into this matrix with its corner at `(row0, col0)`.
    pub fn place(&mut self, row0: usize, col0: usize, block: &Matrix<T>) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(row0 + i, col0 + j, block.get(i, j).clone());
            }
        }
    }

    /// Block-diagonal sum `[[self, 0], [0, other]]`.
    pub fn direct_sum(&self, other: &Matrix<T>) -> Self {
        let mut out = Matrix::zeros(self.rows + other.rows, self.cols + other.cols);
        out.place(0, 0, self);
        out.place(self.rows, self.cols, other);
        out
    }

    /// `[self | other]`.
    pub fn hconcat(&self, other: &Matrix<T>) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::dimension(
                "horizontal concatenation",
                self.rows,
                other.rows,
            ));
        }
        let mut out = Matrix::zeros(self.rows, self.cols + other.cols);
        out.place(0, 0, self);
        out.place(0, self.cols, other);
        Ok(out)
    }

    /// `[self ; other]`.
    pub fn vconcat(&self, other: &Matrix<T>) -> Result<Self> {
        if self.cols != other.cols {
            return Err(Error::dimension(
                "vertical concatenation",
                self.cols,
                other.cols,
            ));
        }
        let mut out = Matrix::zeros(self.rows + other.rows, self.cols);
        out.place(0, 0, self);
        out.place(self.rows, 0, other);
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }
}

impl<T: Ring> Matrix<T> {
    pub fn identity(n: usize) -> Self {
        Matrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn matmul(&self, other: &Matrix<T>) -> Result<Matrix<T>> {
        if self.cols != other.rows {
            return Err(Error::dimension(
                "matrix product",
                format!("{} rows", self.cols),
                format!("{} rows", other.rows),
            ));
        }
        Ok(Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = T::zero();
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                acc = acc + a.clone() * other.get(k, j).clone();
            }
            acc
        }))
    }

    pub fn add(&self, other: &Matrix<T>) -> Result<Matrix<T>> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::dimension(
                "matrix sum",
                format!("{}x{}", self.rows, self.cols),
                format!("{}x{}", other.rows, other.cols),
            ));
        }
        Ok(Matrix::from_fn(self.rows, self.cols, |i, j| {
            self.get(i, j).clone() + other.get(i, j).clone()
        }))
    }

    pub fn sub(&self, other: &Matrix<T>) -> Result<Matrix<T>> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Matrix<T> {
        self.map(|v| -v.clone())
    }

    pub fn scale(&self, c: &T) -> Matrix<T> {
        self.map(|v| v.clone() * c.clone())
    }

    /// Sum of the diagonal; requires a square matrix.
    pub fn trace(&self) -> Result<T> {
        self.require_square("trace")?;
        Ok((0..self.rows).fold(T::zero(), |acc, i| acc + self.get(i, i).clone()))
    }

    pub fn pow(&self, exp: u32) -> Result<Matrix<T>> {
        self.require_square("matrix power")?;
        let mut acc = Matrix::identity(self.rows);
        for _ in 0..exp {
            acc = acc.matmul(self)?;
        }
        Ok(acc)
    }

    /// Product of a non-empty list of matrices, left to right.
    pub fn product<'a>(mats: impl IntoIterator<Item = &'a Matrix<T>>) -> Result<Matrix<T>>
    where
        T: 'a,
    {
        let mut it = mats.into_iter();
        let first = it
            .next()
            .ok_or(Error::EmptyInput("matrix product"))?
            .clone();
        it.try_fold(first, |acc, m| acc.matmul(m))
    }

    pub(crate) fn require_square(&self, context: &'static str) -> Result<()> {
        if !self.is_square() {
            return Err(Error::dimension(
                context,
                "square matrix",
                format!("{}x{}", self.rows, self.cols),
            ));
        }
        Ok(())
    }
}

impl Matrix<Scalar> {
    pub fn from_ints(rows: usize, cols: usize, values: &[i64]) -> Result<Self> {
        Matrix::from_vec(
            rows,
            cols,
            values.iter().map(|&v| super::scalar::int(v)).collect(),
        )
    }

    /// Matrix times column vector.
    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::dimension(
                "matrix-vector product",
                self.cols,
                v.len(),
            ));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .fold(Scalar::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }
}

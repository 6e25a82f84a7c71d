//! Exact linear algebra kernels: fraction-free elimination, nullspaces,
//! division-free determinants and univariate interpolation.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::{Matrix, Ring};
use super::scalar::{denominator_lcm, Scalar};
use crate::error::{Error, Result};

/// Incrementally maintained set of linearly independent integer rows.
///
/// Rows are reduced fraction-free against the stored rows in insertion
/// order; a survivor's pivot is its first nonzero column. Each stored row is
/// zero at the pivots of every row inserted before it.
#[derive(Debug, Clone)]
pub struct EchelonBasis {
    width: usize,
    rows: Vec<(usize, Vec<BigInt>)>,
    steps: u64,
}

impl EchelonBasis {
    pub fn new(width: usize) -> Self {
        EchelonBasis {
            width,
            rows: Vec::new(),
            steps: 0,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Row operations performed so far.
    pub fn steps(&self) -> u64 {
        self.steps
    }

    /// Adds `v` if it is independent of the stored rows; reports whether it was.
    pub fn insert(&mut self, v: &[Scalar]) -> Result<bool> {
        if v.len() != self.width {
            return Err(Error::dimension("echelon row", self.width, v.len()));
        }
        let mut row = integer_row(v);
        for (pivot, stored) in &self.rows {
            if row[*pivot].is_zero() {
                continue;
            }
            self.steps += 1;
            let a = &stored[*pivot];
            let b = row[*pivot].clone();
            for (x, s) in row.iter_mut().zip(stored) {
                *x = &*x * a - &b * s;
            }
            primitive_part(&mut row);
        }
        match row.iter().position(|x| !x.is_zero()) {
            Some(pivot) => {
                self.rows.push((pivot, row));
                Ok(true)
            }
            None => Ok(false),
        }
    }

    /// Basis of `{ x : r · x = 0 for every stored row r }`, one vector per
    /// non-pivot column, with a 1 in that column and 0 in the other free
    /// columns.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let mut is_pivot = vec![false; self.width];
        for (p, _) in &self.rows {
            is_pivot[*p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.width).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Scalar::zero(); self.width];
            v[free] = Scalar::one();
            // later rows are zero at earlier pivots, so solve newest first
            for (pivot, row) in self.rows.iter().rev() {
                let mut acc = Scalar::zero();
                for (c, coeff) in row.iter().enumerate() {
                    if c != *pivot && !coeff.is_zero() && !v[c].is_zero() {
                        acc += Scalar::from_integer(coeff.clone()) * &v[c];
                    }
                }
                v[*pivot] = -acc / Scalar::from_integer(row[*pivot].clone());
            }
            basis.push(v);
        }
        basis
    }
}

fn integer_row(v: &[Scalar]) -> Vec<BigInt> {
    let l = denominator_lcm(v);
    let mut row: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    primitive_part(&mut row);
    row
}

fn primitive_part(row: &mut [BigInt]) {
    let g = row.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in row.iter_mut() {
            *x = &*x / &g;
        }
    }
}

/// Rank of the given rows.
pub fn rank(rows: &[Vec<Scalar>]) -> Result<usize> {
    let Some(first) = rows.first() else {
        return Ok(0);
    };
    let mut basis = EchelonBasis::new(first.len());
    for r in rows {
        basis.insert(r)?;
    }
    Ok(basis.rank())
}

/// Basis of the right nullspace `{ v : M v = 0 }`; empty iff the kernel is trivial.
pub fn nullspace_basis(m: &Matrix<Scalar>) -> Vec<Vec<Scalar>> {
    let mut basis = EchelonBasis::new(m.cols());
    for i in 0..m.rows() {
        basis
            .insert(m.row(i))
            .expect("row width matches column count");
    }
    basis.kernel()
}

/// Characteristic polynomial coefficients `[1, c_1, …, c_n]` of
/// `det(λI − M) = λ^n + c_1 λ^{n−1} + … + c_n`, using only ring operations.
pub fn char_poly_division_free<T: Ring>(m: &Matrix<T>) -> Result<Vec<T>> {
    m.require_square("characteristic polynomial")?;
    let n = m.rows();
    let mut poly = vec![T::one()];
    for start in (0..n).rev() {
        let size = n - start;
        let a = m.get(start, start).clone();
        let row: Vec<T> = (start + 1..n).map(|j| m.get(start, j).clone()).collect();
        let col: Vec<T> = (start + 1..n).map(|i| m.get(i, start).clone()).collect();
        // toeplitz column: 1, -a, -R C, -R S C, -R S^2 C, ...
        let mut t = Vec::with_capacity(size + 1);
        t.push(T::one());
        t.push(-a);
        let mut sc = col.clone();
        for _ in 1..size {
            let dot = row
                .iter()
                .zip(&sc)
                .fold(T::zero(), |acc, (r, c)| acc + r.clone() * c.clone());
            t.push(-dot);
            sc = (0..size - 1)
                .map(|i| {
                    (0..size - 1).fold(T::zero(), |acc, k| {
                        acc + m.get(start + 1 + i, start + 1 + k).clone() * sc[k].clone()
                    })
                })
                .collect();
        }
        let mut next = Vec::with_capacity(size + 1);
        for r in 0..=size {
            let mut acc = T::zero();
            for (c, p) in poly.iter().enumerate() {
                if r >= c {
                    acc = acc + t[r - c].clone() * p.clone();
                }
            }
            next.push(acc);
        }
        poly = next;
    }
    Ok(poly)
}

/// Determinant via the division-free characteristic-polynomial recurrence.
pub fn det_division_free<T: Ring>(m: &Matrix<T>) -> Result<T> {
    let n = m.rows();
    let mut poly = char_poly_division_free(m)?;
    let last = poly.pop().expect("characteristic polynomial is non-empty");
    Ok(if n.is_multiple_of(2) { last } else { -last })
}

/// Classical adjugate: `adj(M)_{ij} = (−1)^{i+j} det(M with row j, column i removed)`.
pub fn adjugate<T: Ring>(m: &Matrix<T>) -> Result<Matrix<T>> {
    m.require_square("adjugate")?;
    let n = m.rows();
    if n == 1 {
        return Ok(Matrix::identity(1));
    }
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let d = det_division_free(&m.minor(j, i))?;
            out.set(i, j, if (i + j) % 2 == 0 { d } else { -d });
        }
    }
    Ok(out)
}

/// Exact inverse `adj(M) / det(M)`, or `None` when `M` is singular.
pub fn inverse(m: &Matrix<Scalar>) -> Result<Option<Matrix<Scalar>>> {
    let d = det_division_free(m)?;
    if d.is_zero() {
        return Ok(None);
    }
    let inv_d = d.recip();
    Ok(Some(adjugate(m)?.map(|v| v * &inv_d)))
}

/// Coefficients `[c_0, …, c_d]` of the unique degree-≤d polynomial through
/// the `d + 1` given `(point, value)` pairs.
pub fn interpolate(evals: &[(Scalar, Scalar)]) -> Result<Vec<Scalar>> {
    if evals.is_empty() {
        return Err(Error::Interpolation("no evaluations given".into()));
    }
    for (i, (xi, _)) in evals.iter().enumerate() {
        if evals[..i].iter().any(|(xj, _)| xj == xi) {
            return Err(Error::Interpolation(format!(
                "duplicate interpolation point {}",
                super::scalar::format_scalar(xi)
            )));
        }
    }
    let n = evals.len();
    let mut coeffs = vec![Scalar::zero(); n];
    for (i, (xi, yi)) in evals.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        // basis polynomial prod_{k != i} (y - x_k), then scale
        let mut basis = vec![Scalar::one()];
        let mut denom = Scalar::one();
        for (k, (xk, _)) in evals.iter().enumerate() {
            if k == i {
                continue;
            }
            let mut next = vec![Scalar::zero(); basis.len() + 1];
            for (deg, c) in basis.iter().enumerate() {
                next[deg + 1] += c;
                next[deg] -= c * xk;
            }
            basis = next;
            denom *= xi - xk;
        }
        let factor = yi / denom;
        for (c, b) in coeffs.iter_mut().zip(&basis) {
            *c += b * &factor;
        }
    }
    Ok(coeffs)
}

/// Coefficient of `y^j` in the interpolant of `evals`; zero past its degree.
pub fn interpolate_coefficient(evals: &[(Scalar, Scalar)], j: usize) -> Result<Scalar> {
    let coeffs = interpolate(evals)?;
    Ok(coeffs.get(j).cloned().unwrap_or_else(Scalar::zero))
}

/// Largest bit-length among `values`.
pub(crate) fn max_bits(values: &[Scalar]) -> u64 {
    values
        .iter()
        .map(super::scalar::bit_length)
        .max()
        .unwrap_or(0)
}

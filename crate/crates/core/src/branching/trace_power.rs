use num_traits::{One, Zero};

use super::abp::Abp;
use super::affine::AffineForm;
use crate::algebra::scalar::{self, int};
use crate::algebra::{interpolate_coefficient, Matrix, Scalar, SparsePoly};
use crate::error::{Error, Result};

/// `Tr(A(x)^d)` for a square matrix `A` of affine forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TracePower {
    nvars: usize,
    exponent: usize,
    matrix: Matrix<AffineForm>,
}

impl TracePower {
    pub fn new(nvars: usize, exponent: usize, matrix: Matrix<AffineForm>) -> Result<Self> {
        if !matrix.is_square() || matrix.rows() == 0 {
            return Err(Error::dimension(
                "trace power matrix",
                "non-empty square",
                format!("{}x{}", matrix.rows(), matrix.cols()),
            ));
        }
        if exponent == 0 {
            return Err(Error::Parameter(
                "trace power exponent must be positive".into(),
            ));
        }
        if let Some(bad) = matrix.entries().iter().find(|f| f.arity() > nvars) {
            return Err(Error::Shape(format!(
                "entry references x{} but the trace power has {nvars} variables",
                bad.arity() - 1
            )));
        }
        Ok(TracePower {
            nvars,
            exponent,
            matrix,
        })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn exponent(&self) -> usize {
        self.exponent
    }

    pub fn matrix(&self) -> &Matrix<AffineForm> {
        &self.matrix
    }

    pub fn width(&self) -> usize {
        self.matrix.rows()
    }

    /// `n · w · d`.
    pub fn size(&self) -> usize {
        self.nvars * self.width() * self.exponent
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.nvars {
            return Err(Error::dimension(
                "trace power evaluation",
                self.nvars,
                point.len(),
            ));
        }
        let a = self.matrix.try_map(|f| f.eval(point))?;
        a.pow(self.exponent as u32)?.trace()
    }

    pub fn expand(&self) -> SparsePoly {
        let a = self.matrix.map(|f| f.to_poly(self.nvars));
        a.pow(self.exponent as u32)
            .and_then(|p| p.trace())
            .expect("matrix is square")
            .with_nvars(self.nvars)
    }

    /// `A′ = A₀z + Σ A_i x_i` with `z` the new last variable.
    pub fn homogenized(&self) -> TracePower {
        let z = self.nvars;
        TracePower {
            nvars: self.nvars + 1,
            exponent: self.exponent,
            matrix: self.matrix.map(|f| f.homogenize(z)),
        }
    }
}

/// Block matrix with `blocks[i]` at block position `(i, i+1 mod d)`.
pub fn cyclic_block_embed<T: Clone + Zero>(blocks: &[Matrix<T>]) -> Result<Matrix<T>> {
    let first = blocks.first().ok_or(Error::EmptyInput("cyclic blocks"))?;
    let n = first.rows();
    if let Some((i, m)) = blocks
        .iter()
        .enumerate()
        .find(|(_, m)| m.rows() != n || m.cols() != n)
    {
        return Err(Error::Shape(format!(
            "block {i} is {}x{}, expected {n}x{n}",
            m.rows(),
            m.cols()
        )));
    }
    let d = blocks.len();
    let mut out = Matrix::zeros(n * d, n * d);
    for (i, m) in blocks.iter().enumerate() {
        out.place(i * n, ((i + 1) % d) * n, m);
    }
    Ok(out)
}

/// Trace power of width at most `w · d′` and exponent `d′` computing the
/// same polynomial as `p`. `d_prime` defaults to the depth of `p`.
pub fn abp_to_trace_power(p: &Abp, d_prime: Option<usize>) -> Result<TracePower> {
    let d = p.depth();
    let d_prime = d_prime.unwrap_or(d);
    if d_prime < d {
        return Err(Error::Parameter(format!(
            "target exponent {d_prime} is below the program depth {d}"
        )));
    }
    let mut blocks = p.pad_to_square();
    let w = p.width();
    let inv = Scalar::one() / int(d_prime as i64);
    blocks[0] = blocks[0].map(|f| f.scale(&inv));
    let identity = Matrix::from_fn(w, w, |i, j| {
        AffineForm::constant(if i == j {
            Scalar::one()
        } else {
            Scalar::zero()
        })
    });
    blocks.resize(d_prime, identity);
    TracePower::new(p.nvars(), d_prime, cyclic_block_embed(&blocks)?)
}

/// ABP of width at most `w²` and depth `d` computing `Tr(A^d)`: one
/// program per diagonal entry of `A^d`, summed in parallel.
pub fn trace_power_to_abp(t: &TracePower) -> Result<Abp> {
    let a = &t.matrix;
    let d = t.exponent;
    let mut total: Option<Abp> = None;
    for i in 0..t.width() {
        let layers = if d == 1 {
            vec![Matrix::from_fn(1, 1, |_, _| a.get(i, i).clone())]
        } else {
            let mut layers = vec![a.row_matrix(i)];
            layers.extend(std::iter::repeat_n(a.clone(), d - 2));
            layers.push(a.col_matrix(i));
            layers
        };
        let diag = Abp::new(t.nvars, layers)?;
        total = Some(match total {
            None => diag,
            Some(acc) => acc.add(&diag)?,
        });
    }
    Ok(total.expect("width is positive"))
}

/// `Tr(A′(α, β)^d)` for the homogenization `A′`, using only evaluations of
/// the affine trace power.
pub fn homogenized_trace_query(t: &TracePower, alpha: &[Scalar], beta: &Scalar) -> Result<Scalar> {
    if alpha.len() != t.nvars {
        return Err(Error::dimension(
            "homogenized query point",
            t.nvars,
            alpha.len(),
        ));
    }
    let d = t.exponent;
    if !beta.is_zero() {
        let scaled: Vec<Scalar> = alpha.iter().map(|a| a / beta).collect();
        return Ok(scalar::pow(beta, d as u32) * t.eval(&scaled)?);
    }
    let evals = (0..=d)
        .map(|y| {
            let y = int(y as i64);
            let point: Vec<Scalar> = alpha.iter().map(|a| a * &y).collect();
            Ok((y, t.eval(&point)?))
        })
        .collect::<Result<Vec<_>>>()?;
    interpolate_coefficient(&evals, d)
}

use num_traits::{One, Zero};

use super::abp::{check_layer_chain, merge_parallel, trim_square_chain};
use crate::algebra::scalar::{self, Scalar};
use crate::algebra::{Matrix, Monomial, SparsePoly};
use crate::error::{Error, Result};

/// One layer of a read-once oblivious program: `M(x) = Σ_j C_j x^j` with
/// `j < r`, all `C_j` of the same shape.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoabpLayer {
    coeffs: Vec<Matrix<Scalar>>,
}

impl RoabpLayer {
    pub fn new(coeffs: Vec<Matrix<Scalar>>) -> Result<Self> {
        let first = coeffs
            .first()
            .ok_or(Error::EmptyInput("layer coefficient matrices"))?;
        let shape = (first.rows(), first.cols());
        if let Some(m) = coeffs.iter().find(|m| (m.rows(), m.cols()) != shape) {
            return Err(Error::dimension(
                "layer coefficient matrix",
                format!("{}x{}", shape.0, shape.1),
                format!("{}x{}", m.rows(), m.cols()),
            ));
        }
        Ok(RoabpLayer { coeffs })
    }

    /// A layer that does not depend on its variable.
    pub fn constant(m: Matrix<Scalar>, degree_bound: usize) -> Self {
        let zero = Matrix::zeros(m.rows(), m.cols());
        let mut coeffs = vec![m];
        coeffs.resize(degree_bound.max(1), zero);
        RoabpLayer { coeffs }
    }

    pub fn rows(&self) -> usize {
        self.coeffs[0].rows()
    }

    pub fn cols(&self) -> usize {
        self.coeffs[0].cols()
    }

    pub fn degree_bound(&self) -> usize {
        self.coeffs.len()
    }

    /// `C_j`, the coefficient of `x^j`.
    pub fn coeff(&self, j: usize) -> &Matrix<Scalar> {
        &self.coeffs[j]
    }

    pub fn coeffs(&self) -> &[Matrix<Scalar>] {
        &self.coeffs
    }

    pub fn eval(&self, x: &Scalar) -> Matrix<Scalar> {
        // Horner on matrix coefficients
        let mut acc = self.coeffs[self.coeffs.len() - 1].clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.scale(x).add(c).expect("coefficient shapes agree");
        }
        acc
    }

    /// Entries as univariate polynomials in `x_var`.
    pub fn to_poly_matrix(&self, var: usize, nvars: usize) -> Matrix<SparsePoly> {
        Matrix::from_fn(self.rows(), self.cols(), |u, v| {
            SparsePoly::from_terms(
                nvars,
                self.coeffs
                    .iter()
                    .enumerate()
                    .map(|(j, c)| (Monomial::var_pow(var, j as u32), c.get(u, v).clone())),
            )
        })
    }

    fn map(&self, f: impl Fn(&Matrix<Scalar>) -> Matrix<Scalar>) -> RoabpLayer {
        RoabpLayer {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }
}

/// A read-once oblivious ABP: layer `i` has entries that are univariate
/// polynomials in `x_i` of degree `< r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Roabp {
    degree_bound: usize,
    layers: Vec<RoabpLayer>,
}

impl Roabp {
    pub fn new(layers: Vec<RoabpLayer>) -> Result<Self> {
        check_layer_chain(layers.iter().map(|l| (l.rows(), l.cols())))?;
        let r = layers[0].degree_bound();
        if let Some((i, l)) = layers
            .iter()
            .enumerate()
            .find(|(_, l)| l.degree_bound() != r)
        {
            return Err(Error::Shape(format!(
                "layer {i} has degree bound {} but layer 0 has {r}",
                l.degree_bound()
            )));
        }
        Ok(Roabp {
            degree_bound: r,
            layers,
        })
    }

    /// Number of variables; one per layer.
    pub fn nvars(&self) -> usize {
        self.layers.len()
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    pub fn layers(&self) -> &[RoabpLayer] {
        &self.layers
    }

    pub fn width(&self) -> usize {
        std::iter::once(1)
            .chain(self.layers.iter().map(RoabpLayer::cols))
            .max()
            .unwrap_or(1)
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.nvars() {
            return Err(Error::dimension(
                "ROABP evaluation",
                self.nvars(),
                point.len(),
            ));
        }
        let mats: Vec<Matrix<Scalar>> = self
            .layers
            .iter()
            .zip(point)
            .map(|(l, x)| l.eval(x))
            .collect();
        Ok(Matrix::product(&mats)?.get(0, 0).clone())
    }

    pub fn expand(&self) -> SparsePoly {
        let n = self.nvars();
        let mats: Vec<Matrix<SparsePoly>> = self
            .layers
            .iter()
            .enumerate()
            .map(|(i, l)| l.to_poly_matrix(i, n))
            .collect();
        Matrix::product(&mats)
            .expect("layer chain validated")
            .get(0, 0)
            .clone()
            .with_nvars(n)
    }

    /// Coefficient of `x^e`: the product `C_{1,e_1} ⋯ C_{d,e_d}`, or zero
    /// when some `e_i >= r`.
    pub fn coefficient(&self, exponents: &[u32]) -> Result<Scalar> {
        if exponents.len() != self.depth() {
            return Err(Error::dimension(
                "ROABP coefficient",
                self.depth(),
                exponents.len(),
            ));
        }
        if exponents.iter().any(|&e| e as usize >= self.degree_bound) {
            return Ok(Scalar::zero());
        }
        let mats: Vec<&Matrix<Scalar>> = self
            .layers
            .iter()
            .zip(exponents)
            .map(|(l, &e)| l.coeff(e as usize))
            .collect();
        Ok(Matrix::product(mats)?.get(0, 0).clone())
    }

    pub fn pad_to_square(&self) -> Vec<RoabpLayer> {
        let w = self.width();
        self.layers
            .iter()
            .map(|l| l.map(|c| c.padded(w, w)))
            .collect()
    }

    pub fn from_square_layers(layers: &[RoabpLayer]) -> Result<Self> {
        let r = layers
            .first()
            .ok_or(Error::EmptyInput("square layer list"))?
            .degree_bound();
        // trim each coefficient slice independently
        let mut trimmed: Vec<Vec<Matrix<Scalar>>> = vec![Vec::new(); layers.len()];
        for j in 0..r {
            let slice: Vec<Matrix<Scalar>> = layers
                .iter()
                .map(|l| {
                    l.coeffs.get(j).cloned().ok_or_else(|| {
                        Error::Shape("square layers disagree on degree bound".into())
                    })
                })
                .collect::<Result<_>>()?;
            for (i, m) in trim_square_chain(&slice)?.into_iter().enumerate() {
                trimmed[i].push(m);
            }
        }
        Roabp::new(
            trimmed
                .into_iter()
                .map(RoabpLayer::new)
                .collect::<Result<_>>()?,
        )
    }

    pub fn negate(&self) -> Roabp {
        let mut layers = self.layers.clone();
        layers[0] = layers[0].map(Matrix::neg);
        Roabp {
            degree_bound: self.degree_bound,
            layers,
        }
    }

    /// Sum program of width at most `w + w'`; needs equal depth and degree bound.
    pub fn add(&self, other: &Roabp) -> Result<Roabp> {
        if self.depth() != other.depth() {
            return Err(Error::Shape(format!(
                "cannot add ROABPs of depth {} and {}; pad the shorter one first",
                self.depth(),
                other.depth()
            )));
        }
        if self.degree_bound != other.degree_bound {
            return Err(Error::Shape(format!(
                "cannot add ROABPs with degree bounds {} and {}",
                self.degree_bound, other.degree_bound
            )));
        }
        let mut per_layer: Vec<Vec<Matrix<Scalar>>> = vec![Vec::new(); self.depth()];
        for j in 0..self.degree_bound {
            let a: Vec<Matrix<Scalar>> = self.layers.iter().map(|l| l.coeff(j).clone()).collect();
            let b: Vec<Matrix<Scalar>> = other.layers.iter().map(|l| l.coeff(j).clone()).collect();
            for (i, m) in merge_parallel(&a, &b)?.into_iter().enumerate() {
                per_layer[i].push(m);
            }
        }
        Roabp::new(
            per_layer
                .into_iter()
                .map(RoabpLayer::new)
                .collect::<Result<_>>()?,
        )
    }

    pub fn sub(&self, other: &Roabp) -> Result<Roabp> {
        self.add(&other.negate())
    }

    /// Appends `1 × 1` identity layers reading fresh dummy variables.
    pub fn pad_depth(&self, depth: usize) -> Roabp {
        let mut layers = self.layers.clone();
        while layers.len() < depth {
            layers.push(RoabpLayer::constant(Matrix::identity(1), self.degree_bound));
        }
        Roabp {
            degree_bound: self.degree_bound,
            layers,
        }
    }

    /// The program with `x_var` fixed to `value`; the layer keeps its
    /// degree bound but becomes constant.
    pub fn substitute(&self, var: usize, value: &Scalar) -> Result<Roabp> {
        if var >= self.depth() {
            return Err(Error::dimension(
                "ROABP substitution",
                self.depth(),
                var + 1,
            ));
        }
        let mut layers = self.layers.clone();
        layers[var] = RoabpLayer::constant(layers[var].eval(value), self.degree_bound);
        Ok(Roabp {
            degree_bound: self.degree_bound,
            layers,
        })
    }

    /// Largest bit length among all coefficient entries.
    pub fn max_coefficient_bits(&self) -> u64 {
        self.layers
            .iter()
            .flat_map(|l| l.coeffs.iter())
            .flat_map(|m| m.entries().iter())
            .map(scalar::bit_length)
            .max()
            .unwrap_or(0)
    }
}

/// Width-1 program with the given univariate layer polynomials
/// (coefficient lists, lowest degree first, padded to `degree_bound`).
pub fn roabp_from_univariates(polys: &[Vec<Scalar>], degree_bound: usize) -> Result<Roabp> {
    let layers = polys
        .iter()
        .map(|p| {
            if p.len() > degree_bound {
                return Err(Error::Parameter(format!(
                    "univariate of {} coefficients exceeds degree bound {degree_bound}",
                    p.len()
                )));
            }
            let mut coeffs: Vec<Matrix<Scalar>> = p
                .iter()
                .map(|c| Matrix::from_fn(1, 1, |_, _| c.clone()))
                .collect();
            coeffs.resize(degree_bound, Matrix::zeros(1, 1));
            RoabpLayer::new(coeffs)
        })
        .collect::<Result<_>>()?;
    Roabp::new(layers)
}

impl RoabpLayer {
    /// `x^degree` as a `1 × 1` layer.
    pub fn monomial(degree: usize, degree_bound: usize) -> Result<Self> {
        if degree >= degree_bound {
            return Err(Error::Parameter(format!(
                "degree {degree} not below bound {degree_bound}"
            )));
        }
        let mut coeffs = vec![Matrix::zeros(1, 1); degree_bound];
        coeffs[degree] = Matrix::from_fn(1, 1, |_, _| Scalar::one());
        RoabpLayer::new(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::scalar::int;

    fn x(i: usize, n: usize) -> SparsePoly {
        SparsePoly::var(i, n)
    }

    #[test]
    fn single_path_expansion() {
        // layers [x0], [x1 + 1]
        let p = roabp_from_univariates(&[vec![int(0), int(1)], vec![int(1), int(1)]], 2).unwrap();
        assert_eq!(p.expand(), x(0, 2) * x(1, 2) + x(0, 2));
        assert_eq!(p.eval(&[int(2), int(3)]).unwrap(), int(8));
        assert_eq!(p.coefficient(&[1, 1]).unwrap(), int(1));
        assert_eq!(p.coefficient(&[0, 1]).unwrap(), int(0));
        assert_eq!(p.coefficient(&[2, 0]).unwrap(), int(0));
    }

    #[test]
    fn difference_with_itself_is_zero() {
        let p = roabp_from_univariates(&[vec![int(3), int(1)], vec![int(1), int(-2)]], 2).unwrap();
        let d = p.sub(&p).unwrap();
        assert!(d.expand().is_zero());
        assert_eq!(d.width(), 2);
    }

    #[test]
    fn padding_and_substitution() {
        let p = roabp_from_univariates(&[vec![int(1), int(2)]], 2).unwrap();
        let padded = p.pad_depth(3);
        assert_eq!(padded.depth(), 3);
        assert_eq!(
            padded.expand(),
            (x(0, 3).scale(&int(2)) + SparsePoly::constant(int(1), 3))
        );
        let s = padded.substitute(0, &int(5)).unwrap();
        assert_eq!(s.expand(), SparsePoly::constant(int(11), 3));
    }

    #[test]
    fn square_round_trip() {
        let a = roabp_from_univariates(&[vec![int(1), int(1)], vec![int(0), int(3)]], 2).unwrap();
        let b = roabp_from_univariates(&[vec![int(2), int(0)], vec![int(1), int(1)]], 2).unwrap();
        let s = a.add(&b).unwrap();
        let back = Roabp::from_square_layers(&s.pad_to_square()).unwrap();
        assert_eq!(back.expand(), a.expand() + b.expand());
    }

    #[test]
    fn mismatched_degree_bounds_rejected() {
        let a = roabp_from_univariates(&[vec![int(1)]], 1).unwrap();
        let b = roabp_from_univariates(&[vec![int(1)]], 2).unwrap();
        assert!(matches!(a.add(&b), Err(Error::Shape(_))));
    }
}

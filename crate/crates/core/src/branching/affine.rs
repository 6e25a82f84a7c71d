use std::collections::BTreeMap;
use std::ops::{Add, Neg, Sub};

use num_traits::Zero;

use crate::algebra::{Monomial, Scalar, SparsePoly};
use crate::error::{Error, Result};

/// `c + Σ a_i x_i` with no stored zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AffineForm {
    constant: Scalar,
    linear: BTreeMap<usize, Scalar>,
}

impl AffineForm {
    pub fn new(constant: Scalar, linear: impl IntoIterator<Item = (usize, Scalar)>) -> Self {
        let mut form = AffineForm::constant(constant);
        for (i, a) in linear {
            form.add_linear(i, a);
        }
        form
    }

    pub fn constant(c: Scalar) -> Self {
        AffineForm {
            constant: c,
            linear: BTreeMap::new(),
        }
    }

    pub fn var(i: usize) -> Self {
        AffineForm::new(Scalar::zero(), [(i, num_traits::One::one())])
    }

    pub fn constant_term(&self) -> &Scalar {
        &self.constant
    }

    pub fn coefficient(&self, i: usize) -> Scalar {
        self.linear.get(&i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn linear_terms(&self) -> impl Iterator<Item = (usize, &Scalar)> {
        self.linear.iter().map(|(&i, a)| (i, a))
    }

    pub fn add_linear(&mut self, i: usize, a: Scalar) {
        if a.is_zero() {
            return;
        }
        let entry = self.linear.entry(i).or_insert_with(Scalar::zero);
        *entry += a;
        if entry.is_zero() {
            self.linear.remove(&i);
        }
    }

    /// One past the largest variable index used.
    pub fn arity(&self) -> usize {
        self.linear.keys().next_back().map_or(0, |&i| i + 1)
    }

    pub fn is_constant(&self) -> bool {
        self.linear.is_empty()
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        if self.arity() > point.len() {
            return Err(Error::dimension(
                "affine form evaluation",
                self.arity(),
                point.len(),
            ));
        }
        Ok(self
            .linear
            .iter()
            .fold(self.constant.clone(), |acc, (&i, a)| acc + a * &point[i]))
    }

    pub fn to_poly(&self, nvars: usize) -> SparsePoly {
        let mut p = SparsePoly::constant(self.constant.clone(), nvars);
        for (&i, a) in &self.linear {
            p.add_term(Monomial::var(i), a.clone());
        }
        p.with_nvars(nvars)
    }

    pub fn scale(&self, c: &Scalar) -> AffineForm {
        if c.is_zero() {
            return AffineForm::default();
        }
        AffineForm {
            constant: &self.constant * c,
            linear: self.linear.iter().map(|(&i, a)| (i, a * c)).collect(),
        }
    }

    /// Moves the constant onto the new variable `z`: `c + Σ a_i x_i ↦ c·z + Σ a_i x_i`.
    pub fn homogenize(&self, z: usize) -> AffineForm {
        let mut out = AffineForm {
            constant: Scalar::zero(),
            linear: self.linear.clone(),
        };
        out.add_linear(z, self.constant.clone());
        out
    }
}

impl Add for AffineForm {
    type Output = AffineForm;
    fn add(mut self, rhs: AffineForm) -> AffineForm {
        self.constant += rhs.constant;
        for (i, a) in rhs.linear {
            self.add_linear(i, a);
        }
        self
    }
}

impl Neg for AffineForm {
    type Output = AffineForm;
    fn neg(self) -> AffineForm {
        AffineForm {
            constant: -self.constant,
            linear: self.linear.into_iter().map(|(i, a)| (i, -a)).collect(),
        }
    }
}

impl Sub for AffineForm {
    type Output = AffineForm;
    fn sub(self, rhs: AffineForm) -> AffineForm {
        self + (-rhs)
    }
}

impl Zero for AffineForm {
    fn zero() -> Self {
        AffineForm::default()
    }

    fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.linear.is_empty()
    }
}

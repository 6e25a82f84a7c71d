//! Sparse multivariate polynomials over the rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use super::scalar::{self, Scalar};
use crate::error::{Error, Result};

/// Exponent vector stored sparsely: variable index to positive exponent.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(BTreeMap<usize, u32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(BTreeMap::new())
    }

    pub fn var(index: usize) -> Self {
        Self::var_pow(index, 1)
    }

    pub fn var_pow(index: usize, exp: u32) -> Self {
        let mut m = BTreeMap::new();
        if exp > 0 {
            m.insert(index, exp);
        }
        Monomial(m)
    }

    /// Builds from a dense exponent vector, dropping zeros.
    pub fn from_exponents(exps: &[u32]) -> Self {
        Monomial(
            exps.iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| (i, e))
                .collect(),
        )
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut m = BTreeMap::new();
        for (i, e) in pairs {
            if e > 0 {
                *m.entry(i).or_insert(0) += e;
            }
        }
        Monomial(m)
    }

    pub fn exponent(&self, var: usize) -> u32 {
        self.0.get(&var).copied().unwrap_or(0)
    }

    /// `(variable, exponent)` pairs in increasing variable order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().map(|(&i, &e)| (i, e))
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.values().sum()
    }

    /// Number of variables with a nonzero exponent.
    pub fn support_size(&self) -> usize {
        self.0.len()
    }

    /// `Π (e_i + 1)`, the count of monomials dividing this one.
    pub fn product_size(&self) -> u64 {
        self.0.values().map(|&e| e as u64 + 1).product()
    }

    /// One past the largest variable index present.
    pub fn arity(&self) -> usize {
        self.0.keys().next_back().map_or(0, |&i| i + 1)
    }

    pub fn to_dense(&self, nvars: usize) -> Vec<u32> {
        let mut v = vec![0; nvars.max(self.arity())];
        for (i, e) in self.iter() {
            v[i] = e;
        }
        v
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.0.clone();
        for (&i, &e) in &other.0 {
            *out.entry(i).or_insert(0) += e;
        }
        Monomial(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = self.0.clone();
        for (&i, &e) in &other.0 {
            let have = out.get(&i).copied().unwrap_or(0);
            if have < e {
                return None;
            }
            if have == e {
                out.remove(&i);
            } else {
                out.insert(i, have - e);
            }
        }
        Some(Monomial(out))
    }

    /// Shifts every variable index by `offset`.
    pub fn shifted(&self, offset: usize) -> Monomial {
        Monomial(self.0.iter().map(|(&i, &e)| (i + offset, e)).collect())
    }

    pub fn eval(&self, point: &[Scalar]) -> Scalar {
        self.iter()
            .fold(Scalar::one(), |acc, (i, e)| acc * scalar::pow(&point[i], e))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .iter()
            .map(|(i, e)| {
                if e == 1 {
                    format!("x{i}")
                } else {
                    format!("x{i}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

/// A polynomial as a map from monomials to nonzero coefficients.
///
/// `nvars` is the declared arity. Arithmetic between polynomials of
/// different arity produces the larger arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<Monomial, Scalar>,
}

impl SparsePoly {
    pub fn zero(nvars: usize) -> Self {
        SparsePoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(c: Scalar, nvars: usize) -> Self {
        Self::term(Monomial::one(), c, nvars)
    }

    pub fn var(index: usize, nvars: usize) -> Self {
        Self::term(Monomial::var(index), Scalar::one(), nvars)
    }

    pub fn term(m: Monomial, c: Scalar, nvars: usize) -> Self {
        let nvars = nvars.max(m.arity());
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        SparsePoly { nvars, terms }
    }

    /// Sums the given terms, merging repeated monomials.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut p = SparsePoly::zero(nvars);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Same polynomial with declared arity at least `nvars`.
    pub fn with_nvars(mut self, nvars: usize) -> Self {
        self.nvars = self.nvars.max(nvars);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    /// Coefficient of `m`; zero when absent.
    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        self.nvars = self.nvars.max(m.arity());
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Total degree; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Largest exponent of each variable.
    pub fn max_exponents(&self) -> Vec<u32> {
        let mut v = vec![0; self.nvars];
        for m in self.terms.keys() {
            for (i, e) in m.iter() {
                v[i] = v[i].max(e);
            }
        }
        v
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.nvars {
            return Err(Error::dimension(
                "polynomial evaluation",
                self.nvars,
                point.len(),
            ));
        }
        Ok(self
            .terms
            .iter()
            .fold(Scalar::zero(), |acc, (m, c)| acc + c * m.eval(point)))
    }

    pub fn scale(&self, c: &Scalar) -> SparsePoly {
        if c.is_zero() {
            return SparsePoly::zero(self.nvars);
        }
        SparsePoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> SparsePoly {
        SparsePoly {
            nvars: self.nvars.max(m.arity()),
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (k.mul(m), v.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> SparsePoly {
        let mut acc = SparsePoly::constant(Scalar::one(), self.nvars);
        let mut sq = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        acc
    }

    /// Substitutes `subs[i]` for `x_i`. The result's arity is the largest
    /// arity among the substitutes.
    pub fn compose(&self, subs: &[SparsePoly]) -> Result<SparsePoly> {
        if subs.len() != self.nvars {
            return Err(Error::dimension(
                "polynomial composition",
                self.nvars,
                subs.len(),
            ));
        }
        let out_vars = subs.iter().map(SparsePoly::nvars).max().unwrap_or(0);
        // cache powers per variable
        let mut powers: Vec<Vec<SparsePoly>> = subs
            .iter()
            .map(|s| vec![SparsePoly::constant(Scalar::one(), out_vars), s.clone()])
            .collect();
        let mut out = SparsePoly::zero(out_vars);
        for (m, c) in &self.terms {
            let mut t = SparsePoly::constant(c.clone(), out_vars);
            for (i, e) in m.iter() {
                let cache = &mut powers[i];
                while cache.len() <= e as usize {
                    let next = &cache[cache.len() - 1] * &subs[i];
                    cache.push(next);
                }
                t = &t * &cache[e as usize];
            }
            out += t;
        }
        Ok(out.with_nvars(out_vars))
    }
}

impl Zero for SparsePoly {
    fn zero() -> Self {
        SparsePoly::zero(0)
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for SparsePoly {
    fn one() -> Self {
        SparsePoly::constant(Scalar::one(), 0)
    }
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| {
                let c = scalar::format_scalar(c);
                if m.is_one() {
                    c
                } else if c == "1" {
                    m.to_string()
                } else {
                    format!("{c}*{m}")
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl AddAssign<&SparsePoly> for SparsePoly {
    fn add_assign(&mut self, rhs: &SparsePoly) {
        self.nvars = self.nvars.max(rhs.nvars);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl AddAssign for SparsePoly {
    fn add_assign(&mut self, rhs: SparsePoly) {
        self.nvars = self.nvars.max(rhs.nvars);
        for (m, c) in rhs.terms {
            self.add_term(m, c);
        }
    }
}

impl SubAssign<&SparsePoly> for SparsePoly {
    fn sub_assign(&mut self, rhs: &SparsePoly) {
        self.nvars = self.nvars.max(rhs.nvars);
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl Add<&SparsePoly> for &SparsePoly {
    type Output = SparsePoly;
    fn add(self, rhs: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Add for SparsePoly {
    type Output = SparsePoly;
    fn add(mut self, rhs: SparsePoly) -> SparsePoly {
        self += rhs;
        self
    }
}

impl Sub<&SparsePoly> for &SparsePoly {
    type Output = SparsePoly;
    fn sub(self, rhs: &SparsePoly) -> SparsePoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Sub for SparsePoly {
    type Output = SparsePoly;
    fn sub(mut self, rhs: SparsePoly) -> SparsePoly {
        self -= &rhs;
        self
    }
}

impl Neg for SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        SparsePoly {
            nvars: self.nvars,
            terms: self.terms.into_iter().map(|(m, c)| (m, -c)).collect(),
        }
    }
}

impl Neg for &SparsePoly {
    type Output = SparsePoly;
    fn neg(self) -> SparsePoly {
        -self.clone()
    }
}

impl Mul<&SparsePoly> for &SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: &SparsePoly) -> SparsePoly {
        let mut out = SparsePoly::zero(self.nvars.max(rhs.nvars));
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl Mul for SparsePoly {
    type Output = SparsePoly;
    fn mul(self, rhs: SparsePoly) -> SparsePoly {
        &self * &rhs
    }
}

//! Depth-3 diagonal circuits `Σ_l L_l^{e_l}`, where `L_l` is a vector of
//! affine forms and `e_l` an exponent vector of the same length, and their
//! black-box zero test on points of small support.

use num_traits::{One, Zero};

use crate::algebra::scalar::{self, int};
use crate::algebra::{Scalar, SparsePoly};
use crate::branching::AffineForm;
use crate::error::{Error, Result};
use crate::pit::{hitting_set_zero_test, HittingSet, PitVerdict, Provenance};

/// Largest number of points [`hitting_set_diagonal`] will produce.
pub const DIAGONAL_CAP: u128 = 1 << 22;

/// One summand `Π_j L_j^{e_j}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalTerm {
    forms: Vec<AffineForm>,
    exponents: Vec<u32>,
}

impl DiagonalTerm {
    pub fn new(forms: Vec<AffineForm>, exponents: Vec<u32>) -> Result<Self> {
        if forms.len() != exponents.len() {
            return Err(Error::dimension(
                "diagonal term exponent vector",
                forms.len(),
                exponents.len(),
            ));
        }
        Ok(DiagonalTerm { forms, exponents })
    }

    pub fn forms(&self) -> &[AffineForm] {
        &self.forms
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn degree(&self) -> u32 {
        self.exponents.iter().sum()
    }

    /// `Π (e_j + 1)`.
    pub fn product_size(&self) -> u128 {
        self.exponents.iter().map(|&e| e as u128 + 1).product()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagonalCircuit {
    nvars: usize,
    terms: Vec<DiagonalTerm>,
}

impl DiagonalCircuit {
    pub fn new(nvars: usize, terms: Vec<DiagonalTerm>) -> Result<Self> {
        for (l, t) in terms.iter().enumerate() {
            if let Some(f) = t.forms.iter().find(|f| f.arity() > nvars) {
                return Err(Error::Shape(format!(
                    "term {l} references x{} but the circuit has {nvars} variables",
                    f.arity() - 1
                )));
            }
        }
        Ok(DiagonalCircuit { nvars, terms })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &[DiagonalTerm] {
        &self.terms
    }

    /// `n · Σ_l |e_l|_×`.
    pub fn size(&self) -> u128 {
        self.nvars as u128 * self.derivative_dim_bound()
    }

    /// `Σ_l |e_l|_×`, an upper bound on the dimension of the Hasse
    /// derivative space of the computed polynomial.
    pub fn derivative_dim_bound(&self) -> u128 {
        self.terms.iter().map(DiagonalTerm::product_size).sum()
    }

    pub fn max_term_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(DiagonalTerm::degree)
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, point: &[Scalar]) -> Result<Scalar> {
        if point.len() != self.nvars {
            return Err(Error::dimension(
                "diagonal circuit evaluation",
                self.nvars,
                point.len(),
            ));
        }
        let mut total = Scalar::zero();
        for t in &self.terms {
            let mut prod = Scalar::one();
            for (f, &e) in t.forms.iter().zip(&t.exponents) {
                prod *= scalar::pow(&f.eval(point)?, e);
            }
            total += prod;
        }
        Ok(total)
    }

    pub fn expand(&self) -> SparsePoly {
        let mut total = SparsePoly::zero(self.nvars);
        for t in &self.terms {
            let mut prod = SparsePoly::constant(Scalar::one(), self.nvars);
            for (f, &e) in t.forms.iter().zip(&t.exponents) {
                prod = &prod * &f.to_poly(self.nvars).pow(e);
            }
            total += prod;
        }
        total.with_nvars(self.nvars)
    }
}

/// `Σ_{k ≤ min(m, n)} C(n, k) d^k`.
pub fn diagonal_hitting_set_size(n: usize, d: u32, m: u32) -> u128 {
    let mut total = 0u128;
    let mut choose = 1u128;
    for k in 0..=(m as usize).min(n) {
        if k > 0 {
            choose = choose * (n - k + 1) as u128 / k as u128;
        }
        total = total.saturating_add(choose.saturating_mul((d as u128).saturating_pow(k as u32)));
    }
    total
}

/// Points of `{0, …, d}^n` with at most `m` nonzero coordinates: by support
/// size, then support in lexicographic order, then values in lexicographic
/// order.
pub fn hitting_set_diagonal(n: usize, d: u32, m: u32) -> Result<HittingSet> {
    if d == 0 {
        return Err(Error::Parameter("degree d must be at least 1".into()));
    }
    let size = diagonal_hitting_set_size(n, d, m);
    if size > DIAGONAL_CAP {
        return Err(Error::Size {
            what: "diagonal hitting set",
            size,
            cap: DIAGONAL_CAP,
        });
    }
    let mut points = Vec::with_capacity(size as usize);
    for k in 0..=(m as usize).min(n) {
        for support in combinations(n, k) {
            let mut values = vec![1u32; k];
            loop {
                let mut p = vec![Scalar::zero(); n];
                for (&i, &v) in support.iter().zip(&values) {
                    p[i] = int(v as i64);
                }
                points.push(p);
                // advance the last coordinate fastest
                let mut pos = k;
                while pos > 0 && values[pos - 1] == d {
                    values[pos - 1] = 1;
                    pos -= 1;
                }
                if pos == 0 {
                    break;
                }
                values[pos - 1] += 1;
            }
        }
    }
    HittingSet::new(n, points, Provenance::DiagonalSupport { d, m })
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = k;
        while i > 0 && cur[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return out;
        }
        cur[i - 1] += 1;
        for j in i..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// `⌈log₂ b⌉`, with 0 for `b <= 1`.
pub fn support_budget(bound: u128) -> u32 {
    if bound <= 1 {
        0
    } else {
        128 - (bound - 1).leading_zeros()
    }
}

/// Evaluates `c` on `hitting_set_diagonal(n, d, m)` with
/// `m = ⌈log₂ Σ_l |e_l|_×⌉` and `d` the largest term degree (at least 1).
pub fn blackbox_zero_test_diagonal(c: &DiagonalCircuit) -> Result<PitVerdict> {
    let m = support_budget(c.derivative_dim_bound());
    let d = c.max_term_degree().max(1);
    let h = hitting_set_diagonal(c.nvars, d, m)?;
    hitting_set_zero_test(|p| c.eval(p), &h)
}

//! Hasse derivatives on sparse polynomials.
//!
//! The `k`-th Hasse derivative of `f` in direction `u` is the coefficient of
//! `y^k` in `f(x + u·y)`. Per-variable derivatives act on a monomial as
//! `∂_{x_l^k}(x^e) = C(e_l, k) x^{e − k·δ_l}`, so they make sense in any
//! characteristic; here everything is over the rationals.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::algebra::linalg::EchelonBasis;
use crate::algebra::scalar::{self, binomial, multinomial, Scalar};
use crate::algebra::{Monomial, SparsePoly};
use crate::error::{Error, Result};

/// A total order on monomials compatible with multiplication, with
/// `x_0 > x_1 > … > x_{n−1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MonomialOrdering {
    /// Total degree first, ties broken lexicographically.
    #[default]
    GradedLex,
    Lex,
}

impl MonomialOrdering {
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self {
            MonomialOrdering::GradedLex => a.degree().cmp(&b.degree()).then_with(|| lex(a, b)),
            MonomialOrdering::Lex => lex(a, b),
        }
    }
}

fn lex(a: &Monomial, b: &Monomial) -> Ordering {
    let n = a.arity().max(b.arity());
    for i in 0..n {
        match a.exponent(i).cmp(&b.exponent(i)) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

/// The `≺`-largest monomial with nonzero coefficient.
pub fn leading_monomial(f: &SparsePoly, ord: MonomialOrdering) -> Result<Monomial> {
    f.monomials()
        .max_by(|a, b| ord.compare(a, b))
        .cloned()
        .ok_or(Error::EmptyInput("leading monomial of the zero polynomial"))
}

/// `∂_{u^k}(f)`: coefficient of `y^k` in `f(x + u·y)`.
pub fn hasse_directional(f: &SparsePoly, u: &[Scalar], k: u32) -> Result<SparsePoly> {
    if u.len() != f.nvars() {
        return Err(Error::dimension("derivative direction", f.nvars(), u.len()));
    }
    let mut out = SparsePoly::zero(f.nvars());
    let active: Vec<usize> = (0..u.len()).filter(|&i| !u[i].is_zero()).collect();
    for (m, c) in f.terms() {
        // distribute k over the active variables, j_i <= e_i
        let mut split = vec![0u32; active.len()];
        distribute(m, &active, k, 0, &mut split, &mut |split| {
            let mut coeff = c.clone();
            let mut mono = m.clone();
            for (&var, &j) in active.iter().zip(split.iter()) {
                if j == 0 {
                    continue;
                }
                coeff *= binomial(m.exponent(var), j) * scalar::pow(&u[var], j);
                mono = mono
                    .checked_div(&Monomial::var_pow(var, j))
                    .expect("split respects exponents");
            }
            out.add_term(mono, coeff);
        });
    }
    Ok(out)
}

fn distribute(
    m: &Monomial,
    active: &[usize],
    remaining: u32,
    pos: usize,
    split: &mut Vec<u32>,
    emit: &mut impl FnMut(&[u32]),
) {
    if pos == active.len() {
        if remaining == 0 {
            emit(split);
        }
        return;
    }
    let cap = m.exponent(active[pos]).min(remaining);
    for j in 0..=cap {
        split[pos] = j;
        distribute(m, active, remaining - j, pos + 1, split, emit);
    }
    split[pos] = 0;
}

/// `∂_{x^i}(f) = ∂_{x_0^{i_0}} ⋯ ∂_{x_{n−1}^{i_{n−1}}}(f)`.
pub fn hasse_variable(f: &SparsePoly, i: &Monomial) -> SparsePoly {
    let mut out = SparsePoly::zero(f.nvars());
    for (m, c) in f.terms() {
        let Some(rest) = m.checked_div(i) else {
            continue;
        };
        let coeff = i.iter().fold(c.clone(), |acc, (var, k)| {
            acc * binomial(m.exponent(var), k)
        });
        out.add_term(rest, coeff);
    }
    out
}

/// Exact dimension of the span of all per-variable Hasse derivatives of `f`.
///
/// Only exponent vectors bounded coordinatewise by the degrees of `f` are
/// enumerated; every other derivative vanishes.
pub fn derivative_space_dimension(f: &SparsePoly) -> usize {
    if f.is_zero() {
        return 0;
    }
    let bounds = f.max_exponents();
    let mut derivatives = Vec::new();
    let mut index: BTreeMap<Monomial, usize> = BTreeMap::new();
    for_each_bounded(&bounds, |exps| {
        let d = hasse_variable(f, &Monomial::from_exponents(exps));
        if !d.is_zero() {
            for m in d.monomials() {
                let next = index.len();
                index.entry(m.clone()).or_insert(next);
            }
            derivatives.push(d);
        }
    });
    let mut basis = EchelonBasis::new(index.len());
    for d in &derivatives {
        let mut row = vec![Scalar::zero(); index.len()];
        for (m, c) in d.terms() {
            row[index[m]] = c.clone();
        }
        basis
            .insert(&row)
            .expect("row width equals monomial index size");
    }
    basis.rank()
}

/// Calls `visit` on every exponent vector `e` with `0 <= e_i <= bounds_i`.
pub(crate) fn for_each_bounded(bounds: &[u32], mut visit: impl FnMut(&[u32])) {
    let mut cur = vec![0u32; bounds.len()];
    loop {
        visit(&cur);
        let mut pos = 0;
        loop {
            if pos == bounds.len() {
                return;
            }
            if cur[pos] < bounds[pos] {
                cur[pos] += 1;
                break;
            }
            cur[pos] = 0;
            pos += 1;
        }
    }
}

/// Right-hand side of the Hasse chain rule for `∂_{u^k}(f ∘ g)`:
///
/// `Σ Π_j [∂_{u^j}(g)]^{l_j} · C(l_1 + … + l_k; l_1, …, l_k) · [∂_{x^{Σ l_j}} f](g)`
///
/// over vectors `l_1, …, l_k ∈ ℕ^n` with `Σ_j j·|l_j| = k`, where vector
/// powers and multinomials are taken coordinatewise. `f` has one variable
/// per entry of `g`; `u` is a direction in the variables of `g`.
pub fn chain_rule_expansion(
    f: &SparsePoly,
    g: &[SparsePoly],
    u: &[Scalar],
    k: u32,
) -> Result<SparsePoly> {
    let n = g.len();
    if f.nvars() != n {
        return Err(Error::dimension("chain rule inner functions", f.nvars(), n));
    }
    let m = g.iter().map(SparsePoly::nvars).max().unwrap_or(0);
    let g: Vec<SparsePoly> = g.iter().map(|p| p.clone().with_nvars(m)).collect();
    // dg[j][i] = ∂_{u^j}(g_i), j = 1..=k
    let mut dg: Vec<Vec<SparsePoly>> = vec![Vec::new()];
    for j in 1..=k {
        dg.push(
            g.iter()
                .map(|gi| hasse_directional(gi, u, j))
                .collect::<Result<_>>()?,
        );
    }
    let mut out = SparsePoly::zero(m);
    let mut ls = vec![vec![0u32; n]; k as usize + 1];
    let mut failure = None;
    chain_terms(k, 1, n, &mut ls, &mut |ls| {
        if failure.is_some() {
            return;
        }
        let mut factor = SparsePoly::constant(Scalar::one(), m);
        for (j, lj) in ls.iter().enumerate().skip(1) {
            for (i, &e) in lj.iter().enumerate() {
                if e > 0 {
                    factor = &factor * &dg[j][i].pow(e);
                }
            }
        }
        let mut coeff = Scalar::one();
        let mut total = vec![0u32; n];
        for i in 0..n {
            let parts: Vec<u32> = ls.iter().skip(1).map(|lj| lj[i]).collect();
            coeff *= multinomial(&parts);
            total[i] = parts.iter().sum();
        }
        let df = hasse_variable(f, &Monomial::from_exponents(&total));
        match df.compose(&g) {
            Ok(inner) => out += &(&factor * &inner).scale(&coeff),
            Err(e) => failure = Some(e),
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(out),
    }
}

// Enumerates l_j for j >= level such that Σ j·|l_j| = remaining.
fn chain_terms(
    remaining: u32,
    level: u32,
    n: usize,
    ls: &mut Vec<Vec<u32>>,
    emit: &mut impl FnMut(&[Vec<u32>]),
) {
    if remaining == 0 {
        emit(ls);
        return;
    }
    if level > remaining {
        return;
    }
    let j = level as usize;
    for size in 0..=remaining / level {
        compositions(size, n, &mut |comp| {
            ls[j].copy_from_slice(comp);
            chain_terms(remaining - size * level, level + 1, n, ls, emit);
        });
    }
    ls[j].iter_mut().for_each(|x| *x = 0);
}

/// Every `v ∈ ℕ^parts` with `Σ v = total`.
fn compositions(total: u32, parts: usize, emit: &mut impl FnMut(&[u32])) {
    fn go(total: u32, pos: usize, cur: &mut Vec<u32>, emit: &mut impl FnMut(&[u32])) {
        if pos + 1 == cur.len() {
            cur[pos] = total;
            emit(cur);
            return;
        }
        for v in 0..=total {
            cur[pos] = v;
            go(total - v, pos + 1, cur, emit);
        }
    }
    if parts == 0 {
        if total == 0 {
            emit(&[]);
        }
        return;
    }
    let mut cur = vec![0; parts];
    go(total, 0, &mut cur, emit);
}

//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

pub mod props;

use std::collections::BTreeMap;

use invpit::algebra::scalar::int;
use invpit::{AffineForm, Matrix, MatrixTuple, Monomial, Scalar, SparsePoly, TracePower};
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Laplace expansion along the first row.
pub fn cofactor_det(m: &Matrix<Scalar>) -> Scalar {
    let n = m.rows();
    if n == 0 {
        return Scalar::one();
    }
    if n == 1 {
        return m.get(0, 0).clone();
    }
    let mut total = Scalar::zero();
    for j in 0..n {
        let a = m.get(0, j);
        if a.is_zero() {
            continue;
        }
        let minor = Matrix::from_fn(n - 1, n - 1, |r, c| {
            m.get(r + 1, if c < j { c } else { c + 1 }).clone()
        });
        let term = a * cofactor_det(&minor);
        if j % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total
}

fn poly_mul(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Coefficients of the Lagrange interpolant, lowest degree first.
pub fn lagrange(evals: &[(Scalar, Scalar)]) -> Vec<Scalar> {
    let mut total = vec![Scalar::zero(); evals.len()];
    for (i, (xi, yi)) in evals.iter().enumerate() {
        let mut basis = vec![Scalar::one()];
        let mut denom = Scalar::one();
        for (j, (xj, _)) in evals.iter().enumerate() {
            if i != j {
                basis = poly_mul(&basis, &[-xj.clone(), Scalar::one()]);
                denom *= xi - xj;
            }
        }
        for (k, c) in basis.iter().enumerate() {
            total[k] += c * yi / &denom;
        }
    }
    total
}

/// `tr(A_{w_1} ⋯ A_{w_ℓ})` for every word of length `ell`.
pub fn word_traces(a: &MatrixTuple, ell: usize) -> BTreeMap<Vec<u32>, Scalar> {
    let r = a.r() as u32;
    let mut words: Vec<Vec<u32>> = vec![vec![]];
    for _ in 0..ell {
        words = words
            .into_iter()
            .flat_map(|w| {
                (0..r).map(move |j| {
                    let mut v = w.clone();
                    v.push(j);
                    v
                })
            })
            .collect();
    }
    words
        .into_iter()
        .map(|w| {
            let mut prod = Matrix::identity(a.n());
            for &j in &w {
                prod = prod.matmul(&a.matrices()[j as usize]).unwrap();
            }
            let tr = (0..a.n()).fold(Scalar::zero(), |acc, i| acc + prod.get(i, i));
            (w, tr)
        })
        .collect()
}

/// `f(x + Σ_j u_j y_j)` with the `y_j` appended after the `x` variables.
pub fn shifted(f: &SparsePoly, dirs: &[Vec<Scalar>]) -> SparsePoly {
    let n = f.nvars();
    let total = n + dirs.len();
    let subs: Vec<SparsePoly> = (0..n)
        .map(|i| {
            let mut s = SparsePoly::var(i, total);
            for (j, u) in dirs.iter().enumerate() {
                s += SparsePoly::var(n + j, total).scale(&u[i]);
            }
            s
        })
        .collect();
    f.compose(&subs).unwrap()
}

/// Coefficient of `y_0^{k_0} y_1^{k_1} ⋯` in a polynomial from [`shifted`],
/// as a polynomial in the first `n` variables.
pub fn y_coefficient(g: &SparsePoly, n: usize, ks: &[u32]) -> SparsePoly {
    let mut out = SparsePoly::zero(n);
    for (m, c) in g.terms() {
        if (0..ks.len()).all(|j| m.exponent(n + j) == ks[j]) {
            let x_part = Monomial::from_pairs(m.iter().filter(|&(v, _)| v < n));
            out.add_term(x_part, c.clone());
        }
    }
    out
}

/// Substitute, expand, extract: `coeff_{y^k} f(x + u y)`.
pub fn hasse_oracle(f: &SparsePoly, u: &[Scalar], k: u32) -> SparsePoly {
    y_coefficient(&shifted(f, &[u.to_vec()]), f.nvars(), &[k])
}

pub fn affine_poly(f: &AffineForm, nvars: usize) -> SparsePoly {
    let mut p = SparsePoly::constant(f.constant_term().clone(), nvars);
    for (i, a) in f.linear_terms() {
        p += SparsePoly::var(i, nvars).scale(a);
    }
    p
}

pub fn poly_matmul(
    a: &[Vec<SparsePoly>],
    b: &[Vec<SparsePoly>],
    nvars: usize,
) -> Vec<Vec<SparsePoly>> {
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = SparsePoly::zero(nvars);
                    for (k, x) in row.iter().enumerate() {
                        s += x * &b[k][j];
                    }
                    s
                })
                .collect()
        })
        .collect()
}

pub fn poly_rows(m: &Matrix<AffineForm>, nvars: usize) -> Vec<Vec<SparsePoly>> {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|f| affine_poly(f, nvars)).collect())
        .collect()
}

/// `Tr(A^d)` by naive symbolic multiplication.
pub fn symbolic_trace_power(t: &TracePower) -> SparsePoly {
    let nv = t.nvars();
    let a = poly_rows(t.matrix(), nv);
    let mut p = a.clone();
    for _ in 1..t.exponent() {
        p = poly_matmul(&p, &a, nv);
    }
    (0..t.width()).fold(SparsePoly::zero(nv), |acc, i| acc + p[i][i].clone())
}

/// `Tr(A′(α, β)^d)` where `A′ = A_0 z + Σ A_i x_i`, evaluated directly.
pub fn explicit_homogenized(t: &TracePower, alpha: &[Scalar], beta: &Scalar) -> Scalar {
    let w = t.width();
    let a = Matrix::from_fn(w, w, |i, j| {
        let f = t.matrix().get(i, j);
        f.linear_terms()
            .fold(f.constant_term() * beta, |acc, (v, c)| acc + c * &alpha[v])
    });
    let mut p = Matrix::identity(w);
    for _ in 0..t.exponent() {
        p = p.matmul(&a).unwrap();
    }
    (0..w).fold(Scalar::zero(), |acc, i| acc + p.get(i, i))
}

pub fn ints(values: &[i64]) -> Vec<Scalar> {
    values.iter().map(|&v| int(v)).collect()
}

pub fn tuple(mats: &[&[i64]], n: usize) -> MatrixTuple {
    MatrixTuple::new(
        mats.iter()
            .map(|v| Matrix::from_ints(n, n, v).unwrap())
            .collect(),
    )
    .unwrap()
}

pub fn unipotent() -> MatrixTuple {
    tuple(&[&[1, 1, 0, 1]], 2)
}

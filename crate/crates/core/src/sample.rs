//! Random instances for tests, self-checks and benchmarks. Every generator
//! draws from the caller's RNG, so a seeded RNG gives reproducible output.

use num_traits::Zero;
use rand::Rng;

use crate::algebra::scalar::{int, ratio};
use crate::algebra::{det_division_free, Matrix, Monomial, Scalar, SparsePoly};
use crate::branching::{Abp, AffineForm, Roabp, RoabpLayer, TracePower};
use crate::diagonal::{DiagonalCircuit, DiagonalTerm};
use crate::invariants::MatrixTuple;

/// Uniform integer in `[−bound, bound]`.
pub fn integer<R: Rng>(rng: &mut R, bound: i64) -> Scalar {
    int(rng.random_range(-bound..=bound))
}

/// `p/q` with `|p| <= bound` and `1 <= q <= bound`.
pub fn rational<R: Rng>(rng: &mut R, bound: i64) -> Scalar {
    ratio(
        rng.random_range(-bound..=bound),
        rng.random_range(1..=bound.max(1)),
    )
}

pub fn point<R: Rng>(rng: &mut R, nvars: usize, bound: i64) -> Vec<Scalar> {
    (0..nvars).map(|_| rational(rng, bound)).collect()
}

/// Up to `max_terms` terms of total degree at most `max_degree`.
pub fn poly<R: Rng>(
    rng: &mut R,
    nvars: usize,
    max_degree: u32,
    max_terms: usize,
    bound: i64,
) -> SparsePoly {
    let mut f = SparsePoly::zero(nvars);
    for _ in 0..rng.random_range(1..=max_terms.max(1)) {
        let total = rng.random_range(0..=max_degree);
        let mut exps = vec![0u32; nvars];
        if nvars > 0 {
            for _ in 0..total {
                exps[rng.random_range(0..nvars)] += 1;
            }
        }
        f.add_term(Monomial::from_exponents(&exps), integer(rng, bound));
    }
    f
}

pub fn affine<R: Rng>(rng: &mut R, nvars: usize, bound: i64) -> AffineForm {
    AffineForm::new(
        integer(rng, bound),
        (0..nvars)
            .map(|i| (i, integer(rng, bound)))
            .collect::<Vec<_>>(),
    )
}

/// Layer widths uniform in `1..=width`.
pub fn abp<R: Rng>(rng: &mut R, nvars: usize, width: usize, depth: usize, bound: i64) -> Abp {
    let mut widths = vec![1];
    for _ in 1..depth {
        widths.push(rng.random_range(1..=width));
    }
    widths.push(1);
    let layers = widths
        .windows(2)
        .map(|w| Matrix::from_fn(w[0], w[1], |_, _| affine(rng, nvars, bound)))
        .collect();
    Abp::new(nvars, layers).expect("widths chain")
}

/// Layer widths uniform in `1..=width`, integer coefficients in `[−bound, bound]`.
pub fn roabp<R: Rng>(rng: &mut R, width: usize, depth: usize, r: usize, bound: i64) -> Roabp {
    let mut widths = vec![1];
    for _ in 1..depth {
        widths.push(rng.random_range(1..=width));
    }
    widths.push(1);
    let layers = widths
        .windows(2)
        .map(|w| {
            RoabpLayer::new(
                (0..r)
                    .map(|_| Matrix::from_fn(w[0], w[1], |_, _| integer(rng, bound)))
                    .collect(),
            )
            .expect("coefficient shapes agree")
        })
        .collect();
    Roabp::new(layers).expect("widths chain")
}

pub fn trace_power<R: Rng>(
    rng: &mut R,
    nvars: usize,
    width: usize,
    exponent: usize,
    bound: i64,
) -> TracePower {
    let m = Matrix::from_fn(width, width, |_, _| affine(rng, nvars, bound));
    TracePower::new(nvars, exponent, m).expect("square matrix")
}

pub fn matrix<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Matrix<Scalar> {
    Matrix::from_fn(n, n, |_, _| integer(rng, bound))
}

pub fn tuple<R: Rng>(rng: &mut R, n: usize, r: usize, bound: i64) -> MatrixTuple {
    MatrixTuple::new((0..r).map(|_| matrix(rng, n, bound)).collect()).expect("square matrices")
}

/// Rejection-samples an integer matrix with nonzero determinant.
pub fn invertible<R: Rng>(rng: &mut R, n: usize, bound: i64) -> Matrix<Scalar> {
    loop {
        let m = matrix(rng, n, bound);
        if !det_division_free(&m).expect("square").is_zero() {
            return m;
        }
    }
}

/// Up to `max_terms` terms, each a product of powers of random affine forms
/// with total degree in `1..=max_degree`.
pub fn diagonal<R: Rng>(
    rng: &mut R,
    nvars: usize,
    max_degree: u32,
    max_terms: usize,
    bound: i64,
) -> DiagonalCircuit {
    let terms = (0..rng.random_range(1..=max_terms.max(1)))
        .map(|_| {
            let total = rng.random_range(1..=max_degree.max(1));
            let k = rng.random_range(1..=total as usize);
            let mut exps = vec![1u32; k];
            for _ in k as u32..total {
                exps[rng.random_range(0..k)] += 1;
            }
            let forms = (0..k).map(|_| affine(rng, nvars, bound)).collect();
            DiagonalTerm::new(forms, exps).expect("lengths agree")
        })
        .collect();
    DiagonalCircuit::new(nvars, terms).expect("forms use circuit variables")
}

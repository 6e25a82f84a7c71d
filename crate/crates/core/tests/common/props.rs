//! Property checks on one random instance each. Every check returns a
//! description of the first mismatch.

use invpit::algebra::scalar::{binomial, int, pow, ratio};
use invpit::branching::{
    abp_to_trace_power, cyclic_block_embed, homogenized_trace_query, trace_power_to_abp,
};
use invpit::diagonal::{blackbox_zero_test_diagonal, hitting_set_diagonal, support_budget};
use invpit::hasse::{
    chain_rule_expansion, derivative_space_dimension, hasse_directional, hasse_variable,
    leading_monomial,
};
use invpit::invariants::{
    build_f_ell_roabp, orbit_closure_intersects, orbit_member, separates, separating_family,
    trace_word_oracle, ClosureOptions, Decision, Method, OrbitWitness,
};
use invpit::pit::{bruteforce_zero_test, whitebox_roabp_zero_test, HittingSet, Witness};
use invpit::{
    sample, AffineForm, DiagonalCircuit, DiagonalTerm, Matrix, MatrixTuple, Monomial,
    MonomialOrdering, Scalar, SparsePoly,
};
use num_traits::Zero;
use rand::Rng;

use super::{
    cofactor_det, explicit_homogenized, hasse_oracle, shifted, word_traces, y_coefficient,
};

pub type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn hd(f: &SparsePoly, u: &[Scalar], k: u32) -> SparsePoly {
    hasse_directional(f, u, k).expect("direction arity matches")
}

/// `f` with at most 2 variables and degree at most 3.
pub fn small_poly<R: Rng>(rng: &mut R) -> SparsePoly {
    let n = rng.random_range(1..=2);
    sample::poly(rng, n, 3, 5, 6)
}

fn direction<R: Rng>(rng: &mut R, n: usize) -> Vec<Scalar> {
    sample::point(rng, n, 4)
}

// ---- Hasse calculus ----

pub fn hasse_identity<R: Rng>(rng: &mut R) -> Check {
    let f = small_poly(rng);
    let u = direction(rng, f.nvars());
    ensure(hd(&f, &u, 0) == f, || format!("∂⁰ changed {f}"))
}

pub fn hasse_linearity<R: Rng>(rng: &mut R) -> Check {
    let f = small_poly(rng);
    let g = sample::poly(rng, f.nvars(), 3, 5, 6);
    let (a, b) = (sample::rational(rng, 5), sample::rational(rng, 5));
    let u = direction(rng, f.nvars());
    let k = rng.random_range(0..=3);
    let lhs = hd(&(f.scale(&a) + g.scale(&b)), &u, k);
    let rhs = hd(&f, &u, k).scale(&a) + hd(&g, &u, k).scale(&b);
    ensure(lhs == rhs, || {
        format!("linearity fails for f={f}, g={g}, k={k}")
    })
}

fn two_directions<R: Rng>(rng: &mut R) -> (SparsePoly, Vec<Scalar>, Vec<Scalar>) {
    let f = small_poly(rng);
    let u1 = direction(rng, f.nvars());
    let u2 = direction(rng, f.nvars());
    (f, u1, u2)
}

pub fn hasse_taylor<R: Rng>(rng: &mut R) -> Check {
    let (f, u1, u2) = two_directions(rng);
    let n = f.nvars();
    let total = n + 2;
    let lhs = shifted(&f, &[u1.clone(), u2.clone()]);
    let deg = f.degree();
    let mut rhs = SparsePoly::zero(total);
    for k1 in 0..=deg {
        for k2 in 0..=deg - k1 {
            let d = hd(&hd(&f, &u2, k2), &u1, k1).with_nvars(total);
            let y = Monomial::from_pairs([(n, k1), (n + 1, k2)]);
            rhs += d.mul_monomial(&y);
        }
    }
    ensure(lhs == rhs, || format!("Taylor expansion mismatch for {f}"))
}

pub fn hasse_coefficient<R: Rng>(rng: &mut R) -> Check {
    let (f, u1, u2) = two_directions(rng);
    let g = shifted(&f, &[u1.clone(), u2.clone()]);
    let k1 = rng.random_range(0..=3);
    let k2 = rng.random_range(0..=3);
    let lhs = hd(&hd(&f, &u2, k2), &u1, k1);
    let rhs = y_coefficient(&g, f.nvars(), &[k1, k2]);
    ensure(lhs == rhs, || {
        format!("iterated derivative ≠ coefficient for {f}, k=({k1},{k2})")
    })
}

pub fn hasse_commutativity<R: Rng>(rng: &mut R) -> Check {
    let (f, u, v) = two_directions(rng);
    let k = rng.random_range(0..=3);
    let l = rng.random_range(0..=3);
    ensure(
        hd(&hd(&f, &v, l), &u, k) == hd(&hd(&f, &u, k), &v, l),
        || format!("directional derivatives do not commute on {f}"),
    )?;
    let f2 = sample::poly(rng, 2, 3, 5, 6);
    let a = Monomial::var_pow(0, rng.random_range(0..=2));
    let b = Monomial::var_pow(1, rng.random_range(0..=2));
    ensure(
        hasse_variable(&hasse_variable(&f2, &a), &b)
            == hasse_variable(&hasse_variable(&f2, &b), &a),
        || format!("per-variable derivatives do not commute on {f2}"),
    )
}

pub fn hasse_direction_linearity<R: Rng>(rng: &mut R) -> Check {
    let (f, u1, u2) = two_directions(rng);
    let (a1, a2) = (sample::rational(rng, 4), sample::rational(rng, 4));
    let k = rng.random_range(0..=3u32);
    let dir: Vec<Scalar> = u1.iter().zip(&u2).map(|(x, y)| &a1 * x + &a2 * y).collect();
    let lhs = hd(&f, &dir, k);
    let mut rhs = SparsePoly::zero(f.nvars());
    for k1 in 0..=k {
        let k2 = k - k1;
        let c = pow(&a1, k1) * pow(&a2, k2);
        rhs += hd(&hd(&f, &u2, k2), &u1, k1).scale(&c);
    }
    ensure(lhs == rhs, || {
        format!("direction linearity fails for {f}, k={k}")
    })
}

pub fn hasse_collapse<R: Rng>(rng: &mut R) -> Check {
    let f = small_poly(rng);
    let u = direction(rng, f.nvars());
    let k1 = rng.random_range(0..=3);
    let k2 = rng.random_range(0..=3);
    let lhs = hd(&hd(&f, &u, k2), &u, k1);
    let rhs = hd(&f, &u, k1 + k2).scale(&binomial(k1 + k2, k1));
    ensure(lhs == rhs, || {
        format!("composition collapse fails for {f}, k=({k1},{k2})")
    })
}

pub fn hasse_matches_oracle<R: Rng>(rng: &mut R) -> Check {
    let f = small_poly(rng);
    let u = direction(rng, f.nvars());
    let k = rng.random_range(0..=3);
    ensure(hd(&f, &u, k) == hasse_oracle(&f, &u, k), || {
        format!("derivative differs from substitute-expand-extract for {f}, k={k}")
    })
}

pub fn product_rule<R: Rng>(rng: &mut R) -> Check {
    let f = small_poly(rng);
    let g = sample::poly(rng, f.nvars(), 3, 4, 6);
    let u = direction(rng, f.nvars());
    let k = rng.random_range(0..=3);
    let lhs = hasse_oracle(&(&f * &g), &u, k);
    let mut rhs = SparsePoly::zero(f.nvars());
    for i in 0..=k {
        rhs += &hd(&f, &u, i) * &hd(&g, &u, k - i);
    }
    ensure(lhs == rhs, || {
        format!("product rule fails for f={f}, g={g}, k={k}")
    })
}

/// `f` in 2 variables of degree ≤ 3, inner `g_1, g_2` of degree ≤ 2.
pub fn chain_rule<R: Rng>(rng: &mut R) -> Check {
    let f = sample::poly(rng, 2, 3, 5, 5);
    let m = rng.random_range(1..=2);
    let g = vec![sample::poly(rng, m, 2, 3, 4), sample::poly(rng, m, 2, 3, 4)];
    let u = direction(rng, m);
    let k = rng.random_range(0..=3);
    let composed = f.compose(&g).map_err(|e| e.to_string())?.with_nvars(m);
    let direct = hasse_oracle(&composed, &u, k);
    let formula = chain_rule_expansion(&f, &g, &u, k).map_err(|e| e.to_string())?;
    ensure(direct == formula.with_nvars(m), || {
        format!("chain rule mismatch: f={f}, g=({}, {}), k={k}", g[0], g[1])
    })
}

pub fn ordering_monotone<R: Rng>(rng: &mut R) -> Check {
    let ord = MonomialOrdering::GradedLex;
    let n = 3;
    let rand_mono = |rng: &mut R| {
        Monomial::from_exponents(&(0..n).map(|_| rng.random_range(0..=3)).collect::<Vec<_>>())
    };
    let (i, j, k) = (rand_mono(rng), rand_mono(rng), rand_mono(rng));
    let (Some(di), Some(dj)) = (i.checked_div(&k), j.checked_div(&k)) else {
        return Ok(());
    };
    ensure(ord.compare(&i, &j) == ord.compare(&di, &dj), || {
        format!("order not preserved: {i} vs {j} after ∂ by {k}")
    })
}

pub fn dimension_subadditive<R: Rng>(rng: &mut R) -> Check {
    let f = sample::poly(rng, 2, 3, 4, 5);
    let g = sample::poly(rng, 2, 3, 4, 5);
    let s = derivative_space_dimension(&(&f + &g));
    let bound = derivative_space_dimension(&f) + derivative_space_dimension(&g);
    ensure(s <= bound, || format!("|∂(f+g)| = {s} > {bound}"))
}

pub fn dimension_affine_substitution<R: Rng>(rng: &mut R) -> Check {
    let f = sample::poly(rng, 2, 3, 4, 5);
    let m = rng.random_range(1..=3);
    let subs: Vec<SparsePoly> = (0..2)
        .map(|_| sample::affine(rng, m, 3).to_poly(m))
        .collect();
    let g = f.compose(&subs).map_err(|e| e.to_string())?.with_nvars(m);
    let (a, b) = (
        derivative_space_dimension(&g),
        derivative_space_dimension(&f),
    );
    ensure(a <= b, || format!("|∂(f∘L)| = {a} > |∂(f)| = {b}"))
}

/// `2^{|i|₀} ≤ |∂(f)|` for the leading monomial `x^i`.
pub fn small_monomial(f: &SparsePoly) -> Check {
    if f.is_zero() {
        return Ok(());
    }
    let lead = leading_monomial(f, MonomialOrdering::GradedLex).map_err(|e| e.to_string())?;
    let dim = derivative_space_dimension(f) as u128;
    ensure(1u128 << lead.support_size() <= dim, || {
        format!("leading monomial {lead} has support above log2({dim})")
    })
}

// ---- white-box PIT ----

/// Random ROABP (`w ≤ 4, d ≤ 4, r ≤ 3`, coefficients in `[−5, 5]`); when
/// `zeroed`, the program is `p − p`.
pub fn whitebox_agrees<R: Rng>(rng: &mut R, zeroed: bool) -> Check {
    let w = rng.random_range(1..=4);
    let d = rng.random_range(1..=4);
    let r = rng.random_range(1..=3);
    let mut p = sample::roabp(rng, w, d, r, 5);
    if zeroed {
        p = p.sub(&p).map_err(|e| e.to_string())?;
    }
    let expanded = p.expand();
    let verdict = whitebox_roabp_zero_test(&p);
    ensure(
        verdict.is_zero == bruteforce_zero_test(&expanded).is_zero,
        || format!("white-box says zero={} for {expanded}", verdict.is_zero),
    )?;
    if let Some(Witness::Monomial {
        monomial,
        coefficient,
    }) = &verdict.witness
    {
        let c = p
            .coefficient(&monomial.to_dense(p.nvars()))
            .map_err(|e| e.to_string())?;
        ensure(
            !c.is_zero() && &c == coefficient && expanded.coeff(monomial) == c,
            || format!("witness {monomial} does not recheck"),
        )?;
    }
    ensure(verdict.is_zero || verdict.witness.is_some(), || {
        "nonzero verdict without witness".into()
    })
}

// ---- invariants ----

fn tuple_n2r2<R: Rng>(rng: &mut R) -> MatrixTuple {
    sample::tuple(rng, 2, 2, 3)
}

/// Every coefficient of `f_ℓ(A, x)` is the matching word trace.
pub fn roabp_coefficients<R: Rng>(rng: &mut R, ell: usize) -> Check {
    let a = tuple_n2r2(rng);
    let p = build_f_ell_roabp(&a, ell).map_err(|e| e.to_string())?;
    ensure(p.width() <= 4 && p.depth() == ell, || {
        "f_ell ROABP too wide".into()
    })?;
    let f = p.expand();
    let traces = word_traces(&a, ell);
    for (word, tr) in &traces {
        let m = Monomial::from_exponents(word);
        ensure(&f.coeff(&m) == tr, || {
            format!("coefficient of {m} is not tr of word {word:?}")
        })?;
    }
    for m in f.monomials() {
        let dense = m.to_dense(ell);
        ensure(dense.iter().all(|&e| (e as usize) < a.r()), || {
            format!("out-of-range monomial {m} present")
        })?;
    }
    Ok(())
}

/// Upper-triangular 2×2 tuples whose diagonal part lies in their orbit
/// closure but which are not simultaneously diagonalizable.
pub fn closure_equal_pairs() -> Vec<(MatrixTuple, MatrixTuple)> {
    let mut out = vec![(
        super::tuple(&[&[1, 1, 0, 1], &[1, 0, 0, 1]], 2),
        super::tuple(&[&[1, 0, 0, 1], &[1, 0, 0, 1]], 2),
    )];
    let mut rng = super::rng(99);
    while out.len() < 20 {
        let diag: Vec<(i64, i64, i64)> = (0..2)
            .map(|_| {
                (
                    rng.random_range(-3..=3),
                    rng.random_range(-3..=3),
                    rng.random_range(-3..=3),
                )
            })
            .collect();
        // complement line (v, 1) is invariant iff c_i = (b_i − a_i) v for all i
        let has_common_v = {
            let (a0, b0, c0) = diag[0];
            let (a1, b1, c1) = diag[1];
            let (d0, d1) = (b0 - a0, b1 - a1);
            match (d0, d1) {
                (0, 0) => c0 == 0 && c1 == 0,
                (0, _) => c0 == 0,
                (_, 0) => c1 == 0,
                _ => c0 * d1 == c1 * d0,
            }
        };
        if has_common_v {
            continue;
        }
        let a = super::tuple(
            &[
                &[diag[0].0, diag[0].2, 0, diag[0].1],
                &[diag[1].0, diag[1].2, 0, diag[1].1],
            ],
            2,
        );
        let b = super::tuple(
            &[&[diag[0].0, 0, 0, diag[0].1], &[diag[1].0, 0, 0, diag[1].1]],
            2,
        );
        out.push((a, b));
    }
    out
}

pub fn conjugate_pair<R: Rng>(
    rng: &mut R,
    n: usize,
    r: usize,
) -> (MatrixTuple, MatrixTuple, Matrix<Scalar>) {
    let a = sample::tuple(rng, n, r, 3);
    let p = sample::invertible(rng, n, 3);
    let b = a.conjugate(&p).expect("invertible");
    (a, b, p)
}

pub fn closure_agrees(a: &MatrixTuple, b: &MatrixTuple) -> Check {
    let v = orbit_closure_intersects(a, b, ClosureOptions::default()).map_err(|e| e.to_string())?;
    let oracle = trace_word_oracle(a, b, a.n() * a.n()).map_err(|e| e.to_string())?;
    ensure((v.decision == Decision::Intersecting) == oracle, || {
        format!(
            "closure decision {:?} but word-trace oracle says {oracle}",
            v.decision
        )
    })?;
    if let Some(OrbitWitness::Separating {
        value_a, value_b, ..
    }) = &v.witness
    {
        ensure(value_a != value_b, || {
            "separating witness does not separate".into()
        })?;
    }
    Ok(())
}

/// `B_j P = P A_j` for all `j` and `det P ≠ 0`, checked without the library
/// inverse.
pub fn is_conjugator(a: &MatrixTuple, b: &MatrixTuple, p: &Matrix<Scalar>) -> bool {
    !cofactor_det(p).is_zero()
        && a.matrices()
            .iter()
            .zip(b.matrices())
            .all(|(ma, mb)| mb.matmul(p).unwrap() == p.matmul(ma).unwrap())
}

pub fn membership_agrees(
    a: &MatrixTuple,
    b: &MatrixTuple,
    expect_member: bool,
    seed: u64,
) -> Check {
    let v = orbit_member(a, b, seed, 10).map_err(|e| e.to_string())?;
    let limit = ratio(1, 100_000);
    match &v.method {
        Method::Randomized { failure_bound } => ensure(failure_bound <= &limit, || {
            format!("failure bound {failure_bound} above 1e-5")
        })?,
        other => return Err(format!("unexpected method {other:?}")),
    }
    ensure((v.decision == Decision::Member) == expect_member, || {
        format!(
            "membership decision {:?}, expected member={expect_member}",
            v.decision
        )
    })?;
    if expect_member {
        match &v.witness {
            Some(OrbitWitness::Conjugator { p }) => ensure(is_conjugator(a, b, p), || {
                "witness does not conjugate".into()
            }),
            _ => Err("member verdict without conjugator".into()),
        }
    } else {
        Ok(())
    }
}

// ---- trace powers ----

pub fn trace_power_round_trip<R: Rng>(rng: &mut R) -> Check {
    let n = rng.random_range(1..=3);
    let w = rng.random_range(1..=2);
    let d = rng.random_range(1..=3);
    let p = sample::abp(rng, n, w, d, 4);
    let t = abp_to_trace_power(&p, None).map_err(|e| e.to_string())?;
    ensure(t.width() <= p.width() * d, || "trace power too wide".into())?;
    let expanded = p.expand();
    ensure(super::symbolic_trace_power(&t) == expanded, || {
        "Tr(A^d) ≠ f".into()
    })?;
    let back = trace_power_to_abp(&t).map_err(|e| e.to_string())?;
    ensure(back.width() <= t.width() * t.width(), || {
        "converse ABP too wide".into()
    })?;
    ensure(back.expand() == expanded, || {
        "round trip changed the polynomial".into()
    })
}

pub fn cyclic_embedding<R: Rng>(rng: &mut R, d: usize) -> Check {
    let n = rng.random_range(1..=3);
    let blocks: Vec<Matrix<Scalar>> = (0..d).map(|_| sample::matrix(rng, n, 4)).collect();
    let a = cyclic_block_embed(&blocks).map_err(|e| e.to_string())?;
    let mut power = Matrix::identity(n * d);
    for _ in 0..d {
        power = power.matmul(&a).unwrap();
    }
    let mut prod = Matrix::identity(n);
    for b in &blocks {
        prod = prod.matmul(b).unwrap();
    }
    let tr = |m: &Matrix<Scalar>| (0..m.rows()).fold(Scalar::zero(), |acc, i| acc + m.get(i, i));
    ensure(tr(&power) == int(d as i64) * tr(&prod), || {
        format!("Tr(A^{d}) ≠ {d}·Tr(M_1⋯M_{d})")
    })
}

pub fn homogenization<R: Rng>(rng: &mut R, beta_zero: bool) -> Check {
    let n = rng.random_range(1..=3);
    let w = rng.random_range(1..=3);
    let d = rng.random_range(1..=3);
    let t = sample::trace_power(rng, n, w, d, 4);
    let alpha = sample::point(rng, n, 5);
    let beta = if beta_zero {
        Scalar::zero()
    } else {
        loop {
            let b = sample::rational(rng, 5);
            if !b.is_zero() {
                break b;
            }
        }
    };
    let got = homogenized_trace_query(&t, &alpha, &beta).map_err(|e| e.to_string())?;
    let want = explicit_homogenized(&t, &alpha, &beta);
    ensure(got == want, || {
        format!("query {got} ≠ explicit {want} at β={beta}")
    })
}

// ---- diagonal circuits ----

pub fn diagonal_size_formula(n: usize, d: u32, m: u32) -> u128 {
    (0..=(m as usize).min(n))
        .map(|k| {
            let c: Scalar = binomial(n as u32, k as u32);
            c.to_integer().try_into().unwrap_or(0u128) * (d as u128).pow(k as u32)
        })
        .sum()
}

pub fn diagonal_agrees(c: &DiagonalCircuit) -> Check {
    let verdict = blackbox_zero_test_diagonal(c).map_err(|e| e.to_string())?;
    let f = c.expand();
    ensure(verdict.is_zero == f.is_zero(), || {
        format!(
            "diagonal verdict zero={} but expansion is {f}",
            verdict.is_zero
        )
    })?;
    let m = support_budget(c.derivative_dim_bound());
    let d = c.max_term_degree().max(1);
    let h = hitting_set_diagonal(c.nvars(), d, m).map_err(|e| e.to_string())?;
    ensure(
        h.len() as u128 == diagonal_size_formula(c.nvars(), d, m),
        || {
            format!(
                "|H′({}, {d}, {m})| = {} disagrees with the formula",
                c.nvars(),
                h.len()
            )
        },
    )?;
    let dim = derivative_space_dimension(&f) as u128;
    ensure(dim <= c.derivative_dim_bound(), || {
        "derivative bound violated".into()
    })?;
    small_monomial(&f)
}

/// `c + c′` where `c′` negates every term of `c`, either through an odd
/// power of a negated form or through an extra constant factor `−1`.
pub fn zero_diagonal<R: Rng>(rng: &mut R, odd_power: bool) -> DiagonalCircuit {
    let n = rng.random_range(1..=4);
    if odd_power {
        let terms: Vec<DiagonalTerm> = (0..rng.random_range(1..=2))
            .flat_map(|_| {
                let e = if rng.random_bool(0.5) { 1 } else { 3 };
                let l = sample::affine(rng, n, 3);
                let neg = -l.clone();
                [
                    DiagonalTerm::new(vec![l], vec![e]).unwrap(),
                    DiagonalTerm::new(vec![neg], vec![e]).unwrap(),
                ]
            })
            .collect();
        DiagonalCircuit::new(n, terms).unwrap()
    } else {
        let base = sample::diagonal(rng, n, 2, 2, 3);
        let mut terms = base.terms().to_vec();
        for t in base.terms() {
            let mut forms = t.forms().to_vec();
            let mut exps = t.exponents().to_vec();
            forms.push(AffineForm::constant(int(-1)));
            exps.push(1);
            terms.push(DiagonalTerm::new(forms, exps).unwrap());
        }
        DiagonalCircuit::new(n, terms).unwrap()
    }
}

// ---- separating families ----

pub fn family_homogeneous(family: &[invpit::invariants::InvariantDescriptor]) -> Check {
    for inv in family {
        let f = inv.realization.expand();
        ensure(
            f.monomials().all(|m| m.degree() as usize == inv.ell),
            || format!("member with ℓ={} is not homogeneous of degree ℓ", inv.ell),
        )?;
        ensure(
            inv.realization.width() <= 4 && inv.realization.depth() == inv.ell,
            || "invariant ABP exceeds width n² or depth ℓ".into(),
        )?;
    }
    Ok(())
}

pub fn family_invariant<R: Rng>(
    rng: &mut R,
    family: &[invpit::invariants::InvariantDescriptor],
    r: usize,
) -> Check {
    let (a, b, _) = conjugate_pair(rng, 2, r);
    for inv in family {
        let (va, vb) = (
            inv.eval(&a).map_err(|e| e.to_string())?,
            inv.eval(&b).map_err(|e| e.to_string())?,
        );
        ensure(va == vb, || {
            format!("member ℓ={} changes under conjugation", inv.ell)
        })?;
    }
    Ok(())
}

pub fn separation_agrees(h: &HittingSet, a: &MatrixTuple, b: &MatrixTuple) -> Check {
    let family = separating_family(a.n(), a.r(), h).map_err(|e| e.to_string())?;
    let found = separates(a, b, &family).map_err(|e| e.to_string())?;
    let oracle = trace_word_oracle(a, b, a.n() * a.n()).map_err(|e| e.to_string())?;
    ensure(found.is_none() == oracle, || {
        format!(
            "family separation {} but oracle equality {oracle}",
            found.is_some()
        )
    })
}

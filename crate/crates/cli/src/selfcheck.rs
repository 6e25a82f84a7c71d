//! Randomized agreement checks between library routines and direct
//! computations.

use invpit::hasse::chain_rule_expansion;
use invpit::invariants::build_f_ell_roabp;
use invpit::pit::{bruteforce_zero_test, whitebox_roabp_zero_test};
use invpit::{sample, Matrix, Monomial, Scalar, SparsePoly};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

struct Tally {
    name: &'static str,
    cases: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally {
            name,
            cases: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(describe());
        }
    }

    fn json(&self) -> Value {
        json!({
            "name": self.name,
            "cases": self.cases,
            "failures": self.failures.len(),
            "first_failure": self.failures.first(),
        })
    }
}

fn expansion(rng: &mut ChaCha8Rng) -> Tally {
    let mut t = Tally::new("expansion");
    for i in 0..20 {
        let p = sample::abp(rng, 3, 3, 3, 4);
        let q = sample::roabp(rng, 3, 3, 3, 4);
        let tp = sample::trace_power(rng, 2, 2, 3, 3);
        let (fp, fq, ft) = (p.expand(), q.expand(), tp.expand());
        for _ in 0..5 {
            let x = sample::point(rng, 3, 5);
            t.check(p.eval(&x).ok() == fp.eval(&x).ok(), || {
                format!("abp expansion at {x:?}")
            });
            t.check(q.eval(&x).ok() == fq.eval(&x).ok(), || {
                format!("roabp expansion at {x:?}")
            });
            t.check(tp.eval(&x[..2]).ok() == ft.eval(&x[..2]).ok(), || {
                format!("trace power at {x:?}")
            });
        }
        let q = if i % 2 == 0 {
            q.sub(&q).expect("equal shapes")
        } else {
            q
        };
        let expected = bruteforce_zero_test(&q.expand()).is_zero;
        t.check(whitebox_roabp_zero_test(&q).is_zero == expected, || {
            format!("white-box verdict on {}", q.expand())
        });
    }
    t
}

fn word_traces(rng: &mut ChaCha8Rng) -> Tally {
    let mut t = Tally::new("word-trace");
    for _ in 0..20 {
        let a = sample::tuple(rng, 2, 2, 3);
        let ell = rng.random_range(1..=3);
        let Ok(f) = build_f_ell_roabp(&a, ell).map(|p| p.expand()) else {
            t.check(false, || "f_ell construction failed".into());
            continue;
        };
        for word in 0..1u32 << ell {
            let exps: Vec<u32> = (0..ell).map(|i| (word >> i) & 1).collect();
            let mut prod = Matrix::<Scalar>::identity(2);
            for &e in &exps {
                prod = prod.matmul(&a.matrices()[e as usize]).expect("square");
            }
            let tr = prod.get(0, 0) + prod.get(1, 1);
            t.check(f.coeff(&Monomial::from_exponents(&exps)) == tr, || {
                format!("coefficient of word {exps:?}")
            });
        }
    }
    t
}

/// `coeff_{y^k} h(x + u y)` computed by substitution and expansion.
fn shifted_coefficient(h: &SparsePoly, u: &[Scalar], k: u32) -> SparsePoly {
    let n = h.nvars();
    let subs: Vec<SparsePoly> = (0..n)
        .map(|i| SparsePoly::var(i, n + 1) + SparsePoly::var(n, n + 1).scale(&u[i]))
        .collect();
    let g = h.compose(&subs).expect("arity matches");
    let mut out = SparsePoly::zero(n);
    for (m, c) in g.terms() {
        if m.exponent(n) == k {
            out.add_term(
                Monomial::from_pairs(m.iter().filter(|&(v, _)| v < n)),
                c.clone(),
            );
        }
    }
    out
}

fn chain_rule(rng: &mut ChaCha8Rng) -> Tally {
    let mut t = Tally::new("chain-rule");
    for _ in 0..20 {
        let m = rng.random_range(1..=2);
        let f = sample::poly(rng, 2, 3, 4, 4);
        let g = vec![sample::poly(rng, m, 2, 3, 3), sample::poly(rng, m, 2, 3, 3)];
        let u = sample::point(rng, m, 3);
        let k = rng.random_range(0..=3);
        let composed = f.compose(&g).expect("two inner polynomials").with_nvars(m);
        let direct = shifted_coefficient(&composed, &u, k);
        let formula = chain_rule_expansion(&f, &g, &u, k).map(|p| p.with_nvars(m));
        t.check(formula.as_ref().ok() == Some(&direct), || {
            format!("chain rule for f={f}, k={k}")
        });
    }
    t
}

pub fn run(seed: u64) -> Value {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tallies = [
        expansion(&mut rng),
        word_traces(&mut rng),
        chain_rule(&mut rng),
    ];
    let passed = tallies.iter().all(|t| t.failures.is_empty());
    json!({
        "seed": seed,
        "checks": tallies.iter().map(Tally::json).collect::<Vec<_>>(),
        "passed": passed,
    })
}

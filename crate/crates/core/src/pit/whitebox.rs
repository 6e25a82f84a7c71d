use num_traits::Zero;

use super::{Certificate, PitVerdict, Witness};
use crate::algebra::linalg::{max_bits, EchelonBasis};
use crate::algebra::scalar::int;
use crate::algebra::{Monomial, Scalar};
use crate::branching::Roabp;
use crate::error::Result;

/// Cost and size measurements from one white-box run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WhiteboxStats {
    /// Row reductions performed during elimination.
    pub elimination_steps: u64,
    /// Candidate coefficient vectors formed across all layers.
    pub candidates: u64,
    /// Largest number of survivors kept after any layer.
    pub max_survivors: usize,
    /// Largest bit length of any survivor entry.
    pub max_bits: u64,
}

pub fn whitebox_roabp_zero_test(p: &Roabp) -> PitVerdict {
    whitebox_with_stats(p).0
}

/// Coefficient-span propagation.
///
/// After layer `i` the survivors are coefficient row vectors of the partial
/// product `M_1 ⋯ M_i`, each labelled by its exponent prefix, forming a basis
/// of the span of all such vectors. Candidates for the next layer are
/// `v · C_{i+1, j}`; a candidate survives when it is independent of the ones
/// already kept, so earlier candidates win. At the sink every survivor is a
/// nonzero coefficient of the computed polynomial.
pub fn whitebox_with_stats(p: &Roabp) -> (PitVerdict, WhiteboxStats) {
    let mut stats = WhiteboxStats::default();
    let mut survivors: Vec<(Vec<u32>, Vec<Scalar>)> = vec![(Vec::new(), vec![int(1)])];
    for layer in p.layers() {
        let mut basis = EchelonBasis::new(layer.cols());
        let mut next = Vec::new();
        for (label, v) in &survivors {
            for (j, c) in layer.coeffs().iter().enumerate() {
                stats.candidates += 1;
                let w = row_times(v, c);
                if basis.insert(&w).expect("row width matches layer") {
                    let mut l = label.clone();
                    l.push(j as u32);
                    next.push((l, w));
                }
            }
        }
        stats.elimination_steps += basis.steps();
        stats.max_survivors = stats.max_survivors.max(next.len());
        for (_, v) in &next {
            stats.max_bits = stats.max_bits.max(max_bits(v));
        }
        survivors = next;
        if survivors.is_empty() {
            break;
        }
    }
    let verdict = match survivors.into_iter().next() {
        None => PitVerdict::zero(Certificate::Whitebox),
        Some((label, v)) => PitVerdict::nonzero(
            Witness::Monomial {
                monomial: Monomial::from_exponents(&label),
                coefficient: v[0].clone(),
            },
            Certificate::Whitebox,
        ),
    };
    (verdict, stats)
}

fn row_times(v: &[Scalar], m: &crate::algebra::Matrix<Scalar>) -> Vec<Scalar> {
    (0..m.cols())
        .map(|c| {
            v.iter()
                .enumerate()
                .filter(|(_, a)| !a.is_zero())
                .fold(Scalar::zero(), |acc, (r, a)| acc + a * m.get(r, c))
        })
        .collect()
}

/// A point in `{0, …, r−1}^d` where `p` is nonzero, or `None` when `p` is
/// identically zero.
///
/// Fixes one variable at a time to the first value keeping the restriction
/// nonzero; such a value exists because each layer has degree below `r`.
pub fn find_nonzero_point(p: &Roabp) -> Result<Option<(Vec<Scalar>, Scalar)>> {
    if whitebox_roabp_zero_test(p).is_zero {
        return Ok(None);
    }
    let mut current = p.clone();
    let mut point = Vec::with_capacity(p.depth());
    for i in 0..p.depth() {
        let mut chosen = None;
        for a in 0..p.degree_bound() {
            let value = int(a as i64);
            let restricted = current.substitute(i, &value)?;
            if !whitebox_roabp_zero_test(&restricted).is_zero {
                chosen = Some((value, restricted));
                break;
            }
        }
        let (value, restricted) = chosen.expect("a nonzero restriction exists");
        point.push(value);
        current = restricted;
    }
    let value = p.eval(&point)?;
    debug_assert!(!value.is_zero());
    Ok(Some((point, value)))
}

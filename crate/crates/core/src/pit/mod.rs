//! Zero tests: brute force on expansions, white-box ROABP elimination,
//! Schwartz–Zippel sampling and evaluation on hitting sets.

mod hitting;
mod random;
mod whitebox;

pub use hitting::{
    grid_hitting_set, hitting_set_zero_test, random_hitting_set, HittingSet, Provenance, GRID_CAP,
};
pub use random::{default_sample_range, schwartz_zippel_zero_test, SzConfig};
pub use whitebox::{
    find_nonzero_point, whitebox_roabp_zero_test, whitebox_with_stats, WhiteboxStats,
};

use crate::algebra::{Monomial, Scalar, SparsePoly};
use crate::hasse::{leading_monomial, MonomialOrdering};

/// Evidence that a polynomial is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Point {
        point: Vec<Scalar>,
        value: Scalar,
    },
    Monomial {
        monomial: Monomial,
        coefficient: Scalar,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    Whitebox,
    BlackboxDeterministic,
    /// Probability that a nonzero polynomial was reported zero.
    Randomized {
        failure_bound: Scalar,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PitVerdict {
    pub is_zero: bool,
    pub witness: Option<Witness>,
    pub certificate: Certificate,
}

impl PitVerdict {
    pub fn zero(certificate: Certificate) -> Self {
        PitVerdict {
            is_zero: true,
            witness: None,
            certificate,
        }
    }

    pub fn nonzero(witness: Witness, certificate: Certificate) -> Self {
        PitVerdict {
            is_zero: false,
            witness: Some(witness),
            certificate,
        }
    }
}

/// Zero iff `f` has no terms; the witness is the graded-lex leading term.
pub fn bruteforce_zero_test(f: &SparsePoly) -> PitVerdict {
    match leading_monomial(f, MonomialOrdering::GradedLex) {
        Err(_) => PitVerdict::zero(Certificate::Whitebox),
        Ok(m) => {
            let coefficient = f.coeff(&m);
            PitVerdict::nonzero(
                Witness::Monomial {
                    monomial: m,
                    coefficient,
                },
                Certificate::Whitebox,
            )
        }
    }
}

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Certificate, PitVerdict, Witness};
use crate::algebra::scalar::int;
use crate::algebra::Scalar;
use crate::error::{Error, Result};

/// Largest number of points [`grid_hitting_set`] will produce.
pub const GRID_CAP: u128 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Grid {
        degree_bound: u32,
    },
    Random {
        seed: u64,
        count: usize,
        range: u64,
    },
    File {
        path: String,
    },
    /// Points of `{0, …, d}^n` with at most `m` nonzero coordinates.
    DiagonalSupport {
        d: u32,
        m: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HittingSet {
    arity: usize,
    points: Vec<Vec<Scalar>>,
    provenance: Provenance,
}

impl HittingSet {
    pub fn new(arity: usize, points: Vec<Vec<Scalar>>, provenance: Provenance) -> Result<Self> {
        if let Some(p) = points.iter().find(|p| p.len() != arity) {
            return Err(Error::dimension("hitting set point", arity, p.len()));
        }
        Ok(HittingSet {
            arity,
            points,
            provenance,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn points(&self) -> &[Vec<Scalar>] {
        &self.points
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Extends every point with zeros up to `arity`; no-op if already that wide.
    pub fn zero_padded(&self, arity: usize) -> Result<HittingSet> {
        if arity < self.arity {
            return Err(Error::dimension(
                "padded hitting set arity",
                self.arity,
                arity,
            ));
        }
        let points = self
            .points
            .iter()
            .map(|p| {
                let mut q = p.clone();
                q.resize(arity, Scalar::zero());
                q
            })
            .collect();
        Ok(HittingSet {
            arity,
            points,
            provenance: self.provenance.clone(),
        })
    }
}

/// The full grid `{0, …, bound}^nvars`, last coordinate varying fastest.
pub fn grid_hitting_set(nvars: usize, individual_degree_bound: u32) -> Result<HittingSet> {
    let side = individual_degree_bound as u128 + 1;
    let size = (0..nvars).try_fold(1u128, |acc, _| acc.checked_mul(side));
    match size {
        Some(s) if s <= GRID_CAP => {}
        _ => {
            return Err(Error::Size {
                what: "grid hitting set",
                size: size.unwrap_or(u128::MAX),
                cap: GRID_CAP,
            })
        }
    }
    let mut points = Vec::new();
    let bounds = vec![individual_degree_bound; nvars];
    crate::hasse::for_each_bounded(&bounds, |e| {
        points.push(e.iter().map(|&v| int(v as i64)).collect());
    });
    HittingSet::new(
        nvars,
        points,
        Provenance::Grid {
            degree_bound: individual_degree_bound,
        },
    )
}

/// `count` points with coordinates uniform in `{0, …, range−1}`.
pub fn random_hitting_set(nvars: usize, count: usize, seed: u64, range: u64) -> Result<HittingSet> {
    if range == 0 {
        return Err(Error::Parameter("sample range must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..count)
        .map(|_| {
            (0..nvars)
                .map(|_| int(rng.random_range(0..range) as i64))
                .collect()
        })
        .collect();
    HittingSet::new(nvars, points, Provenance::Random { seed, count, range })
}

/// Zero iff `evaluator` vanishes on every point of `h`.
pub fn hitting_set_zero_test(
    mut evaluator: impl FnMut(&[Scalar]) -> Result<Scalar>,
    h: &HittingSet,
) -> Result<PitVerdict> {
    for point in h.points() {
        let value = evaluator(point)?;
        if !value.is_zero() {
            return Ok(PitVerdict::nonzero(
                Witness::Point {
                    point: point.clone(),
                    value,
                },
                Certificate::BlackboxDeterministic,
            ));
        }
    }
    Ok(PitVerdict::zero(Certificate::BlackboxDeterministic))
}

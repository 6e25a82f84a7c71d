use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Certificate, PitVerdict, Witness};
use crate::algebra::scalar::{self, int};
use crate::algebra::Scalar;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SzConfig {
    pub degree_bound: u64,
    pub trials: u32,
    pub seed: u64,
    /// Samples come from `{0, …, range−1}`; `None` uses [`default_sample_range`].
    pub range: Option<u64>,
}

impl SzConfig {
    pub fn new(degree_bound: u64, trials: u32, seed: u64) -> Self {
        SzConfig {
            degree_bound,
            trials,
            seed,
            range: None,
        }
    }

    pub fn sample_range(&self) -> u64 {
        self.range
            .unwrap_or_else(|| default_sample_range(self.degree_bound, self.trials))
    }

    /// `(d / |S|)^trials`, capped at 1.
    pub fn failure_bound(&self) -> Scalar {
        let per_trial = Scalar::new(self.degree_bound.into(), self.sample_range().into());
        if per_trial >= Scalar::one() {
            return Scalar::one();
        }
        scalar::pow(&per_trial, self.trials)
    }
}

pub fn default_sample_range(degree_bound: u64, trials: u32) -> u64 {
    (2 * degree_bound * trials as u64).max(101)
}

/// Evaluates at `trials` uniform points of `{0, …, range−1}^nvars`.
///
/// A nonzero evaluation is returned as a point witness with failure bound 0.
pub fn schwartz_zippel_zero_test(
    mut evaluator: impl FnMut(&[Scalar]) -> Result<Scalar>,
    nvars: usize,
    config: &SzConfig,
) -> Result<PitVerdict> {
    let range = config.sample_range();
    if range == 0 {
        return Err(Error::Parameter("sample range must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..config.trials {
        let point: Vec<Scalar> = (0..nvars)
            .map(|_| int(rng.random_range(0..range) as i64))
            .collect();
        let value = evaluator(&point)?;
        if !value.is_zero() {
            return Ok(PitVerdict::nonzero(
                Witness::Point { point, value },
                Certificate::Randomized {
                    failure_bound: Scalar::zero(),
                },
            ));
        }
    }
    Ok(PitVerdict::zero(Certificate::Randomized {
        failure_bound: config.failure_bound(),
    }))
}

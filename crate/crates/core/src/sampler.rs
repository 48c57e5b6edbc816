//! Seeded sampling of contextual variables and Monte Carlo runs.
//!
//! The generator is ChaCha8 (`rand_chacha`): the 64-bit `seed` is expanded
//! into the key with `SeedableRng::seed_from_u64`, and `stream_id` selects
//! the ChaCha stream. Runs give trial `i` its own stream `i` under a key
//! derived from the run's source, so trials can be evaluated in any order or
//! in parallel and the per-trial records never change.

use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::dichotomic::{
    continuous_outcome, DiagonalCoordinate, DichotomicOutcome, DiscreteContext, DyadicRule, FixedProbability,
};
use crate::hilbert::StateVector;
use crate::history::{history_probability, Convention, HistoryOutcome, HomogeneousHistory};
use crate::{Error, Result};

/// Default seed for shipped experiments.
pub const DEFAULT_SEED: u64 = 0;
/// `|z|` below this counts as agreement.
pub const Z_THRESHOLD: f64 = 4.0;

#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    stream_id: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64, stream_id: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream_id);
        Self { seed, stream_id, rng }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_id(&self) -> u64 {
        self.stream_id
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on `[0, 1)` with 53-bit resolution.
    pub fn draw_uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Number of fair coin flips up to and including the first head, capped
    /// at `lambda_max`; `P(λ = k) = 2^-k` below the cap and the remaining
    /// tail mass `2^-(lambda_max - 1)` sits on the cap.
    pub fn draw_lambda(&mut self, lambda_max: u32) -> Result<DiscreteContext> {
        if lambda_max == 0 {
            return Err(Error::LambdaRange {
                lambda: 0,
                max: u32::MAX,
            });
        }
        let mut lambda = 1u32;
        'flips: while lambda < lambda_max {
            let mut bits = self.next_u64();
            for _ in 0..64 {
                if bits & 1 == 1 {
                    break 'flips;
                }
                bits >>= 1;
                lambda += 1;
                if lambda == lambda_max {
                    break 'flips;
                }
            }
        }
        DiscreteContext::new(lambda)
    }

    /// Independent per-trial streams keyed by this source.
    pub fn trial_streams(&self) -> TrialStreams {
        let mut fresh = RandomSource::new(self.seed, self.stream_id);
        TrialStreams { key: fresh.next_u64() }
    }
}

/// Splits a source into one stream per trial index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrialStreams {
    key: u64,
}

impl TrialStreams {
    pub fn stream(&self, trial_index: u64) -> RandomSource {
        RandomSource::new(self.key, trial_index)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum TrialContext {
    Uniform(f64),
    Discrete(DiscreteContext),
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TrialRecord<O> {
    pub trial_index: u64,
    pub context: TrialContext,
    pub outcome: O,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FrequencySummary {
    pub n_trials: u64,
    pub count_alpha: u64,
    pub expected_p: f64,
    pub z_score: f64,
}

impl FrequencySummary {
    /// `z = (f - p) √n / √(p(1-p))`. For `p ∈ {0, 1}` the score is 0 when
    /// the count is exactly `n p` and infinite (signed) otherwise.
    pub fn new(n_trials: u64, count_alpha: u64, expected_p: f64) -> Self {
        assert!(count_alpha <= n_trials, "count exceeds trials");
        let n = n_trials as f64;
        let freq = count_alpha as f64 / n;
        let variance = expected_p * (1.0 - expected_p);
        let z_score = if variance > 0.0 {
            (freq - expected_p) * libm::sqrt(n) / libm::sqrt(variance)
        } else if freq == expected_p {
            0.0
        } else if freq > expected_p {
            f64::INFINITY
        } else {
            f64::NEG_INFINITY
        };
        Self {
            n_trials,
            count_alpha,
            expected_p,
            z_score,
        }
    }

    pub fn frequency(&self) -> f64 {
        self.count_alpha as f64 / self.n_trials as f64
    }

    pub fn passes(&self) -> bool {
        self.z_score.abs() < Z_THRESHOLD
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum DichotomicModel {
    /// Uniform coordinate on the Bloch diagonal.
    Continuous,
    Greedy,
    Geometric,
}

impl DichotomicModel {
    pub fn name(self) -> &'static str {
        match self {
            DichotomicModel::Continuous => "continuous",
            DichotomicModel::Greedy => "greedy",
            DichotomicModel::Geometric => "geometric",
        }
    }
}

/// A prepared dichotomic experiment: the question has `α`-probability `p`.
#[derive(Debug, Clone)]
pub struct DichotomicRun {
    model: DichotomicModel,
    probability: f64,
    coordinate: DiagonalCoordinate,
    lambda_max: u32,
    table: Vec<DichotomicOutcome>,
}

impl DichotomicRun {
    pub fn new(model: DichotomicModel, probability: f64, lambda_max: u32) -> Result<Self> {
        let coordinate = DiagonalCoordinate::from_probability(probability)?;
        let fixed = FixedProbability::from_f64(probability)?;
        if lambda_max == 0 {
            return Err(Error::LambdaRange {
                lambda: 0,
                max: u32::MAX,
            });
        }
        let table = match model {
            DichotomicModel::Continuous => Vec::new(),
            DichotomicModel::Greedy => DyadicRule::Greedy.outcomes(fixed, lambda_max),
            DichotomicModel::Geometric => DyadicRule::Geometric.outcomes(fixed, lambda_max),
        };
        Ok(Self {
            model,
            probability,
            coordinate,
            lambda_max,
            table,
        })
    }

    pub fn trial(&self, streams: &TrialStreams, trial_index: u64) -> TrialRecord<DichotomicOutcome> {
        let mut rng = streams.stream(trial_index);
        let (context, outcome) = match self.model {
            DichotomicModel::Continuous => {
                let u = rng.draw_uniform();
                let outcome = continuous_outcome(self.coordinate, u).expect("u in [0, 1)");
                (TrialContext::Uniform(u), outcome)
            }
            _ => {
                let ctx = rng.draw_lambda(self.lambda_max).expect("lambda_max >= 1");
                (TrialContext::Discrete(ctx), self.table[ctx.lambda() as usize - 1])
            }
        };
        TrialRecord {
            trial_index,
            context,
            outcome,
        }
    }

    pub fn summarize(&self, n_trials: u64, count_alpha: u64) -> FrequencySummary {
        FrequencySummary::new(n_trials, count_alpha, self.probability)
    }
}

/// Runs `n_trials` independent trials of a dichotomic model.
pub fn run_dichotomic(
    model: DichotomicModel,
    probability: f64,
    n_trials: u64,
    lambda_max: u32,
    source: &RandomSource,
) -> Result<FrequencySummary> {
    if n_trials == 0 {
        return Err(Error::Domain {
            what: "trial count",
            value: 0.0,
        });
    }
    let run = DichotomicRun::new(model, probability, lambda_max)?;
    let streams = source.trial_streams();
    let count = (0..n_trials)
        .filter(|&i| run.trial(&streams, i).outcome.is_alpha())
        .count() as u64;
    Ok(run.summarize(n_trials, count))
}

/// A prepared history experiment: greedy outcomes of the history probability.
#[derive(Debug, Clone)]
pub struct HistoryRun {
    probability: f64,
    lambda_max: u32,
    table: Vec<DichotomicOutcome>,
}

impl HistoryRun {
    pub fn new(
        state: &StateVector,
        history: &HomogeneousHistory,
        convention: Convention,
        lambda_max: u32,
    ) -> Result<Self> {
        Self::from_probability(history_probability(state, history, convention)?, lambda_max)
    }

    /// Any proposition with a known probability, e.g. a disjoint family.
    pub fn from_probability(probability: f64, lambda_max: u32) -> Result<Self> {
        if lambda_max == 0 {
            return Err(Error::LambdaRange {
                lambda: 0,
                max: u32::MAX,
            });
        }
        let fixed = FixedProbability::from_f64(probability)?;
        Ok(Self {
            probability,
            lambda_max,
            table: DyadicRule::Greedy.outcomes(fixed, lambda_max),
        })
    }

    pub fn probability(&self) -> f64 {
        self.probability
    }

    pub fn trial(&self, streams: &TrialStreams, trial_index: u64) -> TrialRecord<HistoryOutcome> {
        let ctx = streams
            .stream(trial_index)
            .draw_lambda(self.lambda_max)
            .expect("lambda_max >= 1");
        let outcome = if self.table[ctx.lambda() as usize - 1].is_alpha() {
            HistoryOutcome::Affirmed
        } else {
            HistoryOutcome::Denied
        };
        TrialRecord {
            trial_index,
            context: TrialContext::Discrete(ctx),
            outcome,
        }
    }

    pub fn run(&self, n_trials: u64, source: &RandomSource) -> Result<FrequencySummary> {
        if n_trials == 0 {
            return Err(Error::Domain {
                what: "trial count",
                value: 0.0,
            });
        }
        let streams = source.trial_streams();
        let count = (0..n_trials)
            .filter(|&i| self.trial(&streams, i).outcome.is_affirmed())
            .count() as u64;
        Ok(FrequencySummary::new(n_trials, count, self.probability))
    }
}

/// Monte Carlo run of the deterministic history model.
pub fn run_history(
    state: &StateVector,
    history: &HomogeneousHistory,
    convention: Convention,
    n_trials: u64,
    lambda_max: u32,
    source: &RandomSource,
) -> Result<FrequencySummary> {
    HistoryRun::new(state, history, convention, lambda_max)?.run(n_trials, source)
}

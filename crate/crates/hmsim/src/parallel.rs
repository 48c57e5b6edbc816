//! Multi-threaded trial execution. Each trial draws from its own stream, so
//! the counts equal the sequential runs whatever the schedule.

use hmsim_core::sampler::{DichotomicModel, DichotomicRun, FrequencySummary, HistoryRun, RandomSource};
use hmsim_core::{Error, Result};
use rayon::prelude::*;

fn require_trials(n_trials: u64) -> Result<()> {
    if n_trials == 0 {
        return Err(Error::Domain {
            what: "trial count",
            value: 0.0,
        });
    }
    Ok(())
}

/// Parallel counterpart of `hmsim_core::sampler::run_dichotomic`.
pub fn run_dichotomic(
    model: DichotomicModel,
    probability: f64,
    n_trials: u64,
    lambda_max: u32,
    source: &RandomSource,
) -> Result<FrequencySummary> {
    require_trials(n_trials)?;
    let run = DichotomicRun::new(model, probability, lambda_max)?;
    let streams = source.trial_streams();
    let count = (0..n_trials)
        .into_par_iter()
        .filter(|&i| run.trial(&streams, i).outcome.is_alpha())
        .count() as u64;
    Ok(run.summarize(n_trials, count))
}

/// Parallel counterpart of `HistoryRun::run`.
pub fn run_history(run: &HistoryRun, n_trials: u64, source: &RandomSource) -> Result<FrequencySummary> {
    require_trials(n_trials)?;
    let streams = source.trial_streams();
    let count = (0..n_trials)
        .into_par_iter()
        .filter(|&i| run.trial(&streams, i).outcome.is_affirmed())
        .count() as u64;
    Ok(FrequencySummary::new(n_trials, count, run.probability()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use hmsim_core::sampler;

    #[test]
    fn matches_sequential() {
        let source = RandomSource::new(7, 3);
        for model in [
            DichotomicModel::Continuous,
            DichotomicModel::Greedy,
            DichotomicModel::Geometric,
        ] {
            for p in [0.0, 0.3, 0.75, 1.0] {
                let seq = sampler::run_dichotomic(model, p, 20_000, 60, &source).unwrap();
                let par = run_dichotomic(model, p, 20_000, 60, &source).unwrap();
                assert_eq!(seq, par);
            }
        }
        let run = HistoryRun::from_probability(0.25, 60).unwrap();
        assert_eq!(
            run.run(20_000, &source).unwrap(),
            run_history(&run, 20_000, &source).unwrap()
        );
        assert!(run_history(&run, 0, &source).is_err());
    }
}

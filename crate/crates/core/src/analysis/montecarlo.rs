use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{check_rounds, check_unit, AnalysisError};
use crate::protocol::{run_trajectory, PairSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloReport {
    pub s0: f64,
    pub trials: u64,
    pub max_rounds: usize,
    pub seed: u64,
    /// Trajectories that succeeded in round `k` (index `k - 1`).
    pub success_counts_per_round: Vec<u64>,
    /// Trajectories with no success within `max_rounds`.
    pub unresolved: u64,
    pub success_frequencies: Vec<f64>,
    /// Binomial standard error of each frequency.
    pub frequency_standard_errors: Vec<f64>,
    pub estimated_yield: f64,
    /// Standard error of `estimated_yield`.
    pub standard_error: f64,
}

/// Generator for trial `index`: ChaCha8 seeded with `seed_from_u64(seed)` on
/// stream `index`. Trials are independent of how the work is partitioned.
pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Runs `trials` independent trajectories of the full simulator. The report is a
/// pure function of the arguments.
pub fn monte_carlo(
    s0: f64,
    trials: u64,
    max_rounds: usize,
    seed: u64,
) -> Result<MonteCarloReport, AnalysisError> {
    let s0 = check_unit("s0", s0)?;
    check_rounds(max_rounds)?;
    if trials == 0 {
        return Err(AnalysisError::Domain {
            name: "trials",
            value: 0.0,
            domain: ">= 1",
        });
    }
    let spec = PairSpec::from_weight(s0)?;
    let mut counts = vec![0u64; max_rounds];
    for index in 0..trials {
        let mut rng = trial_rng(seed, index);
        let records = run_trajectory(&spec, max_rounds, &mut rng)?;
        if let Some(last) = records.last().filter(|r| r.outcome.is_success()) {
            counts[last.round - 1] += 1;
        }
    }
    Ok(summarize(s0, trials, max_rounds, seed, counts))
}

fn summarize(
    s0: f64,
    trials: u64,
    max_rounds: usize,
    seed: u64,
    counts: Vec<u64>,
) -> MonteCarloReport {
    let n = trials as f64;
    let successes: u64 = counts.iter().sum();
    let success_frequencies: Vec<f64> = counts.iter().map(|&c| c as f64 / n).collect();
    let frequency_standard_errors = success_frequencies
        .iter()
        .map(|&p| (p * (1.0 - p) / n).sqrt())
        .collect();
    // per-trial yield is 2^-k for a success in round k, zero otherwise
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for (k, &c) in counts.iter().enumerate() {
        let value = 0.5_f64.powi(k as i32 + 1);
        sum += c as f64 * value;
        sum_sq += c as f64 * value * value;
    }
    let mean = sum / n;
    let variance = if trials > 1 {
        ((sum_sq - n * mean * mean) / (n - 1.0)).max(0.0)
    } else {
        0.0
    };
    MonteCarloReport {
        s0,
        trials,
        max_rounds,
        seed,
        unresolved: trials - successes,
        success_counts_per_round: counts,
        success_frequencies,
        frequency_standard_errors,
        estimated_yield: mean,
        standard_error: (variance / n).sqrt(),
    }
}

//! Closed-form success probabilities, the failure-branch coefficient map and
//! yields, plus a seeded Monte Carlo estimator built on the full simulator.
//!
//! Everything is expressed in terms of `s = |alpha|²` of the current source pair.
//! Yield counts maximally entangled pairs per initial source pair: round `k`
//! consumes `2^k` initial pairs per attempt.

mod montecarlo;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::protocol::ProtocolError;

pub use montecarlo::{monte_carlo, trial_rng, MonteCarloReport};

/// Increment below which a yield series counts as converged.
pub const CONVERGENCE_CUTOFF: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("{name} = {value} is outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },
    #[error(transparent)]
    Protocol(#[from] ProtocolError),
}

fn check_unit(name: &'static str, value: f64) -> Result<f64, AnalysisError> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(AnalysisError::Domain {
            name,
            value,
            domain: "[0, 1]",
        })
    }
}

fn check_rounds(max_rounds: usize) -> Result<(), AnalysisError> {
    if max_rounds == 0 {
        return Err(AnalysisError::Domain {
            name: "max_rounds",
            value: 0.0,
            domain: ">= 1",
        });
    }
    Ok(())
}

/// Probability that the parity check reads even: `2 s (1 - s)`.
pub fn success_probability(s: f64) -> Result<f64, AnalysisError> {
    let s = check_unit("s", s)?;
    Ok(2.0 * s * (1.0 - s))
}

/// `|alpha'|²` of the pair recovered from a failed round: `s² / (s² + (1-s)²)`.
/// The endpoints are rejected because the recovered pair is a product state.
pub fn next_s(s: f64) -> Result<f64, AnalysisError> {
    if !(s > 0.0 && s < 1.0) {
        return Err(AnalysisError::Domain {
            name: "s",
            value: s,
            domain: "(0, 1)",
        });
    }
    Ok(weight_map(s))
}

fn weight_map(s: f64) -> f64 {
    let (up, down) = (s * s, (1.0 - s) * (1.0 - s));
    up / (up + down)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RoundYield {
    pub round: usize,
    pub s: f64,
    pub p: f64,
    pub cumulative_yield: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct YieldReport {
    pub s0: f64,
    pub max_rounds: usize,
    pub per_round: Vec<RoundYield>,
    pub total_yield: f64,
    /// Round one only, failures discarded.
    pub baseline_yield: f64,
}

/// Yield of up to `max_rounds` rounds, reusing every failure as the next
/// generation's source.
pub fn iterated_yield(s0: f64, max_rounds: usize) -> Result<YieldReport, AnalysisError> {
    let s0 = check_unit("s0", s0)?;
    check_rounds(max_rounds)?;
    let mut per_round = Vec::with_capacity(max_rounds);
    let mut s = s0;
    // probability of reaching round k, times the pairs-per-initial-pair factor
    let mut reach = 1.0;
    let mut scale = 1.0;
    let mut cumulative = 0.0;
    for round in 1..=max_rounds {
        let p = 2.0 * s * (1.0 - s);
        scale *= 0.5;
        cumulative += reach * p * scale;
        per_round.push(RoundYield {
            round,
            s,
            p,
            cumulative_yield: cumulative,
        });
        reach *= 1.0 - p;
        s = weight_map(s);
    }
    Ok(YieldReport {
        s0,
        max_rounds,
        baseline_yield: per_round[0].p / 2.0,
        total_yield: cumulative,
        per_round,
    })
}

/// Unbounded-iteration yield: rounds are added until the increment drops below
/// [`CONVERGENCE_CUTOFF`]. Returns the yield and the number of rounds used.
pub fn converged_yield(s0: f64) -> Result<(f64, usize), AnalysisError> {
    check_unit("s0", s0)?;
    let mut previous = 0.0;
    for rounds in 1..=1000 {
        let total = iterated_yield(s0, rounds)?.total_yield;
        if rounds > 1 && (total - previous).abs() < CONVERGENCE_CUTOFF {
            return Ok((total, rounds));
        }
        previous = total;
    }
    Ok((previous, 1000))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub s0: f64,
    pub p1: f64,
    pub baseline_yield: f64,
    pub total_yield: f64,
}

/// `points` equispaced values of `s0` strictly inside (0, 1).
pub fn yield_curve(points: usize, max_rounds: usize) -> Result<Vec<CurvePoint>, AnalysisError> {
    if points == 0 {
        return Err(AnalysisError::Domain {
            name: "points",
            value: 0.0,
            domain: ">= 1",
        });
    }
    (1..=points)
        .map(|i| {
            let s0 = i as f64 / (points + 1) as f64;
            let report = iterated_yield(s0, max_rounds)?;
            Ok(CurvePoint {
                s0,
                p1: report.per_round[0].p,
                baseline_yield: report.baseline_yield,
                total_yield: report.total_yield,
            })
        })
        .collect()
}

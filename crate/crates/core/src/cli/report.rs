use std::fmt::Write;

use serde::Serialize;

use crate::analysis::{CurvePoint, MonteCarloReport, YieldReport};
use crate::protocol::Correction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// Result of a single sampled round (bipartite or multipartite).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundReport {
    pub parties: usize,
    pub alpha: f64,
    pub beta: f64,
    pub seed: u64,
    pub outcome: &'static str,
    pub success_probability: f64,
    pub branch_probability: f64,
    pub correction: Correction,
    /// Fidelity of the output with the ideal target (success only).
    pub fidelity: Option<f64>,
    pub new_alpha: Option<f64>,
    pub new_beta: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterateRow {
    pub round: usize,
    pub s: f64,
    pub p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveReport {
    pub max_rounds: usize,
    pub points: Vec<CurvePoint>,
}

pub(crate) enum Report {
    Round(RoundReport),
    Iterate(Vec<IterateRow>),
    Yield(YieldReport),
    Curve(CurveReport),
    MonteCarlo(MonteCarloReport),
}

fn f6(x: f64) -> String {
    format!("{x:.6}")
}

fn opt6(x: Option<f64>) -> String {
    x.map(f6).unwrap_or_default()
}

fn correction_name(c: Correction) -> &'static str {
    match c {
        Correction::PhaseFlip => "phase_flip",
        Correction::None => "none",
    }
}

impl Report {
    pub(crate) fn render(&self, format: Format) -> Result<String, serde_json::Error> {
        Ok(match format {
            Format::Json => {
                let mut out = match self {
                    Report::Round(r) => serde_json::to_string_pretty(r)?,
                    Report::Iterate(r) => serde_json::to_string_pretty(r)?,
                    Report::Yield(r) => serde_json::to_string_pretty(r)?,
                    Report::Curve(r) => serde_json::to_string_pretty(r)?,
                    Report::MonteCarlo(r) => serde_json::to_string_pretty(r)?,
                };
                out.push('\n');
                out
            }
            Format::Csv => self.csv(),
            Format::Table => self.table(),
        })
    }

    fn csv(&self) -> String {
        let mut out = String::new();
        let mut row = |cells: Vec<String>| {
            out.push_str(&cells.join(","));
            out.push('\n');
        };
        match self {
            Report::Round(r) => {
                row([
                    "parties",
                    "alpha",
                    "beta",
                    "seed",
                    "outcome",
                    "success_probability",
                    "branch_probability",
                    "correction",
                    "fidelity",
                    "new_alpha",
                    "new_beta",
                ]
                .map(String::from)
                .to_vec());
                row(vec![
                    r.parties.to_string(),
                    f6(r.alpha),
                    f6(r.beta),
                    r.seed.to_string(),
                    r.outcome.to_string(),
                    f6(r.success_probability),
                    f6(r.branch_probability),
                    correction_name(r.correction).to_string(),
                    opt6(r.fidelity),
                    opt6(r.new_alpha),
                    opt6(r.new_beta),
                ]);
            }
            Report::Iterate(rows) => {
                row(["round", "s", "p"].map(String::from).to_vec());
                for r in rows {
                    row(vec![r.round.to_string(), f6(r.s), f6(r.p)]);
                }
            }
            Report::Yield(r) => {
                row(["s0", "max_rounds", "total_yield", "baseline_yield"]
                    .map(String::from)
                    .to_vec());
                row(vec![
                    f6(r.s0),
                    r.max_rounds.to_string(),
                    f6(r.total_yield),
                    f6(r.baseline_yield),
                ]);
            }
            Report::Curve(c) => {
                row(["s0", "p1", "baseline_yield", "total_yield"]
                    .map(String::from)
                    .to_vec());
                for p in &c.points {
                    row(vec![
                        f6(p.s0),
                        f6(p.p1),
                        f6(p.baseline_yield),
                        f6(p.total_yield),
                    ]);
                }
            }
            Report::MonteCarlo(m) => {
                row(["round", "successes", "frequency", "standard_error"]
                    .map(String::from)
                    .to_vec());
                for (k, &count) in m.success_counts_per_round.iter().enumerate() {
                    row(vec![
                        (k + 1).to_string(),
                        count.to_string(),
                        f6(m.success_frequencies[k]),
                        f6(m.frequency_standard_errors[k]),
                    ]);
                }
            }
        }
        out
    }

    fn table(&self) -> String {
        let mut out = String::new();
        // writing to a String cannot fail
        match self {
            Report::Round(r) => {
                let _ = writeln!(out, "parties              {}", r.parties);
                let _ = writeln!(out, "alpha, beta          {}, {}", f6(r.alpha), f6(r.beta));
                let _ = writeln!(out, "outcome              {}", r.outcome);
                let _ = writeln!(out, "P(success)           {}", f6(r.success_probability));
                let _ = writeln!(out, "branch probability   {}", f6(r.branch_probability));
                let _ = writeln!(
                    out,
                    "correction           {}",
                    correction_name(r.correction)
                );
                if let Some(f) = r.fidelity {
                    let _ = writeln!(out, "fidelity             {}", f6(f));
                }
                if let (Some(a), Some(b)) = (r.new_alpha, r.new_beta) {
                    let _ = writeln!(out, "new alpha, beta      {}, {}", f6(a), f6(b));
                }
            }
            Report::Iterate(rows) => {
                let _ = writeln!(out, "{:>5}  {:>10}  {:>10}", "round", "s", "p");
                for r in rows {
                    let _ = writeln!(out, "{:>5}  {:>10}  {:>10}", r.round, f6(r.s), f6(r.p));
                }
            }
            Report::Yield(r) => {
                let _ = writeln!(out, "s0                   {}", f6(r.s0));
                let _ = writeln!(out, "max rounds           {}", r.max_rounds);
                let _ = writeln!(out, "total yield          {}", f6(r.total_yield));
                let _ = writeln!(out, "single-round yield   {}", f6(r.baseline_yield));
            }
            Report::Curve(c) => {
                let _ = writeln!(
                    out,
                    "{:>10}  {:>10}  {:>10}  {:>10}",
                    "s0", "p1", "baseline", "total"
                );
                for p in &c.points {
                    let _ = writeln!(
                        out,
                        "{:>10}  {:>10}  {:>10}  {:>10}",
                        f6(p.s0),
                        f6(p.p1),
                        f6(p.baseline_yield),
                        f6(p.total_yield)
                    );
                }
            }
            Report::MonteCarlo(m) => {
                let _ = writeln!(
                    out,
                    "s0 {}  trials {}  max rounds {}  seed {}",
                    f6(m.s0),
                    m.trials,
                    m.max_rounds,
                    m.seed
                );
                let _ = writeln!(
                    out,
                    "{:>5}  {:>10}  {:>10}  {:>10}",
                    "round", "successes", "frequency", "std err"
                );
                for (k, &count) in m.success_counts_per_round.iter().enumerate() {
                    let _ = writeln!(
                        out,
                        "{:>5}  {:>10}  {:>10}  {:>10}",
                        k + 1,
                        count,
                        f6(m.success_frequencies[k]),
                        f6(m.frequency_standard_errors[k])
                    );
                }
                let _ = writeln!(out, "unresolved           {}", m.unresolved);
                let _ = writeln!(
                    out,
                    "estimated yield      {} ± {}",
                    f6(m.estimated_yield),
                    f6(m.standard_error)
                );
            }
        }
        out
    }
}

//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

mod common;

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use proptest::test_runner::{Config, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spinconc::analysis::{iterated_yield, monte_carlo, success_probability};
use spinconc::protocol::{
    ghz_target, modes, phi_plus, prepare_parity_check, recover_failure, run_ghz_round_with,
    run_round_with, GhzSpec, PairSpec, Sampler, Scripted,
};
use spinconc::statevec::{ChargeOutcome, Spin};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn patterns(n: usize) -> Vec<Vec<Spin>> {
    (0..1u32 << n)
        .map(|bits| {
            (0..n)
                .map(|i| {
                    if bits >> i & 1 == 1 {
                        Spin::Down
                    } else {
                        Spin::Up
                    }
                })
                .collect()
        })
        .collect()
}

fn grid() -> Vec<f64> {
    common::grid().collect()
}

fn pair(s: f64) -> PairSpec {
    PairSpec::from_weight(s).expect("grid weight")
}

fn detector_probability(spec: &GhzSpec) -> Result<f64, String> {
    prepare_parity_check(spec)
        .and_then(|state| Ok(state.charge_probability(&modes::c1(), ChargeOutcome::One)?))
        .map_err(|e| e.to_string())
}

fn success_probability_criterion() -> Check {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for s in grid() {
        let p = detector_probability(&GhzSpec::bipartite(pair(s)))?;
        worst = worst.max((p - 2.0 * s * (1.0 - s)).abs());
    }
    let elapsed = start.elapsed();
    if worst > 1e-12 {
        return Err(format!("max |P - 2s(1-s)| = {worst:.3e}"));
    }
    if elapsed >= Duration::from_secs(1) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!(
        "max |P - 2s(1-s)| = {worst:.1e} over 19 points in {elapsed:.2?}"
    ))
}

fn success_state_criterion() -> Check {
    let target = phi_plus();
    let mut worst = 1.0f64;
    for s in grid() {
        for spins in patterns(2) {
            let mut script = Scripted::new([ChargeOutcome::One], spins);
            let run = run_round_with(&pair(s), &mut script).map_err(|e| e.to_string())?;
            if !run.outcome.is_success() {
                return Err(format!("s = {s}: forced One did not succeed"));
            }
            worst = worst.min(
                run.outcome
                    .state()
                    .fidelity(&target)
                    .map_err(|e| e.to_string())?,
            );
        }
    }
    if worst < 1.0 - 1e-9 {
        return Err(format!("min fidelity {worst:.12}"));
    }
    Ok(format!(
        "min fidelity with phi+ = {worst:.12} over 19 x 4 branches"
    ))
}

fn failure_recursion_criterion() -> Check {
    let mut worst = 0.0f64;
    for s in grid() {
        let state =
            prepare_parity_check(&GhzSpec::bipartite(pair(s))).map_err(|e| e.to_string())?;
        let failed = state
            .charge_detect_branch(&modes::c1(), ChargeOutcome::NotOne)
            .map_err(|e| e.to_string())?;
        for spins in patterns(2) {
            let rec = recover_failure(&failed.state, &mut Scripted::new([], spins))
                .map_err(|e| e.to_string())?;
            let expected = s * s / (s * s + (1.0 - s) * (1.0 - s));
            worst = worst.max((rec.spec.weight() - expected).abs());
            let (a, b) = (rec.spec.alpha(), rec.spec.beta());
            let plus = a.im.abs() < 1e-12 && b.im.abs() < 1e-12 && a.re > 0.0 && b.re > 0.0;
            if !plus {
                return Err(format!(
                    "s = {s}: recovered amplitudes {a}, {b} are not '+' form"
                ));
            }
        }
    }
    if worst > 1e-12 {
        return Err(format!("max |s' - s²/(s²+(1-s)²)| = {worst:.3e}"));
    }
    Ok(format!(
        "max |s' - s²/(s²+(1-s)²)| = {worst:.1e}, '+' sign on all 76 branches"
    ))
}

fn yield_criterion() -> Check {
    let balanced = iterated_yield(0.5, 10)
        .map_err(|e| e.to_string())?
        .total_yield;
    if (balanced - 1.0 / 3.0).abs() > 1e-6 {
        return Err(format!("total_yield(0.5, 10) = {balanced}"));
    }
    let mut min_gain = f64::INFINITY;
    for s in grid() {
        for k in 2..=10 {
            let report = iterated_yield(s, k).map_err(|e| e.to_string())?;
            let gain = report.total_yield - report.baseline_yield;
            if gain <= 0.0 {
                return Err(format!(
                    "s0 = {s}, K = {k}: {} <= {}",
                    report.total_yield, report.baseline_yield
                ));
            }
            min_gain = min_gain.min(gain);
        }
    }
    Ok(format!(
        "total_yield(0.5, 10) = {balanced:.9}; min gain over baseline {min_gain:.3e} (K = 2..10)"
    ))
}

fn monte_carlo_criterion() -> Check {
    let start = Instant::now();
    let trials = 100_000;
    let mut notes = Vec::new();
    for s0 in [0.5, 0.64] {
        let report = monte_carlo(s0, trials, 2, 2024).map_err(|e| e.to_string())?;
        let p1 = success_probability(s0).map_err(|e| e.to_string())?;
        let freq = report.success_frequencies[0];
        let sigma = (p1 * (1.0 - p1) / trials as f64).sqrt();
        if (freq - p1).abs() > 3.0 * sigma {
            return Err(format!(
                "s0 = {s0}: round-1 frequency {freq} vs {p1} (sigma {sigma:.2e})"
            ));
        }
        let analytic = iterated_yield(s0, 2)
            .map_err(|e| e.to_string())?
            .total_yield;
        let (est, se) = (report.estimated_yield, report.standard_error);
        if (est - analytic).abs() > 3.0 * se {
            return Err(format!(
                "s0 = {s0}: yield {est} vs {analytic} (se {se:.2e})"
            ));
        }
        notes.push(format!(
            "s0={s0}: f1 {:.2}σ, yield {:.2}σ",
            (freq - p1) / sigma,
            (est - analytic) / se
        ));
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(30) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("{} in {elapsed:.2?}", notes.join("; ")))
}

fn invariant_criterion() -> Check {
    let cases = 1000;
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&common::arb_state(), |(k, state)| {
            let all = common::check_unitarity(k, &state)
                .and_then(|_| common::check_involutions(k, &state))
                .and_then(|_| common::check_completeness(k, &state))
                .and_then(|_| common::check_population(k, &state))
                .and_then(|_| common::check_pauli(&state));
            all.map_err(proptest::test_runner::TestCaseError::fail)
        })
        .map_err(|e| e.to_string())?;
    Ok(format!(
        "unitarity, involution, completeness, population, Pauli over {cases} random states"
    ))
}

fn ghz_criterion() -> Check {
    let mut worst_p = 0.0f64;
    let mut worst_f = 1.0f64;
    for n in 2..=4 {
        for register in patterns(n - 2) {
            for s in grid() {
                let spec = GhzSpec::new(n, pair(s), register.clone()).map_err(|e| e.to_string())?;
                worst_p = worst_p.max((detector_probability(&spec)? - 2.0 * s * (1.0 - s)).abs());
                let target = ghz_target(&spec).map_err(|e| e.to_string())?;
                for spins in patterns(n) {
                    let mut script = Scripted::new([ChargeOutcome::One], spins);
                    let run = run_ghz_round_with(&spec, &mut script).map_err(|e| e.to_string())?;
                    worst_f = worst_f.min(
                        run.outcome
                            .state()
                            .fidelity(&target)
                            .map_err(|e| e.to_string())?,
                    );
                }
            }
        }
    }
    if worst_p > 1e-12 || worst_f < 1.0 - 1e-9 {
        return Err(format!(
            "max |P - 2s(1-s)| = {worst_p:.3e}, min fidelity {worst_f:.12}"
        ));
    }
    for seed in 0..200 {
        let spec = pair(0.05 + 0.9 * (seed as f64 / 200.0));
        let mut r1 = ChaCha8Rng::seed_from_u64(seed);
        let mut r2 = ChaCha8Rng::seed_from_u64(seed);
        let ghz = run_ghz_round_with(
            &GhzSpec::all_up(2, spec).unwrap(),
            &mut Sampler::new(&mut r1),
        )
        .map_err(|e| e.to_string())?;
        let round = run_round_with(&spec, &mut Sampler::new(&mut r2)).map_err(|e| e.to_string())?;
        if ghz != round || ghz.success_probability.to_bits() != round.success_probability.to_bits()
        {
            return Err(format!(
                "seed {seed}: n = 2 differs from the bipartite round"
            ));
        }
    }
    Ok(format!(
        "n = 2..4: max |P - 2s(1-s)| = {worst_p:.1e}, min fidelity {worst_f:.12}; n = 2 identical on 200 seeds"
    ))
}

fn determinism_criterion() -> Check {
    let runs: &[&[&str]] = &[
        &["round", "--alpha", "0.8", "--seed", "7"],
        &["iterate", "--alpha", "0.8", "--max-rounds", "5"],
        &["yield", "--alpha", "0.8"],
        &[
            "monte-carlo",
            "--alpha",
            "0.8",
            "--trials",
            "2000",
            "--max-rounds",
            "4",
            "--seed",
            "9",
        ],
        &["ghz", "--alpha", "0.6", "--parties", "4", "--seed", "3"],
        &["curve", "--points", "19"],
    ];
    let invoke = |args: &[&str]| -> Result<Vec<u8>, String> {
        let out = Command::new(env!("CARGO_BIN_EXE_spinconc"))
            .args(args)
            .output()
            .map_err(|e| e.to_string())?;
        if !out.status.success() {
            return Err(format!("{args:?} exited with {:?}", out.status.code()));
        }
        Ok(out.stdout)
    };
    let mut compared = 0;
    for args in runs {
        for format in ["csv", "json"] {
            let mut full = args.to_vec();
            full.extend(["--format", format]);
            if invoke(&full)? != invoke(&full)? {
                return Err(format!("{full:?} output differs between runs"));
            }
            compared += 1;
        }
    }
    Ok(format!("{compared} invocation pairs byte-identical"))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("1 success probability", success_probability_criterion),
        ("2 success-state exactness", success_state_criterion),
        ("3 failure recursion", failure_recursion_criterion),
        ("4 iterated yield", yield_criterion),
        ("5 monte carlo agreement", monte_carlo_criterion),
        ("6 invariant suite", invariant_criterion),
        ("7 ghz generalization", ghz_criterion),
        ("8 determinism", determinism_criterion),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name}: {detail}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

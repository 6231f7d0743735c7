#![allow(dead_code)]

use num_complex::Complex64;
use proptest::prelude::*;
use spinconc::statevec::{BasisConfig, ModeLabel, PbsSpec, PureState, Slot, Spin};

pub fn grid() -> impl Iterator<Item = f64> {
    (1..=19).map(|i| i as f64 * 0.05)
}

pub fn mode(i: usize) -> ModeLabel {
    if i == 0 {
        ModeLabel::alice("m0")
    } else {
        ModeLabel::bob(&format!("m{i}"))
    }
}

pub fn splitter() -> PbsSpec {
    PbsSpec::polarizing(
        [mode(0), mode(1)],
        [ModeLabel::bob("o1"), ModeLabel::bob("o0")],
    )
    .unwrap()
}

/// Normalized superposition over spin strings of `k` singly occupied modes.
pub fn state_from(k: usize, amps: &[(f64, f64)]) -> PureState {
    let norm: f64 = amps
        .iter()
        .map(|(re, im)| re * re + im * im)
        .sum::<f64>()
        .sqrt();
    let terms = amps.iter().enumerate().map(|(bits, &(re, im))| {
        let config = BasisConfig::new((0..k).map(|i| {
            let spin = if bits >> i & 1 == 1 {
                Spin::Down
            } else {
                Spin::Up
            };
            Slot::new(mode(i), spin)
        }))
        .unwrap();
        (config, Complex64::new(re, im) / norm)
    });
    // zero-amplitude configurations still register their modes
    PureState::from_terms(terms).unwrap()
}

/// Random normalized states on 2 to 5 modes, some amplitudes zeroed.
pub fn arb_state() -> impl Strategy<Value = (usize, PureState)> {
    (2usize..=5)
        .prop_flat_map(|k| {
            let amp = prop_oneof![
                1 => Just((0.0, 0.0)),
                3 => (-1.0f64..1.0, -1.0f64..1.0),
            ];
            (
                Just(k),
                proptest::collection::vec(amp, 1 << k),
                -1.0f64..1.0,
            )
        })
        .prop_map(|(k, mut amps, fallback)| {
            if amps.iter().all(|&(re, im)| re * re + im * im < 1e-6) {
                amps[0] = (1.0, fallback);
            }
            (k, state_from(k, &amps))
        })
}

pub fn max_amplitude_gap(a: &PureState, b: &PureState) -> f64 {
    a.terms()
        .chain(b.terms())
        .map(|(c, _)| (a.amplitude(c) - b.amplitude(c)).norm())
        .fold(0.0, f64::max)
}

const TOL: f64 = 1e-12;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

/// Single-mode gates and the splitter preserve the norm.
pub fn check_unitarity(k: usize, state: &PureState) -> Result<(), String> {
    for i in 0..k {
        let m = mode(i);
        for (name, out) in [
            ("rotate90", state.rotate90(&m)),
            ("hadamard", state.hadamard(&m)),
            ("phase_flip", state.phase_flip(&m)),
        ] {
            let norm = out.map_err(|e| e.to_string())?.norm_sqr();
            ensure((norm - 1.0).abs() < TOL, || {
                format!("{name} on m{i}: norm {norm}")
            })?;
        }
    }
    let norm = state
        .apply_pbs(&splitter())
        .map_err(|e| e.to_string())?
        .norm_sqr();
    ensure((norm - 1.0).abs() < TOL, || format!("pbs: norm {norm}"))
}

pub fn check_involutions(k: usize, state: &PureState) -> Result<(), String> {
    for i in 0..k {
        let m = mode(i);
        let twice = [
            ("rotate90", state.rotate90(&m).and_then(|s| s.rotate90(&m))),
            ("hadamard", state.hadamard(&m).and_then(|s| s.hadamard(&m))),
            (
                "phase_flip",
                state.phase_flip(&m).and_then(|s| s.phase_flip(&m)),
            ),
        ];
        for (name, out) in twice {
            let gap = max_amplitude_gap(&out.map_err(|e| e.to_string())?, state);
            ensure(gap < TOL, || format!("{name}² on m{i}: gap {gap}"))?;
        }
    }
    Ok(())
}

pub fn check_completeness(k: usize, state: &PureState) -> Result<(), String> {
    use spinconc::statevec::ChargeOutcome::{NotOne, One};
    let routed = state.apply_pbs(&splitter()).map_err(|e| e.to_string())?;
    for m in [ModeLabel::bob("o0"), ModeLabel::bob("o1"), mode(0)] {
        let s = if m == mode(0) { state } else { &routed };
        let one = s.charge_probability(&m, One).map_err(|e| e.to_string())?;
        let not = s
            .charge_probability(&m, NotOne)
            .map_err(|e| e.to_string())?;
        ensure((one + not - 1.0).abs() < TOL, || {
            format!("charge on {m}: {one} + {not}")
        })?;
    }
    for i in 0..k {
        let m = mode(i);
        let up = state
            .spin_probability(&m, Spin::Up)
            .map_err(|e| e.to_string())?;
        let down = state
            .spin_probability(&m, Spin::Down)
            .map_err(|e| e.to_string())?;
        ensure((up + down - 1.0).abs() < TOL, || {
            format!("spin on m{i}: {up} + {down}")
        })?;
    }
    Ok(())
}

/// Charge detection leaves every slot population unchanged on average.
pub fn check_population(k: usize, state: &PureState) -> Result<(), String> {
    use spinconc::statevec::ChargeOutcome::{NotOne, One};
    let routed = state.apply_pbs(&splitter()).map_err(|e| e.to_string())?;
    let detectors = [ModeLabel::bob("o0"), ModeLabel::bob("o1")];
    for detector in &detectors {
        let mut readings = Vec::new();
        for outcome in [One, NotOne] {
            let p = routed
                .charge_probability(detector, outcome)
                .map_err(|e| e.to_string())?;
            if p > 1e-30 {
                let post = routed
                    .charge_detect_branch(detector, outcome)
                    .map_err(|e| e.to_string())?;
                readings.push((p, post.state));
            }
        }
        let slots = (2..k).map(mode).chain(detectors.iter().cloned());
        for m in slots {
            for spin in Spin::ALL {
                let before = routed.slot_probability(&m, spin);
                let after: f64 = readings
                    .iter()
                    .map(|(p, s)| p * s.slot_probability(&m, spin))
                    .sum();
                ensure((before - after).abs() < TOL, || {
                    format!("detector {detector}, slot ({m}, {spin:?}): {before} vs {after}")
                })?;
            }
        }
    }
    Ok(())
}

pub fn check_pauli(state: &PureState) -> Result<(), String> {
    let routed = state.apply_pbs(&splitter()).map_err(|e| e.to_string())?;
    for (config, _) in routed.terms() {
        let slots = config.slots();
        ensure(slots.windows(2).all(|w| w[0] != w[1]), || {
            format!("double occupancy in {config}")
        })?;
    }
    Ok(())
}

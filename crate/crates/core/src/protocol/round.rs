use std::f64::consts::FRAC_1_SQRT_2;
use std::sync::LazyLock;

use num_complex::Complex64;
use rand::Rng;

use super::{
    modes, Correction, Draw, GhzSpec, Measurer, PairSpec, ProtocolError, RoundOutcome, Sampler,
    TrajectoryRecord,
};
use crate::statevec::{
    Amplitude, BasisConfig, ChargeOutcome, ModeLabel, PbsSpec, PureState, Slot, Spin,
};

type Result<T> = std::result::Result<T, ProtocolError>;

/// A finished round together with everything that was measured on the way.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundRun {
    pub outcome: RoundOutcome,
    pub draws: Vec<Draw>,
    /// Probability that the charge detector reads one electron.
    pub success_probability: f64,
}

/// Output of the failure-recovery step.
#[derive(Debug, Clone, PartialEq)]
pub struct Recovery {
    pub spec: PairSpec,
    /// `|u⟩` of the recovered pair (empty for two parties).
    pub register: Vec<Spin>,
    /// Remaining electrons: register modes, `a1` and `c3`.
    pub state: PureState,
    pub correction: Correction,
    pub draws: Vec<Draw>,
}

/// Bob's parity splitter: from b1, Up→c2 and Down→c1; from b3, Up→c1 and Down→c2.
fn parity_splitter() -> &'static PbsSpec {
    static PBS: LazyLock<PbsSpec> = LazyLock::new(|| {
        PbsSpec::polarizing([modes::b1(), modes::b3()], [modes::c2(), modes::c1()])
            .expect("parity splitter table is valid")
    });
    &PBS
}

/// Recovery splitter: from c1, Down→c3 and Up→c4; from c2, Up→c3 and Down→c4.
fn recovery_splitter() -> &'static PbsSpec {
    static PBS: LazyLock<PbsSpec> = LazyLock::new(|| {
        PbsSpec::polarizing([modes::c1(), modes::c2()], [modes::c4(), modes::c3()])
            .expect("recovery splitter table is valid")
    });
    &PBS
}

/// `x|w⟩|↑↑⟩ + y|w̄⟩|↓↓⟩` on the given register modes and pair modes.
fn correlated(
    x: Amplitude,
    y: Amplitude,
    register: &[Spin],
    register_modes: &[ModeLabel],
    first: &ModeLabel,
    second: &ModeLabel,
) -> Result<PureState> {
    let branch = |flip: bool| {
        let spin = if flip { Spin::Down } else { Spin::Up };
        let reg = register_modes
            .iter()
            .zip(register)
            .map(move |(m, s)| Slot::new(m.clone(), if flip { s.flipped() } else { *s }));
        BasisConfig::new(reg.chain([
            Slot::new(first.clone(), spin),
            Slot::new(second.clone(), spin),
        ]))
    };
    Ok(PureState::from_terms([
        (branch(false)?, x),
        (branch(true)?, y),
    ])?)
}

fn register_modes(extra: usize) -> Vec<ModeLabel> {
    (0..extra).map(modes::register).collect()
}

fn spare_modes(extra: usize) -> Vec<ModeLabel> {
    (0..extra).map(modes::spare).collect()
}

/// The ideal output `(|u⟩|↑↑⟩ + |ū⟩|↓↓⟩)/√2` on the register, `a1` and `c1`.
pub fn ghz_target(spec: &GhzSpec) -> Result<PureState> {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let extra = spec.register().len();
    correlated(
        h,
        h,
        spec.register(),
        &register_modes(extra),
        &modes::a1(),
        &modes::c1(),
    )
}

/// `(|↑↑⟩ + |↓↓⟩)/√2` on `a1`, `c1`.
pub fn phi_plus() -> PureState {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    PureState::pair(h, h, &modes::a1(), &modes::c1()).expect("phi+ is normalized")
}

/// Builds both copies, flips the second copy and routes Bob's electrons through
/// the parity splitter. The result is the state the charge detector sees.
pub fn prepare_parity_check(spec: &GhzSpec) -> Result<PureState> {
    let extra = spec.register().len();
    let pair = spec.pair();
    let first = correlated(
        pair.alpha(),
        pair.beta(),
        spec.register(),
        &register_modes(extra),
        &modes::a1(),
        &modes::b1(),
    )?;
    let second = correlated(
        pair.alpha(),
        pair.beta(),
        spec.register(),
        &spare_modes(extra),
        &modes::a2(),
        &modes::b2(),
    )?;
    let state = first
        .tensor(&second)?
        .rotate90(&modes::a2())?
        .rotate90(&modes::b2())?
        .rename_mode(&modes::a2(), &modes::a3())?
        .rename_mode(&modes::b2(), &modes::b3())?
        .apply_pbs(parity_splitter())?;
    Ok(state)
}

/// Hadamard and Z-measure every mode in `erase`, then flip the sign of `a1` if an
/// odd number of them read Down.
fn erase_and_correct<M: Measurer + ?Sized>(
    mut state: PureState,
    erase: &[ModeLabel],
    measurer: &mut M,
    draws: &mut Vec<Draw>,
) -> Result<(PureState, Correction)> {
    for mode in erase {
        state = state.hadamard(mode)?;
    }
    let mut odd = false;
    for mode in erase {
        let reading = measurer.spin(&state, mode)?;
        draws.push(Draw::Spin(reading.outcome));
        odd ^= reading.outcome == Spin::Down;
        state = reading.state;
    }
    if odd {
        Ok((state.phase_flip(&modes::a1())?, Correction::PhaseFlip))
    } else {
        Ok((state, Correction::None))
    }
}

pub fn run_ghz_round_with<M: Measurer + ?Sized>(
    spec: &GhzSpec,
    measurer: &mut M,
) -> Result<RoundRun> {
    let extra = spec.register().len();
    let state = prepare_parity_check(spec)?;
    let detector = modes::c1();
    let success_probability = state.charge_probability(&detector, ChargeOutcome::One)?;

    let reading = measurer.charge(&state, &detector)?;
    let mut draws = vec![Draw::Charge(reading.outcome)];
    let outcome = match reading.outcome {
        ChargeOutcome::One => {
            let mut erase = vec![modes::a3(), modes::c2()];
            erase.extend(spare_modes(extra));
            let (state, correction) =
                erase_and_correct(reading.state, &erase, measurer, &mut draws)?;
            RoundOutcome::Success {
                state,
                probability: reading.probability,
                correction,
            }
        }
        ChargeOutcome::NotOne => {
            let recovery = recover_failure(&reading.state, measurer)?;
            draws.extend(recovery.draws);
            RoundOutcome::Failure {
                spec: recovery.spec,
                state: recovery.state,
                probability: reading.probability,
                correction: recovery.correction,
            }
        }
    };
    Ok(RoundRun {
        outcome,
        draws,
        success_probability,
    })
}

pub fn run_round_with<M: Measurer + ?Sized>(spec: &PairSpec, measurer: &mut M) -> Result<RoundRun> {
    run_ghz_round_with(&GhzSpec::bipartite(*spec), measurer)
}

/// One sampled round on two copies of `spec`.
pub fn run_round<R: Rng + ?Sized>(spec: &PairSpec, rng: &mut R) -> Result<RoundOutcome> {
    Ok(run_round_with(spec, &mut Sampler::new(rng))?.outcome)
}

pub fn run_ghz_round<R: Rng + ?Sized>(spec: &GhzSpec, rng: &mut R) -> Result<RoundOutcome> {
    Ok(run_ghz_round_with(spec, &mut Sampler::new(rng))?.outcome)
}

fn check_failure_branch(state: &PureState) -> Result<usize> {
    let bad = |msg: &str| Err(ProtocolError::NotFailureBranch(msg.to_string()));
    let n = state.electron_count();
    if n < 4 || !n.is_multiple_of(2) {
        return bad("expected two copies of a pair-shaped state");
    }
    let extra = n / 2 - 2;
    let singles: Vec<ModeLabel> = [modes::a1(), modes::a3()]
        .into_iter()
        .chain(register_modes(extra))
        .chain(spare_modes(extra))
        .collect();
    let (c1, c2) = (modes::c1(), modes::c2());
    if !singles.iter().chain([&c1, &c2]).all(|m| state.has_mode(m)) {
        return bad("missing protocol modes");
    }
    for (config, _) in state.terms() {
        if singles.iter().any(|m| config.occupancy(m) != 1) {
            return bad("Alice or register modes are not singly occupied");
        }
        let in_c1 = config.occupancy(&c1);
        if in_c1 == 1 || in_c1 + config.occupancy(&c2) != 2 {
            return bad("Bob's electrons are not co-located");
        }
    }
    Ok(extra)
}

/// Reads the recovered `x|u⟩|↑↑⟩ + y|ū⟩|↓↓⟩` off the state left on the register,
/// `a1` and `c3`.
fn extract_pair(state: &PureState, extra: usize) -> Result<(PairSpec, Vec<Spin>)> {
    let bad = |msg: &str| Err(ProtocolError::NotFailureBranch(msg.to_string()));
    if state.electron_count() != extra + 2 {
        return bad("unexpected electrons left after recovery");
    }
    let (a1, c3) = (modes::a1(), modes::c3());
    let mut alpha = Amplitude::default();
    let mut beta = Amplitude::default();
    let mut register: Option<Vec<Spin>> = None;
    for (config, amp) in state.terms() {
        let spin = config.single_spin(&a1)?;
        if config.single_spin(&c3)? != spin {
            return bad("recovered pair is not spin-correlated");
        }
        let mut reg = (0..extra)
            .map(|i| config.single_spin(&modes::register(i)))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        if spin == Spin::Down {
            reg.iter_mut().for_each(|s| *s = s.flipped());
        }
        match &register {
            Some(r) if *r != reg => return bad("register branches are not complementary"),
            Some(_) => {}
            None => register = Some(reg),
        }
        match spin {
            Spin::Up => alpha = *amp,
            Spin::Down => beta = *amp,
        }
    }
    let (alpha, beta) = PairSpec::canonical(alpha, beta);
    Ok((PairSpec::new(alpha, beta)?, register.unwrap_or_default()))
}

/// Turns the normalized odd-parity branch into a fresh source pair on `a1`, `c3`:
/// a second splitter separates Bob's co-located electrons, `a3` and `c4` (and the
/// extra parties' second-copy electrons) are X-measured, and a phase flip
/// restores the `+` sign.
pub fn recover_failure<M: Measurer + ?Sized>(
    failure_state: &PureState,
    measurer: &mut M,
) -> Result<Recovery> {
    let extra = check_failure_branch(failure_state)?;
    let separated = failure_state.apply_pbs(recovery_splitter())?;
    let mut erase = vec![modes::a3(), modes::c4()];
    erase.extend(spare_modes(extra));
    let mut draws = Vec::new();
    let (state, correction) = erase_and_correct(separated, &erase, measurer, &mut draws)?;
    let (spec, register) = extract_pair(&state, extra)?;
    Ok(Recovery {
        spec,
        register,
        state,
        correction,
        draws,
    })
}

/// Repeats rounds, feeding each failure's recovered pair into the next round,
/// until a success or `max_rounds`.
pub fn run_trajectory<R: Rng + ?Sized>(
    spec: &PairSpec,
    max_rounds: usize,
    rng: &mut R,
) -> Result<Vec<TrajectoryRecord>> {
    if max_rounds == 0 {
        return Err(ProtocolError::ZeroRounds);
    }
    let mut current = *spec;
    let mut records = Vec::new();
    for round in 1..=max_rounds {
        let run = run_round_with(&current, &mut Sampler::new(&mut *rng))?;
        let next = run.outcome.failure_spec().copied();
        records.push(TrajectoryRecord {
            round,
            outcome: run.outcome,
            draws: run.draws,
        });
        match next {
            Some(spec) => current = spec,
            None => break,
        }
    }
    Ok(records)
}

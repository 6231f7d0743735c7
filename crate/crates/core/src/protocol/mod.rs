//! The concentration round built from statevec operations.
//!
//! Alice and Bob share two copies of `alpha|↑↑⟩ + beta|↓↓⟩`. The second copy is
//! spin-flipped on both sides, Bob sends `b1` and `b3` through a polarizing beam
//! splitter and a charge detector watches output `c1`. Reading one electron means
//! even parity: Alice and Bob X-measure `a3` and `c2`, keep `a1`/`c1` and correct
//! the sign. Any other reading leaves a new, less balanced pair which a second
//! splitter and the same X-measurement turn back into a reusable source pair.

mod measurer;
mod round;
mod spec;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::statevec::{PureState, StateError};

pub use measurer::{Draw, Measurer, Sampler, Scripted};
pub use round::{
    ghz_target, phi_plus, prepare_parity_check, recover_failure, run_ghz_round, run_ghz_round_with,
    run_round, run_round_with, run_trajectory, Recovery, RoundRun,
};
pub use spec::{GhzSpec, PairSpec};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    #[error(transparent)]
    State(#[from] StateError),

    #[error("coefficients are not normalized: |alpha|² + |beta|² = {0}")]
    NotNormalized(f64),

    #[error("coefficients must be finite")]
    NonFinite,

    #[error("a GHZ round needs at least two parties, got {0}")]
    TooFewParties(usize),

    #[error("register has {len} spins but {parties} parties need {}", parties - 2)]
    RegisterLength { parties: usize, len: usize },

    #[error("state is not a failed-round branch: {0}")]
    NotFailureBranch(String),

    #[error("scripted measurement outcomes exhausted")]
    ScriptExhausted,

    #[error("max_rounds must be at least 1")]
    ZeroRounds,
}

/// Mode labels used by the protocol.
pub mod modes {
    use std::sync::LazyLock;

    use crate::statevec::ModeLabel;

    macro_rules! fixed_modes {
        ($($name:ident => $party:ident),* $(,)?) => {
            $(
                pub fn $name() -> ModeLabel {
                    static LABEL: LazyLock<ModeLabel> =
                        LazyLock::new(|| ModeLabel::$party(stringify!($name)));
                    LABEL.clone()
                }
            )*
        };
    }

    fixed_modes! {
        a1 => alice, a2 => alice, a3 => alice,
        b1 => bob, b2 => bob, b3 => bob,
        c1 => bob, c2 => bob, c3 => bob, c4 => bob,
    }

    /// First-copy electron of extra party `i` (0-based).
    pub fn register(i: usize) -> ModeLabel {
        ModeLabel::other(i, &format!("u{}", i + 1))
    }

    /// Second-copy electron of extra party `i`.
    pub fn spare(i: usize) -> ModeLabel {
        ModeLabel::other(i, &format!("v{}", i + 1))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Correction {
    PhaseFlip,
    None,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RoundOutcome {
    /// Even parity: the corrected maximally entangled state on `a1`, `c1` (plus
    /// the register modes for more than two parties).
    Success {
        state: PureState,
        probability: f64,
        correction: Correction,
    },
    /// Odd parity: the recovered pair, ready to be used as a source again.
    Failure {
        spec: PairSpec,
        state: PureState,
        probability: f64,
        correction: Correction,
    },
}

impl RoundOutcome {
    pub fn is_success(&self) -> bool {
        matches!(self, RoundOutcome::Success { .. })
    }

    pub fn branch_probability(&self) -> f64 {
        match self {
            RoundOutcome::Success { probability, .. }
            | RoundOutcome::Failure { probability, .. } => *probability,
        }
    }

    pub fn correction(&self) -> Correction {
        match self {
            RoundOutcome::Success { correction, .. } | RoundOutcome::Failure { correction, .. } => {
                *correction
            }
        }
    }

    pub fn state(&self) -> &PureState {
        match self {
            RoundOutcome::Success { state, .. } | RoundOutcome::Failure { state, .. } => state,
        }
    }

    pub fn failure_spec(&self) -> Option<&PairSpec> {
        match self {
            RoundOutcome::Failure { spec, .. } => Some(spec),
            RoundOutcome::Success { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    pub round: usize,
    pub outcome: RoundOutcome,
    pub draws: Vec<Draw>,
}

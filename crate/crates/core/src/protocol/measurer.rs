use std::collections::VecDeque;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ProtocolError;
use crate::statevec::{ChargeOutcome, ChargeReading, ModeLabel, PureState, Spin, SpinReading};

/// Source of measurement outcomes for the protocol pipeline.
pub trait Measurer {
    fn charge(
        &mut self,
        state: &PureState,
        mode: &ModeLabel,
    ) -> Result<ChargeReading, ProtocolError>;
    fn spin(&mut self, state: &PureState, mode: &ModeLabel) -> Result<SpinReading, ProtocolError>;
}

/// Born-rule sampling from a random source.
pub struct Sampler<'a, R: ?Sized> {
    rng: &'a mut R,
}

impl<'a, R: Rng + ?Sized> Sampler<'a, R> {
    pub fn new(rng: &'a mut R) -> Self {
        Self { rng }
    }
}

impl<R: Rng + ?Sized> Measurer for Sampler<'_, R> {
    fn charge(
        &mut self,
        state: &PureState,
        mode: &ModeLabel,
    ) -> Result<ChargeReading, ProtocolError> {
        Ok(state.charge_detect(mode, self.rng)?)
    }

    fn spin(&mut self, state: &PureState, mode: &ModeLabel) -> Result<SpinReading, ProtocolError> {
        Ok(state.measure_z(mode, self.rng)?)
    }
}

/// Replays fixed outcomes in order; used to walk specific branches.
#[derive(Debug, Clone, Default)]
pub struct Scripted {
    charges: VecDeque<ChargeOutcome>,
    spins: VecDeque<Spin>,
}

impl Scripted {
    pub fn new(
        charges: impl IntoIterator<Item = ChargeOutcome>,
        spins: impl IntoIterator<Item = Spin>,
    ) -> Self {
        Self {
            charges: charges.into_iter().collect(),
            spins: spins.into_iter().collect(),
        }
    }
}

impl Measurer for Scripted {
    fn charge(
        &mut self,
        state: &PureState,
        mode: &ModeLabel,
    ) -> Result<ChargeReading, ProtocolError> {
        let outcome = self
            .charges
            .pop_front()
            .ok_or(ProtocolError::ScriptExhausted)?;
        Ok(state.charge_detect_branch(mode, outcome)?)
    }

    fn spin(&mut self, state: &PureState, mode: &ModeLabel) -> Result<SpinReading, ProtocolError> {
        let outcome = self
            .spins
            .pop_front()
            .ok_or(ProtocolError::ScriptExhausted)?;
        Ok(state.measure_z_branch(mode, outcome)?)
    }
}

/// One recorded measurement result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Draw {
    Charge(ChargeOutcome),
    Spin(Spin),
}

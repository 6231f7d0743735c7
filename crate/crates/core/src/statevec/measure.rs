use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{BasisConfig, ModeLabel, PureState, Result, Spin, StateError, PRUNE_THRESHOLD};

/// What a charge detector reports: exactly one electron, or not (zero and two are
/// indistinguishable).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChargeOutcome {
    One,
    NotOne,
}

impl ChargeOutcome {
    fn matches(self, occupancy: usize) -> bool {
        (occupancy == 1) == (self == ChargeOutcome::One)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChargeReading {
    pub outcome: ChargeOutcome,
    pub probability: f64,
    pub state: PureState,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpinReading {
    pub outcome: Spin,
    pub probability: f64,
    /// Post-measurement state with the measured electron removed.
    pub state: PureState,
}

impl PureState {
    /// Born weight of `outcome` for a charge detector on `mode`.
    pub fn charge_probability(&self, mode: &ModeLabel, outcome: ChargeOutcome) -> Result<f64> {
        self.require_mode(mode)?;
        Ok(self
            .terms()
            .filter(|(c, _)| outcome.matches(c.occupancy(mode)))
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Nondestructive occupation measurement of `mode`, sampled from the Born rule.
    pub fn charge_detect<R: Rng + ?Sized>(
        &self,
        mode: &ModeLabel,
        rng: &mut R,
    ) -> Result<ChargeReading> {
        let p_one = self.charge_probability(mode, ChargeOutcome::One)?;
        let outcome = if rng.gen::<f64>() < p_one {
            ChargeOutcome::One
        } else {
            ChargeOutcome::NotOne
        };
        self.charge_detect_branch(mode, outcome)
    }

    /// Projects onto a chosen charge outcome without sampling.
    pub fn charge_detect_branch(
        &self,
        mode: &ModeLabel,
        forced: ChargeOutcome,
    ) -> Result<ChargeReading> {
        let probability = self.charge_probability(mode, forced)?;
        let state = self.project(
            probability,
            |c| forced.matches(c.occupancy(mode)),
            |c| c.clone(),
        )?;
        Ok(ChargeReading {
            outcome: forced,
            probability,
            state,
        })
    }

    /// Born weight of finding the electron in `mode` with `spin`.
    pub fn spin_probability(&self, mode: &ModeLabel, spin: Spin) -> Result<f64> {
        self.require_mode(mode)?;
        let mut total = 0.0;
        for (config, amp) in self.terms() {
            if config.single_spin(mode)? == spin {
                total += amp.norm_sqr();
            }
        }
        Ok(total)
    }

    /// Destructive Z-basis measurement of the electron in `mode`.
    pub fn measure_z<R: Rng + ?Sized>(&self, mode: &ModeLabel, rng: &mut R) -> Result<SpinReading> {
        let p_up = self.spin_probability(mode, Spin::Up)?;
        let outcome = if rng.gen::<f64>() < p_up {
            Spin::Up
        } else {
            Spin::Down
        };
        self.measure_z_branch(mode, outcome)
    }

    /// Projects the electron in `mode` onto `forced` and removes it.
    pub fn measure_z_branch(&self, mode: &ModeLabel, forced: Spin) -> Result<SpinReading> {
        let probability = self.spin_probability(mode, forced)?;
        let state = self.project(
            probability,
            |c| c.contains(mode, forced),
            |c| c.without_mode(mode),
        )?;
        Ok(SpinReading {
            outcome: forced,
            probability,
            state,
        })
    }

    fn project(
        &self,
        probability: f64,
        keep: impl Fn(&BasisConfig) -> bool,
        map: impl Fn(&BasisConfig) -> BasisConfig,
    ) -> Result<PureState> {
        if probability < PRUNE_THRESHOLD {
            return Err(StateError::ZeroProbabilityBranch { probability });
        }
        let scale = probability.sqrt().recip();
        let mut terms = BTreeMap::new();
        for (config, amp) in self.terms().filter(|(c, _)| keep(c)) {
            *terms.entry(map(config)).or_default() += amp * scale;
        }
        self.with_terms(terms)
    }
}

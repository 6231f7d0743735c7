//! Exact pure states of spin-1/2 electrons distributed over labeled spatial modes.
//!
//! A basis configuration is the set of occupied `(mode, spin)` slots. Electrons are
//! identical particles, so a configuration does not record which source an electron
//! came from; single-electron gates and measurements address "the electron in mode
//! `m`". Exchange signs are not tracked: every observable used here is diagonal in
//! the slot basis.

mod error;
mod gates;
mod measure;
mod pbs;
mod state;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use error::StateError;
pub use gates::SpinGate;
pub use measure::{ChargeOutcome, ChargeReading, SpinReading};
pub use pbs::PbsSpec;
pub use state::PureState;

pub type Amplitude = Complex64;

/// Allowed deviation of the squared norm from one.
pub const NORM_TOLERANCE: f64 = 1e-12;

/// Terms whose weight falls below this are dropped.
pub const PRUNE_THRESHOLD: f64 = 1e-30;

pub type Result<T> = std::result::Result<T, StateError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spin {
    Up,
    Down,
}

impl Spin {
    pub const ALL: [Spin; 2] = [Spin::Up, Spin::Down];

    pub fn flipped(self) -> Spin {
        match self {
            Spin::Up => Spin::Down,
            Spin::Down => Spin::Up,
        }
    }

    pub(crate) fn index(self) -> usize {
        match self {
            Spin::Up => 0,
            Spin::Down => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Party {
    Alice,
    Bob,
    Other(usize),
}

/// A named spatial mode owned by one party.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ModeLabel {
    name: Arc<str>,
    party: Party,
}

impl ModeLabel {
    pub fn new(name: &str, party: Party) -> Self {
        Self {
            name: Arc::from(name),
            party,
        }
    }

    pub fn alice(name: &str) -> Self {
        Self::new(name, Party::Alice)
    }

    pub fn bob(name: &str) -> Self {
        Self::new(name, Party::Bob)
    }

    pub fn other(party: usize, name: &str) -> Self {
        Self::new(name, Party::Other(party))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn party(&self) -> Party {
        self.party
    }
}

impl fmt::Display for ModeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Slot {
    pub mode: ModeLabel,
    pub spin: Spin,
}

impl Slot {
    pub fn new(mode: ModeLabel, spin: Spin) -> Self {
        Self { mode, spin }
    }
}

/// Occupied slots of one product ket, kept sorted. Pauli exclusion is checked on
/// construction.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisConfig {
    slots: Vec<Slot>,
}

impl BasisConfig {
    pub fn new(slots: impl IntoIterator<Item = Slot>) -> Result<Self> {
        let mut slots: Vec<Slot> = slots.into_iter().collect();
        slots.sort();
        if let Some(w) = slots.windows(2).find(|w| w[0] == w[1]) {
            return Err(StateError::Pauli {
                mode: w[0].mode.to_string(),
                spin: w[0].spin,
            });
        }
        Ok(Self { slots })
    }

    /// Shorthand for tests and constructors: `[(mode, spin), ...]`.
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a ModeLabel, Spin)>) -> Result<Self> {
        Self::new(pairs.into_iter().map(|(m, s)| Slot::new(m.clone(), s)))
    }

    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    pub fn electron_count(&self) -> usize {
        self.slots.len()
    }

    pub fn occupancy(&self, mode: &ModeLabel) -> usize {
        self.slots.iter().filter(|s| &s.mode == mode).count()
    }

    pub fn contains(&self, mode: &ModeLabel, spin: Spin) -> bool {
        self.slots.iter().any(|s| &s.mode == mode && s.spin == spin)
    }

    /// Spin of the sole electron in `mode`.
    pub fn single_spin(&self, mode: &ModeLabel) -> Result<Spin> {
        let mut found = self.slots.iter().filter(|s| &s.mode == mode);
        match (found.next(), found.next()) {
            (Some(slot), None) => Ok(slot.spin),
            _ => Err(StateError::Occupancy {
                mode: mode.to_string(),
                found: self.occupancy(mode),
            }),
        }
    }

    pub(crate) fn with_spin(&self, mode: &ModeLabel, spin: Spin) -> BasisConfig {
        let mut slots = self.slots.clone();
        for slot in slots.iter_mut().filter(|s| &s.mode == mode) {
            slot.spin = spin;
        }
        slots.sort();
        BasisConfig { slots }
    }

    pub(crate) fn without_mode(&self, mode: &ModeLabel) -> BasisConfig {
        BasisConfig {
            slots: self
                .slots
                .iter()
                .filter(|s| &s.mode != mode)
                .cloned()
                .collect(),
        }
    }

    pub(crate) fn modes(&self) -> impl Iterator<Item = &ModeLabel> {
        self.slots.iter().map(|s| &s.mode)
    }
}

impl fmt::Display for BasisConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for slot in &self.slots {
            let arrow = match slot.spin {
                Spin::Up => '↑',
                Spin::Down => '↓',
            };
            write!(f, "|{arrow}⟩_{}", slot.mode)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spin_flip_is_involution() {
        for s in Spin::ALL {
            assert_ne!(s, s.flipped());
            assert_eq!(s, s.flipped().flipped());
        }
    }

    #[test]
    fn config_rejects_double_occupied_slot() {
        let c1 = ModeLabel::bob("c1");
        let err = BasisConfig::from_pairs([(&c1, Spin::Up), (&c1, Spin::Up)]).unwrap_err();
        assert!(matches!(err, StateError::Pauli { spin: Spin::Up, .. }));
        // opposite spins may share a mode
        let ok = BasisConfig::from_pairs([(&c1, Spin::Up), (&c1, Spin::Down)]).unwrap();
        assert_eq!(ok.occupancy(&c1), 2);
        assert!(ok.single_spin(&c1).is_err());
    }

    #[test]
    fn config_is_order_independent() {
        let a = ModeLabel::alice("a1");
        let b = ModeLabel::bob("b1");
        let x = BasisConfig::from_pairs([(&a, Spin::Up), (&b, Spin::Down)]).unwrap();
        let y = BasisConfig::from_pairs([(&b, Spin::Down), (&a, Spin::Up)]).unwrap();
        assert_eq!(x, y);
        assert_eq!(x.to_string(), "|↑⟩_a1|↓⟩_b1");
    }
}

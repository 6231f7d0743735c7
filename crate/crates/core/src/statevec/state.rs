use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_complex::Complex64;

use super::{
    Amplitude, BasisConfig, ModeLabel, Result, Slot, Spin, StateError, NORM_TOLERANCE,
    PRUNE_THRESHOLD,
};

/// A superposition of basis configurations over a registry of known modes.
///
/// Values are immutable: every operation returns a new state. The registry holds
/// every mode the state has been told about, occupied or not, so that a detector
/// can watch a mode that happens to be empty in every term.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    terms: BTreeMap<BasisConfig, Amplitude>,
    modes: BTreeSet<ModeLabel>,
    electrons: usize,
}

impl PureState {
    /// Builds a normalized state. Repeated configurations are summed, negligible
    /// terms are pruned and every occupied mode is registered.
    pub fn from_terms(terms: impl IntoIterator<Item = (BasisConfig, Amplitude)>) -> Result<Self> {
        let mut modes = BTreeSet::new();
        let mut acc = BTreeMap::new();
        for (config, amp) in terms {
            if !amp.re.is_finite() || !amp.im.is_finite() {
                return Err(StateError::NonFinite);
            }
            for mode in config.modes() {
                modes.insert(mode.clone());
            }
            *acc.entry(config).or_insert(Complex64::new(0.0, 0.0)) += amp;
        }
        check_unique_names(&modes)?;
        let state = Self::assemble(acc, modes)?;
        let norm_sqr = state.norm_sqr();
        if !is_normalized(norm_sqr) {
            return Err(StateError::NotNormalized { norm_sqr });
        }
        Ok(state)
    }

    /// `alpha |↑↑⟩ + beta |↓↓⟩` on two distinct modes.
    pub fn pair(
        alpha: Amplitude,
        beta: Amplitude,
        first: &ModeLabel,
        second: &ModeLabel,
    ) -> Result<Self> {
        if first.name() == second.name() {
            return Err(StateError::DuplicateMode(first.to_string()));
        }
        let norm_sqr = alpha.norm_sqr() + beta.norm_sqr();
        if !is_normalized(norm_sqr) {
            return Err(StateError::NotNormalized { norm_sqr });
        }
        let up = BasisConfig::from_pairs([(first, Spin::Up), (second, Spin::Up)])?;
        let down = BasisConfig::from_pairs([(first, Spin::Down), (second, Spin::Down)])?;
        let mut state = Self::from_terms([(up, alpha), (down, beta)])?;
        // a degenerate pair still owns both modes
        state.modes.insert(first.clone());
        state.modes.insert(second.clone());
        Ok(state)
    }

    /// Internal constructor for operations that already guarantee consistent
    /// configurations. Prunes and checks particle number, but not the norm.
    pub(crate) fn assemble(
        terms: BTreeMap<BasisConfig, Amplitude>,
        modes: BTreeSet<ModeLabel>,
    ) -> Result<Self> {
        let terms: BTreeMap<_, _> = terms
            .into_iter()
            .filter(|(_, a)| a.norm_sqr() >= PRUNE_THRESHOLD)
            .collect();
        let mut counts = terms.keys().map(BasisConfig::electron_count);
        let electrons = counts.next().ok_or(StateError::Empty)?;
        if let Some(other) = counts.find(|&n| n != electrons) {
            return Err(StateError::ParticleNumberMismatch(electrons, other));
        }
        if terms
            .values()
            .any(|a| !a.re.is_finite() || !a.im.is_finite())
        {
            return Err(StateError::NonFinite);
        }
        Ok(Self {
            terms,
            modes,
            electrons,
        })
    }

    pub(crate) fn with_terms(&self, terms: BTreeMap<BasisConfig, Amplitude>) -> Result<Self> {
        Self::assemble(terms, self.modes.clone())
    }

    /// Product state of two states on disjoint modes.
    pub fn tensor(&self, other: &PureState) -> Result<Self> {
        let mut modes = self.modes.clone();
        for mode in &other.modes {
            if self.modes.iter().any(|m| m.name() == mode.name()) {
                return Err(StateError::DuplicateMode(mode.to_string()));
            }
            modes.insert(mode.clone());
        }
        let mut terms = BTreeMap::new();
        for (c1, a1) in &self.terms {
            for (c2, a2) in &other.terms {
                let config = BasisConfig::new(c1.slots().iter().chain(c2.slots()).cloned())?;
                terms.insert(config, a1 * a2);
            }
        }
        Self::assemble(terms, modes)
    }

    /// Renames a mode everywhere. The new name must not already be registered.
    pub fn rename_mode(&self, from: &ModeLabel, to: &ModeLabel) -> Result<Self> {
        self.require_mode(from)?;
        if self.modes.iter().any(|m| m.name() == to.name()) {
            return Err(StateError::DuplicateMode(to.to_string()));
        }
        let mut modes = self.modes.clone();
        modes.remove(from);
        modes.insert(to.clone());
        let terms = self
            .terms
            .iter()
            .map(|(config, amp)| {
                let slots = config.slots().iter().map(|s| {
                    if &s.mode == from {
                        Slot::new(to.clone(), s.spin)
                    } else {
                        s.clone()
                    }
                });
                Ok((BasisConfig::new(slots)?, *amp))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        Self::assemble(terms, modes)
    }

    /// `|⟨self|other⟩|²`, clamped to `[0, 1]`.
    pub fn fidelity(&self, other: &PureState) -> Result<f64> {
        if self.electrons != other.electrons {
            return Err(StateError::ParticleNumberMismatch(
                self.electrons,
                other.electrons,
            ));
        }
        Ok(self.inner(other).norm_sqr().clamp(0.0, 1.0))
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &PureState) -> Complex64 {
        self.terms
            .iter()
            .filter_map(|(c, a)| other.terms.get(c).map(|b| a.conj() * b))
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.terms.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisConfig, &Amplitude)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Amplitude of `config`, zero if absent.
    pub fn amplitude(&self, config: &BasisConfig) -> Amplitude {
        self.terms.get(config).copied().unwrap_or_default()
    }

    pub fn electron_count(&self) -> usize {
        self.electrons
    }

    pub fn modes(&self) -> &BTreeSet<ModeLabel> {
        &self.modes
    }

    pub fn has_mode(&self, mode: &ModeLabel) -> bool {
        self.modes.contains(mode)
    }

    /// Probability that slot `(mode, spin)` is occupied.
    pub fn slot_probability(&self, mode: &ModeLabel, spin: Spin) -> f64 {
        self.terms
            .iter()
            .filter(|(c, _)| c.contains(mode, spin))
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    pub(crate) fn require_mode(&self, mode: &ModeLabel) -> Result<()> {
        if self.modes.contains(mode) {
            Ok(())
        } else {
            Err(StateError::UnknownMode(mode.to_string()))
        }
    }

    pub(crate) fn registry_with(&self, extra: &[ModeLabel]) -> Result<BTreeSet<ModeLabel>> {
        let mut modes = self.modes.clone();
        for mode in extra {
            if modes.iter().any(|m| m.name() == mode.name() && m != mode) {
                return Err(StateError::DuplicateMode(mode.to_string()));
            }
            modes.insert(mode.clone());
        }
        Ok(modes)
    }

    pub(crate) fn raw_terms(&self) -> &BTreeMap<BasisConfig, Amplitude> {
        &self.terms
    }
}

/// NaN-safe norm check.
pub(crate) fn is_normalized(norm_sqr: f64) -> bool {
    (norm_sqr - 1.0).abs() <= NORM_TOLERANCE
}

fn check_unique_names(modes: &BTreeSet<ModeLabel>) -> Result<()> {
    let mut names = BTreeSet::new();
    for mode in modes {
        if !names.insert(mode.name()) {
            return Err(StateError::DuplicateMode(mode.to_string()));
        }
    }
    Ok(())
}

impl fmt::Display for PureState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (config, amp)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({:.6}{:+.6}i){config}", amp.re, amp.im)?;
        }
        Ok(())
    }
}

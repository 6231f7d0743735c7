use num_complex::Complex64;

use super::ProtocolError;
use crate::statevec::{Amplitude, Spin, NORM_TOLERANCE};

/// Coefficients of a less-entangled source pair `alpha|↑↑⟩ + beta|↓↓⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairSpec {
    alpha: Amplitude,
    beta: Amplitude,
}

impl PairSpec {
    pub fn new(alpha: Amplitude, beta: Amplitude) -> Result<Self, ProtocolError> {
        if ![alpha.re, alpha.im, beta.re, beta.im]
            .iter()
            .all(|x| x.is_finite())
        {
            return Err(ProtocolError::NonFinite);
        }
        let norm_sqr = alpha.norm_sqr() + beta.norm_sqr();
        if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
            return Err(ProtocolError::NotNormalized(norm_sqr));
        }
        Ok(Self { alpha, beta })
    }

    /// Real `alpha` in `[0, 1]` with `beta = sqrt(1 - alpha²)`.
    pub fn from_real_alpha(alpha: f64) -> Result<Self, ProtocolError> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(ProtocolError::NotNormalized(alpha * alpha));
        }
        let beta = (1.0 - alpha * alpha).max(0.0).sqrt();
        Self::new(Complex64::new(alpha, 0.0), Complex64::new(beta, 0.0))
    }

    /// Real coefficients with `|alpha|² = s`.
    pub fn from_weight(s: f64) -> Result<Self, ProtocolError> {
        if !(0.0..=1.0).contains(&s) {
            return Err(ProtocolError::NotNormalized(s));
        }
        Self::new(
            Complex64::new(s.sqrt(), 0.0),
            Complex64::new((1.0 - s).sqrt(), 0.0),
        )
    }

    pub fn alpha(&self) -> Amplitude {
        self.alpha
    }

    pub fn beta(&self) -> Amplitude {
        self.beta
    }

    /// `|alpha|²`.
    pub fn weight(&self) -> f64 {
        self.alpha.norm_sqr()
    }

    /// Removes the global phase so that the leading nonzero coefficient is real
    /// and positive.
    pub(crate) fn canonical(alpha: Amplitude, beta: Amplitude) -> (Amplitude, Amplitude) {
        let lead = if alpha.norm() > 0.0 { alpha } else { beta };
        if lead.norm() == 0.0 {
            return (alpha, beta);
        }
        let phase = lead.conj() / lead.norm();
        (alpha * phase, beta * phase)
    }
}

/// `alpha|u⟩|↑↑⟩ + beta|ū⟩|↓↓⟩` shared by `parties` parties; `|u⟩` is a product
/// of basis spins held by the parties other than Alice and Bob.
#[derive(Debug, Clone, PartialEq)]
pub struct GhzSpec {
    pair: PairSpec,
    register: Vec<Spin>,
}

impl GhzSpec {
    pub fn new(parties: usize, pair: PairSpec, register: Vec<Spin>) -> Result<Self, ProtocolError> {
        if parties < 2 {
            return Err(ProtocolError::TooFewParties(parties));
        }
        if register.len() != parties - 2 {
            return Err(ProtocolError::RegisterLength {
                parties,
                len: register.len(),
            });
        }
        Ok(Self { pair, register })
    }

    /// Register `|u⟩ = |↑…↑⟩`.
    pub fn all_up(parties: usize, pair: PairSpec) -> Result<Self, ProtocolError> {
        Self::new(parties, pair, vec![Spin::Up; parties.saturating_sub(2)])
    }

    pub fn bipartite(pair: PairSpec) -> Self {
        Self {
            pair,
            register: Vec::new(),
        }
    }

    pub fn parties(&self) -> usize {
        self.register.len() + 2
    }

    pub fn pair(&self) -> &PairSpec {
        &self.pair
    }

    pub fn register(&self) -> &[Spin] {
        &self.register
    }

    /// `|ū⟩`, the componentwise flip.
    pub fn flipped_register(&self) -> Vec<Spin> {
        self.register.iter().map(|s| s.flipped()).collect()
    }
}

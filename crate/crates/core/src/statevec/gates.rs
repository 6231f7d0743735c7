use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::{Amplitude, ModeLabel, PureState, Result, Spin};

/// A 2×2 operator on one electron's spin, indexed `[out][in]` with Up = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinGate {
    matrix: [[Amplitude; 2]; 2],
}

impl SpinGate {
    pub const fn new(matrix: [[Amplitude; 2]; 2]) -> Self {
        Self { matrix }
    }

    /// Half-wave rotation exchanging Up and Down.
    pub const fn rotate90() -> Self {
        let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        Self::new([[z, o], [o, z]])
    }

    pub const fn hadamard() -> Self {
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let m = Complex64::new(-FRAC_1_SQRT_2, 0.0);
        Self::new([[h, h], [h, m]])
    }

    /// Sign flip on Down.
    pub const fn phase_flip() -> Self {
        let (o, z) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        Self::new([[o, z], [z, Complex64::new(-1.0, 0.0)]])
    }

    pub fn element(&self, out: Spin, input: Spin) -> Amplitude {
        self.matrix[out.index()][input.index()]
    }
}

impl PureState {
    /// Applies `gate` to the electron in `mode`, which must hold exactly one
    /// electron in every term.
    pub fn apply_gate(&self, mode: &ModeLabel, gate: &SpinGate) -> Result<PureState> {
        self.require_mode(mode)?;
        let mut terms = BTreeMap::new();
        for (config, amp) in self.raw_terms() {
            let spin = config.single_spin(mode)?;
            for out in Spin::ALL {
                let coeff = gate.element(out, spin);
                if coeff == Complex64::default() {
                    continue;
                }
                let next = if out == spin {
                    config.clone()
                } else {
                    config.with_spin(mode, out)
                };
                *terms.entry(next).or_insert_with(Complex64::default) += coeff * amp;
            }
        }
        self.with_terms(terms)
    }

    pub fn rotate90(&self, mode: &ModeLabel) -> Result<PureState> {
        self.apply_gate(mode, &SpinGate::rotate90())
    }

    pub fn hadamard(&self, mode: &ModeLabel) -> Result<PureState> {
        self.apply_gate(mode, &SpinGate::hadamard())
    }

    pub fn phase_flip(&self, mode: &ModeLabel) -> Result<PureState> {
        self.apply_gate(mode, &SpinGate::phase_flip())
    }
}

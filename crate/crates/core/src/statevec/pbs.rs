use std::collections::BTreeMap;

use super::{BasisConfig, ModeLabel, PureState, Result, Slot, Spin, StateError};

/// Two-port polarizing beam splitter given by an explicit routing table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PbsSpec {
    inputs: [ModeLabel; 2],
    outputs: [ModeLabel; 2],
    routing: BTreeMap<(ModeLabel, Spin), ModeLabel>,
}

impl PbsSpec {
    /// Validates that the routing is total over both inputs and both spins, that
    /// every target is an output, and that electrons of equal spin arriving from
    /// different inputs leave through different outputs.
    pub fn new(
        inputs: [ModeLabel; 2],
        outputs: [ModeLabel; 2],
        routing: impl IntoIterator<Item = ((ModeLabel, Spin), ModeLabel)>,
    ) -> Result<Self> {
        let invalid = |msg: String| Err(StateError::InvalidSplitter(msg));
        if inputs[0].name() == inputs[1].name() || outputs[0].name() == outputs[1].name() {
            return invalid("ports must be distinct".into());
        }
        if inputs
            .iter()
            .any(|i| outputs.iter().any(|o| o.name() == i.name()))
        {
            return invalid("a mode cannot be both input and output".into());
        }
        let routing: BTreeMap<_, _> = routing.into_iter().collect();
        for ((mode, _), target) in &routing {
            if !inputs.contains(mode) {
                return invalid(format!("`{mode}` is not an input"));
            }
            if !outputs.contains(target) {
                return invalid(format!("`{target}` is not an output"));
            }
        }
        for spin in Spin::ALL {
            let targets: Vec<_> = inputs
                .iter()
                .map(|i| routing.get(&(i.clone(), spin)))
                .collect();
            match (targets[0], targets[1]) {
                (Some(x), Some(y)) if x != y => {}
                (Some(_), Some(_)) => {
                    return invalid(format!("both {spin:?} inputs reach the same output"));
                }
                _ => return invalid(format!("routing for {spin:?} is incomplete")),
            }
        }
        Ok(Self {
            inputs,
            outputs,
            routing,
        })
    }

    /// Up electrons from `inputs[k]` are transmitted to `transmitted[k]`; Down
    /// electrons are reflected to the other output.
    pub fn polarizing(inputs: [ModeLabel; 2], transmitted: [ModeLabel; 2]) -> Result<Self> {
        let routing = [
            ((inputs[0].clone(), Spin::Up), transmitted[0].clone()),
            ((inputs[0].clone(), Spin::Down), transmitted[1].clone()),
            ((inputs[1].clone(), Spin::Up), transmitted[1].clone()),
            ((inputs[1].clone(), Spin::Down), transmitted[0].clone()),
        ];
        Self::new(inputs, transmitted, routing)
    }

    pub fn inputs(&self) -> &[ModeLabel; 2] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[ModeLabel; 2] {
        &self.outputs
    }

    pub fn route(&self, mode: &ModeLabel, spin: Spin) -> Option<&ModeLabel> {
        self.routing.get(&(mode.clone(), spin))
    }
}

impl PureState {
    /// Routes every electron in the splitter's input modes to its output mode.
    /// Spins and amplitudes are untouched; other modes pass through.
    pub fn apply_pbs(&self, pbs: &PbsSpec) -> Result<PureState> {
        for input in pbs.inputs() {
            self.require_mode(input)?;
        }
        let modes = self.registry_with(pbs.outputs())?;
        let mut terms = BTreeMap::new();
        for (config, amp) in self.raw_terms() {
            if let Some(out) = pbs.outputs().iter().find(|o| config.occupancy(o) > 0) {
                return Err(StateError::OutputOccupied(out.to_string()));
            }
            let slots = config
                .slots()
                .iter()
                .map(|s| match pbs.route(&s.mode, s.spin) {
                    Some(target) => Slot::new(target.clone(), s.spin),
                    None => s.clone(),
                });
            terms.insert(BasisConfig::new(slots)?, *amp);
        }
        PureState::assemble(terms, modes)
    }
}

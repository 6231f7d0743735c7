use thiserror::Error;

use super::Spin;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("state is not normalized: squared norm {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },

    #[error("amplitude is not finite")]
    NonFinite,

    #[error("state has no terms")]
    Empty,

    #[error("mode label `{0}` is used more than once")]
    DuplicateMode(String),

    #[error("mode `{0}` is not part of this state")]
    UnknownMode(String),

    #[error("two electrons occupy the same slot ({mode}, {spin:?})")]
    Pauli { mode: String, spin: Spin },

    #[error("terms hold different numbers of electrons ({0} vs {1})")]
    ParticleNumberMismatch(usize, usize),

    #[error("mode `{mode}` holds {found} electrons in some term, expected exactly one")]
    Occupancy { mode: String, found: usize },

    #[error("output mode `{0}` is already occupied")]
    OutputOccupied(String),

    #[error("invalid beam splitter: {0}")]
    InvalidSplitter(String),

    #[error("requested branch has probability {probability:e}")]
    ZeroProbabilityBranch { probability: f64 },
}

//! Exact simulation of charge-detection entanglement concentration for electron
//! spin pairs, with closed-form yield analysis and a seeded Monte Carlo harness.

pub mod analysis;
pub mod cli;
pub mod protocol;
pub mod statevec;

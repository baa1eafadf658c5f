//! Discrete memoryless channels, additive prime-field channels and Markov chains of channels.

mod additive;
mod chain;
mod dmc;

pub use additive::{recover_noise, AdditiveChannel};
pub use chain::{joint_from_chain, joint_from_chain_capped, MarkovChainSpec, Stage};
pub use dmc::Dmc;

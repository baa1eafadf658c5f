//! Simulation toolkit for strong coordination of two nodes over a noisy channel.
//!
//! Node X observes an i.i.d. source, node Y must produce actions whose joint
//! law with the source matches a target pmf, and the only link is a discrete
//! memoryless channel. The crate provides the probability primitives, the
//! nested random codebooks and exact induced pmfs of the joint
//! coordination-channel scheme, the separation-based baseline with noise
//! recovery and extraction, and the achievable rate regions of both schemes
//! together with their binary example.
//!
//! Core types are generic over the scalar through [`Real`], implemented for
//! `f32` and `f64`. Aliases such as [`Pmf64`] fix the common `f64` case.
//! All logarithms are base 2.

pub mod channel;
pub mod codebook;
pub mod error;
pub mod joint;
pub mod prob;
pub mod regions;
pub mod rng;
pub mod scalar;
pub mod separate;

pub use channel::{AdditiveChannel, Dmc, MarkovChainSpec};
pub use codebook::{generate_nested, CodebookPair, IndexTriple, RateSpec};
pub use error::{Error, Result};
pub use joint::{AlliedSystem, JointDesign};
pub use prob::{Alphabet, JointPmf, Pmf, SymbolSequence};
pub use scalar::Real;
pub use separate::{ExtractorSpec, SeparateSystem};

pub type Pmf64 = Pmf<f64>;
pub type JointPmf64 = JointPmf<f64>;
pub type Dmc64 = Dmc<f64>;
pub type AdditiveChannel64 = AdditiveChannel<f64>;
pub type JointDesign64 = JointDesign<f64>;
pub type AlliedSystem64 = AlliedSystem<f64>;
pub type SeparateSystem64 = SeparateSystem<f64>;
pub type CodebookPair64 = CodebookPair<f64>;

pub type Pmf32 = Pmf<f32>;
pub type JointPmf32 = JointPmf<f32>;
pub type Dmc32 = Dmc<f32>;
pub type AdditiveChannel32 = AdditiveChannel<f32>;
pub type JointDesign32 = JointDesign<f32>;
pub type AlliedSystem32 = AlliedSystem<f32>;
pub type SeparateSystem32 = SeparateSystem<f32>;
pub type CodebookPair32 = CodebookPair<f32>;

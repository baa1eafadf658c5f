//! Separation-based scheme: noiseless coordination over `U`, random channel
//! coding of the index over an additive channel, noise recovery and extraction.

mod extract;
mod lemma4;
mod system;

pub use extract::{extract, ExtractorSpec, ToeplitzMatrix};
pub use lemma4::{lemma4_verify, lemma4_verify_channel, Lemma4Report, LEAK_HASH_BITS, LEAK_HASH_SEED};
pub use system::{separate_roundtrip, separate_simulate, ChannelCode, SeparateCounts, SeparateRecord, SeparateSystem};

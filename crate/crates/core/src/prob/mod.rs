//! Finite-alphabet probability: pmfs, joint tables, information measures and typicality.

mod alphabet;
mod info;
mod pmf;
mod typical;

pub(crate) use alphabet::rank;
pub use alphabet::{counting_function, Alphabet, Symbol, SymbolSequence};
pub use info::{
    binary_entropy, conditional_entropy, conditional_mutual_information, entropy, inverse_binary_entropy,
    joint_entropy, kl_divergence, mutual_information, mutual_information_between, total_variation,
};
pub(crate) use info::{entropy_of, h2, tv_slices};
pub(crate) use pmf::check_cap;
pub use pmf::{product_pmf, product_pmf_capped, sequence_pmf, JointPmf, Pmf, ProbTable, DEFAULT_TABLE_CAP};
pub(crate) use typical::counts_typical;
pub use typical::{is_strongly_typical, is_typical_sequence};

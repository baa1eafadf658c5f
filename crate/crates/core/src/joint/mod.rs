//! Joint coordination-channel scheme: allied-problem simulation, typicality
//! decoding, exact induced pmfs and the Bayes-inverted coordination scheme.

mod coordinate;
mod design;
mod induced;
mod record;
mod system;

pub use coordinate::{
    allied_decode_errors, allied_simulate, bayes_index_selector, coordination_simulate, index_posterior,
    SimulationCounts, MAX_REJECTION_RATE,
};
pub use design::{axis, info_terms, InfoTerms, JointDesign};
pub use induced::{
    coordination_pmf, ideal_pmf, ideal_pmf_capped, independence_gap, induced_pmfs, induced_pmfs_capped,
    resolvability_gap, sequence_target, triangle_terms, xj_joint, y_law_given_index, InducedPmfs, TriangleTerms,
};
pub use record::{JointExperimentRecord, SeriesPoint, DECODER_POLICY};
pub use system::{allied_sample, typicality_decode, AlliedRecord, AlliedSystem, DecodeOutcome};

use crate::error::Result;
use crate::scalar::Real;

/// Minimum local randomness rates `(rho1, rho2)` of the joint scheme.
///
/// `rho1 = Ra + Rc - I(X;AC)`, floored at zero, and `rho2 = H(Y|BC)`.
pub fn local_randomness_bounds<R: Real>(sys: &AlliedSystem<R>) -> Result<(f64, f64)> {
    let terms = sys.design().info_terms()?;
    let rates = sys.codebook().rates();
    Ok(((rates.ra + rates.rc - terms.i_x_ac).max(0.0), terms.h_y_bc))
}

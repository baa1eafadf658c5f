use serde::{Deserialize, Serialize};

use crate::codebook::RateSpec;

/// Summary of one per-seed statistic at one blocklength.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesPoint {
    pub n: usize,
    pub rates: RateSpec,
    pub mean: f64,
    pub std_dev: f64,
    pub per_seed: Vec<f64>,
}

impl SeriesPoint {
    pub fn from_samples(n: usize, rates: RateSpec, per_seed: Vec<f64>) -> Self {
        let m = per_seed.len().max(1) as f64;
        let mean = per_seed.iter().sum::<f64>() / m;
        let var = per_seed.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / m;
        SeriesPoint {
            n,
            rates,
            mean,
            std_dev: var.sqrt(),
            per_seed,
        }
    }
}

/// JSON record of a joint-scheme experiment over an explicit seed list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointExperimentRecord {
    pub experiment: String,
    pub seeds: Vec<u64>,
    pub eps_typ: f64,
    /// How the decoder resolves an ambiguous or empty candidate set.
    pub decoder_policy: String,
    pub gap_statistics: Vec<SeriesPoint>,
    pub decode_error_rates: Vec<SeriesPoint>,
}

/// Description stored in every record produced with this decoder.
pub const DECODER_POLICY: &str = "unique typical candidate; otherwise uniform among maximum-likelihood \
indices of the candidate set, or of all indices when the candidate set is empty";

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::extract::ExtractorSpec;
use super::system::{noise_costs, ChannelCode, SeparateSystem};
use crate::channel::AdditiveChannel;
use crate::error::{Error, Result};
use crate::prob::entropy_of;
use crate::rng::{sample_index, stream};
use crate::scalar::Real;

/// Output bits of the hash used by the leakage diagnostic (8 buckets).
pub const LEAK_HASH_BITS: usize = 3;

/// Seed of the leakage hash, shared by all codebook seeds so counts can be pooled.
pub const LEAK_HASH_SEED: u64 = 0x1ea4_0000;

/// Empirical noise-recovery statistics of the separation scheme's channel code.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma4Report {
    pub field_size: usize,
    pub m: usize,
    /// Channel-code rate in index bits per channel use.
    pub rate: f64,
    pub trials: u64,
    pub seeds: Vec<u64>,
    /// Mean over seeds of the frequency of `Z^m != Zhat^m`.
    pub p_z_mismatch: f64,
    pub p_z_mismatch_per_seed: Vec<f64>,
    /// Mean over seeds of the frequency of `Ihat != I`.
    pub decode_error_rate: f64,
    /// Plug-in single-letter entropy of `Zhat`, pooled over trials and seeds.
    pub entropy_rate_est: f64,
    /// `H(Z)` of the channel noise.
    pub noise_entropy: f64,
    /// Plug-in `I(hash(Zhat^m); (I, Ihat))` pooled over seeds; `None` for `q != 2`.
    pub mi_leak_est: Option<f64>,
    /// `log2 q - H(Z)`, the mutual information of the channel under uniform input.
    pub channel_information: f64,
    /// Set when `rate >= channel_information`.
    pub rate_warning: Option<String>,
    pub caveats: Vec<String>,
}

/// Runs the channel-coding half of the separation scheme.
///
/// For every seed a fresh code of `2^{m rate}` uniform words is drawn; each
/// trial sends a uniform index, ML-decodes it and recovers the noise.
pub fn lemma4_verify_channel<R: Real>(
    channel: &AdditiveChannel<R>,
    m: usize,
    rate: f64,
    trials: u64,
    seeds: &[u64],
) -> Result<Lemma4Report> {
    if trials == 0 || seeds.is_empty() {
        return Err(Error::Domain("at least one trial and one seed are required".into()));
    }
    if m < LEAK_HASH_BITS {
        return Err(Error::Domain(format!(
            "m = {m} is below the {LEAK_HASH_BITS}-bit leakage hash"
        )));
    }
    let bits_real = rate * m as f64;
    if rate.is_nan() || rate < 0.0 || (bits_real - bits_real.round()).abs() > 1e-9 {
        return Err(Error::Specification(format!(
            "m * rate = {bits_real} must be a non-negative integer"
        )));
    }
    let bits = bits_real.round() as u32;
    if bits > 20 {
        return Err(Error::resource("channel code size", 1u128 << bits, 1 << 20));
    }
    let count = 1usize << bits;
    let q = channel.field_size();
    let capacity = (q as f64).log2() - channel.noise_entropy().as_f64();
    let rate_warning = (rate >= capacity)
        .then(|| format!("rate {rate} is not below I(A;B) = {capacity:.6}; noise recovery is not expected to succeed"));
    let cost = noise_costs(channel);
    let noise = channel.noise().probs().to_vec();
    let hash = (q == 2)
        .then(|| ExtractorSpec::new(LEAK_HASH_BITS, LEAK_HASH_SEED).matrix(m))
        .transpose()?;

    let mut letters = vec![0u64; q];
    let mut pair_buckets: BTreeMap<(usize, usize), [u64; 1 << LEAK_HASH_BITS]> = BTreeMap::new();
    let mut mismatch_rates = Vec::with_capacity(seeds.len());
    let mut error_rates = Vec::with_capacity(seeds.len());
    let qu = q as u32;
    let mut z = vec![0u32; m];
    let mut b = vec![0u32; m];
    for &seed in seeds {
        let code = ChannelCode::generate(q, count, m, seed)?;
        let mut rng = stream(seed, 2);
        let (mut mismatches, mut errors) = (0u64, 0u64);
        for _ in 0..trials {
            let i = rng.random_range(0..count);
            for ((zt, bt), &a) in z.iter_mut().zip(b.iter_mut()).zip(code.word(i)) {
                *zt = sample_index(&noise, &mut rng) as u32;
                *bt = (a + *zt) % qu;
            }
            let i_hat = code.ml_decode(&b, &cost);
            errors += (i_hat != i) as u64;
            let mut differs = false;
            let mut z_hat = Vec::with_capacity(m);
            for ((&bt, &a), &zt) in b.iter().zip(code.word(i_hat)).zip(&z) {
                let zh = (bt + qu - a) % qu;
                differs |= zh != zt;
                letters[zh as usize] += 1;
                z_hat.push(zh);
            }
            mismatches += differs as u64;
            if let Some(h) = &hash {
                let bucket = h
                    .apply(&z_hat)
                    .iter()
                    .fold(0usize, |acc, &bit| (acc << 1) | bit as usize);
                pair_buckets.entry((i, i_hat)).or_insert([0; 1 << LEAK_HASH_BITS])[bucket] += 1;
            }
        }
        mismatch_rates.push(mismatches as f64 / trials as f64);
        error_rates.push(errors as f64 / trials as f64);
    }

    let total = letters.iter().sum::<u64>() as f64;
    let letter_freq: Vec<f64> = letters.iter().map(|&c| c as f64 / total).collect();
    let mi_leak_est = hash.map(|_| plug_in_mi(&pair_buckets));
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    Ok(Lemma4Report {
        field_size: q,
        m,
        rate,
        trials,
        seeds: seeds.to_vec(),
        p_z_mismatch: mean(&mismatch_rates),
        p_z_mismatch_per_seed: mismatch_rates,
        decode_error_rate: mean(&error_rates),
        entropy_rate_est: entropy_of(&letter_freq),
        noise_entropy: channel.noise_entropy().as_f64(),
        mi_leak_est,
        channel_information: capacity,
        rate_warning,
        caveats: caveats(q),
    })
}

/// [`lemma4_verify_channel`] with the channel, block length and code size of `sys`.
pub fn lemma4_verify<R: Real>(sys: &SeparateSystem<R>, trials: u64, seeds: &[u64]) -> Result<Lemma4Report> {
    let bits = (sys.channel_code().len() as f64).log2();
    lemma4_verify_channel(sys.channel(), sys.m(), bits / sys.m() as f64, trials, seeds)
}

fn caveats(q: usize) -> Vec<String> {
    let mut out = vec![
        "indices are drawn uniformly; the coordination encoder's index law is only close to uniform".to_string(),
        "entropy_rate_est is the plug-in single-letter entropy, not the block entropy of Zhat^m".to_string(),
    ];
    if q == 2 {
        out.push(format!(
            "mi_leak_est measures leakage through one fixed {LEAK_HASH_BITS}-bit linear hash of Zhat^m; \
             it is a lower-bound-style diagnostic and carries plug-in bias"
        ));
    } else {
        out.push("mi_leak_est needs a binary field and is not computed".to_string());
    }
    out
}

/// Plug-in mutual information between the pair key and the bucket.
fn plug_in_mi(table: &BTreeMap<(usize, usize), [u64; 1 << LEAK_HASH_BITS]>) -> f64 {
    let mut bucket_totals = [0u64; 1 << LEAK_HASH_BITS];
    let mut total = 0u64;
    let mut conditional = 0.0;
    for row in table.values() {
        let row_total: u64 = row.iter().sum();
        total += row_total;
        for (t, &c) in bucket_totals.iter_mut().zip(row) {
            *t += c;
        }
        let freq: Vec<f64> = row.iter().map(|&c| c as f64 / row_total as f64).collect();
        conditional += row_total as f64 * entropy_of(&freq);
    }
    if total == 0 {
        return 0.0;
    }
    let marginal: Vec<f64> = bucket_totals.iter().map(|&c| c as f64 / total as f64).collect();
    (entropy_of(&marginal) - conditional / total as f64).max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn noiseless_channel_reports_zero() {
        let ch = AdditiveChannel::<f64>::noiseless(2).unwrap();
        let r = lemma4_verify_channel(&ch, 8, 0.25, 200, &[1, 2]).unwrap();
        assert_eq!(r.p_z_mismatch, 0.0);
        assert_eq!(r.entropy_rate_est, 0.0);
        assert_eq!(r.mi_leak_est, Some(0.0));
        assert!(r.rate_warning.is_none());
    }

    #[test]
    fn rejects_fractional_code_size() {
        let ch = AdditiveChannel::<f64>::binary(0.1).unwrap();
        assert!(matches!(
            lemma4_verify_channel(&ch, 10, 0.25, 10, &[0]),
            Err(Error::Specification(_))
        ));
    }

    #[test]
    fn warns_above_capacity() {
        let ch = AdditiveChannel::<f64>::binary(0.4).unwrap();
        let r = lemma4_verify_channel(&ch, 8, 0.5, 10, &[0]).unwrap();
        assert!(r.rate_warning.is_some());
    }
}

use super::alphabet::SymbolSequence;
use super::pmf::JointPmf;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Whether the aligned sequences are jointly `eps`-strongly letter-typical for `joint`.
///
/// Every joint symbol `w` must satisfy `|N(w)/n - P(w)| <= eps * P(w)`; in
/// particular symbols outside the support may not occur at all.
pub fn is_strongly_typical<R: Real>(seqs: &[&SymbolSequence], joint: &JointPmf<R>, eps: R) -> Result<bool> {
    if seqs.len() != joint.num_axes() {
        return Err(Error::ShapeMismatch(format!(
            "{} sequences for a joint pmf with {} axes",
            seqs.len(),
            joint.num_axes()
        )));
    }
    if eps.is_nan() || eps < R::zero() {
        return Err(Error::Domain(format!("typicality slack {eps} must be non-negative")));
    }
    let n = seqs[0].len();
    if n == 0 {
        return Err(Error::Domain("typicality needs sequences of length >= 1".into()));
    }
    for (s, a) in seqs.iter().zip(joint.axes()) {
        if s.len() != n {
            return Err(Error::ShapeMismatch(format!("lengths {} and {n} differ", s.len())));
        }
        if s.alphabet() != *a {
            return Err(Error::ShapeMismatch(
                "sequence alphabet differs from its joint axis".into(),
            ));
        }
    }
    let mut counts = vec![0usize; joint.probs().len()];
    let dims = joint.dims_vec();
    let mut letter = vec![0u32; seqs.len()];
    for t in 0..n {
        for (slot, s) in letter.iter_mut().zip(seqs) {
            *slot = s.symbols()[t];
        }
        let idx = letter
            .iter()
            .zip(&dims)
            .fold(0usize, |acc, (&s, &d)| acc * d + s as usize);
        counts[idx] += 1;
    }
    Ok(counts_typical(&counts, joint.probs(), n, eps))
}

/// Typicality test on a precomputed joint-type count table.
pub(crate) fn counts_typical<R: Real>(counts: &[usize], probs: &[R], n: usize, eps: R) -> bool {
    let nr = R::of_usize(n);
    counts.iter().zip(probs).all(|(&c, &p)| {
        if p <= R::zero() {
            c == 0
        } else {
            (R::of_usize(c) / nr - p).abs() <= eps * p + R::cmp_tol()
        }
    })
}

/// Single-sequence typicality against a single-axis pmf.
pub fn is_typical_sequence<R: Real>(seq: &SymbolSequence, probs: &[R], eps: R) -> bool {
    let mut counts = vec![0usize; probs.len()];
    for &s in seq.symbols() {
        counts[s as usize] += 1;
    }
    !seq.is_empty() && counts_typical(&counts, probs, seq.len(), eps)
}

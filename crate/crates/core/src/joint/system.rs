use rand::Rng;
use serde::{Deserialize, Serialize};

use super::design::JointDesign;
use crate::channel::Dmc;
use crate::codebook::{draw_index_triple, CodebookPair, IndexTriple};
use crate::error::{Error, Result};
use crate::prob::{counts_typical, JointPmf, Pmf, SymbolSequence};
use crate::scalar::Real;

/// Log-likelihood slack under which two candidates count as tied.
const LIKELIHOOD_TIE: f64 = 1e-9;

/// A realized joint scheme for the allied problem: design factors, a nested
/// codebook drawn from them, and the decoder's typicality slack.
#[derive(Debug, Clone)]
pub struct AlliedSystem<R> {
    design: JointDesign<R>,
    codebook: CodebookPair<R>,
    eps_typ: R,
    p_x: Pmf<R>,
    p_bc: JointPmf<R>,
    p_b_given_c: Dmc<R>,
    py_given_ac: Dmc<R>,
}

impl<R: Real> AlliedSystem<R> {
    pub fn new(design: JointDesign<R>, codebook: CodebookPair<R>, eps_typ: R) -> Result<Self> {
        if codebook.c_alphabet() != design.c_alphabet() || codebook.a_alphabet() != design.a_alphabet() {
            return Err(Error::ShapeMismatch(
                "codebook alphabets differ from the design's C and A".into(),
            ));
        }
        if eps_typ.is_nan() || eps_typ < R::zero() {
            return Err(Error::Domain(format!(
                "typicality slack {eps_typ} must be non-negative"
            )));
        }
        Ok(AlliedSystem {
            p_x: design.p_x()?,
            p_bc: design.p_bc()?,
            p_b_given_c: design.p_b_given_c()?,
            py_given_ac: design.py_given_ac()?,
            design,
            codebook,
            eps_typ,
        })
    }

    pub fn design(&self) -> &JointDesign<R> {
        &self.design
    }
    pub fn codebook(&self) -> &CodebookPair<R> {
        &self.codebook
    }
    pub fn eps_typ(&self) -> R {
        self.eps_typ
    }
    pub fn n(&self) -> usize {
        self.codebook.n()
    }
    /// X-marginal of the design.
    pub fn p_x(&self) -> &Pmf<R> {
        &self.p_x
    }
    pub fn p_bc(&self) -> &JointPmf<R> {
        &self.p_bc
    }
    pub(crate) fn py_given_ac(&self) -> &Dmc<R> {
        &self.py_given_ac
    }

    /// Composite `(a, c)` letter index `c * |A| + a` for every position of `a_ijk`.
    pub(crate) fn ac_letters(&self, i: usize, j: usize, k: usize) -> Vec<u32> {
        let na = self.design.a_alphabet().size() as u32;
        self.codebook
            .a_word(i, j, k)
            .iter()
            .zip(self.codebook.c_word(i, j))
            .map(|(&a, &c)| c * na + a)
            .collect()
    }

    /// Draws `y` letter-wise from `P_{Y|BC}(. | b, c)`.
    pub(crate) fn generate_y<G: Rng + ?Sized>(&self, b: &[u32], c: &[u32], rng: &mut G) -> Vec<u32> {
        let nb = self.design.b_alphabet().size() as u32;
        let inputs: Vec<u32> = b.iter().zip(c).map(|(&b, &c)| c * nb + b).collect();
        self.design.py_given_bc.transmit_raw(&inputs, rng)
    }
}

/// Result of decoding the index `i` from a channel output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecodeOutcome {
    /// Indices whose c-word is jointly typical with the channel output.
    pub candidate_set: Vec<usize>,
    /// The unique candidate, or `None` when decoding failed.
    pub decoded: Option<usize>,
    /// On failure, the maximum-likelihood indices the decoder draws from uniformly.
    pub fallback: Vec<usize>,
}

impl DecodeOutcome {
    pub fn is_failure(&self) -> bool {
        self.decoded.is_none()
    }

    /// Indices the decoder may output, each equally likely.
    pub fn support(&self) -> &[usize] {
        match &self.decoded {
            Some(i) => std::slice::from_ref(i),
            None => &self.fallback,
        }
    }

    /// Draws the decoder's estimate.
    pub fn estimate<G: Rng + ?Sized>(&self, rng: &mut G) -> usize {
        match self.decoded {
            Some(i) => i,
            None => self.fallback[rng.random_range(0..self.fallback.len())],
        }
    }
}

/// Typicality decoder for `i` given the channel output `b` and the shared index `j`.
///
/// The candidate set holds every `i` with `(b, c_ij)` strongly typical for
/// `P_BC`. A unique candidate is the decoded index. Otherwise decoding fails
/// and the estimate is drawn uniformly among the candidates with the largest
/// likelihood `P_{B|C}(b | c_ij)`; an empty candidate set widens that search
/// to every index.
pub fn typicality_decode<R: Real>(b: &SymbolSequence, j: usize, sys: &AlliedSystem<R>) -> Result<DecodeOutcome> {
    let n = sys.n();
    if b.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "channel output length {} != n = {n}",
            b.len()
        )));
    }
    if b.alphabet() != sys.design.b_alphabet() {
        return Err(Error::ShapeMismatch("channel output alphabet differs from B".into()));
    }
    let (ni, nj, _) = sys.codebook.sizes();
    if j >= nj {
        return Err(Error::Domain(format!("index j = {j} outside 0..{nj}")));
    }
    Ok(decode_raw(b.symbols(), j, sys, ni))
}

pub(crate) fn decode_raw<R: Real>(b: &[u32], j: usize, sys: &AlliedSystem<R>, ni: usize) -> DecodeOutcome {
    let n = b.len();
    let nc = sys.design.c_alphabet().size();
    let probs = sys.p_bc.probs();
    let mut counts = vec![0usize; probs.len()];
    let mut candidate_set = Vec::new();
    for i in 0..ni {
        counts.fill(0);
        for (&bs, &cs) in b.iter().zip(sys.codebook.c_word(i, j)) {
            counts[bs as usize * nc + cs as usize] += 1;
        }
        if counts_typical(&counts, probs, n, sys.eps_typ) {
            candidate_set.push(i);
        }
    }
    if candidate_set.len() == 1 {
        return DecodeOutcome {
            decoded: Some(candidate_set[0]),
            candidate_set,
            fallback: Vec::new(),
        };
    }
    let pool: Vec<usize> = if candidate_set.is_empty() {
        (0..ni).collect()
    } else {
        candidate_set.clone()
    };
    let loglik = |i: usize| -> f64 {
        b.iter()
            .zip(sys.codebook.c_word(i, j))
            .map(|(&bs, &cs)| sys.p_b_given_c.prob(cs as usize, bs as usize).as_f64().log2())
            .sum()
    };
    let scores: Vec<f64> = pool.iter().map(|&i| loglik(i)).collect();
    let best = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let fallback = if best == f64::NEG_INFINITY {
        pool
    } else {
        pool.iter()
            .zip(&scores)
            .filter(|(_, &s)| s >= best - LIKELIHOOD_TIE)
            .map(|(&i, _)| i)
            .collect()
    };
    DecodeOutcome {
        candidate_set,
        decoded: None,
        fallback,
    }
}

/// One run of the allied scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct AlliedRecord {
    pub x: SymbolSequence,
    pub y: SymbolSequence,
    pub index: IndexTriple,
    pub b: SymbolSequence,
    pub decode: DecodeOutcome,
    /// Index actually used by Node Y.
    pub i_hat: usize,
}

impl AlliedRecord {
    pub fn decode_error(&self) -> bool {
        self.i_hat != self.index.i
    }
}

/// Samples uniform indices, generates `x`, sends `a_ijk` over the channel,
/// decodes and generates `y` from the decoded c-word.
pub fn allied_sample<R: Real, G: Rng + ?Sized>(sys: &AlliedSystem<R>, rng: &mut G) -> Result<AlliedRecord> {
    let index = draw_index_triple(sys.codebook.rates(), rng)?;
    let IndexTriple { i, j, k } = index;
    let ac = sys.ac_letters(i, j, k);
    let x = sys.design.px_given_ac.transmit_raw(&ac, rng);
    let b = sys.design.channel.transmit_raw(sys.codebook.a_word(i, j, k), rng);
    let decode = decode_raw(&b, j, sys, sys.codebook.sizes().0);
    let i_hat = decode.estimate(rng);
    let y = sys.generate_y(&b, sys.codebook.c_word(i_hat, j), rng);
    Ok(AlliedRecord {
        x: SymbolSequence::from_parts_unchecked(sys.design.x_alphabet(), x),
        y: SymbolSequence::from_parts_unchecked(sys.design.y_alphabet(), y),
        index,
        b: SymbolSequence::from_parts_unchecked(sys.design.b_alphabet(), b),
        decode,
        i_hat,
    })
}

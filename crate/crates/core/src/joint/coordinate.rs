//! The coordination scheme obtained by inverting the allied scheme at Node X.

use std::collections::BTreeMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::system::{allied_sample, decode_raw, AlliedSystem};
use crate::error::{Error, Result};
use crate::prob::{rank, Alphabet, JointPmf, SymbolSequence};
use crate::rng::sample_index;
use crate::scalar::Real;

/// Unnormalized posterior weights `P(x | a_ijk, c_ij)` over `(i, k)`, ordered `i * |K| + k`.
fn posterior_weights<R: Real>(sys: &AlliedSystem<R>, x: &[u32], j: usize) -> Vec<R> {
    let (ni, _, nk) = sys.codebook().sizes();
    let d = sys.design();
    let na = d.a_alphabet().size();
    let mut w = Vec::with_capacity(ni * nk);
    for i in 0..ni {
        let c = sys.codebook().c_word(i, j);
        for k in 0..nk {
            let a = sys.codebook().a_word(i, j, k);
            let mut p = R::one();
            for t in 0..x.len() {
                p *= d.px_given_ac.prob(c[t] as usize * na + a[t] as usize, x[t] as usize);
                if p == R::zero() {
                    break;
                }
            }
            w.push(p);
        }
    }
    w
}

fn check_xj<R: Real>(sys: &AlliedSystem<R>, x: &SymbolSequence, j: usize) -> Result<()> {
    if x.len() != sys.n() || x.alphabet() != sys.design().x_alphabet() {
        return Err(Error::ShapeMismatch("x must be a length-n sequence over X".into()));
    }
    let nj = sys.codebook().sizes().1;
    if j >= nj {
        return Err(Error::Domain(format!("index j = {j} outside 0..{nj}")));
    }
    Ok(())
}

/// Exact posterior of `(i, k)` given `(x, j)` under the induced joint,
/// ordered `i * |K| + k`.
///
/// Decoding acts only on the Y side, so the posterior is the same whether or
/// not the decoder is taken into account. A pair `(x, j)` of zero induced
/// probability is a degenerate input.
pub fn index_posterior<R: Real>(sys: &AlliedSystem<R>, x: &SymbolSequence, j: usize) -> Result<Vec<R>> {
    check_xj(sys, x, j)?;
    let mut w = posterior_weights(sys, x.symbols(), j);
    let total: R = w.iter().copied().sum();
    if total <= R::zero() {
        return Err(Error::Degenerate(format!(
            "(x, j = {j}) lies outside the support of the induced joint"
        )));
    }
    for v in w.iter_mut() {
        *v /= total;
    }
    Ok(w)
}

/// Draws `(i, k)` from the posterior given `(x, j)`.
pub fn bayes_index_selector<R: Real, G: Rng + ?Sized>(
    sys: &AlliedSystem<R>,
    x: &SymbolSequence,
    j: usize,
    rng: &mut G,
) -> Result<(usize, usize)> {
    let post = index_posterior(sys, x, j)?;
    let nk = sys.codebook().sizes().2;
    let idx = sample_index(&post, rng);
    Ok((idx / nk, idx % nk))
}

/// Counts of `(x, y)` sequence pairs and decoding errors from a Monte Carlo run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationCounts {
    pub n: usize,
    pub x_size: usize,
    pub y_size: usize,
    /// Nonzero counts keyed by `rank(x) * |Y|^n + rank(y)`.
    pub counts: BTreeMap<u64, u64>,
    pub trials: u64,
    pub decode_errors: u64,
    /// Draws of `(x, j)` discarded for lying outside the induced support.
    pub rejections: u64,
}

impl SimulationCounts {
    pub fn new(n: usize, x: Alphabet, y: Alphabet) -> Result<Self> {
        let cells = (x.size() as u128)
            .saturating_pow(n as u32)
            .saturating_mul((y.size() as u128).saturating_pow(n as u32));
        crate::prob::check_cap("(X^n, Y^n) sequence index", cells, usize::MAX)?;
        Ok(SimulationCounts {
            n,
            x_size: x.size(),
            y_size: y.size(),
            counts: BTreeMap::new(),
            trials: 0,
            decode_errors: 0,
            rejections: 0,
        })
    }

    pub(crate) fn record(&mut self, x: &[u32], y: &[u32], error: bool) {
        let ys = self.y_size.pow(self.n as u32);
        let idx = rank(self.x_size, x) * ys + rank(self.y_size, y);
        *self.counts.entry(idx as u64).or_insert(0) += 1;
        self.trials += 1;
        self.decode_errors += error as u64;
    }

    /// Adds another run's counts; runs must share the same shape.
    pub fn merge(&mut self, other: &SimulationCounts) -> Result<()> {
        if (self.n, self.x_size, self.y_size) != (other.n, other.x_size, other.y_size) {
            return Err(Error::ShapeMismatch("merging counts of different shapes".into()));
        }
        for (&k, &c) in &other.counts {
            *self.counts.entry(k).or_insert(0) += c;
        }
        self.trials += other.trials;
        self.decode_errors += other.decode_errors;
        self.rejections += other.rejections;
        Ok(())
    }

    pub fn decode_error_rate(&self) -> f64 {
        if self.trials == 0 {
            0.0
        } else {
            self.decode_errors as f64 / self.trials as f64
        }
    }

    pub fn rejection_rate(&self) -> f64 {
        let attempts = self.trials + self.rejections;
        if attempts == 0 {
            0.0
        } else {
            self.rejections as f64 / attempts as f64
        }
    }

    /// Empirical pmf over `[x_1 .. x_n, y_1 .. y_n]`.
    ///
    /// The dense table is subject to the default table cap.
    pub fn empirical<R: Real>(&self) -> Result<JointPmf<R>> {
        if self.trials == 0 {
            return Err(Error::Degenerate("no trials recorded".into()));
        }
        let cells = (self.x_size as u128).pow(self.n as u32) * (self.y_size as u128).pow(self.n as u32);
        crate::prob::check_cap("empirical (X^n, Y^n) table", cells, crate::prob::DEFAULT_TABLE_CAP)?;
        let t = R::of(self.trials as f64);
        let mut probs = vec![R::zero(); cells as usize];
        for (&k, &c) in &self.counts {
            probs[k as usize] = R::of(c as f64) / t;
        }
        let mut axes = vec![Alphabet::new(self.x_size)?; self.n];
        axes.extend(std::iter::repeat_n(Alphabet::new(self.y_size)?, self.n));
        JointPmf::new(axes, probs)
    }
}

/// Largest tolerated share of discarded `(x, j)` draws.
pub const MAX_REJECTION_RATE: f64 = 0.01;

/// Runs the coordination scheme `trials` times.
///
/// Each trial draws `x ~ P_X^n` and `j` uniform, selects `(i, k)` from the
/// posterior, sends `a_ijk`, decodes and generates `y`. Draws of `(x, j)`
/// outside the induced support are re-drawn and counted; the run fails once
/// they exceed [`MAX_REJECTION_RATE`] of all draws.
pub fn coordination_simulate<R: Real, G: Rng + ?Sized>(
    sys: &AlliedSystem<R>,
    trials: u64,
    rng: &mut G,
) -> Result<SimulationCounts> {
    if trials == 0 {
        return Err(Error::Domain("at least one trial is required".into()));
    }
    let d = sys.design();
    let mut out = SimulationCounts::new(sys.n(), d.x_alphabet(), d.y_alphabet())?;
    let (ni, nj, nk) = sys.codebook().sizes();
    let max_rejections = (trials as f64 * MAX_REJECTION_RATE / (1.0 - MAX_REJECTION_RATE)).floor() as u64;
    let px = sys.p_x().probs().to_vec();
    let mut x = vec![0u32; sys.n()];
    while out.trials < trials {
        for slot in x.iter_mut() {
            *slot = sample_index(&px, rng) as u32;
        }
        let j = rng.random_range(0..nj);
        let w = posterior_weights(sys, &x, j);
        let total: R = w.iter().copied().sum();
        if total <= R::zero() {
            out.rejections += 1;
            if out.rejections > max_rejections {
                return Err(Error::Degenerate(format!(
                    "{} of {} draws of (x, j) fell outside the induced support",
                    out.rejections,
                    out.rejections + out.trials
                )));
            }
            continue;
        }
        let post: Vec<R> = w.into_iter().map(|v| v / total).collect();
        let idx = sample_index(&post, rng);
        let (i, k) = (idx / nk, idx % nk);
        let b = d.channel.transmit_raw(sys.codebook().a_word(i, j, k), rng);
        let i_hat = decode_raw(&b, j, sys, ni).estimate(rng);
        let y = sys.generate_y(&b, sys.codebook().c_word(i_hat, j), rng);
        out.record(&x, &y, i_hat != i);
    }
    Ok(out)
}

/// Runs the allied scheme `trials` times and tallies `(x, y)` and decoding errors.
pub fn allied_simulate<R: Real, G: Rng + ?Sized>(
    sys: &AlliedSystem<R>,
    trials: u64,
    rng: &mut G,
) -> Result<SimulationCounts> {
    let d = sys.design();
    let mut out = SimulationCounts::new(sys.n(), d.x_alphabet(), d.y_alphabet())?;
    for _ in 0..trials {
        let r = allied_sample(sys, rng)?;
        out.record(r.x.symbols(), r.y.symbols(), r.decode_error());
    }
    Ok(out)
}

/// Decoding-error count of the allied scheme without tallying actions.
pub fn allied_decode_errors<R: Real, G: Rng + ?Sized>(sys: &AlliedSystem<R>, trials: u64, rng: &mut G) -> Result<u64> {
    let (ni, nj, nk) = sys.codebook().sizes();
    let ch = &sys.design().channel;
    let mut errors = 0;
    for _ in 0..trials {
        let (i, j, k) = (
            rng.random_range(0..ni),
            rng.random_range(0..nj),
            rng.random_range(0..nk),
        );
        let b = ch.transmit_raw(sys.codebook().a_word(i, j, k), rng);
        if decode_raw(&b, j, sys, ni).estimate(rng) != i {
            errors += 1;
        }
    }
    Ok(errors)
}

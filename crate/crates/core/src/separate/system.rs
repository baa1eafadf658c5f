use rand::Rng;

use crate::channel::{recover_noise, AdditiveChannel, Dmc};
use crate::codebook::{generate_nested, RateSpec};
use crate::error::{Error, Result};
use crate::joint::{coordination_pmf, index_posterior, AlliedSystem, JointDesign, SimulationCounts};
use crate::prob::{conditional_mutual_information, Alphabet, JointPmf, SymbolSequence};
use crate::rng::{sample_index, stream};
use crate::scalar::Real;

/// Random channel code: `count` words of length `m`, letters uniform over `F_q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChannelCode {
    q: usize,
    m: usize,
    words: Vec<u32>,
}

impl ChannelCode {
    pub fn generate(q: usize, count: usize, m: usize, seed: u64) -> Result<Self> {
        if m == 0 || count == 0 {
            return Err(Error::Domain(
                "a channel code needs m >= 1 and at least one word".into(),
            ));
        }
        crate::prob::check_cap(
            "channel code letters",
            (count as u128) * m as u128,
            crate::prob::DEFAULT_TABLE_CAP,
        )?;
        // Stream 1 keeps the channel code independent of a coordination codebook on the same seed.
        let mut rng = stream(seed, 1);
        let words = (0..count * m).map(|_| rng.random_range(0..q as u32)).collect();
        Ok(ChannelCode { q, m, words })
    }

    pub fn len(&self) -> usize {
        self.words.len() / self.m
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn word(&self, i: usize) -> &[u32] {
        &self.words[i * self.m..(i + 1) * self.m]
    }

    pub fn sequence(&self, i: usize) -> SymbolSequence {
        SymbolSequence::from_parts_unchecked(
            Alphabet::new(self.q).expect("field size is positive"),
            self.word(i).to_vec(),
        )
    }

    /// Maximum-likelihood index for output `b` under additive noise with
    /// per-symbol cost `-log2 P_Z(z)`; ties go to the lowest index.
    pub fn ml_decode(&self, b: &[u32], cost: &[f64]) -> usize {
        let q = self.q as u32;
        let mut best = (f64::INFINITY, 0usize);
        for i in 0..self.len() {
            let mut total = 0.0;
            for (&bs, &a) in b.iter().zip(self.word(i)) {
                total += cost[((bs + q - a) % q) as usize];
                if total > best.0 {
                    break;
                }
            }
            if total < best.0 {
                best = (total, i);
            }
        }
        best.1
    }
}

pub(crate) fn noise_costs<R: Real>(channel: &AdditiveChannel<R>) -> Vec<f64> {
    channel
        .noise()
        .probs()
        .iter()
        .map(|&p| {
            if p > R::zero() {
                -p.as_f64().log2()
            } else {
                f64::INFINITY
            }
        })
        .collect()
}

/// Separation-based scheme: a noiseless coordination code over `U`, followed
/// by a random channel code for the index `I` over an additive channel.
#[derive(Debug, Clone)]
pub struct SeparateSystem<R> {
    coordination: AlliedSystem<R>,
    py_given_u: Dmc<R>,
    channel: AdditiveChannel<R>,
    channel_code: ChannelCode,
    lambda: f64,
    cost: Vec<f64>,
}

/// One run of the separation scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparateRecord {
    pub i: usize,
    pub i_hat: usize,
    pub u_hat: SymbolSequence,
    pub y: SymbolSequence,
    pub z_true: SymbolSequence,
    pub z_hat: SymbolSequence,
}

impl<R: Real> SeparateSystem<R> {
    /// Builds the scheme for a coordination design over `(X, Y, U)`.
    ///
    /// `rates` fixes `n`, `Rc` and `Ro` of the coordination code (`Ra` must be
    /// zero); the channel code has `2^{nRc}` words of length `m = lambda n`.
    pub fn new(
        p_xyu: &JointPmf<R>,
        rates: RateSpec,
        channel: AdditiveChannel<R>,
        lambda: f64,
        seed: u64,
    ) -> Result<Self> {
        if p_xyu.num_axes() != 3 {
            return Err(Error::ShapeMismatch("coordination design needs axes (X, Y, U)".into()));
        }
        let cmi = conditional_mutual_information(p_xyu, &[0], &[1], &[2])?.as_f64();
        if cmi > 1e-9 {
            return Err(Error::Factorization(format!(
                "X - U - Y is not Markov: I(X;Y|U) = {cmi}"
            )));
        }
        if rates.ra != 0.0 {
            return Err(Error::Specification(
                "the coordination code has no k index; Ra must be 0".into(),
            ));
        }
        let m_real = lambda * rates.n as f64;
        if lambda.is_nan() || lambda <= 0.0 || (m_real - m_real.round()).abs() > 1e-9 {
            return Err(Error::Specification(format!(
                "m = lambda n = {m_real} must be a positive integer"
            )));
        }
        let m = m_real.round() as usize;
        let p_u = p_xyu.marginalize(&[2])?.to_pmf()?;
        let u = p_u.alphabet();
        let px_given_u = Dmc::conditional(p_xyu, &[2], &[0])?;
        let py_given_u = Dmc::conditional(p_xyu, &[2], &[1])?;
        // The coordination code as a joint-scheme design with C = A = B = U.
        let repeat = |d: &Dmc<R>| Dmc::new((0..u.size() * u.size()).map(|s| d.row(s / u.size()).to_vec()).collect());
        let design = JointDesign::new(
            p_u.clone(),
            Dmc::identity(u),
            repeat(&px_given_u)?,
            Dmc::identity(u),
            repeat(&py_given_u)?,
        )?;
        let codebook = generate_nested(&p_u, &Dmc::identity(u), rates, seed)?;
        let coordination = AlliedSystem::new(design, codebook, R::zero())?;
        let (ni, _, _) = rates.index_sizes()?;
        let channel_code = ChannelCode::generate(channel.field_size(), ni, m, seed)?;
        Ok(SeparateSystem {
            cost: noise_costs(&channel),
            coordination,
            py_given_u,
            channel,
            channel_code,
            lambda,
        })
    }

    pub fn coordination(&self) -> &AlliedSystem<R> {
        &self.coordination
    }
    pub fn channel(&self) -> &AdditiveChannel<R> {
        &self.channel
    }
    pub fn channel_code(&self) -> &ChannelCode {
        &self.channel_code
    }
    pub fn lambda(&self) -> f64 {
        self.lambda
    }
    pub fn n(&self) -> usize {
        self.coordination.n()
    }
    pub fn m(&self) -> usize {
        self.channel_code.m()
    }

    /// Analytic `(X^n, Y^n)` law of the coordination code alone (perfect channel).
    pub fn noiseless_pmf(&self) -> Result<JointPmf<R>> {
        coordination_pmf(&self.coordination)
    }

    fn roundtrip_raw<G: Rng + ?Sized>(&self, x: &SymbolSequence, j: usize, rng: &mut G) -> Result<SeparateRecord> {
        let post = index_posterior(&self.coordination, x, j)?;
        let i = sample_index(&post, rng);
        let a = self.channel_code.sequence(i);
        let (b, z_true) = self.channel.additive_transmit(&a, rng)?;
        let i_hat = self.channel_code.ml_decode(b.symbols(), &self.cost);
        let u_hat = self.coordination.codebook().c_sequence(i_hat, j);
        let y = self.py_given_u.transmit(&u_hat, rng)?;
        let z_hat = recover_noise(&b, &self.channel_code.sequence(i_hat), self.channel.field_size())?;
        Ok(SeparateRecord {
            i,
            i_hat,
            u_hat,
            y,
            z_true,
            z_hat,
        })
    }
}

/// Coordination-encodes `(x, j)`, sends the index over the channel,
/// ML-decodes it, generates `y` from the decoded U-word and recovers the noise.
pub fn separate_roundtrip<R: Real, G: Rng + ?Sized>(
    sys: &SeparateSystem<R>,
    x: &SymbolSequence,
    j: usize,
    rng: &mut G,
) -> Result<SeparateRecord> {
    sys.roundtrip_raw(x, j, rng)
}

/// Tallies of a separation-scheme simulation.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparateCounts {
    pub actions: SimulationCounts,
    /// Trials whose recovered noise differs from the true noise.
    pub noise_mismatches: u64,
}

/// Runs the separation scheme with `x ~ P_X^n`, `j` uniform, re-drawing
/// `(x, j)` outside the coordination code's support as the joint scheme does.
pub fn separate_simulate<R: Real, G: Rng + ?Sized>(
    sys: &SeparateSystem<R>,
    trials: u64,
    rng: &mut G,
) -> Result<SeparateCounts> {
    let d = sys.coordination.design();
    let mut actions = SimulationCounts::new(sys.n(), d.x_alphabet(), d.y_alphabet())?;
    let nj = sys.coordination.codebook().sizes().1;
    let max_rejections =
        (trials as f64 * crate::joint::MAX_REJECTION_RATE / (1.0 - crate::joint::MAX_REJECTION_RATE)).floor() as u64;
    let px = sys.coordination.p_x().probs().to_vec();
    let mut mismatches = 0;
    let mut done = 0;
    while done < trials {
        let x: Vec<u32> = (0..sys.n()).map(|_| sample_index(&px, rng) as u32).collect();
        let x = SymbolSequence::from_parts_unchecked(d.x_alphabet(), x);
        let j = rng.random_range(0..nj);
        let rec = match sys.roundtrip_raw(&x, j, rng) {
            Ok(r) => r,
            Err(Error::Degenerate(_)) => {
                actions.rejections += 1;
                if actions.rejections > max_rejections {
                    return Err(Error::Degenerate(format!(
                        "{} draws of (x, j) fell outside the coordination code's support",
                        actions.rejections
                    )));
                }
                continue;
            }
            Err(e) => return Err(e),
        };
        actions.record(x.symbols(), rec.y.symbols(), rec.i_hat != rec.i);
        mismatches += (rec.z_hat != rec.z_true) as u64;
        done += 1;
    }
    Ok(SeparateCounts {
        actions,
        noise_mismatches: mismatches,
    })
}

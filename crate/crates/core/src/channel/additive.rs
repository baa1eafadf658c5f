use rand::Rng;

use super::dmc::Dmc;
use crate::error::{Error, Result};
use crate::prob::{entropy, Alphabet, Pmf, SymbolSequence};
use crate::rng::sample_index;
use crate::scalar::Real;

/// Additive noise channel over the prime field `F_q`: `b = a + z mod q`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdditiveChannel<R> {
    field_size: usize,
    noise: Pmf<R>,
}

fn is_prime(q: usize) -> bool {
    q >= 2 && (2..).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d))
}

impl<R: Real> AdditiveChannel<R> {
    pub fn new(field_size: usize, noise: Pmf<R>) -> Result<Self> {
        if !is_prime(field_size) {
            return Err(Error::Unsupported(format!(
                "field size {field_size} is not prime; only prime fields are supported"
            )));
        }
        if noise.len() != field_size {
            return Err(Error::ShapeMismatch(format!(
                "noise pmf over {} symbols for a field of size {field_size}",
                noise.len()
            )));
        }
        Ok(AdditiveChannel { field_size, noise })
    }

    /// Binary channel with Bernoulli(`p`) noise, i.e. a BSC.
    pub fn binary(p: R) -> Result<Self> {
        Self::new(2, Pmf::bernoulli(p)?)
    }

    /// Noise-free channel over `F_q`.
    pub fn noiseless(field_size: usize) -> Result<Self> {
        let a = Alphabet::new(field_size)?;
        Self::new(field_size, Pmf::point_mass(a, 0)?)
    }

    /// Recognizes an additive structure in a general channel matrix.
    pub fn from_dmc(channel: &Dmc<R>) -> Result<Self> {
        let noise = channel
            .additive_noise()
            .ok_or_else(|| Error::Unsupported("channel matrix is not additive over a prime field".into()))?;
        Self::new(channel.input().size(), noise)
    }

    #[inline]
    pub fn field_size(&self) -> usize {
        self.field_size
    }

    pub fn alphabet(&self) -> Alphabet {
        self.noise.alphabet()
    }

    pub fn noise(&self) -> &Pmf<R> {
        &self.noise
    }

    pub fn noise_entropy(&self) -> R {
        entropy(&self.noise)
    }

    /// `I(A;B) = log2 q - H(Z)` under a uniform input.
    pub fn uniform_input_information(&self) -> R {
        R::of_usize(self.field_size).log2() - self.noise_entropy()
    }

    pub fn to_dmc(&self) -> Dmc<R> {
        let q = self.field_size;
        let rows = (0..q)
            .map(|a| (0..q).map(|b| self.noise.probs()[(b + q - a) % q]).collect())
            .collect();
        Dmc::new(rows).expect("shifted noise rows are pmfs")
    }

    /// Sends `input` through the channel, returning the output and the noise realization.
    pub fn additive_transmit<G: Rng + ?Sized>(
        &self,
        input: &SymbolSequence,
        rng: &mut G,
    ) -> Result<(SymbolSequence, SymbolSequence)> {
        if input.alphabet().size() != self.field_size {
            return Err(Error::ShapeMismatch(format!(
                "input alphabet of size {} for a field of size {}",
                input.alphabet().size(),
                self.field_size
            )));
        }
        let q = self.field_size as u32;
        let noise: Vec<u32> = (0..input.len())
            .map(|_| sample_index(self.noise.probs(), rng) as u32)
            .collect();
        let out = input.symbols().iter().zip(&noise).map(|(&a, &z)| (a + z) % q).collect();
        let alphabet = self.alphabet();
        Ok((
            SymbolSequence::from_parts_unchecked(alphabet, out),
            SymbolSequence::from_parts_unchecked(alphabet, noise),
        ))
    }
}

/// `b - a mod q`, the noise estimate given a decoded codeword.
pub fn recover_noise(
    channel_output: &SymbolSequence,
    decoded_codeword: &SymbolSequence,
    field_size: usize,
) -> Result<SymbolSequence> {
    if channel_output.len() != decoded_codeword.len() {
        return Err(Error::ShapeMismatch(format!(
            "output length {} differs from codeword length {}",
            channel_output.len(),
            decoded_codeword.len()
        )));
    }
    let alphabet = Alphabet::new(field_size)?;
    let q = field_size as u32;
    let mut z = Vec::with_capacity(channel_output.len());
    for (&b, &a) in channel_output.symbols().iter().zip(decoded_codeword.symbols()) {
        if b >= q || a >= q {
            return Err(Error::Domain(format!("symbol outside F_{field_size}")));
        }
        z.push((b + q - a) % q);
    }
    Ok(SymbolSequence::from_parts_unchecked(alphabet, z))
}

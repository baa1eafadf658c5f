//! Nested random codebooks indexed by `(i, j, k)`.
//!
//! The outer codebook holds `2^{n(Rc+Ro)}` words `c_ij` drawn i.i.d. from
//! `p_c`; each of them carries `2^{nRa}` satellite words `a_ijk` drawn
//! letter-wise from `p_a_given_c(. | c_ij)`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::Dmc;
use crate::error::{Error, Result};
use crate::prob::{Alphabet, Pmf, SymbolSequence};
use crate::rng::{sample_index, seeded};
use crate::scalar::Real;

/// Default cap on the total number of codewords of a [`CodebookPair`].
pub const DEFAULT_CODEWORD_CAP: usize = 1 << 20;

/// Largest exponent accepted for any single index set.
const MAX_INDEX_BITS: u32 = 40;

/// Blocklength and rates of a nested codebook, with every `nR` a whole number of bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateSpec {
    pub n: usize,
    pub rc: f64,
    pub ro: f64,
    pub ra: f64,
}

fn whole_bits(name: &str, n: usize, rate: f64) -> Result<u32> {
    if !(rate.is_finite() && rate >= 0.0) {
        return Err(Error::Specification(format!(
            "{name} = {rate} must be a non-negative rate"
        )));
    }
    let bits = n as f64 * rate;
    let rounded = bits.round();
    if (bits - rounded).abs() > 1e-9 {
        return Err(Error::Specification(format!(
            "n{name} = {n} x {rate} = {bits} is not an integer"
        )));
    }
    if rounded > MAX_INDEX_BITS as f64 {
        return Err(Error::Specification(format!(
            "n{name} = {rounded} bits exceeds the supported {MAX_INDEX_BITS}"
        )));
    }
    Ok(rounded as u32)
}

impl RateSpec {
    pub fn new(n: usize, rc: f64, ro: f64, ra: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Specification("blocklength must be at least 1".into()));
        }
        let spec = RateSpec { n, rc, ro, ra };
        spec.validate()?;
        Ok(spec)
    }

    /// Rates given as whole numbers of bits per block.
    pub fn from_bits(n: usize, rc_bits: u32, ro_bits: u32, ra_bits: u32) -> Result<Self> {
        let r = |b: u32| b as f64 / n as f64;
        Self::new(n, r(rc_bits), r(ro_bits), r(ra_bits))
    }

    pub fn validate(&self) -> Result<()> {
        self.bits().map(|_| ())
    }

    /// `(nRc, nRo, nRa)`.
    pub fn bits(&self) -> Result<(u32, u32, u32)> {
        Ok((
            whole_bits("Rc", self.n, self.rc)?,
            whole_bits("Ro", self.n, self.ro)?,
            whole_bits("Ra", self.n, self.ra)?,
        ))
    }

    /// Sizes `(|I|, |J|, |K|)` of the three index sets.
    pub fn index_sizes(&self) -> Result<(usize, usize, usize)> {
        let (c, o, a) = self.bits()?;
        Ok((1usize << c, 1usize << o, 1usize << a))
    }
}

/// A uniformly drawn codebook index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IndexTriple {
    pub i: usize,
    pub j: usize,
    pub k: usize,
}

/// Uniform draw over the product index space of `rates`.
pub fn draw_index_triple<G: Rng + ?Sized>(rates: &RateSpec, rng: &mut G) -> Result<IndexTriple> {
    let (ni, nj, nk) = rates.index_sizes()?;
    Ok(IndexTriple {
        i: rng.random_range(0..ni),
        j: rng.random_range(0..nj),
        k: rng.random_range(0..nk),
    })
}

/// A realized nested codebook.
#[derive(Debug, Clone, PartialEq)]
pub struct CodebookPair<R> {
    rates: RateSpec,
    seed: u64,
    p_c: Pmf<R>,
    p_a_given_c: Dmc<R>,
    sizes: (usize, usize, usize),
    c_words: Vec<u32>,
    a_words: Vec<u32>,
}

/// Serializable description from which a codebook is regenerated bit-exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "R: Serialize + Real", deserialize = "R: Deserialize<'de> + Real"))]
pub struct CodebookRecord<R> {
    pub rates: RateSpec,
    pub seed: u64,
    pub alphabets: CodebookAlphabets,
    pub p_c: Pmf<R>,
    pub p_a_given_c: Dmc<R>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodebookAlphabets {
    pub c: Alphabet,
    pub a: Alphabet,
}

/// Draws a nested codebook with the default codeword cap.
pub fn generate_nested<R: Real>(
    p_c: &Pmf<R>,
    p_a_given_c: &Dmc<R>,
    rates: RateSpec,
    seed: u64,
) -> Result<CodebookPair<R>> {
    generate_nested_capped(p_c, p_a_given_c, rates, seed, DEFAULT_CODEWORD_CAP)
}

pub fn generate_nested_capped<R: Real>(
    p_c: &Pmf<R>,
    p_a_given_c: &Dmc<R>,
    rates: RateSpec,
    seed: u64,
    cap: usize,
) -> Result<CodebookPair<R>> {
    if p_a_given_c.input() != p_c.alphabet() {
        return Err(Error::ShapeMismatch(
            "p_a_given_c input alphabet differs from the alphabet of p_c".into(),
        ));
    }
    let (ni, nj, nk) = rates.index_sizes()?;
    let n_c = (ni as u128) * (nj as u128);
    let n_a = n_c * nk as u128;
    if n_c + n_a > cap as u128 {
        return Err(Error::resource("codebook", n_c + n_a, cap as u128));
    }
    let n = rates.n;
    let mut rng = seeded(seed);
    let mut c_words = Vec::with_capacity(n_c as usize * n);
    let mut a_words = Vec::with_capacity(n_a as usize * n);
    for _ in 0..n_c {
        let start = c_words.len();
        for _ in 0..n {
            c_words.push(sample_index(p_c.probs(), &mut rng) as u32);
        }
        for _ in 0..nk {
            for t in 0..n {
                let c = c_words[start + t] as usize;
                a_words.push(sample_index(p_a_given_c.row(c), &mut rng) as u32);
            }
        }
    }
    Ok(CodebookPair {
        rates,
        seed,
        p_c: p_c.clone(),
        p_a_given_c: p_a_given_c.clone(),
        sizes: (ni, nj, nk),
        c_words,
        a_words,
    })
}

impl<R: Real> CodebookPair<R> {
    pub fn rates(&self) -> &RateSpec {
        &self.rates
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn n(&self) -> usize {
        self.rates.n
    }

    /// `(|I|, |J|, |K|)`.
    pub fn sizes(&self) -> (usize, usize, usize) {
        self.sizes
    }

    pub fn c_alphabet(&self) -> Alphabet {
        self.p_c.alphabet()
    }

    pub fn a_alphabet(&self) -> Alphabet {
        self.p_a_given_c.output()
    }

    pub fn p_c(&self) -> &Pmf<R> {
        &self.p_c
    }

    pub fn p_a_given_c(&self) -> &Dmc<R> {
        &self.p_a_given_c
    }

    pub fn num_c_words(&self) -> usize {
        self.sizes.0 * self.sizes.1
    }

    pub fn num_a_words(&self) -> usize {
        self.num_c_words() * self.sizes.2
    }

    /// Letters of `c_ij`.
    #[inline]
    pub fn c_word(&self, i: usize, j: usize) -> &[u32] {
        let n = self.rates.n;
        let idx = i * self.sizes.1 + j;
        &self.c_words[idx * n..(idx + 1) * n]
    }

    /// Letters of `a_ijk`.
    #[inline]
    pub fn a_word(&self, i: usize, j: usize, k: usize) -> &[u32] {
        let n = self.rates.n;
        let idx = (i * self.sizes.1 + j) * self.sizes.2 + k;
        &self.a_words[idx * n..(idx + 1) * n]
    }

    pub fn c_sequence(&self, i: usize, j: usize) -> SymbolSequence {
        SymbolSequence::from_parts_unchecked(self.c_alphabet(), self.c_word(i, j).to_vec())
    }

    pub fn a_sequence(&self, t: IndexTriple) -> SymbolSequence {
        SymbolSequence::from_parts_unchecked(self.a_alphabet(), self.a_word(t.i, t.j, t.k).to_vec())
    }

    /// All c-word letters, ordered by `(i, j)`.
    pub fn c_letters(&self) -> &[u32] {
        &self.c_words
    }

    /// All a-word letters, ordered by `(i, j, k)`.
    pub fn a_letters(&self) -> &[u32] {
        &self.a_words
    }

    pub fn record(&self) -> CodebookRecord<R> {
        CodebookRecord {
            rates: self.rates,
            seed: self.seed,
            alphabets: CodebookAlphabets {
                c: self.c_alphabet(),
                a: self.a_alphabet(),
            },
            p_c: self.p_c.clone(),
            p_a_given_c: self.p_a_given_c.clone(),
        }
    }

    pub fn from_record(record: &CodebookRecord<R>) -> Result<Self> {
        if record.alphabets.c != record.p_c.alphabet() || record.alphabets.a != record.p_a_given_c.output() {
            return Err(Error::ShapeMismatch(
                "record alphabets disagree with its distributions".into(),
            ));
        }
        generate_nested(&record.p_c, &record.p_a_given_c, record.rates, record.seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binary() -> (Pmf<f64>, Dmc<f64>) {
        (Pmf::bernoulli(0.3).unwrap(), Dmc::bsc(0.2).unwrap())
    }

    #[test]
    fn rate_spec_rejects_fractional_bits() {
        assert!(RateSpec::new(7, 1.0 / 3.0, 0.0, 0.0).is_err());
        assert!(RateSpec::new(6, 1.0 / 3.0, 0.5, 0.0).is_ok());
        assert!(RateSpec::new(4, -0.25, 0.0, 0.0).is_err());
        assert_eq!(RateSpec::new(8, 0.25, 0.5, 0.0).unwrap().bits().unwrap(), (2, 4, 0));
    }

    #[test]
    fn zero_rates_give_single_words() {
        let (pc, pa) = binary();
        let cb = generate_nested(&pc, &pa, RateSpec::new(5, 0.0, 0.0, 0.0).unwrap(), 3).unwrap();
        assert_eq!(cb.num_c_words(), 1);
        assert_eq!(cb.num_a_words(), 1);
        assert_eq!(cb.c_word(0, 0).len(), 5);
    }

    #[test]
    fn point_mass_c_gives_zero_words() {
        let pc = Pmf::point_mass(Alphabet::BINARY, 0).unwrap();
        let cb = generate_nested(
            &pc,
            &Dmc::bsc(0.5).unwrap(),
            RateSpec::from_bits(6, 2, 1, 1).unwrap(),
            9,
        )
        .unwrap();
        assert!(cb.c_letters().iter().all(|&s| s == 0));
    }

    #[test]
    fn regeneration_and_record_roundtrip() {
        let (pc, pa) = binary();
        let rates = RateSpec::from_bits(8, 2, 2, 2).unwrap();
        let a = generate_nested(&pc, &pa, rates, 42).unwrap();
        let b = generate_nested(&pc, &pa, rates, 42).unwrap();
        assert_eq!(a, b);
        let json = serde_json::to_string(&a.record()).unwrap();
        let rec: CodebookRecord<f64> = serde_json::from_str(&json).unwrap();
        assert_eq!(CodebookPair::from_record(&rec).unwrap().a_letters(), a.a_letters());
    }

    #[test]
    fn cap_is_enforced() {
        let (pc, pa) = binary();
        let rates = RateSpec::from_bits(8, 4, 4, 4).unwrap();
        let err = generate_nested_capped(&pc, &pa, rates, 1, 1000).unwrap_err();
        assert!(err.is_resource());
    }
}

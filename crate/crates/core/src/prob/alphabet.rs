use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Symbol type of every finite alphabet.
pub type Symbol = u32;

/// Finite alphabet `{0, .., size-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct Alphabet(usize);

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::Domain("alphabet size must be at least 1".into()));
        }
        if size > Symbol::MAX as usize {
            return Err(Error::Domain(format!("alphabet size {size} too large")));
        }
        Ok(Alphabet(size))
    }

    pub const BINARY: Alphabet = Alphabet(2);

    #[inline]
    pub fn size(self) -> usize {
        self.0
    }

    #[inline]
    pub fn contains(self, symbol: Symbol) -> bool {
        (symbol as usize) < self.0
    }
}

impl TryFrom<usize> for Alphabet {
    type Error = Error;
    fn try_from(size: usize) -> Result<Self> {
        Alphabet::new(size)
    }
}

impl From<Alphabet> for usize {
    fn from(a: Alphabet) -> usize {
        a.0
    }
}

/// A finite sequence over an alphabet.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymbolSequence {
    alphabet: Alphabet,
    symbols: Vec<Symbol>,
}

impl SymbolSequence {
    pub fn new(alphabet: Alphabet, symbols: Vec<Symbol>) -> Result<Self> {
        if let Some(&bad) = symbols.iter().find(|&&s| !alphabet.contains(s)) {
            return Err(Error::Domain(format!(
                "symbol {bad} outside alphabet of size {}",
                alphabet.size()
            )));
        }
        Ok(SymbolSequence { alphabet, symbols })
    }

    /// Binary sequence from a slice of 0/1 values.
    pub fn binary(bits: &[Symbol]) -> Result<Self> {
        Self::new(Alphabet::BINARY, bits.to_vec())
    }

    pub fn zeros(alphabet: Alphabet, len: usize) -> Self {
        SymbolSequence {
            alphabet,
            symbols: vec![0; len],
        }
    }

    pub(crate) fn from_parts_unchecked(alphabet: Alphabet, symbols: Vec<Symbol>) -> Self {
        debug_assert!(symbols.iter().all(|&s| alphabet.contains(s)));
        SymbolSequence { alphabet, symbols }
    }

    #[inline]
    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    #[inline]
    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Row-major index of the sequence in `alphabet^len`, first letter most significant.
    pub fn rank(&self) -> usize {
        rank(self.alphabet.size(), &self.symbols)
    }

    /// Inverse of [`SymbolSequence::rank`].
    pub fn unrank(alphabet: Alphabet, len: usize, mut index: usize) -> Self {
        let k = alphabet.size();
        let mut symbols = vec![0; len];
        for slot in symbols.iter_mut().rev() {
            *slot = (index % k) as Symbol;
            index /= k;
        }
        SymbolSequence { alphabet, symbols }
    }

    /// Hamming distance to another sequence of the same length.
    pub fn hamming(&self, other: &SymbolSequence) -> Result<usize> {
        if self.len() != other.len() {
            return Err(Error::ShapeMismatch(format!(
                "lengths {} and {} differ",
                self.len(),
                other.len()
            )));
        }
        Ok(self.symbols.iter().zip(&other.symbols).filter(|(a, b)| a != b).count())
    }
}

#[inline]
pub(crate) fn rank(k: usize, symbols: &[Symbol]) -> usize {
    symbols.iter().fold(0, |acc, &s| acc * k + s as usize)
}

/// Number of positions of `seq` holding `symbol`.
pub fn counting_function(symbol: Symbol, seq: &SymbolSequence) -> Result<usize> {
    if !seq.alphabet.contains(symbol) {
        return Err(Error::Domain(format!(
            "symbol {symbol} outside alphabet of size {}",
            seq.alphabet.size()
        )));
    }
    Ok(seq.symbols.iter().filter(|&&s| s == symbol).count())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alphabet_rejects_empty() {
        assert!(Alphabet::new(0).is_err());
        assert_eq!(Alphabet::new(3).unwrap().size(), 3);
    }

    #[test]
    fn sequence_rejects_out_of_alphabet() {
        assert!(SymbolSequence::new(Alphabet::BINARY, vec![0, 2]).is_err());
    }

    #[test]
    fn counting() {
        let s = SymbolSequence::binary(&[0, 1, 1, 0]).unwrap();
        assert_eq!(counting_function(1, &s).unwrap(), 2);
        let empty = SymbolSequence::binary(&[]).unwrap();
        assert_eq!(counting_function(0, &empty).unwrap(), 0);
        let t = SymbolSequence::new(Alphabet::new(3).unwrap(), vec![2, 2, 2]).unwrap();
        assert_eq!(counting_function(2, &t).unwrap(), 3);
        assert!(counting_function(2, &s).is_err());
    }

    #[test]
    fn rank_roundtrip() {
        let a = Alphabet::new(3).unwrap();
        for idx in 0..27 {
            let s = SymbolSequence::unrank(a, 3, idx);
            assert_eq!(s.rank(), idx);
        }
        assert_eq!(SymbolSequence::binary(&[1, 0, 1]).unwrap().rank(), 5);
    }
}

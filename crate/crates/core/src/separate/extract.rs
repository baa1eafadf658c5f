use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::SymbolSequence;
use crate::rng::seeded;

/// Seeded Toeplitz universal hash from `GF(2)^m` to `GF(2)^output_length`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtractorSpec {
    pub output_length: usize,
    pub seed: u64,
}

impl ExtractorSpec {
    pub fn new(output_length: usize, seed: u64) -> Self {
        ExtractorSpec { output_length, seed }
    }

    /// Output length `floor(m * h)` for a source with entropy rate `h` bits per symbol.
    pub fn for_entropy_rate(m: usize, h: f64, seed: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&h) {
            return Err(Error::Domain(format!("binary entropy rate {h} outside [0,1]")));
        }
        Ok(ExtractorSpec::new((m as f64 * h).floor() as usize, seed))
    }

    /// The `output_length x m` matrix for inputs of length `m`.
    pub fn matrix(&self, m: usize) -> Result<ToeplitzMatrix> {
        ToeplitzMatrix::new(self.output_length, m, self.seed)
    }
}

/// Binary Toeplitz matrix with `T[r][c] = s[r - c + m - 1]` for seeded bits `s`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToeplitzMatrix {
    rows: usize,
    cols: usize,
    diagonals: Vec<u8>,
}

impl ToeplitzMatrix {
    pub fn new(rows: usize, cols: usize, seed: u64) -> Result<Self> {
        if cols == 0 {
            return Err(Error::Domain("extractor input length must be at least 1".into()));
        }
        if rows > cols {
            return Err(Error::Domain(format!(
                "cannot extract {rows} bits from {cols} input symbols"
            )));
        }
        let mut rng = seeded(seed);
        let count = (rows + cols).saturating_sub(1);
        let diagonals = (0..count).map(|_| rng.random::<bool>() as u8).collect();
        Ok(ToeplitzMatrix { rows, cols, diagonals })
    }

    #[inline]
    pub fn entry(&self, r: usize, c: usize) -> u8 {
        self.diagonals[r + self.cols - 1 - c]
    }

    /// `T z` over `GF(2)`.
    pub fn apply(&self, z: &[u32]) -> Vec<u8> {
        debug_assert_eq!(z.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                z.iter()
                    .enumerate()
                    .fold(0u8, |acc, (c, &bit)| acc ^ (self.entry(r, c) & bit as u8))
            })
            .collect()
    }
}

/// Hashes a binary noise estimate to `spec.output_length` bits.
pub fn extract(z_hat: &SymbolSequence, spec: &ExtractorSpec) -> Result<Vec<u8>> {
    if z_hat.alphabet().size() != 2 {
        return Err(Error::Unsupported(format!(
            "extraction is implemented for binary noise only, got an alphabet of size {}",
            z_hat.alphabet().size()
        )));
    }
    if spec.output_length == 0 {
        return Ok(Vec::new());
    }
    Ok(spec.matrix(z_hat.len())?.apply(z_hat.symbols()))
}

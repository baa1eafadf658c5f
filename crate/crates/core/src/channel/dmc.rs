use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prob::{Alphabet, JointPmf, Pmf, SymbolSequence};
use crate::rng::sample_index;
use crate::scalar::Real;

/// Discrete memoryless channel: one output pmf per input symbol.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "R: Serialize + Real", deserialize = "R: Deserialize<'de> + Real"))]
#[serde(try_from = "Vec<Vec<R>>", into = "Vec<Vec<R>>")]
pub struct Dmc<R> {
    input: Alphabet,
    output: Alphabet,
    /// Row-major `input.size() x output.size()` transition matrix.
    matrix: Vec<R>,
}

impl<R: Real> Dmc<R> {
    /// Builds a channel from its rows; each row is validated as a pmf.
    pub fn new(rows: Vec<Vec<R>>) -> Result<Self> {
        let input = Alphabet::new(rows.len())?;
        let width = rows[0].len();
        let output = Alphabet::new(width)?;
        let mut matrix = Vec::with_capacity(rows.len() * width);
        for (idx, row) in rows.into_iter().enumerate() {
            if row.len() != width {
                return Err(Error::ShapeMismatch(format!(
                    "row {idx} has {} entries, expected {width}",
                    row.len()
                )));
            }
            let row = Pmf::new(row).map_err(|e| Error::InvalidDistribution(format!("row {idx}: {e}")))?;
            matrix.extend_from_slice(row.probs());
        }
        Ok(Dmc { input, output, matrix })
    }

    pub fn from_f64(rows: &[&[f64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&v| R::of(v)).collect()).collect())
    }

    pub fn from_rows(rows: &[Pmf<R>]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.probs().to_vec()).collect())
    }

    /// Binary symmetric channel with crossover `p`.
    pub fn bsc(p: R) -> Result<Self> {
        if !(p >= R::zero() && p <= R::one()) {
            return Err(Error::Domain(format!("crossover {p} outside [0,1]")));
        }
        let q = R::one() - p;
        Ok(Dmc {
            input: Alphabet::BINARY,
            output: Alphabet::BINARY,
            matrix: vec![q, p, p, q],
        })
    }

    pub fn identity(alphabet: Alphabet) -> Self {
        let k = alphabet.size();
        let mut matrix = vec![R::zero(); k * k];
        for s in 0..k {
            matrix[s * k + s] = R::one();
        }
        Dmc {
            input: alphabet,
            output: alphabet,
            matrix,
        }
    }

    /// Channel whose every row is uniform.
    pub fn uniform(input: Alphabet, output: Alphabet) -> Self {
        let w = R::one() / R::of_usize(output.size());
        Dmc {
            input,
            output,
            matrix: vec![w; input.size() * output.size()],
        }
    }

    /// Channel ignoring its input and emitting `pmf`.
    pub fn constant(input: Alphabet, pmf: &Pmf<R>) -> Self {
        let mut matrix = Vec::with_capacity(input.size() * pmf.len());
        for _ in 0..input.size() {
            matrix.extend_from_slice(pmf.probs());
        }
        Dmc {
            input,
            output: pmf.alphabet(),
            matrix,
        }
    }

    #[inline]
    pub fn input(&self) -> Alphabet {
        self.input
    }

    #[inline]
    pub fn output(&self) -> Alphabet {
        self.output
    }

    #[inline]
    pub fn row(&self, input: usize) -> &[R] {
        let w = self.output.size();
        &self.matrix[input * w..(input + 1) * w]
    }

    #[inline]
    pub fn prob(&self, input: usize, output: usize) -> R {
        self.matrix[input * self.output.size() + output]
    }

    pub fn matrix(&self) -> &[R] {
        &self.matrix
    }

    pub fn rows(&self) -> Vec<Vec<R>> {
        (0..self.input.size()).map(|i| self.row(i).to_vec()).collect()
    }

    /// `second ∘ first`: pass through `first`, then through `second`.
    pub fn cascade(first: &Dmc<R>, second: &Dmc<R>) -> Result<Dmc<R>> {
        if first.output != second.input {
            return Err(Error::ShapeMismatch(format!(
                "first channel outputs {} symbols, second expects {}",
                first.output.size(),
                second.input.size()
            )));
        }
        let (ni, nm, no) = (first.input.size(), first.output.size(), second.output.size());
        let mut matrix = vec![R::zero(); ni * no];
        for i in 0..ni {
            for m in 0..nm {
                let w = first.matrix[i * nm + m];
                if w == R::zero() {
                    continue;
                }
                for o in 0..no {
                    matrix[i * no + o] += w * second.matrix[m * no + o];
                }
            }
        }
        Ok(Dmc {
            input: first.input,
            output: second.output,
            matrix,
        })
    }

    /// Output distribution for input distribution `p`.
    pub fn push_forward(&self, p: &Pmf<R>) -> Result<Pmf<R>> {
        if p.alphabet() != self.input {
            return Err(Error::ShapeMismatch(
                "input pmf alphabet differs from channel input".into(),
            ));
        }
        let no = self.output.size();
        let mut out = vec![R::zero(); no];
        for (i, &pi) in p.probs().iter().enumerate() {
            for (o, slot) in out.iter_mut().enumerate() {
                *slot += pi * self.matrix[i * no + o];
            }
        }
        Pmf::new(out)
    }

    /// Joint pmf over `(input, output)` for input distribution `p`.
    pub fn joint(&self, p: &Pmf<R>) -> Result<JointPmf<R>> {
        if p.alphabet() != self.input {
            return Err(Error::ShapeMismatch(
                "input pmf alphabet differs from channel input".into(),
            ));
        }
        let no = self.output.size();
        let probs = self
            .matrix
            .iter()
            .enumerate()
            .map(|(idx, &w)| p.probs()[idx / no] * w)
            .collect();
        JointPmf::new(vec![self.input, self.output], probs)
    }

    /// Conditional pmf of the `target` axes given the `given` axes of `joint`.
    ///
    /// Inputs and outputs are composite symbols ranked row-major in the listed
    /// axis order. Inputs of zero mass get a uniform row.
    pub fn conditional(joint: &JointPmf<R>, given: &[usize], target: &[usize]) -> Result<Dmc<R>> {
        let mut order: Vec<usize> = given.iter().chain(target).copied().collect();
        let mut keep = order.clone();
        keep.sort_unstable();
        keep.dedup();
        if keep.len() != order.len() {
            return Err(Error::InvalidAxis("given and target axes overlap".into()));
        }
        let marg = joint.marginalize(&keep)?;
        // Position of each requested axis within the marginal.
        for a in order.iter_mut() {
            *a = keep.iter().position(|k| k == a).expect("kept axis");
        }
        let perm = marg.permute_axes(&order)?;
        let rows_n: usize = given.iter().map(|&a| joint.axes()[a].size()).product();
        let cols_n: usize = target.iter().map(|&a| joint.axes()[a].size()).product();
        let input = Alphabet::new(rows_n)?;
        let output = Alphabet::new(cols_n)?;
        let mut matrix = perm.probs().to_vec();
        let uniform = R::one() / R::of_usize(cols_n);
        for row in matrix.chunks_mut(cols_n) {
            let mass: R = row.iter().copied().sum();
            if mass > R::zero() {
                for v in row.iter_mut() {
                    *v /= mass;
                }
            } else {
                row.fill(uniform);
            }
        }
        Ok(Dmc { input, output, matrix })
    }

    /// Sends `input` letter by letter through the channel.
    pub fn transmit<G: Rng + ?Sized>(&self, input: &SymbolSequence, rng: &mut G) -> Result<SymbolSequence> {
        if input.alphabet() != self.input {
            return Err(Error::ShapeMismatch(
                "sequence alphabet differs from channel input".into(),
            ));
        }
        let out = input
            .symbols()
            .iter()
            .map(|&s| sample_index(self.row(s as usize), rng) as u32)
            .collect();
        Ok(SymbolSequence::from_parts_unchecked(self.output, out))
    }

    /// Letter-wise sampling for raw symbol slices whose alphabet is already known to match.
    pub(crate) fn transmit_raw<G: Rng + ?Sized>(&self, input: &[u32], rng: &mut G) -> Vec<u32> {
        input
            .iter()
            .map(|&s| sample_index(self.row(s as usize), rng) as u32)
            .collect()
    }

    /// `prod_t W(output_t | input_t)`.
    pub fn sequence_likelihood(&self, input: &[u32], output: &[u32]) -> R {
        input
            .iter()
            .zip(output)
            .map(|(&i, &o)| self.prob(i as usize, o as usize))
            .fold(R::one(), |acc, w| acc * w)
    }

    /// The noise pmf if this is an additive channel `b = a + z mod q`.
    pub fn additive_noise(&self) -> Option<Pmf<R>> {
        let q = self.input.size();
        if self.output.size() != q {
            return None;
        }
        let noise = self.row(0).to_vec();
        for a in 1..q {
            for (z, &pz) in noise.iter().enumerate() {
                if (self.prob(a, (a + z) % q) - pz).abs() > R::cmp_tol() {
                    return None;
                }
            }
        }
        Pmf::new(noise).ok()
    }
}

impl<R: Real> TryFrom<Vec<Vec<R>>> for Dmc<R> {
    type Error = Error;
    fn try_from(rows: Vec<Vec<R>>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::ShapeMismatch("a channel needs at least one row".into()));
        }
        Dmc::new(rows)
    }
}

impl<R: Real> From<Dmc<R>> for Vec<Vec<R>> {
    fn from(d: Dmc<R>) -> Self {
        d.rows()
    }
}

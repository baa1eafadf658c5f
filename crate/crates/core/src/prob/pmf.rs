use serde::{Deserialize, Serialize};

use super::alphabet::{Alphabet, Symbol};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Default cap on the number of entries of any dense probability table.
pub const DEFAULT_TABLE_CAP: usize = 1 << 24;

/// Anything that is a dense probability table: a [`Pmf`] or a [`JointPmf`].
pub trait ProbTable<R: Real> {
    /// Axis sizes; a single-axis table for a [`Pmf`].
    fn dims(&self) -> Vec<usize>;
    fn probs(&self) -> &[R];
}

fn validate<R: Real>(probs: &mut [R]) -> Result<()> {
    let tol = R::mass_tol();
    let mut total = R::zero();
    for (idx, &p) in probs.iter().enumerate() {
        if !p.is_finite() || p < R::zero() || p > R::one() + tol {
            return Err(Error::InvalidDistribution(format!(
                "entry {idx} = {p} is not a probability"
            )));
        }
        total += p;
    }
    let drift = (total - R::one()).abs();
    if drift > tol {
        return Err(Error::InvalidDistribution(format!(
            "total mass {total} drifts from 1 by more than {tol}"
        )));
    }
    if drift > R::zero() {
        for p in probs.iter_mut() {
            *p /= total;
        }
    }
    Ok(())
}

/// Probability mass function over a finite alphabet.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "R: Serialize + Real", deserialize = "R: Deserialize<'de> + Real"))]
#[serde(try_from = "Vec<R>", into = "Vec<R>")]
pub struct Pmf<R> {
    alphabet: Alphabet,
    probs: Vec<R>,
}

impl<R: Real> Pmf<R> {
    /// Validates and, for drift below the mass tolerance, renormalizes.
    pub fn new(mut probs: Vec<R>) -> Result<Self> {
        let alphabet = Alphabet::new(probs.len())?;
        validate(&mut probs)?;
        Ok(Pmf { alphabet, probs })
    }

    pub fn from_f64(probs: &[f64]) -> Result<Self> {
        Self::new(probs.iter().map(|&p| R::of(p)).collect())
    }

    pub fn uniform(alphabet: Alphabet) -> Self {
        let k = alphabet.size();
        Pmf {
            alphabet,
            probs: vec![R::one() / R::of_usize(k); k],
        }
    }

    pub fn point_mass(alphabet: Alphabet, symbol: Symbol) -> Result<Self> {
        if !alphabet.contains(symbol) {
            return Err(Error::Domain(format!("symbol {symbol} outside alphabet")));
        }
        let mut probs = vec![R::zero(); alphabet.size()];
        probs[symbol as usize] = R::one();
        Ok(Pmf { alphabet, probs })
    }

    /// Bernoulli(`q`) over `{0, 1}`.
    pub fn bernoulli(q: R) -> Result<Self> {
        if !(q >= R::zero() && q <= R::one()) {
            return Err(Error::Domain(format!("Bernoulli parameter {q} outside [0,1]")));
        }
        Ok(Pmf {
            alphabet: Alphabet::BINARY,
            probs: vec![R::one() - q, q],
        })
    }

    #[inline]
    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.probs.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn prob(&self, symbol: Symbol) -> R {
        self.probs[symbol as usize]
    }

    pub fn probs(&self) -> &[R] {
        &self.probs
    }

    pub fn min_positive(&self) -> Option<R> {
        self.probs
            .iter()
            .copied()
            .filter(|&p| p > R::zero())
            .fold(None, |m, p| Some(m.map_or(p, |m: R| m.min(p))))
    }
}

impl<R: Real> TryFrom<Vec<R>> for Pmf<R> {
    type Error = Error;
    fn try_from(v: Vec<R>) -> Result<Self> {
        Pmf::new(v)
    }
}

impl<R> From<Pmf<R>> for Vec<R> {
    fn from(p: Pmf<R>) -> Vec<R> {
        p.probs
    }
}

impl<R: Real> ProbTable<R> for Pmf<R> {
    fn dims(&self) -> Vec<usize> {
        vec![self.alphabet.size()]
    }
    fn probs(&self) -> &[R] {
        &self.probs
    }
}

/// Joint pmf over an ordered list of axes, stored row-major (last axis fastest).
#[derive(Debug, Clone, PartialEq)]
pub struct JointPmf<R> {
    axes: Vec<Alphabet>,
    probs: Vec<R>,
}

pub(crate) fn table_size(dims: impl IntoIterator<Item = usize>) -> u128 {
    dims.into_iter().fold(1u128, |acc, d| acc.saturating_mul(d as u128))
}

pub(crate) fn check_cap(what: &str, required: u128, cap: usize) -> Result<usize> {
    if required > cap as u128 {
        Err(Error::resource(what, required, cap as u128))
    } else {
        Ok(required as usize)
    }
}

fn strides_of(dims: &[usize]) -> Vec<usize> {
    let mut strides = vec![1; dims.len()];
    for a in (0..dims.len().saturating_sub(1)).rev() {
        strides[a] = strides[a + 1] * dims[a + 1];
    }
    strides
}

impl<R: Real> JointPmf<R> {
    pub fn new(axes: Vec<Alphabet>, mut probs: Vec<R>) -> Result<Self> {
        if axes.is_empty() {
            return Err(Error::InvalidAxis("a joint pmf needs at least one axis".into()));
        }
        let size = table_size(axes.iter().map(|a| a.size()));
        if size != probs.len() as u128 {
            return Err(Error::ShapeMismatch(format!(
                "table of {} entries for axes of total size {size}",
                probs.len()
            )));
        }
        validate(&mut probs)?;
        Ok(JointPmf { axes, probs })
    }

    /// Builds from a table that is a pmf by construction; renormalizes away rounding.
    pub(crate) fn from_raw(axes: Vec<Alphabet>, mut probs: Vec<R>) -> Result<Self> {
        debug_assert_eq!(table_size(axes.iter().map(|a| a.size())), probs.len() as u128);
        validate(&mut probs)?;
        Ok(JointPmf { axes, probs })
    }

    pub fn from_dims(dims: &[usize], probs: Vec<R>) -> Result<Self> {
        let axes = dims.iter().map(|&d| Alphabet::new(d)).collect::<Result<Vec<_>>>()?;
        Self::new(axes, probs)
    }

    pub fn axes(&self) -> &[Alphabet] {
        &self.axes
    }

    pub fn num_axes(&self) -> usize {
        self.axes.len()
    }

    pub fn dims_vec(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.size()).collect()
    }

    pub fn probs(&self) -> &[R] {
        &self.probs
    }

    pub fn strides(&self) -> Vec<usize> {
        strides_of(&self.dims_vec())
    }

    /// Flat index of a tuple of symbols, one per axis.
    pub fn index_of(&self, symbols: &[Symbol]) -> Result<usize> {
        if symbols.len() != self.axes.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} symbols for {} axes",
                symbols.len(),
                self.axes.len()
            )));
        }
        let mut idx = 0;
        for (s, a) in symbols.iter().zip(&self.axes) {
            if !a.contains(*s) {
                return Err(Error::Domain(format!("symbol {s} outside axis alphabet")));
            }
            idx = idx * a.size() + *s as usize;
        }
        Ok(idx)
    }

    pub fn prob(&self, symbols: &[Symbol]) -> Result<R> {
        Ok(self.probs[self.index_of(symbols)?])
    }

    /// Flattens to a pmf over the product alphabet.
    pub fn to_pmf(&self) -> Result<Pmf<R>> {
        Pmf::new(self.probs.clone())
    }

    /// Sums out every axis not in `keep`. Kept axes retain their original relative order.
    pub fn marginalize(&self, keep: &[usize]) -> Result<JointPmf<R>> {
        if keep.is_empty() {
            return Err(Error::InvalidAxis("nothing to keep".into()));
        }
        let mut kept = keep.to_vec();
        kept.sort_unstable();
        kept.dedup();
        if kept.len() != keep.len() {
            return Err(Error::InvalidAxis(format!("repeated axis in {keep:?}")));
        }
        if let Some(&bad) = kept.iter().find(|&&a| a >= self.axes.len()) {
            return Err(Error::InvalidAxis(format!(
                "axis {bad} out of range for {} axes",
                self.axes.len()
            )));
        }
        if kept.len() == self.axes.len() {
            return Ok(self.clone());
        }
        let dims = self.dims_vec();
        let out_axes: Vec<Alphabet> = kept.iter().map(|&a| self.axes[a]).collect();
        let out_dims: Vec<usize> = out_axes.iter().map(|a| a.size()).collect();
        let out_strides = strides_of(&out_dims);
        // Output stride contributed by each input axis (0 for summed-out axes).
        let mut contrib = vec![0usize; dims.len()];
        for (pos, &a) in kept.iter().enumerate() {
            contrib[a] = out_strides[pos];
        }
        let mut out = vec![R::zero(); out_dims.iter().product()];
        let mut digits = vec![0usize; dims.len()];
        let mut target = 0usize;
        for &p in &self.probs {
            out[target] += p;
            // Odometer increment over the input index.
            for a in (0..dims.len()).rev() {
                digits[a] += 1;
                target += contrib[a];
                if digits[a] < dims[a] {
                    break;
                }
                target -= contrib[a] * dims[a];
                digits[a] = 0;
            }
        }
        JointPmf::from_raw(out_axes, out)
    }

    /// Reorders axes: output axis `t` is input axis `order[t]`.
    pub fn permute_axes(&self, order: &[usize]) -> Result<JointPmf<R>> {
        let k = self.axes.len();
        let mut seen = vec![false; k];
        if order.len() != k {
            return Err(Error::InvalidAxis(format!("permutation {order:?} of {k} axes")));
        }
        for &a in order {
            if a >= k || seen[a] {
                return Err(Error::InvalidAxis(format!("invalid permutation {order:?}")));
            }
            seen[a] = true;
        }
        let in_strides = self.strides();
        let out_axes: Vec<Alphabet> = order.iter().map(|&a| self.axes[a]).collect();
        let out_dims: Vec<usize> = out_axes.iter().map(|a| a.size()).collect();
        let src_stride: Vec<usize> = order.iter().map(|&a| in_strides[a]).collect();
        let mut out = Vec::with_capacity(self.probs.len());
        let mut digits = vec![0usize; k];
        let mut src = 0usize;
        for _ in 0..self.probs.len() {
            out.push(self.probs[src]);
            for t in (0..k).rev() {
                digits[t] += 1;
                src += src_stride[t];
                if digits[t] < out_dims[t] {
                    break;
                }
                src -= src_stride[t] * out_dims[t];
                digits[t] = 0;
            }
        }
        Ok(JointPmf {
            axes: out_axes,
            probs: out,
        })
    }

    /// Replaces axis `axis` by several axes whose sizes multiply to its size (row-major split).
    pub fn split_axis(&self, axis: usize, sizes: &[usize]) -> Result<JointPmf<R>> {
        if axis >= self.axes.len() {
            return Err(Error::InvalidAxis(format!("axis {axis} out of range")));
        }
        if sizes.iter().product::<usize>() != self.axes[axis].size() {
            return Err(Error::ShapeMismatch(format!(
                "sizes {sizes:?} do not factor axis of size {}",
                self.axes[axis].size()
            )));
        }
        let mut axes = self.axes[..axis].to_vec();
        for &s in sizes {
            axes.push(Alphabet::new(s)?);
        }
        axes.extend_from_slice(&self.axes[axis + 1..]);
        Ok(JointPmf {
            axes,
            probs: self.probs.clone(),
        })
    }

    /// Product of two independent tables; axes of `self` come first.
    pub fn outer(&self, other: &JointPmf<R>) -> Result<JointPmf<R>> {
        self.outer_capped(other, DEFAULT_TABLE_CAP)
    }

    pub fn outer_capped(&self, other: &JointPmf<R>, cap: usize) -> Result<JointPmf<R>> {
        let size = check_cap(
            "outer product",
            (self.probs.len() as u128) * (other.probs.len() as u128),
            cap,
        )?;
        let mut probs = Vec::with_capacity(size);
        for &p in &self.probs {
            probs.extend(other.probs.iter().map(|&q| p * q));
        }
        let mut axes = self.axes.clone();
        axes.extend_from_slice(&other.axes);
        JointPmf::from_raw(axes, probs)
    }
}

impl<R: Real> From<Pmf<R>> for JointPmf<R> {
    fn from(p: Pmf<R>) -> Self {
        JointPmf {
            axes: vec![p.alphabet],
            probs: p.probs,
        }
    }
}

impl<R: Real> From<&Pmf<R>> for JointPmf<R> {
    fn from(p: &Pmf<R>) -> Self {
        p.clone().into()
    }
}

impl<R: Real> ProbTable<R> for JointPmf<R> {
    fn dims(&self) -> Vec<usize> {
        self.dims_vec()
    }
    fn probs(&self) -> &[R] {
        &self.probs
    }
}

/// `n` i.i.d. copies of `p`, axes in copy-major order
/// (`[copy 1 axes.., copy 2 axes.., ..]`). Uses [`DEFAULT_TABLE_CAP`].
pub fn product_pmf<R: Real>(p: impl Into<JointPmf<R>>, n: usize) -> Result<JointPmf<R>> {
    product_pmf_capped(p, n, DEFAULT_TABLE_CAP)
}

pub fn product_pmf_capped<R: Real>(p: impl Into<JointPmf<R>>, n: usize, cap: usize) -> Result<JointPmf<R>> {
    let p: JointPmf<R> = p.into();
    if n == 0 {
        return Err(Error::Domain("product needs n >= 1".into()));
    }
    let required = (0..n).fold(1u128, |acc, _| acc.saturating_mul(p.probs.len() as u128));
    check_cap("product pmf", required, cap)?;
    let mut acc = p.clone();
    for _ in 1..n {
        acc = acc.outer_capped(&p, cap)?;
    }
    Ok(acc)
}

/// `n` i.i.d. copies of a joint pmf laid out axis-major:
/// `[axis0 copy 1..n, axis1 copy 1..n, ..]`. For a pair `(X, Y)` this is the
/// `(X^n, Y^n)` layout used by the sequence-level tables.
pub fn sequence_pmf<R: Real>(p: &JointPmf<R>, n: usize, cap: usize) -> Result<JointPmf<R>> {
    let k = p.num_axes();
    let prod = product_pmf_capped(p.clone(), n, cap)?;
    let order: Vec<usize> = (0..k)
        .flat_map(|axis| (0..n).map(move |copy| copy * k + axis))
        .collect();
    prod.permute_axes(&order)
}

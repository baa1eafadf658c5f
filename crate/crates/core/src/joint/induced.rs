//! Exact enumeration of the pmfs a realized codebook induces on `(X^n, Y^n)`.
//!
//! Sequence tables use the layout `[x_1 .. x_n, y_1 .. y_n]` (first letter most
//! significant), so the target is [`sequence_target`] and every table can be
//! compared entry by entry.

use std::collections::HashMap;

use ndarray::{Array2, ArrayView1};

use super::system::{decode_raw, AlliedSystem};
use crate::codebook::IndexTriple;
use crate::error::{Error, Result};
use crate::prob::{check_cap, sequence_pmf, tv_slices, Alphabet, JointPmf, DEFAULT_TABLE_CAP};
use crate::scalar::Real;

/// Pmfs induced on the action sequences by one realized codebook.
#[derive(Debug, Clone, PartialEq)]
pub struct InducedPmfs<R> {
    /// Every index triple drives `P_{X|AC}` and `P_{Y|AC}` directly (no decoding).
    pub ideal: JointPmf<R>,
    /// Node Y acts on the decoded c-word, with the decoder's fallback policy.
    pub actual: JointPmf<R>,
    /// Joint of `X^n` and the shared index `J`, axes `[x_1 .. x_n, J]`.
    pub xj_joint: JointPmf<R>,
}

/// `prod_t row_t[s_t]` for every sequence `s`, first letter most significant.
pub(crate) fn letter_product<'a, R: Real>(width: usize, rows: impl Iterator<Item = &'a [R]>) -> Vec<R> {
    let mut acc = vec![R::one()];
    for row in rows {
        debug_assert_eq!(row.len(), width);
        let mut next = Vec::with_capacity(acc.len() * width);
        for &p in &acc {
            if p == R::zero() {
                next.extend(std::iter::repeat_n(R::zero(), width));
            } else {
                next.extend(row.iter().map(|&r| p * r));
            }
        }
        acc = next;
    }
    acc
}

fn pow_cap(base: usize, n: usize) -> u128 {
    (0..n).fold(1u128, |acc, _| acc.saturating_mul(base as u128))
}

fn sequence_axes(sys: &AlliedSystem<impl Real>) -> Vec<Alphabet> {
    let n = sys.n();
    let x = sys.design().x_alphabet();
    let y = sys.design().y_alphabet();
    std::iter::repeat_n(x, n).chain(std::iter::repeat_n(y, n)).collect()
}

/// `P_XY^{n}` laid out like the induced tables.
pub fn sequence_target<R: Real>(p_xy: &JointPmf<R>, n: usize) -> Result<JointPmf<R>> {
    sequence_pmf(p_xy, n, DEFAULT_TABLE_CAP)
}

fn x_law<R: Real>(sys: &AlliedSystem<R>, ac: &[u32]) -> Vec<R> {
    let d = sys.design();
    letter_product(d.x_alphabet().size(), ac.iter().map(|&s| d.px_given_ac.row(s as usize)))
}

fn y_law_ideal<R: Real>(sys: &AlliedSystem<R>, ac: &[u32]) -> Vec<R> {
    let m = sys.py_given_ac();
    letter_product(m.output().size(), ac.iter().map(|&s| m.row(s as usize)))
}

fn gemm_sum<R: Real>(left: &Array2<R>, right: &Array2<R>) -> Vec<R> {
    left.t().dot(right).into_raw_vec_and_offset().0
}

fn rows_to_array<R: Real>(rows: Vec<Vec<R>>, width: usize) -> Array2<R> {
    let h = rows.len();
    Array2::from_shape_vec((h, width), rows.into_iter().flatten().collect()).expect("rows have the declared width")
}

/// The ideal induced pmf over `(X^n, Y^n)`.
///
/// Identical `(a, c)` codeword pairs are merged before the final
/// `|X|^n x W x |Y|^n` matrix product.
pub fn ideal_pmf<R: Real>(sys: &AlliedSystem<R>) -> Result<JointPmf<R>> {
    ideal_pmf_capped(sys, DEFAULT_TABLE_CAP)
}

pub fn ideal_pmf_capped<R: Real>(sys: &AlliedSystem<R>, cap: usize) -> Result<JointPmf<R>> {
    let n = sys.n();
    let nx = sys.design().x_alphabet().size();
    let ny = sys.design().y_alphabet().size();
    let xs = check_cap("X^n table", pow_cap(nx, n), cap)?;
    let ys = check_cap("Y^n table", pow_cap(ny, n), cap)?;
    check_cap("(X^n, Y^n) table", (xs as u128) * (ys as u128), cap)?;

    let (ni, nj, nk) = sys.codebook().sizes();
    let total = R::of_usize(ni * nj * nk);
    let mut slots: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut words: Vec<Vec<u32>> = Vec::new();
    let mut weights: Vec<usize> = Vec::new();
    for i in 0..ni {
        for j in 0..nj {
            for k in 0..nk {
                let ac = sys.ac_letters(i, j, k);
                match slots.get(&ac) {
                    Some(&s) => weights[s] += 1,
                    None => {
                        slots.insert(ac.clone(), words.len());
                        words.push(ac);
                        weights.push(1);
                    }
                }
            }
        }
    }
    let lx: Vec<Vec<R>> = words
        .iter()
        .zip(&weights)
        .map(|(w, &c)| {
            let scale = R::of_usize(c) / total;
            x_law(sys, w).into_iter().map(|v| v * scale).collect()
        })
        .collect();
    let ly: Vec<Vec<R>> = words.iter().map(|w| y_law_ideal(sys, w)).collect();
    let probs = gemm_sum(&rows_to_array(lx, xs), &rows_to_array(ly, ys));
    JointPmf::new(sequence_axes(sys), probs)
}

/// Per-`j` laws of every `(i, k)`, rows ordered by `i * |K| + k`.
pub(crate) struct IndexLaws<R> {
    /// `P_{X|AC}^n(. | a_ijk, c_ij)`, one row per `(i, k)`.
    pub x: Vec<Array2<R>>,
    /// Decoder-aware `P(y | i, j, k)`.
    pub y_actual: Vec<Array2<R>>,
    /// `P_{Y|AC}^n(. | a_ijk, c_ij)`.
    pub y_ideal: Vec<Array2<R>>,
}

/// Decoder-aware law of `Y^n` given index `(i, j, k)`: the channel output is
/// summed over `B^n`, and for each output the decoder's estimate over its
/// support.
pub fn y_law_given_index<R: Real>(sys: &AlliedSystem<R>, t: IndexTriple) -> Result<Vec<R>> {
    let mix = decoder_mixture(sys, t.j, DEFAULT_TABLE_CAP)?;
    let pb = channel_law(sys, sys.codebook().a_word(t.i, t.j, t.k));
    let out = Array2::from_shape_vec((1, pb.len()), pb).expect("row vector").dot(&mix);
    Ok(out.into_raw_vec_and_offset().0)
}

fn channel_law<R: Real>(sys: &AlliedSystem<R>, a: &[u32]) -> Vec<R> {
    let ch = &sys.design().channel;
    letter_product(ch.output().size(), a.iter().map(|&s| ch.row(s as usize)))
}

/// Matrix `|B|^n x |Y|^n` of `sum_i' P(i' | b, j) P_{Y|BC}^n(y | b, c_i'j)`.
fn decoder_mixture<R: Real>(sys: &AlliedSystem<R>, j: usize, cap: usize) -> Result<Array2<R>> {
    let n = sys.n();
    let d = sys.design();
    let nb = d.b_alphabet().size();
    let ny = d.y_alphabet().size();
    let bs = check_cap("B^n table", pow_cap(nb, n), cap)?;
    let ys = check_cap("Y^n table", pow_cap(ny, n), cap)?;
    check_cap("decoder mixture", (bs as u128) * (ys as u128), cap)?;
    let ni = sys.codebook().sizes().0;
    let mut mix = Array2::<R>::zeros((bs, ys));
    let mut b = vec![0u32; n];
    for bidx in 0..bs {
        let mut rem = bidx;
        for slot in b.iter_mut().rev() {
            *slot = (rem % nb) as u32;
            rem /= nb;
        }
        let outcome = decode_raw(&b, j, sys, ni);
        let support = outcome.support();
        let share = R::one() / R::of_usize(support.len());
        let mut row = mix.row_mut(bidx);
        for &i_hat in support {
            let c = sys.codebook().c_word(i_hat, j);
            let law = letter_product(
                ny,
                b.iter()
                    .zip(c)
                    .map(|(&bs, &cs)| d.py_given_bc.row(cs as usize * nb + bs as usize)),
            );
            for (slot, v) in row.iter_mut().zip(law) {
                *slot += share * v;
            }
        }
    }
    Ok(mix)
}

pub(crate) fn index_laws<R: Real>(sys: &AlliedSystem<R>, cap: usize) -> Result<IndexLaws<R>> {
    let n = sys.n();
    let d = sys.design();
    let xs = check_cap("X^n table", pow_cap(d.x_alphabet().size(), n), cap)?;
    let ys = check_cap("Y^n table", pow_cap(d.y_alphabet().size(), n), cap)?;
    check_cap("(X^n, Y^n) table", (xs as u128) * (ys as u128), cap)?;
    let (ni, nj, nk) = sys.codebook().sizes();
    let mut laws = IndexLaws {
        x: Vec::with_capacity(nj),
        y_actual: Vec::with_capacity(nj),
        y_ideal: Vec::with_capacity(nj),
    };
    for j in 0..nj {
        let mix = decoder_mixture(sys, j, cap)?;
        let mut lx = Vec::with_capacity(ni * nk);
        let mut lyi = Vec::with_capacity(ni * nk);
        let mut pb = Vec::with_capacity(ni * nk);
        for i in 0..ni {
            for k in 0..nk {
                let ac = sys.ac_letters(i, j, k);
                lx.push(x_law(sys, &ac));
                lyi.push(y_law_ideal(sys, &ac));
                pb.push(channel_law(sys, sys.codebook().a_word(i, j, k)));
            }
        }
        let pb = rows_to_array(pb, mix.nrows());
        laws.y_actual.push(pb.dot(&mix));
        laws.x.push(rows_to_array(lx, xs));
        laws.y_ideal.push(rows_to_array(lyi, ys));
    }
    Ok(laws)
}

fn xj_from_laws<R: Real>(sys: &AlliedSystem<R>, laws: &IndexLaws<R>) -> Result<JointPmf<R>> {
    let (ni, nj, nk) = sys.codebook().sizes();
    let total = R::of_usize(ni * nj * nk);
    let xs = laws.x[0].ncols();
    let mut probs = vec![R::zero(); xs * nj];
    for (j, lx) in laws.x.iter().enumerate() {
        for row in lx.rows() {
            for (x, &v) in row.iter().enumerate() {
                probs[x * nj + j] += v / total;
            }
        }
    }
    let mut axes = vec![sys.design().x_alphabet(); sys.n()];
    axes.push(Alphabet::new(nj)?);
    JointPmf::new(axes, probs)
}

fn xy_from_laws<R: Real>(sys: &AlliedSystem<R>, lx: &[Array2<R>], ly: &[Array2<R>]) -> Result<JointPmf<R>> {
    let (ni, nj, nk) = sys.codebook().sizes();
    let total = R::of_usize(ni * nj * nk);
    let mut acc: Option<Array2<R>> = None;
    for (x, y) in lx.iter().zip(ly) {
        let part = x.t().dot(y);
        acc = Some(match acc {
            Some(a) => a + part,
            None => part,
        });
    }
    let probs = acc
        .expect("at least one value of j")
        .into_raw_vec_and_offset()
        .0
        .into_iter()
        .map(|v| v / total)
        .collect();
    JointPmf::new(sequence_axes(sys), probs)
}

/// Ideal and decoder-aware induced pmfs together with the `(X^n, J)` joint.
pub fn induced_pmfs<R: Real>(sys: &AlliedSystem<R>) -> Result<InducedPmfs<R>> {
    induced_pmfs_capped(sys, DEFAULT_TABLE_CAP)
}

pub fn induced_pmfs_capped<R: Real>(sys: &AlliedSystem<R>, cap: usize) -> Result<InducedPmfs<R>> {
    let laws = index_laws(sys, cap)?;
    Ok(InducedPmfs {
        ideal: xy_from_laws(sys, &laws.x, &laws.y_ideal)?,
        actual: xy_from_laws(sys, &laws.x, &laws.y_actual)?,
        xj_joint: xj_from_laws(sys, &laws)?,
    })
}

/// Joint of `X^n` and `J` induced by the codebook, axes `[x_1 .. x_n, J]`.
pub fn xj_joint<R: Real>(sys: &AlliedSystem<R>) -> Result<JointPmf<R>> {
    let n = sys.n();
    let nx = sys.design().x_alphabet().size();
    let xs = check_cap("X^n table", pow_cap(nx, n), DEFAULT_TABLE_CAP)?;
    let (ni, nj, nk) = sys.codebook().sizes();
    check_cap("(X^n, J) table", (xs as u128) * nj as u128, DEFAULT_TABLE_CAP)?;
    let total = R::of_usize(ni * nj * nk);
    let mut probs = vec![R::zero(); xs * nj];
    for i in 0..ni {
        for j in 0..nj {
            for k in 0..nk {
                for (x, v) in x_law(sys, &sys.ac_letters(i, j, k)).into_iter().enumerate() {
                    probs[x * nj + j] += v / total;
                }
            }
        }
    }
    let mut axes = vec![sys.design().x_alphabet(); n];
    axes.push(Alphabet::new(nj)?);
    JointPmf::new(axes, probs)
}

/// Total variation between the ideal induced pmf and `target`.
pub fn resolvability_gap<R: Real>(sys: &AlliedSystem<R>, target: &JointPmf<R>) -> Result<R> {
    let ideal = ideal_pmf(sys)?;
    if ideal.dims_vec() != target.dims_vec() {
        return Err(Error::ShapeMismatch(format!(
            "target axes {:?} differ from the induced table {:?}",
            target.dims_vec(),
            ideal.dims_vec()
        )));
    }
    Ok(tv_slices(ideal.probs(), target.probs()))
}

/// Total variation between the induced `(X^n, J)` joint and `P_X^n x Unif(J)`.
pub fn independence_gap<R: Real>(sys: &AlliedSystem<R>) -> Result<R> {
    let xj = xj_joint(sys)?;
    let nj = sys.codebook().sizes().1;
    let px = sequence_pmf(&JointPmf::from(sys.p_x().clone()), sys.n(), DEFAULT_TABLE_CAP)?;
    let pj = R::one() / R::of_usize(nj);
    let reference: Vec<R> = px
        .probs()
        .iter()
        .flat_map(|&p| std::iter::repeat_n(p * pj, nj))
        .collect();
    Ok(tv_slices(xj.probs(), &reference))
}

/// Analytic law of `(X^n, Y^n)` under the coordination scheme: `X^n ~ P_X^n`
/// and `J` uniform, indices drawn from the decoder-aware posterior.
///
/// Pairs `(x, j)` outside the induced support are excluded and the rest
/// renormalized, matching the simulator's re-draw policy.
pub fn coordination_pmf<R: Real>(sys: &AlliedSystem<R>) -> Result<JointPmf<R>> {
    let laws = index_laws(sys, DEFAULT_TABLE_CAP)?;
    coordination_from_laws(sys, &laws)
}

fn coordination_from_laws<R: Real>(sys: &AlliedSystem<R>, laws: &IndexLaws<R>) -> Result<JointPmf<R>> {
    let nj = laws.x.len();
    let px = sequence_pmf(&JointPmf::from(sys.p_x().clone()), sys.n(), DEFAULT_TABLE_CAP)?;
    let pj = R::one() / R::of_usize(nj);
    let xs = laws.x[0].ncols();
    let ys = laws.y_actual[0].ncols();
    let mut acc = Array2::<R>::zeros((xs, ys));
    let mut accepted = R::zero();
    for (lx, ly) in laws.x.iter().zip(&laws.y_actual) {
        let sums: Vec<R> = lx.columns().into_iter().map(|c| c.sum()).collect();
        // Row x of the posterior-weighted sum is sum_ik P(x|ik) P(y|ik) / sum_ik P(x|ik).
        let scale: Vec<R> = sums
            .iter()
            .zip(px.probs())
            .map(|(&s, &p)| if s > R::zero() { p * pj / s } else { R::zero() })
            .collect();
        accepted += sums
            .iter()
            .zip(px.probs())
            .filter(|(&s, _)| s > R::zero())
            .map(|(_, &p)| p * pj)
            .sum();
        let mut scaled = lx.clone();
        for mut row in scaled.rows_mut() {
            for (v, &s) in row.iter_mut().zip(&scale) {
                *v *= s;
            }
        }
        acc = acc + scaled.t().dot(ly);
    }
    if accepted <= R::zero() {
        return Err(Error::Degenerate("no (x, j) pair lies in the induced support".into()));
    }
    let probs = acc
        .into_raw_vec_and_offset()
        .0
        .into_iter()
        .map(|v| v / accepted)
        .collect();
    JointPmf::new(sequence_axes(sys), probs)
}

/// The three terms bounding the coordination scheme's distance to the target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleTerms<R> {
    /// `TV(coordination law, target)`.
    pub coordination: R,
    /// `TV(P_X^n Unif(J), induced (X^n, J))`.
    pub independence: R,
    /// `TV` between the ideal and decoder-aware joints over `(X^n, Y^n, I, J, K)`.
    pub decoding: R,
    /// `TV(ideal, target)`.
    pub resolvability: R,
}

impl<R: Real> TriangleTerms<R> {
    pub fn bound(&self) -> R {
        self.independence + self.decoding + self.resolvability
    }
}

/// Evaluates every term of the coordination triangle inequality by enumeration.
pub fn triangle_terms<R: Real>(sys: &AlliedSystem<R>, target: &JointPmf<R>) -> Result<TriangleTerms<R>> {
    let laws = index_laws(sys, DEFAULT_TABLE_CAP)?;
    let coordination = coordination_from_laws(sys, &laws)?;
    let ideal = xy_from_laws(sys, &laws.x, &laws.y_ideal)?;
    if ideal.dims_vec() != target.dims_vec() {
        return Err(Error::ShapeMismatch(
            "target shape differs from the induced table".into(),
        ));
    }
    let (ni, nj, nk) = sys.codebook().sizes();
    let total = R::of_usize(ni * nj * nk);
    let mut decoding = R::zero();
    for (yi, ya) in laws.y_ideal.iter().zip(&laws.y_actual) {
        for (ri, ra) in yi.rows().into_iter().zip(ya.rows()) {
            decoding += tv_rows(ri, ra) / total;
        }
    }
    Ok(TriangleTerms {
        coordination: tv_slices(coordination.probs(), target.probs()),
        independence: independence_gap(sys)?,
        decoding,
        resolvability: tv_slices(ideal.probs(), target.probs()),
    })
}

fn tv_rows<R: Real>(a: ArrayView1<R>, b: ArrayView1<R>) -> R {
    let s: R = a.iter().zip(b.iter()).map(|(&p, &q)| (p - q).abs()).sum();
    s / R::of(2.0)
}

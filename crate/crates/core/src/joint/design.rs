use serde::{Deserialize, Serialize};

use crate::channel::{Dmc, MarkovChainSpec};
use crate::error::{Error, Result};
use crate::prob::{conditional_entropy, mutual_information_between, Alphabet, JointPmf, Pmf};
use crate::scalar::Real;

/// Axis positions of the five-variable design joint `(X, Y, A, B, C)`.
pub mod axis {
    pub const X: usize = 0;
    pub const Y: usize = 1;
    pub const A: usize = 2;
    pub const B: usize = 3;
    pub const C: usize = 4;
}

/// Single-letter design of the joint scheme:
/// `P_{XYABC} = P_C P_{A|C} P_{X|AC} P_{B|A} P_{Y|BC}`.
///
/// Composite inputs are C-major: `px_given_ac` is indexed by `c * |A| + a`
/// and `py_given_bc` by `c * |B| + b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "R: Serialize + Real", deserialize = "R: Deserialize<'de> + Real"))]
pub struct JointDesign<R> {
    pub p_c: Pmf<R>,
    pub p_a_given_c: Dmc<R>,
    pub px_given_ac: Dmc<R>,
    pub channel: Dmc<R>,
    pub py_given_bc: Dmc<R>,
}

/// The information quantities appearing in the joint scheme's rate constraints, in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InfoTerms {
    pub i_x_c: f64,
    pub i_x_ac: f64,
    pub i_xy_c: f64,
    pub i_xy_ac: f64,
    pub i_b_c: f64,
    pub h_y_bc: f64,
}

impl<R: Real> JointDesign<R> {
    pub fn new(
        p_c: Pmf<R>,
        p_a_given_c: Dmc<R>,
        px_given_ac: Dmc<R>,
        channel: Dmc<R>,
        py_given_bc: Dmc<R>,
    ) -> Result<Self> {
        let c = p_c.alphabet().size();
        if p_a_given_c.input().size() != c {
            return Err(Error::ShapeMismatch("P_{A|C} input must be the C alphabet".into()));
        }
        let a = p_a_given_c.output().size();
        if px_given_ac.input().size() != c * a {
            return Err(Error::ShapeMismatch(format!(
                "P_{{X|AC}} needs {} inputs, has {}",
                c * a,
                px_given_ac.input().size()
            )));
        }
        if channel.input().size() != a {
            return Err(Error::ShapeMismatch("channel input must be the A alphabet".into()));
        }
        let b = channel.output().size();
        if py_given_bc.input().size() != c * b {
            return Err(Error::ShapeMismatch(format!(
                "P_{{Y|BC}} needs {} inputs, has {}",
                c * b,
                py_given_bc.input().size()
            )));
        }
        Ok(JointDesign {
            p_c,
            p_a_given_c,
            px_given_ac,
            channel,
            py_given_bc,
        })
    }

    /// Recovers the factors from a joint over `(X, Y, A, B, C)`.
    ///
    /// Conditioning events of zero mass get uniform rows. The factorization
    /// itself is not checked; see [`JointDesign::check_factorization`].
    pub fn from_joint(joint: &JointPmf<R>) -> Result<Self> {
        use axis::*;
        if joint.num_axes() != 5 {
            return Err(Error::ShapeMismatch(format!(
                "design joint needs axes (X, Y, A, B, C), got {}",
                joint.num_axes()
            )));
        }
        let p_c = joint.marginalize(&[C])?.to_pmf()?;
        JointDesign::new(
            p_c,
            Dmc::conditional(joint, &[C], &[A])?,
            Dmc::conditional(joint, &[C, A], &[X])?,
            Dmc::conditional(joint, &[A], &[B])?,
            Dmc::conditional(joint, &[C, B], &[Y])?,
        )
    }

    /// Fails unless `joint` equals the product of its own factors within `1e-9` per entry.
    pub fn check_factorization(joint: &JointPmf<R>) -> Result<Self> {
        let design = Self::from_joint(joint)?;
        let rebuilt = design.joint()?;
        if rebuilt.axes() != joint.axes() {
            return Err(Error::Factorization("axis alphabets differ".into()));
        }
        let worst = rebuilt
            .probs()
            .iter()
            .zip(joint.probs())
            .map(|(a, b)| (*a - *b).abs())
            .fold(R::zero(), R::max);
        if worst > R::of(1e-9) {
            return Err(Error::Factorization(format!(
                "joint differs from P_C P_{{A|C}} P_{{X|AC}} P_{{B|A}} P_{{Y|BC}} by {worst}"
            )));
        }
        Ok(design)
    }

    pub fn x_alphabet(&self) -> Alphabet {
        self.px_given_ac.output()
    }
    pub fn y_alphabet(&self) -> Alphabet {
        self.py_given_bc.output()
    }
    pub fn a_alphabet(&self) -> Alphabet {
        self.p_a_given_c.output()
    }
    pub fn b_alphabet(&self) -> Alphabet {
        self.channel.output()
    }
    pub fn c_alphabet(&self) -> Alphabet {
        self.p_c.alphabet()
    }

    /// The chain `C -> A -> X, B -> Y` with variables numbered `[C, A, X, B, Y]`.
    pub fn chain(&self) -> Result<MarkovChainSpec<R>> {
        MarkovChainSpec::new(self.p_c.clone())
            .stage(&[0], self.p_a_given_c.clone())?
            .stage(&[0, 1], self.px_given_ac.clone())?
            .stage(&[1], self.channel.clone())?
            .stage(&[0, 3], self.py_given_bc.clone())
    }

    /// Joint pmf over `(X, Y, A, B, C)`.
    pub fn joint(&self) -> Result<JointPmf<R>> {
        self.chain()?.joint()?.permute_axes(&[2, 4, 1, 3, 0])
    }

    pub fn p_x(&self) -> Result<Pmf<R>> {
        self.joint()?.marginalize(&[axis::X])?.to_pmf()
    }

    /// Target pmf over `(X, Y)`.
    pub fn p_xy(&self) -> Result<JointPmf<R>> {
        self.joint()?.marginalize(&[axis::X, axis::Y])
    }

    /// Conditional of `B` given `C`, used by the decoder's likelihood tie-break.
    pub fn p_b_given_c(&self) -> Result<Dmc<R>> {
        Dmc::conditional(&self.joint()?, &[axis::C], &[axis::B])
    }

    /// Joint over `(B, C)`, the typicality reference of the decoder.
    pub fn p_bc(&self) -> Result<JointPmf<R>> {
        self.joint()?.marginalize(&[axis::B, axis::C])
    }

    /// `P_{Y|AC}(y | a, c) = sum_b P_{B|A}(b | a) P_{Y|BC}(y | b, c)`, input `c * |A| + a`.
    pub fn py_given_ac(&self) -> Result<Dmc<R>> {
        let (na, nb, nc) = (
            self.a_alphabet().size(),
            self.b_alphabet().size(),
            self.c_alphabet().size(),
        );
        let ny = self.y_alphabet().size();
        let mut rows = Vec::with_capacity(na * nc);
        for c in 0..nc {
            for a in 0..na {
                let mut row = vec![R::zero(); ny];
                for b in 0..nb {
                    let w = self.channel.prob(a, b);
                    for (y, slot) in row.iter_mut().enumerate() {
                        *slot += w * self.py_given_bc.prob(c * nb + b, y);
                    }
                }
                rows.push(row);
            }
        }
        Dmc::new(rows)
    }

    pub fn info_terms(&self) -> Result<InfoTerms> {
        info_terms(&self.joint()?)
    }
}

/// Information terms of a design joint over `(X, Y, A, B, C)`.
pub fn info_terms<R: Real>(joint: &JointPmf<R>) -> Result<InfoTerms> {
    use axis::*;
    let mi = |g1: &[usize], g2: &[usize]| -> Result<f64> { Ok(mutual_information_between(joint, g1, g2)?.as_f64()) };
    Ok(InfoTerms {
        i_x_c: mi(&[X], &[C])?,
        i_x_ac: mi(&[X], &[A, C])?,
        i_xy_c: mi(&[X, Y], &[C])?,
        i_xy_ac: mi(&[X, Y], &[A, C])?,
        i_b_c: mi(&[B], &[C])?,
        h_y_bc: conditional_entropy(joint, &[Y], &[B, C])?.as_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn sample_design() -> JointDesign<f64> {
        JointDesign::new(
            Pmf::from_f64(&[0.4, 0.6]).unwrap(),
            Dmc::from_f64(&[&[0.8, 0.2], &[0.3, 0.7]]).unwrap(),
            Dmc::from_f64(&[&[0.9, 0.1], &[0.6, 0.4], &[0.2, 0.8], &[0.5, 0.5]]).unwrap(),
            Dmc::bsc(0.1).unwrap(),
            Dmc::from_f64(&[&[0.7, 0.3], &[0.1, 0.9], &[0.4, 0.6], &[0.95, 0.05]]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn factor_roundtrip() {
        let d = sample_design();
        let j = d.joint().unwrap();
        let back = JointDesign::check_factorization(&j).unwrap();
        for (a, b) in back.px_given_ac.matrix().iter().zip(d.px_given_ac.matrix()) {
            assert_abs_diff_eq!(*a, *b, epsilon = 1e-12);
        }
        assert_abs_diff_eq!(
            j.prob(&[1, 0, 1, 0, 1]).unwrap(),
            0.6 * 0.7 * 0.5 * 0.1 * 0.4,
            epsilon = 1e-15
        );
    }

    #[test]
    fn non_factorized_joint_is_rejected() {
        let d = sample_design();
        let mut probs = d.joint().unwrap().probs().to_vec();
        // Move mass so that Y depends on X beyond (B, C).
        probs[0] += 0.01;
        probs[1] -= 0.01;
        let j = JointPmf::new(d.joint().unwrap().axes().to_vec(), probs).unwrap();
        assert!(matches!(
            JointDesign::check_factorization(&j),
            Err(Error::Factorization(_))
        ));
    }

    #[test]
    fn py_given_ac_marginalizes_channel() {
        let d = sample_design();
        let m = d.py_given_ac().unwrap();
        // c = 1, a = 0: B ~ BSC(0.1)(0) -> rows 2 and 3 of P_{Y|BC}.
        assert_abs_diff_eq!(m.prob(2, 0), 0.9 * 0.4 + 0.1 * 0.95, epsilon = 1e-12);
    }
}

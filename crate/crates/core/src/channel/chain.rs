use super::dmc::Dmc;
use crate::error::{Error, Result};
use crate::prob::{check_cap, JointPmf, DEFAULT_TABLE_CAP};
use crate::scalar::Real;

/// One conditional stage of a chain: a channel fed by earlier variables.
#[derive(Debug, Clone, PartialEq)]
pub struct Stage<R> {
    /// Upstream variables feeding the channel. Their joint symbol is ranked
    /// row-major in this order (first listed variable most significant).
    pub inputs: Vec<usize>,
    pub channel: Dmc<R>,
}

/// A source distribution followed by conditional stages, each adding one variable.
///
/// Variables are numbered by position: the source axes first, then one
/// variable per stage in order. The joint built from it has exactly
/// that axis order.
#[derive(Debug, Clone, PartialEq)]
pub struct MarkovChainSpec<R> {
    source: JointPmf<R>,
    stages: Vec<Stage<R>>,
}

impl<R: Real> MarkovChainSpec<R> {
    pub fn new(source: impl Into<JointPmf<R>>) -> Self {
        MarkovChainSpec {
            source: source.into(),
            stages: Vec::new(),
        }
    }

    /// Appends a stage and returns the index of the new variable.
    pub fn push(&mut self, inputs: &[usize], channel: Dmc<R>) -> Result<usize> {
        let count = self.num_variables();
        if inputs.is_empty() {
            return Err(Error::Specification("a stage needs at least one input".into()));
        }
        let mut expected = 1usize;
        for &v in inputs {
            if v >= count {
                return Err(Error::Specification(format!(
                    "stage input {v} refers to a variable not yet defined ({count} so far)"
                )));
            }
            expected *= self.variable_size(v);
        }
        if expected != channel.input().size() {
            return Err(Error::Specification(format!(
                "stage inputs span {expected} joint symbols but the channel accepts {}",
                channel.input().size()
            )));
        }
        self.stages.push(Stage {
            inputs: inputs.to_vec(),
            channel,
        });
        Ok(count)
    }

    /// Builder-style [`MarkovChainSpec::push`].
    pub fn stage(mut self, inputs: &[usize], channel: Dmc<R>) -> Result<Self> {
        self.push(inputs, channel)?;
        Ok(self)
    }

    pub fn source(&self) -> &JointPmf<R> {
        &self.source
    }

    pub fn stages(&self) -> &[Stage<R>] {
        &self.stages
    }

    pub fn num_variables(&self) -> usize {
        self.source.num_axes() + self.stages.len()
    }

    pub fn variable_size(&self, v: usize) -> usize {
        let ns = self.source.num_axes();
        if v < ns {
            self.source.axes()[v].size()
        } else {
            self.stages[v - ns].channel.output().size()
        }
    }

    pub fn joint(&self) -> Result<JointPmf<R>> {
        joint_from_chain_capped(self, DEFAULT_TABLE_CAP)
    }
}

/// Full joint pmf over every chain variable.
pub fn joint_from_chain<R: Real>(spec: &MarkovChainSpec<R>) -> Result<JointPmf<R>> {
    joint_from_chain_capped(spec, DEFAULT_TABLE_CAP)
}

pub fn joint_from_chain_capped<R: Real>(spec: &MarkovChainSpec<R>, cap: usize) -> Result<JointPmf<R>> {
    let total: u128 = (0..spec.num_variables())
        .map(|v| spec.variable_size(v) as u128)
        .fold(1u128, |a, b| a.saturating_mul(b));
    check_cap("chain joint", total, cap)?;

    let mut dims: Vec<usize> = spec.source.dims_vec();
    let mut table: Vec<R> = spec.source.probs().to_vec();
    for stage in &spec.stages {
        let out = stage.channel.output().size();
        let strides = {
            let mut s = vec![1usize; dims.len()];
            for a in (0..dims.len().saturating_sub(1)).rev() {
                s[a] = s[a + 1] * dims[a + 1];
            }
            s
        };
        let mut next = Vec::with_capacity(table.len() * out);
        for (idx, &p) in table.iter().enumerate() {
            let row = if p == R::zero() {
                None
            } else {
                let input = stage
                    .inputs
                    .iter()
                    .fold(0usize, |acc, &v| acc * dims[v] + (idx / strides[v]) % dims[v]);
                Some(stage.channel.row(input))
            };
            match row {
                Some(row) => next.extend(row.iter().map(|&w| p * w)),
                None => next.extend(std::iter::repeat_n(R::zero(), out)),
            }
        }
        dims.push(out);
        table = next;
    }
    let axes = (0..spec.num_variables())
        .map(|v| {
            let ns = spec.source.num_axes();
            if v < ns {
                spec.source.axes()[v]
            } else {
                spec.stages[v - ns].channel.output()
            }
        })
        .collect();
    JointPmf::new(axes, table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::Pmf;
    use approx::assert_abs_diff_eq;

    #[test]
    fn single_bsc_stage() {
        let spec = MarkovChainSpec::new(Pmf::<f64>::bernoulli(0.5).unwrap())
            .stage(&[0], Dmc::bsc(0.1).unwrap())
            .unwrap();
        let j = joint_from_chain(&spec).unwrap();
        for (a, b) in j.probs().iter().zip([0.45, 0.05, 0.05, 0.45]) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-12);
        }
    }

    #[test]
    fn composite_input_ranking() {
        // Third variable copies the pair (v0, v1) as v0 * 2 + v1.
        let src = JointPmf::<f64>::from_dims(&[2, 2], vec![0.1, 0.2, 0.3, 0.4]).unwrap();
        let spec = MarkovChainSpec::new(src)
            .stage(&[0, 1], Dmc::identity(crate::prob::Alphabet::new(4).unwrap()))
            .unwrap();
        let j = spec.joint().unwrap();
        assert_abs_diff_eq!(j.prob(&[1, 0, 2]).unwrap(), 0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(j.prob(&[0, 1, 1]).unwrap(), 0.2, epsilon = 1e-15);
    }

    #[test]
    fn wiring_errors() {
        let spec = MarkovChainSpec::new(Pmf::<f64>::bernoulli(0.5).unwrap());
        assert!(spec.clone().stage(&[1], Dmc::bsc(0.1).unwrap()).is_err());
        let three = Dmc::<f64>::uniform(crate::prob::Alphabet::new(3).unwrap(), crate::prob::Alphabet::BINARY);
        assert!(spec.stage(&[0], three).is_err());
    }

    #[test]
    fn cap_is_enforced() {
        let mut spec = MarkovChainSpec::new(Pmf::<f64>::bernoulli(0.5).unwrap());
        for v in 0..10 {
            spec.push(&[v], Dmc::bsc(0.1).unwrap()).unwrap();
        }
        assert!(joint_from_chain_capped(&spec, 1024).unwrap_err().is_resource());
        assert!(joint_from_chain_capped(&spec, 2048).is_ok());
    }
}

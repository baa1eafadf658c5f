//! Membership tests for the inner bounds of the joint and separation schemes.

use serde::{Deserialize, Serialize};

use crate::channel::{AdditiveChannel, Dmc};
use crate::error::{Error, Result};
use crate::joint::{info_terms, JointDesign};
use crate::prob::{conditional_entropy, conditional_mutual_information, mutual_information_between, JointPmf, Pmf};
use crate::scalar::Real;

/// Margin by which strict inequalities must hold.
pub const STRICT_MARGIN: f64 = 1e-9;

/// Rates in bits per action, plus the rate-transfer slacks `delta1`, `delta2`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RateTuple {
    pub ro: f64,
    pub rho1: f64,
    pub rho2: f64,
    pub rc: f64,
    pub ra: f64,
    #[serde(default)]
    pub delta1: f64,
    #[serde(default)]
    pub delta2: f64,
}

impl RateTuple {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("Ro", self.ro),
            ("rho1", self.rho1),
            ("rho2", self.rho2),
            ("Rc", self.rc),
            ("Ra", self.ra),
            ("delta1", self.delta1),
            ("delta2", self.delta2),
        ];
        for (name, v) in fields {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::Domain(format!("{name} = {v} must be a non-negative rate")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Relation {
    /// `lhs > rhs`.
    Greater,
    /// `lhs >= rhs`.
    AtLeast,
    /// `lhs < rhs`.
    Less,
}

/// One inequality evaluated at a rate tuple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintCheck {
    pub name: String,
    pub relation: Relation,
    pub lhs: f64,
    pub rhs: f64,
    /// Signed distance to the boundary; positive means satisfied with room.
    pub slack: f64,
    pub satisfied: bool,
}

impl ConstraintCheck {
    fn new(name: &str, relation: Relation, lhs: f64, rhs: f64) -> Self {
        let slack = match relation {
            Relation::Greater | Relation::AtLeast => lhs - rhs,
            Relation::Less => rhs - lhs,
        };
        let satisfied = match relation {
            Relation::AtLeast => slack >= -STRICT_MARGIN,
            _ => slack > STRICT_MARGIN,
        };
        ConstraintCheck {
            name: name.to_string(),
            relation,
            lhs,
            rhs,
            slack,
            satisfied,
        }
    }
}

/// Verdict and per-inequality slacks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub member: bool,
    pub constraints: Vec<ConstraintCheck>,
}

impl MembershipReport {
    fn from_checks(constraints: Vec<ConstraintCheck>) -> Self {
        MembershipReport {
            member: constraints.iter().all(|c| c.satisfied),
            constraints,
        }
    }

    /// Names of the violated inequalities.
    pub fn failing(&self) -> Vec<&str> {
        self.constraints
            .iter()
            .filter(|c| !c.satisfied)
            .map(|c| c.name.as_str())
            .collect()
    }
}

/// Tests a rate tuple against the joint scheme's achievable region for a
/// design joint over `(X, Y, A, B, C)`.
pub fn theorem1_member<R: Real>(rates: &RateTuple, design: &JointPmf<R>) -> Result<MembershipReport> {
    rates.validate()?;
    JointDesign::check_factorization(design)?;
    let t = info_terms(design)?;
    let (d1, d2) = (rates.delta1, rates.delta2);
    use Relation::*;
    Ok(MembershipReport::from_checks(vec![
        ConstraintCheck::new(
            "resolvability-sum",
            Greater,
            rates.ra + rates.ro + rates.rc,
            t.i_xy_ac + d1 + d2,
        ),
        ConstraintCheck::new("resolvability-common", Greater, rates.ro + rates.rc, t.i_xy_c + d1 + d2),
        ConstraintCheck::new("independence-sum", Greater, rates.ra + rates.rc, t.i_x_ac),
        ConstraintCheck::new("independence-c", Greater, rates.rc, t.i_x_c),
        ConstraintCheck::new("decodability", Less, rates.rc, t.i_b_c),
        ConstraintCheck::new(
            "local-randomness-x",
            Greater,
            rates.rho1,
            rates.ra + rates.rc - t.i_x_ac - d1,
        ),
        ConstraintCheck::new("local-randomness-y", Greater, rates.rho2, t.h_y_bc - d2),
    ]))
}

/// Information terms of the separation scheme, in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparateTerms {
    pub i_xy_u: f64,
    pub i_x_u: f64,
    pub h_y_u: f64,
    pub i_a_b: f64,
    pub h_z: f64,
}

/// Evaluates the separation scheme's terms for a coordination design over
/// `(X, Y, U)` and an additive channel driven by `input`.
pub fn separate_terms<R: Real>(p_xyu: &JointPmf<R>, channel: &Dmc<R>, input: &Pmf<R>) -> Result<SeparateTerms> {
    if p_xyu.num_axes() != 3 {
        return Err(Error::ShapeMismatch("coordination design needs axes (X, Y, U)".into()));
    }
    let cmi = conditional_mutual_information(p_xyu, &[0], &[1], &[2])?.as_f64();
    if cmi > 1e-9 {
        return Err(Error::Factorization(format!(
            "X - U - Y is not a Markov chain: I(X;Y|U) = {cmi}"
        )));
    }
    let additive = AdditiveChannel::from_dmc(channel)?;
    let ab = channel.joint(input)?;
    Ok(SeparateTerms {
        i_xy_u: mutual_information_between(p_xyu, &[0, 1], &[2])?.as_f64(),
        i_x_u: mutual_information_between(p_xyu, &[0], &[2])?.as_f64(),
        h_y_u: conditional_entropy(p_xyu, &[1], &[2])?.as_f64(),
        i_a_b: mutual_information_between(&ab, &[0], &[1])?.as_f64(),
        h_z: additive.noise_entropy().as_f64(),
    })
}

/// Tests a rate tuple against the separation scheme's achievable region.
pub fn theorem2_member<R: Real>(
    rates: &RateTuple,
    p_xyu: &JointPmf<R>,
    channel: &Dmc<R>,
    input: &Pmf<R>,
) -> Result<MembershipReport> {
    rates.validate()?;
    let t = separate_terms(p_xyu, channel, input)?;
    let (d1, d2) = (rates.delta1, rates.delta2);
    use Relation::*;
    Ok(MembershipReport::from_checks(vec![
        ConstraintCheck::new("resolvability-sum", AtLeast, rates.rc + rates.ro, t.i_xy_u + d1 + d2),
        ConstraintCheck::new("independence-c", AtLeast, rates.rc, t.i_x_u),
        ConstraintCheck::new("decodability", Less, rates.rc, t.i_a_b),
        ConstraintCheck::new("local-randomness-x", AtLeast, rates.rho1, rates.rc - t.i_x_u - d1),
        ConstraintCheck::new(
            "local-randomness-y",
            AtLeast,
            rates.rho2,
            (t.h_y_u - t.h_z).max(0.0) - d2,
        ),
    ]))
}

/// Infimum of `Ro + rho1 + rho2` over the closure of the separation region
/// with zero slacks, or `None` when `I(X;U)` exceeds `I(A;B)`.
pub fn theorem2_min_randomness(t: &SeparateTerms) -> Option<f64> {
    if t.i_x_u > t.i_a_b + STRICT_MARGIN {
        return None;
    }
    // With Rc in [I(X;U), I(XY;U)] the sum is I(XY;U) - I(X;U) + rho2; larger
    // Rc trades Ro for rho1 one to one.
    Some(t.i_xy_u - t.i_x_u + (t.h_y_u - t.h_z).max(0.0))
}

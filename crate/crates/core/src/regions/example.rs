//! The binary example: a doubly symmetric binary target coordinated over a BSC.

use serde::{Deserialize, Serialize};

use crate::channel::{Dmc, MarkovChainSpec};
use crate::error::{Error, Result};
use crate::joint::JointDesign;
use crate::prob::{h2, Alphabet, JointPmf, Pmf};
use crate::scalar::Real;

/// Parameters of the binary example. `p` is the target crossover between X
/// and Y, `p_o` the channel crossover.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExampleParams {
    pub p: f64,
    pub p_o: f64,
    pub p1: f64,
    pub p2: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl ExampleParams {
    /// Completes `(p1, p_o, alpha, beta)` with `p2 = (1-p_o) alpha + p_o beta`
    /// and the end-to-end crossover `p = p1 + p2 - 2 p1 p2`.
    pub fn from_design(p1: f64, p_o: f64, alpha: f64, beta: f64) -> Result<Self> {
        for (name, v) in [("p1", p1), ("p_o", p_o), ("alpha", alpha), ("beta", beta)] {
            unit(name, v)?;
        }
        let p2 = (1.0 - p_o) * alpha + p_o * beta;
        Ok(ExampleParams {
            p: p1 + p2 - 2.0 * p1 * p2,
            p_o,
            p1,
            p2,
            alpha,
            beta,
        })
    }
}

fn unit(name: &str, v: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::Domain(format!("{name} = {v} outside [0,1]")));
    }
    Ok(())
}

/// Channel noise level below which joint and separate-with-extraction schemes
/// need the same randomness: `(1 - sqrt(1 - 2p)) / 2`.
pub fn threshold_po(p: f64) -> Result<f64> {
    if !(0.0..=0.5).contains(&p) {
        return Err(Error::Domain(format!("p = {p} outside [0, 0.5]")));
    }
    Ok((1.0 - (1.0 - 2.0 * p).sqrt()) / 2.0)
}

fn bsc_rows<R: Real>(q: f64) -> [Vec<R>; 2] {
    [vec![R::of(1.0 - q), R::of(q)], vec![R::of(q), R::of(1.0 - q)]]
}

/// Example chain `X -> (C, A) -> (C, B) -> Y` with `X ~ Bern(1/2)` and `A = C`.
///
/// Composite variables are C-major: `(c, a)` has index `2c + a`, likewise
/// `(c, b)`. Rows of `P_{CB|CA}` for the impossible inputs `a != c` are uniform.
pub fn example_chain_matrices<R: Real>(p1: f64, p_o: f64, alpha: f64, beta: f64) -> Result<MarkovChainSpec<R>> {
    for (name, v) in [("p1", p1), ("p_o", p_o), ("alpha", alpha), ("beta", beta)] {
        unit(name, v)?;
    }
    let r = R::of;
    let ca_given_x = Dmc::new(vec![
        vec![r(1.0 - p1), r(0.0), r(0.0), r(p1)],
        vec![r(p1), r(0.0), r(0.0), r(1.0 - p1)],
    ])?;
    let q = r(0.25);
    let cb_given_ca = Dmc::new(vec![
        vec![r(1.0 - p_o), r(p_o), r(0.0), r(0.0)],
        vec![q; 4],
        vec![q; 4],
        vec![r(0.0), r(0.0), r(p_o), r(1.0 - p_o)],
    ])?;
    let y_given_cb = Dmc::new(vec![
        vec![r(1.0 - alpha), r(alpha)],
        vec![r(1.0 - beta), r(beta)],
        vec![r(beta), r(1.0 - beta)],
        vec![r(alpha), r(1.0 - alpha)],
    ])?;
    MarkovChainSpec::new(Pmf::<R>::uniform(Alphabet::BINARY))
        .stage(&[0], ca_given_x)?
        .stage(&[1], cb_given_ca)?
        .stage(&[2], y_given_cb)
}

/// Rearranges the example chain joint `[X, CA, CB, Y]` into `(X, Y, A, B, C)`.
pub fn example_design_joint<R: Real>(chain_joint: &JointPmf<R>) -> Result<JointPmf<R>> {
    if chain_joint.dims_vec() != [2, 4, 4, 2] {
        return Err(Error::ShapeMismatch(format!(
            "expected the example chain axes [2, 4, 4, 2], got {:?}",
            chain_joint.dims_vec()
        )));
    }
    // [X, C, A, C', B, Y]; C' duplicates C.
    let split = chain_joint.split_axis(1, &[2, 2])?.split_axis(3, &[2, 2])?;
    split.marginalize(&[0, 1, 2, 4, 5])?.permute_axes(&[0, 4, 2, 3, 1])
}

/// The example as a joint-scheme design: `C ~ Bern(1/2)`, `A = C`,
/// `X = C` through `BSC(p1)`, channel `BSC(p_o)`, and the symmetric `P_{Y|BC}`.
pub fn example_design<R: Real>(p1: f64, p_o: f64, alpha: f64, beta: f64) -> Result<JointDesign<R>> {
    for (name, v) in [("p1", p1), ("p_o", p_o), ("alpha", alpha), ("beta", beta)] {
        unit(name, v)?;
    }
    let r = R::of;
    let [x0, x1] = bsc_rows::<R>(p1);
    let half = vec![r(0.5), r(0.5)];
    JointDesign::new(
        Pmf::uniform(Alphabet::BINARY),
        Dmc::identity(Alphabet::BINARY),
        // (c, a) = 00, 01, 10, 11; only a = c occurs.
        Dmc::new(vec![x0, half.clone(), half, x1])?,
        Dmc::bsc(r(p_o))?,
        Dmc::new(vec![
            vec![r(1.0 - alpha), r(alpha)],
            vec![r(1.0 - beta), r(beta)],
            vec![r(beta), r(1.0 - beta)],
            vec![r(alpha), r(1.0 - alpha)],
        ])?,
    )
}

/// Closed-form information terms of the example, in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExampleClosedForms {
    /// `I(X;C) = I(X;AC)`.
    pub i_x_c: f64,
    /// `I(XY;C) = I(XY;AC)`.
    pub i_xy_c: f64,
    pub i_b_c: f64,
    pub h_y_bc: f64,
}

pub fn example_closed_forms(p1: f64, p_o: f64, alpha: f64, beta: f64) -> Result<ExampleClosedForms> {
    let e = ExampleParams::from_design(p1, p_o, alpha, beta)?;
    Ok(ExampleClosedForms {
        i_x_c: 1.0 - h2(p1),
        i_xy_c: 1.0 + h2(e.p) - h2(p1) - h2(e.p2),
        i_b_c: 1.0 - h2(p_o),
        h_y_bc: p_o * h2(beta) + (1.0 - p_o) * h2(alpha),
    })
}

/// Coordination design of the separation scheme's example over `(X, Y, U)`:
/// `U = X` through `BSC(p1)` and `Y = U` through `BSC(p2)`.
pub fn example_separate_design<R: Real>(p1: f64, p2: f64) -> Result<JointPmf<R>> {
    unit("p1", p1)?;
    unit("p2", p2)?;
    let spec = MarkovChainSpec::new(Pmf::<R>::uniform(Alphabet::BINARY))
        .stage(&[0], Dmc::bsc(R::of(p1))?)?
        .stage(&[1], Dmc::bsc(R::of(p2))?)?;
    // Chain order [X, U, Y] -> (X, Y, U).
    spec.joint()?.permute_axes(&[0, 2, 1])
}

/// Randomness and communication requirements of the separation scheme in the example.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeparateRegion {
    /// False when no `p2 >= 0` reaches the extraction-maximizing point (`p_o > p`).
    pub feasible: bool,
    /// Minimum `Ro + rho1 + rho2` with extraction.
    pub min_sum_rate: f64,
    /// Minimum `Ro + rho1 + rho2` without extraction, `h2(p)`.
    pub baseline_sum_rate: f64,
    pub min_rc: f64,
    pub p1: f64,
    pub p2: f64,
}

/// Separation scheme at the extraction-maximizing operating point `h2(p1) = h2(p_o)`.
pub fn example_separate_region(p: f64, p_o: f64) -> Result<SeparateRegion> {
    check_example_domain(p, p_o)?;
    let p1 = p_o;
    let p2 = (p - p_o) / (1.0 - 2.0 * p_o);
    let baseline = h2(p);
    if p2 < 0.0 {
        return Ok(SeparateRegion {
            feasible: false,
            min_sum_rate: f64::NAN,
            baseline_sum_rate: baseline,
            min_rc: f64::NAN,
            p1,
            p2: f64::NAN,
        });
    }
    Ok(SeparateRegion {
        feasible: true,
        min_sum_rate: baseline - h2(p2).min(h2(p_o)),
        baseline_sum_rate: baseline,
        min_rc: 1.0 - h2(p1),
        p1,
        p2,
    })
}

fn check_example_domain(p: f64, p_o: f64) -> Result<()> {
    if !(p > 0.0 && p < 0.5) {
        return Err(Error::Domain(format!("p = {p} outside (0, 0.5)")));
    }
    if !(0.0..0.5).contains(&p_o) {
        return Err(Error::Domain(format!("p_o = {p_o} outside [0, 0.5)")));
    }
    Ok(())
}

/// Minimizer of the joint scheme's randomness sum rate in the example.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointOptimum {
    pub feasible: bool,
    pub min_sum_rate: f64,
    pub min_rc: f64,
    pub p1: f64,
    pub p2: f64,
    pub alpha: f64,
    pub beta: f64,
}

impl JointOptimum {
    fn infeasible() -> Self {
        JointOptimum {
            feasible: false,
            min_sum_rate: f64::NAN,
            min_rc: f64::NAN,
            p1: f64::NAN,
            p2: f64::NAN,
            alpha: f64::NAN,
            beta: f64::NAN,
        }
    }
}

const CONSTRAINT_TOL: f64 = 1e-9;
const SINGULAR_TOL: f64 = 1e-6;
const IMPROVEMENT_TOL: f64 = 1e-12;

/// Objective at `(alpha, beta)`, or `None` when infeasible. Returns `(value, p1, p2)`.
fn joint_objective(p: f64, p_o: f64, h_po: f64, alpha: f64, beta: f64) -> Option<(f64, f64, f64)> {
    let p2 = (1.0 - p_o) * alpha + p_o * beta;
    if !(0.0..=p).contains(&p2) || (1.0 - 2.0 * p2).abs() < SINGULAR_TOL {
        return None;
    }
    let p1 = (p - p2) / (1.0 - 2.0 * p2);
    if !(0.0..=0.5).contains(&p1) || h2(p1) - h_po < -CONSTRAINT_TOL {
        return None;
    }
    let value = h2(p) - h2(p2) + (1.0 - p_o) * h2(alpha) + p_o * h2(beta);
    Some((value, p1, p2))
}

/// Golden-section minimization of `f` on `[lo, hi]`; infeasible points score `+inf`.
fn golden_section(mut lo: f64, mut hi: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if hi - lo < 1e-12 {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Minimizes the joint scheme's randomness sum rate over `(alpha, beta)`.
///
/// A grid of spacing `grid_resolution` over `[0,1]^2` (alpha outer) locates
/// the incumbent, which is then refined by alternating golden-section
/// searches within one grid cell.
pub fn example_joint_optimize(p: f64, p_o: f64, grid_resolution: f64) -> Result<JointOptimum> {
    check_example_domain(p, p_o)?;
    if !(grid_resolution > 0.0 && grid_resolution <= 1e-3) {
        return Err(Error::Domain(format!(
            "grid resolution {grid_resolution} must lie in (0, 1e-3]"
        )));
    }
    let h_po = h2(p_o);
    let steps = (1.0 / grid_resolution).round() as usize;
    let at = |s: usize| (s as f64 / steps as f64).min(1.0);
    let mut best: Option<(f64, f64, f64)> = None;
    for sa in 0..=steps {
        let alpha = at(sa);
        // p2 grows with beta; once beyond p, the rest of the row is infeasible.
        if (1.0 - p_o) * alpha > p {
            break;
        }
        for sb in 0..=steps {
            let beta = at(sb);
            if (1.0 - p_o) * alpha + p_o * beta > p {
                break;
            }
            if let Some((v, _, _)) = joint_objective(p, p_o, h_po, alpha, beta) {
                if best.is_none_or(|(bv, _, _)| v < bv - IMPROVEMENT_TOL) {
                    best = Some((v, alpha, beta));
                }
            }
        }
    }
    let Some((mut value, mut alpha, mut beta)) = best else {
        return Ok(JointOptimum::infeasible());
    };
    let score = |a: f64, b: f64| joint_objective(p, p_o, h_po, a, b).map_or(f64::INFINITY, |t| t.0);
    for _ in 0..4 {
        let (a, va) = golden_section(
            (alpha - grid_resolution).max(0.0),
            (alpha + grid_resolution).min(1.0),
            |a| score(a, beta),
        );
        if va < value - IMPROVEMENT_TOL {
            alpha = a;
            value = va;
        }
        let (b, vb) = golden_section(
            (beta - grid_resolution).max(0.0),
            (beta + grid_resolution).min(1.0),
            |b| score(alpha, b),
        );
        if vb < value - IMPROVEMENT_TOL {
            beta = b;
            value = vb;
        }
    }
    let (value, p1, p2) = joint_objective(p, p_o, h_po, alpha, beta).expect("incumbent is feasible");
    Ok(JointOptimum {
        feasible: true,
        min_sum_rate: value,
        min_rc: 1.0 - h2(p1),
        p1,
        p2,
        alpha,
        beta,
    })
}

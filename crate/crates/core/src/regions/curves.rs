//! Randomness and communication-rate curves of the binary example, with CSV output.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::example::{example_joint_optimize, example_separate_region};
use crate::error::{Error, Result};
use crate::prob::h2;

/// Points `start, start + step, ...` strictly below `stop`.
pub fn grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && start.is_finite() && stop.is_finite()) {
        return Err(Error::Domain(format!("invalid grid {start}:{stop}:{step}")));
    }
    let count = ((stop - start) / step - 1e-9).ceil().max(0.0) as usize;
    Ok((0..count)
        .map(|i| {
            let v = start + i as f64 * step;
            (v * 1e12).round() / 1e12
        })
        .collect())
}

/// Randomness sum rates at one channel noise level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fig3Row {
    pub p_o: f64,
    /// `NaN` when the joint optimization is infeasible.
    pub joint_sum: f64,
    /// `NaN` when the extraction-maximizing point does not exist.
    pub sep_ext_sum: f64,
    pub sep_basic_sum: f64,
}

/// Communication rates at one channel noise level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fig4Row {
    pub p_o: f64,
    pub joint_rc: f64,
    pub sep_ext_rc: f64,
}

fn check_grid(p_o_grid: &[f64]) -> Result<()> {
    if let Some(bad) = p_o_grid.iter().find(|v| !(0.0..0.5).contains(*v)) {
        return Err(Error::Domain(format!("grid point p_o = {bad} outside [0, 0.5)")));
    }
    if p_o_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("p_o grid must be strictly ascending".into()));
    }
    Ok(())
}

pub fn figure3_row(p: f64, p_o: f64, resolution: f64) -> Result<Fig3Row> {
    let joint = example_joint_optimize(p, p_o, resolution)?;
    let sep = example_separate_region(p, p_o)?;
    Ok(Fig3Row {
        p_o,
        joint_sum: joint.min_sum_rate,
        sep_ext_sum: sep.min_sum_rate,
        sep_basic_sum: h2(p),
    })
}

pub fn figure4_row(p: f64, p_o: f64, resolution: f64) -> Result<Fig4Row> {
    let joint = example_joint_optimize(p, p_o, resolution)?;
    let sep = example_separate_region(p, p_o)?;
    Ok(Fig4Row {
        p_o,
        joint_rc: joint.min_rc,
        sep_ext_rc: sep.min_rc,
    })
}

/// Randomness sum rates over a grid of channel noise levels, in grid order.
pub fn figure3_curve(p: f64, p_o_grid: &[f64], resolution: f64) -> Result<Vec<Fig3Row>> {
    check_grid(p_o_grid)?;
    p_o_grid.iter().map(|&po| figure3_row(p, po, resolution)).collect()
}

/// Communication rates over a grid of channel noise levels, in grid order.
pub fn figure4_curve(p: f64, p_o_grid: &[f64], resolution: f64) -> Result<Vec<Fig4Row>> {
    check_grid(p_o_grid)?;
    p_o_grid.iter().map(|&po| figure4_row(p, po, resolution)).collect()
}

fn cell(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.6}")
    }
}

fn metadata_block(out: &mut String, metadata: &[(String, String)]) {
    for (k, v) in metadata {
        let _ = writeln!(out, "# {k}: {v}");
    }
}

pub fn fig3_csv(rows: &[Fig3Row], metadata: &[(String, String)]) -> String {
    let mut out = String::new();
    metadata_block(&mut out, metadata);
    out.push_str("p_o,joint_sum,sep_ext_sum,sep_basic_sum\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            cell(r.p_o),
            cell(r.joint_sum),
            cell(r.sep_ext_sum),
            cell(r.sep_basic_sum)
        );
    }
    out
}

pub fn fig4_csv(rows: &[Fig4Row], metadata: &[(String, String)]) -> String {
    let mut out = String::new();
    metadata_block(&mut out, metadata);
    out.push_str("p_o,joint_Rc,sep_ext_Rc\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{}", cell(r.p_o), cell(r.joint_rc), cell(r.sep_ext_rc));
    }
    out
}

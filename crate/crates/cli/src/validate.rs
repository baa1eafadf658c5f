//! Precondition checks run before any experiment executes.

use serde::{Deserialize, Serialize};

use coordsim::codebook::DEFAULT_CODEWORD_CAP;
use coordsim::prob::DEFAULT_TABLE_CAP;
use coordsim::regions::grid;

use crate::config::{CommandKind, ExperimentConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    /// A required parameter is absent.
    Missing,
    /// A parameter lies outside its domain.
    Range,
    /// A rate times a blocklength is not a whole number of bits.
    Integrality,
    /// The run would exceed a table or codebook size cap.
    Cap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub message: String,
}

impl Violation {
    fn new(kind: ViolationKind, message: impl Into<String>) -> Self {
        Violation {
            kind,
            message: message.into(),
        }
    }

    pub fn is_cap(&self) -> bool {
        self.kind == ViolationKind::Cap
    }
}

const INTEGER_TOL: f64 = 1e-9;
/// Largest channel-code size accepted by the `lemma4` experiment, in bits.
const LEMMA4_MAX_BITS: f64 = 20.0;

struct Checker(Vec<Violation>);

impl Checker {
    fn push(&mut self, kind: ViolationKind, message: String) {
        self.0.push(Violation::new(kind, message));
    }

    fn within(&mut self, name: &str, v: f64, lo: f64, hi: f64, hi_open: bool) -> bool {
        let ok = v.is_finite() && v >= lo && if hi_open { v < hi } else { v <= hi };
        if !ok {
            let close = if hi_open { ')' } else { ']' };
            self.push(ViolationKind::Range, format!("{name} = {v} outside [{lo}, {hi}{close}"));
        }
        ok
    }

    fn non_negative(&mut self, name: &str, v: f64) -> bool {
        let ok = v.is_finite() && v >= 0.0;
        if !ok {
            self.push(ViolationKind::Range, format!("{name} = {v} must be non-negative"));
        }
        ok
    }

    /// Checks that `len * rate` is a whole number and returns it.
    fn whole(&mut self, label: &str, len: usize, rate: f64) -> Option<f64> {
        let bits = len as f64 * rate;
        if (bits - bits.round()).abs() > INTEGER_TOL {
            self.push(
                ViolationKind::Integrality,
                format!("{label} not integer ({len} x {rate} = {bits})"),
            );
            return None;
        }
        Some(bits.round())
    }
}

/// Every violated precondition of `config`, without running anything.
pub fn validate(config: &ExperimentConfig) -> Vec<Violation> {
    let mut c = Checker(Vec::new());
    let Some(command) = config.command else {
        c.push(ViolationKind::Missing, "no command given".into());
        return c.0;
    };
    let po_ok = c.within("p_o", config.p_o, 0.0, 0.5, true);
    match command {
        CommandKind::Fig3 | CommandKind::Fig4 => {
            if !(config.p > 0.0 && config.p < 0.5) {
                c.push(ViolationKind::Range, format!("p = {} outside (0, 0.5)", config.p));
            }
            if !(config.resolution > 0.0 && config.resolution <= 0.1) {
                c.push(
                    ViolationKind::Range,
                    format!("resolution = {} outside (0, 0.1]", config.resolution),
                );
            }
            check_grid(&mut c, &config.po_grid);
        }
        CommandKind::Lemma4 => check_lemma4(&mut c, config),
        CommandKind::Allied | CommandKind::Coordinate | CommandKind::Separate | CommandKind::RegionCheck => {
            if po_ok {
                check_design(&mut c, config);
            }
            if command == CommandKind::RegionCheck {
                check_tuple(&mut c, config);
            } else {
                check_codebook(&mut c, config, command);
            }
        }
    }
    if command.is_monte_carlo() {
        if config.seeds.is_empty() {
            c.push(ViolationKind::Missing, "seed list is empty".into());
        }
        if config.trials == 0 {
            c.push(ViolationKind::Range, "trials must be at least 1".into());
        }
    }
    c.0
}

fn check_grid(c: &mut Checker, spec: &str) {
    let parts: Vec<&str> = spec.split(':').collect();
    let nums: Option<Vec<f64>> = parts.iter().map(|p| p.trim().parse().ok()).collect();
    match nums.as_deref() {
        Some(&[start, stop, step]) if parts.len() == 3 => match grid(start, stop, step) {
            Ok(points) if points.is_empty() => c.push(ViolationKind::Range, format!("po-grid `{spec}` is empty")),
            Ok(points) => {
                if let Some(bad) = points.iter().find(|v| !(0.0..0.5).contains(*v)) {
                    c.push(
                        ViolationKind::Range,
                        format!("po-grid point p_o = {bad} outside [0, 0.5)"),
                    );
                }
            }
            Err(e) => c.push(ViolationKind::Range, e.to_string()),
        },
        _ => c.push(ViolationKind::Range, format!("po-grid `{spec}` is not start:stop:step")),
    }
}

fn check_design(c: &mut Checker, config: &ExperimentConfig) {
    let ab = c.within("alpha", config.alpha, 0.0, 1.0, false) & c.within("beta", config.beta, 0.0, 1.0, false);
    match config.p1 {
        Some(p1) => {
            c.within("p1", p1, 0.0, 1.0, false);
        }
        None if ab => {
            let p2 = config.p2();
            if !(config.p >= 0.0 && config.p <= 0.5) {
                c.push(ViolationKind::Range, format!("p = {} outside [0, 0.5]", config.p));
            } else if p2 >= 0.5 || config.p < p2 {
                c.push(
                    ViolationKind::Range,
                    format!(
                        "p = {} is unreachable with p2 = {p2}; no p1 in [0, 1/2] exists",
                        config.p
                    ),
                );
            }
        }
        None => {}
    }
}

fn check_codebook(c: &mut Checker, config: &ExperimentConfig, command: CommandKind) {
    let n = config.n;
    if n == 0 {
        c.push(ViolationKind::Range, "n must be at least 1".into());
        return;
    }
    if !(config.eps_typ.is_finite() && config.eps_typ >= 0.0) {
        c.push(
            ViolationKind::Range,
            format!("eps_typ = {} must be non-negative", config.eps_typ),
        );
    }
    let mut bits = [None; 3];
    for (slot, (name, rate)) in bits
        .iter_mut()
        .zip([("Rc", config.rc.0), ("Ro", config.ro.0), ("Ra", config.ra.0)])
    {
        if c.non_negative(name, rate) {
            *slot = c.whole(&format!("n{name}"), n, rate);
        }
    }
    let [Some(c_bits), Some(o_bits), Some(a_bits)] = bits else {
        return;
    };
    let words = c_bits + o_bits + a_bits;
    if 2f64.powf(words) > DEFAULT_CODEWORD_CAP as f64 {
        c.push(
            ViolationKind::Cap,
            format!("codebook needs 2^{words} a-words, cap is {DEFAULT_CODEWORD_CAP}"),
        );
    }
    // Binary X and Y: the (X^n, Y^n) table has 4^n cells.
    let table_bits = 2.0 * n as f64;
    if command == CommandKind::Allied {
        if 2f64.powf(table_bits) > DEFAULT_TABLE_CAP as f64 {
            c.push(
                ViolationKind::Cap,
                format!("induced (X^n, Y^n) table needs 2^{table_bits} entries, cap is {DEFAULT_TABLE_CAP}"),
            );
        }
        if 2f64.powf(n as f64 + o_bits) > DEFAULT_TABLE_CAP as f64 {
            c.push(
                ViolationKind::Cap,
                format!(
                    "(X^n, J) table needs 2^{} entries, cap is {DEFAULT_TABLE_CAP}",
                    n as f64 + o_bits
                ),
            );
        }
    }
    if command == CommandKind::Separate {
        if config.ra.0 != 0.0 {
            c.push(
                ViolationKind::Range,
                format!("Ra = {} must be 0 for the separation scheme", config.ra.0),
            );
        }
        let m = config.lambda * n as f64;
        if config.lambda.is_nan() || config.lambda <= 0.0 {
            c.push(
                ViolationKind::Range,
                format!("lambda = {} must be positive", config.lambda),
            );
        } else if (m - m.round()).abs() > INTEGER_TOL {
            c.push(ViolationKind::Integrality, format!("lambda n not integer ({m})"));
        } else if 2f64.powf(c_bits) * m > DEFAULT_TABLE_CAP as f64 {
            c.push(
                ViolationKind::Cap,
                format!("channel code needs 2^{c_bits} words of length {m}, cap is {DEFAULT_TABLE_CAP} letters"),
            );
        }
    }
}

fn check_lemma4(c: &mut Checker, config: &ExperimentConfig) {
    let Some(m) = config.m else {
        c.push(ViolationKind::Missing, "lemma4 needs the channel blocklength m".into());
        return;
    };
    if m < 3 {
        c.push(ViolationKind::Range, format!("m = {m} must be at least 3"));
    }
    if c.non_negative("Ra", config.ra.0) {
        if let Some(bits) = c.whole("mRa", m, config.ra.0) {
            if bits > LEMMA4_MAX_BITS {
                c.push(
                    ViolationKind::Cap,
                    format!("channel code needs 2^{bits} words, cap is 2^{LEMMA4_MAX_BITS}"),
                );
            }
        }
    }
}

fn check_tuple(c: &mut Checker, config: &ExperimentConfig) {
    let fields = [
        ("Ro", config.ro.0),
        ("rho1", config.rho1),
        ("rho2", config.rho2),
        ("Rc", config.rc.0),
        ("Ra", config.ra.0),
        ("delta1", config.delta1),
        ("delta2", config.delta2),
    ];
    for (name, v) in fields {
        c.non_negative(name, v);
    }
}

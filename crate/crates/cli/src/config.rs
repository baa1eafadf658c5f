//! Experiment configuration: JSON file values overridden by command-line flags.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, ValueEnum};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::CliError;

/// Experiment kinds the front end can run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Fig3,
    Fig4,
    Allied,
    Coordinate,
    Separate,
    Lemma4,
    RegionCheck,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Fig3 => "fig3",
            CommandKind::Fig4 => "fig4",
            CommandKind::Allied => "allied",
            CommandKind::Coordinate => "coordinate",
            CommandKind::Separate => "separate",
            CommandKind::Lemma4 => "lemma4",
            CommandKind::RegionCheck => "region-check",
        }
    }

    /// Commands that draw random codebooks or samples and need a seed list.
    pub fn is_monte_carlo(self) -> bool {
        matches!(
            self,
            CommandKind::Allied | CommandKind::Coordinate | CommandKind::Separate | CommandKind::Lemma4
        )
    }
}

impl fmt::Display for CommandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Achievable region tested by `region-check`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    #[default]
    Joint,
    Separate,
}

/// A rate in bits per action, written as a decimal (`0.25`) or a fraction (`1/3`).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Rate(pub f64);

impl FromStr for Rate {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let parse = |t: &str| t.trim().parse::<f64>().map_err(|_| format!("invalid rate `{s}`"));
        match s.split_once('/') {
            Some((num, den)) => {
                let (num, den) = (parse(num)?, parse(den)?);
                if den == 0.0 {
                    return Err(format!("invalid rate `{s}`: zero denominator"));
                }
                Ok(Rate(num / den))
            }
            None => Ok(Rate(parse(s)?)),
        }
    }
}

impl Serialize for Rate {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.0)
    }
}

impl<'de> Deserialize<'de> for Rate {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(v) => Ok(Rate(v)),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Every parameter an experiment may read.
///
/// Missing JSON fields take the defaults below. The output path is not part
/// of the echoed configuration so that artifacts do not depend on where they
/// are written.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub command: Option<CommandKind>,
    /// End-to-end crossover of the target doubly symmetric binary source.
    pub p: f64,
    /// Crossover of the binary symmetric channel.
    pub p_o: f64,
    /// First-stage crossover of the example design; derived from `p` when absent.
    pub p1: Option<f64>,
    pub alpha: f64,
    pub beta: f64,
    /// Channel noise grid `start:stop:step`, stop-exclusive.
    pub po_grid: String,
    /// Grid resolution of the joint-scheme optimizer.
    pub resolution: f64,
    pub n: usize,
    pub rc: Rate,
    pub ro: Rate,
    pub ra: Rate,
    pub eps_typ: f64,
    /// Channel uses per action of the separation scheme.
    pub lambda: f64,
    /// Channel blocklength of the `lemma4` experiment.
    pub m: Option<usize>,
    pub seeds: Vec<u64>,
    pub trials: u64,
    pub scheme: Scheme,
    pub rho1: f64,
    pub rho2: f64,
    pub delta1: f64,
    pub delta2: f64,
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            command: None,
            p: 0.4,
            p_o: 0.1,
            p1: None,
            alpha: 0.2,
            beta: 0.2,
            po_grid: "0:0.28:0.01".into(),
            resolution: 1e-3,
            n: 4,
            rc: Rate(0.0),
            ro: Rate(0.0),
            ra: Rate(0.0),
            eps_typ: 1.0,
            lambda: 1.0,
            m: None,
            seeds: Vec::new(),
            trials: 1000,
            scheme: Scheme::Joint,
            rho1: 0.0,
            rho2: 0.0,
            delta1: 0.0,
            delta2: 0.0,
            output: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    /// Second-stage crossover `p2 = (1 - p_o) alpha + p_o beta` of the example design.
    pub fn p2(&self) -> f64 {
        (1.0 - self.p_o) * self.alpha + self.p_o * self.beta
    }

    /// Explicit `p1`, or the value for which the design reproduces crossover `p`.
    pub fn resolved_p1(&self) -> f64 {
        self.p1.unwrap_or_else(|| {
            let p2 = self.p2();
            (self.p - p2) / (1.0 - 2.0 * p2)
        })
    }
}

/// A seed list given on the command line as one value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedList(pub Vec<u64>);

impl FromStr for SeedList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_seeds(s).map(SeedList)
    }
}

/// Parses `1,2,5` and ranges `0..20` (end-exclusive) into a seed list.
pub fn parse_seeds(s: &str) -> Result<Vec<u64>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        match part.split_once("..") {
            Some((a, b)) => {
                let a: u64 = a.trim().parse().map_err(|_| format!("invalid seed range `{part}`"))?;
                let b: u64 = b.trim().parse().map_err(|_| format!("invalid seed range `{part}`"))?;
                out.extend(a..b);
            }
            None => out.push(part.parse().map_err(|_| format!("invalid seed `{part}`"))?),
        }
    }
    Ok(out)
}

/// Flags shared by every command; each one overrides the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// JSON config file; flags take precedence over its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long = "p-o", alias = "po")]
    pub p_o: Option<f64>,
    #[arg(long)]
    pub p1: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    /// Grid `start:stop:step`, stop-exclusive.
    #[arg(long = "po-grid")]
    pub po_grid: Option<String>,
    #[arg(long)]
    pub resolution: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Rates accept decimals or fractions such as `1/3`.
    #[arg(long)]
    pub rc: Option<Rate>,
    #[arg(long)]
    pub ro: Option<Rate>,
    #[arg(long)]
    pub ra: Option<Rate>,
    #[arg(long = "eps-typ")]
    pub eps_typ: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    #[arg(long)]
    pub m: Option<usize>,
    /// Comma-separated seeds and ranges, e.g. `0..20` or `1,4,9`.
    #[arg(long)]
    pub seeds: Option<SeedList>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long, value_enum)]
    pub scheme: Option<Scheme>,
    #[arg(long)]
    pub rho1: Option<f64>,
    #[arg(long)]
    pub rho2: Option<f64>,
    #[arg(long)]
    pub delta1: Option<f64>,
    #[arg(long)]
    pub delta2: Option<f64>,
    /// Output file; standard output when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

impl Overrides {
    /// Loads the config file, if any, and applies the flags on top.
    pub fn resolve(&self) -> Result<ExperimentConfig, CliError> {
        let mut c = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
                ExperimentConfig::from_json(&text)?
            }
            None => ExperimentConfig::default(),
        };
        macro_rules! set {
            ($($field:ident),*) => {
                $(if let Some(v) = &self.$field { c.$field = v.clone(); })*
            };
        }
        set!(p, p_o, alpha, beta, po_grid, resolution, n, rc, ro, ra, eps_typ, lambda, trials, scheme);
        set!(rho1, rho2, delta1, delta2);
        if let Some(seeds) = &self.seeds {
            c.seeds = seeds.0.clone();
        }
        if self.p1.is_some() {
            c.p1 = self.p1;
        }
        if self.m.is_some() {
            c.m = self.m;
        }
        if self.output.is_some() {
            c.output = self.output.clone();
        }
        Ok(c)
    }
}

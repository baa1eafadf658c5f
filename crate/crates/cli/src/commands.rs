//! Experiment execution. Work fans out over seeds or grid points with rayon
//! and is collected back in input order, so output never depends on scheduling.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use coordsim::channel::AdditiveChannel;
use coordsim::codebook::{generate_nested, RateSpec};
use coordsim::joint::{
    allied_decode_errors, coordination_simulate, independence_gap, resolvability_gap, sequence_target, AlliedSystem,
    JointDesign, SeriesPoint, DECODER_POLICY,
};
use coordsim::prob::{total_variation, Alphabet, JointPmf, Pmf};
use coordsim::regions::{
    example_design, example_separate_design, fig3_csv, fig4_csv, figure3_row, figure4_row, grid, theorem1_member,
    theorem2_member, ConstraintCheck, RateTuple,
};
use coordsim::rng::stream;
use coordsim::separate::{lemma4_verify_channel, separate_simulate, SeparateSystem};
use coordsim::Dmc;

use crate::cache::Cache;
use crate::config::{CommandKind, ExperimentConfig, Scheme};
use crate::error::CliError;

pub const TOOLKIT_VERSION: &str = concat!("coordsim ", env!("CARGO_PKG_VERSION"));

/// RNG stream for allied-scheme decoding trials.
const ALLIED_STREAM: u64 = 3;
/// RNG stream for coordination and separation Monte Carlo trials.
const SIMULATION_STREAM: u64 = 4;

/// Header embedded in every artifact; together with the toolkit version it
/// is enough to re-run the experiment.
#[derive(Debug, Serialize)]
pub struct Metadata<'a> {
    pub toolkit_version: &'static str,
    pub command: &'static str,
    pub config: &'a ExperimentConfig,
    pub seeds: &'a [u64],
}

#[derive(Serialize)]
struct JsonArtifact<'a, T: Serialize> {
    metadata: Metadata<'a>,
    result: T,
}

fn metadata(config: &ExperimentConfig, command: CommandKind) -> Metadata<'_> {
    Metadata {
        toolkit_version: TOOLKIT_VERSION,
        command: command.name(),
        config,
        seeds: &config.seeds,
    }
}

fn json<T: Serialize>(config: &ExperimentConfig, command: CommandKind, result: T) -> Result<String, CliError> {
    let artifact = JsonArtifact {
        metadata: metadata(config, command),
        result,
    };
    let mut text = serde_json::to_string_pretty(&artifact).map_err(|e| CliError::Config(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

fn csv_metadata(config: &ExperimentConfig, command: CommandKind) -> Vec<(String, String)> {
    let m = metadata(config, command);
    let config_json = serde_json::to_string(m.config).expect("config serializes");
    let seeds_json = serde_json::to_string(m.seeds).expect("seeds serialize");
    vec![
        ("toolkit_version".into(), m.toolkit_version.into()),
        ("command".into(), m.command.into()),
        ("config".into(), config_json),
        ("seeds".into(), seeds_json),
    ]
}

/// Runs a validated configuration and returns the artifact text.
pub fn execute(config: &ExperimentConfig, cache: &Cache) -> Result<String, CliError> {
    let command = config
        .command
        .ok_or_else(|| CliError::Usage("no command given".into()))?;
    match command {
        CommandKind::Fig3 => fig3(config),
        CommandKind::Fig4 => fig4(config),
        CommandKind::Allied => allied(config, cache),
        CommandKind::Coordinate => coordinate(config),
        CommandKind::Separate => separate(config),
        CommandKind::Lemma4 => lemma4(config),
        CommandKind::RegionCheck => region_check(config),
    }
}

fn po_grid(config: &ExperimentConfig) -> Result<Vec<f64>, CliError> {
    let parts: Vec<f64> = config
        .po_grid
        .split(':')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Config(format!("po-grid `{}` is not start:stop:step", config.po_grid)))?;
    match parts[..] {
        [start, stop, step] => Ok(grid(start, stop, step)?),
        _ => Err(CliError::Config(format!(
            "po-grid `{}` is not start:stop:step",
            config.po_grid
        ))),
    }
}

fn fig3(config: &ExperimentConfig) -> Result<String, CliError> {
    let rows = po_grid(config)?
        .par_iter()
        .map(|&po| figure3_row(config.p, po, config.resolution))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(fig3_csv(&rows, &csv_metadata(config, CommandKind::Fig3)))
}

fn fig4(config: &ExperimentConfig) -> Result<String, CliError> {
    let rows = po_grid(config)?
        .par_iter()
        .map(|&po| figure4_row(config.p, po, config.resolution))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(fig4_csv(&rows, &csv_metadata(config, CommandKind::Fig4)))
}

fn rates(config: &ExperimentConfig) -> Result<RateSpec, CliError> {
    Ok(RateSpec::new(config.n, config.rc.0, config.ro.0, config.ra.0)?)
}

fn design(config: &ExperimentConfig) -> Result<JointDesign<f64>, CliError> {
    Ok(example_design(
        config.resolved_p1(),
        config.p_o,
        config.alpha,
        config.beta,
    )?)
}

fn allied_system(
    design: &JointDesign<f64>,
    rates: RateSpec,
    eps: f64,
    seed: u64,
) -> Result<AlliedSystem<f64>, CliError> {
    let cb = generate_nested(&design.p_c, &design.p_a_given_c, rates, seed)?;
    Ok(AlliedSystem::new(design.clone(), cb, eps)?)
}

/// The i.i.d. target over `(X^n, Y^n)`, or `None` when it exceeds the table cap.
fn optional_target(p_xy: &JointPmf<f64>, n: usize) -> Result<Option<JointPmf<f64>>, CliError> {
    match sequence_target(p_xy, n) {
        Ok(t) => Ok(Some(t)),
        Err(e) if e.is_resource() => Ok(None),
        Err(e) => Err(e.into()),
    }
}

/// Statistics of the pmfs one codebook induces; these are what the cache stores.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
struct InducedStats {
    resolvability_gap: f64,
    independence_gap: f64,
}

#[derive(Serialize)]
struct InducedKey<'a> {
    kind: &'static str,
    toolkit_version: &'static str,
    p1: f64,
    p_o: f64,
    alpha: f64,
    beta: f64,
    rates: &'a RateSpec,
    seed: u64,
}

#[derive(Debug, Serialize)]
struct AlliedResult {
    n: usize,
    rates: RateSpec,
    eps_typ: f64,
    p1: f64,
    p2: f64,
    decoder_policy: &'static str,
    resolvability_gap: SeriesPoint,
    independence_gap: SeriesPoint,
    decode_error_rate: SeriesPoint,
}

fn allied(config: &ExperimentConfig, cache: &Cache) -> Result<String, CliError> {
    let rates = rates(config)?;
    let design = design(config)?;
    let target = sequence_target(&design.p_xy()?, config.n)?;
    let p1 = config.resolved_p1();
    let per_seed = config
        .seeds
        .par_iter()
        .map(|&seed| -> Result<(InducedStats, f64), CliError> {
            let sys = allied_system(&design, rates, config.eps_typ, seed)?;
            let key = InducedKey {
                kind: "allied-induced",
                toolkit_version: TOOLKIT_VERSION,
                p1,
                p_o: config.p_o,
                alpha: config.alpha,
                beta: config.beta,
                rates: &rates,
                seed,
            };
            let stats = cache.get_or_compute(&key, || -> Result<InducedStats, CliError> {
                Ok(InducedStats {
                    resolvability_gap: resolvability_gap(&sys, &target)?,
                    independence_gap: independence_gap(&sys)?,
                })
            })?;
            let errors = allied_decode_errors(&sys, config.trials, &mut stream(seed, ALLIED_STREAM))?;
            Ok((stats, errors as f64 / config.trials as f64))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let series = |f: &dyn Fn(&(InducedStats, f64)) -> f64| {
        SeriesPoint::from_samples(config.n, rates, per_seed.iter().map(f).collect())
    };
    json(
        config,
        CommandKind::Allied,
        AlliedResult {
            n: config.n,
            rates,
            eps_typ: config.eps_typ,
            p1,
            p2: config.p2(),
            decoder_policy: DECODER_POLICY,
            resolvability_gap: series(&|s| s.0.resolvability_gap),
            independence_gap: series(&|s| s.0.independence_gap),
            decode_error_rate: series(&|s| s.1),
        },
    )
}

#[derive(Debug, Serialize)]
struct CoordinateResult {
    n: usize,
    rates: RateSpec,
    eps_typ: f64,
    p1: f64,
    p2: f64,
    decoder_policy: &'static str,
    /// Absent when the `(X^n, Y^n)` table exceeds the cap.
    tv_to_target: Option<SeriesPoint>,
    decode_error_rate: SeriesPoint,
    rejection_rate: SeriesPoint,
}

fn coordinate(config: &ExperimentConfig) -> Result<String, CliError> {
    let rates = rates(config)?;
    let design = design(config)?;
    let target = optional_target(&design.p_xy()?, config.n)?;
    let per_seed = config
        .seeds
        .par_iter()
        .map(|&seed| -> Result<(Option<f64>, f64, f64), CliError> {
            let sys = allied_system(&design, rates, config.eps_typ, seed)?;
            let counts = coordination_simulate(&sys, config.trials, &mut stream(seed, SIMULATION_STREAM))?;
            let tv = match &target {
                Some(t) => Some(total_variation(&counts.empirical::<f64>()?, t)?),
                None => None,
            };
            Ok((tv, counts.decode_error_rate(), counts.rejection_rate()))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let series = |v: Vec<f64>| SeriesPoint::from_samples(config.n, rates, v);
    json(
        config,
        CommandKind::Coordinate,
        CoordinateResult {
            n: config.n,
            rates,
            eps_typ: config.eps_typ,
            p1: config.resolved_p1(),
            p2: config.p2(),
            decoder_policy: DECODER_POLICY,
            tv_to_target: target
                .as_ref()
                .map(|_| series(per_seed.iter().map(|s| s.0.unwrap_or(f64::NAN)).collect())),
            decode_error_rate: series(per_seed.iter().map(|s| s.1).collect()),
            rejection_rate: series(per_seed.iter().map(|s| s.2).collect()),
        },
    )
}

#[derive(Debug, Serialize)]
struct SeparateResult {
    n: usize,
    m: usize,
    lambda: f64,
    rates: RateSpec,
    p1: f64,
    p2: f64,
    /// Absent when the `(X^n, Y^n)` table exceeds the cap.
    tv_to_target: Option<SeriesPoint>,
    decode_error_rate: SeriesPoint,
    noise_mismatch_rate: SeriesPoint,
}

fn separate(config: &ExperimentConfig) -> Result<String, CliError> {
    let rates = rates(config)?;
    let (p1, p2) = (config.resolved_p1(), config.p2());
    let p_xyu = example_separate_design::<f64>(p1, p2)?;
    let target = optional_target(&p_xyu.marginalize(&[0, 1])?, config.n)?;
    let channel = AdditiveChannel::binary(config.p_o)?;
    let per_seed = config
        .seeds
        .par_iter()
        .map(|&seed| -> Result<(usize, Option<f64>, f64, f64), CliError> {
            let sys = SeparateSystem::new(&p_xyu, rates, channel.clone(), config.lambda, seed)?;
            let counts = separate_simulate(&sys, config.trials, &mut stream(seed, SIMULATION_STREAM))?;
            let tv = match &target {
                Some(t) => Some(total_variation(&counts.actions.empirical::<f64>()?, t)?),
                None => None,
            };
            let mismatch = counts.noise_mismatches as f64 / counts.actions.trials as f64;
            Ok((sys.m(), tv, counts.actions.decode_error_rate(), mismatch))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let series = |v: Vec<f64>| SeriesPoint::from_samples(config.n, rates, v);
    json(
        config,
        CommandKind::Separate,
        SeparateResult {
            n: config.n,
            m: per_seed.first().map_or(0, |s| s.0),
            lambda: config.lambda,
            rates,
            p1,
            p2,
            tv_to_target: target
                .as_ref()
                .map(|_| series(per_seed.iter().map(|s| s.1.unwrap_or(f64::NAN)).collect())),
            decode_error_rate: series(per_seed.iter().map(|s| s.2).collect()),
            noise_mismatch_rate: series(per_seed.iter().map(|s| s.3).collect()),
        },
    )
}

fn lemma4(config: &ExperimentConfig) -> Result<String, CliError> {
    let m = config
        .m
        .ok_or_else(|| CliError::Config("lemma4 needs the channel blocklength m".into()))?;
    let channel = AdditiveChannel::<f64>::binary(config.p_o)?;
    let report = lemma4_verify_channel(&channel, m, config.ra.0, config.trials, &config.seeds)?;
    json(config, CommandKind::Lemma4, report)
}

#[derive(Debug, Serialize)]
struct RegionCheckResult {
    scheme: Scheme,
    tuple: RateTuple,
    member: bool,
    /// Names of the violated inequalities.
    failing: Vec<String>,
    constraints: Vec<ConstraintCheck>,
}

fn region_check(config: &ExperimentConfig) -> Result<String, CliError> {
    let tuple = RateTuple {
        ro: config.ro.0,
        rho1: config.rho1,
        rho2: config.rho2,
        rc: config.rc.0,
        ra: config.ra.0,
        delta1: config.delta1,
        delta2: config.delta2,
    };
    let report = match config.scheme {
        Scheme::Joint => theorem1_member(&tuple, &design(config)?.joint()?)?,
        Scheme::Separate => {
            let p_xyu = example_separate_design::<f64>(config.resolved_p1(), config.p2())?;
            let input = Pmf::uniform(Alphabet::BINARY);
            theorem2_member(&tuple, &p_xyu, &Dmc::bsc(config.p_o)?, &input)?
        }
    };
    json(
        config,
        CommandKind::RegionCheck,
        RegionCheckResult {
            scheme: config.scheme,
            tuple,
            member: report.member,
            failing: report.failing().into_iter().map(String::from).collect(),
            constraints: report.constraints,
        },
    )
}

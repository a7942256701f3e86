//! Monte-Carlo BER experiments and parameter sweeps.
//!
//! One experiment runs the whole chain: symbol generation, the closed-form
//! mean recursion, counting-noise observation, detection and error counting.
//! All randomness comes from keyed streams (see [`crate::rng`]), so a result
//! depends only on its configuration and seed.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::detect::{df_detect, fixed_threshold_detect, Decision};
use crate::error::{Error, Result};
use crate::kinetics::{DerivedConstants, KineticParams, PulseSpec};
use crate::modulation::{generate_symbols, OokFrame};
use crate::noise::{observe_frame, Observation, ObservationModel};
use crate::response::{symbol_recursion, SymbolTrace};
use crate::rng::{derive_seed, Domain};

/// Two-sided 95% standard-normal quantile.
const Z_95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseKind {
    Binomial,
    Poisson,
    Noiseless,
}

impl NoiseKind {
    pub fn model(self, n_p: u64) -> ObservationModel {
        match self {
            NoiseKind::Binomial => ObservationModel::Binomial { n_p },
            NoiseKind::Poisson => ObservationModel::Poisson,
            NoiseKind::Noiseless => ObservationModel::Noiseless,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DetectorKind {
    /// Midpoint threshold with decision-feedback state tracking.
    Df,
    /// Constant midpoint threshold for the ISI-free case.
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub params: KineticParams,
    pub pulse: PulseSpec,
    /// Number of transmitted symbols `K`.
    pub symbols: usize,
    pub seed: u64,
    pub p_one: f64,
    pub noise: NoiseKind,
    pub detector: DetectorKind,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            params: KineticParams::default(),
            pulse: PulseSpec {
                duration: 3.0,
                interval: 20.0,
            },
            symbols: 100_000,
            seed: 1,
            p_one: 0.5,
            noise: NoiseKind::Binomial,
            detector: DetectorKind::Df,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.pulse.validate()?;
        if self.symbols == 0 {
            return Err(Error::domain("K", "symbol count must be >= 1"));
        }
        if !(0.0..=1.0).contains(&self.p_one) {
            return Err(Error::domain("p_one", format!("must lie in [0, 1], got {}", self.p_one)));
        }
        Ok(())
    }

    pub fn observation_model(&self) -> ObservationModel {
        self.noise.model(self.params.n_p)
    }
}

/// Wilson score interval for a binomial proportion at 95% confidence.
pub fn wilson_interval(errors: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = errors as f64 / n;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z_95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    let lo = if errors == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if errors == trials { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BerResult {
    pub errors: usize,
    pub symbols: usize,
    pub ber: f64,
    pub ber_lo: f64,
    pub ber_hi: f64,
    pub seed: u64,
    pub config: ExperimentConfig,
    /// Not serialized: outputs must be reproducible byte for byte.
    #[serde(skip)]
    pub wall_time: Duration,
}

impl BerResult {
    fn new(errors: usize, config: ExperimentConfig, wall_time: Duration) -> Self {
        let (ber_lo, ber_hi) = wilson_interval(errors, config.symbols);
        Self {
            errors,
            symbols: config.symbols,
            ber: errors as f64 / config.symbols as f64,
            ber_lo,
            ber_hi,
            seed: config.seed,
            config,
            wall_time,
        }
    }

    /// True when the two 95% intervals do not overlap.
    pub fn separated_from(&self, other: &BerResult) -> bool {
        self.ber_hi < other.ber_lo || other.ber_hi < self.ber_lo
    }
}

/// Every intermediate product of one experiment.
#[derive(Debug, Clone)]
pub struct BerRun {
    pub consts: DerivedConstants,
    pub frame: OokFrame,
    pub trace: SymbolTrace,
    pub observation: Observation,
    pub decision: Decision,
    pub result: BerResult,
}

/// Runs one experiment and keeps all intermediate data.
pub fn simulate(config: &ExperimentConfig) -> Result<BerRun> {
    config.validate()?;
    let start = Instant::now();
    let consts = config.params.derive()?;
    let frame = OokFrame::new(
        generate_symbols(config.symbols, config.seed, config.p_one)?,
        config.pulse,
    )?;
    let trace = symbol_recursion(&frame, &consts);
    let observation = observe_frame(&trace, &config.observation_model(), config.seed)?;
    let decision = match config.detector {
        DetectorKind::Df => df_detect(&observation, &consts, &config.pulse),
        DetectorKind::Fixed => fixed_threshold_detect(&observation, &consts, config.pulse.duration),
    };
    let errors = decision.count_errors(frame.symbols());
    let result = BerResult::new(errors, *config, start.elapsed());
    Ok(BerRun {
        consts,
        frame,
        trace,
        observation,
        decision,
        result,
    })
}

/// BER of one configuration: the fraction of symbols decided wrongly.
pub fn run_ber(config: &ExperimentConfig) -> Result<BerResult> {
    simulate(config).map(|run| run.result)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepAxis {
    #[serde(rename = "T_b")]
    SymbolInterval,
    #[serde(rename = "N_p")]
    SiteCount,
    #[serde(rename = "T")]
    PulseDuration,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::SymbolInterval => "T_b",
            SweepAxis::SiteCount => "N_p",
            SweepAxis::PulseDuration => "T",
        }
    }

    /// `base` with this axis set to `value`.
    pub fn apply(self, base: &ExperimentConfig, value: f64) -> Result<ExperimentConfig> {
        let mut config = *base;
        match self {
            SweepAxis::SymbolInterval => config.pulse.interval = value,
            SweepAxis::PulseDuration => config.pulse.duration = value,
            SweepAxis::SiteCount => {
                if !(value >= 1.0 && value.fract() == 0.0 && value <= u64::MAX as f64) {
                    return Err(Error::domain("N_p", format!("sweep value {value} is not a positive integer")));
                }
                config.params.n_p = value as u64;
            }
        }
        config.validate()?;
        Ok(config)
    }
}

impl std::str::FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "T_b" | "t_b" | "tb" => Ok(SweepAxis::SymbolInterval),
            "N_p" | "n_p" | "np" => Ok(SweepAxis::SiteCount),
            "T" | "t" => Ok(SweepAxis::PulseDuration),
            other => Err(Error::domain("axis", format!("unknown sweep axis {other:?}; expected T_b, N_p or T"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub base: ExperimentConfig,
}

impl SweepSpec {
    /// Checks the axis values and that every point is a valid experiment,
    /// in particular `T <= T_b`.
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::domain("values", "sweep needs at least one value"));
        }
        if self.values.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::domain("values", "sweep values must be strictly increasing"));
        }
        self.base.validate()?;
        for &value in &self.values {
            self.axis.apply(&self.base, value).map_err(|e| self.point_error(value, e))?;
        }
        Ok(())
    }

    /// Configuration of point `index`, with its own derived seed.
    pub fn point(&self, index: usize) -> Result<ExperimentConfig> {
        let value = self.values[index];
        let mut config = self.axis.apply(&self.base, value).map_err(|e| self.point_error(value, e))?;
        config.seed = derive_seed(self.base.seed, Domain::SweepPoint, index as u64);
        Ok(config)
    }

    fn point_error(&self, value: f64, source: Error) -> Error {
        Error::SweepPoint {
            axis: self.axis.name(),
            value,
            source: Box::new(source),
        }
    }
}

/// Runs every sweep point on a pool of `shards` worker threads.
///
/// Point seeds derive from the master seed and the point index only, so the
/// output is identical for any shard count or scheduling order.
pub fn run_sweep(spec: &SweepSpec, shards: usize) -> Result<Vec<BerResult>> {
    run_sweep_with_progress(spec, shards, |_, _| {})
}

/// [`run_sweep`] calling `progress(index, result)` as each point finishes,
/// in completion order.
pub fn run_sweep_with_progress<F>(spec: &SweepSpec, shards: usize, progress: F) -> Result<Vec<BerResult>>
where
    F: Fn(usize, &BerResult) + Sync,
{
    spec.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(shards.max(1))
        .build()
        .map_err(|e| Error::Io(e.to_string()))?;
    pool.install(|| {
        (0..spec.values.len())
            .into_par_iter()
            .map(|index| {
                let config = spec.point(index)?;
                let result = run_ber(&config).map_err(|e| spec.point_error(spec.values[index], e))?;
                progress(index, &result);
                Ok(result)
            })
            .collect()
    })
}

//! Run configuration: a TOML file with nested sections, overridden by flags.
//!
//! Units follow the reference parameter table: rates in 1/(M·min) and 1/min,
//! concentrations in fM, durations in minutes. Concentrations are converted
//! to molar here, at the boundary.

use langmuir_mc::export::Format;
use langmuir_mc::harness::{DetectorKind, ExperimentConfig, NoiseKind, SweepAxis, SweepSpec};
use langmuir_mc::kinetics::{KineticParams, PulseSpec};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Femtomolar per molar.
const FM_PER_M: f64 = 1e15;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Kinetics {
    /// 1/(M·min)
    pub k_on: f64,
    /// 1/min
    pub k_off: f64,
    pub n_p: u64,
    /// fM
    pub c0_fm: f64,
}

impl Default for Kinetics {
    fn default() -> Self {
        let p = KineticParams::default();
        Self {
            k_on: p.k_on,
            k_off: p.k_off,
            n_p: p.n_p,
            c0_fm: p.c0 * FM_PER_M,
        }
    }
}

impl Kinetics {
    pub fn params(&self) -> Result<KineticParams, CliError> {
        KineticParams::new(self.k_on, self.k_off, self.n_p, self.c0_fm / FM_PER_M)
            .map_err(|e| CliError::config("kinetics", e))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Pulse {
    /// Pulse duration T, min.
    pub t: f64,
    /// Symbol interval T_b, min.
    pub t_b: f64,
}

impl Default for Pulse {
    fn default() -> Self {
        Self { t: 3.0, t_b: 20.0 }
    }
}

impl Pulse {
    pub fn spec(&self) -> Result<PulseSpec, CliError> {
        PulseSpec::new(self.t, self.t_b).map_err(|e| CliError::config("pulse", e))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Experiment {
    /// Number of symbols K.
    pub k: usize,
    pub seed: u64,
    pub p_one: f64,
    pub noise: NoiseKind,
    pub detector: DetectorKind,
}

impl Default for Experiment {
    fn default() -> Self {
        let base = ExperimentConfig::default();
        Self {
            k: base.symbols,
            seed: base.seed,
            p_one: base.p_one,
            noise: base.noise,
            detector: base.detector,
        }
    }
}

/// Uniform time grid `start + j * step`, `j < count`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Grid {
    pub start: f64,
    pub step: f64,
    pub count: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Self {
            start: 0.0,
            step: 0.1,
            count: 601,
        }
    }
}

impl Grid {
    pub fn points(&self) -> Result<Vec<f64>, CliError> {
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(CliError::Config(format!("grid.step: must be > 0, got {}", self.step)));
        }
        if !self.start.is_finite() {
            return Err(CliError::Config("grid.start: must be finite".into()));
        }
        Ok((0..self.count).map(|j| self.start + j as f64 * self.step).collect())
    }
}

/// One kernel curve. Time-constant overrides are realised by adjusting
/// `k_off` and `c0` with `k_on` and `N_p` fixed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSetting {
    pub t: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_on: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau_off: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Kernel {
    /// Empty means a single curve at `pulse.t` with the base kinetics.
    pub settings: Vec<KernelSetting>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Respond {
    pub symbols: String,
    /// Grid points per symbol interval.
    pub points_per_symbol: usize,
    /// Free-decay time shown after the last symbol, min.
    pub tail: f64,
}

impl Default for Respond {
    fn default() -> Self {
        Self {
            symbols: "1011".into(),
            points_per_symbol: 200,
            tail: 30.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Sweep {
    /// `T_b`, `N_p` or `T`.
    pub axis: String,
    pub values: Vec<f64>,
    /// One curve per pulse duration; empty means `[pulse.t]`. Ignored when
    /// sweeping `T`.
    pub t_list: Vec<f64>,
}

impl Default for Sweep {
    fn default() -> Self {
        Self {
            axis: "T_b".into(),
            values: vec![3.0, 5.0, 10.0, 20.0, 30.0, 40.0, 50.0],
            t_list: vec![1.0, 2.0, 3.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Output {
    pub format: Format,
    /// Also write per-symbol decisions for `ber`.
    pub decisions: bool,
}

/// Provenance section written into manifests; ignored when read back as
/// configuration except by `replay`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunInfo {
    pub command: String,
    pub tool_version: String,
    pub master_seed: u64,
    pub outputs: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub run: Option<RunInfo>,
    pub kinetics: Kinetics,
    pub pulse: Pulse,
    pub experiment: Experiment,
    pub output: Output,
    pub grid: Grid,
    pub kernel: Kernel,
    pub respond: Respond,
    pub sweep: Sweep,
}

impl Config {
    /// Parses `text` (possibly empty), then applies `key.path=value`
    /// overrides in order.
    pub fn load(text: &str, overrides: &[(String, String)]) -> Result<Self, CliError> {
        let mut table: toml::Table = text
            .parse()
            .map_err(|e: toml::de::Error| CliError::Config(format!("config file: {e}")))?;
        for (path, raw) in overrides {
            set_path(&mut table, path, parse_value(raw))?;
        }
        toml::Value::Table(table)
            .try_into()
            .map_err(|e: toml::de::Error| CliError::Config(e.to_string().trim().to_string()))
    }

    /// Everything except the provenance section, in canonical form.
    pub fn resolved(&self) -> Self {
        Self { run: None, ..self.clone() }
    }

    pub fn experiment(&self) -> Result<ExperimentConfig, CliError> {
        let config = ExperimentConfig {
            params: self.kinetics.params()?,
            pulse: self.pulse.spec()?,
            symbols: self.experiment.k,
            seed: self.experiment.seed,
            p_one: self.experiment.p_one,
            noise: self.experiment.noise,
            detector: self.experiment.detector,
        };
        config.validate().map_err(|e| CliError::config("experiment", e))?;
        Ok(config)
    }

    /// One sweep spec per curve in `sweep.t_list`.
    pub fn sweeps(&self) -> Result<Vec<SweepSpec>, CliError> {
        let axis: SweepAxis = self.sweep.axis.parse().map_err(|e| CliError::config("sweep.axis", e))?;
        let base = ExperimentConfig {
            params: self.kinetics.params()?,
            pulse: PulseSpec {
                duration: self.pulse.t,
                interval: self.pulse.t_b,
            },
            symbols: self.experiment.k,
            seed: self.experiment.seed,
            p_one: self.experiment.p_one,
            noise: self.experiment.noise,
            detector: self.experiment.detector,
        };
        let durations = if axis == SweepAxis::PulseDuration || self.sweep.t_list.is_empty() {
            vec![self.pulse.t]
        } else {
            self.sweep.t_list.clone()
        };
        durations
            .into_iter()
            .map(|t| {
                let mut base = base;
                base.pulse.duration = t;
                // Make the base itself valid; the swept axis is checked per point.
                match axis {
                    SweepAxis::SymbolInterval => base.pulse.interval = base.pulse.interval.max(t),
                    SweepAxis::PulseDuration => base.pulse.duration = base.pulse.duration.min(base.pulse.interval),
                    SweepAxis::SiteCount => {}
                }
                let spec = SweepSpec {
                    axis,
                    values: self.sweep.values.clone(),
                    base,
                };
                spec.validate().map_err(|e| CliError::config("sweep", e))?;
                Ok(spec)
            })
            .collect()
    }
}

fn parse_value(raw: &str) -> toml::Value {
    // Anything that is not a valid TOML value is taken as a bare string.
    format!("v = {raw}")
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

fn set_path(table: &mut toml::Table, path: &str, value: toml::Value) -> Result<(), CliError> {
    let mut parts: Vec<&str> = path.split('.').collect();
    let leaf = parts.pop().filter(|s| !s.is_empty()).ok_or_else(|| {
        CliError::Config(format!("override {path:?}: empty key"))
    })?;
    let mut cursor = table;
    for part in parts {
        let entry = cursor
            .entry(part.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cursor = entry
            .as_table_mut()
            .ok_or_else(|| CliError::Config(format!("override {path:?}: `{part}` is not a section")))?;
    }
    cursor.insert(leaf.to_string(), value);
    Ok(())
}

/// Splits `key=value`.
pub fn parse_override(text: &str) -> Result<(String, String), String> {
    let (key, value) = text
        .split_once('=')
        .ok_or_else(|| format!("expected KEY=VALUE, got {text:?}"))?;
    Ok((key.trim().to_string(), value.trim().to_string()))
}

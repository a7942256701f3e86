//! Tabular output as CSV or JSON lines.
//!
//! CSV is UTF-8, comma-delimited, with a mandatory header row (written even
//! when there are no rows). Floats use the shortest round-trip
//! representation, so output is deterministic.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::detect::Decision;
use crate::error::{Error, Result};
use crate::harness::{BerResult, SweepAxis};
use crate::modulation::OokFrame;
use crate::noise::Observation;
use crate::response::{SymbolTrace, TrajectorySample};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Jsonl => "jsonl",
        }
    }
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "jsonl" => Ok(Format::Jsonl),
            other => Err(Error::domain("format", format!("expected csv or jsonl, got {other:?}"))),
        }
    }
}

/// A record type with a fixed column order.
pub trait Row: Serialize {
    const COLUMNS: &'static [&'static str];
}

pub fn write_rows<W: Write, R: Row>(mut out: W, rows: &[R], format: Format) -> Result<()> {
    match format {
        Format::Csv => {
            let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(out);
            writer.write_record(R::COLUMNS)?;
            for row in rows {
                writer.serialize(row)?;
            }
            writer.flush()?;
        }
        Format::Jsonl => {
            for row in rows {
                serde_json::to_writer(&mut out, row)?;
                out.write_all(b"\n")?;
            }
            out.flush()?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TrajectoryRow {
    pub t_min: f64,
    pub y_count: f64,
}

impl Row for TrajectoryRow {
    const COLUMNS: &'static [&'static str] = &["t_min", "y_count"];
}

pub fn trajectory_rows(samples: &[TrajectorySample]) -> Vec<TrajectoryRow> {
    samples
        .iter()
        .map(|s| TrajectoryRow { t_min: s.t, y_count: s.y })
        .collect()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct TraceRow {
    pub i: usize,
    pub a_i: u8,
    #[serde(rename = "Y_i")]
    pub y_i: f64,
    pub mu_end_i: f64,
    pub t_s_min: f64,
}

impl Row for TraceRow {
    const COLUMNS: &'static [&'static str] = &["i", "a_i", "Y_i", "mu_end_i", "t_s_min"];
}

pub fn trace_rows(frame: &OokFrame, trace: &SymbolTrace) -> Vec<TraceRow> {
    (0..trace.len())
        .map(|i| TraceRow {
            i,
            a_i: frame.symbols()[i],
            y_i: trace.states[i],
            mu_end_i: trace.pulse_end_means[i],
            t_s_min: trace.sample_times[i],
        })
        .collect()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ObservationRow {
    pub i: usize,
    pub z_i: u64,
}

impl Row for ObservationRow {
    const COLUMNS: &'static [&'static str] = &["i", "z_i"];
}

pub fn observation_rows(obs: &Observation) -> Vec<ObservationRow> {
    obs.counts
        .iter()
        .enumerate()
        .map(|(i, &z_i)| ObservationRow { i, z_i })
        .collect()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DecisionRow {
    pub i: usize,
    pub z_i: u64,
    pub eta_i: u64,
    pub a_hat_i: u8,
    pub a_i: u8,
    pub error_flag: u8,
}

impl Row for DecisionRow {
    const COLUMNS: &'static [&'static str] = &["i", "z_i", "eta_i", "a_hat_i", "a_i", "error_flag"];
}

pub fn decision_rows(obs: &Observation, decision: &Decision, truth: &[u8]) -> Vec<DecisionRow> {
    (0..decision.len())
        .map(|i| DecisionRow {
            i,
            z_i: obs.counts[i],
            eta_i: decision.thresholds[i],
            a_hat_i: decision.symbols[i],
            a_i: truth[i],
            error_flag: u8::from(decision.symbols[i] != truth[i]),
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ResultRow {
    pub axis_name: String,
    /// Empty for a single experiment.
    pub axis_value: Option<f64>,
    #[serde(rename = "T_min")]
    pub t_min: f64,
    #[serde(rename = "T_b_min")]
    pub t_b_min: f64,
    #[serde(rename = "N_p")]
    pub n_p: u64,
    #[serde(rename = "K")]
    pub k: usize,
    pub seed: u64,
    pub errors: usize,
    pub ber: f64,
    pub ber_lo: f64,
    pub ber_hi: f64,
}

impl Row for ResultRow {
    const COLUMNS: &'static [&'static str] = &[
        "axis_name", "axis_value", "T_min", "T_b_min", "N_p", "K", "seed", "errors", "ber", "ber_lo", "ber_hi",
    ];
}

impl ResultRow {
    pub fn new(result: &BerResult, axis: Option<(SweepAxis, f64)>) -> Self {
        let config = &result.config;
        Self {
            axis_name: axis.map_or("none", |(a, _)| a.name()).to_string(),
            axis_value: axis.map(|(_, v)| v),
            t_min: config.pulse.duration,
            t_b_min: config.pulse.interval,
            n_p: config.params.n_p,
            k: result.symbols,
            seed: result.seed,
            errors: result.errors,
            ber: result.ber,
            ber_lo: result.ber_lo,
            ber_hi: result.ber_hi,
        }
    }
}

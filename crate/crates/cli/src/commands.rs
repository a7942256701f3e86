use std::path::Path;
use std::time::Instant;

use langmuir_mc::export::{decision_rows, trace_rows, Row, ResultRow};
use langmuir_mc::harness::{run_sweep_with_progress, simulate};
use langmuir_mc::kinetics::Regime;
use langmuir_mc::modulation::OokFrame;
use langmuir_mc::response::{mean_trajectory, superposition_lp, superposition_sp, symbol_recursion};
use serde::Serialize;

use crate::config::Config;
use crate::error::CliError;
use crate::manifest::{write_all, Artifact};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Kernel,
    Respond,
    Ber,
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Kernel => "kernel",
            Command::Respond => "respond",
            Command::Ber => "ber",
            Command::Sweep => "sweep",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [Command::Kernel, Command::Respond, Command::Ber, Command::Sweep]
            .into_iter()
            .find(|c| c.name() == name)
    }
}

/// Execution options that never affect output bytes.
#[derive(Debug, Clone, Copy, Default)]
pub struct Runtime {
    pub shards: usize,
}

pub fn run(command: Command, config: &Config, out: &Path, rt: Runtime) -> Result<(), CliError> {
    let artifacts = match command {
        Command::Kernel => kernel(config)?,
        Command::Respond => respond(config)?,
        Command::Ber => ber(config)?,
        Command::Sweep => sweep(config, rt)?,
    };
    for path in write_all(out, command.name(), config, &artifacts)? {
        eprintln!("wrote {}", path.display());
    }
    Ok(())
}

#[derive(Serialize)]
struct KernelRow {
    t_min: f64,
    h_exact: f64,
    h_sp: f64,
    h_lp: f64,
}

impl Row for KernelRow {
    const COLUMNS: &'static [&'static str] = &["t_min", "h_exact", "h_sp", "h_lp"];
}

fn kernel(config: &Config) -> Result<Vec<Artifact>, CliError> {
    let base = config.kinetics.params()?;
    let base_consts = base.derive().map_err(|e| CliError::config("kinetics", e))?;
    let grid = config.grid.points()?;
    let settings = if config.kernel.settings.is_empty() {
        vec![crate::config::KernelSetting {
            t: config.pulse.t,
            tau_on: None,
            tau_off: None,
        }]
    } else {
        config.kernel.settings.clone()
    };
    settings
        .iter()
        .enumerate()
        .map(|(idx, s)| {
            let section = format!("kernel.settings[{idx}]");
            if !(s.t.is_finite() && s.t > 0.0) {
                return Err(CliError::Config(format!("{section}: t must be > 0, got {}", s.t)));
            }
            let params = base
                .with_time_constants(
                    s.tau_on.unwrap_or(base_consts.tau_on),
                    s.tau_off.unwrap_or(base_consts.tau_off),
                )
                .map_err(|e| CliError::config(&section, e))?;
            let consts = params.derive().map_err(|e| CliError::config(&section, e))?;
            let rows: Vec<KernelRow> = grid
                .iter()
                .map(|&t| KernelRow {
                    t_min: t,
                    h_exact: consts.kernel_exact(s.t, t),
                    h_sp: consts.kernel_sp(s.t, t),
                    h_lp: consts.kernel_lp(s.t, t),
                })
                .collect();
            let meta = vec![
                ("T_min".into(), s.t.to_string()),
                ("tau_on_min".into(), consts.tau_on.to_string()),
                ("tau_off_min".into(), consts.tau_off.to_string()),
                ("N_b_inf".into(), consts.n_b_inf.to_string()),
                ("regime".into(), consts.regime(s.t).to_string()),
            ];
            Artifact::from_rows(&format!("kernel_{idx:02}"), &rows, config.output.format, meta)
        })
        .collect()
}

#[derive(Serialize)]
struct ResponseRow {
    t_min: f64,
    c_molar: f64,
    y_exact: f64,
    y_approx: f64,
}

impl Row for ResponseRow {
    const COLUMNS: &'static [&'static str] = &["t_min", "c_molar", "y_exact", "y_approx"];
}

fn respond(config: &Config) -> Result<Vec<Artifact>, CliError> {
    let params = config.kinetics.params()?;
    let consts = params.derive().map_err(|e| CliError::config("kinetics", e))?;
    let pulse = config.pulse.spec()?;
    let frame = OokFrame::parse(&config.respond.symbols, pulse).map_err(|e| CliError::config("respond.symbols", e))?;
    let r = &config.respond;
    if r.points_per_symbol == 0 {
        return Err(CliError::Config("respond.points_per_symbol: must be > 0".into()));
    }
    if !(r.tail.is_finite() && r.tail >= 0.0) {
        return Err(CliError::Config(format!("respond.tail: must be >= 0, got {}", r.tail)));
    }
    let step = pulse.interval / r.points_per_symbol as f64;
    let count = ((frame.end_time() + r.tail) / step).round() as usize + 1;
    let grid: Vec<f64> = (0..count).map(|j| j as f64 * step).collect();

    let regime = consts.regime(pulse.duration);
    let use_sp = match regime {
        Regime::Sp => true,
        Regime::Lp => false,
        Regime::Intermediate => pulse.duration <= consts.tau_on,
    };
    let exact = mean_trajectory(&frame, &consts, &grid);
    let approx = if use_sp {
        superposition_sp(&frame, &consts, &grid)
    } else {
        superposition_lp(&frame, &consts, &grid)
    };
    let rows: Vec<ResponseRow> = exact
        .iter()
        .zip(&approx)
        .map(|(e, a)| ResponseRow {
            t_min: e.t,
            c_molar: frame.concentration_at(params.c0, e.t),
            y_exact: e.y,
            y_approx: a.y,
        })
        .collect();
    let meta = vec![
        ("symbols".into(), frame.to_symbol_string()),
        ("regime".into(), regime.to_string()),
        ("approximation".into(), if use_sp { "SP" } else { "LP" }.into()),
    ];
    let format = config.output.format;
    let trace = symbol_recursion(&frame, &consts);
    Ok(vec![
        Artifact::from_rows("response", &rows, format, meta.clone())?,
        Artifact::from_rows("trace", &trace_rows(&frame, &trace), format, meta)?,
    ])
}

fn ber(config: &Config) -> Result<Vec<Artifact>, CliError> {
    let experiment = config.experiment()?;
    let run = simulate(&experiment)?;
    let r = &run.result;
    println!(
        "errors={} K={} ber={} ci95=[{}, {}] regime={}",
        r.errors,
        r.symbols,
        r.ber,
        r.ber_lo,
        r.ber_hi,
        run.consts.regime(experiment.pulse.duration)
    );
    eprintln!("wall_time_s={:.3}", r.wall_time.as_secs_f64());
    let format = config.output.format;
    let mut artifacts = vec![Artifact::from_rows("ber", &[ResultRow::new(r, None)], format, vec![])?];
    if config.output.decisions {
        let rows = decision_rows(&run.observation, &run.decision, run.frame.symbols());
        artifacts.push(Artifact::from_rows("decisions", &rows, format, vec![])?);
    }
    Ok(artifacts)
}

fn sweep(config: &Config, rt: Runtime) -> Result<Vec<Artifact>, CliError> {
    let specs = config.sweeps()?;
    let started = Instant::now();
    let mut rows = Vec::new();
    for spec in &specs {
        let total = spec.values.len();
        let results = run_sweep_with_progress(spec, rt.shards, |i, r| {
            eprintln!(
                "[T={}] {}={} ({}/{}) ber={} errors={} {:.2}s",
                spec.base.pulse.duration,
                spec.axis.name(),
                spec.values[i],
                i + 1,
                total,
                r.ber,
                r.errors,
                r.wall_time.as_secs_f64()
            );
        })?;
        rows.extend(
            results
                .iter()
                .zip(&spec.values)
                .map(|(r, &v)| ResultRow::new(r, Some((spec.axis, v)))),
        );
    }
    eprintln!("sweep wall_time_s={:.3}", started.elapsed().as_secs_f64());
    Ok(vec![Artifact::from_rows("sweep", &rows, config.output.format, vec![])?])
}

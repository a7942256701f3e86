//! Deterministic mean response of the receiver to an OOK frame.
//!
//! The primary path is the symbol-rate recursion on the symbol-start state
//! `Y_i`, which is exact and O(K). Dense trajectories and the kernel
//! superpositions exist for plotting and validation.

use serde::{Deserialize, Serialize};

use crate::kinetics::{DerivedConstants, PulseSpec};
use crate::modulation::OokFrame;

/// Per-symbol exponential factors of the closed-form recursion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Recursion {
    n_b_inf: f64,
    /// `exp(-T / tau_on)`
    rise: f64,
    /// `1 - exp(-T / tau_on)`, computed without cancellation.
    rise_complement: f64,
    /// `exp(-T / tau_off)`
    decay_pulse: f64,
    /// `exp(-(T_b - T) / tau_off)`
    decay_gap: f64,
    /// `exp(-T_b / tau_off)`
    decay_symbol: f64,
}

impl Recursion {
    pub fn new(consts: &DerivedConstants, pulse: &PulseSpec) -> Self {
        Self {
            n_b_inf: consts.n_b_inf,
            rise: (-pulse.duration / consts.tau_on).exp(),
            rise_complement: -(-pulse.duration / consts.tau_on).exp_m1(),
            decay_pulse: (-pulse.duration / consts.tau_off).exp(),
            decay_gap: (-(pulse.interval - pulse.duration) / consts.tau_off).exp(),
            decay_symbol: (-pulse.interval / consts.tau_off).exp(),
        }
    }

    /// Pulse-end mean when a pulse is sent from state `y`.
    pub fn mean_if_one(&self, y: f64) -> f64 {
        y * self.rise + self.n_b_inf * self.rise_complement
    }

    /// Pulse-end mean when no pulse is sent from state `y`.
    pub fn mean_if_zero(&self, y: f64) -> f64 {
        y * self.decay_pulse
    }

    /// Advances one symbol interval from state `y`; returns
    /// `(pulse-end mean, next symbol-start state)`.
    pub fn step(&self, y: f64, symbol: u8) -> (f64, f64) {
        if symbol == 1 {
            let end = self.mean_if_one(y);
            (end, end * self.decay_gap)
        } else {
            (self.mean_if_zero(y), y * self.decay_symbol)
        }
    }
}

/// Symbol-rate summary of the mean response.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolTrace {
    /// Symbol-start states `Y_i = y(t_i)`, `Y_0 = 0`.
    pub states: Vec<f64>,
    /// Pulse-end means `y(t_{s,i})`.
    pub pulse_end_means: Vec<f64>,
    /// Sampling times `t_{s,i} = i T_b + T`.
    pub sample_times: Vec<f64>,
    /// State `Y_K` at the end of the frame.
    pub final_state: f64,
}

impl SymbolTrace {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// Exact mean bound count at time `t` given the frame that produced this
    /// trace. Times before zero give the zero state; times after the frame
    /// give the free-decay tail from `Y_K`.
    pub fn evaluate(&self, frame: &OokFrame, consts: &DerivedConstants, t: f64) -> f64 {
        if t < 0.0 {
            return 0.0;
        }
        let Some(i) = frame.locate(t) else {
            let elapsed = t - frame.end_time();
            return self.final_state * (-elapsed / consts.tau_off).exp();
        };
        let offset = t - frame.symbol_start(i);
        let y = self.states[i];
        if frame.symbols()[i] == 1 {
            // Offsets within rounding of the pulse edge land on it; the mean
            // is continuous there and `t - t_i` loses digits for large `t`.
            let edge_tol = 8.0 * f64::EPSILON * t;
            if (offset - frame.pulse.duration).abs() <= edge_tol {
                self.pulse_end_means[i]
            } else if offset < frame.pulse.duration {
                let x = -offset / consts.tau_on;
                y * x.exp() - consts.n_b_inf * x.exp_m1()
            } else {
                let since_end = offset - frame.pulse.duration;
                self.pulse_end_means[i] * (-since_end / consts.tau_off).exp()
            }
        } else {
            y * (-offset / consts.tau_off).exp()
        }
    }
}

/// Runs the closed-form recursion over the whole frame from `Y_0 = 0`.
pub fn symbol_recursion(frame: &OokFrame, consts: &DerivedConstants) -> SymbolTrace {
    let rec = Recursion::new(consts, &frame.pulse);
    let k = frame.len();
    let mut states = Vec::with_capacity(k);
    let mut pulse_end_means = Vec::with_capacity(k);
    let mut y = 0.0;
    for &a in frame.symbols() {
        states.push(y);
        let (end, next) = rec.step(y, a);
        pulse_end_means.push(end);
        y = next;
    }
    SymbolTrace {
        states,
        pulse_end_means,
        sample_times: (0..k).map(|i| frame.sample_time(i)).collect(),
        final_state: y,
    }
}

/// A point of a mean trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySample {
    /// Time, min.
    pub t: f64,
    /// Mean bound count.
    pub y: f64,
}

/// Exact piecewise-exponential mean response evaluated on `grid`.
pub fn mean_trajectory(
    frame: &OokFrame,
    consts: &DerivedConstants,
    grid: &[f64],
) -> Vec<TrajectorySample> {
    let trace = symbol_recursion(frame, consts);
    grid.iter()
        .map(|&t| TrajectorySample {
            t,
            y: trace.evaluate(frame, consts, t),
        })
        .collect()
}

fn superpose(
    frame: &OokFrame,
    grid: &[f64],
    kernel: impl Fn(f64) -> f64,
) -> Vec<TrajectorySample> {
    grid.iter()
        .map(|&t| {
            let y = frame
                .symbols()
                .iter()
                .enumerate()
                .filter(|(_, &a)| a == 1)
                .map(|(i, _)| kernel(t - frame.symbol_start(i)))
                .sum();
            TrajectorySample { t, y }
        })
        .collect()
}

/// Sum of shifted short-pulse kernels. Only meaningful at low occupancy.
pub fn superposition_sp(
    frame: &OokFrame,
    consts: &DerivedConstants,
    grid: &[f64],
) -> Vec<TrajectorySample> {
    let pulse = frame.pulse.duration;
    superpose(frame, grid, |t| consts.kernel_sp(pulse, t))
}

/// Sum of shifted long-pulse kernels.
///
/// This is a benchmark approximation: saturation makes the receiver
/// nonlinear, so the sum is only representative when ISI is negligible. The
/// detector never uses it.
pub fn superposition_lp(
    frame: &OokFrame,
    consts: &DerivedConstants,
    grid: &[f64],
) -> Vec<TrajectorySample> {
    let pulse = frame.pulse.duration;
    superpose(frame, grid, |t| consts.kernel_lp(pulse, t))
}

/// Kind of symbol boundary, by previous and current symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transition {
    /// First symbol of the frame; no predecessor.
    Initial,
    OneToZero,
    OneToOne,
    /// Previous symbol was 0.
    ZeroToAny,
}

/// ISI bookkeeping for a single symbol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IsiEntry {
    pub index: usize,
    pub transition: Transition,
    /// Carried-in state `Y_i`.
    pub carried_state: f64,
    /// Pulse-end mean the symbol would produce from the empty state.
    pub zero_state_mean: f64,
    /// Actual pulse-end mean `y(t_{s,i})`.
    pub pulse_end_mean: f64,
    /// `pulse_end_mean - zero_state_mean`: the ISI contribution.
    pub increment: f64,
}

/// Splits each pulse-end mean into its zero-state part and the increment
/// carried in from earlier symbols.
pub fn isi_metrics(
    trace: &SymbolTrace,
    frame: &OokFrame,
    consts: &DerivedConstants,
) -> Vec<IsiEntry> {
    let peak = consts.pulse_end_count(frame.pulse.duration);
    let symbols = frame.symbols();
    (0..trace.len())
        .map(|i| {
            let transition = match (i.checked_sub(1).map(|p| symbols[p]), symbols[i]) {
                (None, _) => Transition::Initial,
                (Some(1), 0) => Transition::OneToZero,
                (Some(1), _) => Transition::OneToOne,
                (Some(_), _) => Transition::ZeroToAny,
            };
            let zero_state_mean = if symbols[i] == 1 { peak } else { 0.0 };
            IsiEntry {
                index: i,
                transition,
                carried_state: trace.states[i],
                zero_state_mean,
                pulse_end_mean: trace.pulse_end_means[i],
                increment: trace.pulse_end_means[i] - zero_state_mean,
            }
        })
        .collect()
}

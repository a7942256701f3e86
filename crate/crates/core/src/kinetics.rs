//! Langmuir binding kinetics: physical parameters, closed-form constants and
//! the single-pulse response kernel with its short/long-pulse approximations.
//!
//! Units are minutes and molar throughout. Counts are real-valued means; the
//! discretisation into integer site counts happens in [`crate::noise`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper edge of the short-pulse regime, as a multiple of `tau_on`.
pub const SP_MAX_RATIO: f64 = 0.2;
/// Lower edge of the long-pulse regime, as a multiple of `tau_on`.
pub const LP_MIN_RATIO: f64 = 5.0;

/// Rate constants, receptor capacity and pulse amplitude of the receiver.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KineticParams {
    /// Binding rate constant, 1/(M·min).
    pub k_on: f64,
    /// Unbinding rate constant, 1/min.
    pub k_off: f64,
    /// Number of binding sites.
    pub n_p: u64,
    /// Pulse concentration amplitude, M.
    pub c0: f64,
}

impl Default for KineticParams {
    /// The reference operating point: k_on = 1e8 /(M·min), k_off = 0.1 /min,
    /// N_p = 1e6 sites and c0 = 100 fM.
    fn default() -> Self {
        Self {
            k_on: 1e8,
            k_off: 0.1,
            n_p: 1_000_000,
            c0: 100e-15,
        }
    }
}

impl KineticParams {
    pub fn new(k_on: f64, k_off: f64, n_p: u64, c0: f64) -> Result<Self> {
        let params = Self { k_on, k_off, n_p, c0 };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k_on.is_finite() && self.k_on > 0.0) {
            return Err(Error::domain("k_on", format!("must be finite and > 0, got {}", self.k_on)));
        }
        if !(self.k_off.is_finite() && self.k_off > 0.0) {
            return Err(Error::domain("k_off", format!("must be finite and > 0, got {}", self.k_off)));
        }
        if self.n_p == 0 {
            return Err(Error::domain("n_p", "must be >= 1"));
        }
        if !(self.c0.is_finite() && self.c0 >= 0.0) {
            return Err(Error::domain("c0", format!("must be finite and >= 0, got {}", self.c0)));
        }
        Ok(())
    }

    /// Returns a copy whose `k_off` and `c0` are chosen so the receiver has
    /// the requested time constants, keeping `k_on` and `n_p` fixed.
    ///
    /// Requires `0 < tau_on <= tau_off`; equality yields `c0 = 0`.
    pub fn with_time_constants(&self, tau_on: f64, tau_off: f64) -> Result<Self> {
        if !(tau_off.is_finite() && tau_off > 0.0) {
            return Err(Error::domain("tau_off", format!("must be finite and > 0, got {tau_off}")));
        }
        if !(tau_on.is_finite() && tau_on > 0.0 && tau_on <= tau_off) {
            return Err(Error::domain(
                "tau_on",
                format!("must satisfy 0 < tau_on <= tau_off ({tau_off}), got {tau_on}"),
            ));
        }
        let k_off = 1.0 / tau_off;
        let binding_rate = (1.0 / tau_on - k_off).max(0.0);
        Self::new(self.k_on, k_off, self.n_p, binding_rate / self.k_on)
    }

    pub fn derive(&self) -> Result<DerivedConstants> {
        derive_constants(self)
    }
}

/// Closed-form quantities that fully determine the mean response.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    /// Dissociation constant `k_off / k_on`, M.
    pub k_d: f64,
    /// Rise time constant during a pulse, min.
    pub tau_on: f64,
    /// Decay time constant between pulses, min.
    pub tau_off: f64,
    /// Steady-state mean bound count under constant drive `c0`.
    pub n_b_inf: f64,
}

/// Computes `K_D`, `tau_on`, `tau_off` and `N_b_inf` from the physical
/// parameters.
pub fn derive_constants(params: &KineticParams) -> Result<DerivedConstants> {
    params.validate()?;
    let k_d = params.k_off / params.k_on;
    let binding_rate = params.k_on * params.c0;
    let tau_on = 1.0 / (binding_rate + params.k_off);
    let tau_off = 1.0 / params.k_off;
    // Same as x / (1 + x) with x = c0 / K_D, one rounding fewer.
    let n_b_inf = params.n_p as f64 * binding_rate / (binding_rate + params.k_off);
    Ok(DerivedConstants {
        k_d,
        tau_on,
        tau_off,
        n_b_inf,
    })
}

/// Validity regime of a pulse duration relative to `tau_on`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Regime {
    /// `T <= 0.2 tau_on`: linear rise.
    Sp,
    /// `T >= 5 tau_on`: saturated plateau.
    Lp,
    Intermediate,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Sp => "SP",
            Regime::Lp => "LP",
            Regime::Intermediate => "INTERMEDIATE",
        })
    }
}

impl DerivedConstants {
    /// Mean bound count at the end of a pulse of duration `pulse` starting
    /// from the empty state. This is also the peak of the kernel.
    pub fn pulse_end_count(&self, pulse: f64) -> f64 {
        debug_assert!(pulse > 0.0);
        self.n_b_inf * -(-pulse / self.tau_on).exp_m1()
    }

    /// Exact zero-state response to a single rectangular pulse of duration
    /// `pulse` starting at `t = 0`.
    pub fn kernel_exact(&self, pulse: f64, t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else if t <= pulse {
            self.n_b_inf * -(-t / self.tau_on).exp_m1()
        } else {
            self.pulse_end_count(pulse) * (-(t - pulse) / self.tau_off).exp()
        }
    }

    /// Short-pulse kernel: first-order (linear) rise, scaled exponential tail.
    pub fn kernel_sp(&self, pulse: f64, t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else if t <= pulse {
            self.n_b_inf * t / self.tau_on
        } else {
            self.n_b_inf * pulse / self.tau_on * (-(t - pulse) / self.tau_off).exp()
        }
    }

    /// Long-pulse kernel: instantaneous plateau at `N_b_inf`, exponential tail.
    pub fn kernel_lp(&self, pulse: f64, t: f64) -> f64 {
        if t <= 0.0 {
            0.0
        } else if t <= pulse {
            self.n_b_inf
        } else {
            self.n_b_inf * (-(t - pulse) / self.tau_off).exp()
        }
    }

    /// Boundaries are inclusive on both sides.
    pub fn regime(&self, pulse: f64) -> Regime {
        if pulse <= SP_MAX_RATIO * self.tau_on {
            Regime::Sp
        } else if pulse >= LP_MIN_RATIO * self.tau_on {
            Regime::Lp
        } else {
            Regime::Intermediate
        }
    }
}

/// Pulse duration `T` and symbol interval `T_b`, both in minutes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseSpec {
    pub duration: f64,
    pub interval: f64,
}

impl PulseSpec {
    pub fn new(duration: f64, interval: f64) -> Result<Self> {
        let spec = Self { duration, interval };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.duration.is_finite() && self.duration > 0.0) {
            return Err(Error::domain("T", format!("pulse duration must be > 0, got {}", self.duration)));
        }
        if !(self.interval.is_finite() && self.interval >= self.duration) {
            return Err(Error::domain(
                "T_b",
                format!(
                    "symbol interval must satisfy T_b >= T ({}), got {}",
                    self.duration, self.interval
                ),
            ));
        }
        Ok(())
    }
}

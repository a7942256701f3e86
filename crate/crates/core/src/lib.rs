//! Simulation of a molecular-communication receiver whose surface binds
//! information molecules by finite-capacity Langmuir adsorption.
//!
//! The pipeline for a bit-error-rate experiment is
//!
//! 1. [`modulation`]: draw OOK symbols and form the pulse train;
//! 2. [`response`]: run the closed-form symbol-rate recursion for the mean
//!    bound count (exact, O(K));
//! 3. [`noise`]: sample binomial (or Poisson) counting noise at each pulse end;
//! 4. [`detect`]: decide with a midpoint threshold and decision-feedback state
//!    tracking;
//! 5. [`harness`]: count errors, attach confidence intervals, sweep.
//!
//! [`oracle`] integrates the underlying ODE numerically and exists to check
//! the closed forms.

pub mod detect;
pub mod error;
pub mod export;
pub mod harness;
pub mod kinetics;
pub mod modulation;
pub mod noise;
pub mod oracle;
pub mod response;
pub mod rng;

pub use detect::{df_detect, df_track, fixed_threshold_detect, midpoint_threshold, Decision, DetectorState, Feedback};
pub use error::{Error, Result};
pub use harness::{run_ber, run_sweep, run_sweep_with_progress, BerResult, DetectorKind, ExperimentConfig, NoiseKind, SweepAxis, SweepSpec};
pub use kinetics::{derive_constants, DerivedConstants, KineticParams, PulseSpec, Regime};
pub use modulation::{generate_symbols, OokFrame};
pub use noise::{observe_frame, sample_count, Observation, ObservationModel};
pub use response::{mean_trajectory, symbol_recursion, SymbolTrace, TrajectorySample};

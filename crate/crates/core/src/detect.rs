//! Midpoint-threshold detection with decision-feedback state tracking.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinetics::{DerivedConstants, PulseSpec};
use crate::noise::Observation;
use crate::response::Recursion;

/// Receiver-side estimate of the symbol-start state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectorState {
    pub y_hat: f64,
    pub consts: DerivedConstants,
    pub pulse: PulseSpec,
    recursion: Recursion,
}

impl DetectorState {
    /// Starts from the empty receiver, `Y_hat = 0`.
    pub fn new(consts: DerivedConstants, pulse: PulseSpec) -> Self {
        Self::with_state(consts, pulse, 0.0)
    }

    pub fn with_state(consts: DerivedConstants, pulse: PulseSpec, y_hat: f64) -> Self {
        Self {
            y_hat,
            consts,
            pulse,
            recursion: Recursion::new(&consts, &pulse),
        }
    }

    /// Pulse-end means `(mu_0, mu_1)` under each hypothesis given `Y_hat`.
    pub fn conditional_means(&self) -> (f64, f64) {
        (
            self.recursion.mean_if_zero(self.y_hat),
            self.recursion.mean_if_one(self.y_hat),
        )
    }

    /// Propagates `Y_hat` through one symbol interval assuming `symbol` was
    /// sent.
    pub fn advance(&mut self, symbol: u8) {
        self.y_hat = self.recursion.step(self.y_hat, symbol).1;
    }
}

/// Rounds the midpoint of the two means to the nearest integer, ties away
/// from zero.
pub fn midpoint_threshold(mu_0: f64, mu_1: f64) -> u64 {
    (0.5 * (mu_0 + mu_1)).round().max(0.0) as u64
}

/// Decide 1 iff the count strictly exceeds the threshold.
#[inline]
pub fn decide(count: u64, threshold: u64) -> u8 {
    u8::from(count > threshold)
}

/// Detected symbols and the thresholds used for each.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decision {
    pub symbols: Vec<u8>,
    pub thresholds: Vec<u64>,
}

impl Decision {
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Number of positions where the decision differs from `truth`.
    pub fn count_errors(&self, truth: &[u8]) -> usize {
        self.symbols.iter().zip(truth).filter(|(a, b)| a != b).count()
    }
}

/// Output of the tracker including the state estimates it used.
#[derive(Debug, Clone, PartialEq)]
pub struct TrackedDecision {
    pub decision: Decision,
    /// `Y_hat_i` before deciding symbol `i`.
    pub states: Vec<f64>,
}

/// What drives the state update after each decision.
#[derive(Debug, Clone, Copy)]
pub enum Feedback<'a> {
    /// The detector's own decisions (normal operation).
    Decisions,
    /// The transmitted symbols. Diagnostic only.
    Genie(&'a [u8]),
}

/// Decision-feedback detector over a full observation.
pub fn df_detect(obs: &Observation, consts: &DerivedConstants, pulse: &PulseSpec) -> Decision {
    df_track(obs, consts, pulse, Feedback::Decisions)
        .expect("decision feedback cannot fail")
        .decision
}

pub fn df_track(
    obs: &Observation,
    consts: &DerivedConstants,
    pulse: &PulseSpec,
    feedback: Feedback<'_>,
) -> Result<TrackedDecision> {
    if let Feedback::Genie(truth) = feedback {
        if truth.len() != obs.len() {
            return Err(Error::InvalidSymbols(format!(
                "genie sequence has {} symbols, observation has {}",
                truth.len(),
                obs.len()
            )));
        }
    }
    let mut state = DetectorState::new(*consts, *pulse);
    let k = obs.len();
    let mut symbols = Vec::with_capacity(k);
    let mut thresholds = Vec::with_capacity(k);
    let mut states = Vec::with_capacity(k);
    for (i, &z) in obs.counts.iter().enumerate() {
        states.push(state.y_hat);
        let (mu_0, mu_1) = state.conditional_means();
        let eta = midpoint_threshold(mu_0, mu_1);
        let a_hat = decide(z, eta);
        symbols.push(a_hat);
        thresholds.push(eta);
        let fed = match feedback {
            Feedback::Decisions => a_hat,
            Feedback::Genie(truth) => truth[i],
        };
        state.advance(fed);
    }
    Ok(TrackedDecision {
        decision: Decision { symbols, thresholds },
        states,
    })
}

/// Constant threshold `round(N_b_end / 2)`; valid when ISI is negligible.
pub fn fixed_threshold_detect(obs: &Observation, consts: &DerivedConstants, pulse_duration: f64) -> Decision {
    let eta = midpoint_threshold(0.0, consts.pulse_end_count(pulse_duration));
    Decision {
        symbols: obs.counts.iter().map(|&z| decide(z, eta)).collect(),
        thresholds: vec![eta; obs.len()],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinetics::KineticParams;
    use crate::modulation::OokFrame;
    use crate::noise::{observe_frame, ObservationModel};
    use crate::response::symbol_recursion;

    fn reference() -> DerivedConstants {
        KineticParams::default().derive().unwrap()
    }

    #[test]
    fn threshold_rounding() {
        assert_eq!(midpoint_threshold(0.0, 100.0), 50);
        assert_eq!(midpoint_threshold(0.0, 99.0), 50);
        assert_eq!(midpoint_threshold(0.0, 97.0), 49);
        assert_eq!(midpoint_threshold(0.0, 0.0), 0);
        assert_eq!(midpoint_threshold(3.2, 3.2), 3);
    }

    #[test]
    fn means_from_empty_and_saturated_state() {
        let c = reference();
        let pulse = PulseSpec::new(5.0, 20.0).unwrap();
        let (mu_0, mu_1) = DetectorState::new(c, pulse).conditional_means();
        assert_eq!(mu_0, 0.0);
        assert!((mu_1 - c.pulse_end_count(5.0)).abs() < 1e-12);
        let (_, mu_1) = DetectorState::with_state(c, pulse, c.n_b_inf).conditional_means();
        assert!((mu_1 - c.n_b_inf).abs() < 1e-12);
    }

    #[test]
    fn means_match_forced_recursion() {
        let c = reference();
        let pulse = PulseSpec::new(5.0, 20.0).unwrap();
        let (mu_0, mu_1) = DetectorState::with_state(c, pulse, 50.0).conditional_means();
        let expect_1 = c.n_b_inf + (50.0 - c.n_b_inf) * (-5.0 / c.tau_on).exp();
        let expect_0 = 50.0 * (-5.0 / c.tau_off).exp();
        assert!((mu_1 - expect_1).abs() < 1e-12);
        assert!((mu_0 - expect_0).abs() < 1e-12);
        assert!(mu_1 > mu_0);
    }

    #[test]
    fn equality_decides_zero() {
        let c = reference();
        let pulse = PulseSpec::new(10.0, 60.0).unwrap();
        let eta = midpoint_threshold(0.0, c.pulse_end_count(10.0));
        let obs = Observation { counts: vec![eta, eta + 1] };
        let d = df_detect(&obs, &c, &pulse);
        assert_eq!(d.thresholds[0], eta);
        assert_eq!(d.symbols, vec![0, 1]);
    }

    #[test]
    fn all_zero_counts() {
        let c = reference();
        let pulse = PulseSpec::new(3.0, 3.0).unwrap();
        let obs = Observation { counts: vec![0; 50] };
        let run = df_track(&obs, &c, &pulse, Feedback::Decisions).unwrap();
        assert!(run.decision.symbols.iter().all(|&a| a == 0));
        assert!(run.states.iter().all(|&y| y == 0.0));
    }

    #[test]
    fn noiseless_pattern_decodes() {
        let c = reference();
        let pulse = PulseSpec::new(5.0, 5.0 * c.tau_off).unwrap();
        let f = OokFrame::parse("1011", pulse).unwrap();
        let tr = symbol_recursion(&f, &c);
        let obs = observe_frame(&tr, &ObservationModel::Noiseless, 0).unwrap();
        let d = df_detect(&obs, &c, &pulse);
        assert_eq!(d.symbols, vec![1, 0, 1, 1]);
    }

    #[test]
    fn fixed_threshold_value() {
        let c = reference();
        let obs = Observation { counts: vec![0, 31, 32, 33] };
        let d = fixed_threshold_detect(&obs, &c, 10.0);
        // round(63.2094 / 2) = 32
        assert!(d.thresholds.iter().all(|&e| e == 32));
        assert_eq!(d.symbols, vec![0, 0, 0, 1]);
    }

    #[test]
    fn genie_tracks_true_states() {
        let c = reference();
        let pulse = PulseSpec::new(2.0, 4.0).unwrap();
        let f = OokFrame::parse("1101001110", pulse).unwrap();
        let tr = symbol_recursion(&f, &c);
        // Deliberately wrong counts; the genie must ignore them.
        let obs = Observation { counts: vec![0; f.len()] };
        let run = df_track(&obs, &c, &pulse, Feedback::Genie(f.symbols())).unwrap();
        for (a, b) in run.states.iter().zip(&tr.states) {
            assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-300));
        }
        assert!(df_track(&obs, &c, &pulse, Feedback::Genie(&[1])).is_err());
    }
}

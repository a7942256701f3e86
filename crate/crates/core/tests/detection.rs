use langmuir_mc::detect::{df_detect, df_track, fixed_threshold_detect, midpoint_threshold, DetectorState, Feedback};
use langmuir_mc::harness::{run_ber, run_sweep, DetectorKind, ExperimentConfig, NoiseKind, SweepAxis, SweepSpec};
use langmuir_mc::kinetics::{KineticParams, PulseSpec};
use langmuir_mc::modulation::{generate_symbols, OokFrame};
use langmuir_mc::noise::{observe_frame, Observation, ObservationModel};
use langmuir_mc::response::symbol_recursion;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn noiseless_random_frames_decode_exactly() {
    let consts = KineticParams::default().derive().unwrap();
    let mut rng = langmuir_mc::rng::substream(99, langmuir_mc::rng::Domain::Symbols, 1);
    let mut total_errors = 0;
    for trial in 0..1000u64 {
        let interval = rng.random_range(3.0..8.0) * consts.tau_off;
        let duration = rng.random_range(1.0..=interval);
        let pulse = PulseSpec::new(duration, interval).unwrap();
        let frame = OokFrame::new(generate_symbols(100, trial, 0.5).unwrap(), pulse).unwrap();
        let trace = symbol_recursion(&frame, &consts);
        let obs = observe_frame(&trace, &ObservationModel::Noiseless, trial).unwrap();
        total_errors += df_detect(&obs, &consts, &pulse).count_errors(frame.symbols());
    }
    assert_eq!(total_errors, 0);
}

#[test]
fn df_and_fixed_agree_without_isi() {
    let mut config = ExperimentConfig::default();
    config.pulse = PulseSpec::new(3.0, 50.0).unwrap();
    config.symbols = 100_000;
    config.seed = 404;
    let run = langmuir_mc::harness::simulate(&config).unwrap();
    let df = &run.decision;
    let fixed = fixed_threshold_detect(&run.observation, &run.consts, config.pulse.duration);
    let same = df.symbols.iter().zip(&fixed.symbols).filter(|(a, b)| a == b).count();
    assert!(same as f64 / df.len() as f64 >= 0.999, "agreement {same}");
}

#[test]
fn longer_interval_lowers_ber() {
    for duration in [1.0, 2.0, 3.0] {
        let mut short = ExperimentConfig::default();
        short.seed = 7;
        short.pulse = PulseSpec::new(duration, 3.0).unwrap();
        let mut long = short;
        long.pulse = PulseSpec::new(duration, 50.0).unwrap();
        let (a, b) = (run_ber(&short).unwrap(), run_ber(&long).unwrap());
        assert!(b.ber < a.ber, "T = {duration}: {} vs {}", b.ber, a.ber);
    }
}

#[test]
fn more_sites_lower_ber() {
    let mut small = ExperimentConfig::default();
    small.seed = 8;
    small.pulse = PulseSpec::new(3.0, 20.0).unwrap();
    small.params.n_p = 10_000;
    let mut large = small;
    large.params.n_p = 1_000_000;
    let (a, b) = (run_ber(&small).unwrap(), run_ber(&large).unwrap());
    assert!(b.ber < a.ber && b.separated_from(&a));
}

#[test]
fn fixed_detector_runs_through_harness() {
    let mut config = ExperimentConfig::default();
    config.detector = DetectorKind::Fixed;
    config.noise = NoiseKind::Noiseless;
    config.pulse = PulseSpec::new(3.0, 60.0).unwrap();
    config.symbols = 2000;
    assert_eq!(run_ber(&config).unwrap().errors, 0);
}

fn tb_sweep(seed: u64) -> SweepSpec {
    let mut base = ExperimentConfig::default();
    base.symbols = 10_000;
    base.seed = seed;
    base.pulse = PulseSpec::new(2.0, 20.0).unwrap();
    SweepSpec {
        axis: SweepAxis::SymbolInterval,
        values: vec![3.0, 5.0, 10.0, 20.0, 30.0, 40.0, 50.0],
        base,
    }
}

#[test]
fn sweep_is_shard_invariant() {
    let spec = tb_sweep(31);
    let one = run_sweep(&spec, 1).unwrap();
    for shards in [4, 16] {
        let other = run_sweep(&spec, shards).unwrap();
        assert_eq!(
            serde_json::to_string(&one).unwrap(),
            serde_json::to_string(&other).unwrap()
        );
    }
}

#[test]
fn single_point_sweep_matches_run_ber() {
    let mut spec = tb_sweep(5);
    spec.values = vec![20.0];
    let swept = run_sweep(&spec, 2).unwrap();
    let direct = run_ber(&spec.point(0).unwrap()).unwrap();
    assert_eq!(swept[0].errors, direct.errors);
    assert_eq!(swept[0].seed, direct.seed);
    assert_ne!(direct.seed, spec.base.seed);
}

#[test]
fn np_sweep_is_monotone() {
    let mut base = ExperimentConfig::default();
    base.symbols = 10_000;
    base.seed = 77;
    let spec = SweepSpec {
        axis: SweepAxis::SiteCount,
        values: vec![1e4, 1e5, 1e6],
        base,
    };
    let r = run_sweep(&spec, 3).unwrap();
    assert!(r[0].ber > r[1].ber && r[1].ber > r[2].ber);
    assert_eq!(r[2].config.params.n_p, 1_000_000);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tracker_state_and_threshold_stay_in_range(
        counts in prop::collection::vec(0u64..200, 1..200),
        duration in 0.1f64..20.0,
        extra in 0.0f64..40.0,
    ) {
        let consts = KineticParams::default().derive().unwrap();
        let pulse = PulseSpec::new(duration, duration + extra).unwrap();
        let obs = Observation { counts };
        let run = df_track(&obs, &consts, &pulse, Feedback::Decisions).unwrap();
        for (i, &y) in run.states.iter().enumerate() {
            prop_assert!(y >= 0.0 && y <= consts.n_b_inf);
            let (mu_0, mu_1) = DetectorState::with_state(consts, pulse, y).conditional_means();
            let eta = run.decision.thresholds[i] as f64;
            prop_assert!(mu_0 - 1.0 <= eta && eta <= mu_1 + 1.0);
            prop_assert_eq!(run.decision.thresholds[i], midpoint_threshold(mu_0, mu_1));
        }
    }

    #[test]
    fn genie_feedback_reproduces_true_states(
        symbols in prop::collection::vec(0u8..=1, 1..100),
        duration in 0.1f64..20.0,
        extra in 0.0f64..40.0,
    ) {
        let consts = KineticParams::default().derive().unwrap();
        let pulse = PulseSpec::new(duration, duration + extra).unwrap();
        let frame = OokFrame::new(symbols, pulse).unwrap();
        let trace = symbol_recursion(&frame, &consts);
        let obs = observe_frame(&trace, &ObservationModel::Binomial { n_p: 1_000_000 }, 1).unwrap();
        let run = df_track(&obs, &consts, &pulse, Feedback::Genie(frame.symbols())).unwrap();
        for (a, b) in run.states.iter().zip(&trace.states) {
            prop_assert!((a - b).abs() <= 1e-12 * b.abs());
        }
    }
}

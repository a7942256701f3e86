//! Goodness of fit of the counting-noise samplers against exact pmfs.

use langmuir_mc::kinetics::KineticParams;
use langmuir_mc::noise::{observe_frame, sample_count, ObservationModel};
use langmuir_mc::response::SymbolTrace;
use langmuir_mc::rng::{substream, Domain};
use statrs::distribution::{Binomial, ChiSquared, ContinuousCDF, Discrete};

/// Pearson chi-square p-value of `counts` (indexed by outcome) against `pmf`,
/// pooling outcomes until every bin expects at least 5 draws.
fn chi_square_p_value(counts: &[u64], draws: u64, pmf: impl Fn(u64) -> f64, support_max: u64) -> f64 {
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut obs, mut exp) = (0.0, 0.0);
    for k in 0..=support_max {
        obs += counts.get(k as usize).copied().unwrap_or(0) as f64;
        exp += draws as f64 * pmf(k);
        if exp >= 5.0 {
            bins.push((obs, exp));
            obs = 0.0;
            exp = 0.0;
        }
    }
    // Whatever is left (upper tail) joins the last bin.
    let tail_exp = draws as f64 - bins.iter().map(|b| b.1).sum::<f64>();
    let tail_obs = draws as f64 - bins.iter().map(|b| b.0).sum::<f64>();
    if let Some(last) = bins.last_mut() {
        last.0 += tail_obs;
        last.1 += tail_exp;
    }
    let stat: f64 = bins.iter().map(|(o, e)| (o - e) * (o - e) / e).sum();
    let dof = (bins.len() - 1) as f64;
    1.0 - ChiSquared::new(dof).unwrap().cdf(stat)
}

fn histogram(model: &ObservationModel, mean: f64, draws: u64, seed: u64) -> Vec<u64> {
    let mut rng = substream(seed, Domain::Noise, 0);
    let mut hist = Vec::new();
    for _ in 0..draws {
        let z = sample_count(model, mean, &mut rng).unwrap() as usize;
        if z >= hist.len() {
            hist.resize(z + 1, 0);
        }
        hist[z] += 1;
    }
    hist
}

#[test]
fn binomial_sampler_passes_chi_square() {
    for (n_p, p, seed) in [(10_000u64, 1e-2, 11u64), (1_000_000, 1e-4, 12)] {
        let draws = 100_000;
        let mean = n_p as f64 * p;
        let hist = histogram(&ObservationModel::Binomial { n_p }, mean, draws, seed);
        let exact = Binomial::new(p, n_p).unwrap();
        let p_value = chi_square_p_value(&hist, draws, |k| exact.pmf(k), (mean * 3.0) as u64);
        assert!(p_value > 1e-3, "n_p = {n_p}, p = {p}: p-value {p_value}");
    }
}

#[test]
fn poisson_limit_total_variation() {
    let draws = 1_000_000;
    let binomial = histogram(&ObservationModel::Binomial { n_p: 1_000_000 }, 100.0, draws, 21);
    let poisson = histogram(&ObservationModel::Poisson, 100.0, draws, 22);
    let len = binomial.len().max(poisson.len());
    let tv: f64 = (0..len)
        .map(|k| {
            let a = binomial.get(k).copied().unwrap_or(0) as f64;
            let b = poisson.get(k).copied().unwrap_or(0) as f64;
            (a - b).abs()
        })
        .sum::<f64>()
        / (2.0 * draws as f64);
    assert!(tv < 0.01, "total variation {tv}");
}

#[test]
fn pulse_end_variance_is_binomial() {
    let consts = KineticParams::default().derive().unwrap();
    let mean = consts.pulse_end_count(10.0);
    let n = 1_000_000;
    let trace = SymbolTrace {
        states: vec![0.0; n],
        pulse_end_means: vec![mean; n],
        sample_times: vec![10.0; n],
        final_state: 0.0,
    };
    let obs = observe_frame(&trace, &ObservationModel::Binomial { n_p: 1_000_000 }, 5).unwrap();
    let m = obs.counts.iter().sum::<u64>() as f64 / n as f64;
    let var = obs.counts.iter().map(|&z| (z as f64 - m).powi(2)).sum::<f64>() / (n - 1) as f64;
    let expected = mean * (1.0 - mean / 1e6);
    assert!((var - expected).abs() / expected < 0.05, "variance {var} vs {expected}");
}

#[test]
fn zero_frame_observes_nothing() {
    let trace = SymbolTrace {
        states: vec![0.0; 32],
        pulse_end_means: vec![0.0; 32],
        sample_times: vec![0.0; 32],
        final_state: 0.0,
    };
    for model in [ObservationModel::Binomial { n_p: 10 }, ObservationModel::Poisson, ObservationModel::Noiseless] {
        assert!(observe_frame(&trace, &model, 3).unwrap().counts.iter().all(|&z| z == 0));
    }
}

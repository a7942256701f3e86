//! Counting-noise observation of the bound-site population.
//!
//! Given the mean bound count `y`, the observed count is Binomial(N_p, y/N_p),
//! or Poisson(y) in the large-N_p / low-occupancy limit. Sampling is exact
//! (inversion for small means, BTPE / transformed rejection otherwise) via
//! `rand_distr`, so a draw costs O(1) expected time for any N_p.

use rand::Rng;
use rand_distr::{Binomial, Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::response::SymbolTrace;
use crate::rng::{substream, Domain};

/// Out-of-domain slack absorbed by clamping, for floating-point round-off.
pub const DOMAIN_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ObservationModel {
    Binomial { n_p: u64 },
    Poisson,
    /// Rounds the mean; isolates ISI effects from counting noise.
    Noiseless,
}

impl ObservationModel {
    pub fn validate(&self) -> Result<()> {
        match self {
            ObservationModel::Binomial { n_p: 0 } => Err(Error::domain("n_p", "binomial model needs n_p >= 1")),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ObservationModel::Binomial { .. } => "binomial",
            ObservationModel::Poisson => "poisson",
            ObservationModel::Noiseless => "noiseless",
        }
    }
}

fn clamp_unit(p: f64, what: &'static str) -> Result<f64> {
    if p.is_nan() {
        return Err(Error::domain(what, "mean is NaN"));
    }
    if !(-DOMAIN_SLACK..=1.0 + DOMAIN_SLACK).contains(&p) {
        return Err(Error::domain(what, format!("occupancy {p} outside [0, 1]")));
    }
    Ok(p.clamp(0.0, 1.0))
}

/// Draws one observed count with the given mean.
pub fn sample_count<R: Rng + ?Sized>(
    model: &ObservationModel,
    mean: f64,
    rng: &mut R,
) -> Result<u64> {
    match *model {
        ObservationModel::Binomial { n_p } => {
            if n_p == 0 {
                return Err(Error::domain("n_p", "binomial model needs n_p >= 1"));
            }
            let p = clamp_unit(mean / n_p as f64, "mean")?;
            let dist = Binomial::new(n_p, p).map_err(|e| Error::domain("mean", e.to_string()))?;
            Ok(dist.sample(rng))
        }
        ObservationModel::Poisson => {
            if mean.is_nan() || mean < -DOMAIN_SLACK || mean.is_infinite() {
                return Err(Error::domain("mean", format!("Poisson mean must be >= 0, got {mean}")));
            }
            if mean <= 0.0 {
                return Ok(0);
            }
            let dist = Poisson::new(mean).map_err(|e| Error::domain("mean", e.to_string()))?;
            Ok(dist.sample(rng) as u64)
        }
        ObservationModel::Noiseless => {
            if mean.is_nan() || mean < -DOMAIN_SLACK || mean.is_infinite() {
                return Err(Error::domain("mean", format!("mean must be >= 0, got {mean}")));
            }
            Ok(mean.max(0.0).round() as u64)
        }
    }
}

/// Decision statistics `z_i`, one per symbol.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observation {
    pub counts: Vec<u64>,
}

impl Observation {
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

/// Samples every pulse-end mean of `trace` independently. Symbol `i` draws
/// from the stream keyed by `(seed, i)`, so the result does not depend on
/// evaluation order or thread count.
pub fn observe_frame(
    trace: &SymbolTrace,
    model: &ObservationModel,
    seed: u64,
) -> Result<Observation> {
    model.validate()?;
    let counts = trace
        .pulse_end_means
        .par_iter()
        .enumerate()
        .map(|(i, &mean)| {
            let mut rng = substream(seed, Domain::Noise, i as u64);
            sample_count(model, mean, &mut rng)
        })
        .collect::<Result<Vec<u64>>>()?;
    Ok(Observation { counts })
}

//! On-off keying: symbol generation and the induced surface concentration.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kinetics::PulseSpec;
use crate::rng::{substream, Domain};

/// A frame of OOK symbols with its timing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OokFrame {
    symbols: Vec<u8>,
    pub pulse: PulseSpec,
}

impl OokFrame {
    pub fn new(symbols: Vec<u8>, pulse: PulseSpec) -> Result<Self> {
        if symbols.is_empty() {
            return Err(Error::InvalidSymbols("frame must hold at least one symbol".into()));
        }
        if let Some(pos) = symbols.iter().position(|&s| s > 1) {
            return Err(Error::InvalidSymbols(format!(
                "symbol {} at position {pos} is not 0 or 1",
                symbols[pos]
            )));
        }
        pulse.validate()?;
        Ok(Self { symbols, pulse })
    }

    /// Parses a string of `0`/`1` characters such as `"1011"`.
    pub fn parse(text: &str, pulse: PulseSpec) -> Result<Self> {
        let symbols = text
            .trim()
            .chars()
            .enumerate()
            .map(|(pos, ch)| match ch {
                '0' => Ok(0),
                '1' => Ok(1),
                other => Err(Error::InvalidSymbols(format!(
                    "unexpected character {other:?} at position {pos}"
                ))),
            })
            .collect::<Result<Vec<u8>>>()?;
        Self::new(symbols, pulse)
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Start time `t_i = i T_b` of symbol `i`.
    pub fn symbol_start(&self, i: usize) -> f64 {
        i as f64 * self.pulse.interval
    }

    /// Pulse-end sampling time `t_{s,i} = t_i + T`.
    pub fn sample_time(&self, i: usize) -> f64 {
        self.symbol_start(i) + self.pulse.duration
    }

    /// End of the last symbol interval.
    pub fn end_time(&self) -> f64 {
        self.symbol_start(self.len())
    }

    /// Index of the symbol interval `[t_i, t_{i+1})` containing `t`, or
    /// `None` outside `[0, K T_b)`.
    pub fn locate(&self, t: f64) -> Option<usize> {
        if !(t >= 0.0) {
            return None;
        }
        let mut i = (t / self.pulse.interval).floor() as usize;
        // Correct for division rounding at interval edges.
        if i > 0 && t < self.symbol_start(i) {
            i -= 1;
        } else if t >= self.symbol_start(i + 1) {
            i += 1;
        }
        (i < self.len()).then_some(i)
    }

    /// Effective surface concentration at time `t`. Pulses occupy
    /// `[t_i, t_i + T)`, i.e. the unit step has `u(0) = 1`.
    pub fn concentration_at(&self, c0: f64, t: f64) -> f64 {
        match self.locate(t) {
            Some(i) if self.symbols[i] == 1 && t - self.symbol_start(i) < self.pulse.duration => c0,
            _ => 0.0,
        }
    }

    pub fn to_symbol_string(&self) -> String {
        self.symbols.iter().map(|&s| if s == 1 { '1' } else { '0' }).collect()
    }
}

impl std::fmt::Display for OokFrame {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_symbol_string())
    }
}

/// Draws `count` i.i.d. Bernoulli(`p_one`) symbols from the symbol stream of
/// `seed`.
pub fn generate_symbols(count: usize, seed: u64, p_one: f64) -> Result<Vec<u8>> {
    if count == 0 {
        return Err(Error::domain("K", "frame length must be >= 1"));
    }
    if !(0.0..=1.0).contains(&p_one) {
        return Err(Error::domain("p_one", format!("must lie in [0, 1], got {p_one}")));
    }
    let mut rng = substream(seed, Domain::Symbols, 0);
    Ok((0..count).map(|_| u8::from(rng.random::<f64>() < p_one)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pulse() -> PulseSpec {
        PulseSpec::new(2.0, 5.0).unwrap()
    }

    #[test]
    fn degenerate_probabilities() {
        assert!(generate_symbols(1000, 9, 0.0).unwrap().iter().all(|&s| s == 0));
        assert!(generate_symbols(1000, 9, 1.0).unwrap().iter().all(|&s| s == 1));
    }

    #[test]
    fn equiprobable_mean() {
        let k = 100_000;
        let s = generate_symbols(k, 12345, 0.5).unwrap();
        let mean = s.iter().map(|&v| v as f64).sum::<f64>() / k as f64;
        assert!((mean - 0.5).abs() < 3.0 * (0.25 / k as f64).sqrt());
    }

    #[test]
    fn generation_is_seeded() {
        assert_eq!(generate_symbols(64, 1, 0.5).unwrap(), generate_symbols(64, 1, 0.5).unwrap());
        assert_ne!(generate_symbols(64, 1, 0.5).unwrap(), generate_symbols(64, 2, 0.5).unwrap());
        assert!(generate_symbols(0, 1, 0.5).is_err());
        assert!(generate_symbols(4, 1, 1.5).is_err());
    }

    #[test]
    fn single_pulse_waveform() {
        let f = OokFrame::parse("1", pulse()).unwrap();
        assert_eq!(f.concentration_at(3.0, 1.0), 3.0);
        assert_eq!(f.concentration_at(3.0, 0.0), 3.0);
        assert_eq!(f.concentration_at(3.0, 2.0), 0.0);
        assert_eq!(f.concentration_at(3.0, 2.0 + 1e-9), 0.0);
        assert_eq!(f.concentration_at(3.0, -1e-9), 0.0);
    }

    #[test]
    fn pattern_waveform() {
        let f = OokFrame::parse("1011", pulse()).unwrap();
        let expect = [(0.5, 1.0), (2.5, 0.0), (5.5, 0.0), (10.0, 1.0), (11.9, 1.0), (12.0, 0.0), (15.0, 1.0), (19.0, 0.0), (25.0, 0.0)];
        for (t, c) in expect {
            assert_eq!(f.concentration_at(1.0, t), c, "t = {t}");
        }
        let zeros = OokFrame::parse("0000", pulse()).unwrap();
        assert!((0..200).all(|j| zeros.concentration_at(1.0, j as f64 * 0.1) == 0.0));
    }

    #[test]
    fn back_to_back_pulses_are_contiguous() {
        let f = OokFrame::parse("11", PulseSpec::new(3.0, 3.0).unwrap()).unwrap();
        assert_eq!(f.concentration_at(1.0, 3.0), 1.0);
        assert_eq!(f.concentration_at(1.0, 6.0), 0.0);
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(OokFrame::parse("10a1", pulse()).is_err());
        assert!(OokFrame::parse("", pulse()).is_err());
        assert_eq!(OokFrame::parse("0110", pulse()).unwrap().to_string(), "0110");
    }
}

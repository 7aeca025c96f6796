//! Deterministic test signals with known dynamics.
//!
//! White noise comes from xoshiro256++ seeded through SplitMix64
//! (`Xoshiro256PlusPlus::seed_from_u64`); each output is the top 53 bits of
//! one `next_u64` draw mapped to `[-1, 1)`. The sequence for a given seed is
//! the same on every platform.

use rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::audio_io::Signal;
use crate::{Error, Result};

/// `x_{k+1} = r x_k (1 - x_k)`; returns `x_1..x_n`.
pub fn logistic_map(r: f64, x0: f64, n: usize) -> Result<Vec<f64>> {
    if !(r > 0.0 && r <= 4.0) {
        return Err(Error::Domain(format!("logistic parameter r={r} outside (0, 4]")));
    }
    if !(x0 > 0.0 && x0 < 1.0) {
        return Err(Error::Domain(format!("logistic seed x0={x0} outside (0, 1)")));
    }
    let mut x = x0;
    Ok((0..n)
        .map(|_| {
            x = r * x * (1.0 - x);
            x
        })
        .collect())
}

/// Shift to zero mean and scale to unit RMS. A constant input is only
/// centred.
pub fn normalize_unit_rms(x: &mut [f64]) {
    if x.is_empty() {
        return;
    }
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter_mut().for_each(|v| *v -= mean);
    let rms = (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt();
    if rms > 0.0 {
        x.iter_mut().for_each(|v| *v /= rms);
    }
}

/// `amp * sin(2 pi f k / rate + phase)` for `k = 0..n`.
pub fn sine(freq_hz: f64, sample_rate: u32, n: usize, amp: f64, phase: f64) -> Result<Vec<f64>> {
    let nyquist = f64::from(sample_rate) / 2.0;
    if !(freq_hz > 0.0 && freq_hz < nyquist) {
        return Err(Error::Domain(format!("frequency {freq_hz} Hz outside (0, {nyquist}) Hz")));
    }
    let w = 2.0 * std::f64::consts::PI * freq_hz / f64::from(sample_rate);
    Ok((0..n).map(|k| amp * (w * k as f64 + phase).sin()).collect())
}

/// Uniform samples in `[-1, 1)`.
pub fn white_noise(seed: u64, n: usize) -> Vec<f64> {
    let mut rng = Xoshiro256PlusPlus::seed_from_u64(seed);
    (0..n)
        .map(|_| (rng.next_u64() >> 11) as f64 * (2.0 / (1u64 << 53) as f64) - 1.0)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneratorKind {
    Logistic { r: f64, x0: f64 },
    Sine { freq_hz: f64, amp: f64, phase: f64 },
    Noise { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    pub sample_rate: u32,
    /// Zero mean, unit RMS after generation.
    pub normalize: bool,
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<Signal> {
        if self.n == 0 {
            return Err(Error::Domain("sample count must be at least 1".into()));
        }
        let mut samples = match self.kind {
            GeneratorKind::Logistic { r, x0 } => logistic_map(r, x0, self.n)?,
            GeneratorKind::Sine { freq_hz, amp, phase } => sine(freq_hz, self.sample_rate, self.n, amp, phase)?,
            GeneratorKind::Noise { seed } => white_noise(seed, self.n),
        };
        if self.normalize {
            normalize_unit_rms(&mut samples);
        }
        Signal::new(samples, self.sample_rate)
    }
}

use rayon::prelude::*;
use serde::Serialize;

use super::Signal;
use crate::{Error, Result};

/// Kaiser-windowed sinc kernel settings shared by the decimation and
/// interpolation stages.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BandLimitConfig {
    /// Kernel support in samples of the lower rate.
    pub taps_per_phase: usize,
    pub kaiser_beta: f64,
    /// Cutoff as a fraction of the lower Nyquist frequency.
    pub rolloff: f64,
}

impl Default for BandLimitConfig {
    fn default() -> Self {
        BandLimitConfig { taps_per_phase: 64, kaiser_beta: 8.6, rolloff: 0.95 }
    }
}

/// Zeroth-order modified Bessel function of the first kind.
fn bessel_i0(x: f64) -> f64 {
    let half = x / 2.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        term *= (half / k as f64) * (half / k as f64);
        sum += term;
        if term < sum * 1e-17 {
            break;
        }
    }
    sum
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        let px = std::f64::consts::PI * x;
        px.sin() / px
    }
}

/// Mirror index `k` into `0..n` (edge sample not repeated).
fn reflect(k: i64, n: usize) -> usize {
    if n == 1 {
        return 0;
    }
    let period = 2 * (n as i64 - 1);
    let r = k.rem_euclid(period);
    if r < n as i64 {
        r as usize
    } else {
        (period - r) as usize
    }
}

struct Kernel {
    cutoff: f64,
    half_width: f64,
    beta: f64,
    i0_beta: f64,
}

impl Kernel {
    fn new(from_rate: f64, to_rate: f64, cfg: &BandLimitConfig) -> Self {
        let ratio = (to_rate / from_rate).min(1.0);
        Kernel {
            cutoff: 0.5 * cfg.rolloff * ratio,
            half_width: cfg.taps_per_phase as f64 / 2.0 / ratio,
            beta: cfg.kaiser_beta,
            i0_beta: bessel_i0(cfg.kaiser_beta),
        }
    }

    fn weight(&self, u: f64) -> f64 {
        let r = u / self.half_width;
        let window = bessel_i0(self.beta * (1.0 - r * r).max(0.0).sqrt()) / self.i0_beta;
        sinc(2.0 * self.cutoff * u) * window
    }
}

/// Evaluates the band-limited interpolant of `x` (sampled at `from_rate`) at
/// `out_len` points spaced `1/to_rate` apart. Taps falling outside the input
/// are mirrored back in and weights are normalized per output sample, so a
/// constant input comes back unchanged.
fn resample(x: &[f64], from_rate: u32, to_rate: u32, out_len: usize, cfg: &BandLimitConfig) -> Vec<f64> {
    let kernel = Kernel::new(f64::from(from_rate), f64::from(to_rate), cfg);
    let n = x.len();
    (0..out_len)
        .into_par_iter()
        .map(|i| {
            let t = i as f64 * f64::from(from_rate) / f64::from(to_rate);
            let lo = (t - kernel.half_width).floor() as i64 + 1;
            let hi = (t + kernel.half_width).ceil() as i64 - 1;
            let (mut acc, mut norm) = (0.0, 0.0);
            for k in lo..=hi {
                let w = kernel.weight(k as f64 - t);
                acc += w * x[reflect(k, n)];
                norm += w;
            }
            acc / norm
        })
        .collect()
}

/// Simulates a recording made at `low_rate`: anti-alias filter and decimate
/// to `low_rate`, then sinc-interpolate back to the original rate. The output
/// has the same rate and length as the input.
pub fn band_limit(sig: &Signal, low_rate: u32, cfg: &BandLimitConfig) -> Result<Signal> {
    if low_rate == 0 || low_rate >= sig.sample_rate {
        return Err(Error::Rate { low_rate, sample_rate: sig.sample_rate });
    }
    if cfg.taps_per_phase < 2 || !(cfg.rolloff > 0.0 && cfg.rolloff <= 1.0) || !(cfg.kaiser_beta >= 0.0) {
        return Err(Error::InvalidParameter(format!("bad band-limit filter settings {cfg:?}")));
    }
    if sig.is_empty() {
        return Ok(sig.clone());
    }
    let n = sig.len();
    let n_low = (n as u64 * u64::from(low_rate)).div_ceil(u64::from(sig.sample_rate)) as usize;
    let low = resample(&sig.samples, sig.sample_rate, low_rate, n_low, cfg);
    let samples = resample(&low, low_rate, sig.sample_rate, n, cfg);
    Ok(Signal { samples, sample_rate: sig.sample_rate })
}

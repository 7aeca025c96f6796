//! Objective bandwidth-extension metrics: log-spectral distance and the two
//! scale-invariant ratios, plus the STFT they are built on.

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::audio_io::Signal;
use crate::{Error, Result};

pub const DEFAULT_N_FFT: usize = 2048;
pub const DEFAULT_HOP: usize = 512;
pub const DEFAULT_FLOOR: f64 = 1e-10;

/// Scale-invariant ratios are clamped to `[-CAP_DB, CAP_DB]`.
pub const CAP_DB: f64 = 100.0;
const TINY: f64 = 1e-30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowKind {
    Hann,
}

/// Periodic Hann window of length `n`.
pub fn hann(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 0.5 - 0.5 * (2.0 * std::f64::consts::PI * i as f64 / n as f64).cos())
        .collect()
}

/// One-sided short-time spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrogram {
    /// `n_frames` rows of `n_fft / 2 + 1` bins.
    pub frames: Vec<Vec<Complex64>>,
    pub n_fft: usize,
    pub hop: usize,
    pub window: WindowKind,
}

impl Spectrogram {
    pub fn n_frames(&self) -> usize {
        self.frames.len()
    }

    pub fn n_bins(&self) -> usize {
        self.n_fft / 2 + 1
    }
}

/// Frame `t` covers `[t*hop, t*hop + n_fft)`; no padding, trailing partial
/// frame dropped.
pub fn stft(x: &[f64], n_fft: usize, hop: usize, window: WindowKind) -> Result<Spectrogram> {
    if n_fft < 16 || !n_fft.is_power_of_two() {
        return Err(Error::InvalidParameter(format!("n_fft must be a power of two >= 16, got {n_fft}")));
    }
    if hop == 0 || hop > n_fft {
        return Err(Error::InvalidParameter(format!("hop must lie in 1..={n_fft}, got {hop}")));
    }
    if x.len() < n_fft {
        return Err(Error::SignalTooShort { len: x.len(), required: n_fft });
    }
    let win = match window {
        WindowKind::Hann => hann(n_fft),
    };
    let fft = FftPlanner::<f64>::new().plan_fft_forward(n_fft);
    let n_frames = 1 + (x.len() - n_fft) / hop;
    let mut buf = vec![Complex64::default(); n_fft];
    let mut frames = Vec::with_capacity(n_frames);
    for t in 0..n_frames {
        let seg = &x[t * hop..t * hop + n_fft];
        for ((b, &s), &w) in buf.iter_mut().zip(seg).zip(&win) {
            *b = Complex64::new(s * w, 0.0);
        }
        fft.process(&mut buf);
        frames.push(buf[..=n_fft / 2].to_vec());
    }
    Ok(Spectrogram { frames, n_fft, hop, window })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LsdParams {
    pub n_fft: usize,
    pub hop: usize,
    pub floor: f64,
}

impl Default for LsdParams {
    fn default() -> Self {
        LsdParams { n_fft: DEFAULT_N_FFT, hop: DEFAULT_HOP, floor: DEFAULT_FLOOR }
    }
}

fn check_pair(reference: &Signal, estimate: &Signal) -> Result<()> {
    if reference.sample_rate != estimate.sample_rate {
        return Err(Error::RateMismatch { reference: reference.sample_rate, estimate: estimate.sample_rate });
    }
    if reference.len() != estimate.len() {
        return Err(Error::LengthMismatch { reference: reference.len(), estimate: estimate.len() });
    }
    Ok(())
}

/// Mean over frames of the RMS (over bins) difference of `log10` power
/// spectra.
pub fn lsd(reference: &Signal, estimate: &Signal, params: LsdParams) -> Result<f64> {
    check_pair(reference, estimate)?;
    let a = stft(&reference.samples, params.n_fft, params.hop, WindowKind::Hann)?;
    let b = stft(&estimate.samples, params.n_fft, params.hop, WindowKind::Hann)?;
    Ok(lsd_from_spectra(&a.frames, &b.frames, params.floor))
}

pub(crate) fn lsd_from_spectra(a: &[Vec<Complex64>], b: &[Vec<Complex64>], floor: f64) -> f64 {
    let total: f64 = a
        .iter()
        .zip(b)
        .map(|(fa, fb)| {
            let ms = fa
                .iter()
                .zip(fb)
                .map(|(x, y)| {
                    let diff = (x.norm_sqr() + floor).log10() - (y.norm_sqr() + floor).log10();
                    diff * diff
                })
                .sum::<f64>()
                / fa.len() as f64;
            ms.sqrt()
        })
        .sum();
    total / a.len() as f64
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn ratio_db(reference: &[f64], estimate: &[f64]) -> Result<f64> {
    if reference.len() != estimate.len() {
        return Err(Error::LengthMismatch { reference: reference.len(), estimate: estimate.len() });
    }
    let energy = dot(reference, reference);
    if energy == 0.0 {
        return Err(Error::ZeroReference);
    }
    let alpha = dot(estimate, reference) / energy;
    let (target, noise) = reference.iter().zip(estimate).fold((0.0, 0.0), |(t, e), (&r, &s)| {
        let proj = alpha * r;
        (t + proj * proj, e + (s - proj) * (s - proj))
    });
    let db = 10.0 * (target / (noise + TINY)).log10();
    // log10(0) = -inf for a zero or orthogonal estimate
    Ok(if db.is_nan() { -CAP_DB } else { db.clamp(-CAP_DB, CAP_DB) })
}

/// Scale-invariant signal-to-distortion ratio in dB, without mean removal.
pub fn si_sdr(reference: &[f64], estimate: &[f64]) -> Result<f64> {
    ratio_db(reference, estimate)
}

/// [`si_sdr`] after removing the mean of each input.
pub fn si_snr(reference: &[f64], estimate: &[f64]) -> Result<f64> {
    let centre = |x: &[f64]| {
        let m = x.iter().sum::<f64>() / x.len().max(1) as f64;
        x.iter().map(|v| v - m).collect::<Vec<_>>()
    };
    ratio_db(&centre(reference), &centre(estimate))
}

/// Field order is the JSON key order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricsReport {
    pub lsd: f64,
    pub si_sdr: f64,
    pub si_snr: f64,
    pub n_fft: usize,
    pub hop: usize,
    pub floor: f64,
}

pub fn evaluate(reference: &Signal, estimate: &Signal, params: LsdParams) -> Result<MetricsReport> {
    Ok(MetricsReport {
        lsd: lsd(reference, estimate, params)?,
        si_sdr: si_sdr(&reference.samples, &estimate.samples)?,
        si_snr: si_snr(&reference.samples, &estimate.samples)?,
        n_fft: params.n_fft,
        hop: params.hop,
        floor: params.floor,
    })
}

//! Audio ingestion and the preprocessing chain: mono mixdown, silence
//! trimming, and band-limit simulation.

mod resample;
mod silence;
mod wav;

pub use resample::{band_limit, BandLimitConfig};
pub use silence::{trim_silence, TrimReport, DEFAULT_PAD_MS, DEFAULT_SILENCE_DB};
pub use wav::{load_wav, write_wav, SampleFormat, WriteReport};

use crate::{Error, Result};

/// Mono waveform with its sample rate in Hz.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    pub samples: Vec<f64>,
    pub sample_rate: u32,
}

impl Signal {
    pub fn new(samples: Vec<f64>, sample_rate: u32) -> Result<Self> {
        if sample_rate == 0 {
            return Err(Error::InvalidParameter("sample rate must be positive".into()));
        }
        if let Some(i) = samples.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(format!("sample {i} is not finite")));
        }
        Ok(Signal { samples, sample_rate })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_secs(&self) -> f64 {
        self.samples.len() as f64 / f64::from(self.sample_rate)
    }
}

/// Arithmetic mean across channels, frame by frame.
pub fn mix_to_mono(channels: &[Vec<f64>]) -> Result<Vec<f64>> {
    let first = channels.first().ok_or(Error::EmptyInput)?;
    let expected = first.len();
    for (channel, c) in channels.iter().enumerate() {
        if c.len() != expected {
            return Err(Error::ChannelLengthMismatch { channel, len: c.len(), expected });
        }
    }
    if channels.len() == 1 {
        return Ok(first.clone());
    }
    let n = channels.len() as f64;
    Ok((0..expected)
        .map(|i| channels.iter().map(|c| c[i]).sum::<f64>() / n)
        .collect())
}

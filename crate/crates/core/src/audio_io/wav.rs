use std::path::Path;

use super::{mix_to_mono, Signal};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SampleFormat {
    Pcm16,
    #[default]
    Float32,
}

impl std::str::FromStr for SampleFormat {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "pcm16" => Ok(SampleFormat::Pcm16),
            "float32" => Ok(SampleFormat::Float32),
            other => Err(format!("unknown sample format `{other}` (expected pcm16 or float32)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct WriteReport {
    /// Samples saturated to full scale while quantizing to 16 bits.
    pub clipped: usize,
}

fn convert_err(path: &Path, err: hound::Error) -> Error {
    match err {
        hound::Error::IoError(source) => Error::Io { path: path.to_path_buf(), source },
        other => Error::Format { path: path.to_path_buf(), detail: other.to_string() },
    }
}

/// Reads a PCM16 or float32 RIFF/WAVE file, mixing all channels to mono.
/// 16-bit samples are scaled by `1/32768`.
pub fn load_wav(path: impl AsRef<Path>) -> Result<Signal> {
    let path = path.as_ref();
    let reader = hound::WavReader::open(path).map_err(|e| convert_err(path, e))?;
    let spec = reader.spec();
    let interleaved: Vec<f64> = match (spec.sample_format, spec.bits_per_sample) {
        (hound::SampleFormat::Int, 16) => reader
            .into_samples::<i16>()
            .map(|s| s.map(|v| f64::from(v) / 32768.0))
            .collect::<std::result::Result<_, _>>(),
        (hound::SampleFormat::Float, 32) => reader
            .into_samples::<f32>()
            .map(|s| s.map(f64::from))
            .collect::<std::result::Result<_, _>>(),
        (fmt, bits) => {
            return Err(Error::Format {
                path: path.to_path_buf(),
                detail: format!("unsupported sample format {fmt:?} with {bits} bits"),
            })
        }
    }
    .map_err(|e| convert_err(path, e))?;

    let n_ch = usize::from(spec.channels);
    if n_ch == 0 {
        return Err(Error::Format { path: path.to_path_buf(), detail: "zero channels".into() });
    }
    let mut channels = vec![Vec::with_capacity(interleaved.len() / n_ch); n_ch];
    for frame in interleaved.chunks_exact(n_ch) {
        for (c, &v) in frame.iter().enumerate() {
            channels[c].push(v);
        }
    }
    let samples = mix_to_mono(&channels)?;
    Signal::new(samples, spec.sample_rate).map_err(|e| Error::Format {
        path: path.to_path_buf(),
        detail: e.to_string(),
    })
}

/// Writes a mono WAV file. PCM16 output saturates at full scale.
pub fn write_wav(sig: &Signal, path: impl AsRef<Path>, format: SampleFormat) -> Result<WriteReport> {
    let path = path.as_ref();
    let (bits, sample_format) = match format {
        SampleFormat::Pcm16 => (16, hound::SampleFormat::Int),
        SampleFormat::Float32 => (32, hound::SampleFormat::Float),
    };
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: sig.sample_rate,
        bits_per_sample: bits,
        sample_format,
    };
    let err = |e| convert_err(path, e);
    let mut writer = hound::WavWriter::create(path, spec).map_err(err)?;
    let mut report = WriteReport::default();
    match format {
        SampleFormat::Pcm16 => {
            for &v in &sig.samples {
                if !(-1.0..=1.0).contains(&v) {
                    report.clipped += 1;
                }
                let q = (v * 32768.0).round().clamp(-32768.0, 32767.0) as i16;
                writer.write_sample(q).map_err(err)?;
            }
        }
        SampleFormat::Float32 => {
            for &v in &sig.samples {
                writer.write_sample(v as f32).map_err(err)?;
            }
        }
    }
    writer.finalize().map_err(err)?;
    Ok(report)
}

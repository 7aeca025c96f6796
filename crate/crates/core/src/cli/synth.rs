use std::path::PathBuf;

use clap::{Args, ValueEnum};

use super::output::StagedFiles;
use super::{CliError, CliResult};
use crate::audio_io::{write_wav, SampleFormat};
use crate::synth::{GeneratorKind, GeneratorSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Logistic,
    Sine,
    Noise,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, value_enum)]
    kind: Kind,

    #[arg(long)]
    out: PathBuf,

    /// Sample rate in Hz.
    #[arg(long, default_value_t = 16000)]
    rate: u32,

    /// Duration in seconds (ignored when --n is given).
    #[arg(long, default_value_t = 1.0)]
    dur: f64,

    /// Sample count.
    #[arg(long)]
    n: Option<usize>,

    #[arg(long, default_value_t = 440.0)]
    freq: f64,

    #[arg(long, default_value_t = 0.5)]
    amp: f64,

    /// Phase offset in radians.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    phase: f64,

    /// Logistic map parameter.
    #[arg(long, default_value_t = 4.0)]
    r: f64,

    /// Logistic map initial state.
    #[arg(long, default_value_t = 0.3)]
    x0: f64,

    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Recentre to zero mean and scale to unit RMS.
    #[arg(long)]
    normalize: bool,

    /// pcm16 or float32.
    #[arg(long, default_value = "float32")]
    format: SampleFormat,
}

pub fn run(args: &SynthArgs) -> CliResult<()> {
    let n = match args.n {
        Some(n) => n,
        None => {
            if !(args.dur > 0.0) || !args.dur.is_finite() {
                return Err(CliError::usage("--dur must be positive"));
            }
            (args.dur * f64::from(args.rate)).round() as usize
        }
    };
    let kind = match args.kind {
        Kind::Logistic => GeneratorKind::Logistic { r: args.r, x0: args.x0 },
        Kind::Sine => GeneratorKind::Sine { freq_hz: args.freq, amp: args.amp, phase: args.phase },
        Kind::Noise => GeneratorKind::Noise { seed: args.seed },
    };
    if args.rate == 0 {
        return Err(CliError::usage("--rate must be positive"));
    }
    let spec = GeneratorSpec { kind, n, sample_rate: args.rate, normalize: args.normalize };
    let sig = spec.generate()?;

    let mut files = StagedFiles::new();
    let report = files.write_path(args.out.clone(), |tmp| write_wav(&sig, tmp, args.format))?;
    files.commit()?;
    if report.clipped > 0 {
        eprintln!("chaoswave: warning: {} samples clipped to full scale", report.clipped);
    }
    Ok(())
}

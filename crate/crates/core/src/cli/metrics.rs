use std::path::PathBuf;

use clap::{Args, ValueEnum};

use super::{CliError, CliResult, EXIT_MISMATCH};
use crate::audio_io::{load_wav, Signal};
use crate::metrics::{self, LsdParams, DEFAULT_FLOOR, DEFAULT_HOP, DEFAULT_N_FFT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Align {
    /// Cut both signals to the shorter length.
    Truncate,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    #[arg(long)]
    reference: PathBuf,

    #[arg(long)]
    estimate: PathBuf,

    #[arg(long, value_enum)]
    align: Option<Align>,

    #[arg(long, default_value_t = DEFAULT_N_FFT)]
    n_fft: usize,

    #[arg(long, default_value_t = DEFAULT_HOP)]
    hop: usize,

    /// Power floor added before taking log10.
    #[arg(long, default_value_t = DEFAULT_FLOOR)]
    floor: f64,
}

pub fn run(args: &MetricsArgs) -> CliResult<()> {
    if !(args.floor > 0.0) {
        return Err(CliError::usage("--floor must be positive"));
    }
    let mut reference = load_wav(&args.reference)?;
    let mut estimate = load_wav(&args.estimate)?;
    if reference.sample_rate != estimate.sample_rate {
        return Err(CliError::new(
            EXIT_MISMATCH,
            format!(
                "sample rates differ: reference {} Hz, estimate {} Hz",
                reference.sample_rate, estimate.sample_rate
            ),
        ));
    }
    if reference.len() != estimate.len() {
        match args.align {
            Some(Align::Truncate) => {
                let n = reference.len().min(estimate.len());
                truncate(&mut reference, n);
                truncate(&mut estimate, n);
            }
            None => {
                return Err(CliError::new(
                    EXIT_MISMATCH,
                    format!(
                        "lengths differ: reference {} samples, estimate {} samples (use --align truncate)",
                        reference.len(),
                        estimate.len()
                    ),
                ))
            }
        }
    }
    let params = LsdParams { n_fft: args.n_fft, hop: args.hop, floor: args.floor };
    let report = metrics::evaluate(&reference, &estimate, params)?;
    let json = serde_json::to_string(&report).map_err(|e| CliError::usage(e.to_string()))?;
    println!("{json}");
    Ok(())
}

fn truncate(sig: &mut Signal, n: usize) {
    sig.samples.truncate(n);
}

//! Batch front-end.
//!
//! Exit codes: 0 success, 2 usage or parameter error, 3 I/O or format error,
//! 4 degenerate computation, 5 mismatched metric inputs.

mod extract;
mod metrics;
mod output;
mod synth;

use std::ffi::OsString;

use clap::{Parser, Subcommand};

use crate::Error;

pub const THREADS_ENV: &str = "CHAOSWAVE_THREADS";

pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_DEGENERATE: i32 = 4;
pub const EXIT_MISMATCH: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "chaoswave", version, about = "Lyapunov exponent maps and recurrence plots from speech audio")]
pub struct Cli {
    /// Worker threads (falls back to $CHAOSWAVE_THREADS, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Extract exponent maps and recurrence plots from a WAV file.
    Extract(extract::ExtractArgs),
    /// Compare an estimate against a reference (LSD, SI-SDR, SI-SNR).
    Metrics(metrics::MetricsArgs),
    /// Write a synthetic test signal.
    Synth(synth::SynthArgs),
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn new(code: i32, message: impl Into<String>) -> Self {
        CliError { code, message: message.into() }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        CliError::new(EXIT_USAGE, message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Io { .. } | Error::Format { .. } => EXIT_IO,
            Error::LengthMismatch { .. } | Error::RateMismatch { .. } => EXIT_MISMATCH,
            Error::InvalidParameter(_) | Error::Domain(_) | Error::Rate { .. } => EXIT_USAGE,
            _ => EXIT_DEGENERATE,
        };
        CliError::new(code, e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn resolve_threads(flag: Option<usize>) -> CliResult<usize> {
    if let Some(n) = flag {
        return Ok(n);
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("{THREADS_ENV}={v} is not a thread count"))),
        _ => Ok(0),
    }
}

/// Parses `args` (program name first) and runs the subcommand, returning the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("chaoswave: {}", e.message);
            e.code
        }
    }
}

fn dispatch(cli: Cli) -> CliResult<()> {
    let threads = resolve_threads(cli.threads)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| CliError::usage(format!("cannot start thread pool: {e}")))?;
    pool.install(|| match cli.command {
        Command::Extract(args) => extract::run(&args),
        Command::Metrics(args) => metrics::run(&args),
        Command::Synth(args) => synth::run(&args),
    })
}

pub fn main() -> i32 {
    run(std::env::args_os())
}

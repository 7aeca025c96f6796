use std::io::Write;
use std::path::PathBuf;

use clap::Args;
use serde::Serialize;

use super::output::StagedFiles;
use super::{CliError, CliResult, EXIT_DEGENERATE, EXIT_IO};
use crate::audio_io::{self, BandLimitConfig, DEFAULT_PAD_MS, DEFAULT_SILENCE_DB};
use crate::embedding::{NeighborBackend, DEFAULT_DELAY, DEFAULT_EMBED_DIM};
use crate::format::sig9;
use crate::lyapunov::{self, LyapunovConfig, SlopeFit, DEFAULT_EPSILON, DEFAULT_MIN_HORIZON};
use crate::recurrence::{self, DEFAULT_CAP};

#[derive(Debug, Args)]
pub struct ExtractArgs {
    /// Input WAV file (PCM16 or float32, any channel count).
    #[arg(long)]
    input: PathBuf,

    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    out: PathBuf,

    /// Trim leading and trailing silence first.
    #[arg(long)]
    trim_silence: bool,

    /// Silence threshold relative to the loudest frame, in dB.
    #[arg(long, default_value_t = DEFAULT_SILENCE_DB, allow_negative_numbers = true)]
    silence_db: f64,

    /// Padding kept around the detected speech, in milliseconds.
    #[arg(long, default_value_t = DEFAULT_PAD_MS)]
    pad_ms: f64,

    /// Simulate a recording at this rate (Hz) before extraction.
    #[arg(long)]
    band_limit: Option<u32>,

    /// Comma-separated chunk lengths for the exponent maps.
    #[arg(long, value_delimiter = ',', default_values_t = lyapunov::DEFAULT_WINDOWS)]
    windows: Vec<usize>,

    /// Comma-separated decimation strides for the recurrence plots.
    #[arg(long, value_delimiter = ',', default_values_t = recurrence::DEFAULT_SCALES)]
    scales: Vec<usize>,

    /// Recurrence plot side-length cap.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,

    /// Embedding dimension.
    #[arg(long, default_value_t = DEFAULT_EMBED_DIM)]
    embed_dim: usize,

    /// Embedding delay, in samples.
    #[arg(long, default_value_t = DEFAULT_DELAY)]
    delay: usize,

    /// Added to distances before taking the log.
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    epsilon: f64,

    /// Minimum divergence horizon; 0 uses `M - max nu - 1` unmodified.
    #[arg(long, default_value_t = DEFAULT_MIN_HORIZON)]
    min_horizon: usize,

    /// Slope estimator: origin (default) or affine (diagnostic).
    #[arg(long, default_value = "origin")]
    fit: SlopeFit,

    /// Neighbour search backend: kd-tree or brute-force.
    #[arg(long, default_value = "kd-tree")]
    backend: NeighborBackend,

    /// Also write each recurrence plot as a 0/1 CSV.
    #[arg(long)]
    rp_csv: bool,
}

#[derive(Serialize)]
struct Meta<'a> {
    tool: &'static str,
    version: &'static str,
    input: String,
    stem: &'a str,
    sample_rate: u32,
    input_samples: usize,
    analyzed_samples: usize,
    preprocessing: Preprocessing,
    lyapunov: LyapunovMeta,
    recurrence: RecurrenceMeta,
    warnings: Warnings,
    outputs: Vec<String>,
}

#[derive(Serialize)]
struct Preprocessing {
    trim_silence: Option<TrimMeta>,
    band_limit: Option<BandLimitMeta>,
}

#[derive(Serialize)]
struct TrimMeta {
    threshold_db: f64,
    pad_ms: f64,
    frame_ms: f64,
    hop_ms: f64,
    kept_start: usize,
    kept_end: usize,
}

#[derive(Serialize)]
struct BandLimitMeta {
    low_rate: u32,
    #[serde(flatten)]
    filter: BandLimitConfig,
    window: &'static str,
}

#[derive(Serialize)]
struct LyapunovMeta {
    #[serde(flatten)]
    config: LyapunovConfig,
    log_base: &'static str,
    windows: Vec<usize>,
    maps: Vec<MapMeta>,
}

#[derive(Serialize)]
struct MapMeta {
    window: usize,
    chunks: usize,
    substituted: usize,
    too_short: bool,
}

#[derive(Serialize)]
struct RecurrenceMeta {
    scales: Vec<usize>,
    cap: usize,
    threshold_rule: &'static str,
    plots: Vec<PlotMeta>,
}

#[derive(Serialize)]
struct PlotMeta {
    scale: usize,
    size: usize,
    threshold: f64,
    recurrence_rate: f64,
}

#[derive(Serialize)]
struct Warnings {
    substituted_chunks: usize,
    empty_windows: usize,
}

/// Round-trips through nine significant digits so the JSON carries the same
/// precision as the CSV.
fn round9(v: f64) -> f64 {
    sig9(v).parse().unwrap_or(v)
}

fn validate(args: &ExtractArgs) -> CliResult<()> {
    if args.windows.is_empty() || args.windows.contains(&0) {
        return Err(CliError::usage("--windows needs positive window lengths"));
    }
    if args.scales.is_empty() || args.scales.contains(&0) {
        return Err(CliError::usage("--scales needs positive strides"));
    }
    if args.cap == 0 || args.embed_dim == 0 || args.delay == 0 {
        return Err(CliError::usage("--cap, --embed-dim and --delay must be positive"));
    }
    if !(args.epsilon >= 0.0) || !args.epsilon.is_finite() {
        return Err(CliError::usage("--epsilon must be a finite non-negative number"));
    }
    if args.trim_silence && !(args.silence_db < 0.0 && args.pad_ms >= 0.0) {
        return Err(CliError::usage("--silence-db must be negative and --pad-ms non-negative"));
    }
    if !args.input.is_file() {
        return Err(CliError::new(EXIT_IO, format!("{}: no such input file", args.input.display())));
    }
    if args.out.exists() && !args.out.is_dir() {
        return Err(CliError::new(EXIT_IO, format!("{}: not a directory", args.out.display())));
    }
    Ok(())
}

pub fn run(args: &ExtractArgs) -> CliResult<()> {
    validate(args)?;
    let stem = args
        .input
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "input".into());

    let loaded = audio_io::load_wav(&args.input)?;
    let input_samples = loaded.len();
    let mut sig = loaded;

    let mut trim_meta = None;
    if args.trim_silence {
        let (trimmed, report) = audio_io::trim_silence(&sig, args.silence_db, args.pad_ms);
        if report.all_silent {
            return Err(CliError::new(EXIT_DEGENERATE, "input is silent throughout; nothing to analyze"));
        }
        trim_meta = Some(TrimMeta {
            threshold_db: args.silence_db,
            pad_ms: args.pad_ms,
            frame_ms: 20.0,
            hop_ms: 10.0,
            kept_start: report.start,
            kept_end: report.end,
        });
        sig = trimmed;
    }

    let filter = BandLimitConfig::default();
    let mut band_meta = None;
    if let Some(low_rate) = args.band_limit {
        sig = audio_io::band_limit(&sig, low_rate, &filter)?;
        band_meta = Some(BandLimitMeta { low_rate, filter, window: "kaiser-sinc" });
    }
    if sig.is_empty() {
        return Err(CliError::new(EXIT_DEGENERATE, "no samples left to analyze"));
    }

    let cfg = LyapunovConfig {
        embed_dim: args.embed_dim,
        delay: args.delay,
        epsilon: args.epsilon,
        min_horizon: args.min_horizon,
        fit: args.fit,
        backend: args.backend,
    };
    let features = lyapunov::multi_resolution_exponent_maps(&sig.samples, &args.windows, &cfg)?;
    if features.maps.iter().all(|m| m.estimated() == 0) {
        return Err(CliError::new(
            EXIT_DEGENERATE,
            "no window produced a Lyapunov estimate (signal too short or degenerate)",
        ));
    }
    let rps = recurrence::multi_scale_rps(&sig.samples, &args.scales, args.cap)?;

    std::fs::create_dir_all(&args.out)
        .map_err(|e| CliError::new(EXIT_IO, format!("{}: {e}", args.out.display())))?;
    let mut files = StagedFiles::new();
    let mut outputs = Vec::new();
    let target = |name: &str, outputs: &mut Vec<String>| -> PathBuf {
        outputs.push(name.to_string());
        args.out.join(name)
    };

    files.write_with(target(&format!("{stem}_lyap.csv"), &mut outputs), |w| {
        writeln!(w, "window,chunk_index,lambda")?;
        for map in &features.maps {
            for (i, v) in map.values.iter().enumerate() {
                writeln!(w, "{},{},{}", map.window, i, sig9(*v))?;
            }
        }
        Ok(())
    })?;
    for rp in &rps.plots {
        files.write_with(target(&format!("{stem}_rp_s{}.pgm", rp.scale), &mut outputs), |w| rp.write_pgm(w))?;
        if args.rp_csv {
            files.write_with(target(&format!("{stem}_rp_s{}.csv", rp.scale), &mut outputs), |w| rp.write_csv(w))?;
        }
    }

    let meta_name = format!("{stem}_meta.json");
    outputs.push(meta_name.clone());
    let meta = Meta {
        tool: "chaoswave",
        version: env!("CARGO_PKG_VERSION"),
        input: args.input.display().to_string(),
        stem: &stem,
        sample_rate: sig.sample_rate,
        input_samples,
        analyzed_samples: sig.len(),
        preprocessing: Preprocessing { trim_silence: trim_meta, band_limit: band_meta },
        lyapunov: LyapunovMeta {
            config: cfg,
            log_base: "e",
            windows: features.maps.iter().map(|m| m.window).collect(),
            maps: features
                .maps
                .iter()
                .map(|m| MapMeta { window: m.window, chunks: m.values.len(), substituted: m.substituted, too_short: m.too_short })
                .collect(),
        },
        recurrence: RecurrenceMeta {
            scales: rps.plots.iter().map(|p| p.scale).collect(),
            cap: args.cap,
            threshold_rule: "mean-with-diagonal-inclusive",
            plots: rps
                .plots
                .iter()
                .map(|p| PlotMeta {
                    scale: p.scale,
                    size: p.size,
                    threshold: round9(p.threshold),
                    recurrence_rate: round9(recurrence::recurrence_rate(p)),
                })
                .collect(),
        },
        warnings: Warnings {
            substituted_chunks: features.maps.iter().map(|m| m.substituted).sum(),
            empty_windows: features.maps.iter().filter(|m| m.too_short).count(),
        },
        outputs,
    };
    files.write_with(args.out.join(&meta_name), |w| {
        serde_json::to_writer_pretty(&mut *w, &meta)?;
        writeln!(w)
    })?;
    files.commit()?;
    Ok(())
}

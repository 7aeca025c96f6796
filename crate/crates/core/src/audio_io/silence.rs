use super::Signal;

pub const DEFAULT_SILENCE_DB: f64 = -40.0;
pub const DEFAULT_PAD_MS: f64 = 100.0;

const FRAME_SECS: f64 = 0.020;
const HOP_SECS: f64 = 0.010;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TrimReport {
    /// Kept span `[start, end)` in input samples.
    pub start: usize,
    pub end: usize,
    /// No frame carried any energy; the returned signal is empty.
    pub all_silent: bool,
}

/// Keeps the span between the first and last 20 ms frame (10 ms hop) whose
/// RMS exceeds the loudest frame by `threshold_db` (negative), widened by
/// `pad_ms` on each side.
///
/// The span runs from the centre of the first active frame to the centre of
/// the last, except that an active frame at either end of the signal keeps
/// that end.
pub fn trim_silence(sig: &Signal, threshold_db: f64, pad_ms: f64) -> (Signal, TrimReport) {
    let n = sig.len();
    let rate = f64::from(sig.sample_rate);
    let win = ((FRAME_SECS * rate).round() as usize).max(1);
    let hop = ((HOP_SECS * rate).round() as usize).max(1);

    let rms: Vec<f64> = (0..n)
        .step_by(hop)
        .map(|start| {
            let frame = &sig.samples[start..(start + win).min(n)];
            (frame.iter().map(|v| v * v).sum::<f64>() / frame.len() as f64).sqrt()
        })
        .collect();
    let peak = rms.iter().copied().fold(0.0, f64::max);
    if peak == 0.0 {
        let empty = Signal { samples: Vec::new(), sample_rate: sig.sample_rate };
        return (empty, TrimReport { start: 0, end: 0, all_silent: true });
    }

    let floor = peak * 10f64.powf(threshold_db / 20.0);
    let first = rms.iter().position(|&r| r > floor).unwrap_or(0);
    let last = rms.iter().rposition(|&r| r > floor).unwrap_or(rms.len() - 1);
    let centre = |frame: usize| (frame * hop + win / 2).min(n);

    let start = if first == 0 { 0 } else { centre(first) };
    let end = if last == rms.len() - 1 { n } else { centre(last) };
    let pad = (pad_ms.max(0.0) * rate / 1000.0).round() as usize;
    let start = start.saturating_sub(pad);
    let end = (end + pad).min(n);

    let out = Signal { samples: sig.samples[start..end].to_vec(), sample_rate: sig.sample_rate };
    (out, TrimReport { start, end, all_silent: false })
}

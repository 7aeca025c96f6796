//! Local Lyapunov rates from forward log-divergence curves.
//!
//! Each chunk goes through [`delay_embed`] → [`theiler_nearest_neighbors`] →
//! [`divergence_curve`] → [`lyapunov_slope`]. Stacking the per-chunk rates for
//! one window length gives an [`ExponentMap`]; one map per window length gives
//! [`MultiResolutionFeatures`].

use rayon::prelude::*;
use serde::Serialize;

use crate::embedding::{self, delay_embed, theiler_nearest_neighbors};
use crate::embedding::{DelayEmbedding, NeighborAssignment, NeighborBackend};
use crate::{Error, Result};

pub const DEFAULT_WINDOWS: [usize; 5] = [64, 128, 256, 512, 1024];
pub const DEFAULT_EPSILON: f64 = 1e-8;
pub const DEFAULT_MIN_HORIZON: usize = 8;

/// Value written into the map for chunks whose rate cannot be estimated.
pub const SUBSTITUTE_RATE: f64 = 0.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SlopeFit {
    /// `sum(k d_k) / sum(k^2)`, a line forced through the origin.
    #[default]
    Origin,
    /// Ordinary least squares with an intercept; diagnostic only.
    Affine,
}

impl std::str::FromStr for SlopeFit {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "origin" => Ok(SlopeFit::Origin),
            "affine" => Ok(SlopeFit::Affine),
            other => Err(format!("unknown slope fit `{other}` (expected origin or affine)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LyapunovConfig {
    pub embed_dim: usize,
    pub delay: usize,
    /// Floor added inside the logarithm.
    pub epsilon: f64,
    /// Lower bound on the divergence horizon. `0` keeps the horizon at
    /// `M - max_j nu(j) - 1` exactly.
    pub min_horizon: usize,
    pub fit: SlopeFit,
    #[serde(serialize_with = "serialize_backend")]
    pub backend: NeighborBackend,
}

fn serialize_backend<S: serde::Serializer>(b: &NeighborBackend, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(b.name())
}

impl Default for LyapunovConfig {
    fn default() -> Self {
        LyapunovConfig {
            embed_dim: embedding::DEFAULT_EMBED_DIM,
            delay: embedding::DEFAULT_DELAY,
            epsilon: DEFAULT_EPSILON,
            min_horizon: DEFAULT_MIN_HORIZON,
            fit: SlopeFit::Origin,
            backend: NeighborBackend::KdTree,
        }
    }
}

/// Mean log separation `d_k` of neighbouring trajectories after `k` steps.
#[derive(Debug, Clone, PartialEq)]
pub struct DivergenceCurve {
    d: Vec<f64>,
}

impl DivergenceCurve {
    pub fn new(d: Vec<f64>) -> Self {
        DivergenceCurve { d }
    }

    pub fn horizon(&self) -> usize {
        self.d.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.d
    }
}

/// Computes `d_k = mean_j ln(||y_{j+k} - y_{nu(j)+k}|| + epsilon)`.
///
/// The horizon starts at `K = M - max_j nu(j) - 1` (over rows with a
/// neighbour), is raised to `min(min_horizon, M - 1)`, and is cut at the
/// first step with no usable pair. A pair contributes to `d_k` only when
/// both forward indices stay inside the chunk; each `d_k` is the mean over
/// the pairs actually summed.
pub fn divergence_curve(
    emb: &DelayEmbedding,
    nn: &NeighborAssignment,
    epsilon: f64,
    min_horizon: usize,
) -> Result<DivergenceCurve> {
    if !(epsilon >= 0.0) {
        return Err(Error::InvalidParameter(format!("epsilon must be >= 0, got {epsilon}")));
    }
    let rows = emb.rows();
    let max_nu = nn.max_neighbor().ok_or(Error::AllNeighborsMasked {
        rows,
        theiler: nn.theiler(),
    })?;
    let printed = rows.saturating_sub(max_nu + 1);
    let horizon = printed.max(min_horizon.min(rows.saturating_sub(1)));

    let mut d = Vec::with_capacity(horizon);
    for k in 0..horizon {
        let mut sum = 0.0;
        let mut count = 0usize;
        for j in 0..rows - k {
            let Some(n) = nn.get(j) else { continue };
            if n + k >= rows {
                continue;
            }
            let dist = sq_norm_diff(emb.row(j + k), emb.row(n + k)).sqrt();
            sum += (dist + epsilon).ln();
            count += 1;
        }
        if count == 0 {
            break;
        }
        let dk = sum / count as f64;
        if !dk.is_finite() {
            return Err(Error::NonFiniteDivergence { step: k });
        }
        d.push(dk);
    }
    if d.len() <= 1 {
        return Err(Error::EmptyHorizon { horizon: d.len() });
    }
    Ok(DivergenceCurve { d })
}

fn sq_norm_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// `lambda = sum(k d_k) / sum(k^2)` over `k = 0..K-1`.
pub fn lyapunov_slope(curve: &DivergenceCurve) -> Result<f64> {
    let k_len = curve.horizon();
    if k_len < 2 {
        return Err(Error::EmptyHorizon { horizon: k_len });
    }
    let (num, den) = curve
        .values()
        .iter()
        .enumerate()
        .fold((0.0, 0.0), |(num, den), (k, &dk)| {
            let k = k as f64;
            (num + k * dk, den + k * k)
        });
    Ok(num / den)
}

/// Ordinary least-squares line `d_k ≈ slope * k + intercept`.
pub fn lyapunov_slope_affine(curve: &DivergenceCurve) -> Result<(f64, f64)> {
    let k_len = curve.horizon();
    if k_len < 2 {
        return Err(Error::EmptyHorizon { horizon: k_len });
    }
    let n = k_len as f64;
    let k_mean = (n - 1.0) / 2.0;
    let d_mean = curve.values().iter().sum::<f64>() / n;
    let (sxy, sxx) = curve
        .values()
        .iter()
        .enumerate()
        .fold((0.0, 0.0), |(sxy, sxx), (k, &dk)| {
            let dx = k as f64 - k_mean;
            (sxy + dx * (dk - d_mean), sxx + dx * dx)
        });
    let slope = sxy / sxx;
    Ok((slope, d_mean - slope * k_mean))
}

/// Lyapunov rate of a single chunk.
///
/// A chunk whose samples are all equal carries no divergence information and
/// is reported as [`Error::EmptyHorizon`].
pub fn chunk_rate(chunk: &[f64], cfg: &LyapunovConfig) -> Result<f64> {
    if chunk.windows(2).all(|p| p[0] == p[1]) {
        return Err(Error::EmptyHorizon { horizon: 0 });
    }
    let emb = delay_embed(chunk, cfg.embed_dim, cfg.delay)?;
    let nn = theiler_nearest_neighbors(&emb, cfg.backend)?;
    let curve = divergence_curve(&emb, &nn, cfg.epsilon, cfg.min_horizon)?;
    match cfg.fit {
        SlopeFit::Origin => lyapunov_slope(&curve),
        SlopeFit::Affine => lyapunov_slope_affine(&curve).map(|(slope, _)| slope),
    }
}

/// Per-chunk Lyapunov rates for one window length.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentMap {
    pub window: usize,
    pub values: Vec<f64>,
    /// Chunks that fell back to [`SUBSTITUTE_RATE`].
    pub substituted: usize,
    /// Set when the signal was shorter than one window and `values` is empty.
    pub too_short: bool,
    pub config: LyapunovConfig,
}

impl ExponentMap {
    /// Chunks with a genuine estimate.
    pub fn estimated(&self) -> usize {
        self.values.len() - self.substituted
    }
}

/// Splits `x` into `floor(T / window)` consecutive chunks (remainder dropped)
/// and estimates one rate per chunk.
pub fn exponent_map(x: &[f64], window: usize, cfg: &LyapunovConfig) -> Result<ExponentMap> {
    if window == 0 {
        return Err(Error::InvalidParameter("window must be positive".into()));
    }
    if x.len() < window {
        return Err(Error::SignalTooShort { len: x.len(), required: window });
    }
    let rates: Vec<Result<f64>> = x
        .par_chunks_exact(window)
        .map(|chunk| chunk_rate(chunk, cfg))
        .collect();

    let mut values = Vec::with_capacity(rates.len());
    let mut substituted = 0;
    for rate in rates {
        match rate {
            Ok(v) => values.push(v),
            Err(e) if e.is_degenerate_chunk() => {
                substituted += 1;
                values.push(SUBSTITUTE_RATE);
            }
            Err(e) => return Err(e),
        }
    }
    Ok(ExponentMap { window, values, substituted, too_short: false, config: *cfg })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiResolutionFeatures {
    /// One map per window, ascending.
    pub maps: Vec<ExponentMap>,
}

/// Exponent maps for every window in `windows`, sorted ascending with
/// duplicates removed. Windows longer than the signal yield an empty map
/// flagged `too_short`.
pub fn multi_resolution_exponent_maps(
    x: &[f64],
    windows: &[usize],
    cfg: &LyapunovConfig,
) -> Result<MultiResolutionFeatures> {
    let mut windows = windows.to_vec();
    windows.sort_unstable();
    windows.dedup();
    let maps = windows
        .par_iter()
        .map(|&w| match exponent_map(x, w, cfg) {
            Err(Error::SignalTooShort { .. }) => Ok(ExponentMap {
                window: w,
                values: Vec::new(),
                substituted: 0,
                too_short: true,
                config: *cfg,
            }),
            other => other,
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MultiResolutionFeatures { maps })
}

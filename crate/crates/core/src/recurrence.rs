//! Multi-scale binarized recurrence plots.
//!
//! For each stride `s` the signal is decimated (no anti-alias filter),
//! uniformly subsampled to at most `cap` points, and thresholded at the mean
//! of its full `L x L` absolute-difference matrix, diagonal included.

use std::io::Write;

use rayon::prelude::*;

use crate::{Error, Result};

pub const DEFAULT_SCALES: [usize; 5] = [1, 2, 4, 8, 16];
pub const DEFAULT_CAP: usize = 256;

/// Square binary matrix, row-major, one byte (0 or 1) per cell.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrencePlot {
    pub scale: usize,
    pub size: usize,
    pub threshold: f64,
    pub bits: Vec<u8>,
}

impl RecurrencePlot {
    pub fn get(&self, p: usize, q: usize) -> bool {
        self.bits[p * self.size + q] != 0
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        self.bits.chunks_exact(self.size)
    }

    /// Binary PGM (P5, maxval 255): recurrent cells white.
    pub fn write_pgm<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        write!(out, "P5\n{} {}\n255\n", self.size, self.size)?;
        let pixels: Vec<u8> = self.bits.iter().map(|&b| if b != 0 { 255 } else { 0 }).collect();
        out.write_all(&pixels)
    }

    /// One line per row of comma-separated `0`/`1`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for row in self.rows() {
            let line: Vec<&str> = row.iter().map(|&b| if b != 0 { "1" } else { "0" }).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MultiScaleRps {
    /// One plot per scale, ascending.
    pub plots: Vec<RecurrencePlot>,
}

/// `(x_0, x_s, x_2s, ...)`.
pub fn downsample_stride(x: &[f64], stride: usize) -> Result<Vec<f64>> {
    if x.is_empty() {
        return Err(Error::EmptyInput);
    }
    if stride == 0 {
        return Err(Error::InvalidParameter("stride must be positive".into()));
    }
    Ok(x.iter().step_by(stride).copied().collect())
}

/// Keeps `x` when `|x| <= cap`, otherwise the samples at `floor(p |x| / cap)`
/// for `p = 0..cap`.
pub fn uniform_subsample(x: &[f64], cap: usize) -> Result<Vec<f64>> {
    if cap == 0 {
        return Err(Error::InvalidParameter("length cap must be positive".into()));
    }
    let n = x.len();
    if n <= cap {
        return Ok(x.to_vec());
    }
    Ok((0..cap).map(|p| x[p * n / cap]).collect())
}

/// `D[p][q] = |x_p - x_q|`, row-major.
pub fn distance_matrix(x: &[f64]) -> Result<Vec<f64>> {
    if x.is_empty() {
        return Err(Error::EmptyInput);
    }
    let l = x.len();
    let mut d = vec![0.0; l * l];
    for p in 0..l {
        for q in p + 1..l {
            let v = (x[p] - x[q]).abs();
            d[p * l + q] = v;
            d[q * l + p] = v;
        }
    }
    Ok(d)
}

/// Mean of `|x_p - x_q|` over all `L^2` ordered pairs, via the sorted-order
/// identity `sum_{p,q} |x_p - x_q| = 2 sum_i (2i - L + 1) x_(i)`.
fn mean_abs_difference(x: &[f64]) -> f64 {
    let l = x.len();
    let mut sorted = x.to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let total: f64 = sorted
        .iter()
        .enumerate()
        .map(|(i, &v)| (2.0 * i as f64 - (l as f64 - 1.0)) * v)
        .sum();
    2.0 * total / (l * l) as f64
}

/// Binary recurrence plot of `x` with the inclusive test `D <= mean(D)`.
pub fn recurrence_plot(x: &[f64], scale: usize) -> Result<RecurrencePlot> {
    if x.is_empty() {
        return Err(Error::EmptyInput);
    }
    let l = x.len();
    let threshold = mean_abs_difference(x).max(0.0);
    let mut bits = vec![0u8; l * l];
    for p in 0..l {
        bits[p * l + p] = 1;
        for q in p + 1..l {
            let hit = ((x[p] - x[q]).abs() <= threshold) as u8;
            bits[p * l + q] = hit;
            bits[q * l + p] = hit;
        }
    }
    Ok(RecurrencePlot { scale, size: l, threshold, bits })
}

/// Fraction of recurrent cells.
pub fn recurrence_rate(rp: &RecurrencePlot) -> f64 {
    let ones = rp.bits.iter().filter(|&&b| b != 0).count();
    ones as f64 / rp.bits.len() as f64
}

/// Decimated, capped plot for one stride.
pub fn scale_plot(x: &[f64], scale: usize, cap: usize) -> Result<RecurrencePlot> {
    let decimated = downsample_stride(x, scale)?;
    let capped = uniform_subsample(&decimated, cap)?;
    recurrence_plot(&capped, scale)
}

/// One plot per scale (sorted ascending, duplicates removed).
pub fn multi_scale_rps(x: &[f64], scales: &[usize], cap: usize) -> Result<MultiScaleRps> {
    if x.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut scales = scales.to_vec();
    scales.sort_unstable();
    scales.dedup();
    let plots = scales
        .par_iter()
        .map(|&s| scale_plot(x, s, cap))
        .collect::<Result<Vec<_>>>()?;
    Ok(MultiScaleRps { plots })
}

/// Straight transcription of the algorithm: full distance matrix, mean by a
/// single row-major running sum, elementwise comparison. Kept as the oracle
/// the production kernel is checked against.
#[doc(hidden)]
pub mod reference {
    use super::RecurrencePlot;

    pub fn recurrence_plot(x: &[f64], scale: usize) -> RecurrencePlot {
        let l = x.len();
        let mut d = vec![vec![0.0; l]; l];
        for p in 0..l {
            for q in 0..l {
                d[p][q] = (x[p] - x[q]).abs();
            }
        }
        let mut sum = 0.0;
        for row in &d {
            for &v in row {
                sum += v;
            }
        }
        let threshold = sum / (l * l) as f64;
        let mut bits = Vec::with_capacity(l * l);
        for row in &d {
            for &v in row {
                bits.push(if v <= threshold { 1 } else { 0 });
            }
        }
        RecurrencePlot { scale, size: l, threshold, bits }
    }

    pub fn scale_plot(x: &[f64], scale: usize, cap: usize) -> RecurrencePlot {
        let mut xs = Vec::new();
        let mut i = 0;
        while i < x.len() {
            xs.push(x[i]);
            i += scale;
        }
        let sub = if xs.len() > cap {
            (0..cap).map(|p| xs[p * xs.len() / cap]).collect()
        } else {
            xs
        };
        recurrence_plot(&sub, scale)
    }
}

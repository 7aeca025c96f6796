//! Independent oracles shared by the integration suites.
#![allow(dead_code)]

use std::f64::consts::PI;

/// Small deterministic generator for test inputs (SplitMix64).
pub struct TestRng(u64);

impl TestRng {
    pub fn new(seed: u64) -> Self {
        TestRng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    pub fn signal(&mut self, n: usize) -> Vec<f64> {
        (0..n).map(|_| self.range(-1.0, 1.0)).collect()
    }
}

/// One-sided DFT of a Hann-windowed frame by direct summation.
pub fn direct_dft_power(frame: &[f64]) -> Vec<f64> {
    let n = frame.len();
    let windowed: Vec<f64> = frame
        .iter()
        .enumerate()
        .map(|(i, v)| v * (0.5 - 0.5 * (2.0 * PI * i as f64 / n as f64).cos()))
        .collect();
    (0..=n / 2)
        .map(|k| {
            let (mut re, mut im) = (0.0, 0.0);
            for (i, v) in windowed.iter().enumerate() {
                let ang = -2.0 * PI * ((k * i) % n) as f64 / n as f64;
                re += v * ang.cos();
                im += v * ang.sin();
            }
            re * re + im * im
        })
        .collect()
}

/// Log-spectral distance computed frame by frame with [`direct_dft_power`].
pub fn lsd_direct(reference: &[f64], estimate: &[f64], n_fft: usize, hop: usize, floor: f64) -> f64 {
    let frames = 1 + (reference.len() - n_fft) / hop;
    let mut total = 0.0;
    for t in 0..frames {
        let a = direct_dft_power(&reference[t * hop..t * hop + n_fft]);
        let b = direct_dft_power(&estimate[t * hop..t * hop + n_fft]);
        let ms: f64 = a
            .iter()
            .zip(&b)
            .map(|(x, y)| ((x + floor).log10() - (y + floor).log10()).powi(2))
            .sum::<f64>()
            / a.len() as f64;
        total += ms.sqrt();
    }
    total / frames as f64
}

/// Nearest allowed neighbour by exhaustive search, plus the relative gap to
/// the runner-up distance (infinite when there is no runner-up).
pub fn neighbor_with_gap(chunk: &[f64], m: usize, tau: usize, j: usize) -> Option<(usize, f64)> {
    let rows = chunk.len() - (m - 1) * tau;
    let th = m * tau;
    let dist = |a: usize, b: usize| -> f64 {
        (0..m).map(|c| (chunk[a + c * tau] - chunk[b + c * tau]).powi(2)).sum::<f64>().sqrt()
    };
    let mut cands: Vec<(f64, usize)> = (0..rows).filter(|&i| i.abs_diff(j) > th).map(|i| (dist(j, i), i)).collect();
    cands.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let best = *cands.first()?;
    let gap = cands.get(1).map_or(f64::INFINITY, |second| (second.0 - best.0) / second.0.max(1e-300));
    Some((best.1, gap))
}

pub fn rms(x: &[f64]) -> f64 {
    (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt()
}

pub fn mean(x: &[f64]) -> f64 {
    x.iter().sum::<f64>() / x.len() as f64
}

/// Smallest `|D_pq - eps| / eps` over all pairs, where eps is the mean of D.
pub fn threshold_margin(x: &[f64]) -> f64 {
    let l = x.len();
    let mut sum = 0.0;
    for p in 0..l {
        for q in 0..l {
            sum += (x[p] - x[q]).abs();
        }
    }
    let eps = sum / (l * l) as f64;
    let mut margin = f64::INFINITY;
    for p in 0..l {
        for q in 0..l {
            margin = margin.min(((x[p] - x[q]).abs() - eps).abs() / eps);
        }
    }
    margin
}

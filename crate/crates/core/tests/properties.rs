mod common;

use chaoswave::audio_io::{band_limit, load_wav, trim_silence, write_wav, BandLimitConfig, SampleFormat};
use chaoswave::embedding::{delay_embed, theiler_nearest_neighbors, NeighborBackend};
use chaoswave::lyapunov::{
    divergence_curve, exponent_map, lyapunov_slope, DivergenceCurve, LyapunovConfig,
};
use chaoswave::metrics::{lsd, si_sdr, si_snr, stft, LsdParams, WindowKind};
use chaoswave::recurrence::{self, recurrence_plot, recurrence_rate, scale_plot};
use chaoswave::synth::logistic_map;
use chaoswave::Signal;
use common::*;
use proptest::prelude::*;

/// Signals with either continuous values or a handful of repeated levels, so
/// ties show up in the neighbour search.
fn signal(len: std::ops::Range<usize>) -> impl Strategy<Value = Vec<f64>> {
    prop_oneof![
        prop::collection::vec(-1.0f64..1.0, len.clone()),
        prop::collection::vec((0i32..4).prop_map(|v| f64::from(v) / 4.0), len),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn neighbors_respect_theiler_and_backends_agree(
        x in signal(16..1024), m in 1usize..=6, tau in 1usize..=4,
    ) {
        prop_assume!(x.len() > (m - 1) * tau + 2 * m * tau + 1);
        let emb = delay_embed(&x, m, tau).unwrap();
        let brute = theiler_nearest_neighbors(&emb, NeighborBackend::BruteForce).unwrap();
        let tree = theiler_nearest_neighbors(&emb, NeighborBackend::KdTree).unwrap();
        prop_assert_eq!(&brute, &tree);
        for (j, nu) in brute.as_slice().iter().enumerate() {
            if let Some(n) = nu {
                prop_assert!(j.abs_diff(*n) > m * tau);
            }
        }
    }

    #[test]
    fn first_column_is_the_chunk_prefix(x in signal(8..300), m in 1usize..=5, tau in 1usize..=3) {
        prop_assume!(x.len() > (m - 1) * tau);
        let emb = delay_embed(&x, m, tau).unwrap();
        prop_assert_eq!(emb.rows(), x.len() - (m - 1) * tau);
        for j in 0..emb.rows() {
            prop_assert_eq!(emb.row(j)[0], x[j]);
            for c in 0..m {
                prop_assert_eq!(emb.row(j)[c], x[j + c * tau]);
            }
        }
    }

    #[test]
    fn slope_is_linear(d in prop::collection::vec(-20.0f64..5.0, 2..60), a in -3.0f64..3.0, b in -10.0f64..10.0) {
        let base = lyapunov_slope(&DivergenceCurve::new(d.clone())).unwrap();
        let mapped = lyapunov_slope(&DivergenceCurve::new(d.iter().map(|v| a * v + b).collect())).unwrap();
        let k = d.len();
        let (sk, sk2) = (0..k).fold((0.0, 0.0), |(s, s2), i| (s + i as f64, s2 + (i * i) as f64));
        let expected = a * base + b * sk / sk2;
        prop_assert!((mapped - expected).abs() <= 1e-9 * (1.0 + expected.abs()));
    }

    #[test]
    fn slope_recovers_exact_lines(c in -5.0f64..5.0, k in 2usize..200) {
        let d: Vec<f64> = (0..k).map(|i| c * i as f64).collect();
        let got = lyapunov_slope(&DivergenceCurve::new(d)).unwrap();
        prop_assert!((got - c).abs() <= 1e-12 * c.abs());
    }

    #[test]
    fn exponent_map_length_is_floor(t in 1usize..3000, w in 16usize..600) {
        let x: Vec<f64> = (0..t).map(|i| ((i * 7919) % 1009) as f64 / 1009.0).collect();
        let cfg = LyapunovConfig::default();
        match exponent_map(&x, w, &cfg) {
            Ok(map) => {
                prop_assert_eq!(map.values.len(), t / w);
                prop_assert!(map.values.iter().all(|v| v.is_finite()));
            }
            Err(_) => prop_assert!(t < w),
        }
    }

    #[test]
    fn rp_is_symmetric_with_unit_diagonal(x in signal(1..256)) {
        let rp = recurrence_plot(&x, 1).unwrap();
        for p in 0..rp.size {
            prop_assert!(rp.get(p, p));
            for q in 0..rp.size {
                prop_assert_eq!(rp.get(p, q), rp.get(q, p));
            }
        }
        let rate = recurrence_rate(&rp);
        prop_assert!(rate >= 1.0 / rp.size as f64 && rate <= 1.0);
    }

    #[test]
    fn rp_kernel_matches_reference(x in signal(1..1200), s in prop::sample::select(vec![1usize, 2, 4, 8, 16])) {
        let fast = scale_plot(&x, s, 256).unwrap();
        let slow = recurrence::reference::scale_plot(&x, s, 256);
        prop_assert_eq!(&fast.bits, &slow.bits);
        prop_assert_eq!(fast.size, slow.size);
        prop_assert!((fast.threshold - slow.threshold).abs() <= 1e-12 * slow.threshold.max(1e-300));
    }

    #[test]
    fn rp_size_hits_the_cap(s in 1usize..=16, cap in 1usize..64, extra in 0usize..500) {
        let n = s * cap + extra;
        let x: Vec<f64> = (0..n).map(|i| (i as f64 * 0.1).sin()).collect();
        prop_assert_eq!(scale_plot(&x, s, cap).unwrap().size, cap);
    }

    #[test]
    fn rp_positive_affine_invariance(x in prop::collection::vec(-1.0f64..1.0, 2..200), alpha in 0.01f64..50.0, beta in -5.0f64..5.0) {
        let y: Vec<f64> = x.iter().map(|v| alpha * v + beta).collect();
        prop_assume!(threshold_margin(&x) > 1e-9 && threshold_margin(&y) > 1e-9);
        prop_assert_eq!(recurrence_plot(&x, 1).unwrap().bits, recurrence_plot(&y, 1).unwrap().bits);
    }

    #[test]
    fn lsd_is_a_symmetric_nonnegative_distance(a in prop::collection::vec(-1.0f64..1.0, 256..700), scale in 0.1f64..10.0) {
        let b: Vec<f64> = a.iter().rev().map(|v| v * scale).collect();
        let (sa, sb) = (Signal::new(a, 8000).unwrap(), Signal::new(b, 8000).unwrap());
        let p = LsdParams { n_fft: 128, hop: 32, floor: 1e-10 };
        let ab = lsd(&sa, &sb, p).unwrap();
        prop_assert!(ab >= 0.0);
        prop_assert_eq!(ab, lsd(&sb, &sa, p).unwrap());
        prop_assert_eq!(lsd(&sa, &sa, p).unwrap(), 0.0);
    }

    #[test]
    fn si_sdr_ignores_estimate_scale(r in prop::collection::vec(-1.0f64..1.0, 8..400), noise_seed in any::<u64>(), alpha in 0.01f64..100.0) {
        let mut rng = TestRng::new(noise_seed);
        let e: Vec<f64> = r.iter().map(|v| v + 0.3 * rng.range(-1.0, 1.0)).collect();
        let scaled: Vec<f64> = e.iter().map(|v| alpha * v).collect();
        prop_assume!(r.iter().any(|&v| v != 0.0));
        prop_assert!((si_sdr(&r, &e).unwrap() - si_sdr(&r, &scaled).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn si_snr_ignores_offsets(r in prop::collection::vec(-1.0f64..1.0, 8..400), c1 in -3.0f64..3.0, c2 in -3.0f64..3.0) {
        let e: Vec<f64> = r.iter().enumerate().map(|(i, v)| 0.8 * v + 0.05 * (i as f64).sin()).collect();
        let r2: Vec<f64> = r.iter().map(|v| v + c1).collect();
        let e2: Vec<f64> = e.iter().map(|v| v + c2).collect();
        let base = si_snr(&r, &e).unwrap();
        prop_assert!((base - si_snr(&r2, &e).unwrap()).abs() < 1e-6);
        prop_assert!((base - si_snr(&r, &e2).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn stft_is_linear(x in prop::collection::vec(-1.0f64..1.0, 64..400), a in -10.0f64..10.0) {
        let s = stft(&x, 64, 16, WindowKind::Hann).unwrap();
        let ax: Vec<f64> = x.iter().map(|v| a * v).collect();
        let sa = stft(&ax, 64, 16, WindowKind::Hann).unwrap();
        let peak = s.frames.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max);
        for (f, g) in s.frames.iter().flatten().zip(sa.frames.iter().flatten()) {
            prop_assert!((g - f * a).norm() <= 1e-9 * (a.abs() * peak).max(1e-300));
        }
    }

    #[test]
    fn band_limit_keeps_length(n in 1usize..3000, low in prop::sample::select(vec![4000u32, 8000, 11025])) {
        let x: Vec<f64> = (0..n).map(|i| (i as f64 * 0.05).sin()).collect();
        let out = band_limit(&Signal::new(x, 16000).unwrap(), low, &BandLimitConfig::default()).unwrap();
        prop_assert_eq!(out.len(), n);
        prop_assert_eq!(out.sample_rate, 16000);
    }

    #[test]
    fn trim_stays_inside_the_signal(x in prop::collection::vec(-1.0f64..1.0, 0..5000), gain_db in -80.0f64..-1.0, pad in 0.0f64..300.0) {
        let sig = Signal::new(x, 8000).unwrap();
        let (out, report) = trim_silence(&sig, gain_db, pad);
        prop_assert!(report.start <= report.end && report.end <= sig.len());
        prop_assert_eq!(&out.samples[..], &sig.samples[report.start..report.end]);
    }

    #[test]
    fn logistic_orbit_stays_in_unit_interval(r in 0.001f64..=4.0, x0 in 0.001f64..0.999) {
        prop_assert!(logistic_map(r, x0, 500).unwrap().iter().all(|v| (0.0..=1.0).contains(v)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn wav_round_trips(x in prop::collection::vec(-1.0f64..1.0, 1..2000), rate in 1000u32..96000) {
        let dir = tempfile::tempdir().unwrap();
        let sig = Signal::new(x.iter().map(|&v| f64::from(v as f32)).collect(), rate).unwrap();

        let path = dir.path().join("f.wav");
        write_wav(&sig, &path, SampleFormat::Float32).unwrap();
        prop_assert_eq!(&load_wav(&path).unwrap(), &sig);

        let path = dir.path().join("i.wav");
        write_wav(&sig, &path, SampleFormat::Pcm16).unwrap();
        let back = load_wav(&path).unwrap();
        prop_assert_eq!(back.sample_rate, rate);
        for (a, b) in sig.samples.iter().zip(&back.samples) {
            prop_assert!((a - b).abs() <= 1.0 / 32768.0);
        }
    }

    #[test]
    fn scaling_shifts_the_curve_by_ln_alpha(seed in any::<u64>(), len in 128usize..400, alpha in 0.1f64..10.0) {
        let (m, tau, eps) = (3, 1, 1e-12);
        let x = TestRng::new(seed).signal(len);
        let rows = len - (m - 1) * tau;
        // screen for near-ties in the neighbour search
        prop_assume!((0..rows).all(|j| neighbor_with_gap(&x, m, tau, j).is_none_or(|(_, gap)| gap > 1e-6)));

        let y: Vec<f64> = x.iter().map(|v| alpha * v).collect();
        let (ex, ey) = (delay_embed(&x, m, tau).unwrap(), delay_embed(&y, m, tau).unwrap());
        let nx = theiler_nearest_neighbors(&ex, NeighborBackend::KdTree).unwrap();
        let ny = theiler_nearest_neighbors(&ey, NeighborBackend::KdTree).unwrap();
        prop_assert_eq!(&nx, &ny);

        let cx = divergence_curve(&ex, &nx, eps, 8).unwrap();
        let cy = divergence_curve(&ey, &ny, eps, 8).unwrap();
        prop_assert_eq!(cx.horizon(), cy.horizon());
        let k = cx.horizon();
        let (sk, sk2) = (0..k).fold((0.0, 0.0), |(s, s2), i| (s + i as f64, s2 + (i * i) as f64));
        let shift = lyapunov_slope(&cy).unwrap() - lyapunov_slope(&cx).unwrap();
        prop_assert!((shift - alpha.ln() * sk / sk2).abs() < 1e-3);
    }
}

#[test]
fn lsd_matches_direct_dft() {
    let mut rng = TestRng::new(11);
    for (n_fft, hop, len) in [(256, 64, 1500), (2048, 512, 4096)] {
        let a = rng.signal(len);
        let b: Vec<f64> = a.iter().map(|v| 0.6 * v + 0.2 * rng.range(-1.0, 1.0)).collect();
        let got = lsd(
            &Signal::new(a.clone(), 16000).unwrap(),
            &Signal::new(b.clone(), 16000).unwrap(),
            LsdParams { n_fft, hop, floor: 1e-10 },
        )
        .unwrap();
        let want = lsd_direct(&a, &b, n_fft, hop, 1e-10);
        assert!((got - want).abs() < 1e-6, "n_fft {n_fft}: {got} vs {want}");
    }
}

#[test]
fn band_limit_stopband_measured_by_stft() {
    let cfg = BandLimitConfig::default();
    for (rate, low) in [(16000u32, 8000u32), (48000, 16000)] {
        for f in [0.55, 0.65, 0.8, 0.95] {
            let freq = f * f64::from(rate) / 2.0;
            let x: Vec<f64> = (0..rate as usize)
                .map(|k| (2.0 * std::f64::consts::PI * freq * k as f64 / f64::from(rate) + 0.7).sin())
                .collect();
            let out = band_limit(&Signal::new(x.clone(), rate).unwrap(), low, &cfg).unwrap();
            let power = |v: &[f64]| -> f64 {
                stft(v, 1024, 256, WindowKind::Hann).unwrap().frames.iter().flatten().map(|c| c.norm_sqr()).sum()
            };
            let atten_db = 10.0 * (power(&out.samples) / power(&x)).log10();
            assert!(atten_db <= -40.0, "{freq} Hz at {rate}->{low}: {atten_db:.1} dB");
        }
    }
}

//! Shared builders and scan helpers for the integration suites.
#![allow(dead_code)]

use std::f64::consts::PI;

use floquet_pt_core::analysis::{
    assign_windows, gaps_from_samples, lambda_grid, Engine, EngineContext, Gap, GalerkinSampler,
    GapReport, MembershipSample, ScanTols,
};
use floquet_pt_core::coefficients::{build_spec, OperatorSpec, RawHarmonic, RawSeries};
use floquet_pt_core::linalg::SpectralStructure;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn entries(rows: &[&[f64]]) -> Vec<Vec<Complex64>> {
    rows.iter().map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect()
}

pub fn free_quartic() -> OperatorSpec {
    build_spec(4, 1, vec![], 1.0).unwrap()
}

pub fn cosine_quartic(a: f64) -> OperatorSpec {
    let raw = vec![RawSeries {
        order: 2,
        harmonics: vec![
            RawHarmonic { frequency: 1, entries: entries(&[&[a]]) },
            RawHarmonic { frequency: -1, entries: entries(&[&[a]]) },
        ],
    }];
    build_spec(4, 1, raw, 1.0).unwrap()
}

/// n=3, m=2, C = diag(0, 2), P2 = C + 0.5·2cos(2πx)·[[0,1],[1,0]], ε = 1.
pub fn coupled_cubic() -> OperatorSpec {
    let raw = vec![RawSeries {
        order: 2,
        harmonics: vec![
            RawHarmonic { frequency: 0, entries: entries(&[&[0.0, 0.0], &[0.0, 2.0]]) },
            RawHarmonic { frequency: 1, entries: entries(&[&[0.0, 0.5], &[0.5, 0.0]]) },
            RawHarmonic { frequency: -1, entries: entries(&[&[0.0, 0.5], &[0.5, 0.0]]) },
        ],
    }];
    build_spec(3, 2, raw, 1.0).unwrap()
}

/// n=3, m=3, C with a Jordan-2 block at 5 and a simple eigenvalue 1, ε = 0.
pub fn jordan_cubic() -> OperatorSpec {
    let raw = vec![RawSeries {
        order: 2,
        harmonics: vec![RawHarmonic {
            frequency: 0,
            entries: entries(&[&[5.0, 1.0, 0.0], &[0.0, 5.0, 0.0], &[0.0, 0.0, 1.0]]),
        }],
    }];
    build_spec(3, 3, raw, 0.0).unwrap()
}

/// Random PT specs: n ∈ {3,4}, m ∈ {1,2}, harmonics |l| ≤ 2, entries in [−2,2].
pub fn random_pt_suite(count: usize, seed: u64) -> Vec<OperatorSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = if rng.gen_bool(0.5) { 3u32 } else { 4 };
        let m = rng.gen_range(1usize..3);
        let mut series = Vec::new();
        for order in 2..=n {
            if order > 2 && rng.gen_bool(0.4) {
                continue;
            }
            let mut harmonics = Vec::new();
            for l in -2i64..=2 {
                if rng.gen_bool(0.45) {
                    continue;
                }
                let rows: Vec<Vec<Complex64>> = (0..m)
                    .map(|_| {
                        (0..m).map(|_| Complex64::new(rng.gen_range(-2.0..2.0), 0.0)).collect()
                    })
                    .collect();
                harmonics.push(RawHarmonic { frequency: l, entries: rows });
            }
            if !harmonics.is_empty() {
                series.push(RawSeries { order, harmonics });
            }
        }
        if series.is_empty() {
            continue;
        }
        out.push(build_spec(n, m, series, 1.0).unwrap());
    }
    out
}

fn merge_intervals(mut spans: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    spans.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (a, b) in spans {
        match merged.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => merged.push((a, b)),
        }
    }
    merged
}

/// Piecewise galerkin scan over a wide range: one sampler shared by all
/// pieces, per-piece steps kept above the band sampling resolution so
/// undersampled bands never masquerade as gaps, 5% piece overlap and interval
/// merging across piece boundaries.
pub fn piecewise_galerkin_gap_scan(
    spec: &OperatorSpec,
    structure: &SpectralStructure,
    lambda_lo: f64,
    lambda_hi: f64,
    base_step: f64,
    t_points: usize,
) -> GapReport {
    let tols = ScanTols { t_points, ..Default::default() };
    let sampler = GalerkinSampler::build(spec, lambda_hi * 1.1, &tols).unwrap();
    let ctx = EngineContext::Galerkin(sampler);
    let n = spec.n() as f64;
    let dt = 2.0 * PI / t_points as f64;
    let spacing = |hi: f64| n * hi.abs().max(1.0).powf((n - 1.0) / n) * dt;

    let mut intervals: Vec<(f64, f64)> = Vec::new();
    let mut cursor = lambda_lo;
    while cursor < lambda_hi {
        let piece_hi = (cursor.max(1.0) * 2.0).min(lambda_hi).max(cursor + 50.0).min(lambda_hi);
        let lo = cursor;
        let hi = (piece_hi * 1.05).min(lambda_hi);
        let step = base_step.max(1.3 * spacing(hi));
        let grid = lambda_grid(lo, hi, step);
        let samples: Vec<MembershipSample> = grid
            .iter()
            .map(|&l| ctx.membership(spec, l, step, &tols).unwrap())
            .collect();
        intervals
            .extend(gaps_from_samples(spec, &ctx, &samples, step, &tols).unwrap());
        cursor = piece_hi;
    }
    let mut gaps: Vec<Gap> = merge_intervals(intervals)
        .into_iter()
        .map(|interval| Gap { interval, nearest_window: None, normalized_offset: None })
        .collect();
    assign_windows(&mut gaps, structure, spec.n(), lambda_hi);
    let gap_measure: f64 = gaps.iter().map(|g| g.width()).sum();
    GapReport {
        scan_range: (lambda_lo, lambda_hi),
        grid_step: base_step,
        engine: Engine::Galerkin,
        coverage_fraction: (1.0 - gap_measure / (lambda_hi - lambda_lo)).clamp(0.0, 1.0),
        gaps,
        samples: Vec::new(),
    }
}

use std::f64::consts::PI;

use floquet_pt_core::bloch::{
    bloch_eigenvalues, conjugate_symmetry_check, locate_crossing, trace_branches, BlochSet,
    ComplexWindow, GalerkinConfig,
};
use floquet_pt_core::coefficients::{build_spec, OperatorSpec, RawHarmonic, RawSeries};
use floquet_pt_core::linalg::{spectral_structure, SpectralStructure};
use floquet_pt_core::unperturbed::{localization_radius, tracing_half_width, band_value, band_derivative, BandIndex};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn real_matrix_entries(rows: &[&[f64]]) -> Vec<Vec<Complex64>> {
    rows.iter().map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect()).collect()
}

fn cosine_quartic(a: f64) -> OperatorSpec {
    let raw = vec![RawSeries {
        order: 2,
        harmonics: vec![
            RawHarmonic { frequency: 1, entries: real_matrix_entries(&[&[a]]) },
            RawHarmonic { frequency: -1, entries: real_matrix_entries(&[&[a]]) },
        ],
    }];
    build_spec(4, 1, raw, 1.0).unwrap()
}

/// n=3, m=2, C = diag(0,2), P2 = C + 0.5·2cos(2πx)·[[0,1],[1,0]]
fn coupled_cubic(eps: f64) -> (OperatorSpec, SpectralStructure) {
    let raw = vec![RawSeries {
        order: 2,
        harmonics: vec![
            RawHarmonic { frequency: 0, entries: real_matrix_entries(&[&[0.0, 0.0], &[0.0, 2.0]]) },
            RawHarmonic { frequency: 1, entries: real_matrix_entries(&[&[0.0, 0.5], &[0.5, 0.0]]) },
            RawHarmonic { frequency: -1, entries: real_matrix_entries(&[&[0.0, 0.5], &[0.5, 0.0]]) },
        ],
    }];
    let spec = build_spec(3, 2, raw, eps).unwrap();
    let st = spectral_structure(&spec.mean_matrix(), 1e-8).unwrap();
    (spec, st)
}

#[test]
fn constant_coefficient_exactness_diagonalizable() {
    // eps = 0 with C = diag(1, 4): eigenvalues are exactly the band values
    let raw = vec![RawSeries {
        order: 2,
        harmonics: vec![RawHarmonic {
            frequency: 0,
            entries: real_matrix_entries(&[&[1.0, 0.0], &[0.0, 4.0]]),
        }],
    }];
    let spec = build_spec(3, 2, raw, 0.0).unwrap();
    let st = spectral_structure(&spec.mean_matrix(), 1e-8).unwrap();
    let config = GalerkinConfig { truncation: 10, ..Default::default() };
    for &t in &[0.4, 1.7, 5.2] {
        for &k in &[-3i64, 0, 2] {
            for j in 0..st.entries.len() {
                let target = band_value(3, st.entries[j].mu, k, t);
                let window = ComplexWindow::around(target.re, 1.0, 1.0);
                let set = bloch_eigenvalues(&spec, t, &config, &window).unwrap();
                let hit = set
                    .eigenvalues
                    .iter()
                    .find(|(z, _)| (z - target).norm() <= 1e-10 * (1.0 + target.norm()));
                assert!(hit.is_some(), "missing band k={k} j={j} at t={t}");
                assert_eq!(hit.unwrap().1, st.entries[j].algebraic);
            }
        }
    }
}

#[test]
fn constant_coefficient_exactness_jordan() {
    // C has a Jordan block at 5 and a simple eigenvalue 1
    let raw = vec![RawSeries {
        order: 2,
        harmonics: vec![RawHarmonic {
            frequency: 0,
            entries: real_matrix_entries(&[
                &[5.0, 1.0, 0.0],
                &[0.0, 5.0, 0.0],
                &[0.0, 0.0, 1.0],
            ]),
        }],
    }];
    let spec = build_spec(3, 3, raw, 0.0).unwrap();
    let st = spectral_structure(&spec.mean_matrix(), 1e-8).unwrap();
    assert_eq!(st.r, 2);
    let config =
        GalerkinConfig { truncation: 10, cluster_tol: 1e-4, ..Default::default() };
    for &t in &[0.9, 2.3] {
        for &k in &[0i64, 1, 4] {
            for j in 0..st.entries.len() {
                let target = band_value(3, st.entries[j].mu, k, t);
                let window = ComplexWindow::around(target.re, 1.0, 1.0);
                let set = bloch_eigenvalues(&spec, t, &config, &window).unwrap();
                let hit = set
                    .eigenvalues
                    .iter()
                    .find(|(z, _)| (z - target).norm() <= 1e-8 * (1.0 + target.norm()));
                assert!(hit.is_some(), "missing band k={k} j={j} at t={t}: {set:?}");
                assert_eq!(hit.unwrap().1, st.entries[j].algebraic, "k={k} j={j}");
            }
        }
    }
}

#[test]
fn truncation_certificate_converges() {
    let spec = cosine_quartic(1.0);
    let t = 1.1;
    let window = ComplexWindow::symmetric(0.0, 2000.0, 10.0);
    let coarse = GalerkinConfig { truncation: 16, ..Default::default() };
    let set16 = bloch_eigenvalues(&spec, t, &coarse, &window).unwrap();
    let finer = GalerkinConfig { truncation: 24, ..Default::default() };
    let set24 = bloch_eigenvalues(&spec, t, &finer, &window).unwrap();
    assert_eq!(set16.eigenvalues.len(), set24.eigenvalues.len());
    // certificate scale: eig_tol relative to the window size
    let scale = 1e-8 * (1.0 + window.max_abs());
    for (a, b) in set16.eigenvalues.iter().zip(&set24.eigenvalues) {
        assert!((a.0 - b.0).norm() < scale, "{:?} vs {:?}", a.0, b.0);
        assert_eq!(a.1, b.1);
    }
}

#[test]
fn conjugate_symmetry_on_random_pt_specs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7eed);
    for case in 0..6 {
        let n = if rng.gen_bool(0.5) { 3 } else { 4 };
        let m = rng.gen_range(1..3);
        let mut series = Vec::new();
        for order in 2..=n {
            if rng.gen_bool(0.4) && order > 2 {
                continue;
            }
            let mut harmonics = Vec::new();
            for l in -2i64..=2 {
                if rng.gen_bool(0.5) {
                    continue;
                }
                let entries: Vec<Vec<Complex64>> = (0..m)
                    .map(|_| {
                        (0..m)
                            .map(|_| Complex64::new(rng.gen_range(-2.0..2.0), 0.0))
                            .collect()
                    })
                    .collect();
                harmonics.push(RawHarmonic { frequency: l, entries });
            }
            if !harmonics.is_empty() {
                series.push(RawSeries { order, harmonics });
            }
        }
        let spec = build_spec(n, m, series, 1.0).unwrap();
        let config = GalerkinConfig { truncation: 12, ..Default::default() };
        let t = rng.gen_range(0.0..2.0 * PI);
        let window = ComplexWindow::symmetric(-60.0, 2500.0, 80.0);
        let set = bloch_eigenvalues(&spec, t, &config, &window).unwrap();
        let report = conjugate_symmetry_check(&set, 1e-6);
        assert!(
            report.symmetric,
            "case {case}: defect {} at t={t}, n={n}, m={m}",
            report.max_defect
        );
    }
}

#[test]
fn branch_trace_real_monotone_and_continuous() {
    let spec = cosine_quartic(1.0);
    let st = spectral_structure(&spec.mean_matrix(), 1e-8).unwrap();
    let band = BandIndex { k: 3, j: 0 };
    let config = GalerkinConfig { truncation: 10, ..Default::default() };
    let (t0, h) = (1.0, 0.12);
    let curve = trace_branches(&spec, &st, band, t0, h, 65, &config, 400.0).unwrap();
    assert_eq!(curve.branch_count(), 1);
    let vals = curve.branch(0);
    // real, strictly monotone, with steps bounded by the derivative scale
    let mut max_d = 0.0f64;
    for (i, t) in curve.t_grid.iter().enumerate() {
        assert!(vals[i].im.abs() < 1e-8 * (1.0 + vals[i].norm()));
        let d = band_derivative(4, Complex64::new(0.0, 0.0), band.k, *t).norm();
        max_d = max_d.max(d);
    }
    for i in 1..vals.len() {
        assert!(vals[i].re > vals[i - 1].re, "not monotone at {i}");
        let dt = curve.t_grid[i] - curve.t_grid[i - 1];
        let step = (vals[i] - vals[i - 1]).norm();
        assert!(step <= (max_d * 1.2 + 50.0) * dt, "jump {step} over dt {dt}");
    }
}

#[test]
fn odd_multiplicity_branch_crosses_target_level() {
    let (spec, st) = coupled_cubic(1.0);
    let k = 10i64;
    let j = 0usize;
    let eps_k = localization_radius(3, st.r.max(1), 1.0, k, spec.q_k(k)).unwrap();
    let h_k = tracing_half_width(3, k, eps_k).unwrap();
    let t0 = 2.0;
    let lambda = band_value(3, st.entries[j].mu, k, t0).re;
    let config = GalerkinConfig { truncation: 16, ..Default::default() };
    let band = BandIndex { k, j };
    let curve =
        trace_branches(&spec, &st, band, t0, h_k, 33, &config, eps_k).unwrap();
    let crossing = locate_crossing(&spec, &st, band, &config, eps_k, &curve, lambda)
        .unwrap()
        .expect("crossing must exist for odd multiplicity");
    assert!(crossing.value.im.abs() <= 1e-6, "imag part {}", crossing.value.im);
    assert!((crossing.value.re - lambda).abs() <= 1e-6 * (1.0 + lambda.abs()));
}

#[test]
fn symmetry_check_multiplicity_mismatch_detected() {
    let set = BlochSet {
        t: 0.0,
        eigenvalues: vec![
            (Complex64::new(1.0, 1.0), 2),
            (Complex64::new(1.0, -1.0), 1),
        ],
        window: None,
    };
    let report = conjugate_symmetry_check(&set, 1e-6);
    assert!(!report.symmetric);
}

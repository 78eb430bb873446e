//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (run with `--nocapture` to see the lines for passing tests too).

mod common;

use std::f64::consts::PI;
use std::time::Instant;

use common::*;
use floquet_pt_core::analysis::{
    delta_polynomial_structure, localization_decay, scan_real_axis, verify_gap_containment,
    verify_real_coverage, Engine, ScanTols,
};
use floquet_pt_core::bloch::{
    bloch_eigenvalues, conjugate_symmetry_check, galerkin_eigenvalues, locate_crossing,
    trace_branches, ComplexWindow, GalerkinConfig,
};
use floquet_pt_core::calibration::Calibration;
use floquet_pt_core::linalg::spectral_structure;
use floquet_pt_core::monodromy::{
    fundamental_matrix, refine_bloch_eigenvalue, MonodromyOptions,
};
use floquet_pt_core::unperturbed::{
    check_triple_sum_condition, localization_radius, tracing_half_width, band_value, BandIndex,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(criterion: &str, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("[acceptance] criterion {criterion} ({name}): {verdict} - {detail}");
    assert!(pass, "criterion {criterion} ({name}): {detail}");
}

#[test]
fn criterion_01_free_operator_exactness() {
    let started = Instant::now();
    let spec = free_quartic();
    let st = spectral_structure(&spec.mean_matrix(), 1e-8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    // t away from the band zeros of k = 0 and k = -1, where a relative
    // comparison against a vanishing target is vacuous in f64
    let ts: Vec<f64> = (0..16).map(|_| rng.gen_range(0.3..2.0 * PI - 0.3)).collect();
    let opts = MonodromyOptions { lambda_cap: 1e8, ..Default::default() };

    let mut worst_galerkin = 0.0f64;
    let mut worst_monodromy = 0.0f64;
    for &t in &ts {
        let galerkin = galerkin_eigenvalues(&spec, t, 14).unwrap();
        for k in -10i64..=10 {
            let target = (2.0 * PI * k as f64 + t).powi(4);
            let best = galerkin
                .iter()
                .map(|z| (z - Complex64::new(target, 0.0)).norm())
                .fold(f64::INFINITY, f64::min);
            worst_galerkin = worst_galerkin.max(best / target.abs());

            let seed = Complex64::new(target * (1.0 + 1e-6) + 1e-6, 0.0);
            let refined = refine_bloch_eigenvalue(&spec, t, seed, &opts).unwrap();
            worst_monodromy =
                worst_monodromy.max((refined - Complex64::new(target, 0.0)).norm() / target.abs());
        }
    }

    let tols = ScanTols { t_points: 6000, ..Default::default() };
    let clean = scan_real_axis(&spec, &st, 0.0, 500.0, 0.5, Engine::Monodromy, &tols).unwrap();
    let clean_galerkin =
        scan_real_axis(&spec, &st, 0.0, 500.0, 0.5, Engine::Galerkin, &tols).unwrap();
    let below = scan_real_axis(&spec, &st, -100.0, -1.0, 0.5, Engine::Monodromy, &tols).unwrap();
    let elapsed = started.elapsed().as_secs_f64();

    let full_range_gap = below.gaps.len() == 1
        && (below.gaps[0].interval.0 + 100.0).abs() < 1e-9
        && (below.gaps[0].interval.1 + 1.0).abs() < 1e-9;
    let pass = worst_galerkin <= 1e-8
        && worst_monodromy <= 1e-8
        && clean.gaps.is_empty()
        && clean_galerkin.gaps.is_empty()
        && full_range_gap
        && elapsed < 30.0;
    report(
        "1",
        "free-operator exactness",
        pass,
        &format!(
            "rel err galerkin {worst_galerkin:.2e}, monodromy {worst_monodromy:.2e}; gaps [0,500]: {}/{} (monodromy/galerkin), [-100,-1]: full-range {}; {:.1} s",
            clean.gaps.len(),
            clean_galerkin.gaps.len(),
            full_range_gap,
            elapsed
        ),
    );
}

#[test]
fn criterion_02_constant_coefficient_exactness() {
    let started = Instant::now();
    let spec = jordan_cubic();
    let st = spectral_structure(&spec.mean_matrix(), 1e-8).unwrap();
    let r_ok = st.r == 2;
    let config = GalerkinConfig { truncation: 12, cluster_tol: 1e-4, ..Default::default() };
    let mut worst = 0.0f64;
    let mut mult_ok = true;
    for &t in &[0.9, 2.0, 5.5] {
        for &k in &[0i64, -1, 1, 3, 7] {
            for e in &st.entries {
                let target = band_value(3, e.mu, k, t);
                let window = ComplexWindow::around(target.re, 1.0, 1.0);
                let set = bloch_eigenvalues(&spec, t, &config, &window).unwrap();
                let hit = set
                    .eigenvalues
                    .iter()
                    .min_by(|a, b| {
                        (a.0 - target)
                            .norm()
                            .partial_cmp(&(b.0 - target).norm())
                            .unwrap()
                    })
                    .copied();
                match hit {
                    Some((z, m)) => {
                        worst = worst.max((z - target).norm() / (1.0 + target.norm()));
                        if m != e.algebraic {
                            mult_ok = false;
                        }
                    }
                    None => mult_ok = false,
                }
            }
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    let pass = r_ok && mult_ok && worst <= 1e-8 && elapsed < 30.0;
    report(
        "2",
        "constant-coefficient exactness",
        pass,
        &format!(
            "r={} multiplicities ok: {mult_ok}, worst rel err {worst:.2e}, {:.1} s",
            st.r, elapsed
        ),
    );
}

#[test]
fn criterion_03_theorem1_symmetry() {
    let specs = random_pt_suite(20, 777);
    let mut rng = ChaCha8Rng::seed_from_u64(778);
    let config = GalerkinConfig { truncation: 12, ..Default::default() };
    let mut worst = 0.0f64;
    let mut all = true;
    for spec in &specs {
        for _ in 0..2 {
            let t = rng.gen_range(0.0..2.0 * PI);
            let window = ComplexWindow::symmetric(-60.0, 2500.0, 80.0);
            let set = bloch_eigenvalues(spec, t, &config, &window).unwrap();
            let rep = conjugate_symmetry_check(&set, 1e-6);
            worst = worst.max(rep.max_defect);
            all &= rep.symmetric;
        }
    }
    report(
        "3",
        "conjugate-eigenvalue symmetry",
        all,
        &format!("20 random PT specs, 2 windows each, max defect {worst:.2e}"),
    );
}

#[test]
fn criterion_04_liouville_and_polynomial_structure() {
    let specs = random_pt_suite(20, 777);
    let mut rng = ChaCha8Rng::seed_from_u64(779);
    let opts = MonodromyOptions { ode_tol: 1e-12, ..Default::default() };
    let mut worst_det = 0.0f64;
    for spec in &specs {
        for _ in 0..50 {
            let lambda =
                Complex64::new(rng.gen_range(-2e3..2e3), rng.gen_range(-20.0..20.0));
            let rec = fundamental_matrix(spec, lambda, &opts).unwrap();
            worst_det = worst_det.max((rec.det - Complex64::new(1.0, 0.0)).norm());
        }
    }
    // polynomial structure applies to even nm (leading coefficient is −1 for
    // odd nm, reported as a diagnostic)
    let mut worst_poly = 0.0f64;
    let mut even_specs = 0;
    for spec in &specs {
        if (spec.n() as usize * spec.m()) % 2 == 1 {
            continue;
        }
        even_specs += 1;
        for _ in 0..10 {
            // |Δ| on the circle grows like e^{2ω}, and the recovered
            // coefficients inherit that scale times the sample error; modest
            // |λ| keeps the identity checkable at 1e-6
            let lambda = Complex64::new(rng.gen_range(-100.0..100.0), 0.0);
            let ps = delta_polynomial_structure(spec, lambda, &opts).unwrap();
            worst_poly = worst_poly.max(ps.defect);
        }
    }
    let pass = worst_det <= 1e-8 && worst_poly <= 1e-6 && even_specs > 0;
    report(
        "4",
        "Liouville identity and Delta polynomial structure",
        pass,
        &format!(
            "max |det-1| = {worst_det:.2e} (50 lambda x 20 specs); max coefficient defect {worst_poly:.2e} over {even_specs} even-degree specs"
        ),
    );
}

#[test]
fn criterion_05_oracle_equivalence() {
    let started = Instant::now();
    let specs = random_pt_suite(10, 777);
    let mut rng = ChaCha8Rng::seed_from_u64(780);
    // the refinement's root error tracks the accumulated local error times the
    // root spacing; 1e-12 keeps it well under the 1e-6 agreement budget
    let opts = MonodromyOptions { ode_tol: 1e-12, ..Default::default() };
    let mut worst = 0.0f64;
    let mut compared = 0usize;
    for spec in &specs {
        let t = rng.gen_range(0.0..2.0 * PI);
        let config = GalerkinConfig { truncation: 48, ..Default::default() };
        let matrix = floquet_pt_core::bloch::assemble_galerkin(spec, t, &config).unwrap();
        let vals = galerkin_eigenvalues(spec, t, 48).unwrap();
        for z in vals {
            if z.norm() > 5e4 || z.im.abs() > 1e3 {
                continue;
            }
            // raw QR values carry eps·(2πK)^n absolute noise; polish on the
            // assembled matrix recovers the truncated operator's eigenvalue
            let galerkin_value = floquet_pt_core::linalg::rayleigh_refine(&matrix, z, 2);
            let refined = refine_bloch_eigenvalue(spec, t, galerkin_value, &opts).unwrap();
            worst = worst.max((refined - galerkin_value).norm());
            compared += 1;
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    let pass = worst <= 1e-6 && compared >= 50 && elapsed < 300.0;
    report(
        "5",
        "oracle equivalence",
        pass,
        &format!(
            "{compared} eigenvalues over 10 specs, max |galerkin - refined| = {worst:.2e}, {:.0} s",
            elapsed
        ),
    );
}

#[test]
fn criterion_06_localization_decay() {
    let k_list: Vec<i64> = vec![8, 12, 16, 24, 32];
    let tols = ScanTols::default();
    let calib = Calibration::default();

    // odd case: n=3, m=2, diagonalizable C, r=1
    let spec = coupled_cubic();
    let st = spectral_structure(&spec.mean_matrix(), 1e-8).unwrap();
    assert_eq!(st.r, 1);
    let odd = localization_decay(&spec, &st, 0, &k_list, 1.0, &tols, &calib).unwrap();
    let odd_slope = odd.fitted_slope.unwrap_or(f64::NEG_INFINITY);

    // even case: n=4 with q_k = 0 for k >= 1
    let spec4 = cosine_quartic(1.0);
    let st4 = spectral_structure(&spec4.mean_matrix(), 1e-8).unwrap();
    assert!(k_list.iter().all(|&k| spec4.q_k(k) == 0.0));
    let even = localization_decay(&spec4, &st4, 0, &k_list, 1.0, &tols, &calib).unwrap();
    let even_slope = even.fitted_slope.unwrap_or(f64::NEG_INFINITY);

    let pass = odd_slope <= 0.25 && even_slope <= 1.25;
    report(
        "6",
        "localization decay",
        pass,
        &format!("odd n=3 slope {odd_slope:.3} (<= 0.25); even n=4 slope {even_slope:.3} (<= 1.25)"),
    );
}

#[test]
fn criterion_07_real_line_coverage() {
    let spec = coupled_cubic();
    let tols = ScanTols::default();
    // pass 1 locates H_effective from a small candidate
    let first = verify_real_coverage(&spec, 0.5, 3000.0, 0.5, Engine::Monodromy, &tols).unwrap();
    // pass 2 re-scans ±[H_effective, 3000]
    let second = verify_real_coverage(
        &spec,
        first.h_effective,
        3000.0,
        0.5,
        Engine::Monodromy,
        &tols,
    )
    .unwrap();
    let pass = second.covered && second.worst_defect <= 1e-6 && first.h_effective < 100.0;
    report(
        "7",
        "real-line coverage",
        pass,
        &format!(
            "H_effective = {}, covered = {}, worst defect {:.2e}",
            first.h_effective, second.covered, second.worst_defect
        ),
    );
}

fn criterion8_reports() -> Vec<(f64, floquet_pt_core::analysis::GapReport)> {
    let hi = (12.0 * PI).powi(4);
    [0.5, 1.0]
        .into_iter()
        .map(|a| {
            let spec = cosine_quartic(a);
            let st = spectral_structure(&spec.mean_matrix(), 1e-8).unwrap();
            (a, piecewise_galerkin_gap_scan(&spec, &st, 50.0, hi, 0.5, 4096))
        })
        .collect()
}

#[test]
fn criterion_08_gap_containment() {
    let started = Instant::now();
    let mut all_contained = true;
    let mut detail = String::new();
    for (a, rep) in criterion8_reports() {
        let spec = cosine_quartic(a);
        let st = spectral_structure(&spec.mean_matrix(), 1e-8).unwrap();
        let cont = verify_gap_containment(&rep, &st, spec.n(), 1.0);
        all_contained &= cont.all_contained && !rep.gaps.is_empty();
        for g in &rep.gaps {
            detail.push_str(&format!(
                "a={a}: gap [{:.3}, {:.3}] -> l={} offset/l^2 = {:.4}; ",
                g.interval.0,
                g.interval.1,
                g.nearest_window.as_ref().map(|w| w.index).unwrap_or(-1),
                g.normalized_offset.unwrap_or(f64::NAN)
            ));
        }
    }
    let elapsed = started.elapsed().as_secs_f64();
    let pass = all_contained && elapsed < 600.0;
    report(
        "8a",
        "gap containment",
        pass,
        &format!("{detail}{:.0} s", elapsed),
    );
}

// The decay clause needs gaps at two or more distinct l. For these
// single-harmonic coefficients only the l=1 gap opens (width 2aπ²; the l=3
// gap is ~3e-4 wide and sits below every engine's resolution at the stated
// tolerances), so the offset sequence is a single point and the OLS slope is
// undefined. Kept faithful to the stated criterion; fails with a diagnostic.
#[test]
fn criterion_08_offset_decay() {
    let mut offsets: Vec<(i64, f64)> = Vec::new();
    for (_a, rep) in criterion8_reports() {
        for g in &rep.gaps {
            if let (Some(w), Some(off)) = (&g.nearest_window, g.normalized_offset) {
                offsets.push((w.index, off));
            }
        }
    }
    let mut distinct: Vec<i64> = offsets.iter().map(|&(l, _)| l).collect();
    distinct.sort_unstable();
    distinct.dedup();
    let slope = if distinct.len() >= 2 {
        let xs: Vec<f64> = offsets.iter().map(|&(l, _)| (l as f64).ln()).collect();
        let ys: Vec<f64> = offsets.iter().map(|&(_, o)| o.max(1e-300).ln()).collect();
        Some(floquet_pt_core::analysis::ols_slope(&xs, &ys))
    } else {
        None
    };
    let pass = matches!(slope, Some(s) if s < 0.0);
    report(
        "8b",
        "normalized-offset decay",
        pass,
        &format!(
            "detected gap families at l = {distinct:?}; offsets {offsets:?}; slope {slope:?} (need >= 2 distinct l and a negative slope; only the l=1 gap opens for these single-harmonic instances)"
        ),
    );
}

#[test]
fn criterion_09_triple_sum_condition() {
    // independent exhaustive oracle over all assignments
    let oracle = |mus: &[f64]| -> (bool, Option<([usize; 3], [usize; 3])>) {
        let s = mus.len();
        for a in 0..s {
            for b in a + 1..s {
                for c in b + 1..s {
                    let mut equalizer = None;
                    'assign: for i1 in 0..s {
                        for i2 in 0..s {
                            for i3 in 0..s {
                                let x = mus[a] + mus[i1];
                                let y = mus[b] + mus[i2];
                                let z = mus[c] + mus[i3];
                                let d = x.max(y).max(z) - x.min(y).min(z);
                                if d == 0.0 {
                                    equalizer = Some([i1, i2, i3]);
                                    break 'assign;
                                }
                            }
                        }
                    }
                    match equalizer {
                        None => return (true, None),
                        Some(e) => {
                            return (false, Some(([a, b, c], e)));
                        }
                    }
                }
            }
        }
        (false, None)
    };

    let structure_of = |mus: &[f64]| {
        let mut m = floquet_pt_core::linalg::RMat::zeros(mus.len(), mus.len());
        for (i, &v) in mus.iter().enumerate() {
            m[(i, i)] = v;
        }
        spectral_structure(&m, 1e-8).unwrap()
    };

    let good = check_triple_sum_condition(&structure_of(&[0.0, 1.0, 5.0]));
    let (oracle_good, _) = oracle(&[0.0, 1.0, 5.0]);
    let bad = check_triple_sum_condition(&structure_of(&[0.0, 1.0, 2.0]));
    let (oracle_bad, oracle_violation) = oracle(&[0.0, 1.0, 2.0]);

    let violation_ok = match (&bad.violation, oracle_violation) {
        (Some((triple, assign, sum)), Some((otriple, _))) => {
            *triple == otriple && *assign == [2, 1, 0] && (*sum - 2.0).abs() < 1e-12
        }
        _ => false,
    };
    let pass = good.holds && oracle_good && !bad.holds && !oracle_bad && violation_ok;
    report(
        "9",
        "triple-sum separation checker",
        pass,
        &format!(
            "{{0,1,5}} holds={} (oracle {}), {{0,1,2}} holds={} with assignment {:?}",
            good.holds,
            oracle_good,
            bad.holds,
            bad.violation.map(|v| v.1)
        ),
    );
}

#[test]
fn criterion_10_branch_crossing() {
    let spec = coupled_cubic();
    let st = spectral_structure(&spec.mean_matrix(), 1e-8).unwrap();
    let k = 10i64;
    let j = 0usize;
    assert_eq!(st.entries[j].algebraic % 2, 1);
    let eps_k = localization_radius(3, st.r.max(1), 1.0, k, spec.q_k(k)).unwrap();
    let h_k = tracing_half_width(3, k, eps_k).unwrap();
    let config = GalerkinConfig { truncation: 16, ..Default::default() };
    let band = BandIndex { k, j };
    let mut rng = ChaCha8Rng::seed_from_u64(4242);

    let mut worst_im = 0.0f64;
    let mut all_found = true;
    for _ in 0..5 {
        let t0 = rng.gen_range(-1.0 + h_k..2.0 * PI - 1.0 - h_k);
        let lambda = band_value(3, st.entries[j].mu, k, t0).re;
        let curve = trace_branches(&spec, &st, band, t0, h_k, 33, &config, eps_k).unwrap();
        match locate_crossing(&spec, &st, band, &config, eps_k, &curve, lambda).unwrap() {
            Some(crossing) => worst_im = worst_im.max(crossing.value.im.abs()),
            None => all_found = false,
        }
    }
    let pass = all_found && worst_im <= 1e-6;
    report(
        "10",
        "branch crossing",
        pass,
        &format!("5 random t0 at k=10: crossings found = {all_found}, max |Im| = {worst_im:.2e}"),
    );
}

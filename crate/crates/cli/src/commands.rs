//! Command implementations. Each command loads the validated spec, runs its
//! computation (scans through the worker pool), writes CSV/JSON artifacts
//! into the output directory and prints a short summary.

use std::f64::consts::PI;
use std::path::Path;

use anyhow::Result;
use num_complex::Complex64;

use floquet_pt_core::analysis::{
    delta_polynomial_structure, verify_gap_containment, Engine, GapReport,
};
use floquet_pt_core::bloch::{
    bloch_eigenvalues, conjugate_symmetry_check, locate_crossing, trace_branches, ComplexWindow,
};
use floquet_pt_core::coefficients::OperatorSpec;
use floquet_pt_core::linalg::{spectral_structure, SpectralStructure};
use floquet_pt_core::monodromy::{fundamental_matrix, refine_bloch_eigenvalue, MonodromyOptions};
use floquet_pt_core::unperturbed::{
    admissible_t_intervals, check_triple_sum_condition, collision_windows_for_band, collision_half_width, localization_radius,
    gap_windows, tracing_half_width, band_value, real_odd_parity, BandIndex,
};

use crate::config::Settings;
use crate::output::{CsvWriter, Field};
use crate::reports;
use crate::{EngineChoice, RunError};

pub struct CommandIo<'a> {
    pub out_dir: &'a Path,
    pub pool: &'a rayon::ThreadPool,
}

fn engine_failure<E: std::fmt::Display>(e: E) -> RunError {
    RunError::Engine(format!("{e}"))
}

fn structure_of(spec: &OperatorSpec, settings: &Settings) -> Result<SpectralStructure, RunError> {
    spectral_structure(&spec.mean_matrix(), settings.structure_tol).map_err(engine_failure)
}

pub fn validate(spec: &OperatorSpec, _settings: &Settings) -> Result<(), RunError> {
    let orders: Vec<u32> = (2..=spec.n()).filter(|&v| spec.series(v).is_some()).collect();
    println!(
        "ok: n={} m={} epsilon={} coefficient orders {:?} max harmonic frequency {}",
        spec.n(),
        spec.m(),
        spec.epsilon(),
        orders,
        spec.max_frequency()
    );
    Ok(())
}

pub fn structure(
    spec: &OperatorSpec,
    settings: &Settings,
    io: &CommandIo,
) -> Result<(), RunError> {
    let st = structure_of(spec, settings)?;
    let cond = check_triple_sum_condition(&st);
    let parity = real_odd_parity(&st);
    for e in &st.entries {
        let mu = if e.is_real {
            format!("{}", e.mu.re)
        } else {
            format!("{}{}{}i", e.mu.re, if e.mu.im >= 0.0 { "+" } else { "-" }, e.mu.im.abs())
        };
        println!(
            "mu={mu} m={} l={} partials={:?}",
            e.algebraic, e.geometric, e.partial_multiplicities
        );
    }
    println!(
        "s={} r={} real_odd={:?} triple_sum_condition={} parity_consistent={}",
        st.s, st.r, st.real_odd, cond.holds, parity.consistent
    );
    let out = reports::structure_out(&st, &cond, &parity);
    crate::output::write_json(&io.out_dir.join("structure.json"), &out)
        .map_err(|e| RunError::Engine(e.to_string()))?;
    Ok(())
}

pub fn unperturbed(
    spec: &OperatorSpec,
    settings: &Settings,
    io: &CommandIo,
    k_arg: Option<i64>,
    j_arg: Option<usize>,
    step: Option<f64>,
) -> Result<(), RunError> {
    let st = structure_of(spec, settings)?;
    let n = spec.n();
    let calib = &settings.calib;
    let k = k_arg.unwrap_or(calib.n_config).max(2);
    let t_step = step.unwrap_or(2.0 * PI / 512.0);

    let mut bands = CsvWriter::create(&io.out_dir.join("bands.csv"), &["k", "j", "t", "re", "im"])
        .map_err(|e| RunError::Engine(e.to_string()))?;
    let mut t = -1.0;
    while t < 2.0 * PI - 1.0 {
        for kk in -k..=k {
            for (j, e) in st.entries.iter().enumerate() {
                let val = band_value(n, e.mu, kk, t);
                bands
                    .write_row(&[
                        Field::Int(kk),
                        Field::Uint(j),
                        Field::Float(t),
                        Field::Float(val.re),
                        Field::Float(val.im),
                    ])
                    .map_err(|e| RunError::Engine(e.to_string()))?;
            }
        }
        t += t_step;
    }
    bands.finish().map_err(|e| RunError::Engine(e.to_string()))?;

    let j = j_arg.unwrap_or(0);
    if j >= st.s {
        return Err(RunError::Input(format!(
            "band index j={j} is not a real eigenvalue (s={})",
            st.s
        )));
    }
    let r = st.r.max(1);
    let eps_k = localization_radius(n, r, calib.c, k, spec.q_k(k)).map_err(engine_failure)?;
    let h_k = tracing_half_width(n, k, eps_k).map_err(engine_failure)?;
    let d_k = collision_half_width(n, r, calib, k, spec.q_k(k), spec.q_k(-k), spec.q_k(-k - 1))
        .map_err(engine_failure)?;
    let mut windows =
        CsvWriter::create(&io.out_dir.join("windows.csv"), &[
            "label", "index", "pair_i", "pair_j", "center", "half_width",
        ])
        .map_err(|e| RunError::Engine(e.to_string()))?;
    let collision =
        collision_windows_for_band(&st, n, k, j, d_k + h_k).map_err(engine_failure)?;
    let mut gaps = Vec::new();
    for l in [2 * k, 2 * k + 1] {
        gaps.extend(gap_windows(&st, n, l, (l as f64).powi(n as i32 - 2)));
    }
    for w in collision.iter().chain(gaps.iter()) {
        windows
            .write_row(&[
                Field::Str(w.label.to_string()),
                Field::Int(w.index),
                Field::Uint(w.pair.0),
                Field::Uint(w.pair.1),
                Field::Float(w.center),
                Field::Float(w.half_width),
            ])
            .map_err(|e| RunError::Engine(e.to_string()))?;
    }
    windows.finish().map_err(|e| RunError::Engine(e.to_string()))?;

    let intervals = admissible_t_intervals(&st, n, k, j, d_k + h_k).map_err(engine_failure)?;
    let mut adm = CsvWriter::create(&io.out_dir.join("admissible.csv"), &["lo", "hi"])
        .map_err(|e| RunError::Engine(e.to_string()))?;
    for (lo, hi) in &intervals {
        adm.write_row(&[Field::Float(*lo), Field::Float(*hi)])
            .map_err(|e| RunError::Engine(e.to_string()))?;
    }
    adm.finish().map_err(|e| RunError::Engine(e.to_string()))?;
    println!(
        "k={k} j={j} localization_radius={eps_k} h_k={h_k} collision_half_width={d_k} admissible intervals: {}",
        intervals.len()
    );
    Ok(())
}

pub fn bloch(
    spec: &OperatorSpec,
    settings: &Settings,
    io: &CommandIo,
    t: Option<f64>,
    lambda_lo: Option<f64>,
    lambda_hi: Option<f64>,
) -> Result<(), RunError> {
    let t = t.ok_or_else(|| RunError::Input("bloch requires --t".into()))?;
    let lo = lambda_lo.unwrap_or(-10.0);
    let hi = lambda_hi.unwrap_or(1e4);
    if !(lo < hi) {
        return Err(RunError::Input(format!("invalid window [{lo}, {hi}]")));
    }
    let im_half = (0.02 * (hi - lo)).max(1.0);
    let window = ComplexWindow::symmetric(lo, hi, im_half);
    let set = bloch_eigenvalues(spec, t, &settings.galerkin, &window).map_err(engine_failure)?;
    let sym = conjugate_symmetry_check(&set, settings.scan.unimod_tol);
    let mut csv = CsvWriter::create(&io.out_dir.join("bloch.csv"), &["re", "im", "multiplicity"])
        .map_err(|e| RunError::Engine(e.to_string()))?;
    for &(z, m) in &set.eigenvalues {
        csv.write_row(&[Field::Float(z.re), Field::Float(z.im), Field::Uint(m)])
            .map_err(|e| RunError::Engine(e.to_string()))?;
    }
    csv.finish().map_err(|e| RunError::Engine(e.to_string()))?;
    crate::output::write_json(&io.out_dir.join("bloch.json"), &reports::bloch_out(&set, &sym))
        .map_err(|e| RunError::Engine(e.to_string()))?;
    println!(
        "t={t}: {} eigenvalue clusters in [{lo}, {hi}], symmetric={} (defect {:.3e})",
        set.eigenvalues.len(),
        sym.symmetric,
        sym.max_defect
    );
    Ok(())
}

pub fn trace(
    spec: &OperatorSpec,
    settings: &Settings,
    io: &CommandIo,
    t: Option<f64>,
    k_arg: Option<i64>,
    j_arg: Option<usize>,
) -> Result<(), RunError> {
    let t0 = t.ok_or_else(|| RunError::Input("trace requires --t".into()))?;
    let st = structure_of(spec, settings)?;
    let calib = &settings.calib;
    let k = k_arg.unwrap_or(calib.n_config);
    let j = j_arg.unwrap_or(0);
    if j >= st.entries.len() {
        return Err(RunError::Input(format!("band index j={j} out of range")));
    }
    let r = st.r.max(1);
    let eps_k = localization_radius(spec.n(), r, calib.c, k, spec.q_k(k)).map_err(engine_failure)?;
    let h_k = tracing_half_width(spec.n(), k, eps_k).map_err(engine_failure)?;
    let band = BandIndex { k, j };
    let mut config = settings.galerkin;
    config.truncation = config.truncation.max(k.unsigned_abs() as usize + 6);
    let curve = trace_branches(
        spec,
        &st,
        band,
        t0,
        h_k,
        settings.trace_steps,
        &config,
        eps_k,
    )
    .map_err(engine_failure)?;
    let target = band_value(spec.n(), st.entries[j].mu, k, t0).re;
    let crossing =
        locate_crossing(spec, &st, band, &config, eps_k, &curve, target).map_err(engine_failure)?;

    let mut csv =
        CsvWriter::create(&io.out_dir.join("trace.csv"), &["branch", "t", "re", "im"])
            .map_err(|e| RunError::Engine(e.to_string()))?;
    for l in 0..curve.branch_count() {
        for (i, &tt) in curve.t_grid.iter().enumerate() {
            let z = curve.branch(l)[i];
            csv.write_row(&[
                Field::Uint(l),
                Field::Float(tt),
                Field::Float(z.re),
                Field::Float(z.im),
            ])
            .map_err(|e| RunError::Engine(e.to_string()))?;
        }
    }
    csv.finish().map_err(|e| RunError::Engine(e.to_string()))?;
    match crossing {
        Some(c) => println!(
            "traced {} branches over [{:.6}, {:.6}]; level {target} crossed at t={} (|Im| = {:.3e})",
            curve.branch_count(),
            t0 - h_k,
            t0 + h_k,
            c.t,
            c.value.im.abs()
        ),
        None => println!(
            "traced {} branches over [{:.6}, {:.6}]; level {target} not crossed",
            curve.branch_count(),
            t0 - h_k,
            t0 + h_k
        ),
    }
    Ok(())
}

fn write_scan_files(
    io: &CommandIo,
    suffix: &str,
    report: &GapReport,
    containment: Option<&floquet_pt_core::analysis::Containment>,
) -> Result<(), RunError> {
    let csv_name = if suffix.is_empty() {
        "scan.csv".to_string()
    } else {
        format!("scan_{suffix}.csv")
    };
    let json_name = if suffix.is_empty() {
        "report.json".to_string()
    } else {
        format!("report_{suffix}.json")
    };
    let mut csv = CsvWriter::create(&io.out_dir.join(csv_name), &[
        "lambda", "member", "defect", "witness_t",
    ])
    .map_err(|e| RunError::Engine(e.to_string()))?;
    for s in &report.samples {
        csv.write_row(&[
            Field::Float(s.lambda),
            Field::Uint(usize::from(s.member)),
            Field::Float(s.defect),
            match s.witness_t {
                Some(w) => Field::Float(w),
                None => Field::Empty,
            },
        ])
        .map_err(|e| RunError::Engine(e.to_string()))?;
    }
    csv.finish().map_err(|e| RunError::Engine(e.to_string()))?;
    crate::output::write_json(
        &io.out_dir.join(json_name),
        &reports::scan_report_out(report, containment),
    )
    .map_err(|e| RunError::Engine(e.to_string()))?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
pub fn scan(
    spec: &OperatorSpec,
    settings: &Settings,
    io: &CommandIo,
    engine: EngineChoice,
    lambda_lo: Option<f64>,
    lambda_hi: Option<f64>,
    step: Option<f64>,
    with_containment: bool,
) -> Result<(), RunError> {
    let lo = lambda_lo.ok_or_else(|| RunError::Input("scan requires --lambda-lo".into()))?;
    let hi = lambda_hi.ok_or_else(|| RunError::Input("scan requires --lambda-hi".into()))?;
    let step = step.ok_or_else(|| RunError::Input("scan requires --step".into()))?;
    let st = structure_of(spec, settings)?;
    let engines: Vec<(Engine, &str)> = match engine {
        EngineChoice::Galerkin => vec![(Engine::Galerkin, "")],
        EngineChoice::Monodromy => vec![(Engine::Monodromy, "")],
        EngineChoice::Both => {
            vec![(Engine::Galerkin, "galerkin"), (Engine::Monodromy, "monodromy")]
        }
    };
    for (eng, suffix) in engines {
        let report =
            crate::parallel::scan_parallel(io.pool, spec, &st, lo, hi, step, eng, &settings.scan)
                .map_err(engine_failure)?;
        let containment = with_containment
            .then(|| verify_gap_containment(&report, &st, spec.n(), 1.0));
        write_scan_files(io, suffix, &report, containment.as_ref())?;
        println!(
            "{eng}: {} gaps in [{lo}, {hi}], coverage fraction {:.6}",
            report.gaps.len(),
            report.coverage_fraction
        );
        if let Some(c) = &containment {
            println!(
                "containment: all_contained={} slope={:?} offsets_decay={:?}",
                c.all_contained, c.slope, c.offsets_decay
            );
        }
    }
    Ok(())
}

pub fn coverage(
    spec: &OperatorSpec,
    settings: &Settings,
    io: &CommandIo,
    engine: EngineChoice,
    lambda_lo: Option<f64>,
    lambda_hi: Option<f64>,
    step: Option<f64>,
) -> Result<(), RunError> {
    let h_candidate = lambda_lo.unwrap_or(0.5);
    let hi = lambda_hi.ok_or_else(|| RunError::Input("coverage requires --lambda-hi".into()))?;
    let step = step.ok_or_else(|| RunError::Input("coverage requires --step".into()))?;
    let eng = match engine {
        EngineChoice::Galerkin => Engine::Galerkin,
        _ => Engine::Monodromy,
    };
    let cov = crate::parallel::coverage_parallel(
        io.pool,
        spec,
        h_candidate,
        hi,
        step,
        eng,
        &settings.scan,
    )
    .map_err(engine_failure)?;
    let mut csv = CsvWriter::create(&io.out_dir.join("coverage.csv"), &[
        "lambda", "member", "defect", "witness_t",
    ])
    .map_err(|e| RunError::Engine(e.to_string()))?;
    for s in cov.negative_samples.iter().rev().chain(cov.samples.iter()) {
        csv.write_row(&[
            Field::Float(s.lambda),
            Field::Uint(usize::from(s.member)),
            Field::Float(s.defect),
            match s.witness_t {
                Some(w) => Field::Float(w),
                None => Field::Empty,
            },
        ])
        .map_err(|e| RunError::Engine(e.to_string()))?;
    }
    csv.finish().map_err(|e| RunError::Engine(e.to_string()))?;
    crate::output::write_json(&io.out_dir.join("coverage.json"), &reports::CoverageOut::from(&cov))
        .map_err(|e| RunError::Engine(e.to_string()))?;
    println!(
        "covered={} H_effective={} worst defect {:.3e}",
        cov.covered, cov.h_effective, cov.worst_defect
    );
    Ok(())
}

/// Built-in invariant battery; returns the failure count.
pub fn verify(spec: &OperatorSpec, settings: &Settings) -> Result<u32, RunError> {
    let mut failures = 0u32;
    let mut check = |name: &str, ok: bool, detail: String| {
        if ok {
            println!("PASS {name} - {detail}");
        } else {
            println!("FAIL {name} - {detail}");
            failures += 1;
        }
    };

    // PT symmetry and periodicity of the coefficients at sample points
    let mut worst_pt: f64 = 0.0;
    let mut worst_per: f64 = 0.0;
    for v in 2..=spec.n() {
        for i in 0..50 {
            let x = (i as f64) * 0.173 - 4.0;
            let plus = spec.evaluate_coefficient(v, x).map_err(engine_failure)?;
            let minus = spec.evaluate_coefficient(v, -x).map_err(engine_failure)?;
            let next = spec.evaluate_coefficient(v, x + 1.0).map_err(engine_failure)?;
            for r in 0..spec.m() {
                for c in 0..spec.m() {
                    worst_pt = worst_pt.max((minus[(r, c)] - plus[(r, c)].conj()).norm());
                    worst_per = worst_per.max((next[(r, c)] - plus[(r, c)]).norm());
                }
            }
        }
    }
    check("pt-realness", worst_pt <= 1e-10, format!("max defect {worst_pt:.3e}"));
    check("periodicity", worst_per <= 1e-10, format!("max defect {worst_per:.3e}"));

    let st = structure_of(spec, settings)?;
    let parity = real_odd_parity(&st);
    check(
        "remark1-parity",
        parity.consistent,
        format!("m odd: {}, real odd count {}", parity.m_is_odd, parity.count_real_odd),
    );

    // conjugate symmetry of windowed Bloch sets
    let mut config = settings.galerkin;
    config.truncation = config.truncation.max(spec.max_frequency() as usize + 8);
    let boundary = 2.0 * PI * (config.truncation - 2) as f64;
    let re_hi = boundary.powi(spec.n() as i32).min(2500.0);
    let window = ComplexWindow::symmetric(-60.0, re_hi, 80.0);
    let mut sym_ok = true;
    let mut sym_detail = String::new();
    for &t in &[0.7, 2.9] {
        match bloch_eigenvalues(spec, t, &config, &window) {
            Ok(set) => {
                let rep = conjugate_symmetry_check(&set, 1e-6);
                if !rep.symmetric {
                    sym_ok = false;
                }
                sym_detail = format!("defect {:.3e} at t={t}", rep.max_defect);
            }
            Err(e) => {
                sym_ok = false;
                sym_detail = format!("engine failure: {e}");
            }
        }
    }
    check("theorem1-symmetry", sym_ok, sym_detail);

    // Liouville identity with a tightened integrator tolerance
    let opts = MonodromyOptions {
        ode_tol: settings.scan.monodromy.ode_tol.min(1e-12),
        ..settings.scan.monodromy
    };
    let mut worst_det: f64 = 0.0;
    for i in 0..10 {
        let lambda = Complex64::new(-900.0 + 193.0 * i as f64, 7.0 * (i as f64 - 5.0));
        let rec = fundamental_matrix(spec, lambda, &opts).map_err(engine_failure)?;
        worst_det = worst_det.max((rec.det - Complex64::new(1.0, 0.0)).norm());
    }
    check("liouville-det", worst_det <= 1e-8, format!("max |det-1| = {worst_det:.3e}"));

    // polynomial structure of the characteristic determinant
    let nm = spec.n() as usize * spec.m();
    let mut worst_poly: f64 = 0.0;
    let mut poly_ok = true;
    for i in 0..3 {
        let lambda = Complex64::new(35.0 + 140.0 * i as f64, 0.0);
        let ps = delta_polynomial_structure(spec, lambda, &opts).map_err(engine_failure)?;
        if nm % 2 == 0 {
            worst_poly = worst_poly.max(ps.defect);
            poly_ok &= ps.defect <= 1e-6;
        } else {
            let lead = (ps.coeff_leading + Complex64::new(1.0, 0.0)).norm();
            let cst = (ps.coeff_const - Complex64::new(1.0, 0.0)).norm();
            worst_poly = worst_poly.max(lead.max(cst));
            poly_ok &= lead <= 1e-6 && cst <= 1e-6;
        }
    }
    let poly_note = if nm % 2 == 0 {
        format!("coefficients 1 within {worst_poly:.3e}")
    } else {
        format!("odd nm: leading coefficient -1 within {worst_poly:.3e}")
    };
    check("delta-polynomial", poly_ok, poly_note);

    // engine agreement on a moderate window
    let t = 0.7;
    let vals = floquet_pt_core::bloch::galerkin_eigenvalues(spec, t, config.truncation)
        .map_err(engine_failure)?;
    let mut worst_gap: f64 = 0.0;
    let mut compared = 0;
    for z in vals {
        if z.re < -50.0 || z.re > 2000.0 || z.im.abs() > 50.0 {
            continue;
        }
        match refine_bloch_eigenvalue(spec, t, z, &settings.scan.monodromy) {
            Ok(refined) => {
                worst_gap = worst_gap.max((refined - z).norm());
                compared += 1;
            }
            Err(_) => worst_gap = f64::INFINITY,
        }
    }
    check(
        "engine-agreement",
        compared > 0 && worst_gap <= 1e-6,
        format!("{compared} eigenvalues, max |galerkin - refined| = {worst_gap:.3e}"),
    );

    Ok(failures)
}

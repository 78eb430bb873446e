//! Worker-pool parallel drivers for the scan engines. The grid evaluations are
//! pure per λ (or per t), so the only coordination is ordered collection;
//! output stays byte-deterministic for a fixed grid.

use anyhow::Result;
use rayon::prelude::*;

use floquet_pt_core::analysis::{
    coverage_from_samples, lambda_grid, report_from_samples, AnalysisError, Coverage, Engine,
    EngineContext, GalerkinSampler, GapReport, MembershipSample, ScanTols,
};
use floquet_pt_core::coefficients::OperatorSpec;
use floquet_pt_core::linalg::SpectralStructure;

pub fn make_pool(jobs: usize) -> Result<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?)
}

/// Builds the engine context, sampling the quasimomentum grid in parallel for
/// the galerkin engine.
pub fn build_context(
    pool: &rayon::ThreadPool,
    spec: &OperatorSpec,
    engine: Engine,
    lambda_abs: f64,
    tols: &ScanTols,
) -> Result<EngineContext, AnalysisError> {
    match engine {
        Engine::Monodromy => Ok(EngineContext::Monodromy),
        Engine::Galerkin => {
            let truncation = tols
                .truncation
                .unwrap_or_else(|| GalerkinSampler::auto_truncation(spec, lambda_abs));
            let grid = GalerkinSampler::t_grid(tols.t_points);
            let parts: Result<Vec<Vec<f64>>, AnalysisError> = pool.install(|| {
                grid.par_iter()
                    .map(|&t| GalerkinSampler::samples_at(spec, t, truncation, tols.im_rel_tol))
                    .collect()
            });
            let samples: Vec<f64> = parts?.into_iter().flatten().collect();
            Ok(EngineContext::Galerkin(GalerkinSampler::from_samples(samples)))
        }
    }
}

fn memberships(
    pool: &rayon::ThreadPool,
    ctx: &EngineContext,
    spec: &OperatorSpec,
    grid: &[f64],
    step: f64,
    tols: &ScanTols,
) -> Result<Vec<MembershipSample>, AnalysisError> {
    pool.install(|| {
        grid.par_iter().map(|&lambda| ctx.membership(spec, lambda, step, tols)).collect()
    })
}

/// Parallel counterpart of `analysis::scan_real_axis`.
#[allow(clippy::too_many_arguments)]
pub fn scan_parallel(
    pool: &rayon::ThreadPool,
    spec: &OperatorSpec,
    structure: &SpectralStructure,
    lambda_lo: f64,
    lambda_hi: f64,
    step: f64,
    engine: Engine,
    tols: &ScanTols,
) -> Result<GapReport, AnalysisError> {
    if !(lambda_lo < lambda_hi) || !(step > 0.0) {
        return Err(AnalysisError::BadRange { lo: lambda_lo, hi: lambda_hi, step });
    }
    let ctx =
        build_context(pool, spec, engine, lambda_lo.abs().max(lambda_hi.abs()), tols)?;
    let grid = lambda_grid(lambda_lo, lambda_hi, step);
    let samples = memberships(pool, &ctx, spec, &grid, step, tols)?;
    report_from_samples(spec, structure, &ctx, samples, lambda_lo, lambda_hi, step, tols)
}

/// Parallel counterpart of `analysis::verify_real_coverage`.
#[allow(clippy::too_many_arguments)]
pub fn coverage_parallel(
    pool: &rayon::ThreadPool,
    spec: &OperatorSpec,
    h_candidate: f64,
    lambda_hi: f64,
    step: f64,
    engine: Engine,
    tols: &ScanTols,
) -> Result<Coverage, AnalysisError> {
    if !(h_candidate < lambda_hi) || !(step > 0.0) {
        return Err(AnalysisError::BadRange { lo: h_candidate, hi: lambda_hi, step });
    }
    let ctx = build_context(pool, spec, engine, lambda_hi.abs(), tols)?;
    let grid = lambda_grid(h_candidate, lambda_hi, step);
    let samples = memberships(pool, &ctx, spec, &grid, step, tols)?;
    let negative_samples = if spec.n() % 2 == 1 {
        let neg: Vec<f64> = grid.iter().map(|&l| -l).collect();
        memberships(pool, &ctx, spec, &neg, step, tols)?
    } else {
        Vec::new()
    };
    Ok(coverage_from_samples(h_candidate, step, samples, negative_samples))
}

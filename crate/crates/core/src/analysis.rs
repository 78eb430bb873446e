//! Real-axis scans, gap detection and verification routines.
//!
//! Two membership engines answer "is λ in the spectrum":
//!
//! * monodromy — one fundamental-matrix integration per λ; exact in t since
//!   the multiplier modulus test answers all quasimomenta at once;
//! * galerkin — one eigendecomposition per t-grid point, reused for every λ:
//!   λ is a member when some near-real eigenvalue sample lies within `step`.
//!
//! Gaps are maximal runs (≥ 2 grid points) of non-members, endpoints refined
//! by bisection to step/16.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float as _;

use crate::bloch::{self, BlochError};
use crate::calibration::Calibration;
use crate::coefficients::OperatorSpec;
use crate::linalg::{LinalgError, SpectralStructure};
use crate::monodromy::{self, CharDetEvaluator, MonodromyError, MonodromyOptions};
use crate::unperturbed::{gap_windows, band_value, Window};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Engine {
    Galerkin,
    Monodromy,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Engine::Galerkin => write!(f, "galerkin"),
            Engine::Monodromy => write!(f, "monodromy"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AnalysisError {
    /// An engine failed at a specific spectral parameter.
    EngineFailure { lambda: f64, detail: String },
    Bloch(BlochError),
    Monodromy(MonodromyError),
    Linalg(LinalgError),
    BadRange { lo: f64, hi: f64, step: f64 },
}

impl fmt::Display for AnalysisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalysisError::EngineFailure { lambda, detail } => {
                write!(f, "engine failure at lambda={lambda}: {detail}")
            }
            AnalysisError::Bloch(e) => write!(f, "galerkin engine: {e}"),
            AnalysisError::Monodromy(e) => write!(f, "monodromy engine: {e}"),
            AnalysisError::Linalg(e) => write!(f, "linear algebra: {e}"),
            AnalysisError::BadRange { lo, hi, step } => {
                write!(f, "invalid scan range [{lo}, {hi}] at step {step}")
            }
        }
    }
}

impl core::error::Error for AnalysisError {}

impl From<BlochError> for AnalysisError {
    fn from(e: BlochError) -> Self {
        AnalysisError::Bloch(e)
    }
}

impl From<MonodromyError> for AnalysisError {
    fn from(e: MonodromyError) -> Self {
        AnalysisError::Monodromy(e)
    }
}

impl From<LinalgError> for AnalysisError {
    fn from(e: LinalgError) -> Self {
        AnalysisError::Linalg(e)
    }
}

/// Tolerances and sizes shared by the scan machinery.
#[derive(Debug, Clone, PartialEq)]
pub struct ScanTols {
    /// Galerkin truncation; `None` picks the smallest K covering the range.
    pub truncation: Option<usize>,
    /// Number of quasimomentum samples for the galerkin engine.
    pub t_points: usize,
    /// Relative imaginary-part tolerance for counting an eigenvalue as real.
    pub im_rel_tol: f64,
    pub monodromy: MonodromyOptions,
    pub unimod_tol: f64,
}

impl Default for ScanTols {
    fn default() -> Self {
        ScanTols {
            truncation: None,
            t_points: 64,
            im_rel_tol: 1e-8,
            monodromy: MonodromyOptions::default(),
            unimod_tol: 1e-6,
        }
    }
}

/// Membership verdict at one grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembershipSample {
    pub lambda: f64,
    pub member: bool,
    /// Engine-specific defect: multiplier-modulus defect (monodromy) or
    /// distance to the nearest real eigenvalue sample (galerkin).
    pub defect: f64,
    pub witness_t: Option<f64>,
}

/// A detected spectral gap with its nearest predicted window.
#[derive(Debug, Clone, PartialEq)]
pub struct Gap {
    pub interval: (f64, f64),
    pub nearest_window: Option<Window>,
    /// |gap center − window center| / l^{n−2}.
    pub normalized_offset: Option<f64>,
}

impl Gap {
    pub fn center(&self) -> f64 {
        0.5 * (self.interval.0 + self.interval.1)
    }

    pub fn width(&self) -> f64 {
        self.interval.1 - self.interval.0
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GapReport {
    pub scan_range: (f64, f64),
    pub grid_step: f64,
    pub engine: Engine,
    pub gaps: Vec<Gap>,
    pub coverage_fraction: f64,
    pub samples: Vec<MembershipSample>,
}

/// Sorted near-real eigenvalue samples collected over a quasimomentum grid.
pub struct GalerkinSampler {
    samples: Vec<f64>,
}

impl GalerkinSampler {
    /// Quasimomentum grid over one period [−1, 2π−1).
    pub fn t_grid(t_points: usize) -> Vec<f64> {
        let n = t_points.max(1);
        (0..n).map(|i| -1.0 + 2.0 * PI * i as f64 / n as f64).collect()
    }

    /// Smallest truncation whose certified zone covers |λ| ≤ `lambda_abs`.
    pub fn auto_truncation(spec: &OperatorSpec, lambda_abs: f64) -> usize {
        let n = spec.n() as f64;
        let needed = (1.5 * lambda_abs.max(1.0)).powf(1.0 / n) / (2.0 * PI);
        let k = needed.ceil() as usize + 3;
        k.max(spec.max_frequency() as usize + 4)
    }

    /// Near-real eigenvalue samples at one quasimomentum, clipped to the
    /// certified modulus.
    pub fn samples_at(
        spec: &OperatorSpec,
        t: f64,
        truncation: usize,
        im_rel_tol: f64,
    ) -> Result<Vec<f64>, AnalysisError> {
        let vals = bloch::galerkin_eigenvalues(spec, t, truncation)?;
        let certified =
            (2.0 * PI * truncation.saturating_sub(2) as f64).powi(spec.n() as i32);
        Ok(vals
            .into_iter()
            .filter(|z| z.im.abs() <= im_rel_tol * (1.0 + z.norm()) && z.norm() <= certified)
            .map(|z| z.re)
            .collect())
    }

    pub fn from_samples(mut samples: Vec<f64>) -> Self {
        samples.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
        GalerkinSampler { samples }
    }

    pub fn build(
        spec: &OperatorSpec,
        lambda_abs: f64,
        tols: &ScanTols,
    ) -> Result<Self, AnalysisError> {
        let truncation =
            tols.truncation.unwrap_or_else(|| Self::auto_truncation(spec, lambda_abs));
        let mut all = Vec::new();
        for t in Self::t_grid(tols.t_points) {
            all.extend(Self::samples_at(spec, t, truncation, tols.im_rel_tol)?);
        }
        Ok(Self::from_samples(all))
    }

    /// Distance from λ to the nearest real eigenvalue sample.
    pub fn defect(&self, lambda: f64) -> f64 {
        if self.samples.is_empty() {
            return f64::INFINITY;
        }
        let idx = self.samples.partition_point(|&s| s < lambda);
        let mut best = f64::INFINITY;
        if idx < self.samples.len() {
            best = best.min((self.samples[idx] - lambda).abs());
        }
        if idx > 0 {
            best = best.min((self.samples[idx - 1] - lambda).abs());
        }
        best
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }
}

/// Engine state reused across a scan.
pub enum EngineContext {
    Galerkin(GalerkinSampler),
    Monodromy,
}

impl EngineContext {
    pub fn build(
        spec: &OperatorSpec,
        engine: Engine,
        lambda_abs: f64,
        tols: &ScanTols,
    ) -> Result<Self, AnalysisError> {
        match engine {
            Engine::Galerkin => {
                Ok(EngineContext::Galerkin(GalerkinSampler::build(spec, lambda_abs, tols)?))
            }
            Engine::Monodromy => Ok(EngineContext::Monodromy),
        }
    }

    pub fn engine(&self) -> Engine {
        match self {
            EngineContext::Galerkin(_) => Engine::Galerkin,
            EngineContext::Monodromy => Engine::Monodromy,
        }
    }

    /// Membership verdict at λ with proximity scale `step` (galerkin engine).
    pub fn membership(
        &self,
        spec: &OperatorSpec,
        lambda: f64,
        step: f64,
        tols: &ScanTols,
    ) -> Result<MembershipSample, AnalysisError> {
        match self {
            EngineContext::Galerkin(sampler) => {
                let defect = sampler.defect(lambda);
                Ok(MembershipSample {
                    lambda,
                    member: defect <= step,
                    defect,
                    witness_t: None,
                })
            }
            EngineContext::Monodromy => {
                let mem = monodromy::spectrum_membership(
                    spec,
                    lambda,
                    &tols.monodromy,
                    tols.unimod_tol,
                )
                .map_err(|e| AnalysisError::EngineFailure {
                    lambda,
                    detail: alloc::format!("{e}"),
                })?;
                Ok(MembershipSample {
                    lambda,
                    member: mem.member,
                    defect: mem.best_defect,
                    witness_t: mem.witness_t,
                })
            }
        }
    }
}

pub fn lambda_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let n = ((hi - lo) / step).round() as usize;
    for i in 0..=n {
        let x = lo + i as f64 * step;
        if x > hi + 1e-12 * step {
            break;
        }
        out.push(x);
    }
    if let Some(&last) = out.last() {
        if (hi - last).abs() > 1e-12 * step.max(1.0) {
            out.push(hi);
        }
    }
    out
}

/// Detects maximal non-member runs of length ≥ 2 and refines their endpoints
/// by bisection against the same membership oracle.
pub fn gaps_from_samples(
    spec: &OperatorSpec,
    ctx: &EngineContext,
    samples: &[MembershipSample],
    step: f64,
    tols: &ScanTols,
) -> Result<Vec<(f64, f64)>, AnalysisError> {
    let mut intervals = Vec::new();
    let n = samples.len();
    let mut i = 0;
    while i < n {
        if samples[i].member {
            i += 1;
            continue;
        }
        let run_start = i;
        while i < n && !samples[i].member {
            i += 1;
        }
        let run_end = i - 1;
        if run_end - run_start + 1 < 2 {
            continue;
        }
        // left edge: between the previous member (if any) and the first non-member
        let left = if run_start == 0 {
            samples[0].lambda
        } else {
            bisect_edge(
                spec,
                ctx,
                samples[run_start - 1].lambda,
                samples[run_start].lambda,
                step,
                tols,
            )?
        };
        let right = if run_end == n - 1 {
            samples[n - 1].lambda
        } else {
            bisect_edge(
                spec,
                ctx,
                samples[run_end].lambda,
                samples[run_end + 1].lambda,
                step,
                tols,
            )?
        };
        if right > left {
            intervals.push((left, right));
        }
    }
    Ok(intervals)
}

/// Bisection between a member point and a non-member point down to step/16.
fn bisect_edge(
    spec: &OperatorSpec,
    ctx: &EngineContext,
    member_side: f64,
    gap_side: f64,
    step: f64,
    tols: &ScanTols,
) -> Result<f64, AnalysisError> {
    let mut a = member_side;
    let mut b = gap_side;
    while (b - a).abs() > step / 16.0 {
        let mid = 0.5 * (a + b);
        if ctx.membership(spec, mid, step, tols)?.member {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// Assigns the nearest predicted gap window S(l, i, j) to each detected gap.
pub fn assign_windows(
    gaps: &mut [Gap],
    structure: &SpectralStructure,
    n: u32,
    lambda_hi: f64,
) {
    if structure.s == 0 {
        return;
    }
    let l_max = ((1.2 * lambda_hi.abs().max(1.0)).powf(1.0 / n as f64) / PI).ceil() as i64 + 1;
    let mut candidates: Vec<Window> = Vec::new();
    for l in 1..=l_max {
        candidates.extend(gap_windows(structure, n, l, 1.0));
    }
    for gap in gaps.iter_mut() {
        let center = gap.center();
        let best = candidates
            .iter()
            .min_by(|a, b| {
                (a.center - center)
                    .abs()
                    .partial_cmp(&(b.center - center).abs())
                    .unwrap_or(core::cmp::Ordering::Equal)
            })
            .cloned();
        if let Some(w) = best {
            let scale = (w.index as f64).powi(n as i32 - 2).max(1.0);
            gap.normalized_offset = Some((center - w.center).abs() / scale);
            gap.nearest_window = Some(w);
        }
    }
}

/// Scans [λ_lo, λ_hi] on a uniform grid and reports members, gaps and
/// coverage.
pub fn scan_real_axis(
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
        EngineContext::build(spec, engine, lambda_lo.abs().max(lambda_hi.abs()), tols)?;
    let grid = lambda_grid(lambda_lo, lambda_hi, step);
    let mut samples = Vec::with_capacity(grid.len());
    for &lambda in &grid {
        samples.push(ctx.membership(spec, lambda, step, tols)?);
    }
    report_from_samples(spec, structure, &ctx, samples, lambda_lo, lambda_hi, step, tols)
}

/// Assembles the report from precomputed membership samples (the samples may
/// have been evaluated in parallel by the caller).
#[allow(clippy::too_many_arguments)]
pub fn report_from_samples(
    spec: &OperatorSpec,
    structure: &SpectralStructure,
    ctx: &EngineContext,
    samples: Vec<MembershipSample>,
    lambda_lo: f64,
    lambda_hi: f64,
    step: f64,
    tols: &ScanTols,
) -> Result<GapReport, AnalysisError> {
    let intervals = gaps_from_samples(spec, ctx, &samples, step, tols)?;
    let mut gaps: Vec<Gap> = intervals
        .into_iter()
        .map(|interval| Gap { interval, nearest_window: None, normalized_offset: None })
        .collect();
    assign_windows(&mut gaps, structure, spec.n(), lambda_hi);
    let gap_measure: f64 = gaps.iter().map(|g| g.width()).sum();
    let coverage_fraction = (1.0 - gap_measure / (lambda_hi - lambda_lo)).clamp(0.0, 1.0);
    Ok(GapReport {
        scan_range: (lambda_lo, lambda_hi),
        grid_step: step,
        engine: ctx.engine(),
        gaps,
        coverage_fraction,
        samples,
    })
}

/// Ordinary least squares slope of y against x.
pub fn ols_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// Containment verdict for the gaps of a report.
#[derive(Debug, Clone, PartialEq)]
pub struct Containment {
    pub all_contained: bool,
    /// Per distinct window index l: the half-width needed to contain every gap
    /// assigned to it.
    pub fitted_gamma: Vec<(i64, f64)>,
    /// Log-log OLS slope of normalized offsets against l, when at least two
    /// distinct l values were detected.
    pub slope: Option<f64>,
    pub offsets_decay: Option<bool>,
}

/// Checks that every detected gap sits inside a predicted window (offset no
/// larger than `contain_scale · l^{n−2}`) and that normalized offsets decay
/// with l.
pub fn verify_gap_containment(
    report: &GapReport,
    _structure: &SpectralStructure,
    _n: u32,
    contain_scale: f64,
) -> Containment {
    let mut fitted: Vec<(i64, f64)> = Vec::new();
    let mut all_contained = true;
    let mut by_l: Vec<(f64, f64)> = Vec::new(); // (l, normalized offset)
    for gap in &report.gaps {
        match (&gap.nearest_window, gap.normalized_offset) {
            (Some(w), Some(off)) => {
                if off > contain_scale {
                    all_contained = false;
                }
                let need = (gap.center() - w.center).abs() + 0.5 * gap.width();
                match fitted.iter_mut().find(|(l, _)| *l == w.index) {
                    Some((_, g)) => *g = g.max(need),
                    None => fitted.push((w.index, need)),
                }
                by_l.push((w.index as f64, off));
            }
            _ => all_contained = false,
        }
    }
    let mut distinct: Vec<f64> = by_l.iter().map(|&(l, _)| l).collect();
    distinct.sort_by(|a, b| a.partial_cmp(b).unwrap());
    distinct.dedup();
    let (slope, offsets_decay) = if distinct.len() >= 2 {
        let xs: Vec<f64> = by_l.iter().map(|&(l, _)| l.ln()).collect();
        let ys: Vec<f64> = by_l.iter().map(|&(_, off)| off.max(1e-300).ln()).collect();
        let s = ols_slope(&xs, &ys);
        (Some(s), Some(s < 0.0))
    } else {
        (None, None)
    };
    fitted.sort_by_key(|&(l, _)| l);
    Containment { all_contained, fitted_gamma: fitted, slope, offsets_decay }
}

/// Coverage verdict for ±[H, λ_hi].
#[derive(Debug, Clone, PartialEq)]
pub struct Coverage {
    pub covered: bool,
    pub h_effective: f64,
    /// Largest membership defect among points at or above `h_effective`.
    pub worst_defect: f64,
    pub samples: Vec<MembershipSample>,
    /// Mirror-side samples for odd orders (λ ≤ −H), empty for even orders.
    pub negative_samples: Vec<MembershipSample>,
}

/// Verifies real-line coverage: scans [H, λ_hi] (and the mirrored negative
/// range for odd n) and reports the smallest grid H above which every point
/// is a member.
pub fn verify_real_coverage(
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
    let ctx = EngineContext::build(spec, engine, lambda_hi.abs(), tols)?;
    let grid = lambda_grid(h_candidate, lambda_hi, step);
    let mut samples = Vec::with_capacity(grid.len());
    for &lambda in &grid {
        samples.push(ctx.membership(spec, lambda, step, tols)?);
    }
    let mut negative_samples = Vec::new();
    if spec.n() % 2 == 1 {
        for &lambda in &grid {
            negative_samples.push(ctx.membership(spec, -lambda, step, tols)?);
        }
    }
    Ok(coverage_from_samples(h_candidate, step, samples, negative_samples))
}

/// Assembles the coverage verdict from (possibly parallel) samples.
pub fn coverage_from_samples(
    h_candidate: f64,
    step: f64,
    samples: Vec<MembershipSample>,
    negative_samples: Vec<MembershipSample>,
) -> Coverage {
    let covered =
        samples.iter().all(|s| s.member) && negative_samples.iter().all(|s| s.member);
    let worst_nonmember = samples
        .iter()
        .chain(&negative_samples)
        .filter(|s| !s.member)
        .map(|s| s.lambda.abs())
        .fold(f64::NEG_INFINITY, f64::max);
    let h_effective =
        if worst_nonmember.is_finite() { worst_nonmember + step } else { h_candidate };
    let worst_defect = samples
        .iter()
        .chain(&negative_samples)
        .filter(|s| s.lambda.abs() >= h_effective)
        .map(|s| s.defect)
        .fold(0.0f64, f64::max);
    Coverage { covered, h_effective, worst_defect, samples, negative_samples }
}

/// Localization-decay measurement for one band family.
#[derive(Debug, Clone, PartialEq)]
pub struct Decay {
    /// (k, max distance of the m_j nearest eigenvalues to μ_{k,j}(t)).
    pub distances: Vec<(i64, f64)>,
    /// Log-log OLS slope; `None` when every distance sits at the numerical
    /// floor (exact localization).
    pub fitted_slope: Option<f64>,
    pub decay_consistent: bool,
    /// Slope bound used for the verdict.
    pub bound: f64,
}

/// Distances from the computed eigenvalues to the unperturbed band values
/// μ_{k,j}(t) across `k_list`, with a fitted decay slope.
pub fn localization_decay(
    spec: &OperatorSpec,
    structure: &SpectralStructure,
    band_j: usize,
    k_list: &[i64],
    t_sample: f64,
    tols: &ScanTols,
    calib: &Calibration,
) -> Result<Decay, AnalysisError> {
    let k_max = k_list.iter().map(|k| k.abs()).max().unwrap_or(8) as usize;
    let truncation = tols
        .truncation
        .unwrap_or(k_max + spec.max_frequency() as usize + 6);
    let vals = bloch::galerkin_eigenvalues(spec, t_sample, truncation)?;
    let mu = structure.entries[band_j].mu;
    let m_j = structure.entries[band_j].algebraic;
    let mut distances = Vec::with_capacity(k_list.len());
    let mut floors = Vec::with_capacity(k_list.len());
    for &k in k_list {
        let target = band_value(spec.n(), mu, k, t_sample);
        let mut dists: Vec<f64> = vals.iter().map(|z| (z - target).norm()).collect();
        dists.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
        let d = dists.iter().take(m_j).fold(0.0f64, |a, &b| a.max(b));
        distances.push((k, d));
        floors.push(1e-12 * (1.0 + target.norm()));
    }
    let measurable: Vec<(f64, f64)> = distances
        .iter()
        .zip(&floors)
        .filter(|((_, d), &fl)| *d > fl)
        .map(|(&(k, d), _)| ((k.abs() as f64).ln(), d.ln()))
        .collect();
    let n = spec.n();
    let r = structure.r.max(1) as f64;
    let bound = if n % 2 == 1 {
        (n as f64 - 3.0) / r + calib.slope_slack
    } else {
        (n as f64 - 2.0) / r + calib.slope_slack
    };
    if measurable.len() < 2 {
        // everything at the floor: exact localization
        return Ok(Decay { distances, fitted_slope: None, decay_consistent: true, bound });
    }
    let xs: Vec<f64> = measurable.iter().map(|&(x, _)| x).collect();
    let ys: Vec<f64> = measurable.iter().map(|&(_, y)| y).collect();
    let slope = ols_slope(&xs, &ys);
    Ok(Decay {
        distances,
        fitted_slope: Some(slope),
        decay_consistent: slope <= bound,
        bound,
    })
}

/// Coefficients of the characteristic determinant as a polynomial in e^{it}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyStructure {
    pub coeff_const: Complex64,
    pub coeff_leading: Complex64,
    /// max(|c₀ − 1|, |c_{nm} − 1|).
    pub defect: f64,
    pub degree: usize,
}

/// Samples Δ(λ, t) at nm+1 equispaced t and recovers the polynomial
/// coefficients by inverse DFT; the constant and leading coefficients are
/// both 1 when nm is even (for odd nm the leading coefficient is −1, reported
/// as a diagnostic rather than an error).
pub fn delta_polynomial_structure(
    spec: &OperatorSpec,
    lambda: Complex64,
    opts: &MonodromyOptions,
) -> Result<PolyStructure, AnalysisError> {
    let nm = spec.n() as usize * spec.m();
    let count = nm + 1;
    let evaluator = CharDetEvaluator::build(spec, lambda, opts)?;
    let mut coeff_const = Complex64::new(0.0, 0.0);
    let mut coeff_leading = Complex64::new(0.0, 0.0);
    let samples: Vec<Complex64> = (0..count)
        .map(|d| evaluator.det_at(2.0 * PI * d as f64 / count as f64))
        .collect();
    for (d, &val) in samples.iter().enumerate() {
        let angle_lead = -2.0 * PI * (nm as f64) * d as f64 / count as f64;
        coeff_const += val;
        coeff_leading += val * Complex64::new(angle_lead.cos(), angle_lead.sin());
    }
    let scale = count as f64;
    coeff_const /= scale;
    coeff_leading /= scale;
    let defect = (coeff_const - Complex64::new(1.0, 0.0))
        .norm()
        .max((coeff_leading - Complex64::new(1.0, 0.0)).norm());
    Ok(PolyStructure { coeff_const, coeff_leading, defect, degree: nm })
}

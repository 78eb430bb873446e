//! Shooting engine: fundamental solutions of the order-n matrix system,
//! Floquet multipliers, the characteristic determinant and spectrum
//! membership.
//!
//! The order-n equation is rewritten first-order on the scaled state
//! W_ν = Y^{(ν−1)} / ω^{ν−1} with ω = max(1, |λ|^{1/n}); the scaling is a
//! diagonal similarity, so determinants and multipliers are unchanged while
//! the companion blocks stay balanced.
//!
//! The characteristic determinant det(M(λ) − e^{it} I) is evaluated through a
//! multiple-shooting block determinant: the period splits into S segments with
//! propagators M_s, and
//!
//! ```text
//! det(M_{S-1}···M_0 − z I) = det [ M_0  -I            ]
//!                                [      M_1  -I       ]
//!                                [            ...  -I ]
//!                                [ -zI            M_{S-1} ]
//! ```
//!
//! Pivoted elimination of the block system never forms the product, so the
//! determinant stays accurate at |λ| where the one-shot propagator would drown
//! the unimodular multipliers in its dominant growth.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::{Float as _, Zero};

use crate::coefficients::{OperatorSpec, SpecError};
use crate::linalg::{self, CMat, LinalgError};
use crate::ode::{integrate_matrix, OdeError, OdeOptions};

#[derive(Debug, Clone, PartialEq)]
pub enum MonodromyError {
    LambdaTooLarge { modulus: f64, cap: f64 },
    Ode(OdeError),
    Linalg(LinalgError),
    Spec(SpecError),
    SecantDiverged { best: Complex64, residual: f64 },
}

impl fmt::Display for MonodromyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MonodromyError::LambdaTooLarge { modulus, cap } => {
                write!(f, "|lambda| = {modulus} exceeds the stiffness cap {cap}")
            }
            MonodromyError::Ode(e) => write!(f, "integration failure: {e}"),
            MonodromyError::Linalg(e) => write!(f, "linear algebra failure: {e}"),
            MonodromyError::Spec(e) => write!(f, "spec failure: {e}"),
            MonodromyError::SecantDiverged { best, residual } => write!(
                f,
                "secant refinement stalled near {best} with residual {residual}"
            ),
        }
    }
}

impl core::error::Error for MonodromyError {}

impl From<OdeError> for MonodromyError {
    fn from(e: OdeError) -> Self {
        MonodromyError::Ode(e)
    }
}

impl From<LinalgError> for MonodromyError {
    fn from(e: LinalgError) -> Self {
        MonodromyError::Linalg(e)
    }
}

impl From<SpecError> for MonodromyError {
    fn from(e: SpecError) -> Self {
        MonodromyError::Spec(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonodromyOptions {
    /// Local integration tolerance.
    pub ode_tol: f64,
    /// Stiffness guard on |λ|.
    pub lambda_cap: f64,
    pub max_steps: usize,
    /// Target growth exponent per multiple-shooting segment.
    pub segment_exponent: f64,
}

impl Default for MonodromyOptions {
    fn default() -> Self {
        MonodromyOptions {
            ode_tol: 1e-10,
            lambda_cap: 1e6,
            max_steps: 1_000_000,
            segment_exponent: 6.0,
        }
    }
}

impl MonodromyOptions {
    fn ode(&self) -> OdeOptions {
        OdeOptions { rel_tol: self.ode_tol, abs_tol: self.ode_tol, max_steps: self.max_steps }
    }
}

/// Monodromy data at one spectral parameter: the matrix of fundamental-solution
/// values Y_j^{(ν−1)}(1, λ), its eigenvalues and determinant.
#[derive(Debug, Clone)]
pub struct MonodromyRecord {
    pub lambda: Complex64,
    /// nm×nm matrix with block entry (ν, j) = Y_j^{(ν−1)}(1, λ).
    pub matrix: CMat,
    pub multipliers: Vec<Complex64>,
    pub det: Complex64,
}

fn check_cap(lambda: Complex64, opts: &MonodromyOptions) -> Result<(), MonodromyError> {
    let modulus = lambda.norm();
    if modulus > opts.lambda_cap {
        return Err(MonodromyError::LambdaTooLarge { modulus, cap: opts.lambda_cap });
    }
    Ok(())
}

fn omega(n: u32, lambda: Complex64) -> f64 {
    lambda.norm().powf(1.0 / n as f64).max(1.0)
}

/// Propagator of the scaled first-order system over [x0, x1], identity start.
fn scaled_propagator(
    spec: &OperatorSpec,
    lambda: Complex64,
    x0: f64,
    x1: f64,
    opts: &MonodromyOptions,
) -> Result<CMat, MonodromyError> {
    let n = spec.n();
    let m = spec.m();
    let dim = n as usize * m;
    let om = omega(n, lambda);

    // i^n and the per-order phases i^n (−i)^{n−v}
    let i_pow_n = Complex64::new(0.0, 1.0).powu(n);
    let phases: Vec<Complex64> =
        (2..=n).map(|v| i_pow_n * Complex64::new(0.0, -1.0).powu(n - v)).collect();
    let lam_term = i_pow_n * lambda * om.powi(1 - n as i32);
    let order_scale: Vec<f64> = (2..=n).map(|v| om.powi(1 - v as i32)).collect();

    let mut qbuf = CMat::zeros(m, m);
    let spec_ref = spec;
    let rhs = move |x: f64, w: &CMat, out: &mut CMat| {
        let cols = w.cols();
        // W'_ν = ω W_{ν+1} for ν < n
        for nu in 0..n as usize - 1 {
            for r in 0..m {
                let src = w.row((nu + 1) * m + r);
                let dst = out.row_mut(nu * m + r);
                for c in 0..cols {
                    dst[c] = src[c] * om;
                }
            }
        }
        // W'_n = i^n λ ω^{1−n} W_1 − Σ_v i^n(−i)^{n−v} ω^{1−v} Q_v(x) W_{n−v+1}
        let last = (n as usize - 1) * m;
        for r in 0..m {
            let src = w.row(r);
            let dst = out.row_mut(last + r);
            for c in 0..cols {
                dst[c] = src[c] * lam_term;
            }
        }
        for (vi, v) in (2..=n).enumerate() {
            spec_ref.evaluate_coefficient_into(v, x, &mut qbuf).expect("order validated");
            let coeff = phases[vi] * order_scale[vi];
            let wblock = (n - v) as usize * m;
            for r in 0..m {
                for rr in 0..m {
                    let q = qbuf[(r, rr)];
                    if q.is_zero() {
                        continue;
                    }
                    let factor = coeff * q;
                    let src_row = w.row(wblock + rr);
                    let dst = out.row_mut(last + r);
                    for c in 0..cols {
                        dst[c] -= factor * src_row[c];
                    }
                }
            }
        }
    };

    Ok(integrate_matrix(rhs, x0, x1, CMat::identity(dim), &opts.ode())?)
}

fn segment_count(spec: &OperatorSpec, lambda: Complex64, opts: &MonodromyOptions) -> usize {
    let growth = omega(spec.n(), lambda) + 1.0;
    ((growth / opts.segment_exponent).ceil() as usize).clamp(1, 64)
}

/// Integrates the fundamental system over one period and reports the
/// monodromy matrix, its multipliers and determinant.
///
/// The period is integrated in segments sized to the solution growth; the
/// determinant is taken as the product of the segment determinants, which
/// keeps the Liouville identity verifiable (one pivoted elimination of the
/// full product loses the small pivots to the dominant growth).
pub fn fundamental_matrix(
    spec: &OperatorSpec,
    lambda: Complex64,
    opts: &MonodromyOptions,
) -> Result<MonodromyRecord, MonodromyError> {
    check_cap(lambda, opts)?;
    let segments = segment_count(spec, lambda, opts);
    let mut det = Complex64::new(1.0, 0.0);
    let mut m_w: Option<CMat> = None;
    for s in 0..segments {
        let x0 = s as f64 / segments as f64;
        let x1 = (s + 1) as f64 / segments as f64;
        let seg = scaled_propagator(spec, lambda, x0, x1, opts)?;
        det *= linalg::det(&seg);
        m_w = Some(match m_w {
            None => seg,
            Some(prev) => seg.matmul(&prev),
        });
    }
    let m_w = m_w.expect("at least one segment");
    let multipliers = linalg::eigenvalues(&m_w)?;
    // unscale: M = D⁻¹ M_w D with D = diag(ω^0 I_m, ..., ω^{n−1} I_m)
    let om = omega(spec.n(), lambda);
    let m = spec.m();
    let dim = m_w.rows();
    let mut matrix = m_w;
    for row in 0..dim {
        let nu = (row / m) as i32;
        for col in 0..dim {
            let j = (col / m) as i32;
            let scale = om.powi(j - nu);
            matrix[(row, col)] *= scale;
        }
    }
    Ok(MonodromyRecord { lambda, matrix, multipliers, det })
}

/// Floquet multipliers at λ.
pub fn multipliers(
    spec: &OperatorSpec,
    lambda: Complex64,
    opts: &MonodromyOptions,
) -> Result<Vec<Complex64>, MonodromyError> {
    Ok(fundamental_matrix(spec, lambda, opts)?.multipliers)
}

/// Characteristic-determinant evaluator at fixed λ; segment propagators are
/// integrated once and reused across t samples.
pub struct CharDetEvaluator {
    segments: Vec<CMat>,
    dim: usize,
}

impl CharDetEvaluator {
    pub fn build(
        spec: &OperatorSpec,
        lambda: Complex64,
        opts: &MonodromyOptions,
    ) -> Result<Self, MonodromyError> {
        check_cap(lambda, opts)?;
        let segments_wanted = segment_count(spec, lambda, opts);
        let dim = spec.n() as usize * spec.m();
        let mut segments = Vec::with_capacity(segments_wanted);
        for s in 0..segments_wanted {
            let x0 = s as f64 / segments_wanted as f64;
            let x1 = (s + 1) as f64 / segments_wanted as f64;
            segments.push(scaled_propagator(spec, lambda, x0, x1, opts)?);
        }
        Ok(CharDetEvaluator { segments, dim })
    }

    pub fn segment_count(&self) -> usize {
        self.segments.len()
    }

    /// det(M(λ) − z I) with z on or off the unit circle.
    pub fn det_at_z(&self, z: Complex64) -> Complex64 {
        let s = self.segments.len();
        let nm = self.dim;
        if s == 1 {
            let mut a = self.segments[0].clone();
            a.sub_scaled_identity(z);
            return linalg::det(&a);
        }
        let dim = s * nm;
        let mut b = CMat::zeros(dim, dim);
        for (si, seg) in self.segments.iter().enumerate() {
            let rb = si * nm;
            for r in 0..nm {
                for c in 0..nm {
                    b[(rb + r, si * nm + c)] = seg[(r, c)];
                }
            }
            if si + 1 < s {
                for r in 0..nm {
                    b[(rb + r, (si + 1) * nm + r)] = Complex64::new(-1.0, 0.0);
                }
            } else {
                for r in 0..nm {
                    b[(rb + r, r)] -= z;
                }
            }
        }
        linalg::det(&b)
    }

    pub fn det_at(&self, t: f64) -> Complex64 {
        self.det_at_z(Complex64::new(t.cos(), t.sin()))
    }
}

/// Δ(λ, t) = det(M(λ) − e^{it} I).
pub fn char_det(
    spec: &OperatorSpec,
    lambda: Complex64,
    t: f64,
    opts: &MonodromyOptions,
) -> Result<Complex64, MonodromyError> {
    Ok(CharDetEvaluator::build(spec, lambda, opts)?.det_at(t))
}

/// Membership verdict for a real spectral parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Membership {
    pub member: bool,
    /// min over multipliers ρ of ||ρ| − 1|.
    pub best_defect: f64,
    /// arg ρ of the best multiplier, in [0, 2π), when a member.
    pub witness_t: Option<f64>,
}

/// λ ∈ σ(T) iff some Floquet multiplier lies on the unit circle (within
/// `unimod_tol`).
pub fn spectrum_membership(
    spec: &OperatorSpec,
    lambda: f64,
    opts: &MonodromyOptions,
    unimod_tol: f64,
) -> Result<Membership, MonodromyError> {
    let record = fundamental_matrix(spec, Complex64::new(lambda, 0.0), opts)?;
    let mut best_defect = f64::INFINITY;
    let mut best = Complex64::zero();
    for &rho in &record.multipliers {
        let defect = (rho.norm() - 1.0).abs();
        if defect < best_defect {
            best_defect = defect;
            best = rho;
        }
    }
    let member = best_defect <= unimod_tol;
    let witness_t = member.then(|| {
        let arg = best.arg();
        if arg < 0.0 {
            arg + 2.0 * PI
        } else {
            arg
        }
    });
    Ok(Membership { member, best_defect, witness_t })
}

/// Secant refinement of a Bloch eigenvalue at fixed t, seeded from a Galerkin
/// value.
pub fn refine_bloch_eigenvalue(
    spec: &OperatorSpec,
    t: f64,
    seed: Complex64,
    opts: &MonodromyOptions,
) -> Result<Complex64, MonodromyError> {
    let f = |lam: Complex64| -> Result<Complex64, MonodromyError> {
        Ok(CharDetEvaluator::build(spec, lam, opts)?.det_at(t))
    };
    let h = 1e-6 * (1.0 + seed.norm());
    let mut x0 = seed;
    let mut x1 = seed + Complex64::new(h, 0.0);
    let mut f0 = f(x0)?;
    let mut f1 = f(x1)?;
    let mut best = (x0, f0.norm());
    for _ in 0..48 {
        let denom = f1 - f0;
        if denom.is_zero() {
            break;
        }
        let x2 = x1 - f1 * (x1 - x0) / denom;
        // keep the iteration from running to an unrelated root
        if (x2 - seed).norm() > 0.5 * (1.0 + seed.norm()) {
            break;
        }
        let f2 = f(x2)?;
        if f2.norm() < best.1 {
            best = (x2, f2.norm());
        }
        if (x2 - x1).norm() <= 1e-12 * (1.0 + x2.norm()) {
            return Ok(x2);
        }
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
    }
    if best.1.is_finite() && (best.0 - seed).norm() <= 0.5 * (1.0 + seed.norm()) {
        Ok(best.0)
    } else {
        Err(MonodromyError::SecantDiverged { best: best.0, residual: best.1 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coefficients::{build_spec, RawHarmonic, RawSeries};
    use crate::unperturbed::band_value;
    use alloc::vec;

    fn free_spec(n: u32) -> OperatorSpec {
        build_spec(n, 1, vec![], 1.0).unwrap()
    }

    #[test]
    fn cubic_free_monodromy_at_zero() {
        // y''' = 0: Y columns 1, x, x²/2
        let spec = free_spec(3);
        let rec =
            fundamental_matrix(&spec, Complex64::zero(), &MonodromyOptions::default()).unwrap();
        let expect = [
            [1.0, 1.0, 0.5],
            [0.0, 1.0, 1.0],
            [0.0, 0.0, 1.0],
        ];
        for r in 0..3 {
            for c in 0..3 {
                assert!(
                    (rec.matrix[(r, c)] - Complex64::new(expect[r][c], 0.0)).norm() < 1e-9,
                    "entry ({r},{c}) = {:?}",
                    rec.matrix[(r, c)]
                );
            }
        }
        assert!((rec.det - Complex64::new(1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn quartic_free_multipliers_at_pi_fourth() {
        // λ = π⁴: ω = ±π, ±iπ, multipliers e^{iω} = {−1, −1, e^π, e^{−π}}
        let spec = free_spec(4);
        let lam = Complex64::new(PI.powi(4), 0.0);
        let mut mults =
            multipliers(&spec, lam, &MonodromyOptions::default()).unwrap();
        mults.sort_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap());
        assert!((mults[0] - Complex64::new((-PI).exp(), 0.0)).norm() < 1e-7);
        assert!((mults[1] - Complex64::new(-1.0, 0.0)).norm() < 1e-7);
        assert!((mults[2] - Complex64::new(-1.0, 0.0)).norm() < 1e-7);
        assert!((mults[3] - Complex64::new(PI.exp(), 0.0)).norm() < 1e-6 * PI.exp());
    }

    #[test]
    fn quartic_below_spectrum_has_no_unimodular_multiplier() {
        let spec = free_spec(4);
        let mem = spectrum_membership(&spec, -10.0, &MonodromyOptions::default(), 1e-6).unwrap();
        assert!(!mem.member);
        assert!(mem.best_defect > 1e-2);
        let mem = spectrum_membership(&spec, 10.0, &MonodromyOptions::default(), 1e-6).unwrap();
        assert!(mem.member, "defect {}", mem.best_defect);
    }

    #[test]
    fn constant_coefficient_multiplier_matches_band() {
        // ε = 0 with C = 2: at λ = μ_{k}(t₀), e^{it₀} is a multiplier
        let raw = vec![RawSeries {
            order: 2,
            harmonics: vec![RawHarmonic {
                frequency: 0,
                entries: vec![vec![Complex64::new(2.0, 0.0)]],
            }],
        }];
        let spec = build_spec(3, 1, raw, 0.0).unwrap();
        let t0 = 1.3;
        let lam = band_value(3, Complex64::new(2.0, 0.0), 1, t0);
        let mults = multipliers(&spec, lam, &MonodromyOptions::default()).unwrap();
        let target = Complex64::new(t0.cos(), t0.sin());
        let best = mults.iter().map(|r| (r - target).norm()).fold(f64::INFINITY, f64::min);
        assert!(best < 1e-7, "best distance {best}");
        // and the characteristic determinant vanishes there
        let d = char_det(&spec, lam, t0, &MonodromyOptions::default()).unwrap();
        let scale = mults.iter().map(|r| 1.0 + r.norm()).product::<f64>();
        assert!(d.norm() < 1e-6 * scale);
    }

    #[test]
    fn multiple_shooting_det_matches_direct() {
        let raw = vec![RawSeries {
            order: 2,
            harmonics: vec![
                RawHarmonic { frequency: 0, entries: vec![vec![Complex64::new(1.0, 0.0)]] },
                RawHarmonic { frequency: 1, entries: vec![vec![Complex64::new(0.4, 0.0)]] },
                RawHarmonic { frequency: -1, entries: vec![vec![Complex64::new(0.4, 0.0)]] },
            ],
        }];
        let spec = build_spec(3, 1, raw, 1.0).unwrap();
        let lam = Complex64::new(35.0, 2.0);
        let opts = MonodromyOptions::default();
        let direct = CharDetEvaluator::build(&spec, lam, &opts).unwrap();
        assert_eq!(direct.segment_count(), 1);
        let split = MonodromyOptions { segment_exponent: 1.0, ..opts };
        let multi = CharDetEvaluator::build(&spec, lam, &split).unwrap();
        assert!(multi.segment_count() > 2);
        for &t in &[0.0, 0.9, 2.4, 4.4] {
            let a = direct.det_at(t);
            let b = multi.det_at(t);
            assert!((a - b).norm() < 1e-7 * (1.0 + a.norm()), "t={t}: {a} vs {b}");
        }
    }

    #[test]
    fn lambda_cap_enforced() {
        let spec = free_spec(4);
        let opts = MonodromyOptions { lambda_cap: 100.0, ..Default::default() };
        assert!(matches!(
            fundamental_matrix(&spec, Complex64::new(1e4, 0.0), &opts),
            Err(MonodromyError::LambdaTooLarge { .. })
        ));
    }
}

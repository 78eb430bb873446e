//! Fourier–Galerkin engine.
//!
//! In the basis e_s e^{i(2πk+t)x}, |k| ≤ K, the operator becomes a block
//! matrix with block entry
//!
//! ```text
//! (k, l) = δ_{kl} (2πk+t)^n I_m + Σ_{v=2}^{n} (2πl+t)^{n−v} Ĥ_v(k−l)
//! ```
//!
//! where Ĥ₂ folds the mean matrix at frequency 0 (weight 1) and the
//! oscillatory part at weight ε, and Ĥ_v = ε P̂_v for v ≥ 3. Trigonometric
//! polynomial coefficients make the matrix exactly block banded, so truncation
//! only perturbs through the window certificate, never through projection of
//! the coefficients.

mod trace;

pub use trace::{locate_crossing, trace_branches, BranchCurve, Crossing};

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float as _;

use crate::coefficients::OperatorSpec;
use crate::linalg::{self, CMat, LinalgError};

#[derive(Debug, Clone, PartialEq)]
pub enum BlochError {
    TruncationTooSmall { required: usize, actual: usize },
    /// Doubling the truncation moved in-window eigenvalues by more than the
    /// certificate tolerance; both clusterings are returned for diagnosis.
    NotConverged { coarse: Vec<(Complex64, usize)>, fine: Vec<(Complex64, usize)> },
    IsolationLost { t: f64, expected: usize, found: usize },
    MatchingAmbiguous { t: f64 },
    ClusterTooLarge { size: usize },
    Linalg(LinalgError),
}

impl fmt::Display for BlochError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BlochError::TruncationTooSmall { required, actual } => {
                write!(f, "Galerkin truncation {actual} too small, need at least {required}")
            }
            BlochError::NotConverged { coarse, fine } => write!(
                f,
                "truncation certificate failed: {} in-window clusters at K vs {} at 2K",
                coarse.len(),
                fine.len()
            ),
            BlochError::IsolationLost { t, expected, found } => {
                write!(f, "isolation lost at t={t}: expected {expected} eigenvalues in the disk, found {found}")
            }
            BlochError::MatchingAmbiguous { t } => {
                write!(f, "two branch assignments are within tolerance at t={t}")
            }
            BlochError::ClusterTooLarge { size } => {
                write!(f, "branch cluster of size {size} exceeds the assignment limit")
            }
            BlochError::Linalg(e) => write!(f, "linear algebra failure: {e}"),
        }
    }
}

impl core::error::Error for BlochError {}

impl From<LinalgError> for BlochError {
    fn from(e: LinalgError) -> Self {
        BlochError::Linalg(e)
    }
}

/// Galerkin discretization parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GalerkinConfig {
    /// Basis frequencies |k| ≤ K.
    pub truncation: usize,
    /// Certificate tolerance, relative to the window scale: doubling K must
    /// move in-window eigenvalues by less than eig_tol·(1 + max|window|).
    /// (An absolute tolerance would sit below the f64 eigenvalue floor
    /// eps·(2πK)^n whenever the window holds small eigenvalues.)
    pub eig_tol: f64,
    /// Relative clustering radius for reported eigenvalues.
    pub cluster_tol: f64,
}

impl Default for GalerkinConfig {
    fn default() -> Self {
        GalerkinConfig { truncation: 32, eig_tol: 1e-8, cluster_tol: 1e-6 }
    }
}

/// Rectangular window in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexWindow {
    pub re_lo: f64,
    pub re_hi: f64,
    pub im_lo: f64,
    pub im_hi: f64,
}

impl ComplexWindow {
    /// Window symmetric under conjugation: [re_lo, re_hi] × [−im_half, im_half].
    pub fn symmetric(re_lo: f64, re_hi: f64, im_half: f64) -> Self {
        ComplexWindow { re_lo, re_hi, im_lo: -im_half.abs(), im_hi: im_half.abs() }
    }

    pub fn around(center: f64, half_width: f64, im_half: f64) -> Self {
        Self::symmetric(center - half_width, center + half_width, im_half)
    }

    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.re_lo && z.re <= self.re_hi && z.im >= self.im_lo && z.im <= self.im_hi
    }

    pub fn is_conjugation_symmetric(&self) -> bool {
        (self.im_lo + self.im_hi).abs() <= 1e-15 * (self.im_hi - self.im_lo).abs().max(1.0)
    }

    pub fn max_abs(&self) -> f64 {
        let re = self.re_lo.abs().max(self.re_hi.abs());
        let im = self.im_lo.abs().max(self.im_hi.abs());
        re.hypot(im)
    }
}

/// Bloch eigenvalues at one quasimomentum, clustered into (value, multiplicity).
#[derive(Debug, Clone, PartialEq)]
pub struct BlochSet {
    pub t: f64,
    pub eigenvalues: Vec<(Complex64, usize)>,
    pub window: Option<ComplexWindow>,
}

impl BlochSet {
    pub fn total_multiplicity(&self) -> usize {
        self.eigenvalues.iter().map(|&(_, m)| m).sum()
    }
}

pub fn galerkin_dim(spec: &OperatorSpec, truncation: usize) -> usize {
    spec.m() * (2 * truncation + 1)
}

fn required_truncation(spec: &OperatorSpec) -> usize {
    spec.max_frequency() as usize + 4
}

/// Assembles the Galerkin matrix of dimension m(2K+1) at quasimomentum t.
pub fn assemble_galerkin(
    spec: &OperatorSpec,
    t: f64,
    config: &GalerkinConfig,
) -> Result<CMat, BlochError> {
    assemble_truncated(spec, t, config.truncation)
}

pub(crate) fn assemble_truncated(
    spec: &OperatorSpec,
    t: f64,
    truncation: usize,
) -> Result<CMat, BlochError> {
    let needed = required_truncation(spec);
    if truncation < needed {
        return Err(BlochError::TruncationTooSmall { required: needed, actual: truncation });
    }
    let m = spec.m();
    let n = spec.n() as i32;
    let kk = truncation as i64;
    let dim = galerkin_dim(spec, truncation);
    let mut a = CMat::zeros(dim, dim);
    let block = |k: i64| ((k + kk) as usize) * m;

    for l in -kk..=kk {
        let w = 2.0 * PI * l as f64 + t;
        let diag = w.powi(n);
        let base = block(l);
        for r in 0..m {
            a[(base + r, base + r)] += Complex64::new(diag, 0.0);
        }
    }
    for v in 2..=spec.n() {
        let Some(series) = spec.series(v) else { continue };
        for f in series.frequencies().collect::<Vec<_>>() {
            let h = series.harmonic(f).expect("listed frequency");
            let weight = if v == 2 && f == 0 { 1.0 } else { spec.epsilon() };
            if weight == 0.0 {
                continue;
            }
            for l in -kk..=kk {
                let k = l + f;
                if k < -kk || k > kk {
                    continue;
                }
                let w = 2.0 * PI * l as f64 + t;
                let factor = weight * w.powi(n - v as i32);
                let (rb, cb) = (block(k), block(l));
                for r in 0..m {
                    for c in 0..m {
                        a[(rb + r, cb + c)] += Complex64::new(factor * h[(r, c)], 0.0);
                    }
                }
            }
        }
    }
    Ok(a)
}

/// Raw (unclustered) Galerkin eigenvalues at truncation K.
pub fn galerkin_eigenvalues(
    spec: &OperatorSpec,
    t: f64,
    truncation: usize,
) -> Result<Vec<Complex64>, BlochError> {
    let a = assemble_truncated(spec, t, truncation)?;
    Ok(linalg::eigenvalues(&a)?)
}

/// Single-linkage clustering at relative radius `rel_tol`; cluster value is
/// the mean of its members.
pub fn cluster_eigenvalues(values: &[Complex64], rel_tol: f64) -> Vec<(Complex64, usize)> {
    let mut vals: Vec<Complex64> = values.to_vec();
    vals.sort_by(|x, y| {
        (x.re, x.im).partial_cmp(&(y.re, y.im)).unwrap_or(core::cmp::Ordering::Equal)
    });
    let mut assigned = alloc::vec![false; vals.len()];
    let mut out = Vec::new();
    for seed in 0..vals.len() {
        if assigned[seed] {
            continue;
        }
        let mut members = alloc::vec![seed];
        assigned[seed] = true;
        let mut grew = true;
        while grew {
            grew = false;
            for i in 0..vals.len() {
                if assigned[i] {
                    continue;
                }
                let near = members.iter().any(|&j| {
                    let radius = rel_tol * (1.0 + vals[j].norm().max(vals[i].norm()));
                    (vals[i] - vals[j]).norm() <= radius
                });
                if near {
                    assigned[i] = true;
                    members.push(i);
                    grew = true;
                }
            }
        }
        let sum: Complex64 = members.iter().map(|&i| vals[i]).sum();
        out.push((sum / Complex64::new(members.len() as f64, 0.0), members.len()));
    }
    out.sort_by(|x, y| {
        (x.0.re, x.0.im).partial_cmp(&(y.0.re, y.0.im)).unwrap_or(core::cmp::Ordering::Equal)
    });
    out
}

/// Window-certified Bloch eigenvalues: the truncation-K spectrum restricted to
/// `window`, certified against the 2K spectrum, reported from the finer run.
pub fn bloch_eigenvalues(
    spec: &OperatorSpec,
    t: f64,
    config: &GalerkinConfig,
    window: &ComplexWindow,
) -> Result<BlochSet, BlochError> {
    let k = config.truncation;
    // the window must stay clear of the truncation boundary
    let boundary = 2.0 * PI * (k.saturating_sub(2)) as f64;
    if boundary.powi(spec.n() as i32) < window.max_abs() {
        let needed =
            (window.max_abs().powf(1.0 / spec.n() as f64) / (2.0 * PI)).ceil() as usize + 3;
        return Err(BlochError::TruncationTooSmall { required: needed, actual: k });
    }

    let in_window = |vals: Vec<Complex64>| -> Vec<Complex64> {
        vals.into_iter().filter(|z| window.contains(*z)).collect()
    };
    let coarse_vals = in_window(galerkin_eigenvalues(spec, t, k)?);
    let fine_vals = in_window(galerkin_eigenvalues(spec, t, 2 * k)?);
    let coarse = cluster_eigenvalues(&coarse_vals, config.cluster_tol);
    let fine = cluster_eigenvalues(&fine_vals, config.cluster_tol);

    let certificate_scale = config.eig_tol * (1.0 + window.max_abs());
    // clusters matched by proximity: sorted order is unstable for conjugate
    // pairs whose real parts agree to roundoff
    let mut certified = coarse.len() == fine.len();
    if certified {
        let mut used = alloc::vec![false; fine.len()];
        'outer: for &(zc, mc) in &coarse {
            let mut best: Option<(usize, f64)> = None;
            for (i, &(zf, _)) in fine.iter().enumerate() {
                if used[i] {
                    continue;
                }
                let d = (zc - zf).norm();
                if best.map_or(true, |(_, bd)| d < bd) {
                    best = Some((i, d));
                }
            }
            match best {
                Some((i, d)) if d <= certificate_scale && fine[i].1 == mc => used[i] = true,
                _ => {
                    certified = false;
                    break 'outer;
                }
            }
        }
    }
    if !certified {
        return Err(BlochError::NotConverged { coarse, fine });
    }
    Ok(BlochSet { t, eigenvalues: fine, window: Some(*window) })
}

/// Conjugate-symmetry verdict for a Bloch set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetryReport {
    pub symmetric: bool,
    pub max_defect: f64,
}

/// Hausdorff distance between the eigenvalue multiset and its conjugate, with
/// multiplicity matching at the pairing tolerance.
pub fn conjugate_symmetry_check(set: &BlochSet, tol: f64) -> SymmetryReport {
    let items = &set.eigenvalues;
    if items.is_empty() {
        return SymmetryReport { symmetric: true, max_defect: 0.0 };
    }
    let mut max_defect: f64 = 0.0;
    let mut mult_ok = true;
    for &(z, m) in items {
        let mut best = f64::INFINITY;
        let mut best_mult = 0;
        for &(w, mw) in items {
            let d = (z - w.conj()).norm();
            if d < best {
                best = d;
                best_mult = mw;
            }
        }
        max_defect = max_defect.max(best);
        if best <= tol && best_mult != m {
            mult_ok = false;
        }
    }
    SymmetryReport { symmetric: max_defect <= tol && mult_ok, max_defect }
}

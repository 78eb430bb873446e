//! Closed-form quantities of the constant-coefficient operator: band
//! functions, collision detection, localization radii, collision and gap
//! windows on the quasimomentum axis, admissible t-intervals and the
//! three-eigenvalue diameter condition.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float as _;

use crate::calibration::Calibration;
use crate::linalg::SpectralStructure;

/// Band label (k, j): Fourier index k and index j into the spectral structure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BandIndex {
    pub k: i64,
    pub j: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WindowLabel {
    /// Collision of bands k and −k (t near 0).
    CollisionK,
    /// Collision of bands k and −k−1 (t near π).
    CollisionNegKMinus1,
    /// Predicted gap location on the λ axis.
    GapS,
}

impl fmt::Display for WindowLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WindowLabel::CollisionK => write!(f, "collision-k"),
            WindowLabel::CollisionNegKMinus1 => write!(f, "collision-(-k-1)"),
            WindowLabel::GapS => write!(f, "gap-S"),
        }
    }
}

/// Open interval (center − half_width, center + half_width) with provenance.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    pub center: f64,
    pub half_width: f64,
    pub label: WindowLabel,
    /// Real-eigenvalue pair (i, j) the window was built from (0-based).
    pub pair: (usize, usize),
    /// k for collision windows, l for gap windows.
    pub index: i64,
}

impl Window {
    pub fn lo(&self) -> f64 {
        self.center - self.half_width
    }

    pub fn hi(&self) -> f64 {
        self.center + self.half_width
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.lo() && x < self.hi()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum UnperturbedError {
    ZeroIndex,
    IndexTooSmall { k: i64, min: i64 },
    InvalidBand { j: usize },
    WindowsOverlapWholeLine { k: i64 },
}

impl fmt::Display for UnperturbedError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UnperturbedError::ZeroIndex => write!(f, "localization radius requires k != 0"),
            UnperturbedError::IndexTooSmall { k, min } => {
                write!(f, "index k={k} below minimum {min}")
            }
            UnperturbedError::InvalidBand { j } => {
                write!(f, "band index j={j} is not a real eigenvalue of the structure")
            }
            UnperturbedError::WindowsOverlapWholeLine { k } => {
                write!(f, "collision windows cover the whole period at k={k}; k is below the asymptotic regime for this width")
            }
        }
    }
}

impl core::error::Error for UnperturbedError {}

/// Band function μ_{k,j}(t) = (2πk+t)^n + μ_j (2πk+t)^{n−2}.
pub fn band_value(n: u32, mu_j: Complex64, k: i64, t: f64) -> Complex64 {
    let w = 2.0 * PI * k as f64 + t;
    Complex64::new(w.powi(n as i32), 0.0) + mu_j * w.powi(n as i32 - 2)
}

/// d/dt of the band function: n(2πk+t)^{n−1} + (n−2) μ_j (2πk+t)^{n−3}.
pub fn band_derivative(n: u32, mu_j: Complex64, k: i64, t: f64) -> Complex64 {
    let w = 2.0 * PI * k as f64 + t;
    Complex64::new(n as f64 * w.powi(n as i32 - 1), 0.0)
        + mu_j * ((n - 2) as f64 * w.powi(n as i32 - 3))
}

/// Collision test: is μ_{k,j}(t) within `tol` of another band μ_{l,i}(t)?
/// Searches |l| ≤ |k| + n, which covers every band that can reach the same
/// magnitude. Returns the colliding witnesses.
pub fn is_exceptional(
    structure: &SpectralStructure,
    n: u32,
    k: i64,
    j: usize,
    t: f64,
    tol: f64,
) -> (bool, Vec<(i64, usize)>) {
    let target = band_value(n, structure.entries[j].mu, k, t);
    let range = k.abs() + n as i64;
    let mut witnesses = Vec::new();
    for l in -range..=range {
        for (i, entry) in structure.entries.iter().enumerate() {
            if l == k && i == j {
                continue;
            }
            let other = band_value(n, entry.mu, l, t);
            if (target - other).norm() <= tol {
                witnesses.push((l, i));
            }
        }
    }
    (!witnesses.is_empty(), witnesses)
}

/// Localization radius ε_k: c(|k|^{n−3})^{1/r} for odd n,
/// c((|k|⁻¹ + q_k)|k|^{n−2})^{1/r} for even n.
pub fn localization_radius(n: u32, r: usize, c: f64, k: i64, q_k: f64) -> Result<f64, UnperturbedError> {
    if k == 0 {
        return Err(UnperturbedError::ZeroIndex);
    }
    let ka = k.abs() as f64;
    let r = r.max(1) as f64;
    let base = if n % 2 == 1 {
        ka.powi(n as i32 - 3)
    } else {
        (ka.recip() + q_k) * ka.powi(n as i32 - 2)
    };
    Ok(c * base.powf(1.0 / r))
}

/// Collision-window half-width δ_k ≍ (ε_k + ε_{−k} + ε_{−k−1}) k^{1−n}.
/// The q values belong to the respective indices.
pub fn collision_half_width(
    n: u32,
    r: usize,
    calib: &Calibration,
    k: i64,
    q_k: f64,
    q_neg_k: f64,
    q_neg_k_minus_1: f64,
) -> Result<f64, UnperturbedError> {
    if k == 0 {
        return Err(UnperturbedError::ZeroIndex);
    }
    let e1 = localization_radius(n, r, calib.c, k, q_k)?;
    let e2 = localization_radius(n, r, calib.c, -k, q_neg_k)?;
    let e3 = localization_radius(n, r, calib.c, -k - 1, q_neg_k_minus_1)?;
    Ok(calib.c_delta * (e1 + e2 + e3) * (k.abs() as f64).powi(1 - n as i32))
}

/// Branch-tracing half-interval h_k = 2 ε_k (2π(k−1))^{1−n}.
pub fn tracing_half_width(n: u32, k: i64, eps_k: f64) -> Result<f64, UnperturbedError> {
    if k < 2 {
        return Err(UnperturbedError::IndexTooSmall { k, min: 2 });
    }
    Ok(2.0 * eps_k * (2.0 * PI * (k - 1) as f64).powi(1 - n as i32))
}

fn collision_pair_windows(
    mu_i: f64,
    mu_j: f64,
    n: u32,
    k: i64,
    delta: f64,
    pair: (usize, usize),
) -> [Window; 2] {
    let nf = n as f64;
    let kf = k as f64;
    let first = (mu_i - mu_j) / (4.0 * nf * kf * PI);
    let second = PI + (mu_i - mu_j) / (2.0 * PI * nf * (2.0 * kf + nf - 1.0));
    [
        Window { center: first, half_width: delta, label: WindowLabel::CollisionK, pair, index: k },
        Window {
            center: second,
            half_width: delta,
            label: WindowLabel::CollisionNegKMinus1,
            pair,
            index: k,
        },
    ]
}

/// Collision windows for one band j (which must be a real eigenvalue), with i
/// running over all real eigenvalues: the intervals around
/// (μ_i−μ_j)/(4nkπ) and π + (μ_i−μ_j)/(2πn(2k+n−1)).
pub fn collision_windows_for_band(
    structure: &SpectralStructure,
    n: u32,
    k: i64,
    j: usize,
    delta: f64,
) -> Result<Vec<Window>, UnperturbedError> {
    if j >= structure.s {
        return Err(UnperturbedError::InvalidBand { j });
    }
    let mu_j = structure.real_eigenvalue(j);
    let mut out = Vec::with_capacity(2 * structure.s);
    for i in 0..structure.s {
        let mu_i = structure.real_eigenvalue(i);
        out.extend(collision_pair_windows(mu_i, mu_j, n, k, delta, (i, j)));
    }
    Ok(out)
}

/// Collision windows over every ordered real pair (i, j), deduplicated by
/// (label, center).
pub fn collision_windows(structure: &SpectralStructure, n: u32, k: i64, delta: f64) -> Vec<Window> {
    let mut out: Vec<Window> = Vec::new();
    for j in 0..structure.s {
        for i in 0..structure.s {
            let mu_i = structure.real_eigenvalue(i);
            let mu_j = structure.real_eigenvalue(j);
            for w in collision_pair_windows(mu_i, mu_j, n, k, delta, (i, j)) {
                let dup = out.iter().any(|v| {
                    v.label == w.label && (v.center - w.center).abs() <= 1e-14 * (1.0 + w.center.abs())
                });
                if !dup {
                    out.push(w);
                }
            }
        }
    }
    out.sort_by(|a, b| a.center.partial_cmp(&b.center).unwrap_or(core::cmp::Ordering::Equal));
    out
}

/// Subtracts the union of open intervals from a closed domain, keeping closed
/// remainders; touching endpoints stay with the remainder.
pub fn subtract_open_windows(domain: (f64, f64), windows: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let (lo, hi) = domain;
    let mut spans: Vec<(f64, f64)> = windows
        .iter()
        .filter(|&&(a, b)| b > a && b > lo && a < hi)
        .map(|&(a, b)| (a.max(lo), b.min(hi)))
        .collect();
    spans.sort_by(|x, y| x.partial_cmp(y).unwrap_or(core::cmp::Ordering::Equal));
    // merge strictly-overlapping opens; touching opens leave a point behind
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (a, b) in spans {
        match merged.last_mut() {
            Some(last) if a < last.1 => last.1 = last.1.max(b),
            _ => merged.push((a, b)),
        }
    }
    let mut out = Vec::new();
    let mut cursor = lo;
    for (a, b) in merged {
        if a >= cursor {
            out.push((cursor, a));
        }
        cursor = b;
    }
    if cursor <= hi {
        out.push((cursor, hi));
    }
    out
}

/// Admissible t-set for band j at index k: [−1, 2π−1) minus the open collision
/// windows of half-width `delta_plus_h`.
pub fn admissible_t_intervals(
    structure: &SpectralStructure,
    n: u32,
    k: i64,
    j: usize,
    delta_plus_h: f64,
) -> Result<Vec<(f64, f64)>, UnperturbedError> {
    let windows = collision_windows_for_band(structure, n, k, j, delta_plus_h)?;
    let domain = (-1.0, 2.0 * PI - 1.0);
    let spans: Vec<(f64, f64)> = windows.iter().map(|w| (w.lo(), w.hi())).collect();
    let remainder = subtract_open_windows(domain, &spans);
    let measure: f64 = remainder.iter().map(|(a, b)| b - a).sum();
    if measure <= 1e-12 * (domain.1 - domain.0) {
        return Err(UnperturbedError::WindowsOverlapWholeLine { k });
    }
    Ok(remainder)
}

/// Predicted gap windows S(l, i, j) on the λ axis, one per unordered real
/// pair: centered at (πl)^n + ((μ_i+μ_j)/2)(πl)^{n−2} with half-width γ.
pub fn gap_windows(structure: &SpectralStructure, n: u32, l: i64, gamma: f64) -> Vec<Window> {
    let mut out = Vec::new();
    let base = (PI * l as f64).powi(n as i32);
    let scale = (PI * l as f64).powi(n as i32 - 2);
    for i in 0..structure.s {
        for j in i..structure.s {
            let mid = 0.5 * (structure.real_eigenvalue(i) + structure.real_eigenvalue(j));
            out.push(Window {
                center: base + mid * scale,
                half_width: gamma,
                label: WindowLabel::GapS,
                pair: (i, j),
                index: l,
            });
        }
    }
    out
}

/// Outcome of the three-eigenvalue diameter condition.
#[derive(Debug, Clone, PartialEq)]
pub struct TripleSumCondition {
    pub holds: bool,
    /// Structure indices of a triple for which every assignment has nonzero
    /// diameter.
    pub witness: Option<[usize; 3]>,
    /// For a failing triple: the equalizing assignment (indices into the real
    /// eigenvalues) and the common sum value.
    pub violation: Option<([usize; 3], [usize; 3], f64)>,
    pub candidate_count: usize,
}

/// Checks for three distinct real odd-multiplicity eigenvalues μ_{j1}, μ_{j2},
/// μ_{j3} such that no assignment i₁,i₂,i₃ of real eigenvalues equalizes the
/// sums μ_{ju} + μ_{iu}. Exhaustive over all s³ assignments per triple.
pub fn check_triple_sum_condition(structure: &SpectralStructure) -> TripleSumCondition {
    check_triple_sum_condition_with_tol(structure, 1e-9)
}

pub fn check_triple_sum_condition_with_tol(structure: &SpectralStructure, tol_rel: f64) -> TripleSumCondition {
    let cand = &structure.real_odd;
    let count = cand.len();
    if count < 3 {
        return TripleSumCondition { holds: false, witness: None, violation: None, candidate_count: count };
    }
    let scale = (0..structure.s)
        .map(|i| structure.real_eigenvalue(i).abs())
        .fold(1.0, f64::max);
    let tol = tol_rel * scale;
    let mut first_violation = None;
    for a in 0..count {
        for b in a + 1..count {
            for c in b + 1..count {
                let triple = [cand[a], cand[b], cand[c]];
                let mus = [
                    structure.entries[triple[0]].mu.re,
                    structure.entries[triple[1]].mu.re,
                    structure.entries[triple[2]].mu.re,
                ];
                let mut equalizer = None;
                'search: for i1 in 0..structure.s {
                    for i2 in 0..structure.s {
                        for i3 in 0..structure.s {
                            let sums = [
                                mus[0] + structure.real_eigenvalue(i1),
                                mus[1] + structure.real_eigenvalue(i2),
                                mus[2] + structure.real_eigenvalue(i3),
                            ];
                            let max = sums.iter().fold(f64::MIN, |m, &x| m.max(x));
                            let min = sums.iter().fold(f64::MAX, |m, &x| m.min(x));
                            if max - min <= tol {
                                equalizer = Some(([i1, i2, i3], sums[0]));
                                break 'search;
                            }
                        }
                    }
                }
                match equalizer {
                    None => {
                        return TripleSumCondition {
                            holds: true,
                            witness: Some(triple),
                            violation: None,
                            candidate_count: count,
                        }
                    }
                    Some((assign, sum)) => {
                        if first_violation.is_none() {
                            first_violation = Some((triple, assign, sum));
                        }
                    }
                }
            }
        }
    }
    TripleSumCondition { holds: false, witness: None, violation: first_violation, candidate_count: count }
}

/// Parity bookkeeping for the count of real odd-multiplicity eigenvalues.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ParityReport {
    pub m_is_odd: bool,
    pub count_real_odd: usize,
    pub consistent: bool,
}

pub fn real_odd_parity(structure: &SpectralStructure) -> ParityReport {
    let m = structure.dim;
    let count = structure.real_odd.len();
    let consistent = if m % 2 == 1 { count >= 1 && count % 2 == 1 } else { count % 2 == 0 };
    ParityReport { m_is_odd: m % 2 == 1, count_real_odd: count, consistent }
}

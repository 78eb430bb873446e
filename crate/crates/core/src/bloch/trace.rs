//! Branch tracing: follows the eigenvalue cluster inside a localization disk
//! across a quasimomentum interval, matching branches between grid points by
//! optimal assignment.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float as _;

use crate::coefficients::OperatorSpec;
use crate::linalg::SpectralStructure;
use crate::unperturbed::{band_value, BandIndex};

use super::{assemble_truncated, BlochError, GalerkinConfig};

/// Branch curves λ_l(t), l = 1..m_j, matched across an ascending t-grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchCurve {
    pub band: BandIndex,
    pub t_grid: Vec<f64>,
    /// `values[branch][grid_index]`.
    pub values: Vec<Vec<Complex64>>,
}

impl BranchCurve {
    pub fn branch_count(&self) -> usize {
        self.values.len()
    }

    pub fn branch(&self, l: usize) -> &[Complex64] {
        &self.values[l]
    }
}

const MAX_ASSIGNMENT: usize = 8;

/// Eigenvalues inside the disk of radius `radius` around μ_{k,j}(t).
fn cluster_in_disk(
    spec: &OperatorSpec,
    structure: &SpectralStructure,
    band: BandIndex,
    t: f64,
    radius: f64,
    config: &GalerkinConfig,
) -> Result<Vec<Complex64>, BlochError> {
    let center = band_value(spec.n(), structure.entries[band.j].mu, band.k, t);
    let a = assemble_truncated(spec, t, config.truncation)?;
    let vals = crate::linalg::eigenvalues(&a)?;
    let mut inside: Vec<Complex64> =
        vals.into_iter().filter(|z| (z - center).norm() < radius).collect();
    inside.sort_by(|x, y| {
        (x.re, x.im).partial_cmp(&(y.re, y.im)).unwrap_or(core::cmp::Ordering::Equal)
    });
    Ok(inside)
}

/// Best and second-best assignments of `prev` onto `next` by total distance,
/// over all permutations (cluster sizes are tiny).
fn best_assignments(prev: &[Complex64], next: &[Complex64]) -> (Vec<usize>, f64, Vec<usize>, f64) {
    let n = prev.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<(Vec<usize>, f64)> = None;
    let mut second: Option<(Vec<usize>, f64)> = None;
    let mut counters = vec![0usize; n];
    let mut consider = |p: &[usize]| {
        let cost: f64 = (0..n).map(|i| (prev[i] - next[p[i]]).norm()).sum();
        match &mut best {
            None => best = Some((p.to_vec(), cost)),
            Some((bp, bc)) => {
                if cost < *bc {
                    second = Some((bp.clone(), *bc));
                    best = Some((p.to_vec(), cost));
                } else {
                    match &mut second {
                        None => second = Some((p.to_vec(), cost)),
                        Some((_, sc)) if cost < *sc => second = Some((p.to_vec(), cost)),
                        _ => {}
                    }
                }
            }
        }
    };
    // Heap's algorithm
    consider(&perm);
    let mut i = 0;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            consider(&perm);
            counters[i] += 1;
            i = 0;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    let (bp, bc) = best.unwrap();
    match second {
        Some((sp, sc)) => (bp, bc, sp, sc),
        None => (bp.clone(), bc, bp, bc),
    }
}

/// Traces the m_j branches of band (k, j) over [t0−h, t0+h] on `steps` grid
/// points, with adaptive refinement where consecutive matched distances exceed
/// ten times the median.
#[allow(clippy::too_many_arguments)]
pub fn trace_branches(
    spec: &OperatorSpec,
    structure: &SpectralStructure,
    band: BandIndex,
    t0: f64,
    h: f64,
    steps: usize,
    config: &GalerkinConfig,
    radius: f64,
) -> Result<BranchCurve, BlochError> {
    let m_j = structure.entries[band.j].algebraic;
    if m_j > MAX_ASSIGNMENT {
        return Err(BlochError::ClusterTooLarge { size: m_j });
    }
    let steps = steps.max(3);
    let mut ts: Vec<f64> =
        (0..steps).map(|i| t0 - h + 2.0 * h * i as f64 / (steps - 1) as f64).collect();

    let mut cache: BTreeMap<u64, Vec<Complex64>> = BTreeMap::new();
    let mut clusters_at = |t: f64| -> Result<Vec<Complex64>, BlochError> {
        if let Some(v) = cache.get(&t.to_bits()) {
            return Ok(v.clone());
        }
        let v = cluster_in_disk(spec, structure, band, t, radius, config)?;
        if v.len() != m_j {
            return Err(BlochError::IsolationLost { t, expected: m_j, found: v.len() });
        }
        cache.insert(t.to_bits(), v.clone());
        Ok(v)
    };

    for _round in 0..4 {
        // match along the current grid
        let mut matched: Vec<Vec<Complex64>> = Vec::with_capacity(ts.len());
        matched.push(clusters_at(ts[0])?);
        let mut interval_dist = Vec::with_capacity(ts.len() - 1);
        for idx in 1..ts.len() {
            let next = clusters_at(ts[idx])?;
            let prev = matched.last().unwrap();
            let (bp, bc, sp, sc) = best_assignments(prev, &next);
            let tol_abs = config.cluster_tol
                * (1.0 + band_value(spec.n(), structure.entries[band.j].mu, band.k, ts[idx]).norm());
            if sc - bc < tol_abs && sp != bp {
                // ambiguity only matters when the competing assignments place a
                // branch on materially different values
                let material = (0..m_j).any(|i| (next[bp[i]] - next[sp[i]]).norm() > tol_abs);
                if material {
                    return Err(BlochError::MatchingAmbiguous { t: ts[idx] });
                }
            }
            let reordered: Vec<Complex64> = (0..m_j).map(|i| next[bp[i]]).collect();
            let dist =
                (0..m_j).map(|i| (prev[i] - reordered[i]).norm()).fold(0.0f64, f64::max);
            interval_dist.push(dist);
            matched.push(reordered);
        }

        // adaptive refinement on unusually long jumps
        let mut sorted = interval_dist.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
        let median = sorted[sorted.len() / 2];
        let mut refine = Vec::new();
        if median > 0.0 {
            for (i, &d) in interval_dist.iter().enumerate() {
                if d > 10.0 * median {
                    refine.push(0.5 * (ts[i] + ts[i + 1]));
                }
            }
        }
        if refine.is_empty() {
            let mut values = vec![Vec::with_capacity(ts.len()); m_j];
            for point in matched {
                for (l, z) in point.into_iter().enumerate() {
                    values[l].push(z);
                }
            }
            return Ok(BranchCurve { band, t_grid: ts, values });
        }
        ts.extend(refine);
        ts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(core::cmp::Ordering::Equal));
        ts.dedup();
    }

    // final pass without further refinement
    let mut matched: Vec<Vec<Complex64>> = Vec::with_capacity(ts.len());
    matched.push(clusters_at(ts[0])?);
    for idx in 1..ts.len() {
        let next = clusters_at(ts[idx])?;
        let prev = matched.last().unwrap();
        let (bp, _, _, _) = best_assignments(prev, &next);
        matched.push((0..m_j).map(|i| next[bp[i]]).collect());
    }
    let mut values = vec![Vec::with_capacity(ts.len()); m_j];
    for point in matched {
        for (l, z) in point.into_iter().enumerate() {
            values[l].push(z);
        }
    }
    Ok(BranchCurve { band, t_grid: ts, values })
}

/// A located crossing of a branch's real part through a target level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub t: f64,
    pub value: Complex64,
    pub branch: usize,
}

/// Bisects for the first t where some branch satisfies Re λ_l(t) = target.
#[allow(clippy::too_many_arguments)]
pub fn locate_crossing(
    spec: &OperatorSpec,
    structure: &SpectralStructure,
    band: BandIndex,
    config: &GalerkinConfig,
    radius: f64,
    curve: &BranchCurve,
    target: f64,
) -> Result<Option<Crossing>, BlochError> {
    let m_j = curve.branch_count();
    for l in 0..m_j {
        let vals = curve.branch(l);
        for i in 0..vals.len() - 1 {
            let fa = vals[i].re - target;
            let fb = vals[i + 1].re - target;
            if fa == 0.0 {
                return Ok(Some(Crossing { t: curve.t_grid[i], value: vals[i], branch: l }));
            }
            if fa * fb > 0.0 {
                continue;
            }
            // bisection, re-identifying the branch value by proximity
            let mut ta = curve.t_grid[i];
            let mut tb = curve.t_grid[i + 1];
            let mut za = vals[i];
            let mut zb = vals[i + 1];
            for _ in 0..64 {
                let tm = 0.5 * (ta + tb);
                let cluster = cluster_in_disk(spec, structure, band, tm, radius, config)?;
                if cluster.len() != m_j {
                    return Err(BlochError::IsolationLost {
                        t: tm,
                        expected: m_j,
                        found: cluster.len(),
                    });
                }
                let guess = 0.5 * (za + zb);
                let zm = cluster
                    .iter()
                    .copied()
                    .min_by(|x, y| {
                        (x - guess)
                            .norm()
                            .partial_cmp(&(y - guess).norm())
                            .unwrap_or(core::cmp::Ordering::Equal)
                    })
                    .unwrap();
                let fm = zm.re - target;
                if fm == 0.0 || (tb - ta) < 1e-15 * (1.0 + tm.abs()) {
                    return Ok(Some(Crossing { t: tm, value: zm, branch: l }));
                }
                if fa * fm < 0.0 {
                    tb = tm;
                    zb = zm;
                } else {
                    ta = tm;
                    za = zm;
                }
            }
            let t = 0.5 * (ta + tb);
            return Ok(Some(Crossing { t, value: 0.5 * (za + zb), branch: l }));
        }
    }
    Ok(None)
}

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::eig::eigenvalues;
use super::svd::numerical_rank;
use super::{LinalgError, RMat};

/// One distinct eigenvalue of the mean matrix with its Jordan data.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralEntry {
    pub mu: Complex64,
    /// Algebraic multiplicity m_j.
    pub algebraic: usize,
    /// Geometric multiplicity l_j.
    pub geometric: usize,
    /// Jordan block sizes r_{j,1} >= r_{j,2} >= ..., summing to `algebraic`.
    pub partial_multiplicities: Vec<usize>,
    pub is_real: bool,
}

/// Jordan-type spectral data of a real matrix: distinct eigenvalues with
/// algebraic/geometric multiplicities and partial multiplicities. Real
/// eigenvalues come first, sorted ascending; nonreal ones follow in conjugate
/// pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralStructure {
    pub entries: Vec<SpectralEntry>,
    /// Number of distinct real eigenvalues (entries[0..s] are real).
    pub s: usize,
    /// Maximum partial multiplicity over all entries.
    pub r: usize,
    /// Indices of entries with a real eigenvalue of odd algebraic multiplicity.
    pub real_odd: Vec<usize>,
    /// Dimension of the underlying matrix.
    pub dim: usize,
}

impl SpectralStructure {
    /// Real eigenvalue number `i` (0-based, i < s).
    pub fn real_eigenvalue(&self, i: usize) -> f64 {
        self.entries[i].mu.re
    }

    pub fn total_multiplicity(&self) -> usize {
        self.entries.iter().map(|e| e.algebraic).sum()
    }
}

/// Clusters the eigenvalues of the real matrix `c` at relative tolerance `tol`
/// and derives multiplicities from rank sequences of powers of `C - mu I`.
pub fn spectral_structure(c: &RMat, tol: f64) -> Result<SpectralStructure, LinalgError> {
    if !c.is_square() {
        return Err(LinalgError::NotSquare { rows: c.rows(), cols: c.cols() });
    }
    let m = c.rows();
    let a = c.to_complex();
    let mut vals = eigenvalues(&a)?;
    vals.sort_by(|x, y| {
        (x.re, x.im).partial_cmp(&(y.re, y.im)).unwrap_or(core::cmp::Ordering::Equal)
    });

    // single-linkage clustering at radius tol·(1+|mu|)
    let mut assigned = vec![false; m];
    let mut clusters: Vec<Vec<Complex64>> = Vec::new();
    for seed in 0..m {
        if assigned[seed] {
            continue;
        }
        let mut members = vec![seed];
        assigned[seed] = true;
        let mut grew = true;
        while grew {
            grew = false;
            for i in 0..m {
                if assigned[i] {
                    continue;
                }
                let near = members.iter().any(|&j| {
                    let radius = tol * (1.0 + vals[j].norm().max(vals[i].norm()));
                    (vals[i] - vals[j]).norm() <= radius
                });
                if near {
                    assigned[i] = true;
                    members.push(i);
                    grew = true;
                }
            }
        }
        clusters.push(members.into_iter().map(|i| vals[i]).collect());
    }

    // centers; snap near-real ones onto the axis
    let mut centers: Vec<Complex64> = clusters
        .iter()
        .map(|cl| cl.iter().sum::<Complex64>() / Complex64::new(cl.len() as f64, 0.0))
        .collect();
    for z in &mut centers {
        if z.im.abs() <= tol * (1.0 + z.norm()) {
            z.im = 0.0;
        }
    }

    for i in 0..centers.len() {
        for j in i + 1..centers.len() {
            let gap = (centers[i] - centers[j]).norm();
            let scale = 1.0 + centers[i].norm().max(centers[j].norm());
            if gap < 10.0 * tol * scale {
                return Err(LinalgError::ClusterAmbiguity {
                    detail: "two clusters closer than 10x the cluster radius",
                });
            }
        }
    }

    // conjugate pairing for nonreal clusters
    for i in 0..centers.len() {
        if centers[i].im == 0.0 {
            continue;
        }
        let conj = centers[i].conj();
        let partner = centers
            .iter()
            .position(|&z| (z - conj).norm() <= 10.0 * tol * (1.0 + conj.norm()) && z.im != 0.0);
        match partner {
            Some(p) if clusters[p].len() == clusters[i].len() => {}
            _ => {
                return Err(LinalgError::ClusterAmbiguity {
                    detail: "nonreal eigenvalue without a matching conjugate cluster",
                })
            }
        }
    }

    let mut order: Vec<usize> = (0..centers.len()).collect();
    // reals ascending first, then nonreal by (re, |im|) with +im before −im;
    // members of a conjugate pair agree in (re, |im|) only up to roundoff, so
    // those comparisons are tolerant (clusters are ≥ 10·tol apart)
    order.sort_by(|&i, &j| {
        use core::cmp::Ordering;
        let a = centers[i];
        let b = centers[j];
        match (a.im == 0.0, b.im == 0.0) {
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let scale = tol * (1.0 + a.norm().max(b.norm()));
        if (a.re - b.re).abs() > scale {
            return a.re.partial_cmp(&b.re).unwrap_or(Ordering::Equal);
        }
        if (a.im.abs() - b.im.abs()).abs() > scale {
            return a.im.abs().partial_cmp(&b.im.abs()).unwrap_or(Ordering::Equal);
        }
        b.im.partial_cmp(&a.im).unwrap_or(Ordering::Equal)
    });

    let mut entries = Vec::with_capacity(order.len());
    for &ci in &order {
        let mu = centers[ci];
        let algebraic = clusters[ci].len();
        // rank sequence of (C - mu I)^q
        let mut shifted = a.clone();
        shifted.sub_scaled_identity(mu);
        let mut power = shifted.clone();
        let mut ranks = vec![m];
        for _ in 0..algebraic {
            ranks.push(numerical_rank(&power, tol));
            power = power.matmul(&shifted);
        }
        let geometric = m - ranks[1];
        let blocks_ge = |q: usize| -> isize {
            if q > algebraic {
                0
            } else {
                ranks[q - 1] as isize - ranks[q] as isize
            }
        };
        let mut partials = Vec::new();
        for q in (1..=algebraic).rev() {
            let exactly = blocks_ge(q) - blocks_ge(q + 1);
            for _ in 0..exactly.max(0) {
                partials.push(q);
            }
        }
        let sum: usize = partials.iter().sum();
        if sum != algebraic || partials.len() != geometric {
            return Err(LinalgError::ClusterAmbiguity {
                detail: "rank sequence inconsistent with cluster multiplicity",
            });
        }
        entries.push(SpectralEntry {
            mu,
            algebraic,
            geometric,
            partial_multiplicities: partials,
            is_real: mu.im == 0.0,
        });
    }

    let s = entries.iter().take_while(|e| e.is_real).count();
    let r = entries
        .iter()
        .flat_map(|e| e.partial_multiplicities.iter().copied())
        .max()
        .unwrap_or(0);
    let real_odd = entries
        .iter()
        .enumerate()
        .filter(|(_, e)| e.is_real && e.algebraic % 2 == 1)
        .map(|(i, _)| i)
        .collect();

    Ok(SpectralStructure { entries, s, r, real_odd, dim: m })
}

use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float as _;

use super::CMat;

/// Singular values by one-sided Jacobi, sorted descending.
///
/// Accurate for the small matrices used in rank decisions; Jordan-structure
/// detection needs singular values rather than pivot magnitudes.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    let mut w = if a.rows() >= a.cols() { a.clone() } else { a.conj_transpose() };
    let rows = w.rows();
    let n = w.cols();
    let eps = f64::EPSILON;
    // rotations are unitary on columns, so the Frobenius norm is invariant;
    // columns below eps * that scale are numerically zero and never rotated
    let floor = {
        let f = w.frobenius() * eps;
        f * f
    };
    let mut rotated = true;
    let mut sweeps = 0;
    while rotated && sweeps < 64 {
        rotated = false;
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = Complex64::new(0.0, 0.0);
                for i in 0..rows {
                    let cp = w[(i, p)];
                    let cq = w[(i, q)];
                    app += cp.norm_sqr();
                    aqq += cq.norm_sqr();
                    apq += cp.conj() * cq;
                }
                let alpha = apq.norm();
                if alpha <= eps * (app * aqq).sqrt() || app <= floor || aqq <= floor {
                    continue;
                }
                rotated = true;
                let phase = apq / Complex64::new(alpha, 0.0);
                let tau = (aqq - app) / (2.0 * alpha);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let sp = s * phase.conj();
                let sq = s * phase;
                for i in 0..rows {
                    let cp = w[(i, p)];
                    let cq = w[(i, q)];
                    w[(i, p)] = c * cp - sp * cq;
                    w[(i, q)] = sq * cp + c * cq;
                }
            }
        }
    }
    let mut sigma: Vec<f64> =
        (0..n).map(|j| (0..rows).map(|i| w[(i, j)].norm_sqr()).sum::<f64>().sqrt()).collect();
    sigma.sort_by(|x, y| y.partial_cmp(x).unwrap_or(core::cmp::Ordering::Equal));
    sigma
}

/// Count of singular values above `tol · sigma_max`.
pub fn numerical_rank(a: &CMat, tol: f64) -> usize {
    let sigma = singular_values(a);
    match sigma.first() {
        None | Some(&0.0) => 0,
        Some(&smax) => sigma.iter().filter(|&&s| s > tol * smax).count(),
    }
}

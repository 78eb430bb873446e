use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::{Float as _, One, Zero};

use super::lu::lu_factor;
use super::{CMat, LinalgError};

#[derive(Debug, Clone)]
pub struct EigOptions {
    /// Hard cap on the matrix dimension.
    pub max_dim: usize,
    /// Residual target for eigenvectors, relative to the matrix scale.
    pub backward_tol: f64,
}

impl Default for EigOptions {
    fn default() -> Self {
        EigOptions { max_dim: 4096, backward_tol: 1e-10 }
    }
}

#[derive(Debug, Clone)]
pub struct Eig {
    /// Eigenvalues repeated by algebraic multiplicity, sorted by (re, im).
    pub values: Vec<Complex64>,
    /// Unit right eigenvectors as columns, aligned with `values`.
    pub vectors: Option<CMat>,
}

/// Eigenvalues only, with default options.
pub fn eigenvalues(a: &CMat) -> Result<Vec<Complex64>, LinalgError> {
    Ok(eig(a, false, &EigOptions::default())?.values)
}

/// Dense complex eigensolver: Householder reduction to Hessenberg form
/// followed by explicit single-shift QR with Givens rotations.
pub fn eig(a: &CMat, want_vectors: bool, opts: &EigOptions) -> Result<Eig, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let n = a.rows();
    if n > opts.max_dim {
        return Err(LinalgError::DimensionCap { dim: n, cap: opts.max_dim });
    }
    if n == 0 {
        return Ok(Eig { values: Vec::new(), vectors: want_vectors.then(|| CMat::zeros(0, 0)) });
    }

    let mut h = a.clone();
    hessenberg(&mut h);
    let mut values = qr_eigenvalues(&mut h)?;
    values.sort_by(|x, y| {
        (x.re, x.im).partial_cmp(&(y.re, y.im)).unwrap_or(core::cmp::Ordering::Equal)
    });

    let vectors = if want_vectors {
        let mut v = CMat::zeros(n, n);
        for (j, &lambda) in values.iter().enumerate() {
            let col = inverse_iteration(a, lambda, j as u64);
            for i in 0..n {
                v[(i, j)] = col[i];
            }
        }
        Some(v)
    } else {
        None
    };

    Ok(Eig { values, vectors })
}

/// In-place Householder reduction to upper Hessenberg form.
fn hessenberg(h: &mut CMat) {
    let n = h.rows();
    if n < 3 {
        return;
    }
    let mut v = vec![Complex64::zero(); n];
    for k in 0..n - 2 {
        let mut norm_sq = 0.0;
        for i in k + 1..n {
            norm_sq += h[(i, k)].norm_sqr();
        }
        let norm_x = norm_sq.sqrt();
        if norm_x == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let phase =
            if x0.norm() == 0.0 { Complex64::one() } else { x0 / Complex64::new(x0.norm(), 0.0) };
        let alpha = -phase * norm_x;
        // reflector v = x - alpha e1
        v[k + 1] = x0 - alpha;
        for i in k + 2..n {
            v[i] = h[(i, k)];
        }
        let vhv: f64 = (k + 1..n).map(|i| v[i].norm_sqr()).sum();
        if vhv == 0.0 {
            continue;
        }
        let tau = 2.0 / vhv;
        // left: H <- (I - tau v v^H) H on rows k+1.., cols k..
        for j in k..n {
            let mut s = Complex64::zero();
            for i in k + 1..n {
                s += v[i].conj() * h[(i, j)];
            }
            s *= tau;
            for i in k + 1..n {
                h[(i, j)] -= s * v[i];
            }
        }
        // right: H <- H (I - tau v v^H) on cols k+1.., all rows
        for i in 0..n {
            let mut s = Complex64::zero();
            let row = h.row(i);
            for j in k + 1..n {
                s += row[j] * v[j];
            }
            s *= tau;
            let row = h.row_mut(i);
            for j in k + 1..n {
                row[j] -= s * v[j].conj();
            }
        }
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = Complex64::zero();
        }
    }
}

/// Givens rotation: returns (c, s, r) with c real such that
/// [c, s; -conj(s), c] · [a; b] = [r; 0].
#[inline]
fn zrotg(a: Complex64, b: Complex64) -> (f64, Complex64, Complex64) {
    let an = a.norm();
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, Complex64::zero(), a);
    }
    if an == 0.0 {
        return (0.0, Complex64::one(), b);
    }
    let nrm = an.hypot(bn);
    let c = an / nrm;
    let phase = a / Complex64::new(an, 0.0);
    let s = phase * b.conj() / Complex64::new(nrm, 0.0);
    let r = phase * nrm;
    (c, s, r)
}

/// Eigenvalues of a scaled 2x2 block.
fn eig2(a00: Complex64, a01: Complex64, a10: Complex64, a11: Complex64) -> (Complex64, Complex64) {
    let s = a00.norm() + a01.norm() + a10.norm() + a11.norm();
    if s == 0.0 {
        return (Complex64::zero(), Complex64::zero());
    }
    let inv = 1.0 / s;
    let (a, b, c, d) = (a00 * inv, a01 * inv, a10 * inv, a11 * inv);
    let tr2 = (a + d) * 0.5;
    let disc = (a - tr2) * (a - tr2) + b * c;
    let rt = disc.sqrt();
    ((tr2 + rt) * s, (tr2 - rt) * s)
}

fn qr_eigenvalues(h: &mut CMat) -> Result<Vec<Complex64>, LinalgError> {
    let n = h.rows();
    let mut vals = vec![Complex64::zero(); n];
    let eps = f64::EPSILON;
    let hnorm = h.frobenius().max(f64::MIN_POSITIVE);
    let budget = 40 * n.max(4);
    let mut total = 0usize;
    let mut since_deflate = 0usize;
    let mut ihi = n;

    while ihi > 0 {
        // start of the lowest unreduced block ending at ihi-1
        let mut lo = ihi - 1;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let mut tst = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if tst == 0.0 {
                tst = hnorm;
            }
            if sub <= eps * tst {
                h[(lo, lo - 1)] = Complex64::zero();
                break;
            }
            lo -= 1;
        }

        if lo == ihi - 1 {
            vals[lo] = h[(lo, lo)];
            ihi -= 1;
            since_deflate = 0;
            continue;
        }
        if lo == ihi - 2 {
            let (e1, e2) = eig2(h[(lo, lo)], h[(lo, lo + 1)], h[(lo + 1, lo)], h[(lo + 1, lo + 1)]);
            vals[lo] = e1;
            vals[lo + 1] = e2;
            ihi -= 2;
            since_deflate = 0;
            continue;
        }

        total += 1;
        since_deflate += 1;
        if total > budget {
            return Err(LinalgError::NoConvergence { dim: n });
        }

        let shift = if since_deflate % 16 == 15 {
            // exceptional shift breaks symmetric stalls
            let mut extra = h[(ihi - 1, ihi - 2)].norm();
            if ihi >= 3 && ihi - 3 >= lo {
                extra += h[(ihi - 2, ihi - 3)].norm();
            }
            h[(ihi - 1, ihi - 1)] + Complex64::new(0.75 * extra, 0.0)
        } else {
            let (e1, e2) = eig2(
                h[(ihi - 2, ihi - 2)],
                h[(ihi - 2, ihi - 1)],
                h[(ihi - 1, ihi - 2)],
                h[(ihi - 1, ihi - 1)],
            );
            let d = h[(ihi - 1, ihi - 1)];
            if (e1 - d).norm() <= (e2 - d).norm() {
                e1
            } else {
                e2
            }
        };

        qr_sweep(h, lo, ihi, shift);
    }

    Ok(vals)
}

/// One explicit-shift QR step on the active block [lo, ihi).
fn qr_sweep(h: &mut CMat, lo: usize, ihi: usize, shift: Complex64) {
    for i in lo..ihi {
        h[(i, i)] -= shift;
    }
    let mut rots: Vec<(f64, Complex64)> = Vec::with_capacity(ihi - lo);
    for i in lo..ihi - 1 {
        let (c, s, r) = zrotg(h[(i, i)], h[(i + 1, i)]);
        h[(i, i)] = r;
        h[(i + 1, i)] = Complex64::zero();
        for j in i + 1..ihi {
            let a = h[(i, j)];
            let b = h[(i + 1, j)];
            h[(i, j)] = c * a + s * b;
            h[(i + 1, j)] = -s.conj() * a + c * b;
        }
        rots.push((c, s));
    }
    for (idx, &(c, s)) in rots.iter().enumerate() {
        let i = lo + idx;
        for row in lo..=i + 1 {
            let a = h[(row, i)];
            let b = h[(row, i + 1)];
            h[(row, i)] = c * a + s.conj() * b;
            h[(row, i + 1)] = -s * a + c * b;
        }
    }
    for i in lo..ihi {
        h[(i, i)] += shift;
    }
}

/// Deterministic pseudo-random unit start vector for inverse iteration.
fn start_vector(n: usize, seed: u64) -> Vec<Complex64> {
    let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((state >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
    };
    (0..n).map(|_| Complex64::new(next(), next())).collect()
}

fn normalize(v: &mut [Complex64]) {
    let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if nrm > 0.0 {
        let inv = 1.0 / nrm;
        for z in v.iter_mut() {
            *z *= inv;
        }
    }
}

/// Two-sided Rayleigh-quotient polish of an approximate simple eigenvalue.
///
/// QR eigenvalues carry absolute noise ~eps·‖A‖; for an eigenvalue far below
/// the matrix norm (a windowed Galerkin value against the truncation-boundary
/// entries) inverse iteration for the right AND left vectors plus the
/// Ostrowski quotient y^H A x / y^H x restores accuracy at the eigenvalue's
/// own scale (the one-sided quotient is only linearly accurate when A is
/// non-normal).
pub fn rayleigh_refine(a: &CMat, seed: Complex64, rounds: usize) -> Complex64 {
    let n = a.rows();
    let mut lambda = seed;
    let mut x = start_vector(n, 0x5eed);
    let mut y = start_vector(n, 0xfeed);
    normalize(&mut x);
    normalize(&mut y);
    for _ in 0..rounds.max(1) {
        let scale = a.max_abs().max(1.0);
        let mut shifted = a.clone();
        shifted.sub_scaled_identity(lambda);
        let factors = lu_factor(shifted, f64::EPSILON * scale * n as f64);
        factors.solve_in_place(&mut x);
        normalize(&mut x);
        factors.solve_adjoint_in_place(&mut y);
        normalize(&mut y);
        // y^H A x / y^H x
        let mut num = Complex64::zero();
        let mut den = Complex64::zero();
        for i in 0..n {
            let mut s = Complex64::zero();
            let row = a.row(i);
            for (j, &xj) in x.iter().enumerate() {
                s += row[j] * xj;
            }
            num += y[i].conj() * s;
            den += y[i].conj() * x[i];
        }
        if den.norm() == 0.0 {
            break;
        }
        lambda = num / den;
    }
    lambda
}

fn inverse_iteration(a: &CMat, lambda: Complex64, seed: u64) -> Vec<Complex64> {
    let n = a.rows();
    let scale = a.max_abs().max(1.0);
    let mut shifted = a.clone();
    shifted.sub_scaled_identity(lambda);
    let factors = lu_factor(shifted, f64::EPSILON * scale * n as f64);
    let mut x = start_vector(n, seed);
    normalize(&mut x);
    for _ in 0..3 {
        factors.solve_in_place(&mut x);
        normalize(&mut x);
    }
    x
}

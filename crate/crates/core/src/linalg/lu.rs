use alloc::vec::Vec;

use num_complex::Complex64;

use super::CMat;

/// LU factorization with partial pivoting, stored in place.
pub struct LuFactors {
    lu: CMat,
    piv: Vec<usize>,
    swaps: usize,
}

/// Factor `a`. `pivot_floor`, when positive, replaces exactly-vanishing pivots
/// so the factors stay usable for inverse iteration on singular shifts.
pub fn lu_factor(mut a: CMat, pivot_floor: f64) -> LuFactors {
    assert!(a.is_square(), "lu_factor requires a square matrix");
    let n = a.rows();
    let mut piv = Vec::with_capacity(n);
    let mut swaps = 0usize;
    for k in 0..n {
        let mut p = k;
        let mut best = a[(k, k)].norm();
        for i in k + 1..n {
            let v = a[(i, k)].norm();
            if v > best {
                best = v;
                p = i;
            }
        }
        piv.push(p);
        if p != k {
            swaps += 1;
            for j in 0..n {
                let t = a[(k, j)];
                a[(k, j)] = a[(p, j)];
                a[(p, j)] = t;
            }
        }
        let mut pivot = a[(k, k)];
        if pivot.norm() == 0.0 && pivot_floor > 0.0 {
            pivot = Complex64::new(pivot_floor, 0.0);
            a[(k, k)] = pivot;
        }
        if pivot.norm() == 0.0 {
            continue;
        }
        for i in k + 1..n {
            let m = a[(i, k)] / pivot;
            a[(i, k)] = m;
            if m != Complex64::new(0.0, 0.0) {
                for j in k + 1..n {
                    let s = a[(k, j)];
                    a[(i, j)] -= m * s;
                }
            }
        }
    }
    LuFactors { lu: a, piv, swaps }
}

impl LuFactors {
    pub fn det(&self) -> Complex64 {
        let n = self.lu.rows();
        let mut d = Complex64::new(if self.swaps % 2 == 0 { 1.0 } else { -1.0 }, 0.0);
        for i in 0..n {
            d *= self.lu[(i, i)];
        }
        d
    }

    /// Solves the adjoint system `A^H y = b` in place using the same factors:
    /// with P A = L U, one has A^H = U^H L^H P, so forward-solve with U^H,
    /// back-solve with L^H, and undo the row swaps in reverse order.
    pub fn solve_adjoint_in_place(&self, b: &mut [Complex64]) {
        let n = self.lu.rows();
        assert_eq!(b.len(), n);
        // U^H z = b (U^H is lower triangular with diagonal conj(u_kk))
        for k in 0..n {
            let mut s = b[k];
            for i in 0..k {
                s -= self.lu[(i, k)].conj() * b[i];
            }
            let pivot = self.lu[(k, k)].conj();
            b[k] = if pivot.norm() == 0.0 { Complex64::new(0.0, 0.0) } else { s / pivot };
        }
        // L^H w = z (upper triangular, unit diagonal)
        for k in (0..n).rev() {
            let mut s = b[k];
            for i in k + 1..n {
                s -= self.lu[(i, k)].conj() * b[i];
            }
            b[k] = s;
        }
        // y = P^T w: undo the swaps in reverse
        for k in (0..n).rev() {
            let p = self.piv[k];
            if p != k {
                b.swap(k, p);
            }
        }
    }

    /// Solves `A x = b` in place.
    pub fn solve_in_place(&self, b: &mut [Complex64]) {
        let n = self.lu.rows();
        assert_eq!(b.len(), n);
        for k in 0..n {
            let p = self.piv[k];
            if p != k {
                b.swap(k, p);
            }
            let bk = b[k];
            if bk != Complex64::new(0.0, 0.0) {
                for i in k + 1..n {
                    let m = self.lu[(i, k)];
                    b[i] -= m * bk;
                }
            }
        }
        for k in (0..n).rev() {
            let mut s = b[k];
            for j in k + 1..n {
                s -= self.lu[(k, j)] * b[j];
            }
            let pivot = self.lu[(k, k)];
            b[k] = if pivot.norm() == 0.0 { Complex64::new(0.0, 0.0) } else { s / pivot };
        }
    }
}

/// Determinant via pivoted elimination.
pub fn det(a: &CMat) -> Complex64 {
    lu_factor(a.clone(), 0.0).det()
}

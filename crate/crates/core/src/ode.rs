//! Adaptive Dormand–Prince 5(4) integration for complex matrix states, with
//! PI step-size control and first-same-as-last reuse.

use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::{Float as _, Zero};

use crate::linalg::CMat;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions { rel_tol: 1e-10, abs_tol: 1e-10, max_steps: 1_000_000 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum OdeError {
    StepSizeUnderflow { x: f64 },
    ToleranceNotMet { x: f64 },
}

impl fmt::Display for OdeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OdeError::StepSizeUnderflow { x } => write!(f, "step size underflow at x={x}"),
            OdeError::ToleranceNotMet { x } => {
                write!(f, "step budget exhausted before x={x} reached the endpoint")
            }
        }
    }
}

impl core::error::Error for OdeError {}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];

const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];

/// 5th-order weights coincide with the last row of A (FSAL).
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrates y' = f(x, y) for a matrix-valued state from `x0` to `x1`.
pub fn integrate_matrix<F>(
    mut rhs: F,
    x0: f64,
    x1: f64,
    y0: CMat,
    opts: &OdeOptions,
) -> Result<CMat, OdeError>
where
    F: FnMut(f64, &CMat, &mut CMat),
{
    let span = x1 - x0;
    if span == 0.0 {
        return Ok(y0);
    }
    let dir = span.signum();
    let rows = y0.rows();
    let cols = y0.cols();

    let mut y = y0;
    let mut x = x0;
    let mut k: [CMat; 7] = core::array::from_fn(|_| CMat::zeros(rows, cols));
    let mut ytmp = CMat::zeros(rows, cols);
    let mut ynew = CMat::zeros(rows, cols);

    rhs(x, &y, &mut k[0]);

    // initial step from the local derivative scale
    let f_scale = k[0].frobenius() / y.frobenius().max(1.0);
    let mut h = (span.abs() / (2.0 + f_scale)).min(0.1 * span.abs()).max(1e-8 * span.abs()) * dir;

    let mut err_prev: f64 = 1.0;
    let h_floor = 1e-13 * span.abs();

    for _step in 0..opts.max_steps {
        let remaining = (x1 - x) * dir;
        if remaining <= 1e-14 * span.abs() {
            return Ok(y);
        }
        if remaining < h.abs() {
            h = x1 - x;
        } else if h.abs() < h_floor {
            return Err(OdeError::StepSizeUnderflow { x });
        }

        for stage in 1..7 {
            for (i, v) in ytmp.data_mut().iter_mut().enumerate() {
                let mut acc = Complex64::zero();
                for (j, kj) in k.iter().enumerate().take(stage) {
                    let a = A[stage][j];
                    if a != 0.0 {
                        acc += kj.data()[i] * a;
                    }
                }
                *v = y.data()[i] + acc * h;
            }
            if stage < 6 {
                let (before, rest) = k.split_at_mut(stage);
                let _ = before;
                rhs(x + C[stage] * h, &ytmp, &mut rest[0]);
            } else {
                // stage 6 evaluates at the 5th-order solution point
                ynew.data_mut().copy_from_slice(ytmp.data());
                rhs(x + h, &ynew, &mut k[6]);
            }
        }

        // scaled RMS error over entries
        let mut err_acc = 0.0;
        let count = (rows * cols) as f64;
        for i in 0..rows * cols {
            let mut e = Complex64::zero();
            for (j, kj) in k.iter().enumerate() {
                if E[j] != 0.0 {
                    e += kj.data()[i] * E[j];
                }
            }
            let e = e.norm() * h.abs();
            let scale =
                opts.abs_tol + opts.rel_tol * y.data()[i].norm().max(ynew.data()[i].norm());
            err_acc += (e / scale) * (e / scale);
        }
        let err = (err_acc / count).sqrt();

        if err <= 1.0 {
            x += h;
            core::mem::swap(&mut y, &mut ynew);
            // FSAL: k7 becomes k1 of the next step
            let (head, tail) = k.split_at_mut(6);
            core::mem::swap(&mut head[0], &mut tail[0]);
            let fac = 0.9 * err.max(1e-10).powf(-0.14) * err_prev.max(1e-10).powf(0.08);
            h *= fac.clamp(0.2, 5.0);
            err_prev = err.max(1e-10);
        } else {
            let fac = 0.9 * err.powf(-0.2);
            h *= fac.clamp(0.1, 0.9);
        }
    }
    Err(OdeError::ToleranceNotMet { x })
}

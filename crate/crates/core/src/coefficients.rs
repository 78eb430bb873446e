//! Periodic PT-symmetric matrix coefficients as trigonometric polynomials.
//!
//! A coefficient of order v is stored as a finite map l ↦ H_l of real m×m
//! harmonic matrices, representing P_v(x) = Σ_l H_l e^{2πilx}. Realness of
//! every H_l is exactly the PT condition p(−x) = conj(p(x)) for 1-periodic
//! coefficients, so validation enforces it entry by entry.
//!
//! The homotopy weight ε is applied on evaluation, never stored into the
//! harmonics: the effective second-order coefficient is C + ε(P₂(x) − C) with
//! C the mean matrix, and ε·P_v(x) for v ≥ 3. One spec therefore serves the
//! whole operator family from the constant-coefficient one (ε = 0) up to the
//! full operator (ε = 1).

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::f64::consts::PI;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float as _;

use crate::linalg::{CMat, RMat};

/// Default bound on harmonic frequencies; keeps Galerkin bands explicit.
pub const DEFAULT_MAX_FREQUENCY: i64 = 32;

#[derive(Debug, Clone, PartialEq)]
pub enum SpecError {
    OrderTooLow { n: u32 },
    InvalidDimension { m: usize },
    EpsilonOutOfRange { epsilon: f64 },
    OrderOutOfRange { order: u32, n: u32 },
    DuplicateOrder { order: u32 },
    DimensionMismatch { order: u32, frequency: i64, expected: usize, rows: usize, cols: usize },
    NotPTSymmetric { order: u32, frequency: i64, row: usize, col: usize },
    FrequencyTooLarge { frequency: i64, max: i64 },
}

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecError::OrderTooLow { n } => write!(f, "operator order must exceed 2, got {n}"),
            SpecError::InvalidDimension { m } => write!(f, "matrix dimension must be >= 1, got {m}"),
            SpecError::EpsilonOutOfRange { epsilon } => {
                write!(f, "epsilon must lie in [0, 1], got {epsilon}")
            }
            SpecError::OrderOutOfRange { order, n } => {
                write!(f, "coefficient order {order} outside 2..={n}")
            }
            SpecError::DuplicateOrder { order } => {
                write!(f, "coefficient order {order} listed twice")
            }
            SpecError::DimensionMismatch { order, frequency, expected, rows, cols } => write!(
                f,
                "harmonic l={frequency} of P_{order} is {rows}x{cols}, expected {expected}x{expected}"
            ),
            SpecError::NotPTSymmetric { order, frequency, row, col } => write!(
                f,
                "harmonic l={frequency} of P_{order} has a nonzero imaginary part at ({row},{col}); PT symmetry requires real harmonics"
            ),
            SpecError::FrequencyTooLarge { frequency, max } => {
                write!(f, "harmonic frequency {frequency} exceeds the configured bound {max}")
            }
        }
    }
}

impl core::error::Error for SpecError {}

/// Raw harmonic as provided by a caller: entries may be complex, and are
/// rejected unless exactly real.
#[derive(Debug, Clone)]
pub struct RawHarmonic {
    pub frequency: i64,
    pub entries: Vec<Vec<Complex64>>,
}

#[derive(Debug, Clone)]
pub struct RawSeries {
    pub order: u32,
    pub harmonics: Vec<RawHarmonic>,
}

/// Validated trigonometric-polynomial coefficient of one derivative order.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierMatrixSeries {
    order: u32,
    harmonics: BTreeMap<i64, RMat>,
}

impl FourierMatrixSeries {
    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn harmonic(&self, l: i64) -> Option<&RMat> {
        self.harmonics.get(&l)
    }

    pub fn frequencies(&self) -> impl Iterator<Item = i64> + '_ {
        self.harmonics.keys().copied()
    }

    pub fn max_frequency(&self) -> i64 {
        self.harmonics.keys().map(|l| l.abs()).max().unwrap_or(0)
    }
}

/// Validated operator data: order n > 2, dimension m, coefficients P_2..P_n
/// and the homotopy weight ε.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSpec {
    n: u32,
    m: usize,
    epsilon: f64,
    series: BTreeMap<u32, FourierMatrixSeries>,
}

/// Validates raw harmonic tables into an `OperatorSpec` with the default
/// frequency bound.
pub fn build_spec(
    n: u32,
    m: usize,
    raw: Vec<RawSeries>,
    epsilon: f64,
) -> Result<OperatorSpec, SpecError> {
    build_spec_with_max_frequency(n, m, raw, epsilon, DEFAULT_MAX_FREQUENCY)
}

pub fn build_spec_with_max_frequency(
    n: u32,
    m: usize,
    raw: Vec<RawSeries>,
    epsilon: f64,
    max_frequency: i64,
) -> Result<OperatorSpec, SpecError> {
    if n <= 2 {
        return Err(SpecError::OrderTooLow { n });
    }
    if m == 0 {
        return Err(SpecError::InvalidDimension { m });
    }
    if !(0.0..=1.0).contains(&epsilon) || !epsilon.is_finite() {
        return Err(SpecError::EpsilonOutOfRange { epsilon });
    }
    let mut series = BTreeMap::new();
    for rs in raw {
        if rs.order < 2 || rs.order > n {
            return Err(SpecError::OrderOutOfRange { order: rs.order, n });
        }
        if series.contains_key(&rs.order) {
            return Err(SpecError::DuplicateOrder { order: rs.order });
        }
        let mut harmonics = BTreeMap::new();
        for h in rs.harmonics {
            if h.frequency.abs() > max_frequency {
                return Err(SpecError::FrequencyTooLarge {
                    frequency: h.frequency,
                    max: max_frequency,
                });
            }
            if h.entries.len() != m || h.entries.iter().any(|row| row.len() != m) {
                return Err(SpecError::DimensionMismatch {
                    order: rs.order,
                    frequency: h.frequency,
                    expected: m,
                    rows: h.entries.len(),
                    cols: h.entries.first().map(|r| r.len()).unwrap_or(0),
                });
            }
            let mut mat = RMat::zeros(m, m);
            for (i, row) in h.entries.iter().enumerate() {
                for (j, z) in row.iter().enumerate() {
                    if z.im != 0.0 {
                        return Err(SpecError::NotPTSymmetric {
                            order: rs.order,
                            frequency: h.frequency,
                            row: i,
                            col: j,
                        });
                    }
                    mat[(i, j)] = z.re;
                }
            }
            harmonics.insert(h.frequency, mat);
        }
        series.insert(rs.order, FourierMatrixSeries { order: rs.order, harmonics });
    }
    Ok(OperatorSpec { n, m, epsilon, series })
}

impl OperatorSpec {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Same coefficients at a different homotopy weight.
    pub fn with_epsilon(&self, epsilon: f64) -> Result<OperatorSpec, SpecError> {
        if !(0.0..=1.0).contains(&epsilon) || !epsilon.is_finite() {
            return Err(SpecError::EpsilonOutOfRange { epsilon });
        }
        let mut out = self.clone();
        out.epsilon = epsilon;
        Ok(out)
    }

    pub fn series(&self, v: u32) -> Option<&FourierMatrixSeries> {
        self.series.get(&v)
    }

    /// Largest harmonic frequency over every stored coefficient.
    pub fn max_frequency(&self) -> i64 {
        self.series.values().map(|s| s.max_frequency()).max().unwrap_or(0)
    }

    /// Mean matrix C = ∫₀¹ P₂(x) dx, i.e. the frequency-0 harmonic of P₂.
    pub fn mean_matrix(&self) -> RMat {
        self.series
            .get(&2)
            .and_then(|s| s.harmonic(0).cloned())
            .unwrap_or_else(|| RMat::zeros(self.m, self.m))
    }

    /// Harmonic of P_v at frequency l (zero matrix when absent).
    pub fn fourier_coefficient(&self, v: u32, l: i64) -> Result<RMat, SpecError> {
        if v < 2 || v > self.n {
            return Err(SpecError::OrderOutOfRange { order: v, n: self.n });
        }
        Ok(self
            .series
            .get(&v)
            .and_then(|s| s.harmonic(l).cloned())
            .unwrap_or_else(|| RMat::zeros(self.m, self.m)))
    }

    /// q_k: largest |p_{2,i,j,l}| over l ∈ {±2k, ±(2k+1)}.
    pub fn q_k(&self, k: i64) -> f64 {
        let mut q: f64 = 0.0;
        for l in [2 * k, -2 * k, 2 * k + 1, -(2 * k + 1)] {
            if let Some(series) = self.series.get(&2) {
                if let Some(h) = series.harmonic(l) {
                    q = q.max(h.max_abs());
                }
            }
        }
        q
    }

    /// ε-weighted effective coefficient at x: C + ε(P₂(x) − C) for v = 2,
    /// ε·P_v(x) for v ≥ 3.
    pub fn evaluate_coefficient(&self, v: u32, x: f64) -> Result<CMat, SpecError> {
        let mut out = CMat::zeros(self.m, self.m);
        self.evaluate_coefficient_into(v, x, &mut out)?;
        Ok(out)
    }

    /// Allocation-free variant for integrator hot loops.
    pub fn evaluate_coefficient_into(
        &self,
        v: u32,
        x: f64,
        out: &mut CMat,
    ) -> Result<(), SpecError> {
        if v < 2 || v > self.n {
            return Err(SpecError::OrderOutOfRange { order: v, n: self.n });
        }
        debug_assert_eq!(out.rows(), self.m);
        debug_assert_eq!(out.cols(), self.m);
        for z in out.data_mut() {
            *z = Complex64::new(0.0, 0.0);
        }
        if let Some(series) = self.series.get(&v) {
            for (&l, h) in &series.harmonics {
                // weight: for v=2 the mean keeps weight 1, oscillation gets eps
                let w = if v == 2 && l == 0 {
                    1.0
                } else {
                    self.epsilon
                };
                if w == 0.0 {
                    continue;
                }
                let phase = 2.0 * PI * l as f64 * x;
                let e = Complex64::new(phase.cos(), phase.sin()) * w;
                for i in 0..self.m {
                    for j in 0..self.m {
                        out[(i, j)] += e * h[(i, j)];
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn real_entry(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn scalar_series(order: u32, harmonics: &[(i64, f64)]) -> RawSeries {
        RawSeries {
            order,
            harmonics: harmonics
                .iter()
                .map(|&(l, v)| RawHarmonic { frequency: l, entries: vec![vec![real_entry(v)]] })
                .collect(),
        }
    }

    #[test]
    fn constant_real_matrix_is_valid() {
        let raw = vec![RawSeries {
            order: 2,
            harmonics: vec![RawHarmonic {
                frequency: 0,
                entries: vec![
                    vec![real_entry(1.0), real_entry(2.0)],
                    vec![real_entry(0.5), real_entry(-1.0)],
                ],
            }],
        }];
        let spec = build_spec(3, 2, raw, 1.0).unwrap();
        assert_eq!(spec.n(), 3);
        assert_eq!(spec.mean_matrix()[(0, 1)], 2.0);
    }

    #[test]
    fn order_two_rejected() {
        assert!(matches!(build_spec(2, 1, vec![], 1.0), Err(SpecError::OrderTooLow { n: 2 })));
    }

    #[test]
    fn complex_entry_rejected() {
        let raw = vec![RawSeries {
            order: 2,
            harmonics: vec![RawHarmonic {
                frequency: 1,
                entries: vec![vec![Complex64::new(1.0, 0.25)]],
            }],
        }];
        assert!(matches!(
            build_spec(3, 1, raw, 1.0),
            Err(SpecError::NotPTSymmetric { order: 2, frequency: 1, .. })
        ));
    }

    #[test]
    fn mean_of_oscillatory_part_is_zero() {
        // P2(x) = C0 + B(e^{2πix} + e^{-2πix}) with C0 = 3, B = 1
        let spec =
            build_spec(4, 1, vec![scalar_series(2, &[(0, 3.0), (1, 1.0), (-1, 1.0)])], 1.0)
                .unwrap();
        assert_eq!(spec.mean_matrix()[(0, 0)], 3.0);
        // P2 absent entirely
        let free = build_spec(4, 1, vec![], 1.0).unwrap();
        assert_eq!(free.mean_matrix()[(0, 0)], 0.0);
        // P2 = 2cos(2πx) has zero mean
        let cosine = build_spec(4, 1, vec![scalar_series(2, &[(1, 1.0), (-1, 1.0)])], 1.0).unwrap();
        assert_eq!(cosine.mean_matrix()[(0, 0)], 0.0);
    }

    #[test]
    fn fourier_coefficient_lookup() {
        // cos(4πx) = ½ e^{4πix} + ½ e^{-4πix}
        let spec = build_spec(4, 1, vec![scalar_series(2, &[(2, 0.5), (-2, 0.5)])], 1.0).unwrap();
        assert_eq!(spec.fourier_coefficient(2, 2).unwrap()[(0, 0)], 0.5);
        assert_eq!(spec.fourier_coefficient(2, 5).unwrap()[(0, 0)], 0.0);
        let constant = build_spec(4, 1, vec![scalar_series(2, &[(0, 7.0)])], 1.0).unwrap();
        assert_eq!(constant.fourier_coefficient(2, 1).unwrap()[(0, 0)], 0.0);
        assert!(constant.fourier_coefficient(5, 0).is_err());
    }

    #[test]
    fn qk_examples() {
        let constant = build_spec(4, 1, vec![scalar_series(2, &[(0, 7.0)])], 1.0).unwrap();
        for k in 1..6 {
            assert_eq!(constant.q_k(k), 0.0);
        }
        // cos(4πx): q_1 sees l = ±2
        let spec = build_spec(4, 1, vec![scalar_series(2, &[(2, 0.5), (-2, 0.5)])], 1.0).unwrap();
        assert_eq!(spec.q_k(1), 0.5);
        // 2cos(2πx): frequencies ±2, ±3 absent
        let cosine = build_spec(4, 1, vec![scalar_series(2, &[(1, 1.0), (-1, 1.0)])], 1.0).unwrap();
        assert_eq!(cosine.q_k(1), 0.0);
    }

    #[test]
    fn epsilon_weighting() {
        let raw = vec![
            scalar_series(2, &[(0, 3.0), (1, 1.0), (-1, 1.0)]),
            scalar_series(3, &[(0, 2.0)]),
        ];
        let spec = build_spec(3, 1, raw, 0.0).unwrap();
        // ε = 0: v=2 collapses to the mean, v=3 vanishes
        let p2 = spec.evaluate_coefficient(2, 0.3).unwrap();
        assert!((p2[(0, 0)] - Complex64::new(3.0, 0.0)).norm() < 1e-15);
        let p3 = spec.evaluate_coefficient(3, 0.3).unwrap();
        assert!(p3[(0, 0)].norm() == 0.0);
    }

    #[test]
    fn pointwise_value_and_periodicity() {
        let spec = build_spec(4, 1, vec![scalar_series(2, &[(1, 1.0), (-1, 1.0)])], 1.0).unwrap();
        let at0 = spec.evaluate_coefficient(2, 0.0).unwrap();
        assert!((at0[(0, 0)] - Complex64::new(2.0, 0.0)).norm() < 1e-15);
        let x = 0.37;
        let a = spec.evaluate_coefficient(2, x).unwrap();
        let b = spec.evaluate_coefficient(2, x + 1.0).unwrap();
        assert!((a[(0, 0)] - b[(0, 0)]).norm() < 1e-12);
    }

    #[test]
    fn frequency_bound_enforced() {
        let raw = vec![scalar_series(2, &[(40, 1.0)])];
        assert!(matches!(
            build_spec(3, 1, raw, 1.0),
            Err(SpecError::FrequencyTooLarge { frequency: 40, .. })
        ));
    }
}

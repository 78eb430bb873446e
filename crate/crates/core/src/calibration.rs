//! Calibration constants for the asymptotic estimates.
//!
//! The localization and window estimates only assert existence of constants;
//! effective values are measured numerically. These defaults are the starting
//! point for every engine and can be overridden through configuration.

/// Tunable constants entering the localization radii and window widths.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Calibration {
    /// Constant c in the localization radius ε_k.
    pub c: f64,
    /// Smallest |k| treated as asymptotic.
    pub n_config: i64,
    /// Constant in front of the collision-window half-width δ_k.
    pub c_delta: f64,
    /// Additive slack on fitted log-log slopes.
    pub slope_slack: f64,
}

impl Default for Calibration {
    fn default() -> Self {
        Calibration { c: 1.0, n_config: 8, c_delta: 1.0, slope_slack: 0.25 }
    }
}

//! Config-document ingestion.
//!
//! The document is JSON:
//!
//! ```json
//! {
//!   "n": 4, "m": 1, "epsilon": 1.0,
//!   "coefficients": [
//!     { "order": 2, "harmonics": [ { "l": 1, "matrix": [[1.0]] } ] }
//!   ],
//!   "tolerances": { "truncation": 16, "ode_tol": 1e-10 }
//! }
//! ```
//!
//! Matrix entries are real numbers; a two-element array `[re, im]` is accepted
//! so that non-PT inputs reach the validator and fail with the proper
//! diagnostic instead of a parse error.

use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use num_complex::Complex64;
use serde::Deserialize;

use floquet_pt_core::analysis::ScanTols;
use floquet_pt_core::bloch::GalerkinConfig;
use floquet_pt_core::calibration::Calibration;
use floquet_pt_core::coefficients::{
    build_spec_with_max_frequency, OperatorSpec, RawHarmonic, RawSeries,
};
use floquet_pt_core::monodromy::MonodromyOptions;

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum EntryDoc {
    Real(f64),
    Complex([f64; 2]),
}

impl EntryDoc {
    fn to_complex(&self) -> Complex64 {
        match self {
            EntryDoc::Real(x) => Complex64::new(*x, 0.0),
            EntryDoc::Complex([re, im]) => Complex64::new(*re, *im),
        }
    }
}

#[derive(Debug, Deserialize)]
struct HarmonicDoc {
    l: i64,
    matrix: Vec<Vec<EntryDoc>>,
}

#[derive(Debug, Deserialize)]
struct CoefficientDoc {
    order: u32,
    harmonics: Vec<HarmonicDoc>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ToleranceDoc {
    pub truncation: Option<usize>,
    pub eig_tol: Option<f64>,
    pub cluster_tol: Option<f64>,
    pub ode_tol: Option<f64>,
    pub unimod_tol: Option<f64>,
    pub lambda_cap: Option<f64>,
    pub t_points: Option<usize>,
    pub im_rel_tol: Option<f64>,
    pub calib_c: Option<f64>,
    pub n_config: Option<i64>,
    pub c_delta: Option<f64>,
    pub slope_slack: Option<f64>,
    pub max_frequency: Option<i64>,
    pub trace_steps: Option<usize>,
    pub structure_tol: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDoc {
    n: u32,
    m: usize,
    epsilon: f64,
    coefficients: Vec<CoefficientDoc>,
    #[serde(default)]
    tolerances: ToleranceDoc,
}

/// Resolved numerical settings: config-file values with documented defaults,
/// overridable by flags.
#[derive(Debug, Clone)]
pub struct Settings {
    pub galerkin: GalerkinConfig,
    pub scan: ScanTols,
    pub calib: Calibration,
    pub structure_tol: f64,
    pub trace_steps: usize,
}

impl Settings {
    fn from_doc(doc: &ToleranceDoc) -> Self {
        let mut galerkin = GalerkinConfig::default();
        if let Some(k) = doc.truncation {
            galerkin.truncation = k;
        }
        if let Some(x) = doc.eig_tol {
            galerkin.eig_tol = x;
        }
        if let Some(x) = doc.cluster_tol {
            galerkin.cluster_tol = x;
        }
        let mut monodromy = MonodromyOptions::default();
        if let Some(x) = doc.ode_tol {
            monodromy.ode_tol = x;
        }
        if let Some(x) = doc.lambda_cap {
            monodromy.lambda_cap = x;
        }
        let mut scan = ScanTols { monodromy, ..Default::default() };
        if let Some(x) = doc.truncation {
            scan.truncation = Some(x);
        }
        if let Some(x) = doc.t_points {
            scan.t_points = x;
        }
        if let Some(x) = doc.im_rel_tol {
            scan.im_rel_tol = x;
        }
        if let Some(x) = doc.unimod_tol {
            scan.unimod_tol = x;
        }
        let mut calib = Calibration::default();
        if let Some(x) = doc.calib_c {
            calib.c = x;
        }
        if let Some(x) = doc.n_config {
            calib.n_config = x;
        }
        if let Some(x) = doc.c_delta {
            calib.c_delta = x;
        }
        if let Some(x) = doc.slope_slack {
            calib.slope_slack = x;
        }
        Settings {
            galerkin,
            scan,
            calib,
            structure_tol: doc.structure_tol.unwrap_or(1e-8),
            trace_steps: doc.trace_steps.unwrap_or(129),
        }
    }
}

/// Loads and validates a config file into an operator spec plus settings.
pub fn load_config(path: &Path) -> Result<(OperatorSpec, Settings)> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read config {}", path.display()))?;
    let doc: ConfigDoc = serde_json::from_str(&text)
        .with_context(|| format!("malformed config {}", path.display()))?;
    let raw: Vec<RawSeries> = doc
        .coefficients
        .iter()
        .map(|c| RawSeries {
            order: c.order,
            harmonics: c
                .harmonics
                .iter()
                .map(|h| RawHarmonic {
                    frequency: h.l,
                    entries: h
                        .matrix
                        .iter()
                        .map(|row| row.iter().map(EntryDoc::to_complex).collect())
                        .collect(),
                })
                .collect(),
        })
        .collect();
    let max_freq = doc
        .tolerances
        .max_frequency
        .unwrap_or(floquet_pt_core::coefficients::DEFAULT_MAX_FREQUENCY);
    let spec = build_spec_with_max_frequency(doc.n, doc.m, raw, doc.epsilon, max_freq)
        .map_err(|e| anyhow::anyhow!("invalid spec: {e}"))?;
    Ok((spec, Settings::from_doc(&doc.tolerances)))
}

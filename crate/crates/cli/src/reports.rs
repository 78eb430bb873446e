//! Serializable report schemas (JSON-compatible structured text).

use std::collections::BTreeMap;

use serde::Serialize;

use floquet_pt_core::analysis::{Containment, Coverage, Gap, GapReport};
use floquet_pt_core::bloch::{BlochSet, SymmetryReport};
use floquet_pt_core::linalg::SpectralStructure;
use floquet_pt_core::unperturbed::{TripleSumCondition, ParityReport, Window};
use num_complex::Complex64;

#[derive(Serialize)]
pub struct ComplexOut {
    pub re: f64,
    pub im: f64,
}

impl From<Complex64> for ComplexOut {
    fn from(z: Complex64) -> Self {
        ComplexOut { re: z.re, im: z.im }
    }
}

#[derive(Serialize)]
pub struct StructureEntryOut {
    pub mu: ComplexOut,
    pub algebraic: usize,
    pub geometric: usize,
    pub partial_multiplicities: Vec<usize>,
    pub is_real: bool,
}

#[derive(Serialize)]
pub struct StructureOut {
    pub dim: usize,
    pub s: usize,
    pub r: usize,
    pub real_odd: Vec<usize>,
    pub entries: Vec<StructureEntryOut>,
    pub triple_sum_condition: TripleSumConditionOut,
    pub parity: ParityOut,
}

#[derive(Serialize)]
pub struct TripleSumConditionOut {
    pub holds: bool,
    pub witness: Option<[usize; 3]>,
    pub violation: Option<ViolationOut>,
    pub candidate_count: usize,
}

#[derive(Serialize)]
pub struct ViolationOut {
    pub triple: [usize; 3],
    pub assignment: [usize; 3],
    pub common_sum: f64,
}

#[derive(Serialize)]
pub struct ParityOut {
    pub m_is_odd: bool,
    pub count_real_odd: usize,
    pub consistent: bool,
}

pub fn structure_out(
    st: &SpectralStructure,
    cond: &TripleSumCondition,
    parity: &ParityReport,
) -> StructureOut {
    StructureOut {
        dim: st.dim,
        s: st.s,
        r: st.r,
        real_odd: st.real_odd.clone(),
        entries: st
            .entries
            .iter()
            .map(|e| StructureEntryOut {
                mu: e.mu.into(),
                algebraic: e.algebraic,
                geometric: e.geometric,
                partial_multiplicities: e.partial_multiplicities.clone(),
                is_real: e.is_real,
            })
            .collect(),
        triple_sum_condition: TripleSumConditionOut {
            holds: cond.holds,
            witness: cond.witness,
            violation: cond.violation.map(|(triple, assignment, common_sum)| ViolationOut {
                triple,
                assignment,
                common_sum,
            }),
            candidate_count: cond.candidate_count,
        },
        parity: ParityOut {
            m_is_odd: parity.m_is_odd,
            count_real_odd: parity.count_real_odd,
            consistent: parity.consistent,
        },
    }
}

#[derive(Serialize)]
pub struct WindowOut {
    pub label: String,
    pub index: i64,
    pub pair: [usize; 2],
    pub center: f64,
    pub half_width: f64,
}

impl From<&Window> for WindowOut {
    fn from(w: &Window) -> Self {
        WindowOut {
            label: w.label.to_string(),
            index: w.index,
            pair: [w.pair.0, w.pair.1],
            center: w.center,
            half_width: w.half_width,
        }
    }
}

#[derive(Serialize)]
pub struct GapOut {
    pub lo: f64,
    pub hi: f64,
    pub center: f64,
    pub width: f64,
    pub nearest_window: Option<WindowOut>,
    pub normalized_offset: Option<f64>,
}

impl From<&Gap> for GapOut {
    fn from(g: &Gap) -> Self {
        GapOut {
            lo: g.interval.0,
            hi: g.interval.1,
            center: g.center(),
            width: g.width(),
            nearest_window: g.nearest_window.as_ref().map(WindowOut::from),
            normalized_offset: g.normalized_offset,
        }
    }
}

#[derive(Serialize)]
pub struct ContainmentOut {
    pub all_contained: bool,
    pub fitted_gamma: Vec<(i64, f64)>,
    pub slope: Option<f64>,
    pub offsets_decay: Option<bool>,
}

impl From<&Containment> for ContainmentOut {
    fn from(c: &Containment) -> Self {
        ContainmentOut {
            all_contained: c.all_contained,
            fitted_gamma: c.fitted_gamma.clone(),
            slope: c.slope,
            offsets_decay: c.offsets_decay,
        }
    }
}

#[derive(Serialize)]
pub struct ScanReportOut {
    pub engine: String,
    pub lambda_lo: f64,
    pub lambda_hi: f64,
    pub step: f64,
    pub coverage_fraction: f64,
    pub gap_count: usize,
    pub gaps: Vec<GapOut>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub containment: Option<ContainmentOut>,
}

pub fn scan_report_out(report: &GapReport, containment: Option<&Containment>) -> ScanReportOut {
    ScanReportOut {
        engine: report.engine.to_string(),
        lambda_lo: report.scan_range.0,
        lambda_hi: report.scan_range.1,
        step: report.grid_step,
        coverage_fraction: report.coverage_fraction,
        gap_count: report.gaps.len(),
        gaps: report.gaps.iter().map(GapOut::from).collect(),
        containment: containment.map(ContainmentOut::from),
    }
}

#[derive(Serialize)]
pub struct CoverageOut {
    pub covered: bool,
    pub h_effective: f64,
    pub worst_defect: f64,
    pub positive_points: usize,
    pub negative_points: usize,
}

impl From<&Coverage> for CoverageOut {
    fn from(c: &Coverage) -> Self {
        CoverageOut {
            covered: c.covered,
            h_effective: c.h_effective,
            worst_defect: c.worst_defect,
            positive_points: c.samples.len(),
            negative_points: c.negative_samples.len(),
        }
    }
}

#[derive(Serialize)]
pub struct BlochOut {
    pub t: f64,
    pub re_lo: f64,
    pub re_hi: f64,
    pub im_half: f64,
    pub eigenvalues: Vec<BlochValueOut>,
    pub symmetric: bool,
    pub symmetry_defect: f64,
}

#[derive(Serialize)]
pub struct BlochValueOut {
    pub re: f64,
    pub im: f64,
    pub multiplicity: usize,
}

pub fn bloch_out(set: &BlochSet, sym: &SymmetryReport) -> BlochOut {
    let window = set.window.expect("windowed bloch set");
    BlochOut {
        t: set.t,
        re_lo: window.re_lo,
        re_hi: window.re_hi,
        im_half: window.im_hi,
        eigenvalues: set
            .eigenvalues
            .iter()
            .map(|&(z, m)| BlochValueOut { re: z.re, im: z.im, multiplicity: m })
            .collect(),
        symmetric: sym.symmetric,
        symmetry_defect: sym.max_defect,
    }
}

#[derive(Serialize)]
pub struct Manifest {
    pub tool_version: String,
    pub command: String,
    pub config_path: String,
    pub out_dir: String,
    pub jobs: usize,
    pub overrides: BTreeMap<String, serde_json::Value>,
    pub timings: Timings,
}

#[derive(Serialize)]
pub struct Timings {
    pub total_seconds: f64,
}

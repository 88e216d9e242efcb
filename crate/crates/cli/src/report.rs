//! Serializable results of `diagnose` and `refine`.

use std::fmt;

use serde::{Deserialize, Serialize};

use lxf_core::compactness::{ExponentFit, IdentityReport, ModulusCurve, Shift};
use lxf_core::entropy::DissipationCheck;
use lxf_core::problem::ValidationReport;
use lxf_core::WeightFunction;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl Outcome {
    pub fn new(name: impl Into<String>, status: Status, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            status,
            detail: detail.into(),
        }
    }

    pub fn check(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Self::new(name, if ok { Status::Pass } else { Status::Fail }, detail)
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:<7} {}: {}", self.status, self.name, self.detail)
    }
}

pub fn all_pass(outcomes: &[Outcome]) -> bool {
    outcomes.iter().all(|o| o.status != Status::Fail)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub problem: String,
    pub cells: usize,
    pub dx: f64,
    pub dt: f64,
    pub lambda: f64,
    pub kappa: f64,
    pub n_max: usize,
    pub horizon: f64,
    pub j_min: i64,
    pub j_max: i64,
    pub weight: WeightFunction,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityEntry {
    pub shift: Shift,
    pub report: Option<IdentityReport>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GammaEntry {
    pub shift: Shift,
    pub cells: usize,
    pub violations: usize,
    pub worst_margin: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModulusSummary {
    pub curve: ModulusCurve,
    pub fit: Option<ExponentFit>,
    /// `max modulus / offset^μ`.
    pub statistic: f64,
    /// Exponent used by the statistic.
    pub mu: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsReport {
    pub metadata: RunMetadata,
    pub validation: ValidationReport,
    pub mu_theory: Option<f64>,
    pub dissipation_sum: f64,
    pub temporal_square_sum: f64,
    pub psi_mass: f64,
    pub entropy_bounds: DissipationCheck,
    pub identities: Vec<IdentityEntry>,
    pub gamma: Vec<GammaEntry>,
    pub spatial_modulus: Option<ModulusSummary>,
    pub temporal_modulus: Option<ModulusSummary>,
    pub outcomes: Vec<Outcome>,
}

impl DiagnosticsReport {
    pub fn passed(&self) -> bool {
        all_pass(&self.outcomes)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefineRow {
    pub cells: usize,
    pub dx: f64,
    pub dissipation_sum: f64,
    pub temporal_square_sum: f64,
    pub psi_mass: f64,
    pub spatial_statistic: f64,
    pub temporal_statistic: f64,
    pub spatial_slope: Option<f64>,
    pub temporal_slope: Option<f64>,
    /// Weighted L¹ distance at the final time to the finest completed level.
    pub l1_to_finest: f64,
}

/// `max / min` of each ladder column; 1 for a single row.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderBands {
    pub dissipation_sum: f64,
    pub temporal_square_sum: f64,
    pub psi_mass: f64,
    pub spatial_statistic: f64,
    pub temporal_statistic: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RefineReport {
    pub problem: String,
    pub weight: WeightFunction,
    pub mu: f64,
    pub rows: Vec<RefineRow>,
    pub bands: LadderBands,
    pub notes: Vec<String>,
    pub outcomes: Vec<Outcome>,
}

impl RefineReport {
    pub fn passed(&self) -> bool {
        all_pass(&self.outcomes)
    }
}

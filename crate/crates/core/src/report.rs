//! Report envelope shared by all CLI commands.

use serde::{Deserialize, Serialize};

use crate::overlap::{certify, CertificationReport, OptimizerConfig, OverlapError, UnitaryGate, Verdict};
use crate::search::{HaarStudyResult, SearchResult};
use crate::segre::{is_product, max_minor, ExistenceVerdict};
use crate::states::{schmidt, BipartiteDims, ProductPair, PureState, StateError, DEFAULT_PRODUCT_TOL};

pub const SCHEMA_VERSION: &str = "1.0";

/// Log base used by every entropy in a report.
pub const ENTROPY_UNIT: &str = "bits";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommandEcho {
    pub name: String,
    pub args: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
#[allow(clippy::large_enum_variant)] // one value per report
pub enum ReportPayload {
    Exists(ExistenceVerdict),
    Certify(CertificationReport),
    Witness(WitnessReport),
    Search(SearchResult),
    HaarStudy(HaarStudyResult),
    Schmidt(SchmidtReport),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub schema_version: String,
    pub command: CommandEcho,
    pub config: Option<OptimizerConfig>,
    pub seed: Option<u64>,
    pub entropy_unit: String,
    pub result: ReportPayload,
    /// Omitted when the caller asks for reproducible bytes.
    pub wall_time_ms: Option<u64>,
}

impl ReportFile {
    pub fn new(command: CommandEcho, result: ReportPayload) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.to_string(),
            command,
            config: None,
            seed: None,
            entropy_unit: ENTROPY_UNIT.to_string(),
            result,
            wall_time_ms: None,
        }
    }
}

/// Best product→product transition found for a gate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub dims: BipartiteDims,
    /// `Λ ≥ 1 − witness_tol`.
    pub witness_found: bool,
    pub overlap: f64,
    pub input_witness: ProductPair,
    pub output_witness: ProductPair,
    /// Schmidt coefficients of `U(c⊗d)`; `(1, 0, …)` for a perfect witness.
    pub output_spectrum: Vec<f64>,
    pub entropy_at_witness: f64,
    pub verdict: Verdict,
    pub converged_restarts: usize,
    pub config: OptimizerConfig,
}

impl From<CertificationReport> for WitnessReport {
    fn from(r: CertificationReport) -> Self {
        Self {
            dims: r.dims,
            witness_found: r.verdict == Verdict::NotUniversalWitnessFound,
            overlap: r.estimate.lambda,
            input_witness: r.estimate.input_witness,
            output_witness: r.estimate.output_witness,
            output_spectrum: r.witness_output_spectrum,
            entropy_at_witness: r.entropy_at_witness,
            verdict: r.verdict,
            converged_restarts: r.estimate.converged_restarts,
            config: r.config,
        }
    }
}

pub fn find_witness(gate: &UnitaryGate, cfg: &OptimizerConfig) -> Result<WitnessReport, OverlapError> {
    Ok(certify(gate, cfg)?.into())
}

/// Entanglement summary of a single state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchmidtReport {
    pub dims: BipartiteDims,
    pub coefficients: Vec<f64>,
    pub schmidt_rank: usize,
    pub entropy: f64,
    pub geometric: f64,
    pub max_minor: f64,
    pub is_product: bool,
    pub tol: f64,
}

pub fn schmidt_report(psi: &PureState) -> Result<SchmidtReport, StateError> {
    let s = schmidt(psi)?;
    Ok(SchmidtReport {
        dims: psi.dims(),
        schmidt_rank: s.rank(DEFAULT_PRODUCT_TOL),
        entropy: s.entropy(),
        geometric: s.geometric(),
        max_minor: max_minor(psi),
        is_product: is_product(psi, DEFAULT_PRODUCT_TOL),
        tol: DEFAULT_PRODUCT_TOL,
        coefficients: s.coefficients,
    })
}

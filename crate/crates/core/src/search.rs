//! Haar-random gates and the search for good universal entanglers.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{qr_unitary, solve, svd, ComplexMatrix, C64};
use crate::overlap::{
    certify, distinct_maximizers, max_product_overlap, multistart, summarize, CertificationReport, OptimizerConfig,
    OverlapError, UnitaryGate, Verdict,
};
use crate::rng::{complex_gaussian_matrix, derive_seed, rng_from_seed};
use crate::segre::{exists_universal_entangler, ExistenceVerdict};
use crate::states::BipartiteDims;

const TIE_TOL: f64 = 1e-12;

// Sub-stream tags for derive_seed.
const STREAM_OPTIMIZER: u64 = 0x6f70_7469;
const STREAM_CANDIDATES: u64 = 0;
const STREAM_HILL: u64 = 1;
const STREAM_FINAL: u64 = 2;
const STREAM_BASELINE: u64 = 3;

/// Local maxima of the current gate carried into each proposal's estimate.
const WARM_POOL: usize = 8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("no universal entangler exists for dims {}x{}", .0.dims.m(), .0.dims.n())]
    DimsNotEligible(ExistenceVerdict),
    #[error("invalid search budget: {0}")]
    InvalidBudget(String),
    #[error(transparent)]
    Overlap(#[from] OverlapError),
}

/// Haar-distributed `k × k` unitary: QR of a Ginibre matrix with the phases
/// of `R`'s diagonal moved into `Q`.
pub fn haar_unitary(k: usize, seed: u64) -> ComplexMatrix {
    assert!(k >= 1, "unitary dimension must be positive");
    let ginibre = complex_gaussian_matrix(&mut rng_from_seed(seed), k, k);
    qr_unitary(&ginibre).expect("Ginibre matrices are full rank with probability one")
}

pub fn haar_gate(dims: BipartiteDims, seed: u64) -> UnitaryGate {
    UnitaryGate::from_parts_unchecked(haar_unitary(dims.composite(), seed), dims)
}

/// Optimizer seed used for the gate drawn with `gate_seed`.
pub fn optimizer_seed(gate_seed: u64) -> u64 {
    derive_seed(gate_seed, STREAM_OPTIMIZER)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Quantiles {
    pub min: f64,
    pub q25: f64,
    pub median: f64,
    pub q75: f64,
    pub max: f64,
}

impl Quantiles {
    /// Linear-interpolation quantiles; `values` must be non-empty.
    pub fn of(values: &[f64]) -> Self {
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let at = |q: f64| {
            let pos = q * (sorted.len() - 1) as f64;
            let lo = pos.floor() as usize;
            let hi = pos.ceil() as usize;
            sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
        };
        Self {
            min: sorted[0],
            q25: at(0.25),
            median: at(0.5),
            q75: at(0.75),
            max: sorted[sorted.len() - 1],
        }
    }
}

/// Monte Carlo study of `Λ` over Haar-random gates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HaarStudyResult {
    pub dims: BipartiteDims,
    pub samples: usize,
    pub seed: u64,
    /// Gate seed of each sample, `derive_seed(seed, index)`.
    pub sub_seeds: Vec<u64>,
    pub lambda_values: Vec<f64>,
    pub verdicts: Vec<Verdict>,
    /// Share of samples with `Λ ≤ 1 − gap_tol`.
    pub fraction_universal: f64,
    /// Quantiles of the guaranteed geometric entanglement `1 − Λ²`.
    pub guaranteed_entanglement_quantiles: Quantiles,
    pub config: OptimizerConfig,
}

/// Certifies `samples` independent Haar gates. Sample `i` uses gate seed
/// `derive_seed(seed, i)`; `cfg.seed` is ignored in favour of per-sample
/// optimizer seeds so that samples are independent.
pub fn haar_study(
    dims: BipartiteDims,
    samples: usize,
    cfg: &OptimizerConfig,
    seed: u64,
) -> Result<HaarStudyResult, SearchError> {
    if samples == 0 {
        return Err(SearchError::InvalidBudget("samples must be at least 1".into()));
    }
    cfg.validate()?;
    let sub_seeds: Vec<u64> = (0..samples as u64).map(|i| derive_seed(seed, i)).collect();
    let reports = sub_seeds
        .par_iter()
        .map(|&s| certify(&haar_gate(dims, s), &cfg.clone().with_seed(optimizer_seed(s))))
        .collect::<Result<Vec<_>, _>>()?;
    let lambda_values: Vec<f64> = reports.iter().map(|r| r.estimate.lambda).collect();
    let verdicts = reports.iter().map(|r| r.verdict).collect();
    let universal = lambda_values.iter().filter(|&&l| l <= 1.0 - cfg.gap_tol).count();
    let entanglement: Vec<f64> = reports.iter().map(|r| r.min_geometric_entanglement).collect();
    Ok(HaarStudyResult {
        dims,
        samples,
        seed,
        sub_seeds,
        fraction_universal: universal as f64 / samples as f64,
        guaranteed_entanglement_quantiles: Quantiles::of(&entanglement),
        lambda_values,
        verdicts,
        config: cfg.clone(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub candidates: usize,
    pub hill_steps: usize,
    /// Spectral norm of each Hermitian perturbation generator.
    pub step_scale: f64,
    /// Random restarts per Λ estimate during the search. Hill-climbing
    /// proposals also restart from the current gate's best local maxima.
    pub search_restarts: usize,
    /// Restarts for re-estimating the chosen candidate and for the final
    /// certification of the winner.
    pub final_restarts: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        Self {
            candidates: 50,
            hill_steps: 100,
            step_scale: 0.05,
            search_restarts: 16,
            final_restarts: 256,
        }
    }
}

impl SearchBudget {
    fn validate(&self) -> Result<(), SearchError> {
        let bad = |msg: &str| Err(SearchError::InvalidBudget(msg.into()));
        if self.candidates == 0 {
            return bad("candidates must be at least 1");
        }
        if !(self.step_scale.is_finite() && self.step_scale > 0.0) {
            return bad("step_scale must be positive");
        }
        if self.search_restarts == 0 || self.final_restarts == 0 {
            return bad("restart budgets must be at least 1");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    /// 0 is the best candidate, re-estimated at the final budget; `s > 0` is
    /// hill-climbing step `s`.
    pub step: usize,
    /// Guaranteed geometric entanglement `1 − Λ²` of the current gate at the search budget.
    pub value: f64,
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub dims: BipartiteDims,
    pub seed: u64,
    pub best_unitary: UnitaryGate,
    /// `1 − Λ²` from the final high-budget certification.
    pub best_guaranteed_entanglement: f64,
    /// `1 − Λ²` at the search budget when the winner was accepted.
    pub search_guaranteed_entanglement: f64,
    pub best_candidate: usize,
    pub accepted_steps: usize,
    pub trajectory: Vec<TrajectoryPoint>,
    pub budget: SearchBudget,
    pub config: OptimizerConfig,
    pub final_report: CertificationReport,
}

/// Random Hermitian generator with unit spectral norm.
fn hermitian_direction(k: usize, seed: u64) -> Result<ComplexMatrix, OverlapError> {
    let g = complex_gaussian_matrix(&mut rng_from_seed(seed), k, k);
    let h = g.add(&g.adjoint()).scale(C64::new(0.5, 0.0));
    let norm = svd(&h)?.singular_values[0];
    Ok(h.scale(C64::new(1.0 / norm, 0.0)))
}

/// Cayley transform `(I − iεH/2)(I + iεH/2)⁻¹`, unitary for Hermitian `H`.
pub fn cayley(h: &ComplexMatrix, eps: f64) -> Result<ComplexMatrix, OverlapError> {
    let k = h.rows();
    let a = h.scale(C64::new(0.0, eps / 2.0));
    let id = ComplexMatrix::identity(k);
    // The two factors commute, so (I + A)⁻¹(I − A) is the same matrix.
    Ok(solve(&id.add(&a), &id.sub(&a))?)
}

/// Best-of-N Haar candidates followed by hill climbing on `U ↦ W(εH)·U`,
/// minimizing the estimated `Λ`.
///
/// A cheap estimate can miss the global maximum and so understate `Λ`;
/// accepting such proposals would reward estimator noise. The chosen
/// candidate is therefore re-estimated at the final budget, and every
/// proposal is also restarted from the current gate's best local maxima,
/// which move continuously under small steps.
pub fn search_entangler(
    dims: BipartiteDims,
    cfg: &OptimizerConfig,
    budget: &SearchBudget,
    seed: u64,
) -> Result<SearchResult, SearchError> {
    let verdict = exists_universal_entangler(dims);
    if !verdict.exists {
        return Err(SearchError::DimsNotEligible(verdict));
    }
    budget.validate()?;
    cfg.validate()?;
    let search_cfg = cfg.clone().with_restarts(budget.search_restarts);
    let candidate_master = derive_seed(seed, STREAM_CANDIDATES);
    let hill_master = derive_seed(seed, STREAM_HILL);

    let lambdas = (0..budget.candidates as u64)
        .into_par_iter()
        .map(|i| {
            let s = derive_seed(candidate_master, i);
            max_product_overlap(&haar_gate(dims, s), &search_cfg.clone().with_seed(optimizer_seed(s)))
                .map(|e| e.lambda)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut best_candidate = 0;
    for (i, &l) in lambdas.iter().enumerate().skip(1) {
        if l < lambdas[best_candidate] - TIE_TOL {
            best_candidate = i;
        }
    }
    let mut current = haar_gate(dims, derive_seed(candidate_master, best_candidate as u64));
    let baseline_cfg = cfg
        .clone()
        .with_restarts(budget.final_restarts)
        .with_seed(derive_seed(seed, STREAM_BASELINE));
    let runs = multistart(&current, &baseline_cfg, &[])?;
    let mut current_lambda = summarize(&runs, budget.final_restarts).lambda;
    let mut pool = distinct_maximizers(&runs, WARM_POOL);
    let mut trajectory = vec![TrajectoryPoint {
        step: 0,
        value: 1.0 - current_lambda * current_lambda,
        accepted: true,
    }];

    let mut accepted_steps = 0;
    for step in 1..=budget.hill_steps {
        let step_seed = derive_seed(hill_master, step as u64);
        let w = cayley(&hermitian_direction(dims.composite(), step_seed)?, budget.step_scale)?;
        let proposal = qr_unitary(&w.matmul(current.matrix())).map_err(OverlapError::from)?;
        let proposal = UnitaryGate::new(proposal, dims)?;
        let runs = multistart(&proposal, &search_cfg.clone().with_seed(optimizer_seed(step_seed)), &pool)?;
        let lambda = summarize(&runs, budget.search_restarts).lambda;
        let accepted = lambda < current_lambda;
        if accepted {
            current = proposal;
            current_lambda = lambda;
            pool = distinct_maximizers(&runs, WARM_POOL);
            accepted_steps += 1;
        }
        trajectory.push(TrajectoryPoint {
            step,
            value: 1.0 - current_lambda * current_lambda,
            accepted,
        });
    }

    let final_cfg = cfg
        .clone()
        .with_restarts(budget.final_restarts)
        .with_seed(derive_seed(seed, STREAM_FINAL));
    let final_report = certify(&current, &final_cfg)?;
    Ok(SearchResult {
        dims,
        seed,
        best_guaranteed_entanglement: final_report.min_geometric_entanglement,
        search_guaranteed_entanglement: 1.0 - current_lambda * current_lambda,
        best_unitary: current,
        best_candidate,
        accepted_steps,
        trajectory,
        budget: budget.clone(),
        config: cfg.clone(),
        final_report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dims(m: usize, n: usize) -> BipartiteDims {
        BipartiteDims::new(m, n).unwrap()
    }

    #[test]
    fn scalar_haar_is_a_phase() {
        let u = haar_unitary(1, 9);
        assert!((u[(0, 0)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn haar_samples_are_unitary() {
        for k in 1..=16 {
            for seed in 0..5 {
                assert!(haar_unitary(k, seed).unitarity_defect() < 1e-10);
            }
        }
    }

    #[test]
    fn haar_first_moment_k4() {
        // E|U_00|^2 = 1/k; |U_00|^2 ~ Beta(1, k-1) so Var = (k-1)/(k^2 (k+1)).
        let k = 4;
        let n = 10_000;
        let values: Vec<f64> = (0..n).map(|s| haar_unitary(k, derive_seed(77, s)).as_slice()[0].norm_sqr()).collect();
        let mean = values.iter().sum::<f64>() / n as f64;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        let se = (var / n as f64).sqrt();
        assert!((mean - 0.25).abs() < 3.0 * se, "mean {mean}, se {se}");
    }

    #[test]
    fn quantiles_interpolate() {
        let q = Quantiles::of(&[4.0, 1.0, 3.0, 2.0, 5.0]);
        assert_eq!((q.min, q.q25, q.median, q.q75, q.max), (1.0, 2.0, 3.0, 4.0, 5.0));
        let q = Quantiles::of(&[0.0, 1.0]);
        assert_eq!((q.q25, q.median), (0.25, 0.5));
        let q = Quantiles::of(&[7.0]);
        assert_eq!((q.min, q.median, q.max), (7.0, 7.0, 7.0));
    }

    #[test]
    fn cayley_is_unitary() {
        let h = hermitian_direction(6, 3).unwrap();
        assert!((svd(&h).unwrap().singular_values[0] - 1.0).abs() < 1e-12);
        for eps in [1e-3, 0.05, 1.0, 10.0] {
            assert!(cayley(&h, eps).unwrap().unitarity_defect() < 1e-12);
        }
        let small = cayley(&h, 1e-8).unwrap();
        assert!(small.sub(&ComplexMatrix::identity(6)).max_abs() < 1e-7);
    }

    #[test]
    fn ineligible_dims_are_refused() {
        let cfg = OptimizerConfig::default();
        for (m, n) in [(2, 5), (3, 3), (1, 4)] {
            assert!(matches!(
                search_entangler(dims(m, n), &cfg, &SearchBudget::default(), 0),
                Err(SearchError::DimsNotEligible(_))
            ));
        }
    }

    #[test]
    fn degenerate_budget_is_a_single_certification() {
        let d = dims(3, 4);
        let cfg = OptimizerConfig::default();
        let budget = SearchBudget {
            candidates: 1,
            hill_steps: 0,
            step_scale: 0.05,
            search_restarts: 8,
            final_restarts: 16,
        };
        let result = search_entangler(d, &cfg, &budget, 5).unwrap();
        let expected_gate = haar_gate(d, derive_seed(derive_seed(5, STREAM_CANDIDATES), 0));
        assert_eq!(result.best_unitary, expected_gate);
        assert_eq!(result.trajectory.len(), 1);
        let fresh = certify(&expected_gate, &result.final_report.config).unwrap();
        assert!((fresh.min_geometric_entanglement - result.best_guaranteed_entanglement).abs() < 2e-6);
    }

    /// Guaranteed geometric entanglement of the default 3x4 search at seed 1.
    const REGRESSION_E: f64 = 3.619521459527375e-3;

    #[test]
    fn default_search_at_3x4_regression() {
        let result = search_entangler(dims(3, 4), &OptimizerConfig::default(), &SearchBudget::default(), 1).unwrap();
        let values: Vec<f64> = result.trajectory.iter().map(|p| p.value).collect();
        assert_eq!(values.len(), 101);
        assert!(values.windows(2).all(|w| w[1] >= w[0]));
        assert!(result.best_unitary.matrix().unitarity_defect() < 1e-9);
        assert_eq!(result.final_report.verdict, Verdict::UniversalEntanglerNumerical);
        assert!(result.best_guaranteed_entanglement > 0.0);
        assert!((result.best_guaranteed_entanglement - REGRESSION_E).abs() < 1e-9);
        assert!((result.search_guaranteed_entanglement - result.best_guaranteed_entanglement).abs() < 2e-6);
    }

    #[test]
    fn study_rejects_zero_samples() {
        assert!(haar_study(dims(2, 2), 0, &OptimizerConfig::default(), 1).is_err());
    }
}

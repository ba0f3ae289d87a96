//! Maximal product overlap of a gate and universal-entangler certification.
//!
//! For a gate `U` on `C^m ⊗ C^n` the maximal product overlap is
//!
//! ```text
//! Λ(U) = max |⟨a⊗b| U |c⊗d⟩|   over unit a, c ∈ C^m and b, d ∈ C^n.
//! ```
//!
//! `Λ(U) = 1` exactly when some product state is mapped to a product state, so
//! `U` is a universal entangler iff `Λ(U) < 1`, and `1 − Λ(U)²` is the smallest
//! geometric entanglement `U` can output from a product input.
//!
//! Λ is estimated by alternating exact maximization. With the input `c⊗d`
//! fixed, the best output pair is the leading Schmidt pair of `U(c⊗d)`; with
//! the output `a⊗b` fixed, the best input is the leading Schmidt pair of
//! `U†(a⊗b)`. Each half-step solves its subproblem exactly, so the overlap
//! never decreases along a run. Runs start from Haar-random product pairs and
//! the best of several restarts is kept; this gives a lower bound on Λ that is
//! tight whenever some restart lands in the basin of the global maximum.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::io::UnitaryFile;
use crate::linalg::{ComplexMatrix, LinalgError, C64};
use crate::rng::{derive_seed, rng_from_seed};
use crate::states::{nearest_product, schmidt, BipartiteDims, ProductPair, PureState, StateError};

/// Construction tolerance on `max |U†U − I|`.
pub const TOL_UNITARY: f64 = 1e-10;

/// Slack allowed for rounding when checking that half-steps never decrease
/// the overlap.
const MONOTONE_SLACK: f64 = 1e-12;

/// Two restarts whose values differ by less than this are tied; the lower
/// restart index wins.
const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OverlapError {
    #[error("invalid optimizer configuration: {0}")]
    InvalidConfig(String),
    #[error("gate is {rows}x{cols} but dims {dims} need a {k}x{k} matrix", k = dims.composite())]
    ShapeMismatch { rows: usize, cols: usize, dims: BipartiteDims },
    #[error("matrix is not unitary: max |U†U - I| = {defect:e}")]
    NotUnitary { defect: f64 },
    #[error("product pair has dims {found}, gate acts on {expected}")]
    PairMismatch { expected: BipartiteDims, found: BipartiteDims },
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A verified unitary on `C^m ⊗ C^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "UnitaryFile", try_from = "UnitaryFile")]
pub struct UnitaryGate {
    matrix: ComplexMatrix,
    dims: BipartiteDims,
}

impl UnitaryGate {
    pub fn new(matrix: ComplexMatrix, dims: BipartiteDims) -> Result<Self, OverlapError> {
        let k = dims.composite();
        if matrix.rows() != k || matrix.cols() != k {
            return Err(OverlapError::ShapeMismatch {
                rows: matrix.rows(),
                cols: matrix.cols(),
                dims,
            });
        }
        let defect = matrix.unitarity_defect();
        if defect.is_nan() || defect >= TOL_UNITARY {
            return Err(OverlapError::NotUnitary { defect });
        }
        Ok(Self { matrix, dims })
    }

    pub fn identity(dims: BipartiteDims) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dims.composite()),
            dims,
        }
    }

    /// `|i⟩|j⟩ ↦ |j⟩|i⟩` on `C^k ⊗ C^k`.
    pub fn swap(k: usize) -> Self {
        let dims = BipartiteDims::new(k, k).expect("k must be positive");
        let matrix = ComplexMatrix::from_fn(k * k, k * k, |row, col| {
            let (i, j) = (col / k, col % k);
            if row == j * k + i {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        Self { matrix, dims }
    }

    /// Controlled-NOT on two qubits, control on the first factor.
    pub fn cnot() -> Self {
        let perm = [0, 1, 3, 2];
        let matrix = ComplexMatrix::from_fn(4, 4, |i, j| {
            if perm[j] == i {
                C64::new(1.0, 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        Self {
            matrix,
            dims: BipartiteDims::new(2, 2).unwrap(),
        }
    }

    /// `A ⊗ B` for local unitaries `A` (m×m) and `B` (n×n).
    pub fn local(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<Self, OverlapError> {
        let dims = BipartiteDims::new(a.rows(), b.rows())?;
        Self::new(a.kron(b), dims)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
            dims: self.dims,
        }
    }

    /// `self · other` (apply `other` first).
    pub fn compose(&self, other: &UnitaryGate) -> Result<Self, OverlapError> {
        if self.dims != other.dims {
            return Err(OverlapError::PairMismatch {
                expected: self.dims,
                found: other.dims,
            });
        }
        Self::new(self.matrix.matmul(&other.matrix), self.dims)
    }

    /// `U (c ⊗ d)`.
    pub fn apply(&self, pair: &ProductPair) -> Result<PureState, OverlapError> {
        self.check_pair(pair)?;
        Ok(PureState::from_unnormalized(self.matrix.mul_vec(&pair.product_vector()), self.dims)?)
    }

    /// `U† (a ⊗ b)`.
    pub fn apply_adjoint(&self, pair: &ProductPair) -> Result<PureState, OverlapError> {
        self.check_pair(pair)?;
        Ok(PureState::from_unnormalized(self.matrix.adjoint_mul_vec(&pair.product_vector()), self.dims)?)
    }

    /// `|⟨a⊗b| U |c⊗d⟩|`.
    pub fn transition(&self, output: &ProductPair, input: &ProductPair) -> Result<f64, OverlapError> {
        self.check_pair(output)?;
        self.check_pair(input)?;
        let image = self.matrix.mul_vec(&input.product_vector());
        Ok(output.product_vector().inner(&image).norm())
    }

    fn check_pair(&self, pair: &ProductPair) -> Result<(), OverlapError> {
        if pair.dims() != self.dims {
            return Err(OverlapError::PairMismatch {
                expected: self.dims,
                found: pair.dims(),
            });
        }
        Ok(())
    }

    pub(crate) fn from_parts_unchecked(matrix: ComplexMatrix, dims: BipartiteDims) -> Self {
        Self { matrix, dims }
    }
}

/// Restart and tolerance settings for the overlap optimizer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    /// Cap on full forward/backward sweeps per restart.
    pub max_iters: usize,
    /// A restart stops once a sweep improves the overlap by less than this.
    pub conv_tol: f64,
    /// `Λ ≥ 1 − witness_tol` counts as a product→product witness.
    pub witness_tol: f64,
    /// `Λ ≤ 1 − gap_tol` (with enough converged restarts) certifies a universal entangler.
    pub gap_tol: f64,
    /// Share of restarts that must converge before a universal-entangler verdict is issued.
    pub min_converged_fraction: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 64,
            max_iters: 10_000,
            conv_tol: 1e-12,
            witness_tol: 1e-6,
            gap_tol: 1e-4,
            min_converged_fraction: 0.5,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<(), OverlapError> {
        let bad = |msg: &str| Err(OverlapError::InvalidConfig(msg.to_string()));
        if self.restarts == 0 {
            return bad("restarts must be at least 1");
        }
        if self.max_iters == 0 {
            return bad("max_iters must be at least 1");
        }
        if self.conv_tol.is_nan() || self.conv_tol <= 0.0 {
            return bad("conv_tol must be positive");
        }
        if !(self.witness_tol > 0.0 && self.witness_tol < 1.0) {
            return bad("witness_tol must lie in (0, 1)");
        }
        if !(self.gap_tol >= self.witness_tol && self.gap_tol < 1.0) {
            return bad("gap_tol must lie in [witness_tol, 1)");
        }
        if !(0.0..=1.0).contains(&self.min_converged_fraction) {
            return bad("min_converged_fraction must lie in [0, 1]");
        }
        Ok(())
    }

    /// Converged restarts needed for a universal-entangler verdict.
    pub fn required_converged(&self) -> usize {
        ((self.restarts as f64 * self.min_converged_fraction).ceil() as usize).max(1)
    }
}

/// Best output product pair for a fixed input: the leading Schmidt pair of `U(c⊗d)`.
pub fn half_step_forward(gate: &UnitaryGate, input: &ProductPair) -> Result<(ProductPair, f64), OverlapError> {
    Ok(nearest_product(&gate.apply(input)?)?)
}

/// Best input product pair for a fixed output: the leading Schmidt pair of `U†(a⊗b)`.
pub fn half_step_backward(gate: &UnitaryGate, output: &ProductPair) -> Result<(ProductPair, f64), OverlapError> {
    Ok(nearest_product(&gate.apply_adjoint(output)?)?)
}

/// One alternating-maximization run.
#[derive(Debug, Clone, PartialEq)]
pub struct AscentRun {
    pub value: f64,
    pub input: ProductPair,
    pub output: ProductPair,
    pub sweeps: usize,
    pub converged: bool,
    /// Overlap after every half-step, starting with the first forward step.
    pub trace: Vec<f64>,
}

/// Alternates forward and backward half-steps from `start` until a full sweep
/// improves the overlap by less than `conv_tol` or `max_iters` sweeps ran.
///
/// Panics if a half-step decreases the overlap beyond rounding, which would
/// mean a half-step failed to solve its subproblem.
pub fn alternating_ascent(
    gate: &UnitaryGate,
    start: ProductPair,
    max_iters: usize,
    conv_tol: f64,
) -> Result<AscentRun, OverlapError> {
    let mut input = start;
    let (mut output, mut value) = half_step_forward(gate, &input)?;
    let mut trace = vec![value];
    let mut sweeps = 0;
    let mut converged = false;
    while sweeps < max_iters {
        sweeps += 1;
        let (next_input, back) = half_step_backward(gate, &output)?;
        let (next_output, fwd) = half_step_forward(gate, &next_input)?;
        assert!(
            back >= value - MONOTONE_SLACK && fwd >= back - MONOTONE_SLACK,
            "overlap decreased during alternating ascent: {value} -> {back} -> {fwd}"
        );
        trace.push(back);
        trace.push(fwd);
        input = next_input;
        output = next_output;
        let improvement = fwd - value;
        value = fwd;
        if improvement < conv_tol {
            converged = true;
            break;
        }
    }
    let input = input.canonical();
    let output = output.canonical();
    let value = gate.transition(&output, &input)?;
    Ok(AscentRun {
        value,
        input,
        output,
        sweeps,
        converged,
        trace,
    })
}

/// Estimated `Λ(U)` with its witnesses and telemetry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OverlapEstimate {
    pub lambda: f64,
    /// Input product pair `(c, d)` attaining `lambda`.
    pub input_witness: ProductPair,
    /// Output product pair `(a, b)` closest to `U(c⊗d)`.
    pub output_witness: ProductPair,
    /// Sweeps used by the winning restart.
    pub iterations: usize,
    /// Index of the winning restart.
    pub best_restart: usize,
    pub restarts_used: usize,
    /// Whether the winning restart converged before `max_iters`.
    pub converged: bool,
    pub converged_restarts: usize,
}

/// Multistart estimate of `Λ(U)`.
///
/// Restarts run in parallel on the current rayon pool; restart `r` starts
/// from a product pair drawn with seed `derive_seed(cfg.seed, r)` and the
/// reduction is ordered by restart index, so the result does not depend on
/// the number of worker threads.
pub fn max_product_overlap(gate: &UnitaryGate, cfg: &OptimizerConfig) -> Result<OverlapEstimate, OverlapError> {
    Ok(summarize(&multistart(gate, cfg, &[])?, cfg.restarts))
}

/// Runs one ascent from each of `warm_starts` followed by `cfg.restarts`
/// seeded random starts, returned in that order.
pub fn multistart(
    gate: &UnitaryGate,
    cfg: &OptimizerConfig,
    warm_starts: &[ProductPair],
) -> Result<Vec<AscentRun>, OverlapError> {
    cfg.validate()?;
    let dims = gate.dims();
    let warm = warm_starts.len();
    (0..warm + cfg.restarts)
        .into_par_iter()
        .map(|i| {
            let start = if i < warm {
                warm_starts[i].clone()
            } else {
                let mut rng = rng_from_seed(derive_seed(cfg.seed, (i - warm) as u64));
                ProductPair::random(&mut rng, dims)
            };
            alternating_ascent(gate, start, cfg.max_iters, cfg.conv_tol)
        })
        .collect()
}

/// Best run (lowest index among ties) with telemetry over all runs.
pub fn summarize(runs: &[AscentRun], restarts: usize) -> OverlapEstimate {
    let mut best = 0;
    for (r, run) in runs.iter().enumerate().skip(1) {
        if run.value > runs[best].value + TIE_TOL {
            best = r;
        }
    }
    let winner = &runs[best];
    OverlapEstimate {
        lambda: winner.value,
        input_witness: winner.input.clone(),
        output_witness: winner.output.clone(),
        iterations: winner.sweeps,
        best_restart: best,
        restarts_used: restarts,
        converged: winner.converged,
        converged_restarts: runs.iter().filter(|run| run.converged).count(),
    }
}

/// Input pairs of up to `limit` distinct local maxima, best first.
pub fn distinct_maximizers(runs: &[AscentRun], limit: usize) -> Vec<ProductPair> {
    let mut order: Vec<usize> = (0..runs.len()).collect();
    order.sort_by(|&a, &b| runs[b].value.total_cmp(&runs[a].value));
    let mut picked: Vec<ProductPair> = Vec::new();
    for i in order {
        if picked.len() == limit {
            break;
        }
        let candidate = &runs[i].input;
        let duplicate = picked.iter().any(|p| {
            let fidelity = p.left().inner(candidate.left()).norm() * p.right().inner(candidate.right()).norm();
            fidelity > 1.0 - 1e-6
        });
        if !duplicate {
            picked.push(candidate.clone());
        }
    }
    picked
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    /// `Λ ≤ 1 − gap_tol`: no product input found that stays close to a product.
    UniversalEntanglerNumerical,
    /// `Λ ≥ 1 − witness_tol`: some product state maps to a product state.
    NotUniversalWitnessFound,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::UniversalEntanglerNumerical => "UNIVERSAL_ENTANGLER_NUMERICAL",
            Verdict::NotUniversalWitnessFound => "NOT_UNIVERSAL_WITNESS_FOUND",
            Verdict::Inconclusive => "INCONCLUSIVE",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub dims: BipartiteDims,
    pub estimate: OverlapEstimate,
    pub verdict: Verdict,
    /// `1 − Λ²`: every product input yields at least this geometric entanglement.
    pub min_geometric_entanglement: f64,
    /// Entropy of entanglement (bits) of `U(c⊗d)` at the input witness; an upper
    /// bound on the smallest entropy the gate can output from a product input.
    pub entropy_at_witness: f64,
    /// Schmidt coefficients of `U(c⊗d)` at the input witness.
    pub witness_output_spectrum: Vec<f64>,
    pub required_converged_restarts: usize,
    pub config: OptimizerConfig,
}

pub fn classify(lambda: f64, converged_restarts: usize, cfg: &OptimizerConfig) -> Verdict {
    if lambda >= 1.0 - cfg.witness_tol {
        Verdict::NotUniversalWitnessFound
    } else if lambda <= 1.0 - cfg.gap_tol && converged_restarts >= cfg.required_converged() {
        Verdict::UniversalEntanglerNumerical
    } else {
        Verdict::Inconclusive
    }
}

/// Decides numerically whether `gate` is a universal entangler.
pub fn certify(gate: &UnitaryGate, cfg: &OptimizerConfig) -> Result<CertificationReport, OverlapError> {
    let estimate = max_product_overlap(gate, cfg)?;
    let verdict = classify(estimate.lambda, estimate.converged_restarts, cfg);
    let spectrum = schmidt(&gate.apply(&estimate.input_witness)?)?;
    Ok(CertificationReport {
        dims: gate.dims(),
        min_geometric_entanglement: (1.0 - estimate.lambda * estimate.lambda).max(0.0),
        entropy_at_witness: spectrum.entropy(),
        witness_output_spectrum: spectrum.coefficients,
        estimate,
        verdict,
        required_converged_restarts: cfg.required_converged(),
        config: cfg.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{qr_unitary, ComplexVector};
    use crate::rng::complex_gaussian_matrix;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn dims(m: usize, n: usize) -> BipartiteDims {
        BipartiteDims::new(m, n).unwrap()
    }

    fn haar_gate(seed: u64, d: BipartiteDims) -> UnitaryGate {
        let g = complex_gaussian_matrix(&mut rng_from_seed(seed), d.composite(), d.composite());
        UnitaryGate::new(qr_unitary(&g).unwrap(), d).unwrap()
    }

    #[test]
    fn gate_construction_validates() {
        let d = dims(2, 2);
        assert!(matches!(
            UnitaryGate::new(ComplexMatrix::identity(3), d),
            Err(OverlapError::ShapeMismatch { .. })
        ));
        let scaled = ComplexMatrix::identity(4).scale(C64::new(1.1, 0.0));
        match UnitaryGate::new(scaled, d) {
            Err(OverlapError::NotUnitary { defect }) => assert!((defect - 0.21).abs() < 1e-12),
            other => panic!("unexpected {other:?}"),
        }
        assert!(UnitaryGate::swap(3).matrix().unitarity_defect() < 1e-15);
        assert!(UnitaryGate::cnot().matrix().unitarity_defect() < 1e-15);
    }

    #[test]
    fn forward_on_identity_returns_input() {
        let d = dims(3, 4);
        let pair = ProductPair::random(&mut rng_from_seed(1), d);
        let (out, value) = half_step_forward(&UnitaryGate::identity(d), &pair).unwrap();
        assert!((value - 1.0).abs() < 1e-12);
        assert!((out.left().inner(pair.left()).norm() - 1.0).abs() < 1e-12);
        assert!((out.right().inner(pair.right()).norm() - 1.0).abs() < 1e-12);
        let (back, value) = half_step_backward(&UnitaryGate::identity(d), &pair).unwrap();
        assert!((value - 1.0).abs() < 1e-12);
        assert!((back.left().inner(pair.left()).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn forward_on_cnot() {
        let d = dims(2, 2);
        let (_, v) = half_step_forward(&UnitaryGate::cnot(), &ProductPair::basis(d, 0, 0)).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
        let plus = ComplexVector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]).unwrap();
        let pair = ProductPair::new(plus, ComplexVector::basis(2, 0)).unwrap();
        let (_, v) = half_step_forward(&UnitaryGate::cnot(), &pair).unwrap();
        assert!((v - FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn backward_on_swap_exchanges_factors() {
        let pair = ProductPair::random(&mut rng_from_seed(4), dims(3, 3));
        let (cd, value) = half_step_backward(&UnitaryGate::swap(3), &pair).unwrap();
        assert!((value - 1.0).abs() < 1e-12);
        assert!((cd.left().inner(pair.right()).norm() - 1.0).abs() < 1e-12);
        assert!((cd.right().inner(pair.left()).norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn backward_never_loses_to_preceding_forward() {
        let gate = haar_gate(10, dims(3, 4));
        let mut rng = rng_from_seed(11);
        for _ in 0..20 {
            let start = ProductPair::random(&mut rng, gate.dims());
            let (ab, fwd) = half_step_forward(&gate, &start).unwrap();
            let (_, back) = half_step_backward(&gate, &ab).unwrap();
            assert!(back >= fwd - 1e-12);
        }
    }

    #[test]
    fn trivial_gates_have_unit_overlap() {
        let cfg = OptimizerConfig::default().with_restarts(8);
        for gate in [
            UnitaryGate::identity(dims(3, 4)),
            UnitaryGate::identity(dims(1, 5)),
            UnitaryGate::swap(3),
            UnitaryGate::cnot(),
        ] {
            let est = max_product_overlap(&gate, &cfg).unwrap();
            assert!((est.lambda - 1.0).abs() < 1e-10, "{:?}", gate.dims());
            assert!(est.converged);
        }
    }

    #[test]
    fn estimate_witnesses_are_consistent() {
        let gate = haar_gate(5, dims(3, 4));
        let est = max_product_overlap(&gate, &OptimizerConfig::default().with_restarts(16)).unwrap();
        let recomputed = gate.transition(&est.output_witness, &est.input_witness).unwrap();
        assert!((recomputed - est.lambda).abs() < 1e-10);
        assert!(est.lambda <= 1.0 + 1e-10 && est.lambda > 0.0);
        for v in [est.input_witness.left(), est.input_witness.right(), est.output_witness.left()] {
            let lead = v.iter().find(|z| z.norm() > 1e-12).unwrap();
            assert!(lead.im.abs() < 1e-12 && lead.re > 0.0);
        }
    }

    #[test]
    fn ascent_traces_are_monotone() {
        for seed in 0..10 {
            let gate = haar_gate(100 + seed, dims(3, 3));
            let start = ProductPair::random(&mut rng_from_seed(seed), gate.dims());
            let run = alternating_ascent(&gate, start, 10_000, 1e-12).unwrap();
            assert!(run.trace.windows(2).all(|w| w[1] >= w[0] - 1e-12));
            assert_eq!(run.trace.len(), 2 * run.sweeps + 1);
        }
    }

    #[test]
    fn non_convergence_is_reported_not_raised() {
        let gate = haar_gate(3, dims(3, 4));
        let cfg = OptimizerConfig {
            restarts: 4,
            max_iters: 1,
            conv_tol: 1e-300,
            ..OptimizerConfig::default()
        };
        let est = max_product_overlap(&gate, &cfg).unwrap();
        assert!(!est.converged);
        assert_eq!(est.converged_restarts, 0);
        let report = certify(&gate, &cfg).unwrap();
        assert_ne!(report.verdict, Verdict::UniversalEntanglerNumerical);
    }

    #[test]
    fn warm_starts_come_first_and_are_deduplicated() {
        let gate = haar_gate(12, dims(3, 3));
        let cfg = OptimizerConfig::default().with_restarts(6);
        let plain = multistart(&gate, &cfg, &[]).unwrap();
        let warm = distinct_maximizers(&plain, 3);
        assert!(!warm.is_empty() && warm.len() <= 3);
        let runs = multistart(&gate, &cfg, &warm).unwrap();
        assert_eq!(runs.len(), 6 + warm.len());
        // the random part is unchanged by the warm prefix
        assert_eq!(&runs[warm.len()..], &plain[..]);
        // a converged maximizer restarted from itself stays put
        assert!((runs[0].value - summarize(&plain, 6).lambda).abs() < 1e-9);
    }

    #[test]
    fn config_validation() {
        let base = OptimizerConfig::default();
        assert!(base.validate().is_ok());
        assert!(OptimizerConfig { restarts: 0, ..base.clone() }.validate().is_err());
        assert!(OptimizerConfig { max_iters: 0, ..base.clone() }.validate().is_err());
        assert!(OptimizerConfig { conv_tol: 0.0, ..base.clone() }.validate().is_err());
        assert!(OptimizerConfig { gap_tol: 1e-8, ..base.clone() }.validate().is_err());
        assert_eq!(base.required_converged(), 32);
    }

    #[test]
    fn classification_bands() {
        let cfg = OptimizerConfig::default();
        assert_eq!(classify(1.0, 64, &cfg), Verdict::NotUniversalWitnessFound);
        assert_eq!(classify(1.0 - 5e-7, 0, &cfg), Verdict::NotUniversalWitnessFound);
        assert_eq!(classify(1.0 - 1e-5, 64, &cfg), Verdict::Inconclusive);
        assert_eq!(classify(0.9, 64, &cfg), Verdict::UniversalEntanglerNumerical);
        assert_eq!(classify(0.9, 31, &cfg), Verdict::Inconclusive);
    }

    #[test]
    fn identity_certifies_as_not_universal() {
        let report = certify(&UnitaryGate::identity(dims(3, 4)), &OptimizerConfig::default().with_restarts(4)).unwrap();
        assert_eq!(report.verdict, Verdict::NotUniversalWitnessFound);
        assert!(report.min_geometric_entanglement < 1e-10);
        assert!(report.entropy_at_witness < 1e-9);
        assert!(
            (report.min_geometric_entanglement - (1.0 - report.estimate.lambda.powi(2)).max(0.0)).abs() < 1e-12
        );
    }

    #[test]
    fn pair_dims_are_checked() {
        let gate = UnitaryGate::identity(dims(2, 3));
        let wrong = ProductPair::basis(dims(3, 2), 0, 0);
        assert!(matches!(half_step_forward(&gate, &wrong), Err(OverlapError::PairMismatch { .. })));
    }
}

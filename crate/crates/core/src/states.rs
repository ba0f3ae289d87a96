//! Bipartite pure states, Schmidt decomposition and entanglement measures.
//!
//! States are stored as representatives of projective points; everything that
//! compares states uses phase-invariant quantities (moduli of inner products
//! or Schmidt spectra).

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{kron, reshape, svd, ComplexVector, LinalgError, C64};
use crate::rng::random_unit_vector;

/// Normalization tolerance for states and product pairs.
pub const TOL_NORM: f64 = 1e-10;
/// Default threshold on Schmidt coefficients for calling a state entangled.
pub const DEFAULT_PRODUCT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StateError {
    #[error("subsystem dimensions must be positive (got {m}x{n})")]
    InvalidDims { m: usize, n: usize },
    #[error("expected {expected} amplitudes, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Local dimensions `(m, n)` of a bipartite system `H_m ⊗ H_n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawDims")]
pub struct BipartiteDims {
    m: usize,
    n: usize,
}

#[derive(Deserialize)]
struct RawDims {
    m: usize,
    n: usize,
}

impl TryFrom<RawDims> for BipartiteDims {
    type Error = StateError;

    fn try_from(raw: RawDims) -> Result<Self, Self::Error> {
        Self::new(raw.m, raw.n)
    }
}

impl BipartiteDims {
    pub fn new(m: usize, n: usize) -> Result<Self, StateError> {
        if m == 0 || n == 0 {
            return Err(StateError::InvalidDims { m, n });
        }
        Ok(Self { m, n })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Dimension `mn` of the composite space.
    pub fn composite(&self) -> usize {
        self.m * self.n
    }

    /// Dimension of the Segre variety of product states, `m + n − 2`.
    pub fn segre_dim(&self) -> i64 {
        self.m as i64 + self.n as i64 - 2
    }

    /// `(m − 2)(n − 2)`.
    pub fn criterion(&self) -> i64 {
        (self.m as i64 - 2) * (self.n as i64 - 2)
    }

    pub fn transposed(&self) -> Self {
        Self { m: self.n, n: self.m }
    }
}

impl std::fmt::Display for BipartiteDims {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.m, self.n)
    }
}

fn check_unit(v: &ComplexVector) -> Result<(), StateError> {
    let norm = v.norm();
    if (norm - 1.0).abs() > TOL_NORM {
        return Err(StateError::NotNormalized { norm });
    }
    Ok(())
}

/// Unit vector of the composite space `C^m ⊗ C^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: ComplexVector,
    dims: BipartiteDims,
}

impl PureState {
    pub fn new(amplitudes: ComplexVector, dims: BipartiteDims) -> Result<Self, StateError> {
        if amplitudes.len() != dims.composite() {
            return Err(StateError::LengthMismatch {
                expected: dims.composite(),
                found: amplitudes.len(),
            });
        }
        check_unit(&amplitudes)?;
        Ok(Self { amplitudes, dims })
    }

    /// Normalizes `amplitudes` first.
    pub fn from_unnormalized(amplitudes: ComplexVector, dims: BipartiteDims) -> Result<Self, StateError> {
        let normalized = amplitudes.normalized()?;
        Self::new(normalized, dims)
    }

    /// `Σ_k |kk⟩ / √min(m,n)`.
    pub fn maximally_entangled(dims: BipartiteDims) -> Self {
        let r = dims.m.min(dims.n);
        let amp = C64::new(1.0 / (r as f64).sqrt(), 0.0);
        let mut entries = vec![C64::new(0.0, 0.0); dims.composite()];
        for k in 0..r {
            entries[k * dims.n + k] = amp;
        }
        Self {
            amplitudes: ComplexVector::from_vec_unchecked(entries),
            dims,
        }
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R, dims: BipartiteDims) -> Self {
        Self {
            amplitudes: random_unit_vector(rng, dims.composite()),
            dims,
        }
    }

    pub fn amplitudes(&self) -> &ComplexVector {
        &self.amplitudes
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    /// `|⟨self|other⟩|`.
    pub fn overlap(&self, other: &PureState) -> f64 {
        self.amplitudes.inner(&other.amplitudes).norm()
    }
}

/// A point of the Segre variety: a pair of unit vectors `(left, right)` of
/// lengths `m` and `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPair")]
pub struct ProductPair {
    left: ComplexVector,
    right: ComplexVector,
}

#[derive(Deserialize)]
struct RawPair {
    left: ComplexVector,
    right: ComplexVector,
}

impl TryFrom<RawPair> for ProductPair {
    type Error = StateError;

    fn try_from(raw: RawPair) -> Result<Self, Self::Error> {
        Self::new(raw.left, raw.right)
    }
}

impl ProductPair {
    pub fn new(left: ComplexVector, right: ComplexVector) -> Result<Self, StateError> {
        check_unit(&left)?;
        check_unit(&right)?;
        Ok(Self { left, right })
    }

    /// Haar-uniform unit vectors on each factor.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, dims: BipartiteDims) -> Self {
        let left = random_unit_vector(rng, dims.m);
        let right = random_unit_vector(rng, dims.n);
        Self { left, right }
    }

    pub fn basis(dims: BipartiteDims, i: usize, j: usize) -> Self {
        Self {
            left: ComplexVector::basis(dims.m, i),
            right: ComplexVector::basis(dims.n, j),
        }
    }

    pub fn left(&self) -> &ComplexVector {
        &self.left
    }

    pub fn right(&self) -> &ComplexVector {
        &self.right
    }

    pub fn dims(&self) -> BipartiteDims {
        BipartiteDims {
            m: self.left.len(),
            n: self.right.len(),
        }
    }

    /// Composite vector `left ⊗ right`.
    pub fn product_vector(&self) -> ComplexVector {
        kron(&self.left, &self.right)
    }

    /// Each factor rotated so its first non-negligible entry is real positive.
    pub fn canonical(&self) -> Self {
        Self {
            left: self.left.with_canonical_phase(),
            right: self.right.with_canonical_phase(),
        }
    }

    pub fn swapped(&self) -> Self {
        Self {
            left: self.right.clone(),
            right: self.left.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtDecomposition {
    /// Descending, non-negative; `min(m, n)` of them.
    pub coefficients: Vec<f64>,
    pub left_basis: Vec<ComplexVector>,
    pub right_basis: Vec<ComplexVector>,
}

impl SchmidtDecomposition {
    pub fn rank(&self, tol: f64) -> usize {
        self.coefficients.iter().filter(|&&l| l > tol).count()
    }

    /// Entropy of entanglement in bits.
    pub fn entropy(&self) -> f64 {
        let e: f64 = self
            .coefficients
            .iter()
            .map(|l| l * l)
            .filter(|&p| p > 0.0)
            .map(|p| -p * p.log2())
            .sum();
        // Rounding can push a product state's entropy a hair below zero.
        e.max(0.0)
    }

    /// Geometric measure `1 − λ₁²`.
    pub fn geometric(&self) -> f64 {
        (1.0 - self.coefficients[0] * self.coefficients[0]).max(0.0)
    }

    /// `Σ_k λ_k · left_k ⊗ right_k`.
    pub fn reconstruct(&self) -> ComplexVector {
        let len = self.left_basis[0].len() * self.right_basis[0].len();
        let mut acc = vec![C64::new(0.0, 0.0); len];
        for ((l, a), b) in self.coefficients.iter().zip(&self.left_basis).zip(&self.right_basis) {
            for (o, x) in acc.iter_mut().zip(kron(a, b).iter()) {
                *o += x * *l;
            }
        }
        ComplexVector::from_vec_unchecked(acc)
    }
}

pub fn schmidt(psi: &PureState) -> Result<SchmidtDecomposition, StateError> {
    let dims = psi.dims;
    let s = svd(&reshape(&psi.amplitudes, dims.m, dims.n)?)?;
    // ψ_ij = Σ λ u_i conj(v_j), so the right Schmidt vectors are conj(v).
    Ok(SchmidtDecomposition {
        coefficients: s.singular_values,
        left_basis: s.left_vectors,
        right_basis: s.right_vectors.iter().map(ComplexVector::conj).collect(),
    })
}

pub fn schmidt_rank(psi: &PureState, tol: f64) -> Result<usize, StateError> {
    Ok(schmidt(psi)?.rank(tol))
}

pub fn entropy_entanglement(psi: &PureState) -> Result<f64, StateError> {
    Ok(schmidt(psi)?.entropy())
}

pub fn geometric_entanglement(psi: &PureState) -> Result<f64, StateError> {
    Ok(schmidt(psi)?.geometric())
}

/// Closest product state to `ψ` and its overlap `max_{a,b} |⟨a⊗b|ψ⟩| = λ₁`.
pub fn nearest_product(psi: &PureState) -> Result<(ProductPair, f64), StateError> {
    let s = schmidt(psi)?;
    let pair = ProductPair {
        left: s.left_basis[0].clone(),
        right: s.right_basis[0].clone(),
    };
    Ok((pair, s.coefficients[0]))
}

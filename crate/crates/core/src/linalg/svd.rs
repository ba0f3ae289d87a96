//! Thin SVD by one-sided (Hestenes) Jacobi rotations.
//!
//! The columns of the working copy are rotated pairwise until every pair is
//! orthogonal to machine precision; the column norms are then the singular
//! values and the normalized columns the left singular vectors. The
//! accumulated rotations form the right singular vectors. One-sided Jacobi is
//! accurate to high relative precision, which matters for the small Schmidt
//! coefficients the product tests inspect.

use super::{ComplexMatrix, ComplexVector, LinalgError, C64};

const MAX_SWEEPS: usize = 80;
const ROTATION_EPS: f64 = 4.0 * f64::EPSILON;

/// `M = Σ_k σ_k · left_k · right_k†`, with `min(rows, cols)` triplets and
/// singular values in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct SvdResult {
    pub left_vectors: Vec<ComplexVector>,
    pub singular_values: Vec<f64>,
    pub right_vectors: Vec<ComplexVector>,
}

impl SvdResult {
    pub fn reconstruct(&self) -> ComplexMatrix {
        let rows = self.left_vectors[0].len();
        let cols = self.right_vectors[0].len();
        let mut out = ComplexMatrix::zeros(rows, cols);
        for ((u, s), v) in self.left_vectors.iter().zip(&self.singular_values).zip(&self.right_vectors) {
            for i in 0..rows {
                for j in 0..cols {
                    out[(i, j)] += u[i] * v[j].conj() * *s;
                }
            }
        }
        out
    }
}

pub fn svd(m: &ComplexMatrix) -> Result<SvdResult, LinalgError> {
    if m.rows() >= m.cols() {
        jacobi_tall(m)
    } else {
        // M† = U Σ V†  ⇒  M = V Σ U†
        let t = jacobi_tall(&m.adjoint())?;
        Ok(SvdResult {
            left_vectors: t.right_vectors,
            singular_values: t.singular_values,
            right_vectors: t.left_vectors,
        })
    }
}

fn jacobi_tall(m: &ComplexMatrix) -> Result<SvdResult, LinalgError> {
    let (rows, cols) = (m.rows(), m.cols());
    debug_assert!(rows >= cols);
    let mut a: Vec<Vec<C64>> = (0..cols).map(|j| m.column(j).into_vec()).collect();
    let mut v: Vec<Vec<C64>> = (0..cols).map(|j| ComplexVector::basis(cols, j).into_vec()).collect();

    let mut converged = cols == 1;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..cols {
            for q in (p + 1)..cols {
                rotated |= rotate_pair(&mut a, &mut v, p, q);
            }
        }
        converged = !rotated;
    }
    if !converged {
        return Err(LinalgError::NonConvergence { sweeps: MAX_SWEEPS });
    }

    let norms: Vec<f64> = a.iter().map(|col| col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()).collect();
    let mut order: Vec<usize> = (0..cols).collect();
    // Stable sort keeps the factorization's order inside degenerate clusters.
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let scale = norms.iter().copied().fold(0.0, f64::max);
    let mut left: Vec<ComplexVector> = Vec::with_capacity(cols);
    let mut singular_values = Vec::with_capacity(cols);
    let mut right = Vec::with_capacity(cols);
    let mut deficient = Vec::new();
    for (slot, &j) in order.iter().enumerate() {
        let sigma = norms[j];
        singular_values.push(sigma);
        right.push(ComplexVector::from_vec_unchecked(v[j].clone()));
        if sigma > scale * 1e-13 && sigma > f64::MIN_POSITIVE {
            let inv = 1.0 / sigma;
            left.push(ComplexVector::from_vec_unchecked(a[j].iter().map(|z| z * inv).collect()));
        } else {
            left.push(ComplexVector::basis(rows, 0));
            deficient.push(slot);
        }
    }
    complete_basis(&mut left, &deficient);

    Ok(SvdResult {
        left_vectors: left,
        singular_values,
        right_vectors: right,
    })
}

/// Orthogonalizes columns `p` and `q`; returns whether a rotation was applied.
fn rotate_pair(a: &mut [Vec<C64>], v: &mut [Vec<C64>], p: usize, q: usize) -> bool {
    let mut alpha = 0.0;
    let mut beta = 0.0;
    let mut gamma = C64::new(0.0, 0.0);
    for (x, y) in a[p].iter().zip(&a[q]) {
        alpha += x.norm_sqr();
        beta += y.norm_sqr();
        gamma += x.conj() * y;
    }
    let g = gamma.norm();
    if g == 0.0 || g <= ROTATION_EPS * (alpha * beta).sqrt() {
        return false;
    }
    // Rotate column q by the phase of γ so the pair's cross term is real,
    // then apply the real Jacobi rotation that annihilates it.
    let phase = gamma.conj() / g;
    let zeta = (beta - alpha) / (2.0 * g);
    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = c * t;
    for cols in [a, v] {
        let (lo, hi) = cols.split_at_mut(q);
        let (xp, xq) = (&mut lo[p], &mut hi[0]);
        for (x, y) in xp.iter_mut().zip(xq.iter_mut()) {
            let yq = *y * phase;
            let xn = *x * c - yq * s;
            *y = *x * s + yq * c;
            *x = xn;
        }
    }
    true
}

/// Replaces the vectors at `slots` with unit vectors orthogonal to all others.
fn complete_basis(vectors: &mut [ComplexVector], slots: &[usize]) {
    if slots.is_empty() {
        return;
    }
    let len = vectors[0].len();
    let mut accepted: Vec<ComplexVector> = vectors
        .iter()
        .enumerate()
        .filter(|(i, _)| !slots.contains(i))
        .map(|(_, x)| x.clone())
        .collect();
    let mut candidates = (0..len).map(|k| ComplexVector::basis(len, k));
    for &slot in slots {
        loop {
            let e = candidates.next().expect("basis completion ran out of candidates");
            let mut w = e.into_vec();
            // Two passes of Gram-Schmidt.
            for _ in 0..2 {
                for b in &accepted {
                    let proj: C64 = b.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
                    for (wi, bi) in w.iter_mut().zip(b.iter()) {
                        *wi -= proj * bi;
                    }
                }
            }
            let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if norm > 0.5 / (len as f64).sqrt() {
                let unit = ComplexVector::from_vec_unchecked(w.iter().map(|z| z / norm).collect());
                vectors[slot] = unit.clone();
                accepted.push(unit);
                break;
            }
        }
    }
}

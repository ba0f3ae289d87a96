//! Exact existence criterion and algebraic product-state tests.
//!
//! A composite vector is a product state exactly when its `m × n`
//! matricization has rank one, i.e. when every 2×2 minor vanishes. These are
//! the defining equations of the Segre variety in the coordinates
//! `x_i y_j ↦ index i·n + j`.

use serde::{Deserialize, Serialize};

use crate::linalg::reshape;
use crate::states::{BipartiteDims, ProductPair, PureState};

/// Result of the existence decision for a pair of local dimensions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExistenceVerdict {
    pub dims: BipartiteDims,
    pub exists: bool,
    /// `m + n − 2`, the dimension of the set of product states.
    pub segre_dim: i64,
    /// `mn − 1`, the dimension of the projective state space.
    pub ambient_dim: i64,
    /// `2(m + n − 2) − (mn − 1) = 1 − (m − 2)(n − 2)`. Non-negative means the
    /// image of the product states under any gate must meet the product states.
    pub intersection_excess: i64,
}

/// Whether some unitary on `C^m ⊗ C^n` maps every product state to an
/// entangled state. Pure integer arithmetic.
pub fn exists_universal_entangler(dims: BipartiteDims) -> ExistenceVerdict {
    let (m, n) = (dims.m() as i64, dims.n() as i64);
    let segre_dim = dims.segre_dim();
    let ambient_dim = m * n - 1;
    let intersection_excess = 2 * segre_dim - ambient_dim;
    debug_assert_eq!(intersection_excess, 1 - dims.criterion());
    ExistenceVerdict {
        dims,
        exists: intersection_excess < 0,
        segre_dim,
        ambient_dim,
        intersection_excess,
    }
}

/// Image of a product pair under the Segre map: `left ⊗ right` as a state.
pub fn segre_embed(pair: &ProductPair) -> PureState {
    PureState::new(pair.product_vector(), pair.dims()).expect("tensor product of unit vectors is a unit vector")
}

/// Largest modulus among all 2×2 minors of the matricized state.
pub fn max_minor(psi: &PureState) -> f64 {
    let dims = psi.dims();
    let (m, n) = (dims.m(), dims.n());
    let a = reshape(psi.amplitudes(), m, n).expect("state length matches its dims");
    let mut worst: f64 = 0.0;
    for i in 0..m {
        for k in (i + 1)..m {
            for j in 0..n {
                for l in (j + 1)..n {
                    let minor = a[(i, j)] * a[(k, l)] - a[(i, l)] * a[(k, j)];
                    worst = worst.max(minor.norm());
                }
            }
        }
    }
    worst
}

/// Membership test for the Segre variety: every 2×2 minor has modulus ≤ `tol`.
pub fn is_product(psi: &PureState, tol: f64) -> bool {
    max_minor(psi) <= tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexVector;
    use crate::rng::rng_from_seed;
    use crate::states::{schmidt, schmidt_rank, DEFAULT_PRODUCT_TOL};

    fn dims(m: usize, n: usize) -> BipartiteDims {
        BipartiteDims::new(m, n).unwrap()
    }

    #[test]
    fn verdicts_for_known_dims() {
        assert!(!exists_universal_entangler(dims(2, 5)).exists);
        assert!(!exists_universal_entangler(dims(3, 3)).exists);
        assert!(exists_universal_entangler(dims(3, 4)).exists);
        assert!(!exists_universal_entangler(dims(1, 7)).exists);
        let v = exists_universal_entangler(dims(3, 4));
        assert_eq!((v.segre_dim, v.ambient_dim, v.intersection_excess), (5, 11, -1));
        assert_eq!(exists_universal_entangler(dims(3, 3)).intersection_excess, 0);
    }

    #[test]
    fn three_way_agreement_and_symmetry() {
        for m in 1..=12 {
            for n in 1..=12 {
                let d = dims(m, n);
                let v = exists_universal_entangler(d);
                let closed_form = m.min(n) >= 3 && (m, n) != (3, 3);
                assert_eq!(v.exists, closed_form, "{d}");
                assert_eq!(v.exists, 1 - d.criterion() < 0, "{d}");
                assert_eq!(v.exists, d.criterion() >= 2, "{d}");
                assert_eq!(v.exists, exists_universal_entangler(d.transposed()).exists);
            }
        }
    }

    #[test]
    fn embedding_places_basis_pairs() {
        let d = dims(3, 4);
        let e = segre_embed(&ProductPair::basis(d, 0, 1));
        assert_eq!(e.amplitudes(), &ComplexVector::basis(12, 1));
        let e = segre_embed(&ProductPair::basis(dims(2, 2), 0, 0));
        assert_eq!(e.amplitudes(), &ComplexVector::basis(4, 0));
    }

    #[test]
    fn random_embeddings_are_rank_one_and_pass_minor_test() {
        let mut rng = rng_from_seed(5);
        for (m, n) in [(2, 2), (3, 4), (5, 3), (6, 6)] {
            let p = ProductPair::random(&mut rng, dims(m, n));
            let psi = segre_embed(&p);
            assert_eq!(schmidt_rank(&psi, DEFAULT_PRODUCT_TOL).unwrap(), 1);
            assert!(is_product(&psi, DEFAULT_PRODUCT_TOL));
        }
    }

    #[test]
    fn bell_state_fails_minor_test() {
        let bell = PureState::maximally_entangled(dims(2, 2));
        assert!((max_minor(&bell) - 0.5).abs() < 1e-15);
        assert!(!is_product(&bell, DEFAULT_PRODUCT_TOL));
    }

    #[test]
    fn random_qutrit_pair_is_entangled() {
        let psi = PureState::random(&mut rng_from_seed(333), dims(3, 3));
        assert!(schmidt(&psi).unwrap().coefficients[1] > 1e-3);
        assert!(!is_product(&psi, DEFAULT_PRODUCT_TOL));
    }
}

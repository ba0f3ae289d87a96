use super::{ComplexMatrix, LinalgError, C64, TOL_RANK};

/// Unitary factor `Q` of `M = QR`, normalized so that every diagonal entry of
/// `R` is real and positive.
///
/// Uses modified Gram-Schmidt with one reorthogonalization pass, which yields
/// the positive-diagonal `R` directly and keeps `Q†Q = I` to rounding error.
pub fn qr_unitary(m: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    if !m.is_square() {
        return Err(LinalgError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let k = m.rows();
    let mut q: Vec<Vec<C64>> = Vec::with_capacity(k);
    for j in 0..k {
        let original = m.column(j).into_vec();
        let original_norm = original.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let mut w = original;
        for _ in 0..2 {
            for b in &q {
                let proj: C64 = b.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
                for (wi, bi) in w.iter_mut().zip(b) {
                    *wi -= proj * bi;
                }
            }
        }
        let norm = w.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let residual = if original_norm > 0.0 { norm / original_norm } else { 0.0 };
        if residual <= TOL_RANK {
            return Err(LinalgError::RankDeficient { column: j, residual });
        }
        q.push(w.into_iter().map(|z| z / norm).collect());
    }
    Ok(ComplexMatrix::from_fn(k, k, |i, j| q[j][i]))
}

/// Solves `A X = B` by LU factorization with partial pivoting.
pub fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let k = a.rows();
    if b.rows() != k {
        return Err(LinalgError::DimensionMismatch {
            expected: k,
            found: b.rows(),
        });
    }
    let mut lu = a.clone();
    let mut x = b.clone();
    let scale = a.max_abs();
    for col in 0..k {
        let pivot = (col..k)
            .max_by(|&i, &j| lu[(i, col)].norm().total_cmp(&lu[(j, col)].norm()))
            .unwrap();
        if lu[(pivot, col)].norm() <= scale * f64::EPSILON {
            return Err(LinalgError::Singular(col));
        }
        if pivot != col {
            for j in 0..k {
                let tmp = lu[(col, j)];
                lu[(col, j)] = lu[(pivot, j)];
                lu[(pivot, j)] = tmp;
            }
            for j in 0..x.cols() {
                let tmp = x[(col, j)];
                x[(col, j)] = x[(pivot, j)];
                x[(pivot, j)] = tmp;
            }
        }
        let d = lu[(col, col)];
        for i in (col + 1)..k {
            let factor = lu[(i, col)] / d;
            if factor == C64::new(0.0, 0.0) {
                continue;
            }
            for j in col..k {
                let t = lu[(col, j)];
                lu[(i, j)] -= factor * t;
            }
            for j in 0..x.cols() {
                let t = x[(col, j)];
                x[(i, j)] -= factor * t;
            }
        }
    }
    for col in (0..k).rev() {
        let d = lu[(col, col)];
        for j in 0..x.cols() {
            let mut acc = x[(col, j)];
            for l in (col + 1)..k {
                acc -= lu[(col, l)] * x[(l, j)];
            }
            x[(col, j)] = acc / d;
        }
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{complex_gaussian_matrix, rng_from_seed};

    #[test]
    fn identity_is_fixed() {
        let i = ComplexMatrix::identity(5);
        assert_eq!(qr_unitary(&i).unwrap(), i);
    }

    #[test]
    fn diagonal_phases_are_normalized() {
        let m = ComplexMatrix::from_fn(2, 2, |i, j| match (i, j) {
            (0, 0) => C64::new(0.0, 2.0),
            (1, 1) => C64::new(3.0, 0.0),
            _ => C64::new(0.0, 0.0),
        });
        let q = qr_unitary(&m).unwrap();
        assert!((q[(0, 0)] - C64::new(0.0, 1.0)).norm() < 1e-15);
        assert!((q[(1, 1)] - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert_eq!(q[(0, 1)], C64::new(0.0, 0.0));
        assert_eq!(q[(1, 0)], C64::new(0.0, 0.0));
    }

    #[test]
    fn seeded_random_6x6_is_unitary_with_positive_r() {
        let m = complex_gaussian_matrix(&mut rng_from_seed(11), 6, 6);
        let q = qr_unitary(&m).unwrap();
        assert!(q.unitarity_defect() < 1e-10);
        // R = Q†M must be upper triangular with real positive diagonal.
        let r = q.adjoint().matmul(&m);
        for i in 0..6 {
            assert!(r[(i, i)].re > 0.0 && r[(i, i)].im.abs() < 1e-12);
            for j in 0..i {
                assert!(r[(i, j)].norm() < 1e-12);
            }
        }
    }

    #[test]
    fn rank_deficient_input_is_reported() {
        let m = ComplexMatrix::from_fn(3, 3, |i, j| C64::new((i + 1) as f64 * (j + 1) as f64, 0.0));
        assert!(matches!(qr_unitary(&m), Err(LinalgError::RankDeficient { .. })));
        assert!(matches!(
            qr_unitary(&ComplexMatrix::zeros(2, 3)),
            Err(LinalgError::NotSquare { .. })
        ));
    }

    #[test]
    fn solve_recovers_known_solution() {
        let mut rng = rng_from_seed(5);
        let a = complex_gaussian_matrix(&mut rng, 7, 7);
        let x = complex_gaussian_matrix(&mut rng, 7, 3);
        let b = a.matmul(&x);
        let got = solve(&a, &b).unwrap();
        assert!(got.sub(&x).frobenius_norm() < 1e-10);
        assert!(matches!(solve(&ComplexMatrix::zeros(2, 2), &b), Err(LinalgError::DimensionMismatch { .. })));
        assert!(matches!(
            solve(&ComplexMatrix::zeros(3, 3), &ComplexMatrix::identity(3)),
            Err(LinalgError::Singular(0))
        ));
    }
}

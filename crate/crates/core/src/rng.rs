//! Seeded randomness.
//!
//! Every random object in the crate is drawn from a ChaCha8 stream whose seed
//! is derived from `(master seed, index)` by [`derive_seed`], so work items can
//! be evaluated in any order, on any number of threads, and still reproduce.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{ComplexMatrix, ComplexVector, C64};

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Sub-seed for work item `index` under `master`.
pub fn derive_seed(master: u64, index: u64) -> u64 {
    splitmix64(master ^ splitmix64(index.wrapping_add(0x5851_F42D_4C95_7F2D)))
}

/// Standard complex Gaussian: real and imaginary parts i.i.d. N(0, 1/2).
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Ginibre matrix of i.i.d. standard complex Gaussians.
pub fn complex_gaussian_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Uniformly distributed point on the unit sphere of `C^len`.
pub fn random_unit_vector<R: Rng + ?Sized>(rng: &mut R, len: usize) -> ComplexVector {
    loop {
        let raw = ComplexVector::from_vec_unchecked((0..len).map(|_| complex_gaussian(rng)).collect());
        // A zero draw has probability zero but costs nothing to guard.
        if let Ok(v) = raw.normalized() {
            return v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derived_seeds_are_distinct_and_stable() {
        let seeds: Vec<u64> = (0..1000).map(|i| derive_seed(42, i)).collect();
        let mut sorted = seeds.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), seeds.len());
        assert_eq!(derive_seed(42, 7), seeds[7]);
        assert_ne!(derive_seed(42, 7), derive_seed(43, 7));
    }

    #[test]
    fn unit_vectors_are_normalized() {
        let mut rng = rng_from_seed(1);
        for len in 1..10 {
            assert!((random_unit_vector(&mut rng, len).norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn complex_gaussian_has_unit_variance() {
        let mut rng = rng_from_seed(3);
        let n = 20_000;
        let mean_sq: f64 = (0..n).map(|_| complex_gaussian(&mut rng).norm_sqr()).sum::<f64>() / n as f64;
        // E|z|^2 = 1, Var|z|^2 = 1, so 5 standard errors is 5/sqrt(n).
        assert!((mean_sq - 1.0).abs() < 5.0 / (n as f64).sqrt());
    }
}

//! Fixtures shared by the kernel benchmarks.

use entangler_core::rng::{complex_gaussian_matrix, rng_from_seed};
use entangler_core::search::haar_gate;
use entangler_core::{BipartiteDims, ComplexMatrix, UnitaryGate};

/// Dimension pairs the benchmarks sweep over, smallest first.
pub const BENCH_DIMS: [(usize, usize); 4] = [(2, 2), (3, 3), (3, 4), (4, 4)];

pub fn gaussian_matrix(rows: usize, cols: usize, seed: u64) -> ComplexMatrix {
    complex_gaussian_matrix(&mut rng_from_seed(seed), rows, cols)
}

pub fn gate(m: usize, n: usize, seed: u64) -> UnitaryGate {
    haar_gate(BipartiteDims::new(m, n).expect("positive dims"), seed)
}

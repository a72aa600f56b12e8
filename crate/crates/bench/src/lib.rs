//! Benchmark fixtures: the catalog groups in their simplified forms, and a
//! deterministic family of integer matrices.

use vknot::catalog::{self, KnotId};
use vknot::{IntMatrix, Presentation, Rep};

pub fn knot_group(id: KnotId) -> Presentation {
    catalog::group(id, Rep::A, 1000).expect("catalog groups build")
}

/// `n x n` with entries from a linear congruential sequence in `-9..=9`.
pub fn lcg_matrix(n: usize, seed: u64) -> IntMatrix {
    let mut state = seed;
    let rows: Vec<Vec<i64>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    ((state >> 33) % 19) as i64 - 9
                })
                .collect()
        })
        .collect();
    IntMatrix::from_rows(&rows)
}

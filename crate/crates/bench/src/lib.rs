//! Fixed inputs shared by the benchmarks.

use cmodlab_core::dvr::{Dvr, Matrix, OMatrix};
use cmodlab_core::laws::{CiFactor, CiSpec, FiberProductSpec, Generated};

/// A dense n×n matrix over Z_(p) with entries from a linear congruential
/// sequence, so every run sees the same input.
pub fn lcg_matrix(ring: &Dvr, n: usize, seed: u64) -> OMatrix {
    let mut x = seed;
    Matrix::from_fn(n, n, |_, _| {
        x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ring.from_int(((x >> 33) % 1000) as i64 - 500)
    })
}

pub fn fiber_product(p: u64, exponents: &[u32]) -> Generated {
    Generated::from_text(FiberProductSpec::new(p, exponents.to_vec()).text()).expect("valid fiber product")
}

/// Λ_c[x_1..x_n]/(x_j² − (p^{a_j} + p t_1) x_j).
pub fn twisted_ci(p: u64, c: usize, exponents: &[u32]) -> Generated {
    let factors = exponents.iter().map(|&a| CiFactor { a, twist: (c > 0).then_some((0, 1)) }).collect();
    Generated::from_text(CiSpec { p, c, factors }.text()).expect("valid complete intersection")
}

//! Fixtures shared by the benchmarks.

use lewislab_core::lewis::build_extended_system;
use lewislab_core::{coset_table, GroupSpec, IntMatrix, Lambda};

/// Extended system matrix for `Γ(N)` or `Γ₀(N)` at degree `n`, λ = −1.
pub fn extended_matrix(group: GroupSpec, n: u32) -> IntMatrix {
    let table = coset_table(group).expect("valid group");
    build_extended_system(&table, n, Lambda::Minus).expect("valid degree").matrix
}

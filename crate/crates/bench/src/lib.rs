//! Shared inputs for the pipeline benchmarks.

use dihedral_core::seifert::{connected_sum, twist_knot};
use dihedral_core::SeifertMatrix;

pub fn knot_937() -> SeifertMatrix {
    SeifertMatrix::from_rows(&[[1, 0, 0, 0], [0, 1, 0, 0], [1, 0, -2, 1], [-1, -1, 0, -1]]).expect("valid")
}

/// Connected sum of the twist knots `K_m` for each `m`.
pub fn twist_sum(ms: &[i64]) -> SeifertMatrix {
    ms.iter()
        .map(|&m| twist_knot(m))
        .reduce(|a, b| connected_sum(&a, &b))
        .unwrap_or_else(SeifertMatrix::unknot)
}

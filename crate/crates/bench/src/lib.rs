//! Inputs shared by the benchmarks in `benches/`.

use ckn_core::closed_forms::v0_eval;
use ckn_core::cylinder_variational::CylField;
use ckn_core::schrodinger_1d::{LineGrid, Potential1D};

/// The optimal potential `V₀` at exponent `gamma` on `[-20, 20]` with `n` points.
pub fn v0_potential(gamma: f64, n: usize) -> Potential1D {
    let grid = LineGrid::new(20.0, n).expect("grid");
    Potential1D::from_fn(grid, |s| v0_eval(s, gamma)).expect("finite potential")
}

/// Perturbed extremal at `(N = 3, p = 3, Λ = 3)` on `[-20, 20]` with `n` points.
pub fn perturbed_extremal(n: usize, l_max: usize) -> CylField {
    let grid = LineGrid::new(20.0, n).expect("grid");
    CylField::u_star(grid, 3, l_max, 3.0, 3.0, 1.0, 0.1).expect("extremal")
}

//! Random field generators shared by the integration tests and the
//! acceptance harness.
#![allow(dead_code)]

use ckn_core::cylinder_variational::CylField;
use ckn_core::schrodinger_1d::LineGrid;
use rand::Rng;

/// Maximum of `|e_ℓ|` on the sphere for the orthonormal zonal basis.
pub fn basis_sup(n: u32, l: usize) -> f64 {
    match (n, l) {
        (_, 0) => 1.0,
        (2, _) => 2f64.sqrt(),
        _ => (2.0 * l as f64 + 1.0).sqrt(),
    }
}

/// Non-negative field `Σ_j a_j sech^{k_j}(b_j(s - c_j)) (1 + Σ_ℓ ε_{jℓ} e_ℓ)`
/// with angular factors bounded away from zero.
pub fn random_nonnegative_field<R: Rng>(rng: &mut R, grid: LineGrid, n: u32, l_max: usize) -> CylField {
    let bumps: Vec<(f64, f64, f64, f64, Vec<f64>)> = (0..rng.gen_range(1..=3))
        .map(|_| {
            let budget = rng.gen_range(0.0..0.9);
            let raw: Vec<f64> = (1..=l_max).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let total: f64 = raw
                .iter()
                .enumerate()
                .map(|(i, x)| x.abs() * basis_sup(n, i + 1))
                .sum::<f64>()
                .max(1e-300);
            let eps = raw.iter().map(|x| x * budget / total).collect();
            (
                rng.gen_range(0.2..2.0),
                rng.gen_range(0.5..3.0),
                rng.gen_range(0.4..1.6),
                rng.gen_range(-3.0..3.0),
                eps,
            )
        })
        .collect();
    CylField::from_profiles(grid, n, l_max, |l, s| {
        bumps
            .iter()
            .map(|(a, k, b, c, eps)| {
                let radial = a / (b * (s - c)).cosh().powf(*k);
                if l == 0 {
                    radial
                } else {
                    radial * eps[l - 1]
                }
            })
            .sum()
    })
    .expect("N in {2, 3}")
}

/// Smooth signed field with all degrees populated.
pub fn random_field<R: Rng>(rng: &mut R, grid: LineGrid, n: u32, l_max: usize) -> CylField {
    let params: Vec<(f64, f64, f64)> = (0..=l_max)
        .map(|l| {
            let amp = if l == 0 { 1.0 } else { rng.gen_range(-0.4..0.4) };
            (amp, rng.gen_range(0.5..1.5), rng.gen_range(-2.0..2.0))
        })
        .collect();
    CylField::from_profiles(grid, n, l_max, |l, s| {
        let (a, b, c) = params[l];
        a / (b * (s - c)).cosh().powi(2)
    })
    .expect("N in {2, 3}")
}

use crate::closed_forms::{profile_constants, v_star_eval};
use crate::error::{domain, numeric, Result};
use crate::schrodinger_1d::{lowest_eigenpair, poschl_teller_ground, LineGrid, Potential1D};
use crate::sphere_ops::eigenvalue;

fn check(ell: usize, lambda: f64, p: f64, n: u32) -> Result<()> {
    if n < 2 {
        return domain(format!("N must be >= 2, got {n}"));
    }
    if ell < 1 {
        return domain("second-variation modes start at degree 1");
    }
    super::check_params(lambda, p, 1.0)
}

/// `Λ + ℓ(ℓ+N-2) - p²Λ/4`: the Pöschl–Teller value of the lowest eigenvalue
/// of `-∂_s² + Λ + ℓ(ℓ+N-2) - (p-1) u⋆^{p-2}`.
pub fn second_variation_closed_form(ell: usize, lambda: f64, p: f64, n: u32) -> Result<f64> {
    check(ell, lambda, p, n)?;
    let pc = profile_constants(lambda, p, 1.0)?;
    let depth = (p - 1.0) * pc.a.powf(p - 2.0);
    Ok(lambda + eigenvalue(ell, n) - poschl_teller_ground(depth, pc.b))
}

fn binding(pc: &crate::closed_forms::ProfileConstants, p: f64, s_max: f64, nodes: usize) -> Result<f64> {
    let grid = LineGrid::new(s_max, nodes)?;
    let w = Potential1D::from_fn(grid, |s| (p - 1.0) * v_star_eval(s, pc))?;
    Ok(lowest_eigenpair(&w)?.lambda1)
}

/// Lowest eigenvalue of `-∂_s² + Λ + ℓ(ℓ+N-2) - (p-1) u⋆^{p-2}` from the
/// finite-difference solver, Richardson-extrapolated over `h` and `h/2`.
pub fn second_variation_mode(ell: usize, lambda: f64, p: f64, n: u32) -> Result<f64> {
    check(ell, lambda, p, n)?;
    let pc = profile_constants(lambda, p, 1.0)?;
    let s_max = (14.5 / pc.b).max(23.1 / lambda.sqrt());
    let coarse = 3000;
    let l_h = binding(&pc, p, s_max, coarse)?;
    let l_h2 = binding(&pc, p, s_max, 2 * coarse + 1)?;
    let l1 = (4.0 * l_h2 - l_h) / 3.0;
    Ok(lambda + eigenvalue(ell, n) - l1)
}

/// `Λ` at which the degree-one second variation changes sign, by bisection.
pub fn fs_threshold(p: f64, n: u32) -> Result<f64> {
    if !(p > 2.0 && p < 6.0) {
        return domain(format!("p must lie in (2, 6), got {p}"));
    }
    if n >= 3 && p > 2.0 * n as f64 / (n as f64 - 2.0) {
        return domain(format!("p = {p} is supercritical for N = {n}"));
    }
    let mode = |l: f64| second_variation_mode(1, l, p, n);
    let (mut lo, mut hi) = (1.0, 1.0);
    let mut expansions = 0;
    while mode(lo)? <= 0.0 {
        lo *= 0.5;
        expansions += 1;
        if expansions > 60 {
            return numeric("no positive second variation in bracket", lo);
        }
    }
    while mode(hi)? > 0.0 {
        hi *= 2.0;
        expansions += 1;
        if expansions > 60 {
            return numeric("no sign change of the second variation in bracket", hi);
        }
    }
    while hi - lo > 1e-7 * hi {
        let mid = 0.5 * (lo + hi);
        if mode(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

use serde::{Deserialize, Serialize};

use super::minimize::{minimize_multistart, MinimizeOptions};
use super::quotient::el_normalize;
use super::{desk_grid, profile_decay, Ops};
use crate::closed_forms::{c_lt, frak_c, k_ckn_star};
use crate::error::{domain, Result};
use crate::param_space::{a_critical, gammas, theta_min};

/// Admissible upper end `(N-1)/𝔊(p,θ) · ((2θ-3)p+6)/(4(p-2))` for `Λ`.
pub fn sandwich_lambda_bound(theta: f64, p: f64, n: u32) -> Result<f64> {
    let g = frak_c(p, theta)?;
    Ok((n as f64 - 1.0) / g * ((2.0 * theta - 3.0) * p + 6.0) / (4.0 * (p - 2.0)))
}

/// Numerical constant of the θ-family against its two closed-form bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub theta: f64,
    #[serde(rename = "Lambda")]
    pub lambda: f64,
    pub p: f64,
    #[serde(rename = "N")]
    pub n: u32,
    pub lambda_bound: f64,
    pub k_lower: f64,
    pub k_numeric: f64,
    pub k_upper: f64,
    pub frak_c: f64,
    pub gamma_theta: f64,
    pub q: f64,
    #[serde(rename = "D")]
    pub d: f64,
    /// `∫∫u^{θp}` of the normalized minimizer.
    pub hoelder_lhs: f64,
    /// `(∫∫u²)^{(1-θ)p/(p-2)} (∫∫u^p)^{(θp-2)/(p-2)}`.
    pub hoelder_rhs: f64,
    pub angular_fraction: f64,
    pub inside: bool,
    pub converged: bool,
    pub limit_case: bool,
}

/// Relative tolerance on the lower bound; the discrete radial quotient
/// differs from the exact one at this level.
const LOWER_TOL: f64 = 1e-6;

pub fn sandwich_check(
    theta: f64,
    lambda: f64,
    p: f64,
    n: u32,
    l_max: usize,
    opts: &MinimizeOptions,
) -> Result<SandwichReport> {
    let t_min = theta_min(p, n)?;
    if !(theta >= t_min - 1e-12 && theta <= 1.0) {
        return domain(format!("theta = {theta} outside [{t_min}, 1]"));
    }
    let bound = sandwich_lambda_bound(theta, p, n)?;
    let ac2 = a_critical(n)?.powi(2);
    if !(lambda > ac2 && lambda <= bound * (1.0 + 1e-12)) {
        return domain(format!("Lambda = {lambda} outside ({ac2}, {bound}]"));
    }
    let (gamma_theta, q) = gammas(p, theta)?;
    let g = frak_c(p, theta)?;
    let k_lower = k_ckn_star(theta, lambda, p)?;
    let e = (2.0 * theta - 1.0) * p + 2.0;
    let k_upper = k_lower * g.powf(e / (2.0 * p));
    let grid = desk_grid(profile_decay(lambda, p, theta)?)?;
    let (best, field, _) = minimize_multistart(grid, n, l_max, lambda, p, theta, opts)?;
    let k_numeric = best.constant;
    let u = el_normalize(&field, lambda, p)?;
    let ops = Ops::new(&u);
    let parts = ops.parts(&u.data, p);
    let hoelder_rhs = parts.m.powf((1.0 - theta) * p / (p - 2.0)) * parts.pp.powf((theta * p - 2.0) / (p - 2.0));
    let d = c_lt(gamma_theta)?.powf(1.0 / gamma_theta) * hoelder_rhs.powf(1.0 / gamma_theta);
    let nodal = ops.nodal(&u.data);
    let hoelder_lhs = ops.h
        * nodal
            .chunks(ops.m())
            .map(|row| {
                row.iter()
                    .zip(&ops.quad.weights)
                    .map(|(x, w)| w * x.abs().powf(theta * p))
                    .sum::<f64>()
            })
            .sum::<f64>();
    let inside = k_numeric >= k_lower * (1.0 - LOWER_TOL) && k_numeric <= k_upper * (1.0 + LOWER_TOL);
    Ok(SandwichReport {
        theta,
        lambda,
        p,
        n,
        lambda_bound: bound,
        k_lower,
        k_numeric,
        k_upper,
        frak_c: g,
        gamma_theta,
        q,
        d,
        hoelder_lhs,
        hoelder_rhs,
        angular_fraction: best.angular_fraction,
        inside,
        converged: best.converged,
        limit_case: (theta - t_min).abs() <= 1e-12,
    })
}

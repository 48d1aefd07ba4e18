use serde::{Deserialize, Serialize};

use super::minimize::{minimize_multistart, MinimizeOptions};
use super::{desk_grid, profile_decay};
use crate::closed_forms::k_star;
use crate::error::{domain, numeric, Result};
use crate::param_space::{gammas, lambda_star};

/// Slope of the linear law `Λ = C*(1, p)^{2p/(p+2)} μ` that holds while the
/// optimal potential is symmetric (probability measure on the sphere).
pub fn radial_lt_slope(p: f64) -> Result<f64> {
    Ok(k_star(1.0, p)?.powf(2.0 * p / (p + 2.0)))
}

/// Outcome of inverting `μ^{2γ/(2γ+1)} = 1/C(Λ, p, N)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LambdaGammaReport {
    pub mu: f64,
    pub p: f64,
    #[serde(rename = "N")]
    pub n: u32,
    pub gamma: f64,
    #[serde(rename = "Lambda")]
    pub lambda: f64,
    pub slope: f64,
    /// `true` when `slope · μ <= Λ_star` and the linear law was used.
    pub symmetric: bool,
    /// Number of multistart minimizations performed.
    pub evaluations: usize,
    pub angular_fraction: f64,
}

/// `Λ_γ^N(μ)` with `γ = (p+2)/(2(p-2))`. Beyond the symmetric range the
/// optimal `Λ` is bracketed and bisected on the numerical `Q_min(Λ)`.
pub fn lambda_gamma_n(mu: f64, p: f64, n: u32, l_max: usize, opts: &MinimizeOptions) -> Result<LambdaGammaReport> {
    if !(mu > 0.0) || !mu.is_finite() {
        return domain(format!("mu must be > 0, got {mu}"));
    }
    let (gamma, _) = gammas(p, 1.0)?;
    let slope = radial_lt_slope(p)?;
    let linear = slope * mu;
    let mut report = LambdaGammaReport {
        mu,
        p,
        n,
        gamma,
        lambda: linear,
        slope,
        symmetric: true,
        evaluations: 0,
        angular_fraction: 0.0,
    };
    if linear <= lambda_star(p, n)? {
        return Ok(report);
    }
    report.symmetric = false;
    let target = mu.powf((p + 2.0) / (2.0 * p));
    let mut evals = 0usize;
    let mut q_min = |lambda: f64| -> Result<(f64, f64)> {
        evals += 1;
        let grid = desk_grid(profile_decay(lambda, p, 1.0)?)?;
        let (best, _, _) = minimize_multistart(grid, n, l_max, lambda, p, 1.0, opts)?;
        Ok((best.quotient, best.angular_fraction))
    };
    // Q_min(Λ) <= Q*(Λ), so the root lies at or above the linear law.
    let mut lo = linear;
    let mut hi = 2.0 * linear;
    let mut hi_frac;
    loop {
        let (q, frac) = q_min(hi)?;
        hi_frac = frac;
        if q >= target {
            break;
        }
        lo = hi;
        hi *= 2.0;
        if hi > 1e3 * linear {
            return numeric("no bracket for the inverse of Q_min", q / target);
        }
    }
    while (hi - lo) > 1e-6 * hi {
        let mid = 0.5 * (lo + hi);
        let (q, frac) = q_min(mid)?;
        if q >= target {
            hi = mid;
            hi_frac = frac;
        } else {
            lo = mid;
        }
    }
    report.lambda = 0.5 * (lo + hi);
    report.angular_fraction = hi_frac;
    report.evaluations = evals;
    Ok(report)
}

/// Largest `μ(V)` for which the linear law is guaranteed:
/// `Λ_star(p) / C*(1, p, N)^{2p/(p+2)}`.
pub fn lt_symmetric_threshold(gamma: f64, p: f64, n: u32) -> Result<f64> {
    let (g, _) = gammas(p, 1.0)?;
    if (g - gamma).abs() > 1e-12 * g {
        return domain(format!("gamma = {gamma} does not match p = {p} (expected {g})"));
    }
    Ok(lambda_star(p, n)? / radial_lt_slope(p)?)
}

//! One-dimensional quadrature rules shared by the closed-form checks and
//! the spherical/radial discretisations.

use crate::error::{numeric, Result};

/// Outcome of an adaptive Romberg integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// Difference between the last two diagonal Romberg entries.
    pub error: f64,
    pub evaluations: usize,
}

/// Romberg integration of `f` over `[a, b]` with interval doubling until two
/// successive diagonal entries agree to `abs_tol`.
pub fn romberg<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<Integral> {
    const MAX_LEVEL: usize = 22;
    const MIN_LEVEL: usize = 5;
    let width = b - a;
    let mut prev_row = vec![0.5 * width * (f(a) + f(b))];
    let mut evaluations = 2;
    let mut last_error = f64::INFINITY;
    for level in 1..=MAX_LEVEL {
        let panels = 1usize << level;
        let h = width / panels as f64;
        let mut mid_sum = 0.0;
        for k in (1..panels).step_by(2) {
            mid_sum += f(a + k as f64 * h);
        }
        evaluations += panels / 2;
        let mut row = Vec::with_capacity(level + 1);
        row.push(0.5 * prev_row[0] + h * mid_sum);
        let mut factor = 1.0;
        for j in 1..=level {
            factor *= 4.0;
            let extrap = row[j - 1] + (row[j - 1] - prev_row[j - 1]) / (factor - 1.0);
            row.push(extrap);
        }
        last_error = (row[level] - prev_row[level - 1]).abs();
        if level >= MIN_LEVEL && last_error <= abs_tol {
            return Ok(Integral {
                value: row[level],
                error: last_error,
                evaluations,
            });
        }
        prev_row = row;
    }
    numeric(
        format!("romberg did not reach {abs_tol:e} on [{a}, {b}] after {evaluations} evaluations"),
        last_error,
    )
}

/// Integral over the real line of an even-or-not integrand that decays at
/// least like `exp(-c * width_scale * |s|)`: truncated at
/// `|s| = max(30 / width_scale, 30)` and refined by Romberg.
pub fn integrate_line<F: Fn(f64) -> f64>(f: F, width_scale: f64, abs_tol: f64) -> Result<Integral> {
    let half = (30.0 / width_scale).max(30.0);
    romberg(f, -half, half, abs_tol)
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, nodes ascending.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "gauss_legendre needs at least one node");
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d.is_finite() {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

//! Ground state of `-d²/ds² - V` on `[-S, S]` with Dirichlet ends, discretised
//! by second-order central differences.

use serde::{Deserialize, Serialize};
use std::io::Read;

use crate::closed_forms::c_lt;
use crate::error::{domain, numeric, Result};

/// Uniform interior grid `s_i = -S + i h`, `i = 1..n`, `h = 2S/(n+1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineGrid {
    #[serde(rename = "S")]
    pub s_max: f64,
    pub n: usize,
    pub h: f64,
}

impl LineGrid {
    pub fn new(s_max: f64, n: usize) -> Result<Self> {
        if !(s_max > 0.0) || !s_max.is_finite() {
            return domain(format!("half-width S must be > 0, got {s_max}"));
        }
        if n < 16 {
            return domain(format!("grid needs n >= 16 interior nodes, got {n}"));
        }
        Ok(LineGrid {
            s_max,
            n,
            h: 2.0 * s_max / (n as f64 + 1.0),
        })
    }

    pub fn node(&self, i: usize) -> f64 {
        -self.s_max + (i as f64 + 1.0) * self.h
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.node(i)).collect()
    }
}

/// Non-negative potential sampled at the interior nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential1D {
    pub grid: LineGrid,
    pub values: Vec<f64>,
}

impl Potential1D {
    pub fn new(grid: LineGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.n {
            return domain(format!("{} values for {} nodes", values.len(), grid.n));
        }
        if let Some(v) = values.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return domain(format!("potential must be finite and >= 0, found {v}"));
        }
        Ok(Potential1D { grid, values })
    }

    pub fn from_fn(grid: LineGrid, f: impl Fn(f64) -> f64) -> Result<Self> {
        let values = grid.nodes().into_iter().map(f).collect();
        Self::new(grid, values)
    }

    pub fn zero(grid: LineGrid) -> Self {
        Potential1D {
            grid,
            values: vec![0.0; grid.n],
        }
    }

    /// Reads two-column `s,value` CSV (header optional, `s` increasing) and
    /// resamples linearly onto `grid`; the potential is zero outside the
    /// tabulated range.
    pub fn from_csv<R: Read>(grid: LineGrid, reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut table: Vec<(f64, f64)> = Vec::new();
        for (row, record) in rdr.records().enumerate() {
            let record = record?;
            if record.len() != 2 {
                return domain(format!("row {} has {} columns, expected 2", row + 1, record.len()));
            }
            let parsed = (record[0].parse::<f64>(), record[1].parse::<f64>());
            match parsed {
                (Ok(s), Ok(v)) => table.push((s, v)),
                _ if row == 0 => continue,
                _ => return domain(format!("row {} is not numeric", row + 1)),
            }
        }
        if table.len() < 2 {
            return domain("potential table needs at least two rows");
        }
        if table.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return domain("s column must be strictly increasing");
        }
        let values = grid
            .nodes()
            .into_iter()
            .map(|s| interpolate(&table, s))
            .collect();
        Self::new(grid, values)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// `h Σ V_i^k`.
    pub fn power_integral(&self, k: f64) -> f64 {
        self.grid.h * self.values.iter().map(|v| v.powf(k)).sum::<f64>()
    }
}

fn interpolate(table: &[(f64, f64)], s: f64) -> f64 {
    let (first, last) = (table[0].0, table[table.len() - 1].0);
    if s < first || s > last {
        return 0.0;
    }
    let k = table.partition_point(|(x, _)| *x <= s).clamp(1, table.len() - 1);
    let (x0, y0) = table[k - 1];
    let (x1, y1) = table[k];
    y0 + (y1 - y0) * (s - x0) / (x1 - x0)
}

/// Lowest spectral point `-λ₁` and its eigenfunction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenResult {
    pub lambda1: f64,
    /// `Σ h ψ_i² = 1`, positive; empty when there is no bound state.
    pub eigenfunction: Vec<f64>,
    pub residual_norm: f64,
    pub bound_state: bool,
    pub n: usize,
    #[serde(rename = "S")]
    pub s_max: f64,
}

#[derive(Serialize)]
struct EigenSummary {
    lambda1: f64,
    residual_norm: f64,
    n: usize,
    #[serde(rename = "S")]
    s_max: f64,
}

impl EigenResult {
    /// JSON `{lambda1, residual_norm, n, S}`.
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&EigenSummary {
            lambda1: self.lambda1,
            residual_norm: self.residual_norm,
            n: self.n,
            s_max: self.s_max,
        })?)
    }
}

/// Symmetric tridiagonal matrix with constant off-diagonal.
pub(crate) struct Tridiagonal<'a> {
    pub diag: &'a [f64],
    pub off: f64,
}

impl Tridiagonal<'_> {
    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let off2 = self.off * self.off;
        let mut count = 0;
        let mut d = 1.0;
        for (i, &a) in self.diag.iter().enumerate() {
            d = if i == 0 { a - x } else { a - x - off2 / d };
            if d == 0.0 {
                d = f64::EPSILON * (a.abs() + x.abs() + self.off.abs());
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    fn apply(&self, v: &[f64], out: &mut [f64]) {
        let n = v.len();
        for i in 0..n {
            let mut y = self.diag[i] * v[i];
            if i > 0 {
                y += self.off * v[i - 1];
            }
            if i + 1 < n {
                y += self.off * v[i + 1];
            }
            out[i] = y;
        }
    }

    /// Solves `(T - σ) x = rhs` by Gaussian elimination without pivoting.
    fn solve_shifted(&self, sigma: f64, rhs: &[f64]) -> Vec<f64> {
        let n = rhs.len();
        let mut c = vec![0.0; n];
        let mut x = vec![0.0; n];
        let mut denom = self.diag[0] - sigma;
        c[0] = self.off / denom;
        x[0] = rhs[0] / denom;
        for i in 1..n {
            denom = self.diag[i] - sigma - self.off * c[i - 1];
            if denom == 0.0 {
                denom = f64::EPSILON;
            }
            c[i] = self.off / denom;
            x[i] = (rhs[i] - self.off * x[i - 1]) / denom;
        }
        for i in (0..n - 1).rev() {
            x[i] -= c[i] * x[i + 1];
        }
        x
    }

    /// Lowest eigenvalue (Sturm bisection on `[lo, hi]`) and its unit
    /// eigenvector in the Euclidean norm; `None` when no eigenvalue lies
    /// below `hi`.
    pub fn lowest(&self, lo: f64, hi: f64) -> Result<Option<(f64, Vec<f64>, f64)>> {
        if self.count_below(hi) == 0 {
            return Ok(None);
        }
        let (mut a, mut b) = (lo, hi);
        while self.count_below(a) > 0 {
            a -= (b - a).abs().max(1.0);
        }
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if self.count_below(mid) >= 1 {
                b = mid;
            } else {
                a = mid;
            }
        }
        let scale = a.abs().max(b.abs()).max(self.off.abs());
        let sigma = a - 1e-11 * scale;
        let n = self.diag.len();
        let mut v = vec![1.0 / (n as f64).sqrt(); n];
        let mut tv = vec![0.0; n];
        let mut mu = b;
        let mut residual = f64::INFINITY;
        for _ in 0..8 {
            let mut w = self.solve_shifted(sigma, &v);
            let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
            if !(norm > 0.0) || !norm.is_finite() {
                return numeric("inverse iteration broke down", norm);
            }
            w.iter_mut().for_each(|x| *x /= norm);
            v = w;
            self.apply(&v, &mut tv);
            mu = v.iter().zip(&tv).map(|(x, y)| x * y).sum();
            residual = v
                .iter()
                .zip(&tv)
                .map(|(x, y)| (y - mu * x).powi(2))
                .sum::<f64>()
                .sqrt();
            if residual <= 1e-9 * scale {
                break;
            }
        }
        if !(residual <= 1e-6 * scale) {
            return numeric("inverse iteration did not converge", residual);
        }
        if v.iter().sum::<f64>() < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
        Ok(Some((mu, v, residual)))
    }
}

/// Lowest eigenpair of `-d²/ds² - V`: returns `λ₁ = -(lowest eigenvalue)`,
/// or `λ₁ = 0` with `bound_state = false` when the discrete spectrum is
/// non-negative.
pub fn lowest_eigenpair(v: &Potential1D) -> Result<EigenResult> {
    let grid = v.grid;
    let h2 = grid.h * grid.h;
    let diag: Vec<f64> = v.values.iter().map(|x| 2.0 / h2 - x).collect();
    let t = Tridiagonal {
        diag: &diag,
        off: -1.0 / h2,
    };
    let lo = -v.max() - 1.0;
    match t.lowest(lo, 0.0)? {
        None => Ok(EigenResult {
            lambda1: 0.0,
            eigenfunction: Vec::new(),
            residual_norm: 0.0,
            bound_state: false,
            n: grid.n,
            s_max: grid.s_max,
        }),
        Some((mu, vec, residual)) => {
            let scale = grid.h.sqrt().recip();
            Ok(EigenResult {
                lambda1: -mu,
                eigenfunction: vec.into_iter().map(|x| x * scale).collect(),
                residual_norm: residual,
                bound_state: true,
                n: grid.n,
                s_max: grid.s_max,
            })
        }
    }
}

/// Binding energy `B²ν²`, `ν = (√(1 + 4V₀/B²) - 1)/2`, of the ground state of
/// `-d²/ds² - V₀/cosh²(Bs)`.
pub fn poschl_teller_ground(v0: f64, b: f64) -> f64 {
    let nu = 0.5 * ((1.0 + 4.0 * v0 / (b * b)).sqrt() - 1.0);
    b * b * nu * nu
}

/// `λ₁(V)^γ / (c_LT(γ) ∫V^{γ+1/2})`; zero when there is no bound state.
pub fn lt_ratio(v: &Potential1D, gamma: f64) -> Result<f64> {
    let c = c_lt(gamma)?;
    let eig = lowest_eigenpair(v)?;
    if !eig.bound_state {
        return Ok(0.0);
    }
    Ok(eig.lambda1.powf(gamma) / (c * v.power_integral(gamma + 0.5)))
}

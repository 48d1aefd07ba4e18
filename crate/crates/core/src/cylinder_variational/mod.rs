//! Discretised variational problem on the cylinder `ℝ × S^{N-1}`.
//!
//! A field is stored by zonal coefficients: `data[i * (L_max + 1) + ℓ]` is the
//! degree-`ℓ` coefficient at the line node `s_i`. The angular factor carries
//! the uniform probability measure. The `∂_s` energy uses the fourth-order
//! five-point stencil with zero Dirichlet ghosts; the nonlinearity is
//! evaluated at `2 L_max + 2` angular quadrature nodes.

mod chain;
mod emden_fowler;
mod lieb_thirring;
mod minimize;
mod quotient;
mod sandwich;
mod stability;

pub use chain::{proof_chain, ChainReport};
pub use emden_fowler::{
    compare_with_profile, emden_fowler_pushforward, LogGridProfile, ProfileMatch, PushforwardReport,
};
pub use lieb_thirring::{lambda_gamma_n, lt_symmetric_threshold, radial_lt_slope, LambdaGammaReport};
pub use minimize::{minimize, minimize_multistart, MinimizeOptions, MinimizeReport};
pub use quotient::{
    el_normalize, el_residual, functional_f, rayleigh, rayleigh_gradient, ElResidual,
};
pub use sandwich::{sandwich_check, sandwich_lambda_bound, SandwichReport};
pub use stability::{fs_threshold, second_variation_closed_form, second_variation_mode};

use serde::{Deserialize, Serialize};
use std::io::Write;

use crate::closed_forms::{profile_constants, u_star_eval};
use crate::error::{domain, Result};
use crate::schrodinger_1d::LineGrid;
use crate::sphere_ops::{basis_values, eigenvalue, SphereQuadrature};

/// Zonal field on the truncated cylinder `[-S, S] × S^{N-1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CylField {
    pub grid: LineGrid,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "L_max")]
    pub l_max: usize,
    pub data: Vec<f64>,
}

impl CylField {
    pub fn zeros(grid: LineGrid, n: u32, l_max: usize) -> Result<Self> {
        if n != 2 && n != 3 {
            return domain(format!("cylinder fields are implemented for N in {{2, 3}}, got {n}"));
        }
        Ok(CylField {
            grid,
            n,
            l_max,
            data: vec![0.0; grid.n * (l_max + 1)],
        })
    }

    /// Field whose degree-`ℓ` profile is `profiles(ℓ, s)`.
    pub fn from_profiles(
        grid: LineGrid,
        n: u32,
        l_max: usize,
        profiles: impl Fn(usize, f64) -> f64,
    ) -> Result<Self> {
        let mut f = Self::zeros(grid, n, l_max)?;
        for i in 0..grid.n {
            let s = grid.node(i);
            for l in 0..=l_max {
                f.data[i * (l_max + 1) + l] = profiles(l, s);
            }
        }
        Ok(f)
    }

    /// `u⋆(s) (1 + ε e₁(ω))` for the extremal profile at `(Λ, p, θ)`.
    pub fn u_star(
        grid: LineGrid,
        n: u32,
        l_max: usize,
        lambda: f64,
        p: f64,
        theta: f64,
        eps: f64,
    ) -> Result<Self> {
        let pc = profile_constants(lambda, p, theta)?;
        Self::from_profiles(grid, n, l_max, |l, s| match l {
            0 => u_star_eval(s, &pc),
            1 => eps * u_star_eval(s, &pc),
            _ => 0.0,
        })
    }

    pub fn coeff(&self, i: usize, l: usize) -> f64 {
        self.data[i * (self.l_max + 1) + l]
    }

    /// Profile `s_i ↦ c_{iℓ}`.
    pub fn mode(&self, l: usize) -> Vec<f64> {
        (0..self.grid.n).map(|i| self.coeff(i, l)).collect()
    }

    /// Share of `∫∫u²` carried by degrees `ℓ >= 1`.
    pub fn angular_fraction(&self) -> f64 {
        let l1 = self.l_max + 1;
        let (mut radial, mut angular) = (0.0, 0.0);
        for (k, c) in self.data.iter().enumerate() {
            if k % l1 == 0 {
                radial += c * c;
            } else {
                angular += c * c;
            }
        }
        if radial + angular == 0.0 {
            0.0
        } else {
            angular / (radial + angular)
        }
    }

    /// Values at `(s_i, x_j)` for the nodes of `quad`, row-major in `i`.
    pub fn to_nodal(&self, quad: &SphereQuadrature) -> Vec<f64> {
        Ops::with_quadrature(self, quad.clone()).nodal(&self.data)
    }

    /// Rebuilds coefficients from nodal values by quadrature projection.
    pub fn from_nodal(
        grid: LineGrid,
        n: u32,
        l_max: usize,
        quad: &SphereQuadrature,
        nodal: &[f64],
    ) -> Result<Self> {
        let mut f = Self::zeros(grid, n, l_max)?;
        if nodal.len() != grid.n * quad.len() {
            return domain("nodal array does not match grid x quadrature");
        }
        f.data = Ops::with_quadrature(&f, quad.clone()).project(nodal);
        Ok(f)
    }

    /// Writes `s,ell,coefficient` CSV.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["s", "ell", "coefficient"])?;
        for i in 0..self.grid.n {
            let s = crate::report::fmt_sig(self.grid.node(i), 12);
            for l in 0..=self.l_max {
                w.write_record([s.clone(), l.to_string(), crate::report::fmt_sig(self.coeff(i, l), 12)])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub(crate) fn check_nonzero(&self) -> Result<()> {
        if self.data.iter().all(|c| *c == 0.0) {
            return domain("the zero field has no Rayleigh quotient");
        }
        if self.data.iter().any(|c| !c.is_finite()) {
            return domain("field contains non-finite coefficients");
        }
        Ok(())
    }
}

/// Default line grid for a profile decaying like `exp(-rate |s|)`: half-width
/// at least 20 and wide enough for `exp(-rate S) < 1e-16`, spacing about 0.02.
pub fn desk_grid(rate: f64) -> Result<LineGrid> {
    if !(rate > 0.0) {
        return domain(format!("decay rate must be > 0, got {rate}"));
    }
    let s_max = (37.0 / rate).max(20.0);
    let n = (2.0 * s_max / 0.02).ceil() as usize;
    LineGrid::new(s_max, n)
}

/// Decay rate `√(η/θ)` of the extremal profile at `(Λ, p, θ)`.
pub fn profile_decay(lambda: f64, p: f64, theta: f64) -> Result<f64> {
    let pc = profile_constants(lambda, p, theta)?;
    Ok((pc.eta / pc.theta).sqrt())
}

/// Integrals entering every quotient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Parts {
    /// `∫∫|∂_s u|²`
    pub es: f64,
    /// `∫∫|Lu|²`
    pub eo: f64,
    /// `∫∫u²`
    pub m: f64,
    /// `∫∫|u|^p`
    pub pp: f64,
}

/// Precomputed transforms for one field layout.
pub(crate) struct Ops {
    pub ns: usize,
    pub l1: usize,
    pub h: f64,
    pub kappa: Vec<f64>,
    pub quad: SphereQuadrature,
    /// `basis[j * l1 + ℓ] = e_ℓ(x_j)`
    pub basis: Vec<f64>,
}

impl Ops {
    pub fn new(u: &CylField) -> Self {
        let quad = SphereQuadrature::new(u.n, 2 * u.l_max + 2).expect("N checked at construction");
        Self::with_quadrature(u, quad)
    }

    pub fn with_quadrature(u: &CylField, quad: SphereQuadrature) -> Self {
        let l1 = u.l_max + 1;
        let basis = quad
            .nodes
            .iter()
            .flat_map(|&x| basis_values(u.n, u.l_max, x))
            .collect();
        Ops {
            ns: u.grid.n,
            l1,
            h: u.grid.h,
            kappa: (0..l1).map(|l| eigenvalue(l, u.n)).collect(),
            quad,
            basis,
        }
    }

    pub fn m(&self) -> usize {
        self.quad.len()
    }

    pub fn nodal(&self, c: &[f64]) -> Vec<f64> {
        let m = self.m();
        let mut out = vec![0.0; self.ns * m];
        for i in 0..self.ns {
            let row = &c[i * self.l1..(i + 1) * self.l1];
            for j in 0..m {
                let b = &self.basis[j * self.l1..(j + 1) * self.l1];
                out[i * m + j] = row.iter().zip(b).map(|(x, y)| x * y).sum();
            }
        }
        out
    }

    pub fn project(&self, nodal: &[f64]) -> Vec<f64> {
        let m = self.m();
        let mut out = vec![0.0; self.ns * self.l1];
        for i in 0..self.ns {
            let row = &mut out[i * self.l1..(i + 1) * self.l1];
            for j in 0..m {
                let wv = self.quad.weights[j] * nodal[i * m + j];
                let b = &self.basis[j * self.l1..(j + 1) * self.l1];
                for (r, e) in row.iter_mut().zip(b) {
                    *r += wv * e;
                }
            }
        }
        out
    }

    /// Fourth-order `-∂_s²` applied to every degree.
    pub fn ks_apply(&self, c: &[f64]) -> Vec<f64> {
        ks_columns(c, self.ns, self.l1, self.h)
    }

    pub fn parts(&self, c: &[f64], p: f64) -> Parts {
        let ks = self.ks_apply(c);
        let es = self.h * c.iter().zip(&ks).map(|(x, y)| x * y).sum::<f64>();
        let (mut eo, mut m2) = (0.0, 0.0);
        for (k, x) in c.iter().enumerate() {
            m2 += x * x;
            eo += self.kappa[k % self.l1] * x * x;
        }
        let nodal = self.nodal(c);
        let mq = self.m();
        let mut pp = 0.0;
        for row in nodal.chunks(mq) {
            pp += row
                .iter()
                .zip(&self.quad.weights)
                .map(|(u, w)| w * u.abs().powf(p))
                .sum::<f64>();
        }
        Parts {
            es,
            eo: self.h * eo,
            m: self.h * m2,
            pp: self.h * pp,
        }
    }

    /// Coefficients of `|u|^{p-2} u` projected onto degrees `<= L_max`.
    pub fn nonlinearity(&self, c: &[f64], p: f64) -> Vec<f64> {
        let nodal: Vec<f64> = self
            .nodal(c)
            .into_iter()
            .map(|u| u.abs().powf(p - 2.0) * u)
            .collect();
        self.project(&nodal)
    }

    /// Solves `(-D₂² + Λ + κ_ℓ) x = r` per degree with the second-order
    /// tridiagonal Laplacian.
    pub fn precondition(&self, r: &[f64], lambda: f64) -> Vec<f64> {
        let h2 = self.h * self.h;
        let off = -1.0 / h2;
        let mut out = vec![0.0; r.len()];
        let mut cp = vec![0.0; self.ns];
        let mut x = vec![0.0; self.ns];
        for l in 0..self.l1 {
            let d = 2.0 / h2 + lambda + self.kappa[l];
            let mut denom = d;
            cp[0] = off / denom;
            x[0] = r[l] / denom;
            for i in 1..self.ns {
                denom = d - off * cp[i - 1];
                cp[i] = off / denom;
                x[i] = (r[i * self.l1 + l] - off * x[i - 1]) / denom;
            }
            for i in (0..self.ns - 1).rev() {
                x[i] -= cp[i] * x[i + 1];
            }
            for i in 0..self.ns {
                out[i * self.l1 + l] = x[i];
            }
        }
        out
    }
}

/// Five-point `-∂_s²` on each of `l1` interleaved columns of length `ns`.
pub(crate) fn ks_columns(c: &[f64], ns: usize, l1: usize, h: f64) -> Vec<f64> {
    let scale = 1.0 / (12.0 * h * h);
    let at = |i: isize, l: usize| -> f64 {
        if i < 0 || i >= ns as isize {
            0.0
        } else {
            c[i as usize * l1 + l]
        }
    };
    let mut out = vec![0.0; c.len()];
    for i in 0..ns as isize {
        for l in 0..l1 {
            out[i as usize * l1 + l] = scale
                * (at(i - 2, l) - 16.0 * at(i - 1, l) + 30.0 * at(i, l) - 16.0 * at(i + 1, l)
                    + at(i + 2, l));
        }
    }
    out
}

pub(crate) fn check_params(lambda: f64, p: f64, theta: f64) -> Result<()> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return domain(format!("Lambda must be > 0, got {lambda}"));
    }
    if !(p > 2.0) || !p.is_finite() {
        return domain(format!("p must be > 2, got {p}"));
    }
    if !(theta > 0.0 && theta <= 1.0) {
        return domain(format!("theta must lie in (0, 1], got {theta}"));
    }
    Ok(())
}

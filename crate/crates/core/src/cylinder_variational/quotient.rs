use serde::{Deserialize, Serialize};

use super::{check_params, CylField, Ops, Parts};
use crate::error::Result;

fn quotient_from(parts: &Parts, lambda: f64, p: f64, theta: f64) -> f64 {
    let g = parts.es + parts.eo + lambda * parts.m;
    let num = if theta == 1.0 {
        g
    } else {
        g.powf(theta) * parts.m.powf(1.0 - theta)
    };
    num / parts.pp.powf(2.0 / p)
}

pub(crate) fn quotient_ops(ops: &Ops, c: &[f64], lambda: f64, p: f64, theta: f64) -> f64 {
    quotient_from(&ops.parts(c, p), lambda, p, theta)
}

/// `Q[u] = (∫∫|∂_s u|² + |Lu|² + Λu²)^θ (∫∫u²)^{1-θ} / (∫∫|u|^p)^{2/p}`.
pub fn rayleigh(u: &CylField, lambda: f64, p: f64, theta: f64) -> Result<f64> {
    check_params(lambda, p, theta)?;
    u.check_nonzero()?;
    Ok(quotient_ops(&Ops::new(u), &u.data, lambda, p, theta))
}

/// `Q` and its `L²` gradient in coefficient space.
pub(crate) fn value_and_gradient(
    ops: &Ops,
    c: &[f64],
    lambda: f64,
    p: f64,
    theta: f64,
) -> (f64, Parts, Vec<f64>) {
    let parts = ops.parts(c, p);
    let q = quotient_from(&parts, lambda, p, theta);
    let g = parts.es + parts.eo + lambda * parts.m;
    let ks = ops.ks_apply(c);
    let nl = ops.nonlinearity(c, p);
    let grad = c
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            let dg = 2.0 * (ks[k] + (ops.kappa[k % ops.l1] + lambda) * x);
            let dm = 2.0 * x;
            let dp = p * nl[k];
            q * (theta * dg / g + (1.0 - theta) * dm / parts.m - 2.0 / p * dp / parts.pp)
        })
        .collect();
    (q, parts, grad)
}

/// `L²` gradient of [`rayleigh`]: `δQ = ∫∫ grad · δu`.
pub fn rayleigh_gradient(u: &CylField, lambda: f64, p: f64, theta: f64) -> Result<CylField> {
    check_params(lambda, p, theta)?;
    u.check_nonzero()?;
    let (_, _, grad) = value_and_gradient(&Ops::new(u), &u.data, lambda, p, theta);
    Ok(CylField {
        data: grad,
        ..u.clone()
    })
}

/// Residual of the Euler–Lagrange equation, with the nonlinearity norm for
/// scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElResidual {
    pub norm: f64,
    /// `‖|u|^{p-2}u‖` over the cylinder.
    pub scale: f64,
}

impl ElResidual {
    pub fn relative(&self) -> f64 {
        self.norm / self.scale
    }
}

/// `‖-θ(∂_s²u + L²u) + [(1-θ) t[u] + Λ] u - |u|^{p-2}u‖`, `t[u] = (∫∫|∂_s u|² + |Lu|²)/∫∫u²`.
pub fn el_residual(u: &CylField, lambda: f64, p: f64, theta: f64) -> Result<ElResidual> {
    check_params(lambda, p, theta)?;
    u.check_nonzero()?;
    let ops = Ops::new(u);
    let parts = ops.parts(&u.data, p);
    let t = (parts.es + parts.eo) / parts.m;
    let shift = (1.0 - theta) * t + lambda;
    let ks = ops.ks_apply(&u.data);
    let nl = ops.nonlinearity(&u.data, p);
    let mut norm = 0.0;
    let mut scale = 0.0;
    for (k, &x) in u.data.iter().enumerate() {
        let r = theta * (ks[k] + ops.kappa[k % ops.l1] * x) + shift * x - nl[k];
        norm += r * r;
        scale += nl[k] * nl[k];
    }
    Ok(ElResidual {
        norm: (ops.h * norm).sqrt(),
        scale: (ops.h * scale).sqrt(),
    })
}

/// `F[u] = ∫∫(|∂_s u|² - |u|^p + |Lu|²)`.
pub fn functional_f(u: &CylField, lambda: f64, p: f64) -> Result<f64> {
    check_params(lambda, p, 1.0)?;
    u.check_nonzero()?;
    let parts = Ops::new(u).parts(&u.data, p);
    Ok(parts.es - parts.pp + parts.eo)
}

/// Rescales `u` so that `∫∫(|∂_s u|² + |Lu|² + Λu²) = ∫∫|u|^p`, the
/// normalisation of a solution of the Euler–Lagrange equation.
pub fn el_normalize(u: &CylField, lambda: f64, p: f64) -> Result<CylField> {
    check_params(lambda, p, 1.0)?;
    u.check_nonzero()?;
    let parts = Ops::new(u).parts(&u.data, p);
    let g = parts.es + parts.eo + lambda * parts.m;
    let k = (g / parts.pp).powf(1.0 / (p - 2.0));
    Ok(CylField {
        data: u.data.iter().map(|x| x * k).collect(),
        ..u.clone()
    })
}

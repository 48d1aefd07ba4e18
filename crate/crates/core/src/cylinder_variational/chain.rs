use serde::{Deserialize, Serialize};

use super::{check_params, ks_columns, CylField, Ops};
use crate::closed_forms::c_lt;
use crate::error::Result;
use crate::param_space::gammas;
use crate::sphere_ops::{grad_energy, holder_probability_deficit, poincare_deficit, SphereQuadrature, ZonalField};

/// Slack of each inequality in the symmetry proof, evaluated on one field.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChainReport {
    pub slack_lt: f64,
    pub slack_schwarz: f64,
    pub slack_hoelder2p: f64,
    pub slack_poincare: f64,
    pub slack_hoelder: f64,
    #[serde(rename = "D")]
    pub d: f64,
    #[serde(rename = "Lambda")]
    pub lambda: f64,
    pub gamma: f64,
    pub q: f64,
}

impl ChainReport {
    pub fn slacks(&self) -> [f64; 5] {
        [
            self.slack_lt,
            self.slack_schwarz,
            self.slack_hoelder2p,
            self.slack_poincare,
            self.slack_hoelder,
        ]
    }

    pub fn min_slack(&self) -> f64 {
        self.slacks().into_iter().fold(f64::INFINITY, f64::min)
    }
}

/// Evaluates the chain Lieb–Thirring, Schwarz, Hölder, Poincaré, Hölder on
/// `|u|`, with `v(ω) = (∫u² ds)^{1/2}` sampled at `4 L_max + 24` angular nodes
/// and interpolated by a zonal field of one degree less.
pub fn proof_chain(u: &CylField, lambda: f64, p: f64) -> Result<ChainReport> {
    check_params(lambda, p, 1.0)?;
    u.check_nonzero()?;
    let (gamma, q) = gammas(p, 1.0)?;
    let c_root = c_lt(gamma)?.powf(1.0 / gamma);
    let quad = SphereQuadrature::new(u.n, 4 * u.l_max + 24)?;
    let ops = Ops::with_quadrature(u, quad);
    let m = ops.m();
    let ns = ops.ns;
    let h = ops.h;
    let nodal: Vec<f64> = ops.nodal(&u.data).into_iter().map(f64::abs).collect();
    // Column j of the nodal array is u(·, ω_j); transpose to contiguous columns.
    let mut columns = vec![0.0; ns * m];
    for i in 0..ns {
        for j in 0..m {
            columns[j * ns + i] = nodal[i * m + j];
        }
    }
    let mut slack_lt = f64::INFINITY;
    let mut p_col = vec![0.0; m];
    let mut v2 = vec![0.0; m];
    for j in 0..m {
        let col = &columns[j * ns..(j + 1) * ns];
        let ks = ks_columns(col, ns, 1, h);
        let kinetic = h * col.iter().zip(&ks).map(|(a, b)| a * b).sum::<f64>();
        p_col[j] = h * col.iter().map(|x| x.powf(p)).sum::<f64>();
        v2[j] = h * col.iter().map(|x| x * x).sum::<f64>();
        slack_lt = slack_lt.min(kinetic - p_col[j] + c_root * p_col[j].powf(1.0 / gamma) * v2[j]);
    }
    let w = &ops.quad.weights;
    let angular_u: f64 = h * u
        .data
        .iter()
        .enumerate()
        .map(|(k, c)| ops.kappa[k % ops.l1] * c * c)
        .sum::<f64>();
    let v_nodal: Vec<f64> = v2.iter().map(|x| x.sqrt()).collect();
    let v = ZonalField::from_nodal(&ops.quad, &v_nodal, m - 1)?;
    let p_total: f64 = w.iter().zip(&p_col).map(|(a, b)| a * b).sum();
    let lhs: f64 = (0..m).map(|j| w[j] * p_col[j].powf(1.0 / gamma) * v2[j]).sum();
    let vq: f64 = (0..m).map(|j| w[j] * v_nodal[j].powf(q + 1.0)).sum();
    let rhs = p_total.powf(1.0 / gamma) * vq.powf(2.0 / (q + 1.0));
    Ok(ChainReport {
        slack_lt,
        slack_schwarz: angular_u - grad_energy(&v),
        slack_hoelder2p: rhs - lhs,
        slack_poincare: poincare_deficit(&v, q)?,
        slack_hoelder: holder_probability_deficit(&v, q)?,
        d: c_root * p_total.powf(1.0 / gamma),
        lambda,
        gamma,
        q,
    })
}

//! Zonal calculus on `S^{N-1}` for `N ∈ {2, 3}` under the uniform probability
//! measure.
//!
//! Basis: `1, √2 cos(ℓφ)` on the circle (folded to `φ ∈ [0, π]`) and
//! `√(2ℓ+1) P_ℓ(t)`, `t = cos φ`, on the 2-sphere. Both are orthonormal and
//! degree `ℓ` has Laplace–Beltrami eigenvalue `ℓ(ℓ+N-2)`.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::quadrature::gauss_legendre;

/// Largest Poincaré exponent accepted for `N <= 3`, where `(N+1)/(N-3)`
/// gives no bound.
pub const Q_CAP: f64 = 10.0;

fn check_dim(n: u32) -> Result<()> {
    if n == 2 || n == 3 {
        Ok(())
    } else {
        domain(format!("zonal calculus is implemented for N in {{2, 3}}, got {n}"))
    }
}

/// `ℓ(ℓ + N - 2)`.
pub fn eigenvalue(ell: usize, n: u32) -> f64 {
    let l = ell as f64;
    l * (l + n as f64 - 2.0)
}

/// Values of the orthonormal zonal basis `e_0..e_{l_max}` at the angular
/// coordinate `x` (`φ` for `N = 2`, `t` for `N = 3`).
pub fn basis_values(n: u32, l_max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(l_max + 1);
    if n == 2 {
        out.push(1.0);
        for l in 1..=l_max {
            out.push(2f64.sqrt() * (l as f64 * x).cos());
        }
    } else {
        let (mut p_prev, mut p) = (1.0, x);
        out.push(1.0);
        for l in 1..=l_max {
            if l > 1 {
                let lf = (l - 1) as f64;
                let next = ((2.0 * lf + 1.0) * x * p - lf * p_prev) / (lf + 1.0);
                p_prev = p;
                p = next;
            }
            out.push((2.0 * l as f64 + 1.0).sqrt() * p);
        }
    }
    out
}

/// Nodes and probability weights for zonal integrands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphereQuadrature {
    #[serde(rename = "N")]
    pub n: u32,
    /// `φ` nodes (midpoint rule) for `N = 2`, `t` nodes (Gauss–Legendre) for `N = 3`.
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl SphereQuadrature {
    /// `m`-node rule; exact for zonal polynomials of degree `< 2m`.
    pub fn new(n: u32, m: usize) -> Result<Self> {
        check_dim(n)?;
        if m == 0 {
            return domain("quadrature needs at least one node");
        }
        let (nodes, weights) = if n == 2 {
            let nodes = (0..m).map(|j| (j as f64 + 0.5) * PI / m as f64).collect();
            (nodes, vec![1.0 / m as f64; m])
        } else {
            let (t, w) = gauss_legendre(m);
            (t, w.into_iter().map(|x| 0.5 * x).collect())
        };
        Ok(SphereQuadrature { n, nodes, weights })
    }

    /// Rule used for a field of degree `l_max` inside fractional powers.
    pub fn for_degree(n: u32, l_max: usize) -> Result<Self> {
        Self::new(n, 6 * l_max + 16)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Basis table, row `j` holding `e_0..e_{l_max}` at node `j`.
    pub fn basis(&self, l_max: usize) -> Vec<Vec<f64>> {
        self.nodes
            .iter()
            .map(|&x| basis_values(self.n, l_max, x))
            .collect()
    }

    pub fn integrate(&self, values: &[f64]) -> f64 {
        self.weights.iter().zip(values).map(|(w, v)| w * v).sum()
    }
}

/// Axisymmetric field `Σ c_ℓ e_ℓ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZonalField {
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "L_max")]
    pub l_max: usize,
    pub coeffs: Vec<f64>,
}

impl ZonalField {
    pub fn new(n: u32, coeffs: Vec<f64>) -> Result<Self> {
        check_dim(n)?;
        if coeffs.is_empty() {
            return domain("a zonal field needs at least the constant coefficient");
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return domain("zonal coefficients must be finite");
        }
        Ok(ZonalField {
            n,
            l_max: coeffs.len() - 1,
            coeffs,
        })
    }

    pub fn constant(n: u32, value: f64) -> Result<Self> {
        Self::new(n, vec![value])
    }

    /// `c₀ + ε e₁`.
    pub fn near_constant(n: u32, c0: f64, eps: f64) -> Result<Self> {
        Self::new(n, vec![c0, eps])
    }

    pub fn to_nodal(&self, quad: &SphereQuadrature) -> Vec<f64> {
        quad.nodes
            .iter()
            .map(|&x| {
                basis_values(self.n, self.l_max, x)
                    .iter()
                    .zip(&self.coeffs)
                    .map(|(e, c)| e * c)
                    .sum()
            })
            .collect()
    }

    /// Orthogonal projection of nodal data onto degrees `0..=l_max`.
    pub fn from_nodal(quad: &SphereQuadrature, values: &[f64], l_max: usize) -> Result<Self> {
        if values.len() != quad.len() {
            return domain(format!("{} values for {} nodes", values.len(), quad.len()));
        }
        let mut coeffs = vec![0.0; l_max + 1];
        for ((&x, &w), &v) in quad.nodes.iter().zip(&quad.weights).zip(values) {
            for (c, e) in coeffs.iter_mut().zip(basis_values(quad.n, l_max, x)) {
                *c += w * v * e;
            }
        }
        Self::new(quad.n, coeffs)
    }

    /// `∫v² dω` by Parseval.
    pub fn l2_squared(&self) -> f64 {
        self.coeffs.iter().map(|c| c * c).sum()
    }
}

/// `∫|Lv|² dω = Σ ℓ(ℓ+N-2) c_ℓ²`.
pub fn grad_energy(v: &ZonalField) -> f64 {
    v.coeffs
        .iter()
        .enumerate()
        .map(|(l, c)| eigenvalue(l, v.n) * c * c)
        .sum()
}

/// Pieces of `(∫|v|^{q+1})^{2/(q+1)}` and `∫v²` evaluated relative to the
/// mean so that near-constant deficits keep their leading digits.
struct Scaled {
    c2: f64,
    /// `(∫|v/c|^{q+1})^{2/(q+1)} - 1`.
    lq_excess: f64,
    /// `∫(v/c)² - 1`.
    l2_excess: f64,
    /// `∫|L(v/c)|²`.
    energy: f64,
}

fn scaled(v: &ZonalField, q: f64) -> Result<Scaled> {
    let quad = SphereQuadrature::for_degree(v.n, v.l_max)?;
    let c = if v.coeffs[0] != 0.0 { v.coeffs[0].abs() } else { 1.0 };
    let w = ZonalField::new(v.n, v.coeffs.iter().map(|x| x / c).collect())?;
    let nodal = w.to_nodal(&quad);
    let k = q + 1.0;
    let m: f64 = quad
        .weights
        .iter()
        .zip(&nodal)
        .map(|(wt, x)| wt * (k * x.abs().ln()).exp_m1())
        .sum();
    let lq_excess = (2.0 / k * m.ln_1p()).exp_m1();
    let l2_excess = if v.coeffs[0] != 0.0 {
        w.coeffs[0] * w.coeffs[0] - 1.0 + w.coeffs[1..].iter().map(|x| x * x).sum::<f64>()
    } else {
        w.l2_squared() - 1.0
    };
    Ok(Scaled {
        c2: c * c,
        lq_excess,
        l2_excess,
        energy: grad_energy(&w),
    })
}

/// Largest admissible Poincaré exponent for dimension `n`.
pub fn q_max(n: u32) -> f64 {
    if n > 3 {
        ((n as f64 + 1.0) / (n as f64 - 3.0)).min(Q_CAP)
    } else {
        Q_CAP
    }
}

/// `((q-1)/(N-1)) ∫|Lv|² - (∫|v|^{q+1})^{2/(q+1)} + ∫v²`.
pub fn poincare_deficit(v: &ZonalField, q: f64) -> Result<f64> {
    if !(q > 1.0 && q <= q_max(v.n)) {
        return domain(format!("q must lie in (1, {}] for N = {}, got {q}", q_max(v.n), v.n));
    }
    let s = scaled(v, q)?;
    let nf = v.n as f64;
    Ok(s.c2 * ((q - 1.0) / (nf - 1.0) * s.energy - s.lq_excess + s.l2_excess))
}

/// `(∫|v|^{q+1})^{2/(q+1)} - ∫v²`.
pub fn holder_probability_deficit(v: &ZonalField, q: f64) -> Result<f64> {
    if !(q > 1.0) || !q.is_finite() {
        return domain(format!("q must be > 1, got {q}"));
    }
    let s = scaled(v, q)?;
    Ok(s.c2 * (s.lq_excess - s.l2_excess))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn energies() {
        assert_eq!(grad_energy(&ZonalField::constant(3, 2.0).unwrap()), 0.0);
        assert_eq!(grad_energy(&ZonalField::new(3, vec![0.0, 1.0]).unwrap()), 2.0);
        assert_eq!(grad_energy(&ZonalField::new(2, vec![0.0, 1.0]).unwrap()), 1.0);
        let v = ZonalField::new(3, vec![0.3, 1.0, -2.0, 0.5]).unwrap();
        assert!((grad_energy(&v) - (2.0 + 4.0 * 6.0 + 0.25 * 12.0)).abs() < 1e-14);
        assert!(ZonalField::new(4, vec![1.0]).is_err());
    }

    #[test]
    fn quadrature_is_a_probability_measure() {
        for n in [2, 3] {
            let q = SphereQuadrature::new(n, 20).unwrap();
            assert!((q.weights.iter().sum::<f64>() - 1.0).abs() < 1e-14);
            let b = q.basis(9);
            for i in 0..10 {
                for j in 0..10 {
                    let g: f64 = (0..q.len()).map(|k| q.weights[k] * b[k][i] * b[k][j]).sum();
                    let want = if i == j { 1.0 } else { 0.0 };
                    assert!((g - want).abs() < 1e-12, "N={n} ({i},{j}) {g}");
                }
            }
        }
    }

    #[test]
    fn nodal_round_trip() {
        let v = ZonalField::new(3, vec![1.0, 0.2, -0.1, 0.05]).unwrap();
        let q = SphereQuadrature::new(3, 8).unwrap();
        let back = ZonalField::from_nodal(&q, &v.to_nodal(&q), 3).unwrap();
        for (a, b) in v.coeffs.iter().zip(&back.coeffs) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn poincare_examples() {
        for q in [1.5, 2.0, 3.0, 10.0] {
            assert!(poincare_deficit(&ZonalField::constant(3, 1.0).unwrap(), q).unwrap().abs() < 1e-15);
        }
        let d = poincare_deficit(&ZonalField::near_constant(3, 1.0, 0.01).unwrap(), 3.0).unwrap();
        assert!((0.0..=1e-5).contains(&d) && d <= 1e-6, "{d}");
        assert!(poincare_deficit(&ZonalField::constant(3, 1.0).unwrap(), 1.0).is_err());
        assert!(poincare_deficit(&ZonalField::constant(3, 1.0).unwrap(), 10.5).is_err());
    }

    #[test]
    fn holder_examples() {
        assert!(holder_probability_deficit(&ZonalField::constant(2, 3.0).unwrap(), 2.0)
            .unwrap()
            .abs()
            < 1e-13);
        let v = ZonalField::near_constant(3, 1.0, 1.0).unwrap();
        let d = holder_probability_deficit(&v, 2.0).unwrap();
        assert!(d > 1e-3);
        let minus = ZonalField::new(3, vec![-1.0, -1.0]).unwrap();
        assert!((holder_probability_deficit(&minus, 2.0).unwrap() - d).abs() < 1e-14);
    }

    #[test]
    fn json_shape() {
        let v = ZonalField::new(2, vec![1.0, 0.5]).unwrap();
        let text = serde_json::to_string(&v).unwrap();
        assert_eq!(text, r#"{"N":2,"L_max":1,"coeffs":[1.0,0.5]}"#);
        let back: ZonalField = serde_json::from_str(&text).unwrap();
        assert_eq!(back, v);
    }
}

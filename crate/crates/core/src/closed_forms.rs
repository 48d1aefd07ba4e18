//! Closed-form constants: Gamma-function integrals, the one-dimensional
//! extremal profile, Lieb–Thirring constants, sharp radial constants and the
//! correction factor for the θ < 1 family.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{domain, numeric, Result};
use crate::param_space::{self, ParamPoint};
use crate::quadrature::integrate_line;
use crate::special::{gamma_ratio, lgamma};

pub use crate::special::log_gamma;

/// Surface measure `|S^{N-1}| = 2 π^{N/2} / Γ(N/2)`.
pub fn sphere_area(n: u32) -> Result<f64> {
    if n < 2 {
        return domain(format!("sphere_area requires N >= 2, got {n}"));
    }
    let half = n as f64 / 2.0;
    Ok(2.0 * (half * PI.ln() - lgamma(half)).exp())
}

/// `∫_ℝ cosh(s)^{-q} ds = √π Γ(q/2) / Γ((q+1)/2)`.
pub fn f_cosh_integral(q: f64) -> Result<f64> {
    if !(q > 0.0) {
        return domain(format!("cosh^-q is not integrable for q = {q}"));
    }
    Ok(cosh_integral(q))
}

fn cosh_integral(q: f64) -> f64 {
    PI.sqrt() * gamma_ratio(q / 2.0, (q + 1.0) / 2.0)
}

/// Line integrals of `w̄(s) = cosh(s)^{-2/(p-2)}`: `∫w̄²`, `∫w̄^p`, `∫w̄'²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub i2: f64,
    pub ip: f64,
    pub j2: f64,
}

pub fn moments(p: f64) -> Result<Moments> {
    if !(p > 2.0) {
        return domain(format!("moments require p > 2, got {p}"));
    }
    let q = 4.0 / (p - 2.0);
    let i2 = cosh_integral(q);
    let ip = cosh_integral(q + 2.0);
    // k²(F(2k) - F(2k+2)) with F(q+2) = q F(q)/(q+1), free of cancellation
    let j2 = 4.0 / (p - 2.0).powi(2) * i2 / (q + 1.0);
    Ok(Moments { i2, ip, j2 })
}

/// `w̄(s) = cosh(s)^{-2/(p-2)}`.
pub fn w_bar(s: f64, p: f64) -> f64 {
    sech_pow(s, 2.0 / (p - 2.0))
}

/// `cosh(s)^{-k}` without overflow for large `|s|`.
pub(crate) fn sech_pow(s: f64, k: f64) -> f64 {
    let a = s.abs();
    // cosh(a) = e^a (1 + e^{-2a}) / 2
    (-k * (a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2)).exp()
}

/// Amplitude, inverse width and effective mass of the one-dimensional
/// optimiser `u(s) = A w̄(B s)` of `-θu'' + ηu = u^{p-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileConstants {
    pub p: f64,
    pub theta: f64,
    pub lambda: f64,
    pub eta: f64,
    pub a: f64,
    pub b: f64,
    /// `t[u⋆] = ∫u⋆'² / ∫u⋆²`.
    pub t_star: f64,
}

pub fn profile_constants(lambda: f64, p: f64, theta: f64) -> Result<ProfileConstants> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return domain(format!("Lambda must be > 0, got {lambda}"));
    }
    if !(p > 2.0) || !p.is_finite() {
        return domain(format!("p must be > 2, got {p}"));
    }
    if !(theta > 0.0 && theta <= 1.0) {
        return domain(format!("theta must lie in (0, 1], got {theta}"));
    }
    let denom = (2.0 * theta - 1.0) * p + 2.0;
    if !(denom > 0.0) {
        return domain(format!("(2θ-1)p+2 = {denom} <= 0"));
    }
    let eta = if theta == 1.0 {
        lambda
    } else {
        (p + 2.0) * theta * lambda / denom
    };
    Ok(ProfileConstants {
        p,
        theta,
        lambda,
        eta,
        a: (p * eta / 2.0).powf(1.0 / (p - 2.0)),
        b: 0.5 * (p - 2.0) * (eta / theta).sqrt(),
        t_star: (p - 2.0) / (p + 2.0) * eta / theta,
    })
}

impl ProfileConstants {
    /// `∫u⋆^p`, `∫u⋆²`, `∫u⋆'²` from the moments.
    pub fn integrals(&self) -> (f64, f64, f64) {
        let m = moments(self.p).expect("p > 2 checked at construction");
        let (a, b) = (self.a, self.b);
        (a.powf(self.p) / b * m.ip, a * a / b * m.i2, a * a * b * m.j2)
    }

    /// `Q[u⋆] = (∫u'² + Λ∫u²)^θ (∫u²)^{1-θ} / (∫u^p)^{2/p}` for the line.
    pub fn quotient(&self) -> f64 {
        let (lp, l2, d2) = self.integrals();
        (d2 + self.lambda * l2).powf(self.theta) * l2.powf(1.0 - self.theta) / lp.powf(2.0 / self.p)
    }
}

pub fn u_star_eval(s: f64, pc: &ProfileConstants) -> f64 {
    pc.a * w_bar(pc.b * s, pc.p)
}

pub fn u_star_derivative(s: f64, pc: &ProfileConstants) -> f64 {
    -2.0 / (pc.p - 2.0) * pc.b * (pc.b * s).tanh() * u_star_eval(s, pc)
}

/// `V⋆(s) = u⋆(s)^{p-2} = A^{p-2} / cosh²(B s)`.
pub fn v_star_eval(s: f64, pc: &ProfileConstants) -> f64 {
    pc.a.powf(pc.p - 2.0) * sech_pow(pc.b * s, 2.0)
}

/// Unit-norm ground state `ψ_γ` of `-d²/ds² - (γ² - 1/4)/cosh²(s)`.
pub fn psi_gamma_eval(s: f64, gamma: f64) -> Result<f64> {
    if !(gamma > 0.5) {
        return domain(format!("psi_gamma requires gamma > 1/2, got {gamma}"));
    }
    let norm = PI.powf(-0.25) * gamma_ratio(gamma, gamma - 0.5).sqrt();
    Ok(norm * sech_pow(s, gamma - 0.5))
}

/// `V₀(s) = (γ² - 1/4) / cosh²(s)`.
pub fn v0_eval(s: f64, gamma: f64) -> f64 {
    (gamma * gamma - 0.25) * sech_pow(s, 2.0)
}

/// Two closed expressions of the one-bound-state Lieb–Thirring constant:
/// the direct form and the form obtained from the optimiser.
pub fn c_lt_forms(gamma: f64) -> Result<(f64, f64)> {
    if !(gamma > 0.5) || !gamma.is_finite() {
        return domain(format!("c_LT requires gamma > 1/2, got {gamma}"));
    }
    let gm = gamma - 0.5;
    let gp = gamma + 0.5;
    let log_first = -0.5 * PI.ln() - gm.ln() + lgamma(gamma + 1.0) - lgamma(gp) + gp * (gm / gp).ln();
    let ratio = (2.0 * gamma - 1.0) / (2.0 * gamma + 1.0);
    let log_second = gm * ratio.ln() + (2.0 * gamma / (2.0 * gamma + 1.0)).ln() + lgamma(gamma)
        - 0.5 * PI.ln()
        - lgamma(gp);
    Ok((log_first.exp(), log_second.exp()))
}

/// One-bound-state Lieb–Thirring constant `c_LT(γ)`.
pub fn c_lt(gamma: f64) -> Result<f64> {
    let (first, second) = c_lt_forms(gamma)?;
    let rel = (first - second).abs() / first.abs();
    if rel > 1e-11 {
        return numeric(format!("c_LT forms disagree at gamma = {gamma}"), rel);
    }
    Ok(first)
}

fn check_p_open(p: f64) -> Result<()> {
    if !(p > 2.0 && p < 6.0) {
        return domain(format!("p must lie in (2, 6), got {p}"));
    }
    Ok(())
}

/// Gamma-function factor `Γ(2/(p-2) + 1/2) / (√π Γ(2/(p-2)))` shared by the
/// radial constants.
fn radial_gamma_factor(p: f64) -> f64 {
    let k = 2.0 / (p - 2.0);
    gamma_ratio(k + 0.5, k) / PI.sqrt()
}

/// Best constant `C*(Λ, p, N)` among functions of `s` only, with the surface
/// measure on the sphere.
pub fn radial_constant(lambda: f64, p: f64, n: u32) -> Result<f64> {
    check_p_open(p)?;
    if !(lambda > 0.0) {
        return domain(format!("Lambda must be > 0, got {lambda}"));
    }
    let area = sphere_area(n)?;
    let e = (p - 2.0) / p;
    Ok(area.powf(-e)
        * (lambda * (p - 2.0).powi(2) / (p + 2.0)).powf((p - 2.0) / (2.0 * p))
        * ((p + 2.0) / (2.0 * p * lambda))
        * (4.0 / (p + 2.0)).powf((6.0 - p) / (2.0 * p))
        * radial_gamma_factor(p).powf(e))
}

/// Display-convention constant: carries `|S^{N-1}|^{+(p-2)/p}` where the
/// radial quotient gives `|S^{N-1}|^{-(p-2)/p}`. Reported for comparison only.
pub fn sharp_display_constant(pt: &ParamPoint) -> Result<f64> {
    let cyl = param_space::to_cylinder(pt)?;
    let area = sphere_area(pt.n)?;
    let c = radial_constant(cyl.lambda, cyl.p, pt.n)?;
    Ok(c * area.powf(2.0 * (cyl.p - 2.0) / cyl.p))
}

/// Closed display expression for the `(a, b) = (-1/2, 0)` family. It equals
/// [`sharp_display_constant`] there, not its inverse.
pub fn half_weight_display(n: u32) -> Result<f64> {
    if n < 2 {
        return domain(format!("N must be >= 2, got {n}"));
    }
    let nf = n as f64;
    let inner = (nf - 1.0) / 2.0 * PI.ln() + lgamma(nf + 0.5) - lgamma(nf / 2.0) - lgamma(nf);
    Ok(4.0 / (nf * (nf - 1.0)) * (inner / nf).exp())
}

fn check_theta_family(theta: f64, p: f64) -> Result<()> {
    check_p_open(p)?;
    if !(theta > 0.5 && theta <= 1.0) {
        return domain(format!("theta must lie in (1/2, 1], got {theta}"));
    }
    if !((2.0 * theta - 1.0) * p + 2.0 > 0.0) || !(2.0 - p * (1.0 - theta) > 0.0) {
        return domain(format!("(theta, p) = ({theta}, {p}) outside the admissible range"));
    }
    Ok(())
}

/// `K*_{θ,p}`: radial constant of the θ-family at `Λ = 1`, probability
/// measure on the sphere.
pub fn k_star(theta: f64, p: f64) -> Result<f64> {
    check_theta_family(theta, p)?;
    let e = (2.0 * theta - 1.0) * p + 2.0;
    Ok(((p - 2.0).powi(2) / e).powf((p - 2.0) / (2.0 * p))
        * (e / (2.0 * p * theta)).powf(theta)
        * (4.0 / (p + 2.0)).powf((6.0 - p) / (2.0 * p))
        * radial_gamma_factor(p).powf((p - 2.0) / p))
}

/// `K*_CKN(θ, Λ, p) = K*_{θ,p} Λ^{-((2θ-1)p+2)/(2p)}`.
pub fn k_ckn_star(theta: f64, lambda: f64, p: f64) -> Result<f64> {
    if !(lambda > 0.0) {
        return domain(format!("Lambda must be > 0, got {lambda}"));
    }
    let e = (2.0 * theta - 1.0) * p + 2.0;
    Ok(k_star(theta, p)? * lambda.powf(-e / (2.0 * p)))
}

/// Correction factor `𝔊(p, θ) >= 1` of the θ < 1 estimate (closed form).
pub fn frak_c(p: f64, theta: f64) -> Result<f64> {
    check_theta_family(theta, p)?;
    let e = (2.0 * theta - 1.0) * p + 2.0;
    let two_m = 2.0 - p * (1.0 - theta);
    let k = p - 2.0;
    let log = (p + 2.0) / e * (p + 2.0).ln() - e.ln()
        + 2.0 * two_m / e * (two_m / 2.0).ln()
        + 4.0 * k / e * (lgamma(p / k) - lgamma(theta * p / k))
        + 2.0 * k / e * (lgamma(2.0 * theta * p / k) - lgamma(2.0 * p / k));
    Ok(log.exp())
}

/// `𝔊(p, θ)` recomputed from the chain identity
/// `𝔊 = c_LT(γ_θ)^{1/γ_θ} Q[u⋆]^{2p/((2θ-1)p+2)} / Λ`, with `Q[u⋆]` taken
/// from the explicit profile.
pub fn frak_c_via_profile(p: f64, theta: f64) -> Result<f64> {
    check_theta_family(theta, p)?;
    let (gamma, _) = param_space::gammas(p, theta)?;
    let lambda = 1.0;
    let q = profile_constants(lambda, p, theta)?.quotient();
    let e = (2.0 * theta - 1.0) * p + 2.0;
    Ok(c_lt(gamma)?.powf(1.0 / gamma) * q.powf(2.0 * p / e) / lambda)
}

/// Relative defect `|c_LT(γ) ∫V⋆^{γ+1/2} - Λ^γ| / Λ^γ`, `γ = (p+2)/(2(p-2))`,
/// with the integral done by quadrature.
pub fn lambda_condition_check(lambda: f64, p: f64) -> Result<f64> {
    check_p_open(p)?;
    let pc = profile_constants(lambda, p, 1.0)?;
    let (gamma, _) = param_space::gammas(p, 1.0)?;
    let power = gamma + 0.5;
    let scale = pc.a.powf(p) / pc.b;
    let integral = integrate_line(|s| v_star_eval(s, &pc).powf(power), pc.b, 1e-12 * scale.max(1.0))?;
    let target = lambda.powf(gamma);
    Ok((c_lt(gamma)? * integral.value - target).abs() / target)
}

/// Radial extremal `w*_{a,b}(|x|)` of the Euclidean inequality.
pub fn euclidean_radial_extremal(r: f64, pt: &ParamPoint) -> Result<f64> {
    let pt = ParamPoint::new(pt.n, pt.a, pt.b)?;
    if !(pt.b > pt.a && pt.b < pt.a + 1.0) {
        return domain(format!("need a < b < a + 1, got a = {}, b = {}", pt.a, pt.b));
    }
    if !(r >= 0.0) {
        return domain(format!("|x| must be >= 0, got {r}"));
    }
    let (alpha, beta) = radial_exponents(&pt);
    Ok((1.0 + r.powf(alpha)).powf(-beta))
}

/// Exponents `(α, β)` with `w* = (1 + r^α)^{-β}`.
pub(crate) fn radial_exponents(pt: &ParamPoint) -> (f64, f64) {
    let n = pt.n as f64;
    let delta = 1.0 + pt.a - pt.b;
    let alpha = 2.0 * (n - 2.0 - 2.0 * pt.a) * delta / (n - 2.0 * delta);
    let beta = (n - 2.0 * delta) / (2.0 * delta);
    (alpha, beta)
}

/// Where a tabulated constant comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ClosedForm,
    Oracle,
    PaperTypoFlag,
}

impl Provenance {
    pub fn tag(&self) -> &'static str {
        match self {
            Provenance::ClosedForm => "closed_form",
            Provenance::Oracle => "oracle",
            Provenance::PaperTypoFlag => "paper_typo_flag",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantRow {
    pub name: String,
    pub p: Option<f64>,
    #[serde(rename = "Lambda")]
    pub lambda: Option<f64>,
    pub theta: Option<f64>,
    #[serde(rename = "N")]
    pub n: Option<u32>,
    pub value: f64,
    pub provenance: Provenance,
}

/// Input of [`constants_table`]: a cylinder point and/or a Lieb–Thirring
/// exponent.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ConstantsQuery {
    pub point: Option<(u32, f64, f64)>,
    pub theta: Option<f64>,
    pub gamma: Option<f64>,
    /// Set when the point was given as `(N, a, b)`.
    pub euclidean: Option<ParamPoint>,
}

/// Every closed form available at the query, plus quadrature cross-checks.
pub fn constants_table(query: &ConstantsQuery) -> Result<Vec<ConstantRow>> {
    let mut rows = Vec::new();
    if query.point.is_none() && query.gamma.is_none() {
        return domain("need a parameter point or gamma");
    }
    if let Some(gamma) = query.gamma {
        let row = |name: &str, value, provenance| ConstantRow {
            name: name.to_string(),
            p: None,
            lambda: None,
            theta: None,
            n: None,
            value,
            provenance,
        };
        let (first, second) = c_lt_forms(gamma)?;
        rows.push(row("c_lt", c_lt(gamma)?, Provenance::ClosedForm));
        rows.push(row("c_lt_optimizer_form", second, Provenance::ClosedForm));
        rows.push(row("c_lt_form_rel_diff", (first - second).abs() / first, Provenance::Oracle));
        rows.push(row("lambda1_v0", (gamma - 0.5).powi(2), Provenance::ClosedForm));
        let norm = integrate_line(|s| psi_gamma_eval(s, gamma).unwrap().powi(2), 1.0, 1e-13)?;
        rows.push(row("psi_gamma_norm", norm.value, Provenance::Oracle));
    }
    if let Some((n, p, lambda)) = query.point {
        let theta = query.theta.unwrap_or(1.0);
        let cyl = param_space::CylinderPoint::new(n, p, lambda, theta)?;
        check_p_open(p)?;
        let row = |name: &str, value, provenance| ConstantRow {
            name: name.to_string(),
            p: Some(p),
            lambda: Some(lambda),
            theta: Some(theta),
            n: Some(n),
            value,
            provenance,
        };
        let ac = param_space::a_critical(n)?;
        let (a, b) = match query.euclidean {
            Some(pt) => (pt.a, pt.b),
            None => {
                let pt = param_space::from_cylinder(n, p, lambda)?;
                (pt.a, pt.b)
            }
        };
        rows.push(row("a_c", ac, Provenance::ClosedForm));
        rows.push(row("a", a, Provenance::ClosedForm));
        rows.push(row("b", b, Provenance::ClosedForm));
        rows.push(row("lambda_fs", param_space::lambda_fs(p, n)?, Provenance::ClosedForm));
        rows.push(row("lambda_star", param_space::lambda_star(p, n)?, Provenance::ClosedForm));
        rows.push(row("theta_min", param_space::theta_min(p, n)?, Provenance::ClosedForm));
        if a < 0.0 {
            rows.push(row("b_fs", param_space::b_fs(a, n)?, Provenance::ClosedForm));
            rows.push(row("b_star", param_space::b_star(a, n)?, Provenance::ClosedForm));
        }
        let (gamma, q) = cyl.gammas()?;
        rows.push(row("gamma", gamma, Provenance::ClosedForm));
        rows.push(row("q", q, Provenance::ClosedForm));
        let pc = profile_constants(lambda, p, theta)?;
        rows.push(row("eta", pc.eta, Provenance::ClosedForm));
        rows.push(row("A", pc.a, Provenance::ClosedForm));
        rows.push(row("B", pc.b, Provenance::ClosedForm));
        rows.push(row("t_star", pc.t_star, Provenance::ClosedForm));
        let m = moments(p)?;
        rows.push(row("I2", m.i2, Provenance::ClosedForm));
        rows.push(row("Ip", m.ip, Provenance::ClosedForm));
        rows.push(row("J2", m.j2, Provenance::ClosedForm));
        let area = sphere_area(n)?;
        rows.push(row("sphere_area", area, Provenance::ClosedForm));
        rows.push(row("c_lt", c_lt(gamma)?, Provenance::ClosedForm));
        rows.push(row("k_star", k_star(theta, p)?, Provenance::ClosedForm));
        rows.push(row("k_ckn_star", k_ckn_star(theta, lambda, p)?, Provenance::ClosedForm));
        rows.push(row("frak_c", frak_c(p, theta)?, Provenance::ClosedForm));
        rows.push(row("frak_c_via_profile", frak_c_via_profile(p, theta)?, Provenance::Oracle));
        if theta == 1.0 {
            let c = radial_constant(lambda, p, n)?;
            rows.push(row("radial_constant", c, Provenance::ClosedForm));
            let lp = integrate_line(|s| u_star_eval(s, &pc).powf(p), pc.b, 1e-13)?;
            let oracle = (area * lp.value).powf((2.0 - p) / p);
            rows.push(row("radial_constant_quadrature", oracle, Provenance::Oracle));
            rows.push(row(
                "lambda_condition_defect",
                lambda_condition_check(lambda, p)?,
                Provenance::Oracle,
            ));
            let sharp = c * area.powf(2.0 * (p - 2.0) / p);
            rows.push(row("sharp_display_constant", sharp, Provenance::PaperTypoFlag));
            rows.push(row("sharp_display_ratio", sharp / c, Provenance::PaperTypoFlag));
            if let Some(pt) = query.euclidean {
                if pt.a == -0.5 && pt.b == 0.0 {
                    rows.push(row(
                        "half_weight_display",
                        half_weight_display(n)?,
                        Provenance::PaperTypoFlag,
                    ));
                }
            }
        }
    }
    Ok(rows)
}

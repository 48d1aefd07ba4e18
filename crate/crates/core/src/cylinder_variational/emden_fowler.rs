use serde::{Deserialize, Serialize};

use crate::closed_forms::{profile_constants, sphere_area, u_star_eval};
use crate::error::{domain, numeric, Result};
use crate::param_space::{a_critical, to_cylinder, ParamPoint};

/// Radial profile `w` sampled at `r = e^t` on a uniform `t` grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogGridProfile {
    pub t: Vec<f64>,
    pub w: Vec<f64>,
}

impl LogGridProfile {
    pub fn sample(w: impl Fn(f64) -> f64, t_min: f64, t_max: f64, n: usize) -> Result<Self> {
        if !(t_max > t_min) || n < 2 {
            return domain("log grid needs t_max > t_min and at least two samples");
        }
        let h = (t_max - t_min) / (n - 1) as f64;
        let t: Vec<f64> = (0..n).map(|k| t_min + k as f64 * h).collect();
        let w = t.iter().map(|&x| w(x.exp())).collect();
        Ok(LogGridProfile { t, w })
    }

    fn step(&self) -> Result<f64> {
        let n = self.t.len();
        if n != self.w.len() {
            return domain("t and w lengths differ");
        }
        if n < 64 {
            return numeric(format!("profile has {n} samples, at least 64 needed"), n as f64);
        }
        let h = (self.t[n - 1] - self.t[0]) / (n - 1) as f64;
        if self.t.windows(2).any(|d| ((d[1] - d[0]) - h).abs() > 1e-9 * h.abs().max(1.0)) || !(h > 0.0) {
            return domain("log grid must be uniform and increasing");
        }
        Ok(h)
    }
}

/// Weighted Euclidean norms of `w` against the cylinder norms of its image.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PushforwardReport {
    /// `∫|x|^{-bp}|w|^p dx`
    pub lp_euclidean: f64,
    /// `|S^{N-1}| ∫|u|^p ds`
    pub lp_cylinder: f64,
    /// `∫|x|^{-2a}|∇w|² dx`
    pub dirichlet_euclidean: f64,
    /// `|S^{N-1}| ∫(|u'|² + Λu²) ds`
    pub dirichlet_cylinder: f64,
    pub lp_mismatch: f64,
    pub dirichlet_mismatch: f64,
    pub p: f64,
    #[serde(rename = "Lambda")]
    pub lambda: f64,
}

impl PushforwardReport {
    pub fn max_mismatch(&self) -> f64 {
        self.lp_mismatch.max(self.dirichlet_mismatch)
    }
}

/// Fourth-order central difference, second order in the two end cells.
fn derivative(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    (0..n)
        .map(|k| {
            if k >= 2 && k + 2 < n {
                (f[k - 2] - 8.0 * f[k - 1] + 8.0 * f[k + 1] - f[k + 2]) / (12.0 * h)
            } else if k == 0 {
                (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h)
            } else if k == n - 1 {
                (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h)
            } else {
                (f[k + 1] - f[k - 1]) / (2.0 * h)
            }
        })
        .collect()
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

struct Integrals {
    lp_e: f64,
    lp_c: f64,
    dir_e: f64,
    dir_c: f64,
}

fn integrals(t: &[f64], w: &[f64], u: &[f64], h: f64, pt: &ParamPoint, p: f64, lambda: f64) -> Integrals {
    let n = pt.n as f64;
    let wt = derivative(w, h);
    let ut = derivative(u, h);
    let mut acc = Integrals {
        lp_e: 0.0,
        lp_c: 0.0,
        dir_e: 0.0,
        dir_c: 0.0,
    };
    for k in 0..t.len() {
        let s = t[k];
        acc.lp_e += (s * (n - pt.b * p)).exp() * w[k].abs().powf(p);
        acc.lp_c += u[k].abs().powf(p);
        acc.dir_e += (s * (n - 2.0 - 2.0 * pt.a)).exp() * wt[k] * wt[k];
        acc.dir_c += ut[k] * ut[k] + lambda * u[k] * u[k];
    }
    acc
}

/// `u(s) = e^{(a_c - a)s} w(e^s)` together with the norm identities of the
/// transformation. Returns the `s` nodes, the image `u` and the report.
pub fn emden_fowler_pushforward(
    profile: &LogGridProfile,
    pt: &ParamPoint,
) -> Result<(Vec<f64>, Vec<f64>, PushforwardReport)> {
    let h = profile.step()?;
    let cyl = to_cylinder(pt)?;
    let (p, lambda) = (cyl.p, cyl.lambda);
    let rate = a_critical(pt.n)? - pt.a;
    let s = profile.t.clone();
    let u: Vec<f64> = s
        .iter()
        .zip(&profile.w)
        .map(|(x, w)| (rate * x).exp() * w)
        .collect();
    let peak = u.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if !(peak > 0.0) || !peak.is_finite() {
        return domain("profile must be finite and not identically zero");
    }
    let tail = u[0].abs().max(u[u.len() - 1].abs());
    if tail > 1e-10 * peak {
        return numeric("image has not decayed at the ends of the log grid", tail / peak);
    }
    let area = sphere_area(pt.n)?;
    let fine = integrals(&s, &profile.w, &u, h, pt, p, lambda);
    let pick = |v: &[f64]| v.iter().step_by(2).copied().collect::<Vec<f64>>();
    let coarse = integrals(&pick(&s), &pick(&profile.w), &pick(&u), 2.0 * h, pt, p, lambda);
    let drift = rel(coarse.dir_e * 2.0, fine.dir_e).max(rel(coarse.dir_c * 2.0, fine.dir_c));
    if drift > 1e-5 {
        return numeric("profile is undersampled on the log grid", drift);
    }
    let report = PushforwardReport {
        lp_euclidean: area * h * fine.lp_e,
        lp_cylinder: area * h * fine.lp_c,
        dirichlet_euclidean: area * h * fine.dir_e,
        dirichlet_cylinder: area * h * fine.dir_c,
        lp_mismatch: rel(fine.lp_e, fine.lp_c),
        dirichlet_mismatch: rel(fine.dir_e, fine.dir_c),
        p,
        lambda,
    };
    Ok((s, u, report))
}

/// Best match `c u⋆(· - s₀)` of a sampled profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileMatch {
    pub shift: f64,
    pub amplitude: f64,
    /// `max |u - c u⋆(· - s₀)| / max |u|`.
    pub sup_error: f64,
}

/// Aligns `u` with the extremal profile at `(Λ, p)` by matching centroid and
/// mass, then reports the relative sup distance.
pub fn compare_with_profile(s: &[f64], u: &[f64], lambda: f64, p: f64) -> Result<ProfileMatch> {
    if s.len() != u.len() || s.len() < 3 {
        return domain("profile arrays must match and hold at least three samples");
    }
    let pc = profile_constants(lambda, p, 1.0)?;
    let h = s[1] - s[0];
    let mass: f64 = u.iter().sum::<f64>() * h;
    if !(mass > 0.0) {
        return domain("profile must have positive mass");
    }
    let shift = s.iter().zip(u).map(|(x, y)| x * y).sum::<f64>() * h / mass;
    let star_mass: f64 = s.iter().map(|x| u_star_eval(x - shift, &pc)).sum::<f64>() * h;
    let amplitude = mass / star_mass;
    let peak = u.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let sup = s
        .iter()
        .zip(u)
        .map(|(x, y)| (y - amplitude * u_star_eval(x - shift, &pc)).abs())
        .fold(0.0, f64::max);
    Ok(ProfileMatch {
        shift,
        amplitude,
        sup_error: sup / peak,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closed_forms::euclidean_radial_extremal;

    #[test]
    fn extremal_maps_to_u_star() {
        let pt = ParamPoint::new(3, -0.5, 0.0).unwrap();
        let prof = LogGridProfile::sample(|r| euclidean_radial_extremal(r, &pt).unwrap(), -40.0, 40.0, 16001).unwrap();
        let (s, u, report) = emden_fowler_pushforward(&prof, &pt).unwrap();
        assert!(report.max_mismatch() < 1e-6, "{report:?}");
        let m = compare_with_profile(&s, &u, 1.0, 3.0).unwrap();
        assert!(m.sup_error < 1e-6, "{m:?}");
        assert!((m.amplitude - 1.0 / 6.0).abs() < 1e-8);
        assert!(m.shift.abs() < 1e-8);
    }

    #[test]
    fn sech_construction_is_exact() {
        let pt = ParamPoint::new(3, -0.5, 0.0).unwrap();
        let rate = 1.0;
        let prof = LogGridProfile::sample(|r| r.powf(-rate) / r.ln().cosh().powi(2), -40.0, 40.0, 8001).unwrap();
        let (s, u, _) = emden_fowler_pushforward(&prof, &pt).unwrap();
        for (x, y) in s.iter().zip(&u) {
            assert!((y - 1.0 / x.cosh().powi(2)).abs() < 1e-13);
        }
    }

    #[test]
    fn undersampled_profiles_are_rejected() {
        let pt = ParamPoint::new(3, -0.5, 0.0).unwrap();
        let prof = LogGridProfile::sample(|r| euclidean_radial_extremal(r, &pt).unwrap(), -40.0, 40.0, 40).unwrap();
        assert!(emden_fowler_pushforward(&prof, &pt).is_err());
        let short = LogGridProfile::sample(|r| euclidean_radial_extremal(r, &pt).unwrap(), -2.0, 2.0, 400).unwrap();
        assert!(emden_fowler_pushforward(&short, &pt).is_err());
    }
}

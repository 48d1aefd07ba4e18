//! Parameter algebra between the Euclidean weights `(a, b)` and the cylinder
//! parameters `(p, Λ, θ)`, and the symmetry-region classification.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::Write;

use crate::error::{domain, Error, Result};

/// Critical weight `a_c(N) = (N - 2) / 2`.
pub fn a_critical(n: u32) -> Result<f64> {
    if n < 2 {
        return domain(format!("dimension N must be >= 2, got {n}"));
    }
    Ok((n as f64 - 2.0) / 2.0)
}

fn a_c(n: u32) -> f64 {
    (n as f64 - 2.0) / 2.0
}

/// A weight pair `(a, b)` in dimension `N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamPoint {
    pub n: u32,
    pub a: f64,
    pub b: f64,
}

impl ParamPoint {
    /// Builds an admissible point or fails with a domain error.
    pub fn new(n: u32, a: f64, b: f64) -> Result<Self> {
        let pt = ParamPoint { n, a, b };
        pt.check_admissible()?;
        Ok(pt)
    }

    pub fn is_admissible(&self) -> bool {
        self.check_admissible().is_ok()
    }

    fn check_admissible(&self) -> Result<()> {
        let ParamPoint { n, a, b } = *self;
        if n < 2 {
            return domain(format!("dimension N must be >= 2, got {n}"));
        }
        if !a.is_finite() || !b.is_finite() {
            return domain("weights must be finite");
        }
        if a == a_c(n) {
            return domain(format!("a = a_c = {} is excluded", a_c(n)));
        }
        let lower_ok = if n >= 3 { a <= b } else { a < b };
        if !lower_ok || b > a + 1.0 {
            let rel = if n >= 3 { "<=" } else { "<" };
            return domain(format!("need a {rel} b <= a + 1 for N = {n}, got a = {a}, b = {b}"));
        }
        Ok(())
    }

    /// Exponent `p(a, b) = 2N / (N - 2 + 2(b - a))`.
    pub fn p(&self) -> f64 {
        let n = self.n as f64;
        2.0 * n / (n - 2.0 + 2.0 * (self.b - self.a))
    }

    /// `Λ = (a_c - a)²`.
    pub fn lambda(&self) -> f64 {
        (a_c(self.n) - self.a).powi(2)
    }
}

/// Cylinder-side parameters together with the derived exponents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylinderPoint {
    pub n: u32,
    pub p: f64,
    pub lambda: f64,
    pub theta: f64,
}

impl CylinderPoint {
    pub fn new(n: u32, p: f64, lambda: f64, theta: f64) -> Result<Self> {
        if n < 2 {
            return domain(format!("dimension N must be >= 2, got {n}"));
        }
        if !(p > 2.0) || !p.is_finite() {
            return domain(format!("p must be finite and > 2, got {p}"));
        }
        if n >= 3 {
            let crit = 2.0 * n as f64 / (n as f64 - 2.0);
            if p > crit * (1.0 + 1e-14) {
                return domain(format!("p = {p} exceeds the critical exponent {crit}"));
            }
        }
        if !(lambda > 0.0) || !lambda.is_finite() {
            return domain(format!("Lambda must be finite and > 0, got {lambda}"));
        }
        let vartheta = theta_min(p, n)?;
        if !(theta <= 1.0) || theta < vartheta - 1e-14 || !(theta > 0.5) {
            return domain(format!(
                "theta = {theta} outside [max(vartheta, 1/2+), 1] with vartheta = {vartheta}"
            ));
        }
        Ok(CylinderPoint { n, p, lambda, theta })
    }

    pub fn gammas(&self) -> Result<(f64, f64)> {
        gammas(self.p, self.theta)
    }
}

/// Maps `(N, a, b)` to `(N, p, Λ, θ = 1)`.
pub fn to_cylinder(pt: &ParamPoint) -> Result<CylinderPoint> {
    pt.check_admissible()?;
    if pt.b == pt.a + 1.0 {
        return Err(Error::NotAchieved(format!(
            "b = a + 1 gives p = 2 (a = {}, b = {})",
            pt.a, pt.b
        )));
    }
    Ok(CylinderPoint {
        n: pt.n,
        p: pt.p(),
        lambda: pt.lambda(),
        theta: 1.0,
    })
}

/// Inverse of [`to_cylinder`] on the branch `a < a_c`.
pub fn from_cylinder(n: u32, p: f64, lambda: f64) -> Result<ParamPoint> {
    CylinderPoint::new(n, p, lambda, 1.0)?;
    let a = a_c(n) - lambda.sqrt();
    let b = a + n as f64 / p - a_c(n);
    ParamPoint::new(n, a, b)
}

fn require_below_critical(a: f64, n: u32) -> Result<f64> {
    if n < 2 {
        return domain(format!("dimension N must be >= 2, got {n}"));
    }
    let t = a_c(n) - a;
    if !(t > 0.0) {
        return domain(format!("a = {a} must lie below a_c = {}", a_c(n)));
    }
    Ok(t)
}

/// Felli–Schneider curve `b_FS(a)`, normalised so that `Λ_FS(p(a, b_FS(a))) = (a_c - a)²`.
pub fn b_fs(a: f64, n: u32) -> Result<f64> {
    let t = require_below_critical(a, n)?;
    let nf = n as f64;
    Ok(nf * t / (2.0 * (t * t + nf - 1.0).sqrt()) + a - a_c(n))
}

/// The curve `b_⋆(a)` above which radial symmetry is proven.
pub fn b_star(a: f64, n: u32) -> Result<f64> {
    let t = require_below_critical(a, n)?;
    let nf = n as f64;
    let t2 = t * t;
    Ok((nf * (nf - 1.0) + 4.0 * nf * t2) / (6.0 * (nf - 1.0) + 8.0 * t2) + a - a_c(n))
}

/// Closed expression of `b_⋆(a) - b_FS(a)`.
pub fn curve_gap(a: f64, n: u32) -> Result<f64> {
    let t = require_below_critical(a, n)?;
    let nf = n as f64;
    Ok(nf / 2.0
        * (1.0 - t / (t * t + nf - 1.0).sqrt() - 2.0 * (nf - 1.0) / (4.0 * t * t + 3.0 * (nf - 1.0))))
}

/// `Λ_FS(p) = 4(N - 1) / (p² - 4)`.
pub fn lambda_fs(p: f64, n: u32) -> Result<f64> {
    if !(p > 2.0) {
        return domain(format!("lambda_fs requires p > 2, got {p}"));
    }
    Ok(4.0 * (n as f64 - 1.0) / (p * p - 4.0))
}

/// `Λ_⋆(p) = (N - 1)(6 - p) / (4(p - 2))`.
pub fn lambda_star(p: f64, n: u32) -> Result<f64> {
    if !(p > 2.0) || !(p < 6.0) {
        return domain(format!("lambda_star requires 2 < p < 6, got {p}"));
    }
    Ok((n as f64 - 1.0) * (6.0 - p) / (4.0 * (p - 2.0)))
}

/// Lower end `ϑ(p, N) = N(p - 2) / (2p)` of the admissible θ range.
pub fn theta_min(p: f64, n: u32) -> Result<f64> {
    if !(p > 2.0) {
        return domain(format!("theta_min requires p > 2, got {p}"));
    }
    Ok(n as f64 * (p - 2.0) / (2.0 * p))
}

/// Lieb–Thirring exponent `γ_θ = ((2θ - 1)p + 2) / (2(p - 2))` and the
/// Poincaré exponent `q = (γ_θ + 1) / (γ_θ - 1)`.
pub fn gammas(p: f64, theta: f64) -> Result<(f64, f64)> {
    if !(p > 2.0) {
        return domain(format!("gammas requires p > 2, got {p}"));
    }
    let gamma = ((2.0 * theta - 1.0) * p + 2.0) / (2.0 * (p - 2.0));
    if !(gamma > 1.0) {
        return domain(format!(
            "gamma_theta = {gamma} <= 1 at (p = {p}, theta = {theta}); the Hölder step needs gamma > 1"
        ));
    }
    Ok((gamma, (gamma + 1.0) / (gamma - 1.0)))
}

/// Symmetry status of a parameter point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Region {
    SymmetricProven,
    SymmetryBroken,
    Unknown,
    NonAdmissible,
    NotAchieved,
}

impl Region {
    pub fn tag(&self) -> &'static str {
        match self {
            Region::SymmetricProven => "SymmetricProven",
            Region::SymmetryBroken => "SymmetryBroken",
            Region::Unknown => "Unknown",
            Region::NonAdmissible => "NonAdmissible",
            Region::NotAchieved => "NotAchieved",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// Pointwise classification rule.
pub fn classify(pt: &ParamPoint) -> Region {
    if !pt.is_admissible() {
        return Region::NonAdmissible;
    }
    let ParamPoint { n, a, b } = *pt;
    if b == a + 1.0 || (b == a && a < 0.0) {
        return Region::NotAchieved;
    }
    let ac = a_c(n);
    if n >= 3 && (0.0..ac).contains(&a) {
        return Region::SymmetricProven;
    }
    if a < 0.0 {
        // a < 0 <= a_c, so both curves are defined.
        let bs = b_star(a, n).expect("a < a_c");
        let bf = b_fs(a, n).expect("a < a_c");
        if b >= bs {
            return Region::SymmetricProven;
        }
        if b < bf {
            return Region::SymmetryBroken;
        }
    }
    Region::Unknown
}

/// One classified grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionRecord {
    pub a: f64,
    pub b: f64,
    pub region: Region,
}

/// Inclusive sampling window for one axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRange {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

impl AxisRange {
    pub fn new(min: f64, max: f64, points: usize) -> Self {
        AxisRange { min, max, points }
    }

    fn validate(&self, name: &str) -> Result<()> {
        if !self.min.is_finite() || !self.max.is_finite() || self.min > self.max {
            return domain(format!("empty {name} range [{}, {}]", self.min, self.max));
        }
        if self.points == 0 {
            return domain(format!("{name} axis needs at least one point"));
        }
        if self.points == 1 && self.min != self.max {
            return domain(format!("{name} axis with one point needs min == max"));
        }
        Ok(())
    }

    fn value(&self, k: usize) -> f64 {
        if self.points == 1 {
            self.min
        } else {
            self.min + (self.max - self.min) * k as f64 / (self.points - 1) as f64
        }
    }
}

/// Classifies every point of the `(a, b)` grid. Records are ordered with `a`
/// as the outer (slow) index and `b` as the inner index.
pub fn region_map(n: u32, a_range: AxisRange, b_range: AxisRange) -> Result<Vec<RegionRecord>> {
    if n < 2 {
        return domain(format!("dimension N must be >= 2, got {n}"));
    }
    a_range.validate("a")?;
    b_range.validate("b")?;
    let nb = b_range.points;
    let records = (0..a_range.points * nb)
        .into_par_iter()
        .map(|idx| {
            let a = a_range.value(idx / nb);
            let b = b_range.value(idx % nb);
            RegionRecord {
                a,
                b,
                region: classify(&ParamPoint { n, a, b }),
            }
        })
        .collect();
    Ok(records)
}

/// Writes `a,b,region` CSV.
pub fn write_region_csv<W: Write>(records: &[RegionRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["a", "b", "region"])?;
    for r in records {
        w.write_record([fmt_g(r.a), fmt_g(r.b), r.region.tag().to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes a JSON array of `{a, b, region}`.
pub fn write_region_json<W: Write>(records: &[RegionRecord], out: W) -> Result<()> {
    serde_json::to_writer(out, records)?;
    Ok(())
}

/// Formats with 12 significant digits, trailing zeros trimmed.
pub fn fmt_g(x: f64) -> String {
    crate::report::fmt_sig(x, 12)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn critical_weight() {
        assert_eq!(a_critical(3).unwrap(), 0.5);
        assert_eq!(a_critical(2).unwrap(), 0.0);
        assert_eq!(a_critical(10).unwrap(), 4.0);
        assert!(a_critical(1).is_err());
    }

    #[test]
    fn cylinder_images() {
        let c = to_cylinder(&ParamPoint::new(3, -0.5, 0.0).unwrap()).unwrap();
        assert!((c.p - 3.0).abs() < 1e-15 && (c.lambda - 1.0).abs() < 1e-15);
        assert_eq!(c.theta, 1.0);
        let c = to_cylinder(&ParamPoint::new(3, 0.0, 0.0).unwrap()).unwrap();
        assert!((c.p - 6.0).abs() < 1e-15 && (c.lambda - 0.25).abs() < 1e-15);
        // (N=2, a=-1, b=0) lies on b = a + 1; p = 4 with Λ = 1 needs b = -1/2.
        let pt = ParamPoint::new(2, -1.0, 0.0).unwrap();
        assert!(matches!(to_cylinder(&pt), Err(Error::NotAchieved(_))));
        let c = to_cylinder(&ParamPoint::new(2, -1.0, -0.5).unwrap()).unwrap();
        assert!((c.p - 4.0).abs() < 1e-15 && (c.lambda - 1.0).abs() < 1e-15);
    }

    #[test]
    fn to_cylinder_errors() {
        let pt = ParamPoint::new(3, -1.0, 0.0).unwrap();
        assert!(matches!(to_cylinder(&pt), Err(Error::NotAchieved(_))));
        assert!(ParamPoint::new(3, 0.5, 0.7).is_err());
        assert!(ParamPoint::new(3, -1.0, -1.5).is_err());
        assert!(ParamPoint::new(2, -1.0, -1.0).is_err());
        assert!(ParamPoint::new(3, -1.0, -1.0).is_ok());
    }

    #[test]
    fn curve_spot_values() {
        assert!(b_fs(0.0, 3).unwrap().abs() < 1e-15);
        assert!((b_star(-0.5, 3).unwrap() + 0.1).abs() < 1e-15);
        assert!(b_star(-0.5, 2).unwrap().abs() < 1e-15);
        assert!((b_star(0.0, 3).unwrap() - 1.0 / 7.0).abs() < 1e-15);
        assert!(b_fs(0.5, 3).is_err());
        assert!(b_star(0.7, 3).is_err());
    }

    #[test]
    fn lambda_curves() {
        assert!((lambda_fs(3.0, 3).unwrap() - 1.6).abs() < 1e-15);
        assert!((lambda_star(3.0, 3).unwrap() - 1.5).abs() < 1e-15);
        let ratio = lambda_star(3.0, 3).unwrap() / lambda_fs(3.0, 3).unwrap();
        assert!((ratio - 0.9375).abs() < 1e-15);
        let p = 2.0 + 1e-7;
        let ratio = lambda_star(p, 4).unwrap() / lambda_fs(p, 4).unwrap();
        assert!((ratio - 1.0).abs() < 1e-6);
        assert!(lambda_fs(2.0, 3).is_err());
        assert!(lambda_star(6.0, 3).is_err());
    }

    #[test]
    fn theta_and_gammas() {
        assert!((theta_min(3.0, 3).unwrap() - 0.5).abs() < 1e-15);
        assert!((theta_min(6.0, 3).unwrap() - 1.0).abs() < 1e-15);
        assert!((theta_min(4.0, 2).unwrap() - 0.5).abs() < 1e-15);
        let (g, q) = gammas(3.0, 1.0).unwrap();
        assert!((g - 2.5).abs() < 1e-15 && (q - 7.0 / 3.0).abs() < 1e-15);
        assert!((q + 1.0 - 10.0 / 3.0).abs() < 1e-15);
        let (g, q) = gammas(4.0, 1.0).unwrap();
        assert!((g - 1.5).abs() < 1e-15 && (q - 5.0).abs() < 1e-14);
        // γ_θ(4, 3/4) = 1 exactly
        assert!(gammas(4.0, 0.75).is_err());
        let (g, _) = gammas(4.0, 0.8).unwrap();
        assert!((g - 1.1).abs() < 1e-15);
        assert!(gammas(6.0, 1.0).is_err());
    }

    #[test]
    fn classification_examples() {
        let c = |n, a, b| classify(&ParamPoint { n, a, b });
        assert_eq!(c(3, -0.5, 0.0), Region::SymmetricProven);
        assert_eq!(c(3, -2.0, -1.9), Region::SymmetryBroken);
        assert_eq!(c(3, 0.2, 0.5), Region::SymmetricProven);
        assert_eq!(c(3, -1.0, 0.0), Region::NotAchieved);
        assert_eq!(c(3, -1.0, -1.0), Region::NotAchieved);
        assert_eq!(c(3, 0.5, 0.6), Region::NonAdmissible);
        assert_eq!(c(2, -1.0, -1.0), Region::NonAdmissible);
        // boundary b = b_star is symmetric
        let bs = b_star(-1.0, 3).unwrap();
        assert_eq!(c(3, -1.0, bs), Region::SymmetricProven);
        let bf = b_fs(-1.0, 3).unwrap();
        assert_eq!(c(3, -1.0, bf), Region::Unknown);
    }

    #[test]
    fn degenerate_sweep() {
        let recs = region_map(3, AxisRange::new(-0.5, -0.5, 1), AxisRange::new(0.0, 0.0, 1)).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].region, classify(&ParamPoint { n: 3, a: -0.5, b: 0.0 }));
        assert!(region_map(3, AxisRange::new(1.0, 0.0, 5), AxisRange::new(0.0, 1.0, 5)).is_err());
        assert!(region_map(3, AxisRange::new(0.0, 1.0, 0), AxisRange::new(0.0, 1.0, 5)).is_err());
    }
}

//! Variational problem on the cylinder: gradient, minimizer, stability,
//! proof chain, Emden–Fowler bridge, Lieb–Thirring and θ < 1 sandwich.

mod common;

use ckn_core::closed_forms::{c_lt, k_ckn_star, profile_constants, u_star_eval};
use ckn_core::cylinder_variational::*;
use ckn_core::param_space::{gammas, lambda_fs, lambda_star, ParamPoint};
use ckn_core::schrodinger_1d::{lowest_eigenpair, LineGrid, Potential1D};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn inner(a: &CylField, b: &CylField) -> f64 {
    a.grid.h * a.data.iter().zip(&b.data).map(|(x, y)| x * y).sum::<f64>()
}

fn shifted(u: &CylField, d: &CylField, t: f64) -> CylField {
    CylField {
        data: u.data.iter().zip(&d.data).map(|(x, y)| x + t * y).collect(),
        ..u.clone()
    }
}

#[test]
fn gradient_matches_central_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let grid = LineGrid::new(12.0, 300).unwrap();
    for k in 0..10 {
        let n = if k % 2 == 0 { 3 } else { 2 };
        let p = [2.5, 3.0, 4.0][k % 3];
        let theta = if k < 5 { 1.0 } else { 0.85 };
        let lambda = rng.gen_range(0.5..3.0);
        let u = common::random_field(&mut rng, grid, n, 4);
        let d = common::random_field(&mut rng, grid, n, 4);
        let g = rayleigh_gradient(&u, lambda, p, theta).unwrap();
        let analytic = inner(&g, &d);
        let t = 1e-5;
        let plus = rayleigh(&shifted(&u, &d, t), lambda, p, theta).unwrap();
        let minus = rayleigh(&shifted(&u, &d, -t), lambda, p, theta).unwrap();
        let fd = (plus - minus) / (2.0 * t);
        let rel = (analytic - fd).abs() / fd.abs().max(1e-3 * g.data.iter().map(|x| x.abs()).fold(0.0, f64::max));
        assert!(rel < 1e-6, "case {k}: analytic {analytic}, fd {fd}");
    }
}

#[test]
fn one_step_from_radial_stays_radial() {
    let grid = desk_grid(profile_decay(2.0, 3.0, 1.0).unwrap()).unwrap();
    let start = CylField::from_profiles(grid, 3, 6, |l, s| if l == 0 { 1.0 / (0.7 * s).cosh() } else { 0.0 }).unwrap();
    let opts = MinimizeOptions {
        max_iter: 1,
        ..Default::default()
    };
    let (report, field) = minimize(&start, 2.0, 3.0, 1.0, &opts).unwrap();
    assert_eq!(report.iterations, 1);
    // ℓ >= 1 coefficients only pick up quadrature round-off of ∫e_ℓ = 0
    let peak = field.data.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let leak = field
        .data
        .iter()
        .enumerate()
        .filter(|(k, _)| k % 7 != 0)
        .fold(0.0f64, |m, (_, x)| m.max(x.abs()));
    assert!(leak <= 1e-14 * peak, "leak {leak}");
    assert!(report.quotient < rayleigh(&start, 2.0, 3.0, 1.0).unwrap());
}

#[test]
fn constant_is_monotone_and_above_radial() {
    let opts = MinimizeOptions::default();
    let mut last = f64::INFINITY;
    for lambda in [0.5, 1.0, 2.0, 3.0] {
        let grid = desk_grid(profile_decay(lambda, 3.0, 1.0).unwrap()).unwrap();
        let (best, _, _) = minimize_multistart(grid, 3, 4, lambda, 3.0, 1.0, &opts).unwrap();
        let q_star = profile_constants(lambda, 3.0, 1.0).unwrap().quotient();
        assert!(best.quotient <= q_star * (1.0 + 1e-8), "Lambda = {lambda}");
        assert!(best.constant <= last, "Lambda = {lambda}");
        last = best.constant;
    }
}

#[test]
fn euler_lagrange_identities_on_minimizers() {
    let opts = MinimizeOptions::default();
    for lambda in [1.0, 3.0] {
        let grid = desk_grid(profile_decay(lambda, 3.0, 1.0).unwrap()).unwrap();
        let (best, field, _) = minimize_multistart(grid, 3, 6, lambda, 3.0, 1.0, &opts).unwrap();
        let u = el_normalize(&field, lambda, 3.0).unwrap();
        let f = functional_f(&u, lambda, 3.0).unwrap();
        let m: f64 = u.grid.h * u.data.iter().map(|x| x * x).sum::<f64>();
        let res = el_residual(&u, lambda, 3.0, 1.0).unwrap().relative();
        assert!((f + lambda * m).abs() <= 1e-9 * (lambda * m), "Lambda = {lambda}: F = {f}, -Λm = {}", -lambda * m);
        assert!(res < 1e-5, "Lambda = {lambda}: residual {res}");
        // D ≤ Λ exactly when ∫∫u^p ≤ ∫u⋆^p
        let chain = proof_chain(&u, lambda, 3.0).unwrap();
        let (gamma, _) = gammas(3.0, 1.0).unwrap();
        let pc = profile_constants(lambda, 3.0, 1.0).unwrap();
        let star_p = pc.integrals().0;
        let own_p = (chain.d.powf(gamma) / c_lt(gamma).unwrap()).max(0.0);
        assert!((chain.d <= lambda * (1.0 + 1e-9)) == (own_p <= star_p * (1.0 + 1e-8)));
        if lambda > 2.0 {
            assert!(best.angular_fraction > 1e-3);
            assert!(chain.d < lambda);
        }
    }
}

#[test]
fn proof_chain_slacks_on_fuzzed_fields() {
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    let grid = LineGrid::new(25.0, 2500).unwrap();
    for k in 0..60 {
        let n = if k % 2 == 0 { 2 } else { 3 };
        let p = [2.5, 3.0, 4.0][k % 3];
        let lambda = rng.gen_range(0.3..3.0);
        let u = common::random_nonnegative_field(&mut rng, grid, n, 4);
        let r = proof_chain(&u, lambda, p).unwrap();
        assert!(r.min_slack() >= -1e-8, "case {k}: {r:?}");
    }
}

#[test]
fn fs_threshold_triple_agreement() {
    for p in [2.5, 3.0, 4.0] {
        for n in [2u32, 3] {
            let formula = lambda_fs(p, n).unwrap();
            assert!((formula - 4.0 * (n as f64 - 1.0) / (p * p - 4.0)).abs() < 1e-12);
            let numeric = fs_threshold(p, n).unwrap();
            assert!((numeric - formula).abs() / formula < 5e-3, "p={p} N={n}: {numeric}");
            // zero of the Pöschl–Teller form by bisection
            let (mut lo, mut hi) = (1e-3, 50.0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if second_variation_closed_form(1, mid, p, n).unwrap() > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            assert!((numeric - lo).abs() < 1e-3, "p={p} N={n}: {numeric} vs {lo}");
        }
    }
    assert!((second_variation_mode(1, 3.0, 3.0, 3).unwrap() + 1.75).abs() < 1e-3);
}

#[test]
fn second_variation_positive_below_lambda_star() {
    for p in [2.5, 3.0, 4.0] {
        for n in [2u32, 3] {
            let top = lambda_star(p, n).unwrap();
            for f in [0.1, 0.5, 0.9, 1.0] {
                assert!(second_variation_mode(1, f * top, p, n).unwrap() > 0.0, "p={p} N={n} f={f}");
            }
        }
    }
}

fn bump(x: f64) -> f64 {
    if x.abs() < 1.0 {
        (-1.0 / (1.0 - x * x)).exp()
    } else {
        0.0
    }
}

#[test]
fn emden_fowler_norm_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let points = [(3u32, -0.5, 0.0), (3, -1.0, -0.5), (2, -0.5, 0.1), (4, 0.3, 0.8)];
    for &(n, a, b) in &points {
        let pt = ParamPoint::new(n, a, b).unwrap();
        for _ in 0..5 {
            let (c, w, amp) = (rng.gen_range(-2.0..2.0), rng.gen_range(2.0..5.0), rng.gen_range(0.5..2.0));
            let prof = LogGridProfile::sample(|r| amp * bump((r.ln() - c) / w), -8.0, 8.0, 16001).unwrap();
            let (_, _, rep) = emden_fowler_pushforward(&prof, &pt).unwrap();
            assert!(rep.max_mismatch() < 1e-6, "{pt:?}: {rep:?}");
        }
    }
}

#[test]
fn emden_fowler_image_of_the_extremal() {
    let pt = ParamPoint::new(3, -0.5, 0.0).unwrap();
    let prof = LogGridProfile::sample(
        |r| ckn_core::closed_forms::euclidean_radial_extremal(r, &pt).unwrap(),
        -45.0,
        45.0,
        18001,
    )
    .unwrap();
    let (s, u, rep) = emden_fowler_pushforward(&prof, &pt).unwrap();
    assert!(rep.max_mismatch() < 1e-6);
    let m = compare_with_profile(&s, &u, 1.0, 3.0).unwrap();
    assert!(m.sup_error < 1e-8, "{m:?}");
    // the exact relation u = u⋆/6
    let pc = profile_constants(1.0, 3.0, 1.0).unwrap();
    for (x, y) in s.iter().zip(&u) {
        assert!((y - u_star_eval(*x, &pc) / 6.0).abs() < 1e-14);
    }
}

#[test]
fn lieb_thirring_bound_for_separable_potentials() {
    let p = 3.0;
    let (gamma, _) = gammas(p, 1.0).unwrap();
    let opts = MinimizeOptions::default();
    let threshold = lt_symmetric_threshold(gamma, p, 3).unwrap();
    let grid = LineGrid::new(20.0, 4000).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for _ in 0..50 {
        let parts: Vec<(f64, f64, f64)> = (0..3)
            .map(|_| (rng.gen_range(0.0..1.0), rng.gen_range(-4.0..4.0), rng.gen_range(0.5..2.5)))
            .collect();
        let v = Potential1D::from_fn(grid, |s| parts.iter().map(|(a, c, w)| a * bump((s - c) / w)).sum()).unwrap();
        let mu = v.power_integral(gamma + 0.5).powf(1.0 / gamma);
        if mu > threshold {
            continue;
        }
        let bound = lambda_gamma_n(mu, p, 3, 4, &opts).unwrap();
        let l1 = lowest_eigenpair(&v).unwrap().lambda1;
        assert!(l1 <= bound.lambda * (1.0 + 5.0 * grid.h * grid.h), "{l1} > {}", bound.lambda);
    }
}

#[test]
fn lieb_thirring_threshold_behaviour() {
    let opts = MinimizeOptions::default();
    let threshold = lt_symmetric_threshold(2.5, 3.0, 3).unwrap();
    assert!(threshold.is_finite() && threshold > 0.0);
    for p in [2.5, 3.0, 4.0] {
        let (g, _) = gammas(p, 1.0).unwrap();
        let ratio = lt_symmetric_threshold(g, p, 3).unwrap() / lambda_star(p, 3).unwrap();
        assert!((ratio * radial_lt_slope(p).unwrap() - 1.0).abs() < 1e-12);
    }
    let below = lambda_gamma_n(0.9 * threshold, 3.0, 3, 4, &opts).unwrap();
    assert!(below.symmetric && below.angular_fraction < 1e-6);
    // linear in μ below the threshold
    let half = lambda_gamma_n(0.45 * threshold, 3.0, 3, 4, &opts).unwrap();
    assert!((below.lambda - 2.0 * half.lambda).abs() < 1e-12 * below.lambda);
    // Λ_γ^N(μ) > Λ_FS forces a broken optimizer
    let mu = 2.0 * lambda_fs(3.0, 3).unwrap() / radial_lt_slope(3.0).unwrap();
    let above = lambda_gamma_n(mu, 3.0, 3, 4, &opts).unwrap();
    assert!(!above.symmetric);
    assert!(above.lambda >= radial_lt_slope(3.0).unwrap() * mu);
    assert!(above.angular_fraction > 1e-3, "{above:?}");
}

#[test]
fn sandwich_at_theta_below_one() {
    let opts = MinimizeOptions::default();
    for theta in [0.8, 0.9] {
        let bound = sandwich_lambda_bound(theta, 3.0, 3).unwrap();
        let r = sandwich_check(theta, 0.9 * bound, 3.0, 3, 6, &opts).unwrap();
        assert!(r.inside && r.converged, "{r:?}");
        assert!(r.k_lower <= r.k_upper);
        assert!((r.k_lower - k_ckn_star(theta, 0.9 * bound, 3.0).unwrap()).abs() < 1e-15);
        // Λ ≤ D ≤ 𝔊Λ and the Hölder step
        assert!(r.d >= r.lambda * (1.0 - 1e-6) && r.d <= r.frak_c * r.lambda * (1.0 + 1e-6), "{r:?}");
        assert!(r.hoelder_lhs <= r.hoelder_rhs * (1.0 + 1e-12));
        assert!(!r.limit_case);
    }
}

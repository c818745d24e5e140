mod common;

use common::{bisect_increasing, simpson};
use fastgh::{freud_rule, solve_support, subsample_threshold, Error, FreudPotential};
use proptest::prelude::*;
use statrs::function::gamma::gamma;
use std::f64::consts::PI;

/// `int_a^b f` for densities with square-root endpoints, via `x = c + h sin(phi)`.
fn integrate_density<F: Fn(f64) -> f64>(f: F, a: f64, b: f64) -> f64 {
    let (c, h) = (0.5 * (a + b), 0.5 * (b - a));
    simpson(&|p: f64| f(c + h * p.sin()) * h * p.cos(), -PI / 2.0, PI / 2.0, 1e-13)
}

/// Endpoint of the support of an even field from
/// `1 = (1/pi) int_0^1 b t Q'(b t) / sqrt(1 - t^2) dt`.
fn even_endpoint(dq: impl Fn(f64) -> f64) -> f64 {
    let mass = |b: f64| simpson(&|p: f64| b * p.sin() * dq(b * p.sin()), 0.0, PI / 2.0, 1e-13) / PI - 1.0;
    bisect_increasing(mass, 1e-3, 50.0)
}

#[test]
fn semicircle_law() {
    for n in [1, 10, 1000] {
        let mu = solve_support(&FreudPotential::monomial(1).unwrap(), n).unwrap();
        assert!((mu.b - 2f64.sqrt()).abs() <= 1e-12);
        assert!((mu.a + 2f64.sqrt()).abs() <= 1e-12);
        assert!((mu.beta[0] - 1.0 / PI).abs() <= 1e-12);
        assert_eq!(mu.n_param, n);
    }
}

#[test]
fn quartic_closed_form() {
    let mu = solve_support(&FreudPotential::monomial(2).unwrap(), 50).unwrap();
    let b = (4.0f64 / 3.0).powf(0.25);
    assert!((mu.b - b).abs() <= 1e-10);
    assert!((mu.beta[0] - 3.0 * b * b / (2.0 * PI)).abs() <= 1e-10);
    assert!(mu.beta[1].abs() <= 1e-14);
    assert!((mu.beta[2] - b * b / (2.0 * PI)).abs() <= 1e-10);
    for x in [-1.0, -0.3, 0.0, 0.8] {
        let exact = (b * b + 2.0 * x * x) * (b * b - x * x).sqrt() / PI;
        assert!((mu.density(x) - exact).abs() <= 1e-12);
    }
}

#[test]
fn monomial_endpoints_from_gamma() {
    // b^{2m} = sqrt(pi) Gamma(m) / Gamma(m + 1/2)
    for m in 1..=6 {
        let mu = solve_support(&FreudPotential::monomial(m).unwrap(), 77).unwrap();
        let mf = m as f64;
        let b = (PI.sqrt() * gamma(mf) / gamma(mf + 0.5)).powf(1.0 / (2.0 * mf));
        assert!((mu.b - b).abs() <= 1e-12, "m = {m}: {} vs {b}", mu.b);
    }
}

#[test]
fn mixed_even_field_endpoint() {
    // V = x^4 + 3 x^2 at n = 20: Q(y) = y^4 + 3 y^2 / sqrt(20)
    let n = 20;
    let v = FreudPotential::new(vec![0.0, 0.0, 3.0, 0.0, 1.0]).unwrap();
    let mu = solve_support(&v, n).unwrap();
    let c = 3.0 / (n as f64).sqrt();
    let b = even_endpoint(|y| 4.0 * y * y * y + 2.0 * c * y);
    assert!((mu.b - b).abs() <= 1e-11, "{} vs {b}", mu.b);
    assert!((mu.a + b).abs() <= 1e-11);
}

#[test]
fn densities_have_unit_mass_and_consistent_cdf() {
    let fields = [
        FreudPotential::monomial(1).unwrap(),
        FreudPotential::monomial(4).unwrap(),
        FreudPotential::new(vec![0.0, 0.0, 1.0, 0.0, 0.5, 0.0, 1.0]).unwrap(),
        FreudPotential::normalize(vec![0.0, 0.0, 0.0, 1.0, 1.0]).unwrap().0,
    ];
    for v in &fields {
        let mu = solve_support(v, 30).unwrap();
        let mass = integrate_density(|x| mu.density(x), mu.a, mu.b);
        assert!((mass - 1.0).abs() <= 1e-12, "{v:?}: {mass}");
        for t in [0.1, 0.35, 0.5, 0.9] {
            let x = mu.a + t * (mu.b - mu.a);
            let part = integrate_density(|s| mu.density(s), mu.a, x);
            assert!((mu.cdf(x) - part).abs() <= 1e-12, "{v:?} at {x}");
            assert!((mu.density_from_t(x) - mu.density(x)).abs() <= 1e-12);
        }
        assert!(mu.residuals.iter().all(|r| r.abs() <= 1e-13));
    }
}

#[test]
fn odd_field_support_is_shifted() {
    let (v, _) = FreudPotential::normalize(vec![0.0, 0.0, 0.0, 1.0, 1.0]).unwrap();
    let mu = solve_support(&v, 1).unwrap();
    assert!((mu.a + mu.b).abs() > 1e-3);
    assert!(mu.density(0.5 * (mu.a + mu.b)) > 0.0);
}

#[test]
fn two_cut_field_is_rejected() {
    let v = FreudPotential::new(vec![0.0, 0.0, -8.0, 0.0, 1.0]).unwrap();
    assert!(matches!(solve_support(&v, 1), Err(Error::UnsupportedRegime { .. })));
    // the same field is single-cut once n is large enough
    assert!(solve_support(&v, 10_000).is_ok());
    assert!(matches!(solve_support(&v, 0), Err(Error::Domain(_))));
}

#[test]
fn inverse_cdf_domain() {
    let mu = solve_support(&FreudPotential::monomial(2).unwrap(), 3).unwrap();
    assert!(mu.inverse_cdf(0.0).is_err());
    assert!(mu.inverse_cdf(1.0).is_err());
    assert!(mu.inverse_cdf(f64::NAN).is_err());
    assert_eq!(mu.cdf(mu.a - 1.0), 0.0);
    assert_eq!(mu.cdf(mu.b + 1.0), 1.0);
    assert_eq!(mu.density(mu.b + 1.0), 0.0);
}

#[test]
fn initial_guesses_are_close_to_the_nodes() {
    for (m, n) in [(1, 100), (2, 100), (4, 100), (4, 400)] {
        let v = FreudPotential::monomial(m).unwrap();
        let mu = solve_support(&v, n).unwrap();
        let g = mu.initial_guesses(n);
        let s = (n as f64).powf(1.0 / (2 * m) as f64);
        let x: Vec<f64> = freud_rule(&v, n, false).unwrap().nodes.iter().map(|t| t / s).collect();
        for k in 1..n - 1 {
            let gap = 0.5 * (x[k + 1] - x[k - 1]);
            assert!((g[k] - x[k]).abs() <= 0.05 * gap, "m = {m}, n = {n}, k = {k}");
        }
        // empirical distribution of the guesses
        let ks = (0..n)
            .map(|k| {
                let c = mu.cdf(g[k]);
                (c - k as f64 / n as f64).abs().max(((k + 1) as f64 / n as f64 - c).abs())
            })
            .fold(0.0f64, f64::max);
        assert!(ks <= 2.0 / n as f64, "m = {m}, n = {n}: {ks}");
    }
}

#[test]
fn subsample_threshold_counts() {
    for (m, n) in [(1, 1000), (1, 3000), (2, 1000), (4, 1000), (4, 2500)] {
        let v = FreudPotential::monomial(m).unwrap();
        let (tau, r) = subsample_threshold(&v, n, f64::MIN_POSITIVE).unwrap();
        let skipped = freud_rule(&v, n, true).unwrap().trivial_skipped;
        let slack = 3.max(skipped / 20);
        assert!(tau.abs_diff(skipped) <= slack, "m = {m}, n = {n}: {tau} vs {skipped}");
        assert!(r > 0.0);
    }
    let v = FreudPotential::monomial(1).unwrap();
    assert!(matches!(subsample_threshold(&v, 100, 0.0), Err(Error::Domain(_))));
    assert!(matches!(subsample_threshold(&v, 100, 2.0), Err(Error::Domain(_))));
    // nothing is negligible for small n
    assert_eq!(subsample_threshold(&v, 50, f64::MIN_POSITIVE).unwrap().0, 0);
}

#[test]
fn serializes_public_fields() {
    let mu = solve_support(&FreudPotential::monomial(1).unwrap(), 4).unwrap();
    let j = serde_json::to_value(&mu).unwrap();
    assert!(j.get("a").is_some() && j.get("beta").is_some() && j.get("n_param").is_some());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn cdf_round_trip(c2 in 0.0f64..4.0, c4 in 0.0f64..2.0, y in 0.001f64..0.999) {
        let v = FreudPotential::new(vec![0.0, 0.0, c2, 0.0, c4, 0.0, 1.0]).unwrap();
        let mu = solve_support(&v, 5).unwrap();
        let x = mu.inverse_cdf(y).unwrap();
        prop_assert!(x > mu.a && x < mu.b);
        prop_assert!((mu.cdf(x) - y).abs() <= 1e-13);
        prop_assert!(mu.density(x) > 0.0);
        prop_assert!((mu.a + mu.b).abs() <= 1e-14);
    }

    #[test]
    fn monomial_measure_does_not_depend_on_n(m in 1usize..5, n in 1usize..100_000) {
        let v = FreudPotential::monomial(m).unwrap();
        let a = solve_support(&v, n).unwrap();
        let b = solve_support(&v, 1).unwrap();
        prop_assert!((a.b - b.b).abs() <= 1e-13);
        for (x, y) in a.beta.iter().zip(&b.beta) {
            prop_assert!((x - y).abs() <= 1e-13);
        }
    }
}

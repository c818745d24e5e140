mod common;

use common::{airy_at_zero, airy_ode, airy_positive, airy_zero_bisect};
use fastgh::specfun::{airy_pair, airy_zero_asymptotic, AIRY_ZEROS};
use fastgh::{airy_ai, airy_ai_prime, airy_zero};
use proptest::prelude::*;

#[test]
fn origin_from_gamma() {
    let (a, d) = airy_at_zero();
    assert!((airy_ai(0.0).unwrap() - a).abs() <= 2e-16);
    assert!((airy_ai_prime(0.0).unwrap() - d).abs() <= 2e-16);
}

#[test]
fn ode_oracle_on_negative_axis() {
    let mut worst: f64 = 0.0;
    let mut worst_d: f64 = 0.0;
    for i in 1..=400 {
        let x = -0.05 * i as f64;
        let (a, d) = airy_ode(x);
        let (ai, aip) = airy_pair(x);
        // envelope |x|^{-1/4} / sqrt(pi) and |x|^{1/4} / sqrt(pi)
        let env = x.abs().max(1.0).powf(-0.25);
        worst = worst.max((ai - a).abs() / env);
        worst_d = worst_d.max((aip - d).abs() * env);
    }
    eprintln!("negative axis: {worst:e} {worst_d:e}");
    assert!(worst <= 1e-13, "{worst:e}");
    assert!(worst_d <= 1e-13, "{worst_d:e}");
}

#[test]
fn ode_oracle_near_origin() {
    // the stepped solution picks up Bi beyond x = 2
    for i in 1..=40 {
        let x = 0.05 * i as f64;
        let (a, d) = airy_ode(x);
        let (ai, aip) = airy_pair(x);
        assert!(((ai - a) / a).abs() <= 1e-13, "x = {x}: {ai} vs {a}");
        assert!(((aip - d) / d).abs() <= 1e-13, "x = {x}: {aip} vs {d}");
    }
}

#[test]
fn integral_oracle_on_positive_axis() {
    let mut worst: f64 = 0.0;
    for x in [0.5, 1.0, 2.0, 4.0, 7.5, 8.9, 9.1, 12.0, 20.0, 35.0, 60.0, 90.0, 103.0] {
        let (m, md, zeta) = airy_positive(x);
        let f = (-zeta).exp();
        let (ai, aip) = airy_pair(x);
        let (ra, rd) = if f > 0.0 {
            ((ai / (m * f) - 1.0).abs(), (aip / (md * f) - 1.0).abs())
        } else {
            // compare logarithms once the value itself underflows
            ((ai.ln() - (m.ln() - zeta)).abs(), 0.0)
        };
        worst = worst.max(ra).max(rd);
        assert!(ai > 0.0 && aip < 0.0, "x = {x}");
        // conditioning of Ai at x is about x^{3/2}
        let tol = 1e-13f64.max(4.0 * f64::EPSILON * x.powf(1.5));
        assert!(ra <= tol && rd <= tol, "x = {x}: {ra:e} {rd:e}");
    }
    eprintln!("positive axis: {worst:e}");
}

#[test]
fn tiny_values_stay_normal_until_underflow() {
    // Ai(102) is about 5e-300
    let (m, _, zeta) = airy_positive(102.0);
    let ai = airy_ai(102.0).unwrap();
    assert!(ai > 1e-300 && ai < 1e-299);
    assert!((ai / (m * (-zeta).exp()) - 1.0).abs() <= 4.0 * f64::EPSILON * 102f64.powf(1.5));
    assert_eq!(airy_ai(200.0).unwrap(), 0.0);
}

#[test]
fn seam_is_continuous() {
    for s in [-9.0f64, 9.0] {
        let lo = airy_pair(s - 1e-12);
        let hi = airy_pair(s + 1e-12);
        let (a0, d0) = airy_pair(s);
        assert!(((lo.0 - hi.0) / a0).abs() <= 1e-9);
        assert!(((lo.1 - hi.1) / d0).abs() <= 1e-9);
    }
}

#[test]
fn non_finite_arguments_rejected() {
    assert!(airy_ai(f64::NAN).is_err());
    assert!(airy_ai_prime(f64::INFINITY).is_err());
    assert!(airy_zero(0).is_err());
}

#[test]
fn table_matches_bisection_oracle() {
    for (m, &z) in AIRY_ZEROS.iter().enumerate() {
        let r = airy_zero_bisect(z - 1e-3, z + 1e-3);
        assert!((r - z).abs() <= 1e-13 * z.abs(), "m = {}: {z} vs {r}", m + 1);
    }
}

#[test]
fn first_zero_and_slope() {
    let a1 = airy_zero(1).unwrap();
    assert!(airy_ai(a1).unwrap().abs() <= 1e-13);
    assert!((airy_ai_prime(a1).unwrap() - 0.7012108227206906).abs() <= 1e-14);
}

#[test]
fn zeros_are_roots() {
    for m in 1..=200 {
        let a = airy_zero(m).unwrap();
        let (v, d) = airy_pair(a);
        // relative to the local slope
        assert!((v / d).abs() <= 1e-12 * a.abs(), "m = {m}: {v:e}");
        assert!(v.abs() <= 1e-12, "m = {m}: {v:e}");
    }
}

#[test]
fn expansion_agrees_with_table_at_the_end() {
    let z = AIRY_ZEROS[9];
    assert!((airy_zero_asymptotic(10) - z).abs() <= 1e-13 * z.abs());
}

#[test]
fn zeros_decrease_and_interlace_with_critical_points() {
    let zeros: Vec<f64> = (1..=100).map(|m| airy_zero(m).unwrap()).collect();
    assert!(zeros.windows(2).all(|w| w[1] < w[0]));
    for m in 0..20 {
        let (hi, lo) = (zeros[m], zeros[m + 1]);
        let mut changes = 0;
        let mut prev = airy_ai_prime(lo).unwrap();
        for i in 1..=400 {
            let x = lo + (hi - lo) * i as f64 / 400.0;
            let d = airy_ai_prime(x).unwrap();
            if d * prev < 0.0 {
                changes += 1;
            }
            prev = d;
        }
        assert_eq!(changes, 1, "between zeros {} and {}", m + 1, m + 2);
    }
}

proptest! {
    #[test]
    fn satisfies_airy_equation(x in -30.0f64..8.0) {
        let h = 1e-3;
        let (a, d) = airy_pair(x);
        let (_, dp) = airy_pair(x + h);
        let (_, dm) = airy_pair(x - h);
        let second = (dp - dm) / (2.0 * h);
        let tol = 1e-6 * (1.0 + x * x) * (a.abs() + d.abs());
        prop_assert!((second - x * a).abs() <= tol);
    }

    #[test]
    fn zero_expansion_is_monotone(m in 11usize..100_000) {
        let a = airy_zero(m).unwrap();
        let b = airy_zero(m + 1).unwrap();
        prop_assert!(b < a);
    }
}

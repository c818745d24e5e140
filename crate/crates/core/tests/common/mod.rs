//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use statrs::function::gamma::{gamma, ln_gamma};
use std::f64::consts::PI;

/// `Ai(0)` and `Ai'(0)` from the gamma function.
pub fn airy_at_zero() -> (f64, f64) {
    (
        1.0 / (3f64.powf(2.0 / 3.0) * gamma(2.0 / 3.0)),
        -1.0 / (3f64.powf(1.0 / 3.0) * gamma(1.0 / 3.0)),
    )
}

/// `Ai` and `Ai'` by Taylor stepping of `y'' = x y` from the origin.
pub fn airy_ode(x: f64) -> (f64, f64) {
    let (mut y, mut dy) = airy_at_zero();
    let steps = (x.abs() / 0.05).ceil().max(1.0) as usize;
    let h = x / steps as f64;
    let mut x0 = 0.0;
    for _ in 0..steps {
        let mut c = [0.0f64; 48];
        c[0] = y;
        c[1] = dy;
        c[2] = x0 * c[0] / 2.0;
        for k in 1..46 {
            c[k + 2] = (x0 * c[k] + c[k - 1]) / ((k + 2) as f64 * (k + 1) as f64);
        }
        let (mut v, mut d) = (0.0, 0.0);
        for k in (0..48).rev() {
            v = v * h + c[k];
        }
        for k in (1..48).rev() {
            d = d * h + k as f64 * c[k];
        }
        y = v;
        dy = d;
        x0 += h;
    }
    (y, dy)
}

/// `Ai(x)` and `Ai'(x)` for `x > 0` from the Macdonald-function integrals
/// `K_nu(z) = int_0^inf e^{-z cosh t} cosh(nu t) dt`, by the trapezoidal
/// rule, returned as mantissas times `e^{-zeta}`.
pub fn airy_positive(x: f64) -> (f64, f64, f64) {
    assert!(x > 0.0);
    let zeta = 2.0 / 3.0 * x.powf(1.5);
    let k = |nu: f64| {
        let h: f64 = 0.005;
        let mut s: f64 = 0.5;
        let mut t = h;
        loop {
            let term = (-zeta * (t.cosh() - 1.0)).exp() * (nu * t).cosh();
            s += term;
            if term < 1e-20 * s {
                break;
            }
            t += h;
        }
        s * h
    };
    let ai = (x / 3.0).sqrt() / PI * k(1.0 / 3.0);
    let aip = -x / (PI * 3f64.sqrt()) * k(2.0 / 3.0);
    (ai, aip, zeta)
}

/// Bisection on the ODE oracle for the zero of `Ai` in `[lo, hi]`.
pub fn airy_zero_bisect(mut lo: f64, mut hi: f64) -> f64 {
    let f = |x: f64| airy_ode(x).0;
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-16 * lo.abs() {
            break;
        }
    }
    0.5 * (lo + hi)
}

/// `int x^j e^{-x^{2m}} dx` over the real line.
pub fn freud_moment(m: usize, j: usize) -> f64 {
    if j % 2 == 1 {
        0.0
    } else {
        let m2 = 2.0 * m as f64;
        2.0 * gamma((j as f64 + 1.0) / m2) / m2
    }
}

/// `ln` of the even moment above.
pub fn ln_freud_moment(m: usize, j: usize) -> f64 {
    let m2 = 2.0 * m as f64;
    (2.0 / m2).ln() + ln_gamma((j as f64 + 1.0) / m2)
}

/// Constant linking the scaled parabolic-cylinder function to the
/// orthonormal Hermite function: `U~(x) = c psi_n(x)`.
pub fn scaled_u_constant(n: usize) -> f64 {
    let nf = n as f64;
    let r = 1.0 / (12.0 * nf) - 1.0 / (360.0 * nf.powi(3)) + 1.0 / (1260.0 * nf.powi(5))
        - 1.0 / (1680.0 * nf.powi(7))
        + 1.0 / (1188.0 * nf.powi(9));
    let l = (1.0 / (2.0 * nf)).ln_1p();
    let c = 2.0 * ((nf + 1.0) / 2.0 * l - 0.25 - r / 2.0).exp();
    let g = (r + 0.5 - (nf + 0.5) * l).exp();
    c * 2.0 * g / (1.0 + g)
}

/// `U~` and `dU~/dz` (`z = x sqrt 2`) at `x` from the double-double
/// recurrence.
pub fn scaled_u_oracle(n: usize, x: f64) -> (f64, f64) {
    let (p, dp) = fastgh::recurrence::xprec_oracle::hermite_function_xprec(n, x);
    let c = scaled_u_constant(n);
    (c * p, c * dp / 2f64.sqrt())
}

/// Adaptive Simpson quadrature to relative accuracy `tol`, measured against
/// `int |f|`.
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let d = left + right - whole;
        if depth == 0 || d.abs() <= 15.0 * tol {
            left + right + d / 15.0
        } else {
            rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
        }
    }
    // fixed panels first, so narrow features are not missed
    let panels = 256;
    let h = (b - a) / panels as f64;
    let coarse: f64 = (0..=2 * panels).map(|i| f(a + 0.5 * h * i as f64).abs()).sum::<f64>() * 0.5 * h;
    let abs_tol = tol * coarse.max(f64::MIN_POSITIVE) / panels as f64;
    (0..panels)
        .map(|i| {
            let (l, r) = (a + h * i as f64, a + h * (i + 1) as f64);
            let (fl, fr, fm) = (f(l), f(r), f(0.5 * (l + r)));
            let whole = h / 6.0 * (fl + 4.0 * fm + fr);
            rec(f, l, r, fl, fm, fr, whole, abs_tol, 24)
        })
        .sum()
}

/// Root of an increasing `f` on `[lo, hi]` by bisection.
pub fn bisect_increasing<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..300 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let num: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let den: f64 = lx.iter().map(|a| (a - mx) * (a - mx)).sum();
    num / den
}

/// Largest absolute deviation of a rule's moments from the analytic ones,
/// relative for even degrees and absolute (normalized) for odd ones.
pub fn moment_errors(rule: &fastgh::QuadratureRule, m: usize, max_deg: usize) -> (f64, f64) {
    let mut even: f64 = 0.0;
    let mut odd: f64 = 0.0;
    for j in 0..=max_deg {
        let q = rule.integrate(|x| x.powi(j as i32));
        if j % 2 == 0 {
            even = even.max((q / freud_moment(m, j) - 1.0).abs());
        } else {
            let scale = freud_moment(m, j + 1).max(freud_moment(m, j.saturating_sub(1)));
            odd = odd.max(q.abs() / scale);
        }
    }
    (even, odd)
}

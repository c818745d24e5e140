//! Airy function Ai, its derivative, and the zeros of Ai.
//!
//! For `|x| <= 9` both functions come from the Maclaurin series summed in
//! double-double arithmetic, which absorbs the cancellation between the two
//! series components (up to `e^{2ξ}` on the positive axis). Beyond that the
//! standard large-argument expansions are used; at `|x| = 9` their smallest
//! term is below `1e-16` relative.

use crate::error::{Error, Result};
use crate::xprec::DD;

const SERIES_LIMIT: f64 = 9.0;

/// Ai(0) as a double-double.
const AI0: DD = DD {
    hi: 0.3550280538878172,
    lo: 2.05233632436212e-17,
};
/// -Ai'(0) as a double-double.
const AIP0: DD = DD {
    hi: 0.2588194037928068,
    lo: -2.522243111610832e-17,
};

/// The first ten zeros of Ai, `a_1 > a_2 > ... > a_10`.
pub const AIRY_ZEROS: [f64; 10] = [
    -2.338107410459767,
    -4.08794944413097,
    -5.520559828095551,
    -6.786708090071759,
    -7.944133587120853,
    -9.02265085334098,
    -10.040174341558085,
    -11.008524303733262,
    -11.936015563236262,
    -12.828776752865757,
];

fn check_finite(x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("Airy argument must be finite, got {x}")))
    }
}

/// Ai(x).
pub fn airy_ai(x: f64) -> Result<f64> {
    check_finite(x)?;
    Ok(airy_pair(x).0)
}

/// Ai'(x).
pub fn airy_ai_prime(x: f64) -> Result<f64> {
    check_finite(x)?;
    Ok(airy_pair(x).1)
}

/// `(Ai(x), Ai'(x))` for finite `x`.
pub fn airy_pair(x: f64) -> (f64, f64) {
    if x.abs() <= SERIES_LIMIT {
        maclaurin(x)
    } else if x > 0.0 {
        asymptotic_pos(x)
    } else {
        let z = -x;
        asymptotic_neg(z, 2.0 / 3.0 * z * z.sqrt())
    }
}

/// `(Ai(-z), Ai'(-z))` for `z >= 0` when the phase `ξ = (2/3) z^{3/2}` is
/// already known to higher relative accuracy than `z` itself.
pub(crate) fn airy_pair_neg_with_phase(z: f64, xi: f64) -> (f64, f64) {
    if z <= SERIES_LIMIT {
        maclaurin(-z)
    } else {
        asymptotic_neg(z, xi)
    }
}

fn maclaurin(x: f64) -> (f64, f64) {
    let xd = DD::from_f64(x);
    let x3 = xd * xd * xd;

    // f(x) = sum t_k, g(x) = sum s_k and their derivatives.
    let mut t = DD::ONE;
    let mut f = DD::ONE;
    let mut s = xd;
    let mut g = xd;
    let mut dt = DD::from_f64(0.5) * xd * xd;
    let mut df = dt;
    let mut ds = DD::ONE;
    let mut dg = DD::ONE;

    for k in 1..200 {
        let kf = k as f64;
        t = t * x3 / DD::from_f64((3.0 * kf - 1.0) * (3.0 * kf));
        s = s * x3 / DD::from_f64((3.0 * kf) * (3.0 * kf + 1.0));
        ds = ds * x3 / DD::from_f64((3.0 * kf - 2.0) * (3.0 * kf));
        if k >= 2 {
            dt = dt * x3 / DD::from_f64((3.0 * kf - 3.0) * (3.0 * kf - 1.0));
            df = df + dt;
        }
        f = f + t;
        g = g + s;
        dg = dg + ds;
        let small = |term: DD, sum: DD| term.hi.abs() <= 1e-33 * sum.hi.abs().max(1e-300);
        if k > 2 && small(t, f) && small(s, g) && small(dt, df) && small(ds, dg) {
            break;
        }
    }
    if x == 0.0 {
        df = DD::ZERO;
    }

    let ai = AI0 * f - AIP0 * g;
    let aip = AI0 * df - AIP0 * dg;
    (ai.to_f64(), aip.to_f64())
}

/// Coefficients `u_k`, `v_k` of the large-argument expansions.
fn uv_coeffs() -> &'static [(f64, f64)] {
    use std::sync::OnceLock;
    static TABLE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = Vec::with_capacity(48);
        let mut u = 1.0f64;
        out.push((1.0, 1.0));
        for k in 1..48 {
            let kf = k as f64;
            u *= (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
                / ((2.0 * kf - 1.0) * 216.0 * kf);
            let v = -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u;
            out.push((u, v));
        }
        out
    })
}

fn asymptotic_pos(x: f64) -> (f64, f64) {
    let xi = 2.0 / 3.0 * x * x.sqrt();
    let table = uv_coeffs();
    let mut su = 0.0;
    let mut sv = 0.0;
    let mut p = 1.0;
    let mut last = f64::INFINITY;
    for (k, &(u, v)) in table.iter().enumerate() {
        let tu = u * p;
        if tu.abs() > last {
            break;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        su += sign * tu;
        sv += sign * v * p;
        last = tu.abs();
        if last < 1e-18 {
            break;
        }
        p /= xi;
    }
    let q = x.sqrt().sqrt();
    // Fold the exponential into one call so the result stays normal as long
    // as Ai itself does.
    let log_pref = -xi - (2.0 * std::f64::consts::PI.sqrt()).ln();
    let ai = (log_pref - q.ln()).exp() * su;
    let aip = -(log_pref + q.ln()).exp() * sv;
    (ai, aip)
}

fn asymptotic_neg(z: f64, xi: f64) -> (f64, f64) {
    let table = uv_coeffs();
    // Even and odd parts of the alternating series.
    let (mut ue, mut uo, mut ve, mut vo) = (0.0, 0.0, 0.0, 0.0);
    let mut p = 1.0;
    let mut last = f64::INFINITY;
    for (k, &(u, v)) in table.iter().enumerate() {
        let tu = u * p;
        if tu.abs() > last {
            break;
        }
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            ue += sign * tu;
            ve += sign * v * p;
        } else {
            uo += sign * tu;
            vo += sign * v * p;
        }
        last = tu.abs();
        if last < 1e-18 {
            break;
        }
        p /= xi;
    }
    let (s, c) = xi.sin_cos();
    // sin(ξ - π/4), cos(ξ - π/4)
    let sm = (s - c) * std::f64::consts::FRAC_1_SQRT_2;
    let cm = (c + s) * std::f64::consts::FRAC_1_SQRT_2;
    let q = z.sqrt().sqrt();
    let rpi = 1.0 / std::f64::consts::PI.sqrt();
    let ai = rpi / q * (cm * ue + sm * uo);
    let aip = rpi * q * (sm * ve - cm * vo);
    (ai, aip)
}

/// The `m`-th zero of Ai (`m >= 1`), negative and decreasing in `m`.
///
/// Tabulated for `m <= 10`, otherwise from the large-`m` expansion in
/// `s_m = 3π(4m - 1)/8`.
pub fn airy_zero(m: usize) -> Result<f64> {
    if m == 0 {
        return Err(Error::Domain("Airy zero index starts at 1".into()));
    }
    if m <= AIRY_ZEROS.len() {
        Ok(AIRY_ZEROS[m - 1])
    } else {
        Ok(airy_zero_asymptotic(m))
    }
}

/// Large-`m` expansion of the `m`-th Airy zero, valid for any `m >= 1` but
/// accurate to double precision only from `m = 11`.
pub fn airy_zero_asymptotic(m: usize) -> f64 {
    let s = 3.0 * std::f64::consts::PI * (4.0 * m as f64 - 1.0) / 8.0;
    let r = 1.0 / (s * s);
    let series = 1.0
        + r * (5.0 / 48.0
            + r * (-5.0 / 36.0
                + r * (77125.0 / 82944.0
                    + r * (-108056875.0 / 6967296.0 + r * (162375596875.0 / 334430208.0)))));
    -s.powf(2.0 / 3.0) * series
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_at_origin() {
        let (ai, aip) = airy_pair(0.0);
        assert!((ai - 0.3550280538878172).abs() < 1e-16);
        assert!((aip + 0.2588194037928068).abs() < 1e-16);
    }

    #[test]
    fn non_finite_is_domain_error() {
        assert!(matches!(airy_ai(f64::NAN), Err(Error::Domain(_))));
        assert!(matches!(airy_ai_prime(f64::INFINITY), Err(Error::Domain(_))));
    }

    #[test]
    fn series_and_asymptotic_agree_at_switch() {
        for &x in &[-9.0f64, 9.0] {
            let (a, ap) = maclaurin(x);
            let (b, bp) = if x > 0.0 {
                asymptotic_pos(x)
            } else {
                asymptotic_neg(-x, 2.0 / 3.0 * (-x).powf(1.5))
            };
            let scale = if x > 0.0 { a.abs() } else { 1.0 };
            assert!((a - b).abs() <= 1e-14 * scale, "x={x} {a} {b}");
            assert!((ap - bp).abs() <= 1e-14 * scale.max(ap.abs().min(1.0)), "x={x} {ap} {bp}");
        }
    }

    #[test]
    fn zero_index_rejected() {
        assert!(airy_zero(0).is_err());
    }

    #[test]
    fn seam_between_table_and_formula() {
        let d = (airy_zero(10).unwrap() - airy_zero_asymptotic(10)).abs();
        assert!(d <= 1e-9, "seam gap {d}");
    }
}

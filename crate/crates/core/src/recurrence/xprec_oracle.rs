//! Double-double (about 32 digit) Hermite recurrence used as a reference for
//! the double-precision paths.

use crate::error::{Error, Result};
use crate::rule::{QuadratureRule, WeightTag};
use crate::xprec::DD;

const LN2: DD = DD {
    hi: std::f64::consts::LN_2,
    lo: 2.3190468138462996e-17,
};

/// Recurrence multipliers `sqrt(2/(k+1))` and `sqrt(k/(k+1))`.
struct Table {
    c1: Vec<DD>,
    c2: Vec<DD>,
}

impl Table {
    fn new(n: usize) -> Self {
        let mut c1 = Vec::with_capacity(n);
        let mut c2 = Vec::with_capacity(n);
        for k in 0..n {
            let kp1 = DD::from_f64((k + 1) as f64);
            c1.push((DD::from_f64(2.0) / kp1).sqrt());
            c2.push((DD::from_f64(k as f64) / kp1).sqrt());
        }
        Table { c1, c2 }
    }

    /// Mantissas of `p_n`, `p_{n-1}` and the binary exponent `E` such that
    /// `p_k(x) = mantissa * 2^E * pi^{-1/4}`.
    fn eval(&self, n: usize, x: DD) -> (DD, DD, i32) {
        let mut pm1 = DD::ZERO;
        let mut p = DD::ONE;
        let mut e = 0i32;
        for k in 0..n {
            let pn = self.c1[k] * x * p - self.c2[k] * pm1;
            pm1 = p;
            p = pn;
            if p.hi.abs() > 1e19 {
                p = p.ldexp(-64);
                pm1 = pm1.ldexp(-64);
                e += 64;
            }
        }
        (p, pm1, e)
    }
}

/// `psi_n(x)` and `psi_n'(x)` for the orthonormal Hermite functions,
/// evaluated in double-double and rounded once.
pub fn hermite_function_xprec(n: usize, x: f64) -> (f64, f64) {
    let t = Table::new(n);
    let xd = DD::from_f64(x);
    let (p, pm1, e) = t.eval(n, xd);
    let dp = if n == 0 {
        -(xd * p)
    } else {
        DD::from_f64(2.0 * n as f64).sqrt() * pm1 - xd * p
    };
    let log_f = LN2.mul_f64(e as f64) - DD::PI.ln().mul_f64(0.25) - (xd * xd).mul_f64(0.5);
    let f = log_f.hi.exp() * (1.0 + log_f.lo);
    (p.to_f64() * f, dp.to_f64() * f)
}

/// Gauss-Hermite rule by Newton on the double-double recurrence, seeded from
/// the double-precision rule. Weights are not renormalized.
pub fn hermite_rule_xprec(n: usize) -> Result<QuadratureRule> {
    let seed = crate::hermite_asy::hermite_rule(n, false)?;
    if n == 1 {
        return Ok(seed);
    }
    let t = Table::new(n);
    let sq2n = DD::from_f64(2.0 * n as f64).sqrt();
    let log_const = DD::PI.ln().mul_f64(0.5) - DD::from_f64(n as f64).ln();
    let half = n / 2;
    let mut nodes = Vec::with_capacity(half);
    let mut weights = Vec::with_capacity(half);
    for (k, &x0) in seed.nodes[n - half..].iter().enumerate() {
        let mut x = DD::from_f64(x0);
        let mut converged = false;
        let mut last = f64::INFINITY;
        for _ in 0..12 {
            let (p, pm1, _) = t.eval(n, x);
            let dx = p / (sq2n * pm1);
            x = x - dx;
            last = dx.hi.abs();
            if last <= 1e-30 * x.hi.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Convergence { index: k, residual: last });
        }
        let (_, pm1, e) = t.eval(n, x);
        let lw = log_const - pm1.abs().ln().mul_f64(2.0) - LN2.mul_f64(2.0 * e as f64);
        nodes.push(x.to_f64());
        weights.push(lw.hi.exp() * (1.0 + lw.lo));
    }
    let center = (n % 2 == 1).then(|| {
        let (_, pm1, e) = t.eval(n, DD::ZERO);
        let lw = log_const - pm1.abs().ln().mul_f64(2.0) - LN2.mul_f64(2.0 * e as f64);
        lw.hi.exp() * (1.0 + lw.lo)
    });
    Ok(QuadratureRule::from_half(center, &nodes, &weights, WeightTag::Hermite, 0, n))
}

//! Equilibrium measure of the field `Q(x) = V(x n^{1/(2m)}) / n` on a single
//! interval `[a, b]`, its distribution function and inverse, the initial
//! guesses for generalized Gauss nodes, and the subsampling threshold.
//!
//! With `M(x) = (2x - a - b)/(b - a)` and `h = (b - a)/2` the density is
//! `sqrt((b - x)(x - a)) sum_j beta_j U_j(M(x))`. If
//! `Q'(x) = sum_k c_k T_k(M(x))` then `c_0 = 0` fixes the position of the
//! interval, `h c_1 = 4` its width (unit mass), and `beta_j = c_{j+1}/(2 pi h)`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::potential::{horner, taylor_shift, FreudPotential};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquilibriumMeasure {
    pub a: f64,
    pub b: f64,
    /// Chebyshev-U coefficients `beta_0 .. beta_{2m-2}` of the density.
    pub beta: Vec<f64>,
    /// The `n` the field was scaled for.
    pub n_param: usize,
    /// Chebyshev-T coefficients `d_k = (beta_k - beta_{k-2})/2` used by the
    /// distribution function.
    #[serde(skip)]
    d: Vec<f64>,
    /// Residuals of the two endpoint conditions at the returned `(a, b)`.
    #[serde(skip)]
    pub residuals: [f64; 2],
}

/// Chebyshev-T coefficients of a polynomial given by monomial coefficients.
pub(crate) fn monomial_to_chebyshev(p: &[f64]) -> Vec<f64> {
    let mut r: Vec<f64> = Vec::with_capacity(p.len());
    for &c in p.iter().rev() {
        // r <- t * r + c
        let len = r.len();
        let mut next = vec![0.0; len + 1];
        for (k, &v) in r.iter().enumerate() {
            if k == 0 {
                next[1] += v;
            } else {
                next[k + 1] += 0.5 * v;
                next[k - 1] += 0.5 * v;
            }
        }
        if next.is_empty() {
            next.push(0.0);
        }
        next[0] += c;
        r = next;
    }
    r
}

/// `Q'(center + h t)` expanded in `T_k(t)`.
fn field_chebyshev(dq: &[f64], center: f64, h: f64) -> Vec<f64> {
    let mut shifted = taylor_shift(dq, center);
    let mut p = 1.0;
    for c in shifted.iter_mut() {
        *c *= p;
        p *= h;
    }
    monomial_to_chebyshev(&shifted)
}

fn residuals(dq: &[f64], center: f64, h: f64) -> [f64; 2] {
    let c = field_chebyshev(dq, center, h);
    let c1 = c.get(1).copied().unwrap_or(0.0);
    [c[0], h * c1 / 4.0 - 1.0]
}

/// Finds the support `[a, b]` and the density coefficients.
pub fn solve_support(v: &FreudPotential, n: usize) -> Result<EquilibriumMeasure> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let q = v.scaled_coeffs(n);
    let dq: Vec<f64> = q.iter().enumerate().skip(1).map(|(j, &c)| j as f64 * c).collect();
    let m = v.m() as f64;
    let mut center = 0.0;
    let mut h = 2f64.sqrt() * m.powf(-1.0 / (2.0 * m));
    let even = v.is_even();

    let norm = |r: [f64; 2]| r[0].abs().max(r[1].abs());
    let mut r = residuals(&dq, center, h);
    // Start to the right of the outermost root of the mass condition.
    while r[1] < 0.0 && h < 1e6 {
        h *= 1.5;
        r = residuals(&dq, center, h);
    }
    let mut converged = false;
    for _ in 0..200 {
        if norm(r) <= 1e-15 {
            converged = true;
            break;
        }
        let eps = 1e-7 * h;
        let (dc, dh) = if even {
            let rp = residuals(&dq, 0.0, h + eps);
            let rm = residuals(&dq, 0.0, h - eps);
            let j = (rp[1] - rm[1]) / (2.0 * eps);
            (0.0, -r[1] / j)
        } else {
            let epc = 1e-7 * h.max(center.abs());
            let rcp = residuals(&dq, center + epc, h);
            let rcm = residuals(&dq, center - epc, h);
            let rhp = residuals(&dq, center, h + eps);
            let rhm = residuals(&dq, center, h - eps);
            let j00 = (rcp[0] - rcm[0]) / (2.0 * epc);
            let j10 = (rcp[1] - rcm[1]) / (2.0 * epc);
            let j01 = (rhp[0] - rhm[0]) / (2.0 * eps);
            let j11 = (rhp[1] - rhm[1]) / (2.0 * eps);
            let det = j00 * j11 - j01 * j10;
            if det == 0.0 || !det.is_finite() {
                break;
            }
            (
                -(j11 * r[0] - j01 * r[1]) / det,
                -(-j10 * r[0] + j00 * r[1]) / det,
            )
        };
        // Damped step keeping h positive and reducing the residual.
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..40 {
            let hc = h + lambda * dh;
            let cc = center + lambda * dc;
            if hc > 0.0 {
                let rc = residuals(&dq, cc, hc);
                if norm(rc) < norm(r) || lambda < 1e-6 {
                    h = hc;
                    center = cc;
                    r = rc;
                    accepted = true;
                    break;
                }
            }
            lambda *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if !converged && !(norm(r) <= 1e-13) {
        return Err(Error::SupportSolve {
            a: center - h,
            b: center + h,
        });
    }

    let c = field_chebyshev(&dq, center, h);
    let deg = c.len() - 1;
    let beta: Vec<f64> = (0..deg).map(|j| c[j + 1] / (2.0 * PI * h)).collect();
    let mut beta = beta;
    if even {
        for (j, b) in beta.iter_mut().enumerate() {
            if j % 2 == 1 {
                *b = 0.0;
            }
        }
    }
    let mu = EquilibriumMeasure::from_parts(center - h, center + h, beta, n, r);
    let mut min_density = f64::INFINITY;
    for i in 1..1000 {
        let x = mu.a + (mu.b - mu.a) * i as f64 / 1000.0;
        min_density = min_density.min(mu.density(x));
    }
    if min_density < -1e-13 {
        return Err(Error::UnsupportedRegime { min_density });
    }
    Ok(mu)
}

impl EquilibriumMeasure {
    fn from_parts(a: f64, b: f64, beta: Vec<f64>, n_param: usize, residuals: [f64; 2]) -> Self {
        let len = beta.len() + 2;
        let get = |k: isize| -> f64 {
            if k < 0 || k as usize >= beta.len() {
                0.0
            } else {
                beta[k as usize]
            }
        };
        let d = (0..len as isize).map(|k| 0.5 * (get(k) - get(k - 2))).collect();
        EquilibriumMeasure {
            a,
            b,
            beta,
            n_param,
            d,
            residuals,
        }
    }

    fn half_width(&self) -> f64 {
        0.5 * (self.b - self.a)
    }

    /// `M(x) = (2x - a - b)/(b - a)`.
    pub fn map(&self, x: f64) -> f64 {
        (2.0 * x - self.a - self.b) / (self.b - self.a)
    }

    pub fn density(&self, x: f64) -> f64 {
        if !(x > self.a && x < self.b) {
            return 0.0;
        }
        let t = self.map(x);
        // Clenshaw for sum beta_j U_j(t).
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.beta.iter().rev() {
            let b0 = c + 2.0 * t * b1 - b2;
            b2 = b1;
            b1 = b0;
        }
        ((self.b - x) * (x - self.a)).sqrt() * b1
    }

    /// Density rebuilt from the T-basis coefficients used by the
    /// distribution function.
    pub fn density_from_t(&self, x: f64) -> f64 {
        if !(x > self.a && x < self.b) {
            return 0.0;
        }
        let t = self.map(x);
        let theta = t.clamp(-1.0, 1.0).acos();
        let s = theta.sin();
        if s == 0.0 {
            return 0.0;
        }
        // d/dtheta of the bracket in cdf, divided by dx/dtheta = -h sin(theta).
        let h = self.half_width();
        let mut acc = self.d[0];
        for (k, &dk) in self.d.iter().enumerate().skip(1) {
            acc += dk * (k as f64 * theta).cos();
        }
        h * acc / s
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x <= self.a {
            return 0.0;
        }
        if x >= self.b {
            return 1.0;
        }
        let theta = self.map(x).clamp(-1.0, 1.0).acos();
        let h = self.half_width();
        let mut acc = self.d[0] * (PI - theta);
        for (k, &dk) in self.d.iter().enumerate().skip(1) {
            let kf = k as f64;
            acc -= dk * (kf * theta).sin() / kf;
        }
        (h * h * acc).clamp(0.0, 1.0)
    }

    pub fn inverse_cdf(&self, y: f64) -> Result<f64> {
        if !(y > 0.0 && y < 1.0) {
            return Err(Error::Domain(format!("inverse_cdf argument {y} outside (0, 1)")));
        }
        Ok(self.inverse_cdf_unchecked(y))
    }

    fn inverse_cdf_unchecked(&self, y: f64) -> f64 {
        let (mut lo, mut hi) = (self.a, self.b);
        let mut x = self.a + y * (self.b - self.a);
        let scale = self.b.abs().max(self.a.abs());
        for _ in 0..200 {
            let f = self.cdf(x) - y;
            if f.abs() <= 1e-16 {
                break;
            }
            if f < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            if hi - lo <= 4.0 * f64::EPSILON * scale {
                break;
            }
            let d = self.density(x);
            let mut next = if d > 0.0 { x - f / d } else { f64::NAN };
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            x = next;
        }
        x
    }

    /// Distribution-function argument for the `k`-th of `n` guesses.
    fn guess_argument(&self, k: usize, n: usize) -> f64 {
        let nf = n as f64;
        let g = self.inverse_cdf_unchecked((2.0 * k as f64 - 1.0) / (2.0 * nf));
        let t = self.map(g).clamp(-1.0, 1.0);
        (2.0 * k as f64 - 1.0) / (2.0 * nf) + GUESS_SIGN * t.asin() / (2.0 * PI * nf)
    }

    /// Guess for the `k`-th (1-based, ascending) of `n` nodes.
    pub fn guess(&self, k: usize, n: usize) -> f64 {
        self.inverse_cdf_unchecked(self.guess_argument(k, n))
    }

    /// Starting points for Newton on the generalized Gauss nodes at the
    /// `x~` scale, ascending.
    pub fn initial_guesses(&self, n: usize) -> Vec<f64> {
        use rayon::prelude::*;
        (1..n + 1)
            .into_par_iter()
            .with_min_len(64)
            .map(|k| self.guess(k, n))
            .collect()
    }
}

/// Sign of the arcsine correction in the initial guesses.
const GUESS_SIGN: f64 = -1.0;

pub fn density(mu: &EquilibriumMeasure, x: f64) -> f64 {
    mu.density(x)
}

pub fn cdf(mu: &EquilibriumMeasure, x: f64) -> f64 {
    mu.cdf(x)
}

pub fn inverse_cdf(mu: &EquilibriumMeasure, y: f64) -> Result<f64> {
    mu.inverse_cdf(y)
}

pub fn initial_guesses_general(mu: &EquilibriumMeasure, n: usize) -> Vec<f64> {
    mu.initial_guesses(n)
}

/// Constant in the weight bound `w_k <= (D/n) e^{-n Q(x~_k)}`.
const WEIGHT_BOUND_D: f64 = PI * 2.0 * std::f64::consts::SQRT_2;

/// Number of leading and trailing indices whose weights fall below `eps`,
/// and the radius `R_n` at the `x~` scale past which that happens.
///
/// For `V = x^{2m}` this uses the closed form
/// `R_n = n^{-1/(2m)} (ln(1/eps) - ln n + ln(pi 2^{3/2}))^{1/(2m)}`; other
/// fields solve `(D/n) e^{-n Q(R)} = eps` on each side by bisection and
/// return the smaller count.
pub fn subsample_threshold(v: &FreudPotential, n: usize, eps: f64) -> Result<(usize, f64)> {
    let (lo, hi, mu) = subsample_bounds(v, n, eps)?;
    let r = if v.is_monomial() { hi } else { (-lo).min(hi) };
    let tau_l = (n as f64 * mu.cdf(lo)).floor() as usize;
    let tau_r = (n as f64 * (1.0 - mu.cdf(hi))).floor() as usize;
    Ok((tau_l.min(tau_r).min(n / 2), r))
}

/// `(left radius, right radius, measure)` at the `x~` scale.
pub(crate) fn subsample_bounds(
    v: &FreudPotential,
    n: usize,
    eps: f64,
) -> Result<(f64, f64, EquilibriumMeasure)> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("eps must lie in (0, 1), got {eps}")));
    }
    let mu = solve_support(v, n)?;
    let nf = n as f64;
    let target = (1.0 / eps).ln() - nf.ln() + WEIGHT_BOUND_D.ln();
    if v.is_monomial() {
        let m2 = v.degree() as f64;
        let r = nf.powf(-1.0 / m2) * target.max(0.0).powf(1.0 / m2);
        return Ok((-r, r, mu));
    }
    let q = v.scaled_coeffs(n);
    let g = |x: f64| nf * horner(&q, x) - target;
    let side = |dir: f64| -> f64 {
        if g(0.0) >= 0.0 {
            return 0.0;
        }
        let mut hi = 1.0;
        while g(dir * hi) < 0.0 {
            hi *= 2.0;
        }
        let mut lo = 0.0;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(dir * mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        dir * hi
    };
    Ok((side(-1.0), side(1.0), mu))
}

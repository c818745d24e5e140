//! Three-term recurrences: scaled Hermite evaluation, Newton on the
//! recurrence (REC), Golub-Welsch (GW), and the discretized Stieltjes
//! procedure for Freud weights.

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hermite_asy::{self, HermiteContext};
use crate::potential::FreudPotential;
use crate::rule::{QuadratureRule, WeightTag};

#[cfg(feature = "xprec-oracle")]
pub mod xprec_oracle;

const RESCALE: f64 = 1e2;
const CHUNK: usize = 4096;
const STIELTJES_RESCALE: f64 = 1e100;

/// Jacobi data of a weight in the monic convention
/// `pi_{k+1}(x) = (x - a_k) pi_k(x) - b_k pi_{k-1}(x)`.
///
/// `b[0]` holds the zeroth moment, as in Gautschi's convention; `b[k]` for
/// `k >= 1` are the monic recurrence products.
#[derive(Debug, Clone, PartialEq)]
pub struct RecurrenceCoeffs {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub mu0: f64,
    pub tag: WeightTag,
}

impl RecurrenceCoeffs {
    /// Monic Hermite: `a_k = 0`, `b_k = k/2`, `mu0 = sqrt(pi)`.
    pub fn hermite(n: usize) -> Self {
        let mu0 = PI.sqrt();
        let mut b: Vec<f64> = (0..n).map(|k| k as f64 / 2.0).collect();
        if n > 0 {
            b[0] = mu0;
        }
        RecurrenceCoeffs {
            a: vec![0.0; n],
            b,
            mu0,
            tag: WeightTag::Hermite,
        }
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// Coefficients of the same weight after the change of variables
    /// `x = s y`, i.e. for `w(s y)` up to the factor `1/s` in the moment.
    pub fn scaled(&self, s: f64) -> Self {
        let mut b: Vec<f64> = self.b.iter().map(|&v| v / (s * s)).collect();
        if !b.is_empty() {
            b[0] = self.mu0 / s;
        }
        RecurrenceCoeffs {
            a: self.a.iter().map(|&v| v / s).collect(),
            b,
            mu0: self.mu0 / s,
            tag: self.tag.clone(),
        }
    }
}

/// Orthonormal polynomial values in scaled form: the true values are the
/// stored mantissas times `exp(log_scale)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Scaled {
    pub p: f64,
    pub dp: f64,
    pub pm1: f64,
    pub log_scale: f64,
}

/// Orthonormal recurrence prepared for repeated evaluation.
#[derive(Debug, Clone)]
pub(crate) struct OrthoTable {
    a: Vec<f64>,
    /// `sqrt(b_k)` for `k >= 1`; index 0 unused.
    sb: Vec<f64>,
    log_p0: f64,
}

impl OrthoTable {
    pub fn new(c: &RecurrenceCoeffs) -> Self {
        let mut sb: Vec<f64> = c.b.iter().map(|v| v.sqrt()).collect();
        if !sb.is_empty() {
            sb[0] = 0.0;
        }
        OrthoTable {
            a: c.a.clone(),
            sb,
            log_p0: -0.5 * c.mu0.ln(),
        }
    }

    /// Largest degree this table can evaluate.
    pub fn max_degree(&self) -> usize {
        self.a.len().saturating_sub(1)
    }

    /// `sqrt(b_n)`.
    pub fn sqrt_b(&self, n: usize) -> f64 {
        self.sb[n]
    }

    /// `p_n`, `p_n'` and `p_{n-1}` of the orthonormal family at `x`.
    pub fn eval(&self, n: usize, x: f64) -> Scaled {
        let mut pm1 = 0.0;
        let mut p = 1.0;
        let mut dpm1 = 0.0;
        let mut dp = 0.0;
        let mut ls = self.log_p0;
        for k in 0..n {
            let inv = 1.0 / self.sb[k + 1];
            let xa = x - self.a[k];
            let sbk = self.sb[k];
            let pn = (xa * p - sbk * pm1) * inv;
            let dpn = (xa * dp + p - sbk * dpm1) * inv;
            pm1 = p;
            p = pn;
            dpm1 = dp;
            dp = dpn;
            let mag = p.abs().max(dp.abs());
            if mag > RESCALE {
                let r = 1.0 / mag;
                p *= r;
                pm1 *= r;
                dp *= r;
                dpm1 *= r;
                ls += mag.ln();
            }
        }
        Scaled {
            p,
            dp,
            pm1,
            log_scale: ls,
        }
    }
}

/// Scaled orthonormal Hermite polynomials: mantissas of `p_n` and
/// `p_{n-1}` (orthonormal for `e^{-x^2}`), without the Gaussian factor.
pub(crate) fn hermite_poly_scaled(n: usize, x: f64) -> Scaled {
    let mut pm1 = 0.0;
    let mut p = 1.0;
    let mut ls = -0.25 * PI.ln();
    for k in 0..n {
        let kf = k as f64;
        let pn = (2.0 / (kf + 1.0)).sqrt() * x * p - (kf / (kf + 1.0)).sqrt() * pm1;
        pm1 = p;
        p = pn;
        if p.abs() > RESCALE {
            let r = 1.0 / p.abs();
            ls += p.abs().ln();
            p *= r;
            pm1 *= r;
        }
    }
    let dp = if n == 0 {
        0.0
    } else {
        (2.0 * n as f64).sqrt() * pm1
    };
    Scaled {
        p,
        dp,
        pm1,
        log_scale: ls,
    }
}

/// Orthonormal Hermite function `psi_n(x) = h_n(x) e^{-x^2/2}` and its
/// derivative, evaluated by the recurrence with per-step renormalization.
pub fn hermite_eval_scaled(n: usize, x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("x must be finite, got {x}")));
    }
    let s = hermite_poly_scaled(n, x);
    let ls = s.log_scale - 0.5 * x * x;
    let f = ls.exp();
    if !f.is_finite() {
        return Err(Error::Scaling(format!("psi_{n}({x}) overflows")));
    }
    let psi = s.p * f;
    let dpsi = (s.dp - x * s.p) * f;
    Ok((psi, dpsi))
}

/// Newton on the Hermite recurrence, `O(n^2)` overall.
///
/// Seeds come from Golub-Welsch for `n < 30` and from the Tricomi and
/// Gatteschi estimates otherwise.
pub fn hermite_rule_rec(n: usize) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    if n == 1 {
        return Ok(QuadratureRule {
            nodes: vec![0.0],
            weights: vec![PI.sqrt()],
            weight_tag: WeightTag::Hermite,
            trivial_skipped: 0,
            first_index: 0,
            n: 1,
        });
    }
    let half = n / 2;
    let seeds: Vec<f64> = if n < 30 {
        let gw = golub_welsch(&RecurrenceCoeffs::hermite(n), n)?;
        gw.nodes[n - half..].to_vec()
    } else {
        let ctx = HermiteContext::new(n)?;
        hermite_asy::initial_guesses_x(&ctx)?
    };

    let mut pos = Vec::with_capacity(half);
    let mut log_w = Vec::with_capacity(half);
    let ln_n = (n as f64).ln();
    for (k, &x0) in seeds.iter().enumerate() {
        let x = rec_newton(n, x0).map_err(|r| Error::Convergence { index: k, residual: r })?;
        let s = hermite_poly_scaled(n, x);
        pos.push(x);
        log_w.push(-ln_n - 2.0 * s.pm1.abs().ln() - 2.0 * s.log_scale);
    }
    let center = (n % 2 == 1).then(|| {
        let s = hermite_poly_scaled(n, 0.0);
        -ln_n - 2.0 * s.pm1.abs().ln() - 2.0 * s.log_scale
    });
    let w: Vec<f64> = log_w.iter().map(|l| l.exp()).collect();
    let w0 = center.map(f64::exp);
    let (w, w0) = normalize_half(&w, w0, PI.sqrt());
    Ok(QuadratureRule::from_half(w0, &pos, &w, WeightTag::Hermite, 0, n))
}

fn rec_newton(n: usize, mut x: f64) -> std::result::Result<f64, f64> {
    let mut last = f64::INFINITY;
    for _ in 0..40 {
        let s = hermite_poly_scaled(n, x);
        let dx = s.p / s.dp;
        x -= dx;
        let scale = x.abs().max(1.0);
        let stalled = dx.abs() >= last && dx.abs() <= 1e-13 * scale;
        last = dx.abs();
        if last <= 2.0 * f64::EPSILON * scale || stalled {
            return Ok(x);
        }
    }
    if last <= 1e-13 * x.abs().max(1.0) {
        Ok(x)
    } else {
        Err(last)
    }
}

/// Scales a half rule so that the full rule sums to `total`.
///
/// The sum runs from the center outward so that a prefix of the half rule
/// produces the same constant as the whole.
pub(crate) fn normalize_half(half: &[f64], center: Option<f64>, total: f64) -> (Vec<f64>, Option<f64>) {
    let mut s = 0.0;
    for &w in half {
        s += w;
    }
    s *= 2.0;
    if let Some(c) = center {
        s += c;
    }
    let c = total / s;
    (half.iter().map(|w| w * c).collect(), center.map(|w| w * c))
}

/// Golub-Welsch: eigenvalues of the `n x n` Jacobi matrix and the squared
/// first components of its eigenvectors.
///
/// Implicit QL with Wilkinson-type shifts that accumulates only the first row
/// of the eigenvector matrix, so the cost is `O(n^2)`.
pub fn golub_welsch(coeffs: &RecurrenceCoeffs, n: usize) -> Result<QuadratureRule> {
    if n == 0 || coeffs.len() < n {
        return Err(Error::Domain(format!(
            "need at least {n} recurrence coefficients, have {}",
            coeffs.len()
        )));
    }
    if coeffs.b[1..n].iter().any(|&b| !(b > 0.0)) {
        return Err(Error::Domain("recurrence products must be positive".into()));
    }
    let mut d = coeffs.a[..n].to_vec();
    let mut e: Vec<f64> = (0..n)
        .map(|i| if i + 1 < n { coeffs.b[i + 1].sqrt() } else { 0.0 })
        .collect();
    let mut z = vec![0.0; n];
    z[0] = 1.0;
    tql_first_row(&mut d, &mut e, &mut z)?;

    let mut pairs: Vec<(f64, f64)> = d
        .into_iter()
        .zip(z)
        .map(|(x, v)| (x, coeffs.mu0 * v * v))
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    let (nodes, weights) = pairs.into_iter().unzip();
    Ok(QuadratureRule {
        nodes,
        weights,
        weight_tag: coeffs.tag.clone(),
        trivial_skipped: 0,
            first_index: 0,
        n,
    })
}

fn tql_first_row(d: &mut [f64], e: &mut [f64], z: &mut [f64]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Eigen);
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut i = m;
            let mut early = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// Monic recurrence coefficients of `e^{-V(x)}` for degrees `0..n`, by the
/// discretized Stieltjes procedure.
///
/// The inner products use the trapezoidal rule on `[-L, L]`, with `L` far
/// enough out that `e^{-V}` swamps every polynomial of degree below `2n`.
/// The grid starts at `max(4n, 400)` points and is doubled until two
/// successive grids agree to `1e-12`.
pub fn stieltjes_coeffs(v: &FreudPotential, n: usize) -> Result<RecurrenceCoeffs> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let l = stieltjes_extent(v, n);
    let mut size = (4 * n).max(400);
    let mut prev = stieltjes_discrete(v, n, size, l)?;
    let mut drift = f64::INFINITY;
    for _ in 0..5 {
        size *= 2;
        let next = stieltjes_discrete(v, n, size, l)?;
        drift = coeff_drift(&prev, &next);
        prev = next;
        if drift <= 1e-12 {
            return Ok(prev);
        }
    }
    Err(Error::Resolution { drift, points: size })
}

/// Half-width of the interval carrying the inner products up to degree `n`.
fn stieltjes_extent(v: &FreudPotential, n: usize) -> f64 {
    let need = |l: f64| v.eval(l).min(v.eval(-l)) - (2.0 * n as f64) * (2.0 * l + 2.0).ln() - 100.0;
    let mut hi = 1.0;
    while need(hi) < 0.0 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if need(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi * 1.25
}

pub(crate) fn stieltjes_discrete(
    v: &FreudPotential,
    n: usize,
    size: usize,
    l: f64,
) -> Result<RecurrenceCoeffs> {
    let half = size / 2;
    let h = l / half as f64;
    let xs: Vec<f64> = (-(half as isize)..=(half as isize)).map(|j| j as f64 * h).collect();
    let mu0: f64 = xs.iter().map(|&x| h * (-v.eval(x)).exp()).sum();
    // Each point carries q_k(x) sqrt(h e^{-V(x)}) as mantissa times e^{e_j};
    // f_j = e^{2 e_j}.
    let mut e: Vec<f64> = xs
        .iter()
        .map(|&x| 0.5 * (h / mu0).ln() - 0.5 * v.eval(x))
        .collect();
    let mut f: Vec<f64> = e.iter().map(|&e| (2.0 * e).exp()).collect();
    let even = v.is_even();
    let mut a = vec![0.0; n];
    let mut b = vec![0.0; n];
    b[0] = mu0;
    let mut q_prev = vec![0.0; xs.len()];
    let mut q = vec![1.0; xs.len()];
    let mut r = vec![0.0; xs.len()];
    for k in 0..n {
        let ak = if even {
            0.0
        } else {
            xs.par_iter()
                .zip(&f)
                .zip(&q)
                .with_min_len(CHUNK)
                .map(|((x, f), q)| f * x * q * q)
                .sum()
        };
        a[k] = ak;
        if k + 1 == n {
            break;
        }
        let sbk = if k == 0 { 0.0 } else { b[k].sqrt() };
        let norm: f64 = r
            .par_iter_mut()
            .zip(&xs)
            .zip(&f)
            .zip(&q)
            .zip(&q_prev)
            .with_min_len(CHUNK)
            .map(|((((ri, x), f), q), qp)| {
                *ri = (x - ak) * q - sbk * qp;
                f * *ri * *ri
            })
            .sum();
        b[k + 1] = norm;
        let inv = 1.0 / norm.sqrt();
        std::mem::swap(&mut q_prev, &mut q);
        q.par_iter_mut()
            .zip(&mut q_prev)
            .zip(&r)
            .zip(&mut e)
            .zip(&mut f)
            .with_min_len(CHUNK)
            .for_each(|((((qi, qp), ri), ej), fj)| {
                *qi = ri * inv;
                if qi.abs() > STIELTJES_RESCALE {
                    *qi /= STIELTJES_RESCALE;
                    *qp /= STIELTJES_RESCALE;
                    *ej += STIELTJES_RESCALE.ln();
                    *fj = (2.0 * *ej).exp();
                }
            });
    }
    Ok(RecurrenceCoeffs {
        a,
        b,
        mu0,
        tag: WeightTag::Freud {
            coeffs: v.coeffs().to_vec(),
        },
    })
}

fn coeff_drift(p: &RecurrenceCoeffs, q: &RecurrenceCoeffs) -> f64 {
    let mut d: f64 = 0.0;
    for k in 0..p.len() {
        d = d.max((p.b[k] - q.b[k]).abs() / q.b[k]);
        let scale = q.b[k.max(1).min(q.len() - 1)].sqrt().max(1e-300);
        if q.len() > 1 {
            d = d.max((p.a[k] - q.a[k]).abs() / scale);
        }
    }
    d
}

/// `r(x) = p_n(x) e^{-V(x)/2}` and `r'(x)` for the orthonormal family of
/// `coeffs`, which must cover degree `n`.
pub fn freud_eval_scaled(
    coeffs: &RecurrenceCoeffs,
    v: &FreudPotential,
    n: usize,
    x: f64,
) -> Result<(f64, f64)> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("x must be finite, got {x}")));
    }
    if coeffs.len() < n + 1 {
        return Err(Error::Domain(format!(
            "coefficients cover degree {} but degree {n} was requested",
            coeffs.len().saturating_sub(1)
        )));
    }
    let s = OrthoTable::new(coeffs).eval(n, x);
    let f = (s.log_scale - 0.5 * v.eval(x)).exp();
    if !f.is_finite() {
        return Err(Error::Scaling(format!("p_{n}({x}) e^{{-V/2}} overflows")));
    }
    Ok((s.p * f, (s.dp - 0.5 * v.deriv(x) * s.p) * f))
}

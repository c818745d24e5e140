//! Gauss-Hermite rules in `O(n)` operations: Tricomi and Gatteschi initial
//! guesses, Newton in the angle `theta` (`x = mu cos(theta)`), and a
//! four-term uniform Airy-type expansion of the parabolic cylinder function
//! `U(-mu^2/2, mu t sqrt(2))` and its derivative.
//!
//! The expansion is evaluated under a scaling that keeps `|U~| <= 1`; the
//! normalizing factor `g(mu)` cancels in the Newton step and the weight
//! constant is fixed by `sum w = sqrt(pi)`, so it is never computed.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::recurrence;
use crate::rule::{QuadratureRule, WeightTag};
use crate::specfun::{airy_pair_neg_with_phase, airy_zero};

/// Smallest `n` handled by the asymptotic path.
pub const ASY_THRESHOLD: usize = 200;

/// Fraction of `n` below which Tricomi's estimate is used.
pub const RHO: f64 = 0.4985;

/// Newton stops once the update in `theta` is this small.
pub const NEWTON_TOL: f64 = 1e-14;

/// Cap on Newton sweeps.
pub const NEWTON_MAX_ITER: usize = 10;

/// Per-`n` constants shared by every node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermiteContext {
    pub n: usize,
    /// `sqrt(2n + 1)`
    pub mu: f64,
    /// `mod(n, 2) - 1/2`
    pub alpha: f64,
    /// `4 floor(n/2) + 2 alpha + 2`, equal to `2n + 1`
    pub nu: f64,
}

impl HermiteContext {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("n must be at least 1".into()));
        }
        let alpha = (n % 2) as f64 - 0.5;
        let nu = 4.0 * (n / 2) as f64 + 2.0 * alpha + 2.0;
        Ok(HermiteContext {
            n,
            mu: (2.0 * n as f64 + 1.0).sqrt(),
            alpha,
            nu,
        })
    }

    /// Number of strictly positive nodes.
    pub fn half(&self) -> usize {
        self.n / 2
    }

    /// Positive-node index (from the center) up to which Tricomi is used.
    pub fn split(&self) -> usize {
        (RHO * self.n as f64).floor() as usize
    }
}

/// `U~` and `dU~/dz` (with `z = x sqrt(2)`) at one angle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledUEval {
    pub value: f64,
    pub derivative: f64,
}

/// Root of `tau - sin(tau) = rhs` for `rhs` in `(0, pi]`, by Newton from
/// `pi/2`.
pub fn tricomi_tau_rhs(rhs: f64) -> Result<f64> {
    if !(rhs > 0.0 && rhs <= PI) {
        return Err(Error::IndexOutOfRange(format!(
            "right-hand side {rhs} outside (0, pi]"
        )));
    }
    let mut tau = FRAC_PI_2;
    for _ in 0..100 {
        let f = tau - tau.sin() - rhs;
        let step = f / (1.0 - tau.cos());
        tau -= step;
        if step.abs() <= 1e-16 * tau.max(1.0) {
            break;
        }
    }
    Ok(tau)
}

/// `tau_k` for the `k`-th positive node counted from the center
/// (`1 <= k <= floor(n/2)`).
pub fn tricomi_tau(n: usize, k: usize) -> Result<f64> {
    let ctx = HermiteContext::new(n)?;
    let m = (n / 2) as f64;
    let rhs = (4.0 * m - 4.0 * k as f64 + 3.0) * PI / ctx.nu;
    tricomi_tau_rhs(rhs)
}

/// Tricomi's estimate of the `k`-th positive node counted from the center.
pub fn tricomi_guess(ctx: &HermiteContext, k: usize) -> Result<f64> {
    if k == 0 || k > ctx.half() {
        return Err(Error::IndexOutOfRange(format!(
            "Tricomi index {k} outside 1..={}",
            ctx.half()
        )));
    }
    let tau = tricomi_tau(ctx.n, k)?;
    let c = (0.5 * tau).cos();
    let sigma = c * c;
    let om = 1.0 - sigma;
    let corr = (5.0 / (4.0 * om * om) - 1.0 / om - 0.25) / (3.0 * ctx.nu);
    let r = ctx.nu * sigma - corr;
    if !(r > 0.0) {
        return Err(Error::Degenerate(format!("Tricomi radicand {r} at k = {k}")));
    }
    Ok(r.sqrt())
}

/// Gatteschi's estimate of the `k`-th largest node (`k = 1` is the largest).
pub fn gatteschi_guess(ctx: &HermiteContext, k: usize) -> Result<f64> {
    if k == 0 || k > ctx.half() {
        return Err(Error::IndexOutOfRange(format!(
            "Gatteschi index {k} outside 1..={}",
            ctx.half()
        )));
    }
    let a = airy_zero(k)?;
    let nu = ctx.nu;
    let c13 = 2f64.powf(1.0 / 3.0);
    let c23 = c13 * c13;
    let c43 = c23 * c23;
    let nu13 = nu.cbrt();
    let a2 = a * a;
    let a3 = a2 * a;
    let r = nu + c23 * a * nu13 + 0.2 * c43 * a2 / nu13
        + (9.0 / 140.0 - 12.0 / 175.0 * a3) / nu
        + (16.0 / 1575.0 * a + 92.0 / 7875.0 * a3 * a) * c23 / (nu * nu13 * nu13)
        - (15152.0 / 3031875.0 * a3 * a2 + 1088.0 / 121275.0 * a2) * c13 / (nu * nu * nu13);
    if !(r > 0.0) {
        return Err(Error::Degenerate(format!("Gatteschi radicand {r} at k = {k}")));
    }
    Ok(r.sqrt())
}

/// Initial node estimates for the positive nodes, center outward
/// (ascending `x`).
pub(crate) fn initial_guesses_x(ctx: &HermiteContext) -> Result<Vec<f64>> {
    initial_guesses_x_range(ctx, ctx.half())
}

fn initial_guesses_x_range(ctx: &HermiteContext, count: usize) -> Result<Vec<f64>> {
    let m = ctx.half();
    let split = ctx.split();
    (1..=count)
        .map(|j| {
            if j <= split {
                tricomi_guess(ctx, j)
            } else {
                gatteschi_guess(ctx, m + 1 - j)
            }
        })
        .collect()
}

/// Initial guesses in `theta = arccos(x / mu)` for the positive nodes,
/// center outward, so `theta` decreases from about `pi/2` toward 0.
pub fn initial_guesses_theta(ctx: &HermiteContext) -> Result<Vec<f64>> {
    if ctx.n < ASY_THRESHOLD {
        return Err(Error::Regime {
            n: ctx.n,
            min: ASY_THRESHOLD,
        });
    }
    Ok(initial_guesses_x(ctx)?
        .into_iter()
        .map(|x| (x / ctx.mu).acos())
        .collect())
}

const ALPHA1: f64 = 15.0 / 144.0;
const ALPHA2: f64 = 5.0 * 7.0 * 9.0 * 11.0 / 2.0 / (144.0 * 144.0);
const ALPHA3: f64 = 7.0 * 9.0 * 11.0 * 13.0 * 15.0 * 17.0 / 6.0 / (144.0 * 144.0 * 144.0);
const BETA1: f64 = -7.0 / 5.0 * ALPHA1;
const BETA2: f64 = -13.0 / 11.0 * ALPHA2;
const BETA3: f64 = -19.0 / 17.0 * ALPHA3;

/// Below this angle the expansion coefficients come from polynomial fits in
/// `theta^2`; the closed forms divide by powers of `zeta` up to the fifth.
const COEFF_SERIES_LIMIT: f64 = 0.6;

// Fits of A_1, B_0, B_1, C_0, C_1, D_1 on theta in [0, 0.6], coefficient of
// theta^{2j} at index j, accurate to about 1e-25.
const SERIES_A1: [f64; 14] = [
    -0.0086458333333333333333,
    -0.0055592532467532467533,
    -0.0020933816183816183789,
    -0.00060062258288448783969,
    -0.00014496138108182210171,
    -0.000030954736939065517036,
    -6.0278186798292693199e-6,
    -1.0920176346606636464e-6,
    -1.8665699589658282675e-7,
    -3.0416188743289279865e-8,
    -4.7595588159160391142e-9,
    -7.2605279954999486047e-10,
    -9.8095796420611497217e-11,
    -2.1741875336830926913e-11,
];
const SERIES_B0: [f64; 14] = [
    -0.040497462318049494582,
    -0.0097993859436267912815,
    -0.0018700992646725180534,
    -0.00031923851489847315367,
    -0.000050007744388594950132,
    -7.3154737316130299046e-6,
    -1.0144517865370694453e-6,
    -1.3495768312647679726e-7,
    -1.7381662237037570159e-8,
    -2.1819620723262095735e-9,
    -2.6823898018474145884e-10,
    -3.2560883606687615863e-11,
    -3.6780680950868280285e-12,
    -6.130623757063385893e-13,
];
const SERIES_B1: [f64; 14] = [
    0.014635700675355903267,
    0.0067649511347199596791,
    0.0026490652521769211669,
    0.0008932834827681526884,
    0.00026323053092535245171,
    0.000069340758716869989419,
    0.000016652873644950155296,
    3.7029751198867207907e-6,
    7.7161907439656798271e-7,
    1.5212370509723704511e-7,
    2.8557352192782060959e-8,
    5.2176478162101720565e-9,
    8.0067255815539177149e-10,
    2.2895910997303951526e-10,
];
const SERIES_C0: [f64; 14] = [
    -0.079370052598409973738,
    -0.0039685026299204986869,
    -0.0040314947351573319992,
    -0.00069100430593132301487,
    -0.00011500432783458261747,
    -0.000017249056833971292098,
    -2.4253396688055259156e-6,
    -3.2540396803622976803e-7,
    -4.2151522502787854346e-8,
    -5.3134781817466403785e-9,
    -6.5525999332583054642e-10,
    -7.9733289647669157454e-11,
    -9.0219868594169895885e-12,
    -1.5067391165142215567e-12,
];
const SERIES_C1: [f64; 14] = [
    0.0095109846984774852052,
    0.00047554923492387426061,
    0.0023981223787489327995,
    0.0010323786757839640946,
    0.00035583725055587015675,
    0.00010328112170394509034,
    0.000026478843646472676386,
    6.166292186321756774e-6,
    1.329096242615018131e-6,
    2.6876829719983735845e-7,
    5.1443839862484022552e-8,
    9.5474531385404040806e-9,
    1.4788083752010021877e-9,
    4.2936773903641890782e-10,
];
const SERIES_D1: [f64; 14] = [
    0.010124007936507936508,
    0.0064977453102453102453,
    0.0024439656903942618196,
    0.00070087214813405312309,
    0.00016916549392538947446,
    0.000036138592198350028722,
    7.0418881703161305186e-6,
    1.2767190856906121651e-6,
    2.1840599956604892755e-7,
    3.5618482317257694621e-8,
    5.5778854656940012515e-9,
    8.5150362068783879148e-10,
    1.1510689278525217206e-10,
    2.5534552982857525061e-11,
];

/// `(2/3)(-zeta)^{3/2} = theta/2 - sin(2 theta)/4`.
fn eta(theta: f64) -> f64 {
    if theta < 1e-2 {
        // sum_{k>=1} (-1)^{k+1} 2^{2k-1} theta^{2k+1} / (2k+1)!
        let t2 = theta * theta;
        let mut term = theta * t2 / 3.0;
        let mut sum = term;
        for k in 2..8 {
            let kf = k as f64;
            term *= -4.0 * t2 / ((2.0 * kf) * (2.0 * kf + 1.0));
            sum += term;
        }
        sum
    } else {
        0.5 * theta - 0.25 * (2.0 * theta).sin()
    }
}

/// Four-term expansion of `U~` and `U~'` at `theta` in `(0, pi/2]`.
#[allow(non_snake_case)]
pub fn eval_scaled_U(ctx: &HermiteContext, theta: f64) -> Result<ScaledUEval> {
    if !(theta > 0.0 && theta <= FRAC_PI_2) {
        return Err(Error::Domain(format!("theta = {theta} outside (0, pi/2]")));
    }
    Ok(eval_unchecked(ctx, theta))
}

fn eval_unchecked(ctx: &HermiteContext, theta: f64) -> ScaledUEval {
    let mu = ctx.mu;
    let (st, t) = theta.sin_cos();
    let eta = eta(theta);
    let mz = (1.5 * eta).powf(2.0 / 3.0);
    let zeta = -mz;
    let ratio = mz / (st * st);
    let phi = ratio.sqrt().sqrt();
    let phi6 = ratio * ratio.sqrt();
    let phi12 = phi6 * phi6;
    let phi18 = phi12 * phi6;

    let mu13 = mu.cbrt();
    let mu43 = mu * mu13;
    let mu2 = mu * mu;
    let mu4 = mu2 * mu2;
    let (ai, aip) = airy_pair_neg_with_phase(mu43 * mz, mu2 * eta);

    let t2 = t * t;
    let t3 = t2 * t;
    let t4 = t2 * t2;
    let t5 = t4 * t;
    let t7 = t5 * t2;
    let t9 = t7 * t2;
    let u1 = (t3 - 6.0 * t) / 24.0;
    let u2 = (-9.0 * t4 + 249.0 * t2 + 145.0) / 1152.0;
    let u3 = (-4042.0 * t9 + 18189.0 * t7 - 28287.0 * t5 - 151995.0 * t3 - 259290.0 * t) / 414720.0;
    let v1 = (t3 + 6.0 * t) / 24.0;
    let v2 = (15.0 * t4 - 327.0 * t2 - 143.0) / 1152.0;
    let v3 = (259290.0 * t + 238425.0 * t3 - 36387.0 * t5 + 18189.0 * t7 - 4042.0 * t9) / 414720.0;

    let (a1, b0, b1, c0, c1, d1) = if theta < COEFF_SERIES_LIMIT {
        let s = theta * theta;
        (
            horner(&SERIES_A1, s),
            horner(&SERIES_B0, s),
            horner(&SERIES_B1, s),
            horner(&SERIES_C0, s),
            horner(&SERIES_C1, s),
            horner(&SERIES_D1, s),
        )
    } else {
        let z2 = zeta * zeta;
        let z3 = z2 * zeta;
        let z4 = z2 * z2;
        let z5 = z4 * zeta;
        (
            (phi12 * u2 + BETA1 * phi6 * u1 + BETA2) / z3,
            -(phi6 * u1 + ALPHA1) / z2,
            -(phi18 * u3 + ALPHA1 * phi12 * u2 + ALPHA2 * phi6 * u1 + ALPHA3) / z5,
            -(phi6 * v1 + BETA1) / zeta,
            -(phi18 * v3 + BETA1 * phi12 * v2 + BETA2 * phi6 * v1 + BETA3) / z4,
            (phi12 * v2 + ALPHA1 * phi6 * v1 + ALPHA2) / z3,
        )
    };

    let n14 = (ctx.n as f64).sqrt().sqrt();
    let s14 = 2f64.sqrt().sqrt();
    let mu83 = mu43 * mu43;
    let value = s14 * 2.0 * mu13 / n14
        * phi
        * (ai * (1.0 + a1 / mu4) + aip * (b0 + b1 / mu4) / mu83);
    let derivative = s14 * 2f64.sqrt() * mu13 * mu13 / n14 / phi
        * (ai * (c0 + c1 / mu4) / mu43 + aip * (1.0 + d1 / mu4));
    ScaledUEval { value, derivative }
}

fn horner(c: &[f64], s: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &v| acc * s + v)
}

#[inline]
fn newton_step(ctx: &HermiteContext, theta: f64, e: &ScaledUEval) -> f64 {
    e.value / (std::f64::consts::SQRT_2 * ctx.mu * e.derivative * theta.sin())
}

/// Newton in `theta` from `theta0`; returns the root and the number of
/// steps whose update exceeded the tolerance.
pub fn newton_theta(ctx: &HermiteContext, theta0: f64) -> Result<(f64, usize)> {
    if !(theta0 > 0.0 && theta0 <= FRAC_PI_2) {
        return Err(Error::Domain(format!("theta = {theta0} outside (0, pi/2]")));
    }
    let mut theta = theta0;
    let mut iters = 0;
    let mut last = f64::INFINITY;
    for _ in 0..=NEWTON_MAX_ITER {
        let e = eval_unchecked(ctx, theta);
        let d = newton_step(ctx, theta, &e);
        theta += d;
        last = d.abs();
        if last <= NEWTON_TOL {
            return Ok((theta, iters));
        }
        iters += 1;
        if !(theta > 0.0 && theta <= FRAC_PI_2 + 1e-12) {
            break;
        }
    }
    Err(Error::Convergence {
        index: 0,
        residual: last,
    })
}

/// Converged angles and the derivatives used for the weights.
struct Solved {
    theta: Vec<f64>,
    du_dz: Vec<f64>,
    iterations: usize,
}

/// Vectorized Newton: every node takes the same sweeps, but a node stops
/// moving once its own update is below tolerance, so its result does not
/// depend on which other nodes are being solved.
#[allow(non_snake_case)]
fn newton_sweeps(ctx: &HermiteContext, theta0: Vec<f64>) -> Result<Solved> {
    let len = theta0.len();
    let mut theta = theta0;
    let mut du_dz = vec![0.0; len];
    let mut active = vec![true; len];
    let mut last = vec![f64::INFINITY; len];
    let mut iterations = 0;
    for _ in 0..=NEWTON_MAX_ITER {
        let moved: usize = theta
            .par_iter_mut()
            .zip(du_dz.par_iter_mut())
            .zip(active.par_iter_mut())
            .zip(last.par_iter_mut())
            .with_min_len(512)
            .map(|(((th, du), act), lst)| {
                if !*act {
                    return 0;
                }
                let e = eval_unchecked(ctx, *th);
                let d = newton_step(ctx, *th, &e);
                *th += d;
                *du = e.derivative;
                *lst = d.abs();
                if d.abs() <= NEWTON_TOL {
                    *act = false;
                    0
                } else {
                    1
                }
            })
            .sum();
        if moved == 0 {
            return Ok(Solved {
                theta,
                du_dz,
                iterations,
            });
        }
        iterations += 1;
    }
    let k = active.iter().position(|&a| a).unwrap_or(0);
    Err(Error::Convergence {
        index: k,
        residual: last[k],
    })
}

/// Positive nodes (center outward), unnormalized scaled weights
/// `1 / U~'^2`, and the same for the center node of odd `n`.
#[allow(non_snake_case)]
fn solve_half(ctx: &HermiteContext, count: usize) -> Result<(Vec<f64>, Vec<f64>, Option<f64>, usize)> {
    let guesses: Vec<f64> = initial_guesses_x_range(ctx, count)?
        .into_iter()
        .map(|x| (x / ctx.mu).acos())
        .collect();
    let solved = newton_sweeps(ctx, guesses)?;
    let nodes: Vec<f64> = solved.theta.iter().map(|&th| ctx.mu * th.cos()).collect();
    let scaled: Vec<f64> = solved.du_dz.iter().map(|d| 1.0 / (d * d)).collect();
    let center = (ctx.n % 2 == 1).then(|| {
        let d = eval_unchecked(ctx, FRAC_PI_2).derivative;
        1.0 / (d * d)
    });
    Ok((nodes, scaled, center, solved.iterations))
}

/// Normalization constant `C` for `w = C e^{-x^2} / U~'^2`, summed from the
/// center outward.
fn weight_constant(nodes: &[f64], scaled: &[f64], center: Option<f64>) -> f64 {
    let mut s = 0.0;
    for (x, w) in nodes.iter().zip(scaled) {
        s += w * (-x * x).exp();
    }
    s *= 2.0;
    if let Some(c) = center {
        s += c;
    }
    PI.sqrt() / s
}

/// Number of positive indices computed when subsampling:
/// `min(ceil(12.5 sqrt(n)), ceil(n/2))`, capped at the number of positive
/// nodes.
pub fn subsample_extent(n: usize) -> usize {
    let m = (12.5 * (n as f64).sqrt()).ceil() as usize;
    m.min(n.div_ceil(2)).min(n / 2)
}

/// Gauss-Hermite rule by the asymptotic method, `n >= 200`.
///
/// With `subsample`, only the `subsample_extent(n)` nodes nearest the
/// center on each side are solved, and of those only the ones whose weight
/// is at least `f64::MIN_POSITIVE` are kept.
pub fn hermite_rule_asy(n: usize, subsample: bool) -> Result<QuadratureRule> {
    hermite_rule_asy_with_stats(n, subsample).map(|(r, _)| r)
}

/// As [`hermite_rule_asy`], also returning the number of Newton sweeps.
pub fn hermite_rule_asy_with_stats(n: usize, subsample: bool) -> Result<(QuadratureRule, usize)> {
    if n < ASY_THRESHOLD {
        return Err(Error::Regime {
            n,
            min: ASY_THRESHOLD,
        });
    }
    let ctx = HermiteContext::new(n)?;
    let count = if subsample { subsample_extent(n) } else { ctx.half() };
    let (nodes, scaled, center, iterations) = solve_half(&ctx, count)?;
    let c = weight_constant(&nodes, &scaled, center);
    let mut weights: Vec<f64> = nodes
        .iter()
        .zip(&scaled)
        .map(|(x, w)| c * w * (-x * x).exp())
        .collect();
    let mut nodes = nodes;
    let mut skipped = 0;
    if subsample {
        let keep = weights.iter().take_while(|&&w| w >= f64::MIN_POSITIVE).count();
        nodes.truncate(keep);
        weights.truncate(keep);
        skipped = ctx.half() - keep;
    }
    let w0 = center.map(|w| c * w);
    Ok((
        QuadratureRule::from_half(w0, &nodes, &weights, WeightTag::Hermite, skipped, n),
        iterations,
    ))
}

/// Gauss-Hermite rule of any size: Newton on the recurrence below
/// [`ASY_THRESHOLD`], the asymptotic method from there on.
pub fn hermite_rule(n: usize, subsample: bool) -> Result<QuadratureRule> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    if n >= ASY_THRESHOLD {
        return hermite_rule_asy(n, subsample);
    }
    let mut r = recurrence::hermite_rule_rec(n)?;
    if subsample {
        r.drop_negligible();
    }
    Ok(r)
}

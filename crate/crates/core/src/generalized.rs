//! Gauss rules for Freud weights `e^{-V(x)}`: Newton on the weighted
//! orthonormal polynomial at the varying-weight scale `x~ = x / n^{1/(2m)}`,
//! started from equilibrium-measure guesses.

use rayon::prelude::*;

use crate::equilibrium::{solve_support, subsample_bounds, EquilibriumMeasure};
use crate::error::{Error, Result};
use crate::potential::{horner, FreudPotential};
use crate::recurrence::{stieltjes_coeffs, OrthoTable, RecurrenceCoeffs};
use crate::rule::{QuadratureRule, WeightTag};

const NEWTON_TOL: f64 = 1e-14;
const NEWTON_MAX_ITER: usize = 20;

/// Nodes of the rule for `e^{-n Q(x~)}`, ascending, with `x = scale * x~`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScaledNodeSet {
    pub tilde_nodes: Vec<f64>,
    pub scale: f64,
}

impl ScaledNodeSet {
    pub fn nodes(&self) -> Vec<f64> {
        self.tilde_nodes.iter().map(|&x| x * self.scale).collect()
    }
}

/// Evaluates `r(x~) = p_n(x~) e^{-n Q(x~)/2}` for the orthonormal family of
/// `e^{-n Q}`.
pub trait WeightedPolyEvaluator: Sync {
    fn degree(&self) -> usize;

    /// `(r, r')` at `x`.
    fn eval(&self, x: f64) -> (f64, f64);

    /// `r / r'` at `x`, computed without forming the exponential factors.
    fn newton_correction(&self, x: f64) -> f64 {
        let (r, dr) = self.eval(x);
        r / dr
    }

    /// Gauss weight for `e^{-n Q(x~)} dx~` at a zero `x` of `p_n`.
    fn weight(&self, x: f64) -> f64;
}

/// [`WeightedPolyEvaluator`] backed by the three-term recurrence.
#[derive(Debug, Clone)]
pub struct RecurrenceEvaluator {
    table: OrthoTable,
    q: Vec<f64>,
    dq: Vec<f64>,
    n: usize,
}

impl RecurrenceEvaluator {
    /// Runs the Stieltjes procedure for degrees `0..=n` and rescales to `x~`.
    pub fn new(v: &FreudPotential, n: usize) -> Result<Self> {
        let coeffs = stieltjes_coeffs(v, n + 1)?;
        let s = scale(v, n);
        Self::from_coeffs(&coeffs.scaled(s), v, n)
    }

    /// `coeffs` must already be at the `x~` scale and cover degree `n`.
    pub fn from_coeffs(coeffs: &RecurrenceCoeffs, v: &FreudPotential, n: usize) -> Result<Self> {
        let table = OrthoTable::new(coeffs);
        if table.max_degree() < n {
            return Err(Error::Domain(format!(
                "coefficients cover degree {} but degree {n} was requested",
                table.max_degree()
            )));
        }
        let q = v.scaled_coeffs(n);
        let dq = q.iter().enumerate().skip(1).map(|(j, &c)| j as f64 * c).collect();
        Ok(RecurrenceEvaluator { table, q, dq, n })
    }

    fn half_field(&self, x: f64) -> (f64, f64) {
        let nf = self.n as f64;
        (0.5 * nf * horner(&self.q, x), 0.5 * nf * horner(&self.dq, x))
    }
}

impl WeightedPolyEvaluator for RecurrenceEvaluator {
    fn degree(&self) -> usize {
        self.n
    }

    fn eval(&self, x: f64) -> (f64, f64) {
        let s = self.table.eval(self.n, x);
        let (h, dh) = self.half_field(x);
        let f = (s.log_scale - h).exp();
        (s.p * f, (s.dp - dh * s.p) * f)
    }

    fn newton_correction(&self, x: f64) -> f64 {
        let s = self.table.eval(self.n, x);
        let (_, dh) = self.half_field(x);
        s.p / (s.dp - dh * s.p)
    }

    fn weight(&self, x: f64) -> f64 {
        let s = self.table.eval(self.n, x);
        let lw = -self.table.sqrt_b(self.n).ln() - s.dp.abs().ln() - s.pm1.abs().ln() - 2.0 * s.log_scale;
        lw.exp()
    }
}

/// `n^{1/(2m)}`.
pub fn scale(v: &FreudPotential, n: usize) -> f64 {
    (n as f64).powf(1.0 / v.degree() as f64)
}

/// Newton iteration `x <- x - r/r'` from `guess`; returns the root and the
/// number of updates.
pub fn newton_general<E: WeightedPolyEvaluator + ?Sized>(
    evaluator: &E,
    guess: f64,
    support: (f64, f64),
    index: usize,
) -> Result<(f64, usize)> {
    let mut x = guess;
    let mut last = f64::INFINITY;
    for it in 1..=NEWTON_MAX_ITER {
        let dx = evaluator.newton_correction(x);
        if !dx.is_finite() {
            return Err(Error::Convergence {
                index,
                residual: f64::NAN,
            });
        }
        x -= dx;
        last = dx.abs();
        if !(x > support.0 && x < support.1) {
            return Err(Error::Convergence { index, residual: last });
        }
        if last <= NEWTON_TOL * x.abs().max(1.0) {
            return Ok((x, it));
        }
    }
    if last <= 1e-10 * x.abs().max(1.0) {
        Ok((x, NEWTON_MAX_ITER))
    } else {
        Err(Error::Convergence { index, residual: last })
    }
}

/// Solves for nodes `lo..hi` (0-based, ascending) and their `x~`-scale
/// weights.
fn solve_range<E: WeightedPolyEvaluator>(
    evaluator: &E,
    mu: &EquilibriumMeasure,
    n: usize,
    lo: usize,
    hi: usize,
) -> Result<Vec<(f64, f64, usize)>> {
    (lo..hi)
        .into_par_iter()
        .with_min_len(16)
        .map(|k| {
            let g = mu.guess(k + 1, n);
            let (x, it) = newton_general(evaluator, g, (mu.a, mu.b), k)?;
            Ok((x, evaluator.weight(x), it))
        })
        .collect()
}

/// All `n` nodes at the `x~` scale.
pub fn freud_nodes_scaled(v: &FreudPotential, n: usize) -> Result<ScaledNodeSet> {
    let (solved, _, _) = freud_solve(v, n, None)?;
    Ok(ScaledNodeSet {
        tilde_nodes: solved.iter().map(|t| t.0).collect(),
        scale: scale(v, n),
    })
}

/// Newton iteration counts of a full solve, index by index.
pub fn freud_iterations(v: &FreudPotential, n: usize) -> Result<Vec<usize>> {
    let (solved, _, _) = freud_solve(v, n, None)?;
    Ok(solved.iter().map(|t| t.2).collect())
}

type Solved = (Vec<(f64, f64, usize)>, usize, usize);

/// Solved `(x~, w~, iterations)` triples, ascending, plus the number of
/// skipped nodes on the left and right.
fn freud_solve(v: &FreudPotential, n: usize, eps: Option<f64>) -> Result<Solved> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let mu = solve_support(v, n)?;
    let ev = RecurrenceEvaluator::new(v, n)?;
    let (mut lo, mut hi) = (0, n);
    if let Some(eps) = eps {
        let (l, r, _) = subsample_bounds(v, n, eps)?;
        let nf = n as f64;
        lo = ((nf * mu.cdf(l)).floor() as usize).min(n / 2);
        hi = n - ((nf * (1.0 - mu.cdf(r))).floor() as usize).min(n / 2);
    }
    let mut solved = solve_range(&ev, &mu, n, lo, hi)?;
    if let Some(eps) = eps {
        let s = scale(v, n);
        let big = |w: f64| s * w >= eps;
        // Extend past the predicted threshold while weights stay significant.
        while hi < n && solved.last().is_some_and(|t| big(t.1)) {
            let next = solve_range(&ev, &mu, n, hi, hi + 1)?;
            solved.extend(next);
            hi += 1;
        }
        while lo > 0 && solved.first().is_some_and(|t| big(t.1)) {
            let next = solve_range(&ev, &mu, n, lo - 1, lo)?;
            solved.insert(0, next[0]);
            lo -= 1;
        }
        let before = solved.len();
        let left = solved.iter().take_while(|t| !big(t.1)).count();
        solved.retain(|t| big(t.1));
        let right = before - left - solved.len();
        lo += left;
        hi -= right;
    }
    if v.is_even() {
        symmetrize(&mut solved, lo, hi, n);
    }
    for w in solved.windows(2) {
        if w[1].0 <= w[0].0 {
            return Err(Error::DegenerateNode(lo));
        }
    }
    Ok((solved, lo, n - hi))
}

/// Averages mirrored pairs for even fields.
fn symmetrize(solved: &mut [(f64, f64, usize)], lo: usize, hi: usize, n: usize) {
    for i in 0..solved.len() {
        let k = lo + i;
        let mirror = n - 1 - k;
        if mirror < lo || mirror >= hi {
            continue;
        }
        let j = mirror - lo;
        if j < i {
            continue;
        }
        if j == i {
            solved[i].0 = 0.0;
            continue;
        }
        let x = 0.5 * (solved[j].0 - solved[i].0);
        let w = 0.5 * (solved[j].1 + solved[i].1);
        solved[i].0 = -x;
        solved[j].0 = x;
        solved[i].1 = w;
        solved[j].1 = w;
    }
}

/// Gauss rule with `n` nodes for `e^{-V(x)}`.
///
/// With `subsample`, nodes whose weights fall below the smallest normal
/// double are neither computed nor stored.
pub fn freud_rule(v: &FreudPotential, n: usize, subsample: bool) -> Result<QuadratureRule> {
    let eps = subsample.then_some(f64::MIN_POSITIVE);
    let (solved, left, right) = freud_solve(v, n, eps)?;
    let s = scale(v, n);
    Ok(QuadratureRule {
        nodes: solved.iter().map(|t| s * t.0).collect(),
        weights: solved.iter().map(|t| s * t.1).collect(),
        weight_tag: WeightTag::Freud {
            coeffs: v.coeffs().to_vec(),
        },
        trivial_skipped: left.max(right),
        first_index: left,
        n,
    })
}

/// Gauss rule for `e^{-V(x)}` with `V` any monic polynomial of even degree.
/// The field is shifted to its minimizer and the rule mapped back.
pub fn freud_rule_general(coeffs: &[f64], n: usize, subsample: bool) -> Result<QuadratureRule> {
    let (v, shift) = FreudPotential::normalize(coeffs.to_vec())?;
    let mut rule = freud_rule(&v, n, subsample)?;
    let f = (-shift.value).exp();
    for x in rule.nodes.iter_mut() {
        *x += shift.x0;
    }
    for w in rule.weights.iter_mut() {
        *w *= f;
    }
    let mut tag = coeffs.to_vec();
    while tag.len() > 1 && tag.last() == Some(&0.0) {
        tag.pop();
    }
    rule.weight_tag = WeightTag::Freud { coeffs: tag };
    Ok(rule)
}

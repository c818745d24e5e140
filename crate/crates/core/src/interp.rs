//! Second-form barycentric interpolation at Gauss nodes of `e^{-V(x)}`,
//! weighted evaluation, and Lebesgue-type stability diagnostics.

use crate::error::{Error, Result};
use crate::potential::FreudPotential;
use crate::rule::QuadratureRule;

/// Distance below which an evaluation point is treated as a node.
const NODE_GUARD: f64 = 1e-300;

#[derive(Debug, Clone)]
pub struct BarycentricInterpolant {
    pub nodes: Vec<f64>,
    /// Barycentric weights `c / pi_n'(x_k)`, scaled so `max |lambda| = 1`.
    pub lambda: Vec<f64>,
    /// The normalization `c`, as `ln c`; `pi_n'` is monic.
    pub log_c: f64,
    pub potential: FreudPotential,
    pub samples: Vec<f64>,
    /// `ln |pi_n'(x_k)|`.
    log_deriv: Vec<f64>,
}

/// `lambda_k = c / d_k` from derivative values `d_k` of the node polynomial.
/// Without `c` the result is scaled so that `max |lambda| = 1`.
pub fn bary_weights(derivs: &[f64], c: Option<f64>) -> Result<Vec<f64>> {
    if let Some(k) = derivs.iter().position(|&d| d == 0.0 || !d.is_finite()) {
        return Err(Error::DegenerateNode(k));
    }
    let mut lambda: Vec<f64> = derivs.iter().map(|&d| 1.0 / d).collect();
    let c = match c {
        Some(c) => c,
        None => 1.0 / lambda.iter().fold(0.0f64, |m, l| m.max(l.abs())),
    };
    for l in lambda.iter_mut() {
        *l *= c;
    }
    Ok(lambda)
}

/// `ln |pi_n'(x_k)|` and its sign for the monic polynomial with the given
/// simple zeros.
fn log_derivs(nodes: &[f64]) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::with_capacity(nodes.len());
    for (k, &xk) in nodes.iter().enumerate() {
        let mut lg = 0.0;
        let mut sign = 1.0;
        for (j, &xj) in nodes.iter().enumerate() {
            if j == k {
                continue;
            }
            let d = xk - xj;
            if d == 0.0 {
                return Err(Error::DegenerateNode(k));
            }
            lg += d.abs().ln();
            if d < 0.0 {
                sign = -sign;
            }
        }
        out.push((lg, sign));
    }
    Ok(out)
}

/// Barycentric weights computed from the nodes alone, in logarithmic form,
/// with `max |lambda| = 1`. Returns the weights and `ln c`.
pub fn bary_weights_from_nodes(nodes: &[f64]) -> Result<(Vec<f64>, f64)> {
    Ok(weights_from_log(&log_derivs(nodes)?))
}

fn weights_from_log(ld: &[(f64, f64)]) -> (Vec<f64>, f64) {
    let min_log = ld.iter().fold(f64::INFINITY, |m, t| m.min(t.0));
    let lambda = ld.iter().map(|&(lg, s)| s * (min_log - lg).exp()).collect();
    (lambda, min_log)
}

impl BarycentricInterpolant {
    /// Interpolant of `samples` at `nodes` (ascending), weighted by
    /// `e^{-V/2}` in [`eval_weighted`](Self::eval_weighted).
    pub fn new(nodes: Vec<f64>, samples: Vec<f64>, potential: FreudPotential) -> Result<Self> {
        if nodes.len() != samples.len() {
            return Err(Error::Domain(format!(
                "{} nodes but {} samples",
                nodes.len(),
                samples.len()
            )));
        }
        if nodes.is_empty() {
            return Err(Error::Domain("at least one node is required".into()));
        }
        if nodes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("nodes must be strictly ascending".into()));
        }
        let ld = log_derivs(&nodes)?;
        let (lambda, log_c) = weights_from_log(&ld);
        Ok(BarycentricInterpolant {
            nodes,
            lambda,
            log_c,
            potential,
            samples,
            log_deriv: ld.into_iter().map(|t| t.0).collect(),
        })
    }

    /// Samples `f` at the nodes of `rule`.
    pub fn from_rule<F: Fn(f64) -> f64>(rule: &QuadratureRule, potential: FreudPotential, f: F) -> Result<Self> {
        let samples = rule.nodes.iter().map(|&x| f(x)).collect();
        Self::new(rule.nodes.clone(), samples, potential)
    }

    /// Replaces the barycentric weights, e.g. with ones derived from
    /// derivative values.
    pub fn with_lambda(mut self, lambda: Vec<f64>) -> Result<Self> {
        if lambda.len() != self.nodes.len() {
            return Err(Error::Domain("lambda length differs from node count".into()));
        }
        self.lambda = lambda;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn hit(&self, x: f64) -> Option<usize> {
        let i = self.nodes.partition_point(|&t| t < x);
        [i.wrapping_sub(1), i]
            .into_iter()
            .find(|&j| j < self.nodes.len() && (x - self.nodes[j]).abs() < NODE_GUARD)
    }

    /// `L_n[f](x)`.
    pub fn eval(&self, x: f64) -> f64 {
        if let Some(k) = self.hit(x) {
            return self.samples[k];
        }
        let (mut num, mut den) = (0.0, 0.0);
        for ((&xk, &lk), &fk) in self.nodes.iter().zip(&self.lambda).zip(&self.samples) {
            let t = lk / (x - xk);
            num += t * fk;
            den += t;
        }
        num / den
    }

    /// `L_n[f](x) e^{-V(x)/2}`.
    pub fn eval_weighted(&self, x: f64) -> f64 {
        let damp = (-0.5 * self.potential.eval(x)).exp();
        if damp == 0.0 {
            return 0.0;
        }
        self.eval(x) * damp
    }

    /// `ln |l_j(x)|` from the product form, which stays accurate where the
    /// ratio form cancels.
    fn log_cardinals(&self, x: f64) -> Option<Vec<f64>> {
        if self.hit(x).is_some() {
            return None;
        }
        let total: f64 = self.nodes.iter().map(|&xk| (x - xk).abs().ln()).sum();
        Some(
            self.nodes
                .iter()
                .zip(&self.log_deriv)
                .map(|(&xj, &lg)| total - (x - xj).abs().ln() - lg)
                .collect(),
        )
    }

    /// Cardinal functions `l_j(x)`.
    pub fn cardinals(&self, x: f64) -> Vec<f64> {
        let n = self.nodes.len();
        match self.log_cardinals(x) {
            None => {
                let mut out = vec![0.0; n];
                out[self.hit(x).unwrap_or(0)] = 1.0;
                out
            }
            Some(lc) => {
                // sign of prod_{k != j} (x - x_k)/(x_j - x_k)
                let above = self.nodes.partition_point(|&t| t < x);
                lc.iter()
                    .enumerate()
                    .map(|(j, &l)| {
                        let neg_num = n - above - usize::from(j >= above);
                        let neg_den = n - 1 - j;
                        let s = if (neg_num + neg_den) % 2 == 0 { 1.0 } else { -1.0 };
                        s * l.exp()
                    })
                    .collect()
            }
        }
    }

    /// `sum_j |l_j(x)|`.
    pub fn cond_unity(&self, x: f64) -> f64 {
        match self.log_cardinals(x) {
            None => 1.0,
            Some(lc) => lc.iter().map(|l| l.exp()).sum(),
        }
    }

    /// `e^{-V(x)/2} sum_j |l_j(x)| e^{V(x_j)/2}`.
    pub fn cond_unity_weighted(&self, x: f64) -> f64 {
        self.lebesgue_at(x)
    }

    fn lebesgue_at(&self, x: f64) -> f64 {
        match self.log_cardinals(x) {
            None => 1.0,
            Some(lc) => {
                let vx = self.potential.eval(x);
                lc.iter()
                    .zip(&self.nodes)
                    .map(|(l, &xj)| (l + 0.5 * (self.potential.eval(xj) - vx)).exp())
                    .sum()
            }
        }
    }

    /// Weighted Lebesgue function on `grid` and its maximum.
    pub fn lebesgue_weighted(&self, grid: &[f64]) -> (Vec<f64>, f64) {
        let vals: Vec<f64> = grid.iter().map(|&x| self.lebesgue_at(x)).collect();
        let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        (vals, max)
    }

    /// Nodes, gap midpoints and ten more points per gap, extended by a tenth
    /// of the node hull on each side.
    pub fn lebesgue_grid(&self) -> Vec<f64> {
        let n = self.nodes.len();
        let mut grid = Vec::with_capacity(12 * n + 24);
        let lo = self.nodes[0];
        let hi = self.nodes[n - 1];
        let ext = 0.1 * (hi - lo).max(1.0);
        for i in 0..12 {
            grid.push(lo - ext + ext * i as f64 / 12.0);
        }
        for w in self.nodes.windows(2) {
            for i in 0..12 {
                grid.push(w[0] + (w[1] - w[0]) * i as f64 / 12.0);
            }
        }
        for i in 0..=12 {
            grid.push(hi + ext * i as f64 / 12.0);
        }
        grid
    }
}

pub fn eval(interp: &BarycentricInterpolant, x: f64) -> f64 {
    interp.eval(x)
}

pub fn eval_weighted(interp: &BarycentricInterpolant, x: f64) -> f64 {
    interp.eval_weighted(x)
}

pub fn lebesgue_weighted(interp: &BarycentricInterpolant, grid: &[f64]) -> (Vec<f64>, f64) {
    interp.lebesgue_weighted(grid)
}

pub fn cond_unity(interp: &BarycentricInterpolant, x: f64) -> f64 {
    interp.cond_unity(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cheb(n: usize) -> Vec<f64> {
        (0..n)
            .map(|k| -((2 * k + 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos())
            .collect()
    }

    #[test]
    fn reproduces_cubic() {
        let x = cheb(6);
        let f: Vec<f64> = x.iter().map(|t| t * t * t - t).collect();
        let p = BarycentricInterpolant::new(x, f, FreudPotential::monomial(1).unwrap()).unwrap();
        for t in [-0.9, -0.3, 0.1, 0.77] {
            assert!((p.eval(t) - (t * t * t - t)).abs() < 1e-14);
        }
    }

    #[test]
    fn weights_alternate_and_peak_at_one() {
        let (l, _) = bary_weights_from_nodes(&cheb(9)).unwrap();
        assert!(l.windows(2).all(|w| w[0] * w[1] < 0.0));
        let m = l.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        assert_eq!(m, 1.0);
    }

    #[test]
    fn zero_derivative_rejected() {
        assert!(matches!(bary_weights(&[1.0, 0.0], None), Err(Error::DegenerateNode(1))));
        assert!(bary_weights_from_nodes(&[0.0, 0.0]).is_err());
    }
}

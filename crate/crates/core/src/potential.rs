//! Polynomial external fields `V` for Freud weights `e^{-V(x)}`.

use crate::error::{Error, Result};

/// A monic polynomial of even degree `2m` with `V(0) = V'(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct FreudPotential {
    coeffs: Vec<f64>,
    m: usize,
}

/// Change of variables that brings a general monic even-degree polynomial to
/// a [`FreudPotential`]: `V(x) = shift_value + V~(x - x0)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotentialShift {
    pub x0: f64,
    pub value: f64,
}

impl FreudPotential {
    /// Validates monomial coefficients, constant term first.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        let coeffs = trim(coeffs);
        let deg = coeffs.len().saturating_sub(1);
        if deg < 2 || deg % 2 != 0 {
            return Err(Error::InvalidPotential(format!(
                "degree must be even and at least 2, got {deg}"
            )));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidPotential("coefficients must be finite".into()));
        }
        if coeffs[deg] != 1.0 {
            return Err(Error::InvalidPotential(format!(
                "leading coefficient must be 1, got {}",
                coeffs[deg]
            )));
        }
        if coeffs[0] != 0.0 || coeffs[1] != 0.0 {
            return Err(Error::InvalidPotential(
                "V(0) and V'(0) must vanish; use FreudPotential::normalize".into(),
            ));
        }
        Ok(FreudPotential { m: deg / 2, coeffs })
    }

    /// `V(x) = x^{2m}`.
    pub fn monomial(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidPotential("m must be at least 1".into()));
        }
        let mut c = vec![0.0; 2 * m + 1];
        c[2 * m] = 1.0;
        Ok(FreudPotential { coeffs: c, m })
    }

    /// Shifts a general monic even-degree polynomial to its global minimizer
    /// and removes the constant, returning the normalized field and the shift.
    pub fn normalize(coeffs: Vec<f64>) -> Result<(Self, PotentialShift)> {
        let coeffs = trim(coeffs);
        let deg = coeffs.len().saturating_sub(1);
        if deg < 2 || deg % 2 != 0 || coeffs[deg] != 1.0 || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidPotential(
                "expected a monic polynomial of even degree >= 2 with finite coefficients".into(),
            ));
        }
        if coeffs[0] == 0.0 && coeffs[1] == 0.0 {
            let v = FreudPotential::new(coeffs)?;
            return Ok((v, PotentialShift { x0: 0.0, value: 0.0 }));
        }
        let x0 = global_minimizer(&coeffs);
        let value = horner(&coeffs, x0);
        let mut shifted = taylor_shift(&coeffs, x0);
        shifted[0] = 0.0;
        shifted[1] = 0.0;
        Ok((
            FreudPotential {
                m: deg / 2,
                coeffs: shifted,
            },
            PotentialShift { x0, value },
        ))
    }

    /// Parses `x^k` (k even) or a comma-separated coefficient list, constant
    /// term first.
    pub fn parse(spec: &str) -> Result<(Self, PotentialShift)> {
        let s = spec.trim();
        if let Some(rest) = s.strip_prefix("x^") {
            let k: usize = rest
                .trim()
                .parse()
                .map_err(|_| Error::InvalidPotential(format!("bad exponent in {s:?}")))?;
            if k == 0 || k % 2 != 0 {
                return Err(Error::InvalidPotential(format!("exponent must be even and positive, got {k}")));
            }
            return Ok((FreudPotential::monomial(k / 2)?, PotentialShift { x0: 0.0, value: 0.0 }));
        }
        let coeffs = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::InvalidPotential(format!("bad coefficient {t:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        FreudPotential::normalize(coeffs)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Half the degree.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> usize {
        2 * self.m
    }

    pub fn is_even(&self) -> bool {
        self.coeffs.iter().skip(1).step_by(2).all(|&c| c == 0.0)
    }

    pub fn is_monomial(&self) -> bool {
        self.coeffs[..self.degree()].iter().all(|&c| c == 0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        horner(&self.coeffs, x)
    }

    pub fn deriv(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for (j, &c) in self.coeffs.iter().enumerate().skip(1).rev() {
            acc = acc * x + j as f64 * c;
        }
        acc
    }

    /// Coefficients of `Q(x) = V(x s) / n` with `s = n^{1/(2m)}`.
    pub fn scaled_coeffs(&self, n: usize) -> Vec<f64> {
        let nf = n as f64;
        let s = nf.powf(1.0 / (2.0 * self.m as f64));
        let mut out = self.coeffs.clone();
        let mut p = 1.0;
        for c in out.iter_mut() {
            *c *= p / nf;
            p *= s;
        }
        // The leading term is exactly x^{2m}.
        let d = self.degree();
        out[d] = 1.0;
        out
    }
}

impl std::fmt::Display for FreudPotential {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_monomial() {
            return write!(f, "x^{}", self.degree());
        }
        let parts: Vec<String> = self.coeffs.iter().map(|c| format!("{c}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

fn trim(mut coeffs: Vec<f64>) -> Vec<f64> {
    while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
        coeffs.pop();
    }
    coeffs
}

pub(crate) fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

/// Coefficients of `p(x + h)`.
pub(crate) fn taylor_shift(coeffs: &[f64], h: f64) -> Vec<f64> {
    let mut c = coeffs.to_vec();
    let n = c.len();
    for i in 0..n {
        for j in (i..n - 1).rev() {
            c[j] += h * c[j + 1];
        }
    }
    c
}

fn global_minimizer(coeffs: &[f64]) -> f64 {
    let lead = coeffs[coeffs.len() - 1];
    let bound = 1.0
        + coeffs[..coeffs.len() - 1]
            .iter()
            .map(|c| (c / lead).abs())
            .fold(0.0, f64::max);
    let d1: Vec<f64> = coeffs.iter().enumerate().skip(1).map(|(j, &c)| j as f64 * c).collect();
    let d2: Vec<f64> = d1.iter().enumerate().skip(1).map(|(j, &c)| j as f64 * c).collect();
    let samples = 4000;
    let mut best = (f64::INFINITY, 0.0);
    for i in 0..=samples {
        let x = -bound + 2.0 * bound * i as f64 / samples as f64;
        let v = horner(coeffs, x);
        if v < best.0 {
            best = (v, x);
        }
    }
    let mut x = best.1;
    for _ in 0..60 {
        let g = horner(&d1, x);
        let h = horner(&d2, x);
        if h <= 0.0 {
            break;
        }
        let step = g / h;
        x -= step;
        if step.abs() <= 1e-16 * x.abs().max(1.0) {
            break;
        }
    }
    x
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_fields() {
        assert!(FreudPotential::new(vec![0.0, 0.0, 0.0, 1.0]).is_err());
        assert!(FreudPotential::new(vec![0.0, 0.0, 2.0]).is_err());
        assert!(FreudPotential::new(vec![1.0, 0.0, 1.0]).is_err());
        assert!(FreudPotential::monomial(0).is_err());
    }

    #[test]
    fn parse_monomial_and_list() {
        let (v, s) = FreudPotential::parse("x^4").unwrap();
        assert_eq!(v.coeffs(), &[0.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(s.x0, 0.0);
        let (v, _) = FreudPotential::parse("0, 0, -1, 0, 1").unwrap();
        assert_eq!(v.m(), 2);
        assert!(v.is_even());
        assert!(FreudPotential::parse("x^3").is_err());
        assert!(FreudPotential::parse("a,b").is_err());
    }

    #[test]
    fn normalize_shifts_to_minimum() {
        // (x - 1)^2 + 3 = x^2 - 2x + 4
        let (v, s) = FreudPotential::normalize(vec![4.0, -2.0, 1.0]).unwrap();
        assert!((s.x0 - 1.0).abs() < 1e-14);
        assert!((s.value - 3.0).abs() < 1e-14);
        assert_eq!(v.coeffs(), &[0.0, 0.0, 1.0]);
    }

    #[test]
    fn scaled_monomial_is_n_independent() {
        let v = FreudPotential::monomial(3).unwrap();
        assert_eq!(v.scaled_coeffs(1000), v.coeffs().to_vec());
    }

    #[test]
    fn derivative_matches_difference() {
        let v = FreudPotential::new(vec![0.0, 0.0, -1.5, 0.3, 1.0]).unwrap();
        let x = 0.7;
        let h = 1e-6;
        let fd = (v.eval(x + h) - v.eval(x - h)) / (2.0 * h);
        assert!((fd - v.deriv(x)).abs() < 1e-8);
    }
}

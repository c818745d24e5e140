//! Double-double arithmetic (about 32 significant decimal digits).
//!
//! A value is the unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`.
//! Only the handful of operations needed by the Airy series and the
//! recurrence oracle are provided.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DD {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DD {
    pub const ZERO: DD = DD { hi: 0.0, lo: 0.0 };
    pub const ONE: DD = DD { hi: 1.0, lo: 0.0 };
    pub const PI: DD = DD {
        hi: std::f64::consts::PI,
        lo: 1.2246467991473532e-16,
    };

    #[inline]
    pub const fn from_f64(x: f64) -> Self {
        DD { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn new(hi: f64, lo: f64) -> Self {
        let (h, l) = quick_two_sum(hi, lo);
        DD { hi: h, lo: l }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let e = e + self.lo * b;
        let (h, l) = quick_two_sum(p, e);
        DD { hi: h, lo: l }
    }

    #[inline]
    pub fn add_f64(self, b: f64) -> Self {
        let (s, e) = two_sum(self.hi, b);
        let e = e + self.lo;
        let (h, l) = quick_two_sum(s, e);
        DD { hi: h, lo: l }
    }

    /// Exact scaling by a power of two.
    #[inline]
    pub fn ldexp(self, exp: i32) -> Self {
        let f = 2f64.powi(exp);
        DD {
            hi: self.hi * f,
            lo: self.lo * f,
        }
    }

    pub fn sqrt(self) -> Self {
        if self.hi <= 0.0 {
            return DD::ZERO;
        }
        let s = self.hi.sqrt();
        // One Newton correction in double-double doubles the precision.
        let (p, e) = two_prod(s, s);
        let r = (self - DD { hi: p, lo: e }).hi;
        DD::new(s, r / (2.0 * s))
    }

    pub fn recip(self) -> Self {
        DD::ONE / self
    }

    /// Natural log, accurate to double-double precision for positive input.
    pub fn ln(self) -> Self {
        // Newton on exp(y) = x starting from the double log.
        let mut y = DD::from_f64(self.hi.ln());
        for _ in 0..2 {
            let ey = y.exp();
            y = y + (self - ey) / ey;
        }
        y
    }

    /// Exponential for moderate arguments (|x| < 700).
    pub fn exp(self) -> Self {
        const LN2: DD = DD {
            hi: std::f64::consts::LN_2,
            lo: 2.3190468138462996e-17,
        };
        let k = (self.hi / LN2.hi).round();
        let r = self - LN2.mul_f64(k);
        // r in [-ln2/2, ln2/2]; reduce further by 2^-8 and square back.
        let r = r.ldexp(-8);
        let mut term = DD::ONE;
        let mut sum = DD::ONE;
        for i in 1..=20 {
            term = (term * r) / DD::from_f64(i as f64);
            sum = sum + term;
            if term.hi.abs() < 1e-34 {
                break;
            }
        }
        let mut e = sum;
        for _ in 0..8 {
            e = e * e;
        }
        e.ldexp(k as i32)
    }
}

impl From<f64> for DD {
    fn from(x: f64) -> Self {
        DD::from_f64(x)
    }
}

impl Neg for DD {
    type Output = DD;
    #[inline]
    fn neg(self) -> DD {
        DD {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DD {
    type Output = DD;
    #[inline]
    fn add(self, b: DD) -> DD {
        let (s, e) = two_sum(self.hi, b.hi);
        let (t, f) = two_sum(self.lo, b.lo);
        let e = e + t;
        let (s, e) = quick_two_sum(s, e);
        let e = e + f;
        let (h, l) = quick_two_sum(s, e);
        DD { hi: h, lo: l }
    }
}

impl Sub for DD {
    type Output = DD;
    #[inline]
    fn sub(self, b: DD) -> DD {
        self + (-b)
    }
}

impl Mul for DD {
    type Output = DD;
    #[inline]
    fn mul(self, b: DD) -> DD {
        let (p, e) = two_prod(self.hi, b.hi);
        let e = e + (self.hi * b.lo + self.lo * b.hi);
        let (h, l) = quick_two_sum(p, e);
        DD { hi: h, lo: l }
    }
}

impl Div for DD {
    type Output = DD;
    #[inline]
    fn div(self, b: DD) -> DD {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (h, l) = quick_two_sum(q1, q2);
        DD { hi: h, lo: l }.add_f64(q3)
    }
}

impl PartialOrd for DD {
    fn partial_cmp(&self, other: &DD) -> Option<Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

//! Double-double arithmetic: an unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`,
//! giving roughly 106 bits of significand.
//!
//! Only the operations needed to evaluate phases such as `t*ln(n)/(2*pi)` and
//! `y*n^c` before reduction modulo 1 are provided.

use std::ops::{Add, Div, Mul, Neg, Sub};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct DoubleDouble {
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
    let e = b - (s - a);
    (s, e)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

/// 2^m for normal exponents.
#[inline]
fn pow2(m: i32) -> f64 {
    debug_assert!((-1022..=1023).contains(&m));
    f64::from_bits(((1023 + m) as u64) << 52)
}

impl DoubleDouble {
    pub const ZERO: Self = Self { hi: 0.0, lo: 0.0 };
    pub const ONE: Self = Self { hi: 1.0, lo: 0.0 };
    pub const PI: Self = Self {
        hi: std::f64::consts::PI,
        lo: 1.2246467991473532e-16,
    };
    pub const TWO_PI: Self = Self {
        hi: std::f64::consts::TAU,
        lo: 2.4492935982947064e-16,
    };
    pub const LN2: Self = Self {
        hi: std::f64::consts::LN_2,
        lo: 2.3190468138462996e-17,
    };

    pub const fn new(hi: f64, lo: f64) -> Self {
        Self { hi, lo }
    }

    pub fn from_f64(x: f64) -> Self {
        Self { hi: x, lo: 0.0 }
    }

    /// Exact for every `u64`.
    pub fn from_u64(n: u64) -> Self {
        let hi = n as f64;
        let lo = (n as i128 - hi as i128) as f64;
        let (hi, lo) = quick_two_sum(hi, lo);
        Self { hi, lo }
    }

    /// Exact for every `i64`.
    pub fn from_i64(n: i64) -> Self {
        let hi = n as f64;
        let lo = (n as i128 - hi as i128) as f64;
        let (hi, lo) = quick_two_sum(hi, lo);
        Self { hi, lo }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn is_finite(self) -> bool {
        self.hi.is_finite() && self.lo.is_finite()
    }

    pub fn abs(self) -> Self {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            -self
        } else {
            self
        }
    }

    pub fn mul_f64(self, b: f64) -> Self {
        let (p1, mut p2) = two_prod(self.hi, b);
        p2 = self.lo.mul_add(b, p2);
        let (hi, lo) = quick_two_sum(p1, p2);
        Self { hi, lo }
    }

    pub fn div_f64(self, b: f64) -> Self {
        self / Self::from_f64(b)
    }

    /// Multiplication by 2^m, exact barring overflow or underflow.
    pub fn ldexp(self, m: i32) -> Self {
        let mut out = self;
        let mut m = m;
        while m != 0 {
            let step = m.clamp(-1000, 1000);
            let f = pow2(step);
            out = Self {
                hi: out.hi * f,
                lo: out.lo * f,
            };
            m -= step;
        }
        out
    }

    pub fn sqr(self) -> Self {
        self * self
    }

    pub fn powi(self, mut e: u32) -> Self {
        let mut base = self;
        let mut acc = Self::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base.sqr();
            e >>= 1;
        }
        acc
    }

    /// `exp(x) - 1` for |x| <= ln(2)/2 / 1024 via Taylor series.
    fn expm1_small(r: Self) -> Self {
        let mut term = r;
        let mut sum = r;
        let mut k = 2.0;
        while term.hi.abs() > 1e-36 * sum.hi.abs().max(1e-300) {
            term = (term * r).div_f64(k);
            sum = sum + term;
            k += 1.0;
            if k > 40.0 {
                break;
            }
        }
        sum
    }

    /// Natural exponential. Returns infinity on overflow and zero on underflow.
    pub fn exp(self) -> Self {
        if self.hi > 709.0 {
            return Self::from_f64(f64::INFINITY);
        }
        if self.hi < -708.0 {
            return Self::ZERO;
        }
        let m = (self.hi / Self::LN2.hi).round();
        let r = (self - Self::LN2.mul_f64(m)).ldexp(-10);
        let mut s = Self::expm1_small(r);
        // (1 + s)^2 - 1 = s * (2 + s), repeated to undo the 2^-10 scaling.
        for _ in 0..10 {
            s = s * (s + Self::from_f64(2.0));
        }
        (s + Self::ONE).ldexp(m as i32)
    }

    /// Natural logarithm of a positive finite value.
    pub fn ln(self) -> Self {
        debug_assert!(self.hi > 0.0);
        let mut y = Self::from_f64(self.hi.ln());
        // Newton on exp(y) = x: y <- y + x * exp(-y) - 1. Each step doubles the correct bits.
        for _ in 0..2 {
            y = y + self * (-y).exp() - Self::ONE;
        }
        y
    }

    /// `self^c` for positive `self`; exact repeated multiplication for small non-negative
    /// integer exponents.
    pub fn powf(self, c: f64) -> Self {
        if c == 0.0 {
            return Self::ONE;
        }
        if c.fract() == 0.0 && (1.0..=64.0).contains(&c) {
            return self.powi(c as u32);
        }
        if c.fract() == 0.0 && (-64.0..=-1.0).contains(&c) {
            return Self::ONE / self.powi((-c) as u32);
        }
        (self.ln().mul_f64(c)).exp()
    }

    pub fn floor(self) -> Self {
        let hi = self.hi.floor();
        if hi == self.hi {
            let lo = self.lo.floor();
            let (hi, lo) = quick_two_sum(hi, lo);
            Self { hi, lo }
        } else {
            Self { hi, lo: 0.0 }
        }
    }
}

impl From<f64> for DoubleDouble {
    fn from(x: f64) -> Self {
        Self::from_f64(x)
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    fn add(self, b: Self) -> Self {
        let (s1, s2) = two_sum(self.hi, b.hi);
        let (t1, t2) = two_sum(self.lo, b.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        Self { hi, lo }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    fn sub(self, b: Self) -> Self {
        self + (-b)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    fn mul(self, b: Self) -> Self {
        let (p1, mut p2) = two_prod(self.hi, b.hi);
        p2 += self.hi * b.lo + self.lo * b.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Self { hi, lo }
    }
}

impl Div for DoubleDouble {
    type Output = Self;
    fn div(self, b: Self) -> Self {
        let q1 = self.hi / b.hi;
        let r = self - b.mul_f64(q1);
        let q2 = r.hi / b.hi;
        let r = r - b.mul_f64(q2);
        let q3 = r.hi / b.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Self { hi, lo } + Self::from_f64(q3)
    }
}

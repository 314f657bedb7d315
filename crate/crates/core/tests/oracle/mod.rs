//! Fixed-point reference arithmetic on big integers, used as an independent oracle for
//! the double-double phase code. Values are integers scaled by 10^DIGITS.
#![allow(dead_code)]

use num::bigint::BigInt;
use num::{Integer, One, Signed, ToPrimitive, Zero};

pub const DIGITS: u32 = 120;

#[derive(Clone, Debug)]
pub struct Fixed(pub BigInt);

pub fn scale() -> BigInt {
    BigInt::from(10).pow(DIGITS)
}

impl Fixed {
    pub fn from_int(n: i64) -> Self {
        Fixed(BigInt::from(n) * scale())
    }

    /// `num / den` rounded toward zero.
    pub fn ratio(num: i64, den: i64) -> Self {
        Fixed(BigInt::from(num) * scale() / BigInt::from(den))
    }

    pub fn add(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 + &o.0)
    }

    pub fn sub(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 - &o.0)
    }

    pub fn mul(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 * &o.0 / scale())
    }

    pub fn div(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 * scale() / &o.0)
    }

    pub fn mul_int(&self, n: i64) -> Fixed {
        Fixed(&self.0 * BigInt::from(n))
    }

    pub fn div_int(&self, n: i64) -> Fixed {
        Fixed(&self.0 / BigInt::from(n))
    }

    /// Value modulo `m`, in `[0, m)`.
    pub fn rem(&self, m: &Fixed) -> Fixed {
        Fixed(self.0.mod_floor(&m.0))
    }

    pub fn to_f64(&self) -> f64 {
        // Keep 30 digits before converting so the conversion itself is exact enough.
        let shift = BigInt::from(10).pow(DIGITS - 30);
        (&self.0 / shift).to_f64().unwrap() / 1e30
    }
}

/// `atan(1/x)` for an integer `x > 1`.
fn atan_inv(x: i64) -> Fixed {
    let x2 = BigInt::from(x * x);
    let mut power = scale() / BigInt::from(x);
    let mut sum = BigInt::zero();
    let mut k = 0i64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &x2;
        k += 1;
    }
    Fixed(sum)
}

pub fn pi() -> Fixed {
    atan_inv(5).mul_int(16).sub(&atan_inv(239).mul_int(4))
}

/// `atanh(a/b)` for `0 <= a < b`.
fn atanh_ratio(a: &BigInt, b: &BigInt) -> Fixed {
    let z = a * scale() / b;
    let z2 = &z * &z / scale();
    let mut power = z;
    let mut sum = BigInt::zero();
    let mut k = 0i64;
    while !power.is_zero() {
        sum += &power / BigInt::from(2 * k + 1);
        power = &power * &z2 / scale();
        k += 1;
    }
    Fixed(sum)
}

/// Natural log of a positive integer: `n = 2^e m` with `m` in `[1, 2)`, then
/// `ln m = 2 atanh((n - 2^e) / (n + 2^e))`.
pub fn ln_int(n: u64) -> Fixed {
    assert!(n >= 1);
    let e = 63 - n.leading_zeros() as i64;
    let ln2 = atanh_ratio(&BigInt::one(), &BigInt::from(3)).mul_int(2);
    let n = BigInt::from(n);
    let p = BigInt::one() << e as usize;
    let m = atanh_ratio(&(&n - &p), &(&n + &p)).mul_int(2);
    ln2.mul_int(e).add(&m)
}

/// `(cos x, sin x)` by Taylor series after reduction to `[-pi, pi]`.
pub fn cos_sin(x: &Fixed) -> (Fixed, Fixed) {
    let p = pi();
    let two_pi = p.mul_int(2);
    let mut r = x.rem(&two_pi);
    if r.0 > p.0 {
        r = r.sub(&two_pi);
    }
    let mut cos = BigInt::zero();
    let mut sin = BigInt::zero();
    let mut term = scale(); // r^j / j!
    let mut j = 0i64;
    while !term.is_zero() {
        let signed = if (j / 2) % 2 == 0 {
            term.clone()
        } else {
            -term.clone()
        };
        if j % 2 == 0 {
            cos += signed;
        } else {
            sin += signed;
        }
        term = &term * &r.0 / scale() / BigInt::from(j + 1);
        j += 1;
    }
    (Fixed(cos), Fixed(sin))
}

/// `1 / sqrt(n)`.
pub fn inv_sqrt(n: u64) -> Fixed {
    let root = (BigInt::from(n) * scale() * scale()).sqrt();
    Fixed(scale() * scale() / root)
}

/// `x^2 + y^2` then square root.
pub fn hypot(x: &Fixed, y: &Fixed) -> Fixed {
    let sq = &x.0 * &x.0 + &y.0 * &y.0;
    Fixed(sq.sqrt())
}

pub fn abs_diff(a: &Fixed, b: &Fixed) -> f64 {
    Fixed((&a.0 - &b.0).abs()).to_f64()
}

/// `t ln n / (2 pi)` for integer `t`.
pub fn log_phase(t: i64, n: u64) -> Fixed {
    ln_int(n).mul_int(t).div(&pi().mul_int(2))
}

/// Fractional part in `[0, 1)`.
pub fn frac(x: &Fixed) -> Fixed {
    x.rem(&Fixed::from_int(1))
}

/// `|sum_{n <= m} n^(-1/2) e(-t ln n / (2 pi))|` for integer `t`.
pub fn half_line_main_sum_modulus(t: i64, m: u64) -> Fixed {
    let mut re = Fixed(BigInt::zero());
    let mut im = Fixed(BigInt::zero());
    for n in 1..=m {
        let theta = ln_int(n).mul_int(t);
        let (c, s) = cos_sin(&theta);
        let w = inv_sqrt(n);
        re = re.add(&w.mul(&c));
        im = im.sub(&w.mul(&s));
    }
    hypot(&re, &im)
}

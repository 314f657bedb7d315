//! Exponential sums `sum e(f(n))` over concrete phase families, and the upper bounds they
//! are compared against.
//!
//! Bounds are evaluated with every implied constant set to 1 and with `epsilon = 0`; the
//! `N^epsilon` factor is reported as a separate column.

use std::collections::BTreeMap;

use num::bigint::BigInt;
use num::complex::Complex64;
use num::{Integer, One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::corekit::{
    e_of, rational_string, rational_to_f64, reduce_phase, ComplexAccumulator, DoubleDouble, Phase,
    Rational,
};
use crate::error::{Error, Result};

/// Largest interval accepted by [`raw_sum`].
pub const MAX_SUM_LENGTH: u64 = 100_000_000;

/// Highest derivative order with closed forms.
pub const MAX_DERIVATIVE: usize = 16;

/// Interior points used to check that `f^(k)` keeps its sign.
pub const SIGN_GRID: usize = 64;

const CHUNK: u64 = 1 << 14;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Family {
    /// `f(x) = y * x^c`.
    Monomial { y: f64, c: f64 },
    /// `f(x) = -t * ln(x) / (2 pi)`, so that `e(f(n)) = n^(-it)`.
    LogPhase { t: f64 },
    /// `f(x) = sum_i coeffs[i] * x^i`, evaluated exactly at integers.
    Polynomial {
        #[serde(serialize_with = "ser_rationals")]
        coeffs: Vec<Rational>,
    },
}

fn ser_rationals<S: serde::Serializer>(
    v: &[Rational],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(rational_string))
}

/// A phase function restricted to the integers of `(start, start + len]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseFunction {
    pub family: Family,
    pub start: u64,
    pub len: u64,
}

/// Falling factorial `c (c-1) ... (c-j+1)`.
fn falling(c: f64, j: usize) -> f64 {
    (0..j).map(|i| c - i as f64).product()
}

fn factorial(j: usize) -> f64 {
    (1..=j).map(|i| i as f64).product()
}

fn binomial_big(i: usize, j: usize) -> BigInt {
    let mut b = BigInt::one();
    for m in 0..j {
        b = b * BigInt::from(i - m) / BigInt::from(m + 1);
    }
    b
}

impl PhaseFunction {
    pub fn new(family: Family, start: u64, len: u64) -> Result<Self> {
        if len == 0 {
            return Err(Error::domain("phase function needs a non-empty interval"));
        }
        match &family {
            Family::Monomial { y, c } if !(y.is_finite() && c.is_finite()) => {
                return Err(Error::domain("monomial parameters must be finite"))
            }
            Family::LogPhase { t } if !t.is_finite() => {
                return Err(Error::domain("log phase parameter must be finite"))
            }
            _ => {}
        }
        Ok(Self { family, start, len })
    }

    pub fn monomial(y: f64, c: f64, start: u64, len: u64) -> Result<Self> {
        Self::new(Family::Monomial { y, c }, start, len)
    }

    pub fn log_phase(t: f64, start: u64, len: u64) -> Result<Self> {
        Self::new(Family::LogPhase { t }, start, len)
    }

    pub fn polynomial(coeffs: Vec<Rational>, start: u64, len: u64) -> Result<Self> {
        Self::new(Family::Polynomial { coeffs }, start, len)
    }

    /// Integer points of the interval.
    pub fn points(&self) -> std::ops::RangeInclusive<u64> {
        self.start + 1..=self.start + self.len
    }

    /// Left end of the real interval used for derivative hypotheses; the sums start at 1,
    /// so a zero left end is moved to 1.
    pub fn lower(&self) -> f64 {
        self.start.max(1) as f64
    }

    pub fn upper(&self) -> f64 {
        (self.start + self.len) as f64
    }

    pub fn family_name(&self) -> &'static str {
        match self.family {
            Family::Monomial { .. } => "monomial",
            Family::LogPhase { .. } => "logphase",
            Family::Polynomial { .. } => "polynomial",
        }
    }

    pub fn params(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        match &self.family {
            Family::Monomial { y, c } => {
                m.insert("y".into(), format!("{y:.16e}"));
                m.insert("c".into(), format!("{c:.16e}"));
            }
            Family::LogPhase { t } => {
                m.insert("t".into(), format!("{t:.16e}"));
            }
            Family::Polynomial { coeffs } => {
                let s: Vec<String> = coeffs.iter().map(|c| c.to_string()).collect();
                m.insert("coeffs".into(), s.join(","));
            }
        }
        m.insert("start".into(), self.start.to_string());
        m.insert("len".into(), self.len.to_string());
        m
    }

    /// `-f`.
    pub fn negated(&self) -> Self {
        let family = match &self.family {
            Family::Monomial { y, c } => Family::Monomial { y: -y, c: *c },
            Family::LogPhase { t } => Family::LogPhase { t: -t },
            Family::Polynomial { coeffs } => Family::Polynomial {
                coeffs: coeffs.iter().map(|c| -c).collect(),
            },
        };
        Self {
            family,
            ..self.clone()
        }
    }

    /// `f^(j)(x)` in double precision; `j = 0` is the value.
    pub fn derivative(&self, j: usize, x: f64) -> f64 {
        match &self.family {
            Family::Monomial { y, c } => y * falling(*c, j) * x.powf(c - j as f64),
            Family::LogPhase { t } => {
                let scale = -t / std::f64::consts::TAU;
                if j == 0 {
                    scale * x.ln()
                } else {
                    let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
                    scale * sign * factorial(j - 1) * x.powi(-(j as i32))
                }
            }
            Family::Polynomial { coeffs } => coeffs
                .iter()
                .enumerate()
                .skip(j)
                .map(|(i, c)| rational_to_f64(c) * falling(i as f64, j) * x.powi((i - j) as i32))
                .sum(),
        }
    }

    pub fn value(&self, x: f64) -> f64 {
        self.derivative(0, x)
    }

    /// Evaluator for `f^(j)(n) / j!` modulo 1 at integers.
    pub fn scaled_derivative_evaluator(&self, j: usize) -> Result<PhaseEvaluator> {
        if j > MAX_DERIVATIVE {
            return Err(Error::domain(format!(
                "derivative order {j} exceeds {MAX_DERIVATIVE}"
            )));
        }
        Ok(match &self.family {
            Family::Monomial { y, c } => {
                let mut coef = DoubleDouble::from_f64(*y);
                for i in 0..j {
                    coef = coef.mul_f64(c - i as f64);
                }
                PhaseEvaluator::Power {
                    coef: coef.div_f64(factorial(j)),
                    exponent: c - j as f64,
                }
            }
            Family::LogPhase { t } => {
                let base = DoubleDouble::from_f64(-t) / DoubleDouble::TWO_PI;
                if j == 0 {
                    PhaseEvaluator::Log { coef: base }
                } else {
                    // f^(j)/j! = -t/(2 pi) * (-1)^(j-1) / (j x^j)
                    let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
                    PhaseEvaluator::Power {
                        coef: base.mul_f64(sign).div_f64(j as f64),
                        exponent: -(j as f64),
                    }
                }
            }
            Family::Polynomial { coeffs } => {
                let scaled: Vec<Rational> = coeffs
                    .iter()
                    .enumerate()
                    .skip(j)
                    .map(|(i, c)| c * Rational::from_integer(binomial_big(i, j)))
                    .collect();
                PhaseEvaluator::Poly(ModPoly::new(&scaled))
            }
        })
    }

    pub fn phase_evaluator(&self) -> Result<PhaseEvaluator> {
        self.scaled_derivative_evaluator(0)
    }

    pub fn phase_at(&self, n: u64) -> Result<Phase> {
        self.phase_evaluator()?.at(n)
    }
}

/// Exact polynomial residue: numerators over a common denominator.
#[derive(Clone, Debug)]
pub struct ModPoly {
    numerators: Vec<BigInt>,
    den: BigInt,
    /// Numerators reduced into `[0, den)` when `den < 2^64`.
    small: Option<(Vec<u128>, u128)>,
}

impl ModPoly {
    fn new(coeffs: &[Rational]) -> Self {
        let den = coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let numerators: Vec<BigInt> = coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let small = den.to_u64().map(|d| {
            let d128 = BigInt::from(d);
            let reduced = numerators
                .iter()
                .map(|a| a.mod_floor(&d128).to_u128().unwrap_or(0))
                .collect();
            (reduced, u128::from(d))
        });
        Self {
            numerators,
            den,
            small,
        }
    }

    fn at(&self, n: u64) -> Phase {
        if let Some((coeffs, d)) = &self.small {
            let x = u128::from(n) % d;
            let r = coeffs
                .iter()
                .rev()
                .fold(0u128, |acc, &c| (acc * x % d + c) % d);
            return Phase::wrap(r as f64 / *d as f64);
        }
        let x = BigInt::from(n);
        let v = self
            .numerators
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * &x + c);
        let r = v.mod_floor(&self.den);
        Phase::wrap(rational_to_f64(&Rational::new(r, self.den.clone())))
    }
}

/// Evaluates a scaled derivative at integers in extended precision before reduction.
#[derive(Clone, Debug)]
pub enum PhaseEvaluator {
    /// `coef * n^exponent`.
    Power {
        coef: DoubleDouble,
        exponent: f64,
    },
    /// `coef * ln n`.
    Log {
        coef: DoubleDouble,
    },
    Poly(ModPoly),
}

impl PhaseEvaluator {
    pub fn at(&self, n: u64) -> Result<Phase> {
        match self {
            PhaseEvaluator::Power { coef, exponent } => {
                if coef.hi == 0.0 {
                    return Ok(Phase::ZERO);
                }
                let v = *coef * DoubleDouble::from_u64(n).powf(*exponent);
                reduce_phase(v)
            }
            PhaseEvaluator::Log { coef } => {
                if n == 1 || coef.hi == 0.0 {
                    return Ok(Phase::ZERO);
                }
                reduce_phase(*coef * DoubleDouble::from_u64(n).ln())
            }
            PhaseEvaluator::Poly(p) => Ok(p.at(n)),
        }
    }
}

/// `sum_{n in I} e(f(n))`.
///
/// Terms are accumulated in fixed chunks of 2^14 and the chunk sums are reduced pairwise in
/// index order, so the result is independent of the thread count.
pub fn raw_sum(f: &PhaseFunction) -> Result<Complex64> {
    if f.len > MAX_SUM_LENGTH {
        return Err(Error::size(format!(
            "interval length {} exceeds {MAX_SUM_LENGTH}",
            f.len
        )));
    }
    let eval = f.phase_evaluator()?;
    weighted_sum(f.start + 1, f.start + f.len, |n| Ok((eval.at(n)?, 1.0)))
}

/// Deterministic chunked sum of `w(n) e(phase(n))` over `first..=last`.
pub(crate) fn weighted_sum<F>(first: u64, last: u64, term: F) -> Result<Complex64>
where
    F: Fn(u64) -> Result<(Phase, f64)> + Sync,
{
    if last < first {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let chunks = (last - first) / CHUNK + 1;
    let mut parts: Vec<ComplexAccumulator> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = first + c * CHUNK;
            let hi = (lo + CHUNK - 1).min(last);
            let mut acc = ComplexAccumulator::new();
            for n in lo..=hi {
                let (phase, w) = term(n)?;
                acc.add(e_of(phase) * w);
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    while parts.len() > 1 {
        parts = parts
            .chunks(2)
            .map(|pair| {
                let mut a = pair[0];
                if let Some(b) = pair.get(1) {
                    a.merge(b);
                }
                a
            })
            .collect();
    }
    Ok(parts[0].value())
}

/// `lambda <= |f^(k)(x)| <= A * lambda` on the interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DerivativeBox {
    pub k: usize,
    pub lambda: f64,
    #[serde(rename = "A")]
    pub a: f64,
    /// Sign of `f^(k)` on the interval.
    pub sign: i8,
    /// Whether `A * lambda <= 1/4`.
    pub small_enough: bool,
}

impl DerivativeBox {
    pub fn new(k: usize, lambda: f64, a: f64) -> Result<Self> {
        if !(lambda > 0.0 && lambda.is_finite()) || !(a >= 1.0 && a.is_finite()) {
            return Err(Error::domain(format!(
                "derivative box needs lambda > 0 and A >= 1, got lambda={lambda}, A={a}"
            )));
        }
        Ok(Self {
            k,
            lambda,
            a,
            sign: 1,
            small_enough: a * lambda <= 0.25,
        })
    }
}

/// Bounds `|f^(k)|` on `[max(start, 1), start + len]`.
///
/// Monomial and log families have monotone k-th derivatives, so the endpoints give the box
/// and the ratio `A` is taken from the closed form. Polynomials use the extremes over the
/// sign-check grid.
pub fn derivative_box(f: &PhaseFunction, k: usize) -> Result<DerivativeBox> {
    if k == 0 || k > MAX_DERIVATIVE {
        return Err(Error::domain(format!(
            "derivative order {k} outside 1..={MAX_DERIVATIVE}"
        )));
    }
    let (a, b) = (f.lower(), f.upper());
    let grid: Vec<f64> = (0..=SIGN_GRID + 1)
        .map(|i| a + (b - a) * i as f64 / (SIGN_GRID + 1) as f64)
        .collect();
    let values: Vec<f64> = grid.iter().map(|&x| f.derivative(k, x)).collect();
    let sign = values[0].signum();
    if values
        .iter()
        .any(|&v| v == 0.0 || !v.is_finite() || v.signum() != sign)
    {
        return Err(Error::Family(format!(
            "f^({k}) vanishes or changes sign on [{a}, {b}]"
        )));
    }
    let (lambda, ratio) = match &f.family {
        Family::Monomial { c, .. } => {
            let e = c - k as f64;
            let lambda = values[0].abs().min(values[values.len() - 1].abs());
            let ratio = if e == 0.0 {
                1.0
            } else if e.fract() == 0.0 {
                (b / a).powi(e.abs() as i32)
            } else {
                (b / a).powf(e.abs())
            };
            (lambda, ratio)
        }
        Family::LogPhase { .. } => {
            let lambda = values[values.len() - 1].abs();
            (lambda, (b / a).powi(k as i32))
        }
        Family::Polynomial { .. } => {
            let lo = values.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
            let hi = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
            (lo, hi / lo)
        }
    };
    let mut bx = DerivativeBox::new(k, lambda, ratio)?;
    bx.sign = sign as i8;
    Ok(bx)
}

/// `A^(2^(2-k)) N lambda^(1/(2^k-2)) + N^(1-2^(2-k)) lambda^(-1/(2^k-2))`.
pub fn vdc_bound(n: f64, bx: &DerivativeBox) -> Result<f64> {
    if bx.k < 2 {
        return Err(Error::domain("the k-th derivative test needs k >= 2"));
    }
    let k = bx.k as i32;
    let big_k = 2f64.powi(2 - k);
    let e = 1.0 / (2f64.powi(k) - 2.0);
    Ok(bx.a.powf(big_k) * n * bx.lambda.powf(e) + n.powf(1.0 - big_k) * bx.lambda.powf(-e))
}

/// `N (lambda^(1/k(k-1)) + N^(-1/k(k-1)) + N^(-2/k(k-1)) lambda^(-2/k^2(k-1)))`, at `epsilon = 0`.
pub fn hb_bound(n: f64, bx: &DerivativeBox) -> Result<f64> {
    if bx.k < 3 {
        return Err(Error::domain(format!(
            "the new estimate needs k >= 3, got {}",
            bx.k
        )));
    }
    let k = bx.k as f64;
    let e = 1.0 / (k * (k - 1.0));
    Ok(n * (bx.lambda.powf(e) + n.powf(-e) + n.powf(-2.0 * e) * bx.lambda.powf(-2.0 * e / k)))
}

/// `A (N lambda^(1/k^2) + N^(1-1/k(k-1)) lambda^(-1/k^2(k-1)))`.
pub fn vv_bound(n: f64, bx: &DerivativeBox) -> Result<f64> {
    if bx.k < 3 {
        return Err(Error::domain(format!(
            "Vinogradov's bound needs k >= 3, got {}",
            bx.k
        )));
    }
    let k = bx.k as f64;
    Ok(bx.a
        * (n * bx.lambda.powf(1.0 / (k * k))
            + n.powf(1.0 - 1.0 / (k * (k - 1.0))) * bx.lambda.powf(-1.0 / (k * k * (k - 1.0)))))
}

/// `N^epsilon`, the factor all epsilon-bounds carry.
pub fn eps_factor(n: f64, eps: f64) -> f64 {
    n.powf(eps)
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct LiteratureBounds {
    pub values: BTreeMap<String, f64>,
    /// Methods that do not apply, with the reason.
    pub omitted: BTreeMap<String, String>,
}

/// The Robert-Sargos (`k = 4`) and Sargos (`k = 8, 9`) bounds under the key `"rs"`,
/// and Robert's bound for `k >= 4` under `"robert"`, all at `epsilon = 0`.
pub fn literature_bounds(n: f64, bx: &DerivativeBox) -> LiteratureBounds {
    let mut out = LiteratureBounds::default();
    let lam = bx.lambda;
    // (exponent of lambda in the N-term, exponent of lambda in the second term)
    let rs = match bx.k {
        4 => Some((1.0 / 13.0, -7.0 / 13.0)),
        8 => Some((1.0 / 204.0, -95.0 / 204.0)),
        9 => Some((7.0 / 2640.0, -1001.0 / 2640.0)),
        _ => None,
    };
    match rs {
        Some((e1, e2)) => {
            out.values
                .insert("rs".into(), n * lam.powf(e1) + lam.powf(e2));
        }
        None => {
            out.omitted.insert(
                "rs".into(),
                format!("only available for k in {{4, 8, 9}}, got k={}", bx.k),
            );
        }
    }
    if bx.k >= 4 {
        let k = bx.k as f64;
        let threshold = lam.powf(-(k - 1.0) / (2.0 * k - 3.0));
        if n >= threshold {
            let e = 1.0 / (2.0 * (k - 1.0) * (k - 2.0));
            out.values
                .insert("robert".into(), n * (lam.powf(e) + n.powf(-e)));
        } else {
            out.omitted.insert(
                "robert".into(),
                format!("needs N >= lambda^(-(k-1)/(2k-3)) = {threshold:.6e}"),
            );
        }
    } else {
        out.omitted
            .insert("robert".into(), format!("needs k >= 4, got k={}", bx.k));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport {
    pub family: String,
    pub params: BTreeMap<String, String>,
    #[serde(rename = "N")]
    pub n: u64,
    pub k: usize,
    pub lambda: f64,
    #[serde(rename = "A")]
    pub a: f64,
    pub empirical: f64,
    pub bounds: BTreeMap<String, f64>,
    pub ratios: BTreeMap<String, f64>,
    /// `N^epsilon` for each reported epsilon, keyed by its decimal form.
    pub eps_factors: BTreeMap<String, f64>,
    pub omitted: BTreeMap<String, String>,
}

/// Reported epsilon values for the `N^epsilon` column.
pub const REPORTED_EPSILONS: [f64; 2] = [0.0, 0.01];

/// Empirical `|sum|` alongside every applicable bound, one report per `k`.
pub fn compare(f: &PhaseFunction, ks: &[usize]) -> Result<Vec<BoundReport>> {
    let empirical = raw_sum(f)?.norm();
    let n = f.len as f64;
    ks.iter()
        .map(|&k| {
            let bx = derivative_box(f, k)?;
            let mut bounds = BTreeMap::new();
            let mut omitted = BTreeMap::new();
            bounds.insert("vdc".to_string(), vdc_bound(n, &bx)?);
            if k >= 3 {
                bounds.insert("hb".to_string(), hb_bound(n, &bx)?);
                bounds.insert("vv".to_string(), vv_bound(n, &bx)?);
            } else {
                omitted.insert("hb".to_string(), "needs k >= 3".to_string());
                omitted.insert("vv".to_string(), "needs k >= 3".to_string());
            }
            let lit = literature_bounds(n, &bx);
            bounds.extend(lit.values);
            omitted.extend(lit.omitted);
            let ratios = bounds
                .iter()
                .map(|(name, v)| (name.clone(), empirical / v))
                .collect();
            let eps_factors = REPORTED_EPSILONS
                .iter()
                .map(|&e| (format!("{e}"), eps_factor(n, e)))
                .collect();
            Ok(BoundReport {
                family: f.family_name().to_string(),
                params: f.params(),
                n: f.len,
                k,
                lambda: bx.lambda,
                a: bx.a,
                empirical,
                bounds,
                ratios,
                eps_factors,
                omitted,
            })
        })
        .collect()
}

/// Lower and upper constants `a_k`, `b_k` for `k = 3, 4, ...` of a family
/// `a_k T N^-k <= |g^(k)| <= b_k T N^-k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DerivativeSequences {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl DerivativeSequences {
    pub fn k_max(&self) -> usize {
        self.a.len() + 2
    }
}

/// `s (s+1) ... (s+k-2)`.
fn rising(s: f64, k: usize) -> f64 {
    (0..k - 1).map(|i| s + i as f64).product()
}

/// Sequences under which every member of the monomial-derivative family with deviation
/// `c = 1/4` lies in the derivative-box family: from
/// `3/4 |D| <= |f^(k)| <= 5/4 |D|` with `D = d^(k-1)/dx^(k-1) (y x^-s)` and `N < x <= 2N`,
/// `a_k = 3 * 2^(1-s-k) * s(s+1)...(s+k-2) / 4` and `b_k = 5 * s(s+1)...(s+k-2) / 4`.
pub fn reduction_sequences(s: f64, k_max: usize) -> DerivativeSequences {
    let a = (3..=k_max)
        .map(|k| 3.0 * 2f64.powf(1.0 - s - k as f64) * rising(s, k) / 4.0)
        .collect();
    let b = (3..=k_max).map(|k| 5.0 * rising(s, k) / 4.0).collect();
    DerivativeSequences { a, b }
}

/// The constants exactly as typeset in the source,
/// `a_k = 3 * 2^(-1-k) / (4 s(s+1)...(s+k-2))`, `b_k = 5 / (4 s(s+1)...(s+k-2))`.
/// Kept for comparison; monomials fail these once the rising product exceeds about 1.
pub fn printed_reduction_sequences(s: f64, k_max: usize) -> DerivativeSequences {
    let a = (3..=k_max)
        .map(|k| 3.0 * 2f64.powi(-1 - k as i32) / (4.0 * rising(s, k)))
        .collect();
    let b = (3..=k_max).map(|k| 5.0 / (4.0 * rising(s, k))).collect();
    DerivativeSequences { a, b }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MembershipRow {
    pub k: usize,
    /// Extremes of `|g^(k)(x)| / (T N^-k)` over the sample grid.
    pub min_scaled: f64,
    pub max_scaled: f64,
    pub a_k: f64,
    pub b_k: f64,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Membership {
    pub rows: Vec<MembershipRow>,
    pub member: bool,
}

/// Checks `a_k T N^-k <= |g^(k)(x)| <= b_k T N^-k` for `3 <= k <= seq.k_max()` on a grid
/// over the interval of `g`, which must lie inside `(N, 2N]`.
pub fn family_check_g(
    g: &PhaseFunction,
    n: f64,
    t: f64,
    seq: &DerivativeSequences,
) -> Result<Membership> {
    if !(t >= n && n > 0.0) {
        return Err(Error::domain(format!("need T >= N > 0, got T={t}, N={n}")));
    }
    if (g.start as f64) < n || g.upper() > 2.0 * n {
        return Err(Error::domain(format!(
            "interval ({}, {}] is not inside (N, 2N] for N={n}",
            g.start,
            g.upper()
        )));
    }
    if seq.a.len() != seq.b.len() || seq.a.is_empty() {
        return Err(Error::domain(
            "sequences must be non-empty and of equal length",
        ));
    }
    let (lo, hi) = (g.lower(), g.upper());
    let grid: Vec<f64> = (0..=SIGN_GRID + 1)
        .map(|i| lo + (hi - lo) * i as f64 / (SIGN_GRID + 1) as f64)
        .collect();
    let rows: Vec<MembershipRow> = (3..=seq.k_max())
        .map(|k| {
            let scale = t * n.powi(-(k as i32));
            let scaled: Vec<f64> = grid
                .iter()
                .map(|&x| g.derivative(k, x).abs() / scale)
                .collect();
            let min_scaled = scaled.iter().cloned().fold(f64::INFINITY, f64::min);
            let max_scaled = scaled.iter().cloned().fold(0.0, f64::max);
            let (a_k, b_k) = (seq.a[k - 3], seq.b[k - 3]);
            MembershipRow {
                k,
                min_scaled,
                max_scaled,
                a_k,
                b_k,
                ok: a_k <= min_scaled && max_scaled <= b_k,
            }
        })
        .collect();
    let member = rows.iter().all(|r| r.ok);
    Ok(Membership { rows, member })
}

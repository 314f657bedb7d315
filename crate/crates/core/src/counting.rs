//! Pair counts of close scaled derivatives, the spacing count, and the Fejér-product
//! kernel.
//!
//! For a phase `f` on `(N0, N0 + N]` and an integer `H`, a pair `(m, n)` is close at order
//! `j` when `||f^(j)(m)/j! - f^(j)(n)/j!|| <= 2 H^-j`. `count_n` asks this for
//! `1 <= j <= k-1`; `count_n1` only for `j = k-2, k-1`.

use std::collections::HashMap;

use num::bigint::BigInt;
use num::{One, Signed};
use rayon::prelude::*;
use serde::Serialize;

use crate::corekit::{frac_dist, Rational};
use crate::error::{Error, Result};
use crate::expsum::{derivative_box, Family, PhaseFunction};

/// Absolute slack added to every closeness threshold; values within it count as inside.
pub const GUARD: f64 = 1e-12;

/// Largest interval for the all-pairs strategy.
pub const QUADRATIC_LIMIT: u64 = 100_000;

/// Largest interval for the bucketed strategy.
pub const BUCKET_LIMIT: u64 = 10_000_000;

/// Below this length [`CountStrategy::Auto`] uses the all-pairs loop.
const AUTO_SWITCH: u64 = 4096;

/// Most coordinates used to key buckets; the rest are checked per candidate.
const BUCKET_DIMS: usize = 3;

/// `floor((A lambda)^(-1/k))`.
///
/// The floating estimate is corrected by checking `h^k A lambda <= 1` directly, with a
/// relative guard of `1e-12` so that exact powers such as `lambda = 1/27` are not lost to
/// rounding.
pub fn h_of(lambda: f64, a: f64, k: usize) -> Result<u64> {
    let x = a * lambda;
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::domain(format!("need A*lambda > 0, got {x}")));
    }
    if x > 0.25 * (1.0 + 1e-12) {
        return Err(Error::domain(format!("need A*lambda <= 1/4, got {x}")));
    }
    if k == 0 {
        return Err(Error::domain("k must be positive"));
    }
    let fits = |h: u64| (h as f64).powi(k as i32) * x <= 1.0 + 1e-12;
    let mut h = x.powf(-1.0 / k as f64).floor().max(1.0) as u64;
    while fits(h + 1) {
        h += 1;
    }
    while h > 1 && !fits(h) {
        h -= 1;
    }
    Ok(h)
}

/// [`h_of`] for an exact product `A lambda`.
pub fn h_of_exact(a_lambda: &Rational, k: usize) -> Result<u64> {
    if !a_lambda.is_positive() || a_lambda > &Rational::new(BigInt::one(), BigInt::from(4)) {
        return Err(Error::domain(format!(
            "need 0 < A*lambda <= 1/4, got {a_lambda}"
        )));
    }
    if k == 0 {
        return Err(Error::domain("k must be positive"));
    }
    let fits = |h: u64| {
        let p = Rational::from_integer(BigInt::from(h).pow(k as u32)) * a_lambda;
        p <= Rational::one()
    };
    let guess = crate::corekit::rational_to_f64(a_lambda).powf(-1.0 / k as f64);
    let mut h = guess.floor().max(1.0).min(u64::MAX as f64 / 2.0) as u64;
    while fits(h + 1) {
        h += 1;
    }
    while h > 1 && !fits(h) {
        h -= 1;
    }
    Ok(h)
}

/// Phase, derivative order and `H` for the pair counts.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CountSpec {
    pub f: PhaseFunction,
    pub k: usize,
    #[serde(rename = "H")]
    pub h: u64,
}

impl CountSpec {
    pub fn new(f: PhaseFunction, k: usize, h: u64) -> Result<Self> {
        if k < 3 {
            return Err(Error::domain(format!("pair counts need k >= 3, got {k}")));
        }
        if h == 0 {
            return Err(Error::domain("H must be at least 1"));
        }
        Ok(Self { f, k, h })
    }

    /// Takes `H` from the derivative box of `f^(k)`.
    pub fn auto(f: PhaseFunction, k: usize) -> Result<Self> {
        let bx = derivative_box(&f, k)?;
        let h = h_of(bx.lambda, bx.a, k)?;
        Self::new(f, k, h)
    }

    pub fn n(&self) -> u64 {
        self.f.len
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CountStrategy {
    Quadratic,
    Bucket,
    #[default]
    Auto,
}

/// Scaled derivative residues, one column per order, with their thresholds.
struct Residues {
    cols: Vec<Vec<f64>>,
    tols: Vec<f64>,
}

impl Residues {
    fn build(spec: &CountSpec, orders: &[usize]) -> Result<Self> {
        let points: Vec<u64> = spec.f.points().collect();
        let cols = orders
            .iter()
            .map(|&j| {
                let eval = spec.f.scaled_derivative_evaluator(j)?;
                points
                    .par_iter()
                    .map(|&n| eval.at(n).map(|p| p.value()))
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<_>>()?;
        let tols = orders
            .iter()
            .map(|&j| 2.0 * (spec.h as f64).powi(-(j as i32)) + GUARD)
            .collect();
        Ok(Self { cols, tols })
    }

    fn close(&self, m: usize, n: usize) -> bool {
        self.cols.iter().zip(&self.tols).all(|(col, &tol)| {
            let d = (col[m] - col[n]).abs();
            d.min(1.0 - d) <= tol
        })
    }

    fn len(&self) -> usize {
        self.cols.first().map_or(0, Vec::len)
    }
}

fn count_quadratic(r: &Residues) -> u64 {
    let n = r.len();
    (0..n)
        .into_par_iter()
        .map(|m| (0..n).filter(|&i| r.close(m, i)).count() as u64)
        .sum()
}

fn count_bucketed(r: &Residues) -> u64 {
    let n = r.len();
    // Cells no narrower than the threshold, so close points sit in adjacent cells. A
    // coordinate with fewer than 3 cells is not bucketed, since neighbours would repeat.
    let mut dims: Vec<(usize, u64)> = r
        .tols
        .iter()
        .enumerate()
        .map(|(i, &t)| (i, (1.0 / t).floor() as u64))
        .filter(|&(_, c)| c >= 3)
        .collect();
    dims.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));
    dims.truncate(BUCKET_DIMS);
    let cell = |i: usize| -> Vec<u64> {
        dims.iter()
            .map(|&(d, c)| ((r.cols[d][i] * c as f64) as u64).min(c - 1))
            .collect()
    };
    let mut buckets: HashMap<Vec<u64>, Vec<u32>> = HashMap::new();
    for i in 0..n {
        buckets.entry(cell(i)).or_default().push(i as u32);
    }
    let offsets: Vec<Vec<i64>> = (0..3usize.pow(dims.len() as u32))
        .map(|mut code| {
            (0..dims.len())
                .map(|_| {
                    let o = (code % 3) as i64 - 1;
                    code /= 3;
                    o
                })
                .collect()
        })
        .collect();
    (0..n)
        .into_par_iter()
        .map(|m| {
            let home = cell(m);
            offsets
                .iter()
                .map(|off| {
                    let key: Vec<u64> = home
                        .iter()
                        .zip(off)
                        .zip(&dims)
                        .map(|((&h, &o), &(_, c))| (h as i64 + o).rem_euclid(c as i64) as u64)
                        .collect();
                    buckets.get(&key).map_or(0, |v| {
                        v.iter().filter(|&&i| r.close(m, i as usize)).count() as u64
                    })
                })
                .sum::<u64>()
        })
        .sum()
}

/// Ordered pairs of points of the interval that are close at every order in `orders`.
pub fn count_pairs(spec: &CountSpec, orders: &[usize], strategy: CountStrategy) -> Result<u64> {
    let n = spec.n();
    let strategy = match strategy {
        CountStrategy::Auto if n <= AUTO_SWITCH => CountStrategy::Quadratic,
        CountStrategy::Auto => CountStrategy::Bucket,
        s => s,
    };
    let limit = match strategy {
        CountStrategy::Quadratic => QUADRATIC_LIMIT,
        _ => BUCKET_LIMIT,
    };
    if n > limit {
        return Err(Error::size(format!(
            "interval length {n} exceeds {limit} for the {strategy:?} strategy"
        )));
    }
    let r = Residues::build(spec, orders)?;
    Ok(match strategy {
        CountStrategy::Quadratic => count_quadratic(&r),
        _ => count_bucketed(&r),
    })
}

/// Pairs close at every order `1..=k-1`.
pub fn count_n(spec: &CountSpec) -> Result<u64> {
    count_n_with(spec, CountStrategy::Auto)
}

pub fn count_n_with(spec: &CountSpec, strategy: CountStrategy) -> Result<u64> {
    let orders: Vec<usize> = (1..spec.k).collect();
    count_pairs(spec, &orders, strategy)
}

/// Pairs close at orders `k-2` and `k-1` only.
pub fn count_n1(spec: &CountSpec) -> Result<u64> {
    count_n1_with(spec, CountStrategy::Auto)
}

pub fn count_n1_with(spec: &CountSpec, strategy: CountStrategy) -> Result<u64> {
    count_pairs(spec, &[spec.k - 2, spec.k - 1], strategy)
}

/// `((k-1)! A)^4 (N + lambda N^2 + lambda^(-2/k)) ln N`.
pub fn n2_bound(n: f64, lambda: f64, a: f64, k: usize) -> Result<f64> {
    if k < 3 {
        return Err(Error::domain(format!(
            "the pair-count bound needs k >= 3, got {k}"
        )));
    }
    if n < 2.0 {
        return Err(Error::domain(format!(
            "the pair-count bound needs N >= 2, got {n}"
        )));
    }
    let fact: f64 = (1..k).map(|i| i as f64).product();
    Ok((fact * a).powi(4) * (n + lambda * n * n + lambda.powf(-2.0 / k as f64)) * n.ln())
}

/// Extremes of `g'` on a grid over `[1, n]`, as `(mu, A0)` with `mu <= g' <= A0 mu`.
pub fn spacing_derivative_range(g: &PhaseFunction, n: u64) -> Result<(f64, f64)> {
    let grid = crate::expsum::SIGN_GRID + 1;
    let values: Vec<f64> = (0..=grid)
        .map(|i| g.derivative(1, 1.0 + (n as f64 - 1.0) * i as f64 / grid as f64))
        .collect();
    let lo = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if !(lo > 0.0 && hi.is_finite()) {
        return Err(Error::domain(format!(
            "g' must be positive on [1, {n}], found minimum {lo}"
        )));
    }
    Ok((lo, hi / lo))
}

/// `#{1 <= n <= N : ||g(n)|| <= theta}`.
pub fn spacing_count(g: &PhaseFunction, n: u64, theta: f64) -> Result<u64> {
    if !(0.0..=0.5).contains(&theta) {
        return Err(Error::domain(format!(
            "theta must lie in [0, 1/2], got {theta}"
        )));
    }
    spacing_derivative_range(g, n)?;
    let eval = g.phase_evaluator()?;
    (1..=n)
        .into_par_iter()
        .map(|m| Ok(u64::from(frac_dist(eval.at(m)?.value())? <= theta + GUARD)))
        .sum()
}

/// `(1 + A0 mu N)(1 + theta / mu)`.
pub fn spacing_bound(mu: f64, a0: f64, n: f64, theta: f64) -> f64 {
    (1.0 + a0 * mu * n) * (1.0 + theta / mu)
}

/// Widths of the tent factors of the doubly periodic kernel
/// `phi(x, y) = max(1 - ||x||/B, 0) max(1 - ||y||/C, 0)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FejerKernel {
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "C")]
    pub c: f64,
}

impl FejerKernel {
    /// `B = 4 H^(2-k)`, `C = 4 H^(1-k)`.
    pub fn new(h: u64, k: usize) -> Result<Self> {
        if k < 3 || h == 0 {
            return Err(Error::domain(format!(
                "kernel needs k >= 3 and H >= 1, got k={k}, H={h}"
            )));
        }
        let h = h as f64;
        Self::from_widths(4.0 * h.powi(2 - k as i32), 4.0 * h.powi(1 - k as i32))
    }

    pub fn from_widths(b: f64, c: f64) -> Result<Self> {
        if !(0.0 < c && c <= b && b <= 4.0) {
            return Err(Error::domain(format!(
                "need 0 < C <= B <= 4, got B={b}, C={c}"
            )));
        }
        Ok(Self { b, c })
    }

    /// Whether both tents fit in one period, which the coefficient formula assumes.
    pub fn coefficients_exact(&self) -> bool {
        self.b <= 0.5
    }
}

fn tent(x: f64, w: f64) -> f64 {
    let d = (x - x.round()).abs();
    (1.0 - d / w).max(0.0)
}

fn sinc(z: f64) -> f64 {
    if z == 0.0 {
        1.0
    } else {
        z.sin() / z
    }
}

pub fn fejer_phi(x: f64, y: f64, kernel: &FejerKernel) -> f64 {
    tent(x, kernel.b) * tent(y, kernel.c)
}

/// `c_{r,s} = B C (sin(pi r B) sin(pi s C) / (pi^2 r s B C))^2`, with the `r = 0` and
/// `s = 0` limits.
pub fn fejer_coeff(r: i64, s: i64, kernel: &FejerKernel) -> f64 {
    use std::f64::consts::PI;
    let u = sinc(PI * r as f64 * kernel.b);
    let v = sinc(PI * s as f64 * kernel.c);
    kernel.b * kernel.c * (u * v) * (u * v)
}

/// `sum_{|r| <= R, |s| <= S} c_{r,s} e(rx + sy)`.
///
/// The coefficients factor as `c_{r,s} = c_r c_s`, so the double sum is the product of two
/// one-dimensional cosine sums.
pub fn fejer_partial_sum(x: f64, y: f64, kernel: &FejerKernel, r_max: i64, s_max: i64) -> f64 {
    use std::f64::consts::{PI, TAU};
    let side = |t: f64, w: f64, m: i64| -> f64 {
        (1..=m).fold(w, |acc, r| {
            let u = sinc(PI * r as f64 * w);
            acc + 2.0 * w * u * u * (TAU * r as f64 * t).cos()
        })
    };
    side(x, kernel.b, r_max) * side(y, kernel.c, s_max)
}

/// One row of the pair-count table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NRatioRow {
    #[serde(rename = "N")]
    pub n: u64,
    pub k: usize,
    #[serde(rename = "H")]
    pub h: u64,
    #[serde(rename = "countN")]
    pub count_n: u64,
    #[serde(rename = "countN1")]
    pub count_n1: u64,
    #[serde(rename = "n2bound")]
    pub n2_bound: f64,
    pub ratio: f64,
}

/// Pair counts of `family` on `(N, 2N]` for each `N`, with `H` from the derivative box.
///
/// Fails if a count with fewer conditions comes out smaller.
pub fn n_ratio_report(family: &Family, k: usize, ns: &[u64]) -> Result<Vec<NRatioRow>> {
    ns.iter()
        .map(|&n| {
            let f = PhaseFunction::new(family.clone(), n, n)?;
            let bx = derivative_box(&f, k)?;
            let spec = CountSpec::new(f, k, h_of(bx.lambda, bx.a, k)?)?;
            let count_n = count_n(&spec)?;
            let count_n1 = count_n1(&spec)?;
            if count_n > count_n1 {
                return Err(Error::Check(format!(
                    "N={n}: count with all orders {count_n} exceeds count with two orders {count_n1}"
                )));
            }
            let bound = n2_bound(n as f64, bx.lambda, bx.a, k)?;
            Ok(NRatioRow {
                n,
                k,
                h: spec.h,
                count_n,
                count_n1,
                n2_bound: bound,
                ratio: count_n as f64 / bound,
            })
        })
        .collect()
}

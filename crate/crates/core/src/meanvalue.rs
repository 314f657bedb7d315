//! Exact values of Vinogradov's mean value `J_{s,l}(P)`.
//!
//! By orthogonality `J_{s,l}(P)` is the number of ordered solutions of
//! `x_1^j + ... + x_s^j = y_1^j + ... + y_s^j` for `1 <= j <= l`, all variables in `[1, P]`.
//! Grouping the s-tuples by their power-sum vector `v` with multiplicity `r(v)` gives
//! `J = sum_v r(v)^2`, which is what [`jsl_count`] computes.

use std::collections::HashMap;
use std::time::Instant;

use num::bigint::BigUint;
use num::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::corekit::{least_squares_slope, rat, rational_to_f64, Rational};
use crate::error::{Error, Result};

/// Largest `P^(2s)` accepted by the direct enumeration.
pub const NAIVE_LIMIT: u128 = 100_000_000;

/// Default memory budget for the hashing counter.
pub const DEFAULT_MEMORY_BUDGET: u64 = 4 << 30;

/// Estimated per-entry overhead of the hash map beyond the key bytes.
const ENTRY_OVERHEAD: u64 = 64;

/// The vector `(sum x_i, sum x_i^2, ..., sum x_i^l)` of an s-tuple.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PowerSumKey {
    sums: Vec<BigUint>,
}

impl PowerSumKey {
    pub fn of(xs: &[u64], l: u32) -> Self {
        let sums = (1..=l)
            .map(|j| {
                xs.iter()
                    .map(|&x| num::pow(BigUint::from(x), j as usize))
                    .sum()
            })
            .collect();
        Self { sums }
    }

    pub fn sums(&self) -> &[BigUint] {
        &self.sums
    }

    /// Canonical byte encoding: per entry, one length byte then the little-endian magnitude.
    pub fn encode(&self) -> Vec<u8> {
        let mut out = Vec::new();
        for s in &self.sums {
            let bytes = if s.is_zero() {
                Vec::new()
            } else {
                s.to_bytes_le()
            };
            out.push(bytes.len() as u8);
            out.extend_from_slice(&bytes);
        }
        out
    }
}

/// Same encoding as [`PowerSumKey::encode`] for values that fit in `u128`.
fn encode_u128(sums: &[u128], out: &mut Vec<u8>) {
    out.clear();
    for &s in sums {
        let bytes = s.to_le_bytes();
        let len = 16 - (s.leading_zeros() as usize) / 8;
        out.push(len as u8);
        out.extend_from_slice(&bytes[..len]);
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeanValueResult {
    pub s: u32,
    pub l: u32,
    pub p: u64,
    pub count: BigUint,
    pub elapsed_secs: f64,
}

fn check_args(s: u32, l: u32, p: u64) -> Result<()> {
    if s == 0 || l == 0 || p == 0 {
        return Err(Error::domain(format!(
            "mean value needs s, l, P >= 1, got s={s}, l={l}, P={p}"
        )));
    }
    Ok(())
}

/// Direct enumeration of all `2s`-tuples. Refuses `P^(2s) > 10^8`.
pub fn jsl_naive(s: u32, l: u32, p: u64) -> Result<MeanValueResult> {
    check_args(s, l, p)?;
    let start = Instant::now();
    let total = (p as u128).checked_pow(2 * s).filter(|&t| t <= NAIVE_LIMIT);
    if total.is_none() {
        return Err(Error::size(format!(
            "P^(2s) = {p}^{} exceeds the naive limit {NAIVE_LIMIT}",
            2 * s
        )));
    }
    // Every s-tuple's power sums, then an all-pairs comparison.
    let powers: Vec<Vec<i128>> = (1..=p)
        .map(|x| {
            (1..=l)
                .map(|j| (x as i128).checked_pow(j))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| Error::size(format!("{x}^{l} overflows i128")))
        })
        .collect::<Result<_>>()?;
    let half = p.pow(s) as usize;
    let mut vectors = Vec::with_capacity(half);
    let mut idx = vec![0usize; s as usize];
    loop {
        let mut v = vec![0i128; l as usize];
        for &i in &idx {
            for (acc, pw) in v.iter_mut().zip(&powers[i]) {
                *acc = acc
                    .checked_add(*pw)
                    .ok_or_else(|| Error::size("power sum overflows i128"))?;
            }
        }
        vectors.push(v);
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                break;
            }
            idx[pos] += 1;
            if idx[pos] < p as usize {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
        if pos == idx.len() {
            break;
        }
    }
    let count: u64 = vectors
        .par_iter()
        .map(|x| vectors.iter().filter(|y| *y == x).count() as u64)
        .sum();
    Ok(MeanValueResult {
        s,
        l,
        p,
        count: BigUint::from(count),
        elapsed_secs: start.elapsed().as_secs_f64(),
    })
}

/// Meet-in-the-middle count with the default 4 GiB budget.
pub fn jsl_count(s: u32, l: u32, p: u64) -> Result<MeanValueResult> {
    jsl_count_with_budget(s, l, p, DEFAULT_MEMORY_BUDGET)
}

/// Meet-in-the-middle count: tally power-sum vectors of all s-tuples, return `sum r(v)^2`.
///
/// Work is split over the leading variable `x_1`; the partial tallies are merged by key,
/// so the result does not depend on the thread count.
pub fn jsl_count_with_budget(s: u32, l: u32, p: u64, budget_bytes: u64) -> Result<MeanValueResult> {
    check_args(s, l, p)?;
    let start = Instant::now();

    // Largest power sum is s * P^l; its byte length fixes the key size.
    let max_sum = BigUint::from(s) * num::pow(BigUint::from(p), l as usize);
    let key_bytes = u64::from(l) * (max_sum.bits().div_ceil(8) + 1);
    let per_entry = key_bytes + ENTRY_OVERHEAD;
    let tuples = (p as f64).powi(s as i32);
    if tuples * per_entry as f64 > budget_bytes as f64 {
        let suggested = ((budget_bytes as f64 / per_entry as f64).powf(1.0 / s as f64)).floor();
        return Err(Error::size(format!(
            "about {tuples:.3e} keys of {per_entry} bytes exceed the {budget_bytes}-byte budget; \
             try P <= {suggested}"
        )));
    }

    let tallies = if max_sum.bits() <= 127 {
        tally_u128(s, l, p)
    } else {
        tally_big(s, l, p)
    };
    let count = tallies.values().fold(BigUint::zero(), |acc, &r| {
        acc + BigUint::from(r) * BigUint::from(r)
    });
    Ok(MeanValueResult {
        s,
        l,
        p,
        count,
        elapsed_secs: start.elapsed().as_secs_f64(),
    })
}

fn merge(mut a: HashMap<Vec<u8>, u64>, b: HashMap<Vec<u8>, u64>) -> HashMap<Vec<u8>, u64> {
    if a.len() < b.len() {
        return merge(b, a);
    }
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

/// Odometer over `(x_2, ..., x_s)` with running prefix sums, for a fixed `x_1`.
fn tally_u128(s: u32, l: u32, p: u64) -> HashMap<Vec<u8>, u64> {
    let l = l as usize;
    let s = s as usize;
    let powers: Vec<Vec<u128>> = (0..=p)
        .map(|x| (1..=l as u32).map(|j| (x as u128).pow(j)).collect())
        .collect();
    (1..=p)
        .into_par_iter()
        .fold(HashMap::new, |mut map: HashMap<Vec<u8>, u64>, x1| {
            // prefix[i] holds the sums of x_1..x_{i+1}.
            let mut xs = vec![1u64; s];
            xs[0] = x1;
            let mut prefix = vec![vec![0u128; l]; s];
            prefix[0].copy_from_slice(&powers[x1 as usize]);
            let rebuild = |from: usize, xs: &[u64], prefix: &mut Vec<Vec<u128>>| {
                for i in from.max(1)..s {
                    for j in 0..l {
                        prefix[i][j] = prefix[i - 1][j] + powers[xs[i] as usize][j];
                    }
                }
            };
            rebuild(1, &xs, &mut prefix);
            let mut key = Vec::with_capacity(l * 17);
            loop {
                encode_u128(&prefix[s - 1], &mut key);
                *map.entry(key.clone()).or_insert(0) += 1;
                // Advance x_s, carrying into earlier coordinates; x_1 stays fixed.
                let mut pos = s - 1;
                loop {
                    if pos == 0 {
                        return map;
                    }
                    if xs[pos] < p {
                        xs[pos] += 1;
                        break;
                    }
                    xs[pos] = 1;
                    pos -= 1;
                }
                rebuild(pos, &xs, &mut prefix);
            }
        })
        .reduce(HashMap::new, merge)
}

fn tally_big(s: u32, l: u32, p: u64) -> HashMap<Vec<u8>, u64> {
    (1..=p)
        .into_par_iter()
        .fold(HashMap::new, |mut map: HashMap<Vec<u8>, u64>, x1| {
            let s = s as usize;
            let mut xs = vec![1u64; s];
            xs[0] = x1;
            loop {
                *map.entry(PowerSumKey::of(&xs, l).encode()).or_insert(0) += 1;
                let mut pos = s - 1;
                loop {
                    if pos == 0 {
                        return map;
                    }
                    if xs[pos] < p {
                        xs[pos] += 1;
                        break;
                    }
                    xs[pos] = 1;
                    pos -= 1;
                }
            }
        })
        .reduce(HashMap::new, merge)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BdgExponent {
    /// `2s - l(l+1)/2`.
    pub exponent: Rational,
    /// Whether `s >= l(l+1)/2`, the range where the main-term bound is known.
    pub in_optimal_range: bool,
}

pub fn bdg_exponent(s: u32, l: u32) -> BdgExponent {
    let s = i64::from(s);
    let l = i64::from(l);
    let half_tri = l * (l + 1) / 2;
    BdgExponent {
        exponent: rat(2 * s - half_tri, 1),
        in_optimal_range: s >= half_tri,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TrendReport {
    pub s: u32,
    pub l: u32,
    pub rows: Vec<MeanValueResult>,
    /// Least-squares slope of `log J` against `log P`.
    pub slope: f64,
    /// Slope between each `P` and its predecessor; `None` for the first row.
    pub local_slopes: Vec<Option<f64>>,
    pub bdg: BdgExponent,
    /// `max(s, 2s - l(l+1)/2)`: diagonal solutions alone force `J >= P^s`.
    pub reference_exponent: f64,
}

/// Fits the growth exponent of `J_{s,l}(P)` over `ps`.
pub fn exponent_trend(s: u32, l: u32, ps: &[u64]) -> Result<TrendReport> {
    if ps.len() < 3 {
        return Err(Error::domain(
            "exponent trend needs at least three values of P",
        ));
    }
    if ps.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::domain("P values must be strictly increasing"));
    }
    let rows = ps
        .iter()
        .map(|&p| jsl_count(s, l, p))
        .collect::<Result<Vec<_>>>()?;
    let xs: Vec<f64> = ps.iter().map(|&p| (p as f64).ln()).collect();
    let ys: Vec<f64> = rows.iter().map(|r| ln_big(&r.count)).collect();
    let slope = least_squares_slope(&xs, &ys)?;
    let local_slopes = (0..ps.len())
        .map(|i| (i > 0).then(|| (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1])))
        .collect();
    let bdg = bdg_exponent(s, l);
    let reference_exponent = rational_to_f64(&bdg.exponent).max(f64::from(s));
    Ok(TrendReport {
        s,
        l,
        rows,
        slope,
        local_slopes,
        bdg,
        reference_exponent,
    })
}

/// Natural log of a big count without overflowing `f64`.
pub fn ln_big(n: &BigUint) -> f64 {
    if let Some(x) = n.to_f64().filter(|x| x.is_finite()) {
        return x.ln();
    }
    let shift = n.bits().saturating_sub(64);
    let top = (n >> shift).to_f64().unwrap_or(f64::MAX);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `P^s`, the number of diagonal solutions.
pub fn diagonal_count(s: u32, p: u64) -> BigUint {
    num::pow(BigUint::from(p), s as usize)
}

impl MeanValueResult {
    /// `P^s <= count <= P^(2s)`.
    pub fn within_trivial_bounds(&self) -> bool {
        let diag = diagonal_count(self.s, self.p);
        self.count >= diag && self.count <= &diag * &diag
    }

    pub fn count_is_one(&self) -> bool {
        self.count.is_one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(s: u32, l: u32, p: u64) -> u64 {
        jsl_naive(s, l, p).unwrap().count.to_u64().unwrap()
    }

    fn fast(s: u32, l: u32, p: u64) -> u64 {
        jsl_count(s, l, p).unwrap().count.to_u64().unwrap()
    }

    #[test]
    fn naive_examples() {
        assert_eq!(naive(1, 1, 5), 5);
        assert_eq!(naive(2, 1, 2), 6);
        assert_eq!(naive(2, 1, 3), 19);
        assert_eq!(naive(3, 2, 2), 20);
    }

    #[test]
    fn fast_examples() {
        assert_eq!(fast(2, 1, 3), 19);
        assert_eq!(fast(3, 2, 2), 20);
        assert!(jsl_count(3, 2, 1).unwrap().count_is_one());
    }

    #[test]
    fn naive_refuses_large_scale() {
        assert!(matches!(jsl_naive(3, 2, 22), Err(Error::Size(_))));
        assert!(jsl_naive(0, 1, 3).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let err = jsl_count_with_budget(3, 3, 1000, 1 << 20).unwrap_err();
        match err {
            Error::Size(msg) => assert!(msg.contains("try P <=")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn big_path_agrees_with_u128_path() {
        let a = tally_u128(2, 3, 7);
        let b = tally_big(2, 3, 7);
        assert_eq!(a, b);
        let huge = jsl_count(1, 4, 1 << 33).map(|_| ());
        assert!(huge.is_err(), "P^s keys must trip the memory budget");
    }

    #[test]
    fn key_encoding_is_canonical() {
        let key = PowerSumKey::of(&[3, 5], 3);
        assert_eq!(key.sums(), &[8u32.into(), 34u32.into(), 152u32.into()]);
        let mut buf = Vec::new();
        encode_u128(&[8, 34, 152], &mut buf);
        assert_eq!(key.encode(), buf);
        let zero = PowerSumKey {
            sums: vec![BigUint::zero()],
        };
        encode_u128(&[0], &mut buf);
        assert_eq!(zero.encode(), buf);
    }

    #[test]
    fn bdg_examples() {
        let e = bdg_exponent(6, 3);
        assert_eq!(e.exponent, rat(6, 1));
        assert!(e.in_optimal_range);
        let e = bdg_exponent(1, 1);
        assert_eq!(e.exponent, rat(1, 1));
        assert!(e.in_optimal_range);
        let e = bdg_exponent(3, 3);
        assert_eq!(e.exponent, rat(0, 1));
        assert!(!e.in_optimal_range);
    }

    #[test]
    fn trend_examples() {
        let t = exponent_trend(2, 1, &[4, 8, 16, 32]).unwrap();
        assert!((2.8..=3.2).contains(&t.slope), "slope {}", t.slope);
        for (row, &p) in t.rows.iter().zip(&[4u64, 8, 16, 32]) {
            assert_eq!(row.count, BigUint::from((2 * p.pow(3) + p) / 3));
        }
        let t = exponent_trend(1, 1, &[3, 10, 40]).unwrap();
        assert!((t.slope - 1.0).abs() < 1e-12);
        let t = exponent_trend(3, 2, &[4, 8, 16, 24]).unwrap();
        assert_eq!(t.reference_exponent, 3.0);
        assert!(t.local_slopes[0].is_none());
        assert!(exponent_trend(2, 1, &[4, 4, 8]).is_err());
        assert!(exponent_trend(2, 1, &[4, 8]).is_err());
    }

    #[test]
    fn counts_respect_trivial_bounds() {
        for (s, l, p) in [(1, 1, 4), (2, 2, 6), (3, 1, 5), (3, 3, 4)] {
            assert!(jsl_count(s, l, p).unwrap().within_trivial_bounds());
        }
    }

    #[test]
    fn ln_big_handles_huge_values() {
        let n = num::pow(BigUint::from(10u32), 400);
        assert!((ln_big(&n) - 400.0 * 10f64.ln()).abs() < 1e-9);
    }
}

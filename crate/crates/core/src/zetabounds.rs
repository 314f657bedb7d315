//! The piecewise-linear exponent `phi(tau)`, exact checks of the inequalities that lead to
//! the constant `49/80`, the constant `kappa = 8 sqrt(15) / 63`, and desk-scale zeta main
//! sums.
//!
//! Throughout, `tau = log T / log N`. On `[((k-1)^2+1)/k, (k^2+1)/(k+1))` the exponent is
//! `phi(tau) = A_k tau + B_k`.

use num::bigint::BigInt;
use num::{One, Signed, Zero};
use serde::Serialize;

use crate::corekit::{
    least_squares_slope, rat, rational_to_f64, serialize_rational, Phase, Rational,
};
use crate::error::{Error, Result};
use crate::expsum::{weighted_sum, PhaseFunction};

/// Default index of the last segment in a `PhiTau` table.
pub const DEFAULT_K_MAX: usize = 64;

/// Largest `t` accepted by [`zeta_main_sum`].
pub const MAX_T: f64 = 1e10;

/// Ford's exponent constant, shown for comparison only.
pub const FORD_CONSTANT: f64 = 4.45;

fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `49 / (80 tau^2)`.
fn target(tau: &Rational) -> Rational {
    rat(49, 80) / (tau * tau)
}

/// `(A_k, B_k) = (2/((k-1)^2 (k+2)), -(3k^2-3k+2)/(k (k-1)^2 (k+2)))`.
pub fn akbk(k: usize) -> Result<(Rational, Rational)> {
    if k < 3 {
        return Err(Error::domain(format!("A_k, B_k need k >= 3, got {k}")));
    }
    let k = int(k as i64);
    let one = Rational::one();
    let km1 = &k - &one;
    let kp2 = &k + int(2);
    let a = int(2) / (&km1 * &km1 * &kp2);
    let b = -(int(3) * &k * &k - int(3) * &k + int(2)) / (&k * &km1 * &km1 * &kp2);
    Ok((a, b))
}

/// `((k-1)^2 + 1) / k`, the left end of segment `k`.
pub fn left_breakpoint(k: usize) -> Rational {
    let k = k as i64;
    rat((k - 1) * (k - 1) + 1, k)
}

/// `(k^2 + 1) / (k + 1)`, the right end of segment `k`.
pub fn right_breakpoint(k: usize) -> Rational {
    let k = k as i64;
    rat(k * k + 1, k + 1)
}

/// `max((tau-k)/(k(k-1)), -1/(k(k-1)), -2 tau/(k^2 (k-1)))`, the exponent the `k`-th
/// derivative estimate gives before it is replaced by the line `A_k tau + B_k`.
pub fn mid_exponent(k: usize, tau: &Rational) -> Result<Rational> {
    if k < 3 {
        return Err(Error::domain(format!("need k >= 3, got {k}")));
    }
    let kk = int(k as i64);
    let d = &kk * (&kk - Rational::one());
    let first = (tau - &kk) / &d;
    let second = -Rational::one() / &d;
    let third = -int(2) * tau / (&kk * &d);
    Ok([first, second, third].into_iter().max().unwrap())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Segment {
    pub k: usize,
    #[serde(serialize_with = "serialize_rational")]
    pub lo: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub hi: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub slope: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub intercept: Rational,
}

impl Segment {
    pub fn value(&self, tau: &Rational) -> Rational {
        &self.slope * tau + &self.intercept
    }
}

/// Segments `k = 3..=k_max` of `phi`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhiTau {
    pub k_max: usize,
    pub segments: Vec<Segment>,
}

impl PhiTau {
    pub fn new(k_max: usize) -> Result<Self> {
        if k_max < 3 {
            return Err(Error::domain(format!(
                "table needs k_max >= 3, got {k_max}"
            )));
        }
        let segments = (3..=k_max)
            .map(|k| {
                let (slope, intercept) = akbk(k)?;
                Ok(Segment {
                    k,
                    lo: left_breakpoint(k),
                    hi: right_breakpoint(k),
                    slope,
                    intercept,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self { k_max, segments })
    }

    /// Left end of the first segment, `5/3`.
    pub fn bottom(&self) -> &Rational {
        &self.segments[0].lo
    }

    /// Right end of the last segment; the table covers `[bottom, top)`.
    pub fn top(&self) -> &Rational {
        &self.segments[self.segments.len() - 1].hi
    }

    pub fn segment_for(&self, tau: &Rational) -> Result<&Segment> {
        self.segments
            .iter()
            .find(|s| &s.lo <= tau && tau < &s.hi)
            .ok_or_else(|| {
                Error::Range(format!(
                    "tau = {tau} outside the table range [{}, {})",
                    self.bottom(),
                    self.top()
                ))
            })
    }
}

impl Default for PhiTau {
    fn default() -> Self {
        Self::new(DEFAULT_K_MAX).expect("default table size is valid")
    }
}

/// `phi(tau)`. The table starts at `5/3`, below the range `tau >= 2` where it is used.
pub fn phi_tau(tau: &Rational, table: &PhiTau) -> Result<Rational> {
    Ok(table.segment_for(tau)?.value(tau))
}

/// One named exact check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub ok: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ok,
            detail: detail.into(),
        }
    }
}

/// Values agree at every junction `(k^2+1)/(k+1)` shared by segments `k` and `k+1`.
pub fn check_continuity(table: &PhiTau) -> Check {
    let bad: Vec<usize> = table
        .segments
        .windows(2)
        .filter(|w| w[0].hi != w[1].lo || w[0].value(&w[0].hi) != w[1].value(&w[1].lo))
        .map(|w| w[0].k)
        .collect();
    Check::new(
        format!("continuity(k=3..{})", table.k_max),
        bad.is_empty(),
        if bad.is_empty() {
            String::new()
        } else {
            format!("breaks after k in {bad:?}")
        },
    )
}

/// Slopes strictly decrease, so `phi` is convex.
pub fn check_convexity(table: &PhiTau) -> Check {
    let bad: Vec<usize> = table
        .segments
        .windows(2)
        .filter(|w| w[1].slope >= w[0].slope)
        .map(|w| w[0].k)
        .collect();
    Check::new(
        "convexity",
        bad.is_empty(),
        if bad.is_empty() {
            String::new()
        } else {
            format!("slope fails to drop after k in {bad:?}")
        },
    )
}

/// `A_k ((k-1)^2+1)/k + B_k = -1/(k(k-1))` and `A_k (k^2+1)/(k+1) + B_k = -1/(k(k+1))`.
pub fn check_endpoint_values(table: &PhiTau) -> Check {
    let bad: Vec<usize> = table
        .segments
        .iter()
        .filter(|s| {
            let k = s.k as i64;
            s.value(&s.lo) != rat(-1, k * (k - 1)) || s.value(&s.hi) != rat(-1, k * (k + 1))
        })
        .map(|s| s.k)
        .collect();
    Check::new(
        "endpoint values",
        bad.is_empty(),
        if bad.is_empty() {
            String::new()
        } else {
            format!("wrong endpoint values for k in {bad:?}")
        },
    )
}

/// The mid exponent never exceeds its line on the segment, checked at the two ends and at
/// the kink `tau = k - 1`, where the pieces of the maximum are linear in between.
pub fn check_mid_below_line(table: &PhiTau) -> Check {
    let mut bad = Vec::new();
    for s in &table.segments {
        let kink = int(s.k as i64 - 1);
        for tau in [&s.lo, &kink, &s.hi] {
            if tau < &s.lo || tau > &s.hi {
                continue;
            }
            if mid_exponent(s.k, tau).map_or(true, |m| m > s.value(tau)) {
                bad.push((s.k, tau.to_string()));
            }
        }
    }
    Check::new(
        "mid exponent below line",
        bad.is_empty(),
        if bad.is_empty() {
            String::new()
        } else {
            format!("{bad:?}")
        },
    )
}

/// Every line `A_k tau + B_k` lies on or above `phi` at every breakpoint of the table.
pub fn check_lines_dominate(table: &PhiTau) -> Check {
    let mut worst: Option<(usize, String)> = None;
    'outer: for s in &table.segments {
        for line in &table.segments {
            let v = s.value(&s.lo);
            if line.value(&s.lo) < v {
                worst = Some((line.k, s.lo.to_string()));
                break 'outer;
            }
        }
    }
    Check::new(
        "phi below every line",
        worst.is_none(),
        worst.map_or(String::new(), |(k, t)| {
            format!("line k={k} below phi at tau={t}")
        }),
    )
}

/// `(k^2+1)^2 / (k (k+1)^3)`, the ratio that must reach `49/80`.
pub fn breakpoint_ratio(k: usize) -> Rational {
    let k = int(k as i64);
    let a = &k * &k + Rational::one();
    let b = &k + Rational::one();
    &a * &a / (&k * &b * &b * &b)
}

/// A line `slope tau + intercept` compared with `-49/(80 tau^2)` on `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntervalCertificate {
    pub name: String,
    #[serde(serialize_with = "serialize_rational")]
    pub lo: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub hi: Rational,
    /// `-49/(80 tau^2) - line` at `lo` and `hi`, exact.
    #[serde(serialize_with = "serialize_rational")]
    pub margin_lo: Rational,
    #[serde(serialize_with = "serialize_rational")]
    pub margin_hi: Rational,
    /// Where the derivative of the margin vanishes, if inside the interval. The margin is
    /// concave there, so this is its maximum and plays no part in the certificate.
    pub stationary: Option<f64>,
    pub ok: bool,
}

/// Certifies `slope tau + intercept <= -49/(80 tau^2)` on `[lo, hi]` with `0 < lo`.
///
/// The margin `-49/(80 tau^2) - slope tau - intercept` has second derivative
/// `-147/(40 tau^4) < 0`, so it is concave and its minimum over the interval is at an end.
/// Both ends are checked exactly.
pub fn certify_line_below(
    name: &str,
    slope: &Rational,
    intercept: &Rational,
    lo: &Rational,
    hi: &Rational,
) -> Result<IntervalCertificate> {
    if !lo.is_positive() || lo > hi {
        return Err(Error::domain(format!(
            "need 0 < lo <= hi, got [{lo}, {hi}]"
        )));
    }
    let margin = |tau: &Rational| -target(tau) - slope * tau - intercept;
    let margin_lo = margin(lo);
    let margin_hi = margin(hi);
    // d/dtau margin = 49/(40 tau^3) - slope
    let stationary = if slope.is_positive() {
        let t = (49.0 / (40.0 * rational_to_f64(slope))).cbrt();
        (rational_to_f64(lo)..=rational_to_f64(hi))
            .contains(&t)
            .then_some(t)
    } else {
        None
    };
    let ok = !margin_lo.is_negative() && !margin_hi.is_negative();
    Ok(IntervalCertificate {
        name: name.to_string(),
        lo: lo.clone(),
        hi: hi.clone(),
        margin_lo,
        margin_hi,
        stationary,
        ok,
    })
}

/// The three groups of checks behind `49/80`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report4980 {
    /// `(k^2+1)^2/(k(k+1)^3)` at `k = 5`.
    #[serde(serialize_with = "serialize_rational")]
    pub ratio_at_5: Rational,
    pub ratio_at_5_ok: bool,
    /// Strictly increasing for `k = 5..=100`.
    pub ratio_increasing: bool,
    /// At least `49/80` for `k = 5..=100`.
    pub ratio_above_target: bool,
    /// `phi(tau) <= -49/(80 tau^2)` at every breakpoint in `[13/3, 10]` and at `10`.
    pub phi_below_target: bool,
    pub intervals: Vec<IntervalCertificate>,
    /// `(2 tau - 9)/40 = -49/(80 tau^2)` at `tau = 7/2`.
    pub equality_at_7_2: bool,
}

impl Report4980 {
    pub fn ok(&self) -> bool {
        self.ratio_at_5_ok
            && self.ratio_increasing
            && self.ratio_above_target
            && self.phi_below_target
            && self.equality_at_7_2
            && self.intervals.iter().all(|c| c.ok)
    }
}

pub fn verify_49_80() -> Result<Report4980> {
    let ratio_at_5 = breakpoint_ratio(5);
    let ratios: Vec<Rational> = (5..=100).map(breakpoint_ratio).collect();
    let ratio_increasing = ratios.windows(2).all(|w| w[0] < w[1]);
    let ratio_above_target = ratios.iter().all(|r| r >= &rat(49, 80));

    let table = PhiTau::new(12)?;
    let (lo, hi) = (rat(13, 3), int(10));
    let mut points: Vec<Rational> = (5..=table.k_max)
        .map(right_breakpoint)
        .filter(|t| t >= &lo && t <= &hi)
        .collect();
    points.push(hi.clone());
    let phi_below_target = points
        .iter()
        .map(|t| phi_tau(t, &table).map(|v| v <= -target(t)))
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .all(|b| b);

    let intervals = vec![
        certify_line_below(
            "(2tau-7)/18 on [2, 59/22]",
            &rat(1, 9),
            &rat(-7, 18),
            &int(2),
            &rat(59, 22),
        )?,
        certify_line_below(
            "(2tau-9)/40 on [59/22, 7/2]",
            &rat(1, 20),
            &rat(-9, 40),
            &rat(59, 22),
            &rat(7, 2),
        )?,
        certify_line_below(
            "-1/20 on [7/2, 4]",
            &Rational::zero(),
            &rat(-1, 20),
            &rat(7, 2),
            &int(4),
        )?,
        certify_line_below(
            "-(5-tau)/20 on [4, 13/3]",
            &rat(1, 20),
            &rat(-1, 4),
            &int(4),
            &rat(13, 3),
        )?,
    ];
    let seven_halves = rat(7, 2);
    let equality_at_7_2 = (int(2) * &seven_halves - int(9)) / int(40) == -target(&seven_halves)
        && rat(-1, 20) == -target(&seven_halves);

    Ok(Report4980 {
        ratio_at_5_ok: ratio_at_5 == rat(169, 270) && ratio_at_5 > rat(49, 80),
        ratio_at_5,
        ratio_increasing,
        ratio_above_target,
        phi_below_target,
        intervals,
        equality_at_7_2,
    })
}

/// Margin `(1-sigma)^(3/2)/2 - (1/2 - sigma + sigma^(3/2)/2)` of the inequality used for
/// `sigma <= 1/2`.
pub fn rich2_margin(sigma: f64) -> f64 {
    rich2_lhs(sigma) - rich2_rhs(sigma)
}

fn rich2_lhs(sigma: f64) -> f64 {
    (1.0 - sigma).powf(1.5) / 2.0
}

fn rich2_rhs(sigma: f64) -> f64 {
    0.5 - sigma + sigma.powf(1.5) / 2.0
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Rich2Report {
    pub points: usize,
    pub min_margin: f64,
    /// Both sides agree at `sigma = 0` and `sigma = 1/2`.
    pub endpoint_equality: bool,
    pub ok: bool,
}

/// Checks the inequality on `grid` (tolerance `1e-12`) and the equality at both ends.
///
/// At `sigma = 0` both sides are `1/2`. At `sigma = 1/2` both reduce to
/// `(1/2)^(3/2) / 2`, since `1/2 - sigma` vanishes; the comparison below is between the
/// same floating expression on each side, so it is exact.
pub fn rich2_inequality_check(grid: &[f64]) -> Result<Rich2Report> {
    if let Some(s) = grid.iter().find(|s| !(0.0..=0.5).contains(*s)) {
        return Err(Error::domain(format!("grid point {s} outside [0, 1/2]")));
    }
    let min_margin = grid
        .iter()
        .map(|&s| rich2_margin(s))
        .fold(f64::INFINITY, f64::min);
    let endpoint_equality = [0.0, 0.5].iter().all(|&s| rich2_lhs(s) == rich2_rhs(s));
    Ok(Rich2Report {
        points: grid.len(),
        min_margin,
        endpoint_equality,
        ok: endpoint_equality && (grid.is_empty() || min_margin >= -1e-12),
    })
}

/// `8 sqrt(15) / 63`.
pub fn kappa() -> f64 {
    8.0 * 15f64.sqrt() / 63.0
}

/// `8 sqrt(15) / 63` truncated to `digits` decimal places, by integer square root.
pub fn kappa_digits(digits: u32) -> String {
    let scale = BigInt::from(10).pow(digits);
    let root = (BigInt::from(15) * &scale * &scale).sqrt();
    let v = BigInt::from(8) * root / BigInt::from(63);
    let s = format!("{:0>width$}", v.to_string(), width = digits as usize + 1);
    let (int_part, frac) = s.split_at(s.len() - digits as usize);
    format!("{int_part}.{frac}")
}

/// `tau*^2 = 147 / (80 (1 - sigma))`.
pub fn tau_star_squared(sigma: &Rational) -> Result<Rational> {
    if sigma >= &Rational::one() {
        return Err(Error::domain(format!("need sigma < 1, got {sigma}")));
    }
    Ok(rat(147, 80) / (Rational::one() - sigma))
}

/// `(1 - sigma)/tau - 49/(80 tau^3)`, the exponent of `t` at a given `tau`.
pub fn t_exponent(sigma: f64, tau: f64) -> f64 {
    (1.0 - sigma) / tau - 49.0 / (80.0 * tau.powi(3))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KappaCheck {
    pub sigma: f64,
    pub tau_star: f64,
    /// `kappa (1 - sigma)^(3/2)`.
    pub closed_form: f64,
    /// Maximum of [`t_exponent`] found by golden-section search.
    pub numeric: f64,
    pub residual: f64,
}

/// Golden-section search for the maximum of a unimodal function on `[a, b]`.
fn golden_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    f((a + b) / 2.0)
}

/// Compares the closed-form maximum over `tau` with a numeric search on `[0.1, 100]`.
pub fn kappa_check(sigma: f64) -> Result<KappaCheck> {
    if !(0.0..1.0).contains(&sigma) {
        return Err(Error::domain(format!("need 0 <= sigma < 1, got {sigma}")));
    }
    let tau_star = (147.0 / (80.0 * (1.0 - sigma))).sqrt();
    let closed_form = kappa() * (1.0 - sigma).powf(1.5);
    let numeric = golden_max(|tau| t_exponent(sigma, tau), 0.1, 100.0, 1e-12);
    Ok(KappaCheck {
        sigma,
        tau_star,
        closed_form,
        numeric,
        residual: (closed_form - numeric).abs(),
    })
}

/// `kappa (1 - sigma)^(3/2)`.
pub fn theory_exponent(sigma: f64) -> f64 {
    kappa() * (1.0 - sigma).powf(1.5)
}

/// `4.45 (1 - sigma)^(3/2)`.
pub fn ford_exponent(sigma: f64) -> f64 {
    FORD_CONSTANT * (1.0 - sigma).powf(1.5)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZetaCurvePoint {
    pub sigma: f64,
    pub t: f64,
    /// Number of terms, `floor(sqrt(t / (2 pi)))`.
    pub m: u64,
    pub main_sum_modulus: f64,
    pub theory_exponent: f64,
}

/// `sum_{n <= M} n^-sigma e(-t ln n / (2 pi))` with `M = floor(sqrt(t / (2 pi)))`.
pub fn zeta_main_sum(sigma: f64, t: f64) -> Result<ZetaCurvePoint> {
    if !(0.0..=1.0).contains(&sigma) {
        return Err(Error::domain(format!("need 0 <= sigma <= 1, got {sigma}")));
    }
    if !t.is_finite() || t > MAX_T {
        return Err(Error::Precision(format!(
            "t = {t} exceeds the phase budget {MAX_T:e}"
        )));
    }
    let m = (t / std::f64::consts::TAU).sqrt().floor() as u64;
    if m == 0 {
        return Err(Error::domain(format!("t = {t} gives an empty main sum")));
    }
    let eval = PhaseFunction::log_phase(t, 0, m)?.phase_evaluator()?;
    let sum = weighted_sum(1, m, |n| -> Result<(Phase, f64)> {
        Ok((eval.at(n)?, (n as f64).powf(-sigma)))
    })?;
    Ok(ZetaCurvePoint {
        sigma,
        t,
        m,
        main_sum_modulus: sum.norm(),
        theory_exponent: theory_exponent(sigma),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZetaTrend {
    pub sigma: f64,
    pub points: Vec<ZetaCurvePoint>,
    pub fitted_exponent: f64,
    pub theory_exponent: f64,
    pub ford_exponent: f64,
    /// Whether the fit stays within `0.05` above the theoretical exponent.
    pub within_monitor: bool,
}

/// Least-squares slope of `log |main sum|` against `log t` over a geometric grid.
pub fn empirical_exponent(sigma: f64, t_grid: &[f64]) -> Result<ZetaTrend> {
    if t_grid.len() < 4 {
        return Err(Error::domain(format!(
            "need at least 4 t values, got {}",
            t_grid.len()
        )));
    }
    if t_grid
        .windows(2)
        .any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater))
    {
        return Err(Error::domain("t values must be strictly increasing"));
    }
    let r0 = t_grid[1] / t_grid[0];
    if t_grid
        .windows(2)
        .any(|w| ((w[1] / w[0]) / r0 - 1.0).abs() > 1e-9)
    {
        return Err(Error::domain("t values must form a geometric grid"));
    }
    let points = t_grid
        .iter()
        .map(|&t| zeta_main_sum(sigma, t))
        .collect::<Result<Vec<_>>>()?;
    if let Some(p) = points.iter().find(|p| p.main_sum_modulus <= 0.0) {
        return Err(Error::domain(format!("main sum vanishes at t = {}", p.t)));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.t.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.main_sum_modulus.ln()).collect();
    let fitted_exponent = least_squares_slope(&xs, &ys)?;
    let theory = theory_exponent(sigma);
    Ok(ZetaTrend {
        sigma,
        points,
        fitted_exponent,
        theory_exponent: theory,
        ford_exponent: ford_exponent(sigma),
        within_monitor: fitted_exponent <= theory + 0.05,
    })
}

/// Every exact check of this module, in reporting order.
pub fn verification_battery(k_max: usize) -> Result<Vec<Check>> {
    let table = PhiTau::new(k_max)?;
    let mut checks = vec![
        check_continuity(&table),
        check_convexity(&table),
        check_endpoint_values(&table),
        check_mid_below_line(&table),
        check_lines_dominate(&table),
    ];
    let r = verify_49_80()?;
    checks.push(Check::new(
        "169/270",
        r.ratio_at_5_ok,
        format!("ratio at k=5 is {}", r.ratio_at_5),
    ));
    checks.push(Check::new(
        "ratio increasing (k=5..100)",
        r.ratio_increasing,
        "",
    ));
    checks.push(Check::new(
        "ratio >= 49/80 (k=5..100)",
        r.ratio_above_target,
        "",
    ));
    checks.push(Check::new(
        "phi <= -49/(80 tau^2) on [13/3, 10]",
        r.phi_below_target,
        "",
    ));
    for c in &r.intervals {
        checks.push(Check::new(
            c.name.clone(),
            c.ok,
            format!("margins {} and {}", c.margin_lo, c.margin_hi),
        ));
    }
    checks.push(Check::new("equality@7/2", r.equality_at_7_2, ""));
    let grid: Vec<f64> = (0..=1000).map(|i| i as f64 / 2000.0).collect();
    let rich = rich2_inequality_check(&grid)?;
    checks.push(Check::new(
        "sigma <= 1/2 inequality",
        rich.ok,
        format!(
            "min margin {:e} over {} points",
            rich.min_margin, rich.points
        ),
    ));
    for sigma in [0.3, 0.5, 0.7, 0.9] {
        let c = kappa_check(sigma)?;
        checks.push(Check::new(
            format!("kappa maximum at sigma={sigma}"),
            c.residual <= 1e-10,
            format!("residual {:e}", c.residual),
        ));
    }
    Ok(checks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exppair::theorem2_pair;

    #[test]
    fn akbk_examples() {
        assert_eq!(akbk(3).unwrap(), (rat(1, 10), rat(-1, 3)));
        assert_eq!(akbk(5).unwrap(), (rat(1, 56), rat(-31, 280)));
        let (a, b) = akbk(7).unwrap();
        assert_eq!(a * rat(37, 7) + b, rat(-1, 42));
        assert!(akbk(2).is_err());
    }

    #[test]
    fn akbk_matches_theorem2_pairs() {
        for k in 3..=100usize {
            let (a, b) = akbk(k).unwrap();
            let pair = theorem2_pair(k as u32).unwrap();
            assert_eq!(pair.p(), &a);
            assert_eq!(pair.q(), &(Rational::one() + &a + &b));
        }
    }

    #[test]
    fn phi_examples() {
        let table = PhiTau::default();
        assert_eq!(phi_tau(&int(2), &table).unwrap(), rat(-2, 15));
        let junction = rat(5, 2);
        assert_eq!(phi_tau(&junction, &table).unwrap(), rat(-1, 12));
        assert_eq!(table.segments[0].value(&junction), rat(-1, 12));
        assert_eq!(phi_tau(&rat(7, 2), &table).unwrap(), rat(-27, 560));
        assert_eq!(mid_exponent(5, &rat(7, 2)).unwrap(), rat(-1, 20));
        assert!(phi_tau(&int(1), &table).is_err());
        assert!(phi_tau(table.top(), &table).is_err());
    }

    #[test]
    fn structural_checks_pass() {
        let table = PhiTau::default();
        for c in [
            check_continuity(&table),
            check_convexity(&table),
            check_endpoint_values(&table),
            check_mid_below_line(&table),
            check_lines_dominate(&table),
        ] {
            assert!(c.ok, "{c:?}");
        }
    }

    #[test]
    fn report_4980() {
        let r = verify_49_80().unwrap();
        assert!(r.ok(), "{r:?}");
        assert_eq!(r.ratio_at_5, rat(169, 270));
        assert_eq!(r.intervals[1].margin_hi, Rational::zero());
    }

    #[test]
    fn certificate_rejects_a_false_claim() {
        // -1/25 lies above -49/(80 tau^2) = -1/20 at tau = 7/2.
        let c =
            certify_line_below("x", &Rational::zero(), &rat(-1, 25), &rat(7, 2), &int(4)).unwrap();
        assert!(!c.ok);
    }

    #[test]
    fn rich2_examples() {
        let r = rich2_inequality_check(&[0.0, 0.25, 0.5]).unwrap();
        assert!(r.ok && r.endpoint_equality);
        assert!((rich2_margin(0.25) - (0.75f64.powf(1.5) / 2.0 - 0.3125)).abs() < 1e-15);
        assert!(rich2_inequality_check(&[0.7]).is_err());
    }

    #[test]
    fn kappa_examples() {
        assert!(kappa_digits(40).starts_with("0.4918"));
        assert!((kappa() - 0.4918).abs() < 1e-4);
        assert_eq!(tau_star_squared(&rat(1, 2)).unwrap(), rat(147, 40));
        for s in [0.3, 0.5, 0.7, 0.9] {
            assert!(kappa_check(s).unwrap().residual <= 1e-10);
        }
        assert_eq!(theory_exponent(1.0), 0.0);
        assert!((theory_exponent(0.5) - 0.17388).abs() < 1e-5);
        assert!((theory_exponent(0.75) - 0.06148).abs() < 1e-5);
    }

    #[test]
    fn kappa_digits_agree_with_float() {
        let s = kappa_digits(35);
        assert_eq!(s.len(), 37);
        let parsed: f64 = s.parse().unwrap();
        assert!((parsed - kappa()).abs() < 1e-16);
    }

    #[test]
    fn main_sum_examples() {
        let p = zeta_main_sum(0.5, 7.0).unwrap();
        assert_eq!(p.m, 1);
        assert_eq!(p.main_sum_modulus, 1.0);
        let p = zeta_main_sum(0.0, 1e5).unwrap();
        assert!(p.main_sum_modulus <= p.m as f64);
        assert!(zeta_main_sum(0.5, 1e11).is_err());
        assert!(zeta_main_sum(1.5, 1e3).is_err());
    }

    #[test]
    fn empirical_exponent_validates_grid() {
        assert!(empirical_exponent(0.5, &[1e3, 1e4, 1e5]).is_err());
        assert!(empirical_exponent(0.5, &[1e3, 1e4, 2e4, 1e5]).is_err());
        let trend = empirical_exponent(0.5, &[1e4, 1e5, 1e6, 1e7]).unwrap();
        assert_eq!(trend.points.len(), 4);
        assert!(trend.fitted_exponent.is_finite());
    }

    #[test]
    fn battery_passes() {
        for c in verification_battery(DEFAULT_K_MAX).unwrap() {
            assert!(c.ok, "{c:?}");
        }
    }
}

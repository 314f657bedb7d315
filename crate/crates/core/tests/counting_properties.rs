use num::bigint::BigInt;
use num::{One, Signed, Zero};
use proptest::prelude::*;
use vmv_core::corekit::{rat, Rational};
use vmv_core::counting::*;
use vmv_core::expsum::{Family, PhaseFunction};

/// All-pairs count with exact rational residues.
fn exact_count(coeffs: &[Rational], n: u64, orders: &[usize], h: u64) -> u64 {
    let scaled = |j: usize, x: u64| -> Rational {
        coeffs
            .iter()
            .enumerate()
            .skip(j)
            .fold(Rational::zero(), |acc, (i, c)| {
                let mut b = BigInt::one();
                for m in 0..j {
                    b = b * BigInt::from(i - m) / BigInt::from(m + 1);
                }
                acc + c * Rational::from_integer(b * BigInt::from(x).pow((i - j) as u32))
            })
    };
    let half = rat(1, 2);
    let cols: Vec<Vec<Rational>> = orders
        .iter()
        .map(|&j| {
            (1..=n)
                .map(|x| {
                    let v = scaled(j, x);
                    &v - v.floor()
                })
                .collect()
        })
        .collect();
    let mut count = 0;
    for m in 0..n as usize {
        for i in 0..n as usize {
            count += u64::from(orders.iter().zip(&cols).all(|(&j, col)| {
                let d = (&col[m] - &col[i]).abs();
                let d = if d > half { Rational::one() - d } else { d };
                d <= Rational::new(BigInt::from(2), BigInt::from(h).pow(j as u32))
            }));
        }
    }
    count
}

fn poly(coeffs: &[Rational], n: u64) -> PhaseFunction {
    PhaseFunction::polynomial(coeffs.to_vec(), 0, n).unwrap()
}

#[test]
fn zero_phase_counts_every_pair() {
    for n in [1u64, 17, 100, 5000] {
        let spec = CountSpec::new(poly(&[], n), 4, 7).unwrap();
        assert_eq!(count_n(&spec).unwrap(), n * n);
        assert_eq!(count_n1(&spec).unwrap(), n * n);
    }
}

#[test]
fn small_cubic_count_is_between_diagonal_and_all_pairs() {
    // f = x^3 / 10^5: second-order residues stay within 2 H^-2, first-order ones spread.
    let coeffs = [rat(0, 1), rat(0, 1), rat(0, 1), rat(1, 100_000)];
    let spec = CountSpec::auto(poly(&coeffs, 100), 3).unwrap();
    assert_eq!(spec.h, 25);
    let c = count_n(&spec).unwrap();
    assert!((100..100 * 100).contains(&c), "{c}");
    assert_eq!(c, exact_count(&coeffs, 100, &[1, 2], 25));
    // With k = 3 both counts ask the same conditions.
    assert_eq!(count_n1(&spec).unwrap(), c);
}

#[test]
fn counts_match_exact_rational_reference() {
    // (coefficients, N, k, H)
    type Case = (&'static [(i64, i64)], u64, usize, u64);
    let cases: [Case; 4] = [
        (&[(0, 1), (1, 7), (-3, 11), (1, 97)], 60, 3, 5),
        (&[(0, 1), (2, 3), (1, 13), (-1, 101), (1, 997)], 50, 4, 6),
        (
            &[(1, 2), (0, 1), (5, 17), (1, 53), (0, 1), (1, 4001)],
            40,
            5,
            3,
        ),
        (&[(0, 1), (1, 5), (1, 5)], 80, 3, 2),
    ];
    for (c, n, k, h) in cases {
        let coeffs: Vec<Rational> = c.iter().map(|&(a, b)| rat(a, b)).collect();
        let spec = CountSpec::new(poly(&coeffs, n), k, h).unwrap();
        let all: Vec<usize> = (1..k).collect();
        assert_eq!(
            count_n(&spec).unwrap(),
            exact_count(&coeffs, n, &all, h),
            "k={k}"
        );
        assert_eq!(
            count_n1(&spec).unwrap(),
            exact_count(&coeffs, n, &[k - 2, k - 1], h)
        );
    }
}

#[test]
fn bucketed_and_quadratic_strategies_agree() {
    let specs = [
        CountSpec::auto(PhaseFunction::log_phase(1e5, 300, 300).unwrap(), 3).unwrap(),
        CountSpec::new(PhaseFunction::log_phase(3e6, 500, 700).unwrap(), 4, 9).unwrap(),
        CountSpec::new(PhaseFunction::monomial(1e3, 1.5, 0, 900).unwrap(), 5, 4).unwrap(),
        CountSpec::new(PhaseFunction::monomial(0.01, 3.0, 0, 600).unwrap(), 3, 40).unwrap(),
    ];
    for spec in &specs {
        for strategy_n in [count_n_with, count_n1_with] {
            let q = strategy_n(spec, CountStrategy::Quadratic).unwrap();
            let b = strategy_n(spec, CountStrategy::Bucket).unwrap();
            assert_eq!(q, b, "{spec:?}");
        }
    }
}

#[test]
fn quadratic_strategy_refuses_oversized_intervals() {
    let spec = CountSpec::new(poly(&[], QUADRATIC_LIMIT + 1), 3, 2).unwrap();
    assert!(matches!(
        count_n_with(&spec, CountStrategy::Quadratic),
        Err(vmv_core::Error::Size(_))
    ));
}

#[test]
fn fejer_coefficients_are_nonnegative() {
    let kernels = [
        FejerKernel::new(8, 3).unwrap(),
        FejerKernel::new(3, 4).unwrap(),
        FejerKernel::from_widths(0.37, 0.011).unwrap(),
    ];
    for k in &kernels {
        assert_eq!(fejer_coeff(0, 0, k), k.b * k.c);
        for r in -1000..=1000 {
            for s in -1000..=1000 {
                assert!(fejer_coeff(r, s, k) >= 0.0);
            }
        }
    }
}

#[test]
fn fejer_partial_sums_reproduce_the_kernel() {
    let k = FejerKernel::new(8, 3).unwrap();
    let (r, s) = ((50.0 / k.b) as i64, (50.0 / k.c) as i64);
    let mut worst = 0.0f64;
    for i in 0..32 {
        for j in 0..32 {
            let (x, y) = (i as f64 / 32.0, j as f64 / 32.0);
            worst = worst.max((fejer_partial_sum(x, y, &k, r, s) - fejer_phi(x, y, &k)).abs());
        }
    }
    assert!(worst <= 0.05, "{worst}");
}

#[test]
fn fejer_kernel_is_the_tent_product_inside_its_support() {
    let k = FejerKernel::new(10, 3).unwrap();
    for i in -40..=40 {
        for j in -40..=40 {
            let (x, y) = (i as f64 * k.b / 40.0, j as f64 * k.c / 40.0);
            let product = (1.0 - x.abs() / k.b) * (1.0 - y.abs() / k.c);
            assert!((fejer_phi(x, y, &k) - product).abs() <= 1e-15);
        }
    }
}

#[test]
fn log_phase_table_grows_with_length() {
    let rows = n_ratio_report(&Family::LogPhase { t: 1e5 }, 3, &[200, 400, 800]).unwrap();
    assert_eq!(rows.len(), 3);
    for w in rows.windows(2) {
        assert!(w[1].count_n > w[0].count_n, "{rows:?}");
    }
    for r in &rows {
        assert!(r.count_n <= r.count_n1 && r.count_n >= r.n);
        assert!(r.ratio.is_finite() && r.ratio > 0.0);
    }
}

#[test]
fn linear_phase_is_rejected_by_report() {
    assert!(n_ratio_report(&Family::Monomial { y: 0.3, c: 1.0 }, 3, &[100]).is_err());
}

#[test]
fn spacing_count_stays_in_monitored_envelope() {
    for (slope, n, theta) in [
        (0.001, 1000u64, 0.01),
        (0.0137, 2000, 0.05),
        (0.3, 500, 0.2),
    ] {
        let g = PhaseFunction::monomial(slope, 1.0, 0, n).unwrap();
        let (mu, a0) = spacing_derivative_range(&g, n).unwrap();
        let c = spacing_count(&g, n, theta).unwrap() as f64;
        assert!(
            c <= 4.0 * spacing_bound(mu, a0, n as f64, theta),
            "slope={slope}"
        );
    }
}

fn spec_strategy() -> impl proptest::strategy::Strategy<Value = CountSpec> {
    let family = prop_oneof![
        (1e3f64..1e6).prop_map(|t| Family::LogPhase { t }),
        (1e-3f64..10.0, 1.2f64..3.5).prop_map(|(y, c)| Family::Monomial { y, c }),
    ];
    (family, 1u64..400, 1u64..300, 3usize..6, 1u64..30).prop_map(|(fam, start, len, k, h)| {
        CountSpec::new(PhaseFunction::new(fam, start, len).unwrap(), k, h).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn fewer_conditions_never_count_fewer_pairs(spec in spec_strategy()) {
        let n = count_n(&spec).unwrap();
        let n1 = count_n1(&spec).unwrap();
        prop_assert!(n <= n1);
        prop_assert!(n >= spec.n());
        // The predicate is symmetric, so off-diagonal pairs come in twos.
        prop_assert_eq!((n - spec.n()) % 2, 0);
        prop_assert_eq!((n1 - spec.n()) % 2, 0);
    }
}

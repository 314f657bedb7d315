mod oracle;

use num::complex::Complex64;
use proptest::prelude::*;
use vmv_core::corekit::{rat, Rational};
use vmv_core::expsum::*;

fn rel_err(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

#[test]
fn negated_phase_conjugates_the_sum() {
    let fs = [
        PhaseFunction::log_phase(1e6, 1000, 1000).unwrap(),
        PhaseFunction::monomial(12345.678, 1.5, 0, 5000).unwrap(),
        PhaseFunction::monomial(3e7, -0.5, 100, 20000).unwrap(),
        PhaseFunction::polynomial(
            vec![rat(0, 1), rat(1, 3), rat(-2, 7), rat(1, 1001)],
            0,
            4000,
        )
        .unwrap(),
    ];
    for f in &fs {
        let s = raw_sum(f).unwrap();
        let c = raw_sum(&f.negated()).unwrap();
        assert!(rel_err(c, s.conj()) <= 1e-9, "{f:?}: {s} vs {c}");
    }
}

#[test]
fn derivatives_match_central_differences() {
    let coeffs: Vec<Rational> = (0..=10)
        .map(|i| rat(if i % 2 == 0 { 1 } else { -2 }, i + 3))
        .collect();
    let fs = [
        PhaseFunction::monomial(2.5, 0.5, 0, 100).unwrap(),
        PhaseFunction::monomial(1e3, -1.5, 0, 100).unwrap(),
        PhaseFunction::monomial(0.75, 3.25, 0, 100).unwrap(),
        PhaseFunction::log_phase(1e4, 0, 100).unwrap(),
        PhaseFunction::polynomial(coeffs, 0, 100).unwrap(),
    ];
    for f in &fs {
        for j in 1..=8 {
            for i in 0..10 {
                let x = 2.0 + 3.3 * i as f64;
                let h = 1e-4 * x;
                let fd = (f.derivative(j - 1, x + h) - f.derivative(j - 1, x - h)) / (2.0 * h);
                let exact = f.derivative(j, x);
                let err = (fd - exact).abs() / exact.abs();
                assert!(
                    err <= 1e-6,
                    "{} j={j} x={x}: {fd} vs {exact}",
                    f.family_name()
                );
            }
        }
    }
}

#[test]
fn new_bound_overtakes_classical_for_k_at_least_5() {
    for k in 5..=8usize {
        let ratios: Vec<f64> = [1e3, 1e4, 1e5, 1e6]
            .iter()
            .map(|&n: &f64| {
                let bx = DerivativeBox::new(k, n.powf(-(k as f64) + 0.5), 1.0).unwrap();
                hb_bound(n, &bx).unwrap() / vdc_bound(n, &bx).unwrap()
            })
            .collect();
        assert!(ratios.windows(2).all(|w| w[1] < w[0]), "k={k}: {ratios:?}");
    }
}

#[test]
fn monomial_member_satisfies_reduction_sequences() {
    // g' = y x^-s exactly, so g = y x^(1-s) / (1-s); T = y N^(1-s).
    for &(s, n) in &[(0.5, 1000u64), (0.25, 5000), (1.5, 200)] {
        let y = 1e9;
        let g = PhaseFunction::monomial(y / (1.0 - s), 1.0 - s, n, n).unwrap();
        let t = y * (n as f64).powf(1.0 - s);
        let m = family_check_g(&g, n as f64, t, &reduction_sequences(s, 10)).unwrap();
        assert!(m.member, "s={s}: {:?}", m.rows);
        let printed = family_check_g(&g, n as f64, t, &printed_reduction_sequences(s, 10)).unwrap();
        assert!(!printed.member, "s={s}");
    }
}

#[test]
fn log_phase_sum_within_slack_of_classical_bound() {
    let f = PhaseFunction::log_phase(1e6, 1000, 1000).unwrap();
    let r = &compare(&f, &[3]).unwrap()[0];
    assert_eq!(r.a, 8.0);
    assert!(r.ratios["vdc"] <= 10.0, "{r:?}");
    assert!(r.empirical <= 1001.0);
}

#[test]
fn monomial_ratios_stay_flat_across_scales() {
    let ratios: Vec<f64> = [2000u64, 4000, 8000]
        .iter()
        .map(|&n| {
            let f = PhaseFunction::monomial(1e6, 1.5, n, n).unwrap();
            compare(&f, &[3]).unwrap()[0].ratios["hb"]
        })
        .collect();
    let max = ratios.iter().cloned().fold(0.0, f64::max);
    let min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    assert!(max / min <= 10.0, "{ratios:?}");
}

#[test]
fn log_phase_reduction_matches_fixed_point_reference() {
    let f = PhaseFunction::log_phase(1e6, 0, 100_000).unwrap();
    for n in [2u64, 1000, 7919, 65536, 99_991] {
        // f(n) = -t ln n / (2 pi)
        let reference = oracle::frac(&oracle::log_phase(-1_000_000, n)).to_f64();
        let got = f.phase_at(n).unwrap().value();
        let d = (got - reference).abs();
        assert!(
            d.min(1.0 - d) <= 2f64.powi(-40),
            "n={n}: {got} vs {reference}"
        );
    }
}

fn family() -> impl Strategy<Value = PhaseFunction> {
    let start = 0u64..5000;
    let len = 1u64..3000;
    prop_oneof![
        (-1e6f64..1e6, -2.0f64..2.0, start.clone(), len.clone())
            .prop_map(|(y, c, s, l)| PhaseFunction::monomial(y, c, s, l).unwrap()),
        (-1e8f64..1e8, start.clone(), len.clone())
            .prop_map(|(t, s, l)| PhaseFunction::log_phase(t, s, l).unwrap()),
        (
            prop::collection::vec((-50i64..50, 1i64..40), 0..5),
            start,
            len
        )
            .prop_map(|(c, s, l)| {
                let coeffs = c.into_iter().map(|(a, b)| rat(a, b)).collect();
                PhaseFunction::polynomial(coeffs, s, l).unwrap()
            }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sum_modulus_is_at_most_length_plus_one(f in family()) {
        let s = raw_sum(&f).unwrap();
        prop_assert!(s.norm() <= f.len as f64 + 1.0);
    }
}

mod oracle;

use vmv_core::zetabounds::zeta_main_sum;

#[test]
fn oracle_constants_have_known_digits() {
    let pi = oracle::pi().to_f64();
    assert_eq!(pi, std::f64::consts::PI);
    let ln2 = oracle::ln_int(2).to_f64();
    assert_eq!(ln2, std::f64::consts::LN_2);
    let (c, s) = oracle::cos_sin(&oracle::Fixed::ratio(1, 1));
    assert!((c.to_f64() - 1f64.cos()).abs() < 1e-16 && (s.to_f64() - 1f64.sin()).abs() < 1e-16);
}

#[test]
fn half_line_main_sum_matches_fixed_point_reference() {
    let p = zeta_main_sum(0.5, 1e6).unwrap();
    assert_eq!(p.m, 398);
    let reference = oracle::half_line_main_sum_modulus(1_000_000, 398).to_f64();
    let rel = (p.main_sum_modulus - reference).abs() / reference;
    assert!(rel <= 1e-6, "{} vs {reference}", p.main_sum_modulus);
}

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use roughsum::lognorm::{
    big_l_norm_quadrature, big_l_norm_spectral, cross_orthogonality, cross_orthogonality_with,
    holder_interpolation_check, l_norm, log_comparison_check, r_monomial,
    r_monomial_asymptotic_bracket, t_monomial, trig_poly, QuadratureSpec, Scheme,
};
use roughsum::series::CoefficientSeq;

fn delta(n: usize, value: f64) -> CoefficientSeq {
    let mut c = vec![0.0; n + 1];
    c[n] = value;
    CoefficientSeq::from_real(&c).unwrap()
}

fn coeffs(max_degree: usize) -> impl Strategy<Value = CoefficientSeq> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=max_degree + 1).prop_map(|v| {
        CoefficientSeq::new(v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()).unwrap()
    })
}

fn one_d() -> QuadratureSpec {
    QuadratureSpec {
        m: 64,
        ..QuadratureSpec::default()
    }
}

fn grid(m: usize, h: f64) -> QuadratureSpec {
    QuadratureSpec {
        m,
        scheme: Scheme::Midpoint,
        diag_exclusion: h,
        tolerance: 1e-13,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn l_norm_matches_reverse_summation(c in coeffs(60), s in 0.1f64..3.0) {
        let reference: f64 = c
            .as_slice()
            .iter()
            .enumerate()
            .rev()
            .map(|(n, cn)| ((n + 1) as f64).log2().powf(2.0 * s) * (cn.re * cn.re + cn.im * cn.im))
            .sum();
        let got = l_norm(&c, s).unwrap();
        prop_assert!((got - reference).abs() <= 1e-12 * reference.max(1e-300));
    }

    #[test]
    fn holder_interpolation(c in coeffs(60), p in 0.05f64..2.0, gap in 0.05f64..2.0, theta in 0.01f64..0.99) {
        prop_assert!(holder_interpolation_check(&c, p, p + gap, theta).unwrap());
    }

    #[test]
    fn log_comparison(a_excess in 0.1f64..10.0, b in 1.05f64..5.0, s in 0.0f64..3.0, k in 0.5f64..3.0) {
        let cmp = log_comparison_check(|t| t.powf(k - 1.0) * (1.0 + t), b + a_excess, b, s, &one_d()).unwrap();
        prop_assert!(cmp.holds(1e-9));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn spectral_matches_quadrature(c in coeffs(16)) {
        let q = grid(2048, 1e-4);
        let spectral = big_l_norm_spectral(&c, 0.5, &q).unwrap();
        let direct = big_l_norm_quadrature(trig_poly(&c), 0.5, &q).unwrap();
        prop_assert!((spectral - direct.value).abs() <= 0.03 * spectral.max(1e-12));
    }
}

#[test]
fn l_norm_hand_examples() {
    assert_eq!(l_norm(&delta(3, 1.0), 0.5).unwrap(), 2.0);
    assert_eq!(l_norm(&delta(0, 1.0), 0.5).unwrap(), 0.0);
    let zero = CoefficientSeq::from_real(&[0.0; 5]).unwrap();
    assert!(holder_interpolation_check(&zero, 0.5, 1.0, 0.5).unwrap());
    for n in 1..6 {
        let c = delta(n, 0.7);
        let (p, q, th) = (0.5, 1.5, 0.3);
        let lhs = l_norm(&c, (1.0 - th) * p + th * q).unwrap();
        let rhs = l_norm(&c, p).unwrap().powf(1.0 - th) * l_norm(&c, q).unwrap().powf(th);
        assert!((lhs - rhs).abs() < 1e-14 * rhs);
    }
}

#[test]
fn monomial_integral_by_quadrature() {
    let q = grid(2048, 1e-4);
    let t1 = t_monomial(1, 0.5, &one_d()).unwrap();
    let direct = big_l_norm_quadrature(|u| vec![u.cos(), u.sin()], 0.5, &q).unwrap();
    // |e^{iu} - e^{iv}|^2 = 4 sin^2((u-v)/2)
    assert!((direct.value - 4.0 * t1).abs() < 0.01 * 4.0 * t1, "{} vs {}", direct.value, 4.0 * t1);
    assert_eq!(direct.band, 1e-4);

    let constant = big_l_norm_quadrature(|_| vec![2.0, -1.0], 0.5, &q).unwrap();
    assert_eq!(constant.value, 0.0);

    let small = grid(512, 1e-4);
    let once = big_l_norm_quadrature(trig_poly(&delta(3, 1.0)), 0.5, &small).unwrap().value;
    let twice = big_l_norm_quadrature(trig_poly(&delta(3, 2.0)), 0.5, &small).unwrap().value;
    assert!((twice - 4.0 * once).abs() < 1e-10 * twice);

    let zero = CoefficientSeq::from_real(&[0.0; 4]).unwrap();
    assert_eq!(big_l_norm_spectral(&zero, 0.5, &one_d()).unwrap(), 0.0);
    let single = big_l_norm_spectral(&delta(5, 1.0), 0.5, &one_d()).unwrap();
    assert!((single - 4.0 * t_monomial(5, 0.5, &one_d()).unwrap()).abs() < 1e-12 * single);
}

#[test]
fn monomial_bracket_and_monotonicity() {
    let q = one_d();
    assert_eq!(t_monomial(0, 0.5, &q).unwrap(), 0.0);
    assert_eq!(r_monomial(0, 0.5, &q).unwrap(), 0.0);
    let t4 = t_monomial(4, 0.5, &q).unwrap();
    let r4 = r_monomial(4, 0.5, &q).unwrap();
    assert!(4.0 * PI * r4 <= t4 && t4 <= 8.0 * PI * PI * r4);
    for s in [0.5, 1.0, 2.0] {
        let upper = 8.0 * PI * PI * PI.log2().powf(2.0 * s - 1.0);
        let mut prev = 0.0;
        for n in 1..=64 {
            let t = t_monomial(n, s, &q).unwrap();
            let r = r_monomial(n, s, &q).unwrap();
            assert!(t.is_finite() && r > prev, "n = {n}, s = {s}");
            assert!(4.0 * PI * r <= t * 1.02 && t <= upper * r * 1.02, "n = {n}, s = {s}");
            prev = r;
        }
    }
    let (lo, hi) = r_monomial_asymptotic_bracket(0.5);
    assert!((lo - 2f64.ln() / 16.0).abs() < 1e-15);
    assert!((hi - (2f64.ln() + 2f64.ln() / 16.0)).abs() < 1e-15);
}

#[test]
fn distinct_monomials_are_orthogonal() {
    let q = grid(2048, 0.0);
    for (m, n) in [(1, 2), (3, 7), (10, 4)] {
        let scale = (t_monomial(m, 0.5, &one_d()).unwrap() * t_monomial(n, 0.5, &one_d()).unwrap()).sqrt();
        assert!(cross_orthogonality(m, n, 0.5, &q).unwrap().abs() < 1e-4 * scale);
        assert!(cross_orthogonality(m, n, 1.5, &q).unwrap().abs() < 1e-4 * scale);
        // constant kernel: the plain L² inner product
        assert!(cross_orthogonality_with(m, n, |_| 1.0, &q).unwrap().abs() < 1e-9);
    }
    let pair = CoefficientSeq::from_real(&[0.0, 1.0, 0.0, 0.5]).unwrap();
    let spec = grid(2048, 0.0);
    let spectral = big_l_norm_spectral(&pair, 0.5, &one_d()).unwrap();
    let direct = big_l_norm_quadrature(trig_poly(&pair), 0.5, &spec).unwrap().value;
    assert!((spectral - direct).abs() < 0.03 * spectral);
    assert!(cross_orthogonality(2, 2, 0.5, &q).is_err());
}

#[test]
fn quadrature_spec_is_validated() {
    let bad_m = grid(8, 1e-4);
    assert!(t_monomial(1, 0.5, &bad_m).is_err());
    let bad_h = grid(2048, 1.0);
    assert!(big_l_norm_quadrature(|_| vec![0.0], 0.5, &bad_h).is_err());
    assert!(l_norm(&delta(1, 1.0), -1.0).is_err());
}

use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use proptest::prelude::*;
use rmdirac::model::{PhysicalContext, PotentialParams, QuantumNumbers};
use rmdirac::pekeris::matched_coeffs;
use rmdirac::specfun::{hyp2f1, hyp3f2_unit, jacobi_p, ln_gamma, pochhammer};
use rmdirac::spectra::{apply_case_map, find_roots, CaseMap, EnergyResidualSpec, SearchWindow};

fn q(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn qf(x: &BigRational) -> f64 {
    x.to_f64().unwrap()
}

/// Exact terminating `pFq` sum: `upper[0] = -m`.
fn exact_series(upper: &[BigRational], lower: &[BigRational], z: &BigRational, m: u32) -> BigRational {
    let mut term = BigRational::one();
    let mut sum = BigRational::one();
    for k in 0..m {
        let kq = BigRational::from_integer(BigInt::from(k));
        for a in upper {
            term *= a + &kq;
        }
        for b in lower {
            term /= b + &kq;
        }
        term *= z;
        term /= &kq + BigRational::one();
        sum += &term;
    }
    sum
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn jacobi_reflection(n in 0u32..12, a in -0.9f64..5.0, b in -0.9f64..5.0, x in -1.0f64..1.0) {
        let p = jacobi_p(n, a, b, -x).unwrap();
        let r = jacobi_p(n, b, a, x).unwrap();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((p - sign * r).abs() <= 1e-12 * p.abs().max(1.0));
    }

    #[test]
    fn jacobi_hypergeometric_form(n in 0u32..10, a in -0.9f64..4.0, b in -0.9f64..4.0, x in -1.0f64..1.0) {
        let nf = n as f64;
        let fact: f64 = (1..=n).map(f64::from).product();
        let via = pochhammer(a + 1.0, n) / fact * hyp2f1(-nf, nf + a + b + 1.0, a + 1.0, 0.5 * (1.0 - x)).unwrap();
        let direct = jacobi_p(n, a, b, x).unwrap();
        prop_assert!((via - direct).abs() <= 1e-11 * direct.abs().max(1.0));
    }

    #[test]
    fn pochhammer_matches_gamma_ratio(x in 0.1f64..20.0, m in 0u32..12) {
        let exact = (ln_gamma(x + m as f64).unwrap() - ln_gamma(x).unwrap()).exp();
        prop_assert!((pochhammer(x, m) - exact).abs() <= 1e-12 * exact);
    }

    #[test]
    fn hyp2f1_derivative(a in -3.0f64..3.0, b in -3.0f64..3.0, c in 0.5f64..4.0, z in -0.5f64..0.5) {
        let h = 1e-5;
        let f = |t: f64| hyp2f1(a, b, c, t).unwrap();
        let fd = (f(z + h) - f(z - h)) / (2.0 * h);
        let exact = a * b / c * hyp2f1(a + 1.0, b + 1.0, c + 1.0, z).unwrap();
        prop_assert!((fd - exact).abs() <= 1e-7 * exact.abs().max(1.0));
    }

    #[test]
    fn terminating_hyp2f1_matches_rationals(m in 0u32..16, b8 in -40i64..40, c8 in 1i64..40, z16 in -15i64..16) {
        let (b, c, z) = (q(b8, 8), q(c8, 8), q(z16, 16));
        let exact = qf(&exact_series(&[q(-(m as i64), 1), b.clone()], &[c.clone()], &z, m));
        let got = hyp2f1(-(m as f64), qf(&b), qf(&c), qf(&z)).unwrap();
        prop_assert!((got - exact).abs() <= 1e-12 * exact.abs().max(1.0), "{got} vs {exact}");
    }

    #[test]
    fn terminating_hyp3f2_matches_rationals(
        m in 0u32..10, a2 in -20i64..40, a3 in -20i64..40, b1 in 1i64..40, b2 in 1i64..40,
    ) {
        let up = [q(-(m as i64), 1), q(a2, 4), q(a3, 4)];
        let lo = [q(b1, 4), q(b2, 4)];
        let exact = exact_series(&up, &lo, &BigRational::one(), m);
        let got = hyp3f2_unit(-(m as f64), qf(&up[1]), qf(&up[2]), qf(&lo[0]), qf(&lo[1])).unwrap();
        let scale = qf(&exact).abs().max(1.0);
        prop_assert!(exact.is_zero() || (got - qf(&exact)).abs() <= 1e-12 * scale, "{got} vs {exact}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn pseudospin_map_is_an_involution_and_mirrors_roots(
        v1 in 0.2f64..4.0, v2 in -4.5f64..3.0, alpha in 0.2f64..1.0, cs in -0.5f64..0.5,
        kappa in prop::sample::select(vec![-3, -2, -1, 1, 2, 3]), n in 0u32..3,
    ) {
        let p = PotentialParams::new(v1, v2, alpha, 1.0 / alpha).unwrap();
        let ctx = PhysicalContext::spin(5.0, 1.0, cs).unwrap();
        let spin = EnergyResidualSpec::general(p, ctx, QuantumNumbers::new(n, kappa).unwrap(), matched_coeffs(alpha, p.r_e).unwrap());
        let pseudo = apply_case_map(&spin, CaseMap::SpinToPseudospin);
        prop_assert_eq!(apply_case_map(&pseudo, CaseMap::SpinToPseudospin), spin);
        let a: Vec<f64> = find_roots(&spin, &SearchWindow::default_for(&spin).unwrap()).unwrap().iter().map(|r| r.energy).collect();
        let mut b: Vec<f64> = find_roots(&pseudo, &SearchWindow::default_for(&pseudo).unwrap()).unwrap().iter().map(|r| -r.energy).collect();
        b.sort_by(f64::total_cmp);
        prop_assert_eq!(a.len(), b.len());
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-10 * 5.0);
        }
    }
}

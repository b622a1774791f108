mod common;

use bekenstein_core::formcalc::*;
use bekenstein_core::linalg::{c, cr, cvec, op_norm};
use bekenstein_core::{sample, CMat, Error};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn quad_form_examples() {
    let xi = cvec(&[cr(0.6), cr(0.8)]);
    let v = quad_form(&xi, &HermitianOperator::diagonal(&[2.0, 3.0])).unwrap();
    let direct = xi.dotc(&(HermitianOperator::diagonal(&[2.0, 3.0]).matrix() * &xi)).re;
    assert!((v.finite().unwrap() - direct).abs() < 1e-15);
    assert!((direct - (0.36 * 2.0 + 0.64 * 3.0)).abs() < 1e-15);
}

#[test]
fn quad_form_log_examples() {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let xi = cvec(&[cr(h), cr(h)]);
    let v = quad_form_log(&xi, &HermitianOperator::diagonal(&[2.0, 0.5])).unwrap().finite().unwrap();
    assert!(v.abs() < 1e-15);
}

#[test]
fn spectral_reconstruction() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in 1..=8 {
        let a = sample::positive_definite(n, 0.1, &mut rng);
        let sd = a.spectral();
        let v = &sd.eigenvectors;
        let lam = CMat::from_diagonal(&sd.eigenvalues.map(cr));
        let err = op_norm(&(a.matrix() - v * lam * v.adjoint()));
        assert!(err <= 1e-10 * a.norm());
        assert_eq!(sd.support_rank, n);
        assert!(sd.eigenvalues.as_slice().windows(2).all(|w| w[0] <= w[1]));
    }
    let sd = HermitianOperator::diagonal(&[0.0, 1.0, 2.0]).spectral();
    assert_eq!(sd.support_rank, 2);
}

#[test]
#[allow(clippy::approx_constant)] // tabulated six-digit value, not the constant
fn kernel_identity_on_log_grid() {
    for k in 0..50 {
        let lambda = 0.1f64 * 100f64.powf(k as f64 / 49.0);
        let q = kernel_integral(lambda).unwrap();
        assert!((q.value - lambda.ln()).abs() <= 1e-8, "λ = {lambda}: {} vs {}", q.value, lambda.ln());
    }
    let q = kernel_integral(2.0).unwrap();
    assert!((q.value - 0.693147).abs() < 1e-6);
}

#[test]
fn kernel_matches_defining_expression() {
    for &lambda in &[0.01, 0.3, 0.999, 1.5, 40.0] {
        for &t in &[1e-3, 0.2, 1.0, 7.0, 300.0] {
            let literal = -(1.0 / (t + 1.0) - lambda / (t + lambda)) / t;
            // The literal difference loses about eps / t in absolute terms.
            let rounding = 4.0 * f64::EPSILON / t;
            let v = log_kernel(lambda, t).unwrap();
            assert!((v - literal).abs() <= 1e-12 * literal.abs() + rounding, "{lambda} {t}");
        }
    }
}

#[test]
fn kernel_sign_and_monotonicity_grid() {
    let lambdas: Vec<f64> = (0..41).map(|k| 0.05 * 400f64.powf(k as f64 / 40.0)).collect();
    let ts: Vec<f64> = (0..31).map(|k| 1e-4 * 1e8f64.powf(k as f64 / 30.0)).collect();
    for &t in &ts {
        let mut prev = f64::NEG_INFINITY;
        for &l in &lambdas {
            let f = log_kernel(l, t).unwrap();
            if l < 1.0 {
                assert!(f < 0.0);
            } else if l > 1.0 {
                assert!(f > 0.0);
            }
            assert!(f >= prev, "kernel not monotone in λ at t = {t}");
            prev = f;
        }
    }
}

#[test]
fn log_via_kernel_examples() {
    let a = HermitianOperator::diagonal(&[1.0, 5.0]);
    let v = log_via_kernel(&cvec(&[cr(1.0), cr(0.0)]), &a).unwrap();
    assert!(v.abs() < 1e-10);
    let v = log_via_kernel(&cvec(&[cr(0.0), cr(1.0)]), &a).unwrap();
    assert!((v - 5f64.ln()).abs() < 1e-9);
}

#[test]
fn log_via_kernel_on_singular_operator() {
    let a = HermitianOperator::diagonal(&[0.0, 3.0]);
    let v = log_via_kernel(&cvec(&[cr(0.0), c(0.0, 1.0)]), &a).unwrap();
    assert!((v - 3f64.ln()).abs() < 1e-9);
    let err = log_via_kernel(&cvec(&[cr(1.0), cr(1.0)]), &a).unwrap_err();
    assert!(matches!(err, Error::Precondition(_)));
}

#[test]
fn log_limit_examples() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let xi = sample::unit_vector(3, &mut rng);
    assert!(log_limit(&xi, &HermitianOperator::identity(3)).unwrap().abs() < 1e-12);
    let xi = sample::unit_vector(2, &mut rng);
    let v = log_limit(&xi, &HermitianOperator::diagonal(&[4.0, 4.0])).unwrap();
    assert!((v - 4f64.ln()).abs() < 1e-9);
}

#[test]
fn form_order_examples() {
    let id = HermitianOperator::identity(2);
    let two = HermitianOperator::diagonal(&[2.0, 2.0]);
    assert!(form_order_leq(&id, &two).unwrap());
    assert!(!form_order_leq(&HermitianOperator::diagonal(&[1.0, 3.0]), &two).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..50 {
        let (a, b) = sample::loewner_pair(5, &mut rng);
        assert!(form_order_leq(&a, &b).unwrap());
    }
}

#[test]
fn log_monotone_examples() {
    let r = check_log_monotone(&HermitianOperator::diagonal(&[1.0, 2.0]), &HermitianOperator::diagonal(&[2.0, 4.0]))
        .unwrap();
    assert!((r.margin - 2f64.ln()).abs() < 1e-12);
    let r = check_log_monotone(&HermitianOperator::identity(3), &HermitianOperator::identity(3)).unwrap();
    assert!(r.margin.abs() < 1e-12 && r.holds);
    assert!((r.witness.norm() - 1.0).abs() < 1e-12);
}

#[test]
fn loewner_property_randomized() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for i in 0..500 {
        let n = 1 + i % 8;
        let (a, b) = sample::loewner_pair(n, &mut rng);
        let r = check_log_monotone(&a, &b).unwrap().into_result().unwrap();
        assert!(r.margin >= -1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn three_way_log_agreement(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = sample::positive_definite(n, 0.05, &mut rng);
        let xi = sample::unit_vector(n, &mut rng);
        let spectral = quad_form_log(&xi, &a).unwrap().finite().unwrap();
        let kernel = log_via_kernel(&xi, &a).unwrap();
        let limit = log_limit(&xi, &a).unwrap();
        let oracle = common::oracle_log_form(&xi, a.matrix());
        prop_assert!((spectral - oracle).abs() <= 1e-8, "spectral {} oracle {}", spectral, oracle);
        prop_assert!((kernel - spectral).abs() <= 1e-8, "kernel {} spectral {}", kernel, spectral);
        prop_assert!((limit - spectral).abs() <= 1e-6, "limit {} spectral {}", limit, spectral);
        prop_assert!((limit - kernel).abs() <= 1e-6);
    }

    #[test]
    fn quad_form_matches_inner_product(seed in any::<u64>(), n in 1usize..=8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = sample::gaussian_matrix(n, n, &mut rng);
        let h = HermitianOperator::new(&x + x.adjoint()).unwrap();
        let xi = sample::gaussian_vector(n, &mut rng);
        let v = quad_form(&xi, &h).unwrap().finite().unwrap();
        let direct = xi.dotc(&(h.matrix() * &xi)).re;
        prop_assert!((v - direct).abs() <= 1e-10 * (1.0 + direct.abs()) * h.norm());
    }

    #[test]
    fn log_form_is_minus_infinity_off_support(seed in any::<u64>(), n in 2usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = sample::positive_semidefinite(n, n - 1, &mut rng);
        let xi = sample::unit_vector(n, &mut rng);
        prop_assert_eq!(quad_form_log(&xi, &a).unwrap(), ExtendedReal::MinusInfinity);
        let q = a.support_basis();
        let inside = &q * sample::gaussian_vector(q.ncols(), &mut rng);
        prop_assert!(quad_form_log(&inside, &a).unwrap().is_finite());
    }

    #[test]
    fn ordering_is_reflexive_and_respects_gaps(seed in any::<u64>(), n in 1usize..=6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (a, b) = sample::loewner_pair(n, &mut rng);
        prop_assert!(form_order_leq(&a, &a).unwrap());
        prop_assert!(form_order_leq(&a, &b).unwrap());
        let shifted = HermitianOperator::new(b.matrix() + CMat::identity(n, n)).unwrap();
        prop_assert!(!form_order_leq(&shifted, &a).unwrap());
    }
}

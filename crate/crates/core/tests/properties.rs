//! Randomized structural properties of the public API.

use halfspec_core::entire::{eval_c, eval_s};
use halfspec_core::forms::build_i;
use halfspec_core::monodromy::{coxeter, preserves_intersection, word_order, WordOrder};
use halfspec_core::quiver::{build_quiver, Family};
use halfspec_core::spectra::{coxeter_number, eigenvalues_only, lambda_to_theta, theta_to_lambda};
use halfspec_core::Cplx;
use proptest::prelude::*;

fn family() -> impl Strategy<Value = Family> {
    prop_oneof![Just(Family::A), Just(Family::D)]
}

fn min_size(f: Family) -> usize {
    match f {
        Family::A => 1,
        Family::D => 4,
    }
}

proptest! {
    #[test]
    fn functional_identity_at_random_complex_arguments(
        re in -30.0..30.0f64,
        im in -30.0..30.0f64,
    ) {
        let x = Cplx::new(re, im);
        let sv = eval_s(x).unwrap();
        let cv = eval_c(x).unwrap();
        let lhs = x * sv * sv + cv * cv;
        let scale = 1.0 + (x * sv * sv).norm() + (cv * cv).norm();
        prop_assert!((lhs - Cplx::new(1.0, 0.0)).norm() <= 1e-11 * scale);
    }

    #[test]
    fn theta_lambda_roundtrip(theta in 1e-6..0.999999f64) {
        let lam = theta_to_lambda(theta);
        prop_assert!(0.0 < lam && lam < 4.0);
        prop_assert!((lambda_to_theta(lam) - theta).abs() <= 1e-12);
    }

    #[test]
    fn truncation_is_coherent(f in family(), size in 4usize..60, cut in 0usize..60) {
        let big = build_quiver(f, size).unwrap();
        let l = min_size(f) + cut % (size - min_size(f) + 1);
        prop_assert!(l <= size);
        let small = build_quiver(f, l).unwrap();
        prop_assert_eq!(big.truncate(l), small);
    }

    #[test]
    fn intersection_is_periodic_and_has_parity(
        f in family(),
        size in 4usize..30,
        d in 1u32..12,
    ) {
        let q = build_quiver(f, size).unwrap();
        let i_d = build_i(&q, d).matrix;
        prop_assert_eq!(&i_d, &build_i(&q, d + 4).matrix);
        if d % 2 == 0 {
            prop_assert_eq!(i_d.transpose(), i_d);
        } else {
            prop_assert_eq!(i_d.transpose(), i_d.neg());
        }
    }

    #[test]
    fn coxeter_shifts_and_preserves(f in family(), size in 4usize..20, d in 1u32..6) {
        let q = build_quiver(f, size).unwrap();
        let cox = coxeter(&q, d).unwrap();
        prop_assert_eq!(coxeter(&q, d + 1).unwrap().matrix, cox.matrix.neg());
        prop_assert!(preserves_intersection(&cox, d));
    }

    #[test]
    fn word_order_matches_coxeter_number(
        f in family(),
        size in 4usize..15,
        even_d in prop_oneof![Just(2u32), Just(4u32)],
    ) {
        let q = build_quiver(f, size).unwrap();
        let h = coxeter_number(f, size).unwrap();
        prop_assert_eq!(
            word_order(&q, even_d, 10 * size).unwrap(),
            WordOrder::Finite(h)
        );
    }

    #[test]
    fn truncated_spectrum_stays_in_the_open_interval(f in family(), size in 4usize..40) {
        let q = build_quiver(f, size).unwrap();
        let lams = eigenvalues_only(&q);
        prop_assert_eq!(lams.len(), size);
        for w in lams.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
        prop_assert!(lams[0] > 0.0 && lams[size - 1] < 4.0);
    }
}

use num_bigint::BigInt;
use proptest::prelude::*;

use voldet::bounds::{
    det_lb_burton, det_lb_fibonacci, det_lb_ito, det_lb_ito_expanded, det_lb_stoimenow,
    threshold_burton, threshold_thm1, vol_ub_lat, vol_ub_stoimenow_eqn5, vol_ub_thm3, vol_ub_ve,
    voldet_rhs, FibonacciVariant,
};
use voldet::numerics::{cached_constants, fibonacci};

#[test]
fn thm3_at_the_fibonacci_floor_sits_just_above_ve() {
    // with det = F_(t+3) the arborescent bound collapses to 10 v_tet (t - 1.4)
    // up to a Binet error term that vanishes as t grows
    let ctx = cached_constants(40).unwrap();
    for t in 9..=200u64 {
        let det = fibonacci(t as u32 + 3);
        let thm3 = vol_ub_thm3(&det, FibonacciVariant::Standard, &ctx).unwrap();
        let ve = vol_ub_ve(t, &ctx).unwrap();
        let gap = (&thm3 - &ve).to_f64();
        assert!((0.0..1e-3).contains(&gap), "t = {t}: gap {gap}");
    }
}

#[test]
fn thm3_improves_on_eqn5() {
    let ctx = cached_constants(30).unwrap();
    for det in [55u64, 89, 117, 1000, 10_007, 1_000_000, 123_456_789] {
        let det = BigInt::from(det);
        let thm3 = vol_ub_thm3(&det, FibonacciVariant::Standard, &ctx).unwrap();
        let eqn5 = vol_ub_stoimenow_eqn5(&det, &ctx).unwrap();
        assert!(thm3 < eqn5, "det {det}");
    }
}

#[test]
fn weakened_variant_is_weaker() {
    let ctx = cached_constants(30).unwrap();
    for t in 1..=60u64 {
        assert!(
            det_lb_fibonacci(t, FibonacciVariant::Borromean817).unwrap()
                < det_lb_fibonacci(t, FibonacciVariant::Standard).unwrap()
        );
    }
    for det in [34u64, 1000, 99_991] {
        let det = BigInt::from(det);
        assert!(
            vol_ub_thm3(&det, FibonacciVariant::Standard, &ctx).unwrap()
                < vol_ub_thm3(&det, FibonacciVariant::Borromean817, &ctx).unwrap()
        );
    }
}

#[test]
fn thresholds_grow_and_thm1_is_lower() {
    let ctx = cached_constants(30).unwrap();
    let mut prev = None;
    for t in 9..=30u64 {
        let b = threshold_burton(t, &ctx).unwrap();
        let a = threshold_thm1(t, &ctx).unwrap();
        assert!(a.value < b.value, "t = {t}");
        if let Some(p) = prev {
            assert!(b.value > p);
        }
        prev = Some(b.value.clone());
    }
}

#[test]
fn lat_is_weaker_than_ve() {
    let ctx = cached_constants(30).unwrap();
    assert!(vol_ub_ve(8, &ctx).is_err());
    for t in 9..=100u64 {
        assert!(vol_ub_ve(t, &ctx).unwrap() < vol_ub_lat(t, &ctx).unwrap());
    }
}

#[test]
fn out_of_domain_inputs_are_rejected() {
    let ctx = cached_constants(20).unwrap();
    assert!(det_lb_fibonacci(0, FibonacciVariant::Standard).is_err());
    assert!(voldet_rhs(&BigInt::from(1), &ctx).is_err());
    assert!(vol_ub_thm3(&BigInt::from(0), FibonacciVariant::Standard, &ctx).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn det_lower_bounds_are_ordered(t in 2u64..40, extra in 0u64..200) {
        let ctx = cached_constants(30).unwrap();
        let c = t + extra;
        let stoimenow = det_lb_stoimenow(t, &ctx).unwrap();
        let burton = det_lb_burton(t, c, &ctx).unwrap();
        let ito = det_lb_ito(t, c, &ctx).unwrap();
        let expanded = det_lb_ito_expanded(t, c, &ctx).unwrap();
        prop_assert!(stoimenow <= burton);
        prop_assert!((&ito - &expanded).abs().to_f64() < 1e-20 * ito.to_f64().abs().max(1.0));
        // strict improvement once the diagram has more crossings than twists
        if c > t {
            prop_assert!(burton < ito);
        }
    }

    #[test]
    fn voldet_rhs_is_monotone(a in 2u64..1_000_000, b in 2u64..1_000_000) {
        prop_assume!(a < b);
        let ctx = cached_constants(30).unwrap();
        prop_assert!(
            voldet_rhs(&BigInt::from(a), &ctx).unwrap() < voldet_rhs(&BigInt::from(b), &ctx).unwrap()
        );
    }
}

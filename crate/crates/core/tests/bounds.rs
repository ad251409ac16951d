use proptest::prelude::*;

use sdiff_dbi::bounds::{
    bound_constant, optimize_bound, sharpness, taylor_coefficients, BoundWeights, EigenvalueTriple,
};

/// `C_N = min_t Σ 3^k c_k t^{k−3/2}`, the dual of the weighted AM-GM
/// problem, by a dense scan and golden refinement in `ln t`.
fn dual_constant(order: usize) -> f64 {
    let c = taylor_coefficients(order);
    let f = |s: f64| -> f64 {
        let t = s.exp();
        c.iter().enumerate().map(|(i, ck)| 3f64.powi(i as i32 + 1) * ck * t.powf(i as f64 + 1.0 - 1.5)).sum()
    };
    let (mut best, mut at) = (f64::INFINITY, 0.0);
    for i in 0..=4000 {
        let s = -6.0 + 12.0 * i as f64 / 4000.0;
        if f(s) < best {
            best = f(s);
            at = s;
        }
    }
    let (mut lo, mut hi) = (at - 0.01, at + 0.01);
    for _ in 0..200 {
        let (a, b) = (lo + (hi - lo) * 0.382, lo + (hi - lo) * 0.618);
        if f(a) < f(b) {
            hi = b;
        } else {
            lo = a;
        }
    }
    f(0.5 * (lo + hi))
}

#[test]
fn optimized_constants_match_the_dual() {
    for order in 2..=8 {
        let c = optimize_bound(order, 1.0).unwrap().constant;
        let d = dual_constant(order);
        assert!((c / d - 1.0).abs() < 1e-8, "N = {order}: {c} vs dual {d}");
    }
}

#[test]
fn constants_increase_with_order() {
    let cs: Vec<f64> = (2..=8).map(|n| optimize_bound(n, 1.0).unwrap().constant).collect();
    assert!(cs.windows(2).all(|w| w[1] > w[0]), "{cs:?}");
    assert!(cs.iter().all(|&c| c < 4.0));
}

#[test]
fn taylor_tail_has_closed_form() {
    let c = taylor_coefficients(30);
    let mut tail = 1.0;
    for (i, ck) in c.iter().enumerate() {
        tail -= ck;
        let n = i as u32 + 1;
        // 1 − Σ_{k≤n} c_k = C(2n, n)/4ⁿ
        let central = (1..=n).fold(1.0, |acc, j| acc * f64::from(n + j) / f64::from(j)) / 4f64.powi(n as i32);
        assert!((tail - central).abs() < 1e-14, "n = {n}");
    }
}

proptest! {
    #[test]
    fn certified_bound_holds_pointwise(
        order in 2usize..=8,
        l1 in -7.0f64..7.0, l2 in -7.0f64..7.0, l3 in -7.0f64..7.0,
    ) {
        let cert = optimize_bound(order, 1.0).unwrap();
        let t = EigenvalueTriple::new(l1.exp(), l2.exp(), l3.exp()).unwrap();
        let e = t.truncated_energy(order, 1.0);
        prop_assert!(cert.slack(&t) >= -1e-12 * e.max(1.0), "slack {}", cert.slack(&t));
    }

    #[test]
    fn feasible_weights_never_beat_the_optimum(alpha in 0.5f64..0.75) {
        let c = bound_constant(3, &BoundWeights::Alpha(alpha)).unwrap();
        prop_assert!(c <= 3.5 + 1e-12);
    }

    #[test]
    fn bound_scales_with_beta(beta in 0.1f64..10.0) {
        let a = optimize_bound(3, 1.0).unwrap();
        let b = optimize_bound(3, beta).unwrap();
        prop_assert!((a.constant - b.constant).abs() < 1e-12);
        let t = EigenvalueTriple::new(0.3 * beta, 0.7 * beta, 1.1 * beta).unwrap();
        prop_assert!(b.slack(&t) >= -1e-12);
    }
}

#[test]
fn sharpness_meets_the_constant() {
    for order in [3, 5, 8] {
        let cert = optimize_bound(order, 1.0).unwrap();
        let s = sharpness(&cert);
        assert!((s.minimum / cert.constant - 1.0).abs() < 1e-6, "N = {order}");
    }
}

#[test]
fn infeasible_weights_are_rejected() {
    assert!(bound_constant(3, &BoundWeights::Alpha(0.8)).is_err());
    assert!(bound_constant(3, &BoundWeights::Weights(vec![0.5, 0.5, 0.5])).is_err());
    assert!(optimize_bound(1, 1.0).is_err());
    assert!(EigenvalueTriple::new(-1.0, 1.0, 1.0).is_err());
}

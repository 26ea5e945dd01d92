//! Property tests for the cross-module invariants: linearity of the
//! quadrature, the Bernstein direction of the monotonicity probe, and
//! closure of the divisibility criterion under products of transforms.

use proptest::prelude::*;

use xilab::divisibility::{id_criterion_check, kristiansen_lt, DiscreteMixture};
use xilab::numerics::{cm_test, find_roots_bracketed, integrate_half_line_real};
use xilab::{NumericConfig, Real};

fn cfg() -> NumericConfig<Real> {
    NumericConfig::default()
}

/// Damped polynomial used as a generic integrable test function.
fn damped(c0: Real, c1: Real, c2: Real) -> impl Fn(Real) -> Real {
    move |u| (c0 + c1 * u + c2 * u * u) * (-u).exp()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn quadrature_is_linear(
        a0 in -2.0..2.0f64, a1 in -2.0..2.0f64, a2 in -2.0..2.0f64,
        b0 in -2.0..2.0f64, b1 in -2.0..2.0f64, b2 in -2.0..2.0f64,
        alpha in -2.0..2.0f64, beta in -2.0..2.0f64,
    ) {
        let c = cfg();
        let f = damped(a0, a1, a2);
        let g = damped(b0, b1, b2);
        let combined = integrate_half_line_real(
            |u| alpha * f(u) + beta * g(u),
            1.0,
            &c,
        ).unwrap();
        let f_only = integrate_half_line_real(&f, 1.0, &c).unwrap();
        let g_only = integrate_half_line_real(&g, 1.0, &c).unwrap();
        let separate = alpha * f_only.value.re + beta * g_only.value.re;
        prop_assert!((combined.value.re - separate).abs() <= 10.0 * c.abs_tol);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Laplace transforms of sampled nonnegative discrete measures pass
    /// the probe at every order: the testable direction of Bernstein's
    /// characterization.
    #[test]
    fn discrete_measure_transforms_are_cm(
        atoms in prop::collection::vec((0.0..4.0f64, 0.01..1.0f64), 1..6),
    ) {
        let c = cfg();
        let f = |s: Real| -> Real {
            atoms.iter().map(|&(x, w)| w * (-s * x).exp()).sum()
        };
        let report = cm_test(f, &[0.5, 1.1, 2.2], &c).unwrap();
        prop_assert!(report.passed, "violations: {}", report.violation_count);
    }

    /// Products of two Gamma(2)-mixture transforms stay accepted by the
    /// divisibility criterion (convolution closure).
    #[test]
    fn products_of_mixture_transforms_stay_divisible(
        first in prop::collection::vec((0.0..4.0f64, 0.01..1.0f64), 1..5),
        second in prop::collection::vec((0.0..4.0f64, 0.01..1.0f64), 1..5),
    ) {
        let c = cfg();
        let lhs = DiscreteMixture::new_normalized(first).unwrap();
        let rhs = DiscreteMixture::new_normalized(second).unwrap();
        let product = |s: Real| -> Real {
            kristiansen_lt(&lhs, s).unwrap() * kristiansen_lt(&rhs, s).unwrap()
        };
        let report = id_criterion_check(product, &[0.5, 1.0, 2.0], &c).unwrap();
        prop_assert!(report.passed, "violations: {}", report.violation_count);
    }

    /// Every root the scanner reports is an actual near-zero of f.
    #[test]
    fn reported_roots_have_small_residual(
        r1 in 0.2..1.4f64,
        gap in 0.35..1.2f64,
    ) {
        let c = cfg();
        let r2 = r1 + gap;
        let f = move |t: Real| (t - r1) * (t - r2) * (0.3 * t).cos();
        let roots = find_roots_bracketed(f, 0.0, 3.0, 0.11, &c).unwrap();
        for root in &roots {
            prop_assert!(f(root.root).abs() < 10.0 * c.abs_tol);
        }
    }
}

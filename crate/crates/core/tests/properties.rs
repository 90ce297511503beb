//! Property-based invariants across the crate: algebraic identities of the
//! spectral constants, hypergeometric inequalities, kernel symmetries and
//! the comparison-lemma threshold monotonicity.

use epdt_core::extreal::ExtReal;
use epdt_core::kernel::{kernel_e, kernel_e_original, kernel_e_transformed, KernelPoint};
use epdt_core::model::{
    amplitude, amplitude_inv, characteristic_roots, delta, delta_invariance_check, phi_ell,
    strauss_exponent, strauss_exponent_shifted, ModelParams,
};
use epdt_core::special::gauss_2f1_val;
use proptest::prelude::*;

/// (μ, ν²) pairs inside the admissible regime δ ≥ 0.
fn admissible_mu_nu2() -> impl Strategy<Value = (f64, f64)> {
    (0.0f64..6.0).prop_flat_map(|mu| {
        let cap = (mu - 1.0) * (mu - 1.0) / 4.0;
        (Just(mu), 0.0f64..=cap.max(1e-12))
    })
}

proptest! {
    #[test]
    fn roots_recombine((mu, nu2) in admissible_mu_nu2()) {
        let (r1, r2) = characteristic_roots(mu, nu2).unwrap();
        prop_assert!(r1 >= r2);
        prop_assert!((r1 + r2 + 1.0 - mu).abs() <= 1e-12);
        prop_assert!((r1 * r2 - nu2).abs() <= 1e-12 * (1.0 + nu2));
    }

    #[test]
    fn delta_is_invariant((mu, nu2) in admissible_mu_nu2(), theta in -3.0f64..3.0) {
        let (_, _, d_t) = delta_invariance_check(mu, nu2, theta);
        prop_assert!((d_t - delta(mu, nu2)).abs() <= 1e-12);
    }

    #[test]
    fn strauss_nonincreasing_in_dimension(
        n_eff in 1.2f64..12.0,
        bump in 0.01f64..3.0,
        ell in -0.9f64..3.0,
    ) {
        let lo = strauss_exponent(n_eff, ell);
        let hi = strauss_exponent(n_eff + bump, ell);
        match (lo, hi) {
            (ExtReal::Finite(a), ExtReal::Finite(b)) => prop_assert!(b <= a + 1e-10),
            (ExtReal::Infinite, _) => {} // infinite dominates any successor
            (ExtReal::Finite(_), ExtReal::Infinite) => {
                prop_assert!(false, "exponent grew to infinity as dimension rose")
            }
        }
    }

    #[test]
    fn shifted_strauss_solves_its_quadratic(
        (mu, nu2) in admissible_mu_nu2(),
        ell in -0.9f64..2.0,
        n in 1usize..5,
    ) {
        let params = ModelParams::new(ell, mu, nu2, n, 1.0).unwrap();
        if let ExtReal::Finite(p) = strauss_exponent_shifted(&params) {
            let lp1 = ell + 1.0;
            let nf = n as f64;
            let a = 0.5 * (nf - 1.0) * lp1 + 0.5 * (ell + mu);
            let b = -(0.5 * (nf + 1.0) * lp1 + 0.5 * (mu - 3.0 * ell));
            prop_assert!((a * p * p + b * p - lp1).abs() <= 1e-11 * (1.0 + p * p));
        }
    }

    #[test]
    fn amplitude_roundtrip(t in 1.0f64..100.0, ell in -0.9f64..3.0) {
        let a = amplitude(t, ell).unwrap();
        let back = amplitude_inv(a, ell).unwrap();
        prop_assert!((back - t).abs() <= 1e-10 * t);
    }

    #[test]
    fn hypergeometric_kernel_family_at_least_one(
        gamma in -1.0f64..0.5,
        z in 0.0f64..0.95,
    ) {
        let f = gauss_2f1_val(gamma, gamma, 1.0, z).unwrap();
        prop_assert!(f >= 1.0 - 1e-13, "F({gamma},{gamma};1;{z}) = {f}");
    }

    #[test]
    fn euler_transform_identity(
        gamma in 0.05f64..0.95,
        z in 0.0f64..0.92,
    ) {
        // Both parameter families used by the kernels.
        for a in [gamma, 1.0 - gamma] {
            let (lhs, rhs) = epdt_core::special::euler_transform_identity_check(a, a, 1.0, z).unwrap();
            prop_assert!(
                (lhs - rhs).abs() <= 1e-10 * lhs.abs().max(1.0),
                "a = {a}, z = {z}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn kernel_forms_agree_and_symmetric(
        (mu, nu2) in admissible_mu_nu2(),
        ell in -0.5f64..2.0,
        t_off in 0.1f64..4.0,
        b_frac in 0.0f64..1.0,
        y_frac in -0.92f64..0.92,
    ) {
        let params = ModelParams::new(ell, mu, nu2, 1, 1.0).unwrap();
        let t = 1.0 + t_off;
        let b = 1.0 + (t - 1.0) * b_frac * 0.95;
        let reach = phi_ell(t, ell) - phi_ell(b, ell);
        let y = reach * y_frac;
        let pt = KernelPoint::new(t, 0.0, b, y).unwrap();
        let orig = kernel_e_original(&pt, &params).unwrap();
        let trans = kernel_e_transformed(&pt, &params).unwrap();
        prop_assert!(
            (orig - trans).abs() <= 1e-9 * orig.abs().max(1e-30),
            "forms disagree: {orig} vs {trans}"
        );
        prop_assert!(orig > 0.0);

        let mirrored = KernelPoint::new(t, 0.0, b, -y).unwrap();
        let e1 = kernel_e(&pt, &params).unwrap();
        let e2 = kernel_e(&mirrored, &params).unwrap();
        prop_assert_eq!(e1, e2);
    }

    #[test]
    fn kato_k0_nonincreasing_in_b(
        b_small in 0.5f64..4.0,
        factor in 1.01f64..4.0,
    ) {
        let mk = |bb: f64| {
            epdt_core::kato::KatoProblem::with_default_beta(
                0.0, 0.0, 2.0, 3.0, 1.0, bb, 1.0, 1.0, 1.0, 2.0,
            )
            .unwrap()
        };
        let k_small = epdt_core::kato::kato_thresholds(&mk(b_small)).unwrap().k0;
        let k_large = epdt_core::kato::kato_thresholds(&mk(b_small * factor)).unwrap().k0;
        prop_assert!(k_large <= k_small * (1.0 + 1e-12));
    }
}

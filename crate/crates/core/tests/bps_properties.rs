use approx::assert_relative_eq;
use proptest::prelude::*;

use sdiff_dbi::bps::{
    dbi_bps_density, kinetic_derivative, kinetic_energy, kinetic_second_derivative, limit_bps_density,
    power_bps_density,
};
use sdiff_dbi::{KineticLaw, ModelParams, Sector};

fn dbi(beta: f64, mu: f64) -> ModelParams {
    ModelParams::new(Sector::Baby2D, beta, mu, 1)
}

proptest! {
    #[test]
    fn dbi_density_is_stationary(beta in 0.05f64..50.0, mu in 0.05f64..20.0, v in 0.0f64..4.0) {
        let b = dbi_bps_density(v, &dbi(beta, mu)).unwrap();
        let lhs = b * kinetic_derivative(KineticLaw::Dbi, beta, b);
        let rhs = kinetic_energy(KineticLaw::Dbi, beta, b) + mu * mu * v;
        // K' at the density reads 1 − B₀²/2β² = (1+ε)⁻², so its condition
        // number in B₀ grows like (1+ε)²
        let eps = mu * mu * v / (beta * beta);
        let tol = 1e-12 * (1.0 + eps).powi(2);
        prop_assert!((lhs - rhs).abs() <= tol * rhs.max(1e-300), "{lhs} vs {rhs}");
    }

    #[test]
    fn dbi_density_is_monotone_and_bounded(beta in 0.05f64..50.0, mu in 0.05f64..20.0, v in 0.0f64..4.0, dv in 1e-6f64..1.0) {
        let p = dbi(beta, mu);
        let (a, b) = (dbi_bps_density(v, &p).unwrap(), dbi_bps_density(v + dv, &p).unwrap());
        prop_assert!(b >= a);
        prop_assert!(b < std::f64::consts::SQRT_2 * beta);
        // the DBI density never exceeds the β → ∞ density
        prop_assert!(b <= limit_bps_density(v + dv, mu) * (1.0 + 1e-15));
    }

    #[test]
    fn power_density_is_stationary(alpha in 0.55f64..4.0, mu in 0.1f64..5.0, v in 1e-6f64..2.0) {
        let b = power_bps_density(v, mu, alpha).unwrap();
        let law = KineticLaw::PowerFamily { alpha };
        let lhs = b * kinetic_derivative(law, 1.0, b);
        let rhs = kinetic_energy(law, 1.0, b) + mu * mu * v;
        prop_assert!((lhs / rhs - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn kinetic_derivatives_match_differences(beta in 0.2f64..10.0, frac in 0.05f64..0.9) {
        let b = frac * std::f64::consts::SQRT_2 * beta;
        for law in [KineticLaw::Dbi, KineticLaw::PowerFamily { alpha: 1.7 }, KineticLaw::BpsLimit] {
            let h = 1e-5 * b;
            let d1 = (kinetic_energy(law, beta, b + h) - kinetic_energy(law, beta, b - h)) / (2.0 * h);
            let d2 = (kinetic_derivative(law, beta, b + h) - kinetic_derivative(law, beta, b - h)) / (2.0 * h);
            prop_assert!((d1 / kinetic_derivative(law, beta, b) - 1.0).abs() < 1e-6);
            prop_assert!((d2 / kinetic_second_derivative(law, beta, b) - 1.0).abs() < 1e-6);
        }
    }
}

#[test]
fn large_beta_density_approaches_limit_quadratically() {
    let devs: Vec<f64> = [10.0, 100.0, 1000.0]
        .iter()
        .map(|&beta| 1.0 - dbi_bps_density(1.0, &dbi(beta, 1.0)).unwrap() / limit_bps_density(1.0, 1.0))
        .collect();
    for w in devs.windows(2) {
        assert_relative_eq!((w[0] / w[1]).log10(), 2.0, epsilon = 0.01);
    }
    // 1 − B₀/(2μ√V) = 3ε/4 + O(ε²) with ε = μ²V/β²
    assert_relative_eq!(devs[2], 0.75e-6, max_relative = 1e-5);
}

#[test]
fn density_rejects_negative_potential() {
    assert!(dbi_bps_density(-1e-3, &dbi(1.0, 1.0)).is_err());
    assert!(power_bps_density(1.0, 1.0, 0.5).is_err());
    assert_eq!(dbi_bps_density(0.0, &dbi(1.0, 1.0)).unwrap(), 0.0);
}

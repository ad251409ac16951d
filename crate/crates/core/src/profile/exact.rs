//! Closed-form profiles: the baby compacton of the old potential and the two
//! Skyrme compactons (standard and BPS potentials), plus the angular profile
//! and radial coordinate maps of the axial ansatz.

use std::f64::consts::{PI, SQRT_2};
use std::sync::Arc;

use super::{GridSpec, ProfileCurve, SolitonProfile};
use crate::bps::BpsLaw;
use crate::error::{Error, Result};
use crate::model::{xi_from_eta, KineticLaw, ModelParams, PotentialSpec, PotentialTag, Sector};
use crate::numerics::roots::bisect;

/// Compacton radius `x₀ = (|n|/2π)√(1/(2β²) + 1/μ²)` of the old baby
/// potential.
pub fn baby_old_radius(params: &ModelParams) -> f64 {
    let (b, m) = (params.beta, params.mu);
    params.abs_charge() / (2.0 * PI) * (0.5 / (b * b) + 1.0 / (m * m)).sqrt()
}

fn baby_curvature(params: &ModelParams) -> f64 {
    let (b, m) = (params.beta, params.mu);
    8.0 * PI * PI * m.powi(4) / (params.abs_charge().powi(2) * b * b)
}

/// `h(x) = (β²/μ²)(√(1 + 8π²μ⁴(x−x₀)²/(n²β²)) − 1)` inside the compacton,
/// zero outside.
pub fn baby_old_exact(x: f64, params: &ModelParams) -> f64 {
    let x0 = baby_old_radius(params);
    if x >= x0 {
        return 0.0;
    }
    let u = baby_curvature(params) * (x - x0).powi(2);
    (params.beta / params.mu).powi(2) * u / ((1.0 + u).sqrt() + 1.0)
}

fn baby_old_slope(x: f64, params: &ModelParams) -> f64 {
    let x0 = baby_old_radius(params);
    if x >= x0 {
        return 0.0;
    }
    let c = baby_curvature(params);
    let u = c * (x - x0).powi(2);
    (params.beta / params.mu).powi(2) * c * (x - x0) / (1.0 + u).sqrt()
}

/// Left-hand side of the implicit standard-potential solution as a function
/// of `ξ`; equals `z` on the profile.
pub fn skyrme_standard_lhs(xi: f64, sigma: f64) -> f64 {
    let (s, c) = (0.5 * xi).sin_cos();
    // 1 + cos ξ and 1 + 2σ − cos ξ without cancellation
    let one_plus = 2.0 * c * c;
    let wide = 2.0 * sigma + 2.0 * s * s;
    let cos_xi = xi.cos();
    0.5 * (sigma + cos_xi) * (one_plus * wide).sqrt() + (1.0 - sigma * sigma) * (one_plus / wide).sqrt().atan()
}

/// `z₀ = √σ(1+σ) + (1−σ²) arctan(1/√σ)`.
pub fn skyrme_standard_radius(sigma: f64) -> f64 {
    sigma.sqrt() * (1.0 + sigma) + (1.0 - sigma * sigma) * (1.0 / sigma.sqrt()).atan()
}

/// Inverts the implicit standard-potential solution by bisection on
/// `[0, π]`, run to machine precision.
pub fn skyrme_standard_exact(z: f64, sigma: f64) -> f64 {
    if z <= 0.0 {
        return PI;
    }
    // ξ ~ √(z₀ − z) at the edge, so a few ulps of z₀ are worth ~1e-8 in ξ
    let z0 = skyrme_standard_radius(sigma);
    if z >= z0 * (1.0 - 8.0 * f64::EPSILON) {
        return 0.0;
    }
    bisect(|xi| skyrme_standard_lhs(xi, sigma) - z, 0.0, PI, 0.0).unwrap_or(0.0)
}

fn skyrme_standard_volume_slope(xi: f64, sigma: f64) -> f64 {
    let s2 = (0.5 * xi).sin().powi(2);
    // −√(1−c)√(1+2σ−c)/(1+σ−c)
    -(2.0 * s2).sqrt() * (2.0 * sigma + 2.0 * s2).sqrt() / (sigma + 2.0 * s2)
}

/// `z₀ = (√π/2)√(π + 4σ)` for the BPS potential.
pub fn skyrme_bps_radius(sigma: f64) -> f64 {
    0.5 * PI.sqrt() * (PI + 4.0 * sigma).sqrt()
}

/// `η(z) = σ(√(1 + ((z₀−z)/σ)²) − 1)`, zero past `z₀`.
pub fn skyrme_bps_eta(z: f64, sigma: f64) -> f64 {
    let z0 = skyrme_bps_radius(sigma);
    if z >= z0 {
        return 0.0;
    }
    let u2 = ((z0 - z) / sigma).powi(2);
    sigma * u2 / ((1.0 + u2).sqrt() + 1.0)
}

/// Profile angle of the BPS-potential compacton.
pub fn skyrme_bps_exact(z: f64, sigma: f64) -> f64 {
    if z <= 0.0 {
        return PI;
    }
    xi_from_eta(skyrme_bps_eta(z, sigma))
}

/// `g(θ) = tan(θ/2)`.
pub fn angular_profile(theta: f64) -> Result<f64> {
    if !(0.0..PI).contains(&theta) {
        return Err(Error::OutOfDomain { value: theta, lo: 0.0, hi: PI });
    }
    Ok((0.5 * theta).tan())
}

/// `g g,_θ / ((1+g²)² sin θ)`, identically `1/4` on the angular profile.
pub fn angular_bracket(theta: f64) -> Result<f64> {
    let g = angular_profile(theta)?;
    let g_theta = 0.5 * (1.0 + g * g);
    Ok(g * g_theta / ((1.0 + g * g).powi(2) * theta.sin()))
}

/// Radial variable of the reduced equations: `x = r²/2` or
/// `z = (2√2βπ²/|n|) r³`.
pub fn coordinate_map(r: f64, sector: Sector, params: &ModelParams) -> f64 {
    match sector {
        Sector::Baby2D => 0.5 * r * r,
        Sector::Skyrme3D => 2.0 * SQRT_2 * params.beta * PI * PI / params.abs_charge() * r.powi(3),
    }
}

/// Leading coefficients of the standard-potential solution at its ends:
/// `ξ ≈ edge·√(2(z₀−z))` at the compacton boundary and
/// `ξ ≈ π − core·z^{1/3}` at the origin.
pub fn endpoint_asymptotics(sigma: f64) -> (f64, f64) {
    let edge = sigma.powf(-0.25);
    let core = 6f64.cbrt() * (1.0 + sigma).powf(1.0 / 6.0) / (2.0 + sigma).cbrt();
    (edge, core)
}

#[derive(Debug, Clone, Copy)]
enum ExactKind {
    BabyOld(ModelParams),
    SkyrmeStandard(f64),
    SkyrmeBps(f64),
}

#[derive(Debug, Clone, Copy)]
struct ExactCurve(ExactKind);

impl ProfileCurve for ExactCurve {
    fn field(&self, c: f64) -> f64 {
        match self.0 {
            ExactKind::BabyOld(p) => baby_old_exact(c, &p),
            ExactKind::SkyrmeStandard(s) => skyrme_standard_exact(c, s),
            ExactKind::SkyrmeBps(s) => skyrme_bps_exact(c, s),
        }
    }

    fn volume_slope(&self, c: f64) -> f64 {
        match self.0 {
            ExactKind::BabyOld(p) => baby_old_slope(c, &p),
            ExactKind::SkyrmeStandard(s) => {
                if c >= skyrme_standard_radius(s) {
                    0.0
                } else {
                    skyrme_standard_volume_slope(self.field(c), s)
                }
            }
            ExactKind::SkyrmeBps(s) => {
                let z0 = skyrme_bps_radius(s);
                if c >= z0 {
                    return 0.0;
                }
                let u = (z0 - c) / s;
                -u / (1.0 + u * u).sqrt()
            }
        }
    }

    fn radius(&self) -> Option<f64> {
        Some(match self.0 {
            ExactKind::BabyOld(p) => baby_old_radius(&p),
            ExactKind::SkyrmeStandard(s) => skyrme_standard_radius(s),
            ExactKind::SkyrmeBps(s) => skyrme_bps_radius(s),
        })
    }
}

/// Samples one of the closed-form compactons on a uniform grid. Available
/// for the DBI law with the old baby potential `V = h`, the standard Skyrme
/// potential and the BPS potential.
pub fn exact_profile(params: &ModelParams, potential: &PotentialSpec, grid: &GridSpec) -> Result<SolitonProfile> {
    let law = BpsLaw::new(*params, potential.clone())?;
    if params.kinetic_law != KineticLaw::Dbi {
        return Err(Error::InvalidParameter("closed-form profiles exist only for the DBI law".into()));
    }
    if params.mu == 0.0 {
        return Err(Error::NoSoliton(
            "mu = 0 leaves the BPS equation with zero slope; this cannot yield a continuous solution".into(),
        ));
    }
    let sigma = params.sigma();
    let kind = match (potential.tag(), params.sector) {
        (PotentialTag::OldBabyPower(a), Sector::Baby2D) if *a == 1.0 => ExactKind::BabyOld(*params),
        (PotentialTag::SkyrmeStandard, Sector::Skyrme3D) => ExactKind::SkyrmeStandard(sigma),
        (PotentialTag::BpsPotential, Sector::Skyrme3D) => ExactKind::SkyrmeBps(sigma),
        (tag, sector) => {
            return Err(Error::InvalidParameter(format!("no closed-form {sector} profile for potential {tag}")))
        }
    };
    let curve = ExactCurve(kind);
    let coords = grid.coordinates(curve.radius().unwrap_or(0.0), true)?;
    Ok(SolitonProfile::from_curve(&law, Arc::new(curve), &coords))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_2;

    fn unit(sector: Sector) -> ModelParams {
        ModelParams::new(sector, 1.0, 1.0, 1)
    }

    #[test]
    fn baby_examples() {
        let p = unit(Sector::Baby2D);
        assert_relative_eq!(baby_old_exact(0.0, &p), 1.0, epsilon = 1e-14);
        let x0 = baby_old_radius(&p);
        assert_relative_eq!(x0, 0.194_924_2, epsilon = 1e-7);
        assert_eq!(baby_old_exact(x0, &p), 0.0);
        assert_eq!(baby_old_exact(2.0 * x0, &p), 0.0);
        assert_relative_eq!(baby_old_exact(0.5 * x0, &p), 7f64.sqrt() / 2.0 - 1.0, epsilon = 1e-14);
        assert_relative_eq!(baby_old_radius(&p.with_charge(2)), 2.0 * x0, epsilon = 1e-15);
    }

    #[test]
    fn standard_examples() {
        assert_eq!(skyrme_standard_exact(0.0, 1.0), PI);
        assert!(skyrme_standard_lhs(PI, 1.0).abs() < 1e-15);
        assert_relative_eq!(skyrme_standard_radius(1.0), 2.0, epsilon = 1e-15);
        assert_eq!(skyrme_standard_exact(2.0, 1.0), 0.0);
        for dz in [1e-3, 1e-4, 1e-5] {
            let xi = skyrme_standard_exact(2.0 - dz, 1.0);
            assert_relative_eq!(xi / (2.0 * dz).sqrt(), 1.0, epsilon = 2.0 * dz);
        }
    }

    #[test]
    fn standard_root_satisfies_relation() {
        for sigma in [0.25, 1.0, 4.0] {
            let z0 = skyrme_standard_radius(sigma);
            for i in 1..50 {
                let z = z0 * f64::from(i) / 50.0;
                let xi = skyrme_standard_exact(z, sigma);
                assert!((skyrme_standard_lhs(xi, sigma) - z).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn bps_examples() {
        for sigma in [0.25, 1.0, 4.0] {
            assert_relative_eq!(skyrme_bps_eta(0.0, sigma), FRAC_PI_2, epsilon = 1e-12);
        }
        assert_relative_eq!(skyrme_bps_radius(1.0), 2.368_331_428_21, epsilon = 1e-10);
        assert_eq!(skyrme_bps_exact(3.0, 1.0), 0.0);
        assert_eq!(skyrme_bps_eta(skyrme_bps_radius(1.0), 1.0), 0.0);
        assert_eq!(skyrme_bps_exact(0.0, 1.0), PI);
    }

    #[test]
    fn angular_examples() {
        assert_eq!(angular_profile(0.0).unwrap(), 0.0);
        assert_relative_eq!(angular_profile(FRAC_PI_2).unwrap(), 1.0, epsilon = 1e-15);
        for t in [0.3, 1.0, 2.5] {
            assert_relative_eq!(angular_bracket(t).unwrap(), 0.25, epsilon = 1e-14);
        }
        assert!(angular_profile(PI).is_err());
    }

    #[test]
    fn coordinate_examples() {
        assert_eq!(coordinate_map(1.0, Sector::Baby2D, &unit(Sector::Baby2D)), 0.5);
        assert_relative_eq!(
            coordinate_map(1.0, Sector::Skyrme3D, &unit(Sector::Skyrme3D)),
            27.915_456_9,
            epsilon = 1e-6
        );
        assert_eq!(coordinate_map(0.0, Sector::Skyrme3D, &unit(Sector::Skyrme3D)), 0.0);
    }

    #[test]
    fn asymptotic_coefficients() {
        let (edge, core) = endpoint_asymptotics(1.0);
        assert_eq!(edge, 1.0);
        assert_relative_eq!(core, SQRT_2, epsilon = 1e-14);
        assert_relative_eq!(endpoint_asymptotics(16.0).0, 0.5, epsilon = 1e-15);
    }

    #[test]
    fn closed_forms_obey_the_bps_law() {
        let cases = [
            (unit(Sector::Baby2D).with_beta(0.7).with_mu(1.6), PotentialSpec::old_baby_power(1.0).unwrap()),
            (unit(Sector::Skyrme3D).with_beta(2.0), PotentialSpec::skyrme_standard()),
            (unit(Sector::Skyrme3D).with_mu(0.5), PotentialSpec::bps_potential()),
        ];
        for (params, pot) in cases {
            let prof = exact_profile(&params, &pot, &GridSpec::samples(200)).unwrap();
            let law = BpsLaw::new(params, pot).unwrap();
            let curve = prof.curve().unwrap();
            let r = curve.radius().unwrap();
            for i in 1..100 {
                let c = r * f64::from(i) / 100.0;
                let expected = law.volume_slope(curve.field(c));
                assert_relative_eq!(curve.volume_slope(c), expected, epsilon = 1e-9, max_relative = 1e-9);
            }
            prof.check_invariants().unwrap();
        }
    }

    #[test]
    fn unsupported_closed_form() {
        let p = unit(Sector::Baby2D);
        let pot = PotentialSpec::old_baby_power(2.0).unwrap();
        assert!(exact_profile(&p, &pot, &GridSpec::default()).is_err());
        let pot = PotentialSpec::old_baby_power(1.0).unwrap();
        assert!(matches!(exact_profile(&p.with_mu(0.0), &pot, &GridSpec::default()), Err(Error::NoSoliton(_))));
    }
}

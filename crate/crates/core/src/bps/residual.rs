use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::bps::{kinetic_derivative, kinetic_second_derivative, BpsLaw};
use crate::error::{Error, Result};
use crate::model::{PotentialSpec, Sector};
use crate::profile::SolitonProfile;

/// Second-order residual of a sampled profile.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EomResidualReport {
    pub spacing: f64,
    pub max_abs_residual: f64,
    /// Maximum of the residual divided by the flux derivative
    /// `∂Φ/∂ψ'`, i.e. the residual of `ψ'' = μ² V_ψ / Φ'(ψ')`. Its sensitivity
    /// to round-off in the samples does not grow where the DBI flux
    /// saturates, so it shows the truncation order down to smaller `Δ`.
    pub max_scaled_residual: f64,
    /// One entry per interior sample; zero outside the evaluation window.
    pub residuals: Vec<f64>,
    /// Interior indices `[first, last]` (into `residuals`) that were
    /// evaluated.
    pub window: (usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualOptions {
    /// Fraction of the support trimmed at each end, on top of the fixed
    /// `5Δ` margin. The Skyrme compactons behave as `z^{1/3}` at the core and
    /// `√(z₀−z)` at the edge, where difference quotients lose their order.
    pub edge_fraction: f64,
}

impl Default for ResidualOptions {
    fn default() -> Self {
        Self { edge_fraction: 0.05 }
    }
}

pub fn eom_residual(profile: &SolitonProfile, potential: &PotentialSpec) -> Result<EomResidualReport> {
    eom_residual_with(profile, potential, &ResidualOptions::default())
}

/// Evaluates the reduced static field equation in flux form,
/// `d/dc (K'(B₀) ∂B₀/∂ψ') − μ² dV/dψ`, on the volume coordinate `ψ`
/// (`h` or `η`) of a uniformly sampled profile. In the baby sector the result
/// is scaled by `8π²` to read
/// `n² d/dx[h,ₓ/√(1 − n²h,ₓ²/(8π²β²))] − 8π²μ² dV/dh`.
///
/// Fluxes use one-sided differences at half points, so the residual of an
/// exact BPS profile is `O(Δ²)`. Stencils lying entirely in the vacuum
/// contribute exactly zero. Samples within `max(5Δ, edge_fraction·support)`
/// of either end of the support are skipped.
pub fn eom_residual_with(
    profile: &SolitonProfile,
    potential: &PotentialSpec,
    options: &ResidualOptions,
) -> Result<EomResidualReport> {
    let n = profile.samples.len();
    if n < 102 {
        return Err(Error::Grid(format!("need at least 100 interior samples, got {}", n.saturating_sub(2))));
    }
    let delta = profile.uniform_spacing()?;
    let law = BpsLaw::new(profile.params, potential.clone())?;
    let params = law.params();
    let sector = params.sector;
    let kappa = params.charge_scale();
    let mu2 = params.mu * params.mu;
    let scale = match sector {
        Sector::Baby2D => 8.0 * PI * PI,
        Sector::Skyrme3D => 1.0,
    };
    let (vacuum, _) = sector.domain();

    let psi: Vec<f64> = profile.samples.iter().map(|s| sector.volume_coordinate(s.field)).collect();
    let flux: Vec<f64> = psi
        .windows(2)
        .map(|w| {
            let d = (w[1] - w[0]) / delta;
            kinetic_derivative(params.kinetic_law, params.beta, kappa * d.abs()) * kappa * d.signum()
        })
        .collect();

    let start = profile.samples[0].coordinate;
    let support =
        profile.compacton_radius.unwrap_or(profile.samples[n - 1].coordinate).min(profile.samples[n - 1].coordinate)
            - start;
    let margin = (5.0 * delta).max(options.edge_fraction * support);
    let lo_c = start + margin;
    let hi_c = start + support - margin;

    let mut residuals = vec![0.0; n - 2];
    let mut max_abs: f64 = 0.0;
    let mut max_scaled: f64 = 0.0;
    let mut window = (usize::MAX, 0);
    for i in 1..n - 1 {
        let c = profile.samples[i].coordinate;
        let in_vacuum = profile.samples[i - 1..=i + 1].iter().all(|s| s.field == vacuum);
        if in_vacuum || c < lo_c || c > hi_c {
            continue;
        }
        let field = profile.samples[i].field;
        let density = sector.volume_density(field);
        let dv_dpsi = potential.derivative(field) / density;
        let raw = (flux[i] - flux[i - 1]) / delta - mu2 * dv_dpsi;
        let r = if raw.is_finite() { scale * raw } else { f64::INFINITY };
        residuals[i - 1] = r;
        max_abs = max_abs.max(r.abs());
        let slope = (psi[i + 1] - psi[i - 1]) / (2.0 * delta);
        let stiffness = kappa * kappa * kinetic_second_derivative(params.kinetic_law, params.beta, kappa * slope.abs());
        let scaled = raw / stiffness;
        max_scaled = max_scaled.max(if scaled.is_finite() { scaled.abs() } else { f64::INFINITY });
        window = (window.0.min(i - 1), i - 1);
    }
    if window.0 == usize::MAX {
        window = (0, 0);
    }
    Ok(EomResidualReport {
        spacing: delta,
        max_abs_residual: max_abs,
        max_scaled_residual: max_scaled,
        residuals,
        window,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::ModelParams;
    use crate::profile::{exact_profile, GridSpec, ProfileSample};

    fn baby_exact(delta: f64) -> SolitonProfile {
        let params = ModelParams::new(Sector::Baby2D, 1.0, 1.0, 1);
        exact_profile(&params, &PotentialSpec::old_baby_power(1.0).unwrap(), &GridSpec::spacing(delta)).unwrap()
    }

    #[test]
    fn second_order_on_baby_compacton() {
        let pot = PotentialSpec::old_baby_power(1.0).unwrap();
        let coarse = eom_residual(&baby_exact(1e-3), &pot).unwrap();
        let fine = eom_residual(&baby_exact(5e-4), &pot).unwrap();
        let ratio = coarse.max_abs_residual / fine.max_abs_residual;
        assert!((ratio - 4.0).abs() < 0.5, "ratio {ratio}");
        assert_eq!(coarse.residuals.len(), baby_exact(1e-3).samples.len() - 2);
    }

    #[test]
    fn scaled_residual_converges_on_skyrme_compactons() {
        let params = ModelParams::new(Sector::Skyrme3D, 1.0, 1.0, 1);
        for pot in [PotentialSpec::skyrme_standard(), PotentialSpec::bps_potential()] {
            let r = |d: f64| {
                let prof = exact_profile(&params, &pot, &GridSpec::spacing(d)).unwrap();
                eom_residual(&prof, &pot).unwrap().max_scaled_residual
            };
            let ratio = r(1e-3) / r(5e-4);
            assert!((ratio - 4.0).abs() < 0.5, "{}: {ratio}", pot.tag());
        }
    }

    #[test]
    fn bump_is_detected() {
        let pot = PotentialSpec::old_baby_power(1.0).unwrap();
        let prof = baby_exact(1e-3);
        let clean = eom_residual(&prof, &pot).unwrap().max_abs_residual;
        let bumped = prof.perturbed(0.01, 0.1, 0.01);
        let dirty = eom_residual(&bumped, &pot).unwrap().max_abs_residual;
        assert!(dirty > 10.0 * clean, "{dirty} vs {clean}");
    }

    #[test]
    fn vacuum_segment_has_zero_residual() {
        let params = ModelParams::new(Sector::Baby2D, 1.0, 1.0, 1);
        let samples = (0..200)
            .map(|i| ProfileSample {
                coordinate: f64::from(i) * 1e-3,
                field: 0.0,
                derivative: 0.0,
                energy_density: 0.0,
                charge_density: 0.0,
            })
            .collect();
        let prof = SolitonProfile::from_samples(params, crate::model::PotentialTag::OldBabyPower(1.0), samples, None);
        let r = eom_residual(&prof, &PotentialSpec::old_baby_power(1.0).unwrap()).unwrap();
        assert_eq!(r.max_abs_residual, 0.0);
    }

    #[test]
    fn rejects_short_or_uneven_grids() {
        let pot = PotentialSpec::old_baby_power(1.0).unwrap();
        let params = ModelParams::new(Sector::Baby2D, 1.0, 1.0, 1);
        let short = exact_profile(&params, &pot, &GridSpec::samples(50)).unwrap();
        assert!(matches!(eom_residual(&short, &pot), Err(Error::Grid(_))));
        let mut uneven = baby_exact(1e-3);
        uneven.samples[10].coordinate += 1e-4;
        assert!(matches!(eom_residual(&uneven, &pot), Err(Error::Grid(_))));
    }
}

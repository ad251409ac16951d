//! Energies and topological charges of solved profiles, closed-form
//! energies of the exact compactons, and the small-`μ` and large-`β` sweeps.

use std::f64::consts::{PI, SQRT_2};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bps::BpsLaw;
use crate::error::{Error, Result};
use crate::model::{least_squares_slope, KineticLaw, ModelParams, PotentialSpec, PotentialTag, Sector, TargetMeasure};
use crate::numerics::Integrator;
use crate::profile::{solve_profile, GridSpec, InverseMap, ProfileCurve, SolitonProfile};

const QUAD_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub energy_quadrature: f64,
    pub energy_closed_form: Option<f64>,
    pub energy_per_charge_avg: Option<f64>,
    pub charge: f64,
    pub rel_discrepancy_closed: Option<f64>,
    pub rel_discrepancy_avg: Option<f64>,
    /// The target average with a `√2·μ` prefactor in place of `μ/√2`;
    /// four times `energy_per_charge_avg`.
    pub energy_per_charge_avg_sqrt2_mu: Option<f64>,
}

type CoordinateMap = Box<dyn Fn(f64) -> f64>;

/// Integrates `f` over `[0, end]` of the profile coordinate.
///
/// Skyrme profiles go like `π − c·z^{1/3}` at the core, so the integral is
/// taken in `w = z^{1/3}`. Compactons are split uniformly; non-compact
/// profiles geometrically towards the far end.
fn integrate_coordinate<F: Fn(f64) -> f64>(sector: Sector, end: f64, compact: bool, f: F) -> Result<f64> {
    let (map, jac): (CoordinateMap, CoordinateMap) = match sector {
        Sector::Baby2D => (Box::new(|t| t), Box::new(|_| 1.0)),
        Sector::Skyrme3D => (Box::new(|w: f64| w * w * w), Box::new(|w: f64| 3.0 * w * w)),
    };
    let top = match sector {
        Sector::Baby2D => end,
        Sector::Skyrme3D => end.cbrt(),
    };
    let mut knots: Vec<f64> = if compact {
        (0..=16).map(|j| top * f64::from(j) / 16.0).collect()
    } else {
        let mut k: Vec<f64> = (0..48).map(|j| top * 0.5f64.powi(j)).collect();
        k.push(0.0);
        k.reverse();
        k
    };
    knots.dedup();
    let integrator = Integrator::with_tolerances(0.0, QUAD_REL_TOL);
    let mut total = 0.0;
    for w in knots.windows(2) {
        let r = integrator.integrate(|t| f(map(t)) * jac(t), w[0], w[1]);
        if !r.value.is_finite() {
            return Err(Error::Quadrature { estimate: r.value, error: r.abs_error });
        }
        total += r.value;
    }
    Ok(total)
}

fn check_profile(profile: &SolitonProfile, potential: &PotentialSpec) -> Result<()> {
    if !potential.matches_sector(profile.sector) || profile.params.sector != profile.sector {
        return Err(Error::SectorMismatch(format!(
            "a {} profile cannot be evaluated with potential {}",
            profile.sector,
            potential.tag()
        )));
    }
    Ok(())
}

/// Static energy `base_measure · ∫ (K(B₀) + μ²V) dc` of a profile.
///
/// Profiles carrying a continuous curve are integrated adaptively; sampled
/// profiles fall back to the trapezoidal rule over their stored energy
/// density.
pub fn energy_quadrature(profile: &SolitonProfile, potential: &PotentialSpec) -> Result<f64> {
    check_profile(profile, potential)?;
    let params = &profile.params;
    let Some(curve) = profile.curve() else {
        return Ok(trapezoid(profile.samples.iter().map(|s| (s.coordinate, s.energy_density))));
    };
    let kappa = params.charge_scale();
    let mu2 = params.mu * params.mu;
    let density = |c: f64| {
        let b0 = kappa * curve.volume_slope(c).abs();
        crate::bps::kinetic_energy(params.kinetic_law, params.beta, b0) + mu2 * potential.value(curve.field(c))
    };
    let e = integrate_coordinate(profile.sector, curve.extent(), curve.radius().is_some(), density)?;
    Ok(params.base_measure() * e)
}

fn trapezoid(points: impl Iterator<Item = (f64, f64)>) -> f64 {
    let pts: Vec<(f64, f64)> = points.collect();
    pts.windows(2).map(|w| 0.5 * (w[1].0 - w[0].0) * (w[1].1 + w[0].1)).sum()
}

/// Topological charge `n · ∫ |ψ'| dc / vol`, with `ψ` the volume coordinate.
/// Sampled profiles use the boundary differences of `ψ`, which is exact for
/// monotone data.
pub fn charge_quadrature(profile: &SolitonProfile) -> Result<f64> {
    let sector = profile.sector;
    let n = f64::from(profile.params.charge);
    let integral = match profile.curve() {
        Some(curve) => {
            integrate_coordinate(sector, curve.extent(), curve.radius().is_some(), |c| curve.volume_slope(c).abs())?
        }
        None => profile
            .samples
            .windows(2)
            .map(|w| (sector.volume_coordinate(w[1].field) - sector.volume_coordinate(w[0].field)).abs())
            .sum(),
    };
    Ok(n * integral / sector.target_volume())
}

fn require_mu(params: &ModelParams) -> Result<()> {
    if !(params.mu > 0.0) {
        return Err(Error::NoSoliton("mu = 0 admits no soliton, so there is no closed-form energy".into()));
    }
    Ok(())
}

/// Energy of the baby compacton for `V = h`.
pub fn baby_energy_closed(params: &ModelParams) -> Result<f64> {
    require_mu(params)?;
    let (beta, mu, n) = (params.beta, params.mu, params.abs_charge());
    let x0 = (0.5 / (beta * beta) + 1.0 / (mu * mu)).sqrt() / (2.0 * PI);
    let rv = 2.0 * SQRT_2 * PI * mu * mu / beta;
    Ok(n * PI * beta * beta * (x0 * (1.0 + rv * rv * x0 * x0).sqrt() - (rv * x0).asinh() / rv))
}

/// Energy of the Skyrme compacton for `V = 1 − cos ξ`.
pub fn skyrme_standard_energy_closed(params: &ModelParams) -> Result<f64> {
    require_mu(params)?;
    let s = params.sigma();
    let rs = s.sqrt();
    let bracket = rs * (3.0 + 2.0 * s + 3.0 * s * s) + 3.0 * (1.0 - s) * (1.0 + s).powi(2) * (1.0 / rs).atan();
    Ok(SQRT_2 * params.abs_charge() * params.beta / (9.0 * PI * s) * bracket)
}

/// Energy of the Skyrme compacton for the BPS potential `V = η`.
pub fn skyrme_bps_energy_closed(params: &ModelParams) -> Result<f64> {
    require_mu(params)?;
    let s = params.sigma();
    let z0 = crate::profile::skyrme_bps_radius(s);
    let u = z0 / s;
    Ok(SQRT_2 * params.beta / (6.0 * PI) * params.abs_charge() * (z0 * (1.0 + u * u).sqrt() - s * u.asinh()))
}

/// Closed-form energy when one exists for this model and potential.
pub fn closed_form_energy(params: &ModelParams, potential: &PotentialSpec) -> Option<Result<f64>> {
    if params.kinetic_law != KineticLaw::Dbi {
        return None;
    }
    match (potential.tag(), params.sector) {
        (PotentialTag::OldBabyPower(a), Sector::Baby2D) if *a == 1.0 => Some(baby_energy_closed(params)),
        (PotentialTag::SkyrmeStandard, Sector::Skyrme3D) => Some(skyrme_standard_energy_closed(params)),
        (PotentialTag::BpsPotential, Sector::Skyrme3D) => Some(skyrme_bps_energy_closed(params)),
        _ => None,
    }
}

fn check_measure(params: &ModelParams, potential: &PotentialSpec, measure: &TargetMeasure) -> Result<()> {
    if measure.sector() != params.sector || !potential.matches_sector(params.sector) {
        return Err(Error::SectorMismatch(format!(
            "measure on the {} chart used with a {} model",
            measure.sector(),
            params.sector
        )));
    }
    Ok(())
}

/// `E/|n|` for the DBI law from the target average
/// `(μ/√2)⟨√(μ²V²/β² + 2V)⟩`, times the sector's charge normalization
/// (`1` for baby, `1/3` for Skyrme). Zero when `μ = 0`, where no soliton
/// exists.
pub fn energy_per_charge_average(
    params: &ModelParams,
    potential: &PotentialSpec,
    measure: &TargetMeasure,
) -> Result<f64> {
    check_measure(params, potential, measure)?;
    if params.kinetic_law != KineticLaw::Dbi {
        return Err(Error::InvalidParameter("the DBI target average needs the DBI kinetic law".into()));
    }
    let (beta, mu) = (params.beta, params.mu);
    if mu == 0.0 {
        return Ok(0.0);
    }
    let avg = measure.average(|s| {
        let v = potential.value(s).max(0.0);
        (mu * mu * v * v / (beta * beta) + 2.0 * v).sqrt()
    });
    Ok(params.charge_normalization() * mu / SQRT_2 * avg)
}

/// `E/|n| = 2α((2α−1)/μ²)^{1/(2α)−1}⟨V^{1−1/(2α)}⟩` for the power family.
pub fn power_family_energy_per_charge(
    params: &ModelParams,
    potential: &PotentialSpec,
    measure: &TargetMeasure,
) -> Result<f64> {
    check_measure(params, potential, measure)?;
    let KineticLaw::PowerFamily { alpha } = params.kinetic_law else {
        return Err(Error::InvalidParameter("expected the power-family kinetic law".into()));
    };
    if !(alpha > 0.5) {
        return Err(Error::InvalidParameter(format!("alpha_K > 1/2 is required, got {alpha}")));
    }
    let mu = params.mu;
    if mu == 0.0 {
        return Ok(0.0);
    }
    let e = 1.0 - 0.5 / alpha;
    let avg = measure.average(|s| potential.value(s).max(0.0).powf(e));
    let prefactor = 2.0 * alpha * ((2.0 * alpha - 1.0) / (mu * mu)).powf(0.5 / alpha - 1.0);
    Ok(params.charge_normalization() * prefactor * avg)
}

/// `E/|n| = ⟨K'(B₀)⟩` for any law; the stationarity condition turns
/// `(K + μ²V)/B₀` into `K'(B₀)`.
fn law_energy_per_charge(law: &BpsLaw) -> f64 {
    let measure = TargetMeasure::for_sector(law.params().sector);
    law.params().charge_normalization() * measure.average(|s| law.kinetic_derivative(law.density(s)))
}

/// Energy by quadrature alongside every independent estimate available.
pub fn energy_report(profile: &SolitonProfile, potential: &PotentialSpec) -> Result<EnergyReport> {
    let params = profile.params;
    let energy = energy_quadrature(profile, potential)?;
    let charge = charge_quadrature(profile)?;
    let closed = closed_form_energy(&params, potential).transpose()?;
    let measure = TargetMeasure::for_sector(params.sector);
    let avg = match params.kinetic_law {
        KineticLaw::Dbi => Some(energy_per_charge_average(&params, potential, &measure)?),
        KineticLaw::PowerFamily { .. } => Some(power_family_energy_per_charge(&params, potential, &measure)?),
        KineticLaw::BpsLimit => Some(law_energy_per_charge(&BpsLaw::new(params, potential.clone())?)),
    };
    let rel = |x: f64| (x - energy).abs() / energy.abs();
    let n = params.abs_charge();
    Ok(EnergyReport {
        energy_quadrature: energy,
        energy_closed_form: closed,
        energy_per_charge_avg: avg,
        charge,
        rel_discrepancy_closed: closed.map(rel),
        rel_discrepancy_avg: avg.map(|a| rel(a * n)),
        energy_per_charge_avg_sqrt2_mu: match params.kinetic_law {
            KineticLaw::Dbi => avg.map(|a| 4.0 * a),
            _ => None,
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MuSweep {
    pub mu: Vec<f64>,
    pub energy: Vec<f64>,
    /// Least-squares slope of `E(μ)` through the origin.
    pub slope: f64,
    /// `2|n|/3`.
    pub expected_slope: f64,
}

/// Solves the baby compacton for `V = h` at each `μ` and fits `E ≈ s·μ`.
pub fn small_mu_sweep(params: &ModelParams, mus: &[f64]) -> Result<MuSweep> {
    if mus.len() < 3 {
        return Err(Error::InsufficientData(format!("need at least 3 mu values, got {}", mus.len())));
    }
    if params.sector != Sector::Baby2D {
        return Err(Error::SectorMismatch("the small-mu law is stated for the baby sector".into()));
    }
    let potential = PotentialSpec::old_baby_power(1.0)?;
    let energy = mus
        .par_iter()
        .map(|&mu| {
            let p = params.with_mu(mu);
            let prof = solve_profile(&p, &potential, &GridSpec::samples(16))?;
            energy_quadrature(&prof, &potential)
        })
        .collect::<Result<Vec<f64>>>()?;
    let slope = mus.iter().zip(&energy).map(|(m, e)| m * e).sum::<f64>() / mus.iter().map(|m| m * m).sum::<f64>();
    Ok(MuSweep { mu: mus.to_vec(), energy, slope, expected_slope: 2.0 * params.abs_charge() / 3.0 })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BetaSweep {
    pub beta: Vec<f64>,
    pub energy: Vec<f64>,
    /// Sup-norm distance between the DBI profile and the `β → ∞` profile.
    pub distance: Vec<f64>,
    /// Least-squares slope of `log distance` against `log β`.
    pub exponent: f64,
}

const SWEEP_GRID: usize = 4001;

/// Compares DBI profiles at each `β` with the profile of the limiting law
/// `B₀ = 2μ√V` on a common uniform grid.
pub fn large_beta_sweep(params: &ModelParams, potential: &PotentialSpec, betas: &[f64]) -> Result<BetaSweep> {
    if betas.len() < 3 {
        return Err(Error::InsufficientData(format!("need at least 3 beta values, got {}", betas.len())));
    }
    let rows = betas
        .par_iter()
        .map(|&beta| {
            let p = params.with_beta(beta).with_kinetic_law(KineticLaw::Dbi);
            let map = InverseMap::build(BpsLaw::new(p, potential.clone())?)?;
            // the Skyrme radial variable carries a factor of β, so the limit
            // is taken at the same β to compare at equal physical radius
            let limit = InverseMap::build(BpsLaw::new(p.with_kinetic_law(KineticLaw::BpsLimit), potential.clone())?)?;
            let end = map.extent().max(limit.extent());
            let distance = (0..SWEEP_GRID)
                .map(|i| {
                    let c = end * i as f64 / (SWEEP_GRID - 1) as f64;
                    (map.field(c) - limit.field(c)).abs()
                })
                .fold(0.0, f64::max);
            let prof = solve_profile(&p, potential, &GridSpec::samples(16))?;
            Ok((energy_quadrature(&prof, potential)?, distance))
        })
        .collect::<Result<Vec<(f64, f64)>>>()?;
    let (energy, distance): (Vec<f64>, Vec<f64>) = rows.into_iter().unzip();
    let pts: Vec<(f64, f64)> = betas.iter().zip(&distance).map(|(b, d)| (b.ln(), d.ln())).collect();
    Ok(BetaSweep { beta: betas.to_vec(), energy, distance, exponent: least_squares_slope(&pts) })
}

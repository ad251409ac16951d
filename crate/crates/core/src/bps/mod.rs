//! First-order BPS law `B₀ = W(field)` and the slopes it induces in each
//! sector.
//!
//! Integrating the static Euler-Lagrange equation once gives
//! `W ∂F/∂W − F = 0` with `F = K(W) + μ²V` the static energy density, so the
//! law is fixed pointwise by the value of the potential.

mod residual;

pub use residual::{eom_residual, eom_residual_with, EomResidualReport, ResidualOptions};

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{validate_params, KineticLaw, ModelParams, PotentialSpec, Sector};
use crate::numerics::roots::{bisect, safeguarded_newton};

/// `B₀ = √2 β √(1 − (μ²V/β² + 1)⁻²)`, evaluated without cancellation for
/// small `μ²V/β²`.
pub fn dbi_bps_density(v: f64, params: &ModelParams) -> Result<f64> {
    if !(v >= 0.0) {
        return Err(Error::InvalidParameter(format!("potential value must be non-negative, got {v}")));
    }
    Ok(dbi_density_unchecked(v, params.beta, params.mu))
}

fn dbi_density_unchecked(v: f64, beta: f64, mu: f64) -> f64 {
    let eps = mu * mu * v / (beta * beta);
    if eps.is_infinite() {
        return SQRT_2 * beta;
    }
    // 1 − (1+ε)⁻² = ε(2+ε)/(1+ε)²
    SQRT_2 * beta * (eps * (2.0 + eps)).sqrt() / (1.0 + eps)
}

/// `B₀ = (μ²V/(2α − 1))^{1/(2α)}`.
pub fn power_bps_density(v: f64, mu: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.5) {
        return Err(Error::InvalidParameter(format!("power-family exponent alpha_K = {alpha} must exceed 1/2")));
    }
    if !(v >= 0.0) {
        return Err(Error::InvalidParameter(format!("potential value must be non-negative, got {v}")));
    }
    Ok((mu * mu * v / (2.0 * alpha - 1.0)).powf(0.5 / alpha))
}

/// `B₀ = 2μ√V`, the law of the `β → ∞` limit.
pub fn limit_bps_density(v: f64, mu: f64) -> f64 {
    2.0 * mu * v.max(0.0).sqrt()
}

/// Kinetic part `K(B₀)` of the static energy density.
pub fn kinetic_energy(law: KineticLaw, beta: f64, b0: f64) -> f64 {
    match law {
        KineticLaw::Dbi => {
            let q = b0 * b0 / (2.0 * beta * beta);
            // β²(1 − √(1−q)) = β² q/(1 + √(1−q))
            beta * beta * q / (1.0 + (1.0 - q).sqrt())
        }
        KineticLaw::PowerFamily { alpha } => b0.abs().powf(2.0 * alpha),
        KineticLaw::BpsLimit => 0.25 * b0 * b0,
    }
}

/// `dK/dB₀`.
pub fn kinetic_derivative(law: KineticLaw, beta: f64, b0: f64) -> f64 {
    match law {
        KineticLaw::Dbi => 0.5 * b0 / (1.0 - b0 * b0 / (2.0 * beta * beta)).sqrt(),
        KineticLaw::PowerFamily { alpha } => 2.0 * alpha * b0.abs().powf(2.0 * alpha - 1.0) * b0.signum(),
        KineticLaw::BpsLimit => 0.5 * b0,
    }
}

/// `d²K/dB₀²`.
pub fn kinetic_second_derivative(law: KineticLaw, beta: f64, b0: f64) -> f64 {
    match law {
        KineticLaw::Dbi => 0.5 * (1.0 - b0 * b0 / (2.0 * beta * beta)).powf(-1.5),
        KineticLaw::PowerFamily { alpha } => 2.0 * alpha * (2.0 * alpha - 1.0) * b0.abs().powf(2.0 * alpha - 2.0),
        KineticLaw::BpsLimit => 0.5,
    }
}

/// A static energy density `F(W, field)` whose stationarity condition
/// `W ∂F/∂W = F` defines the BPS law.
pub trait EnergyDensity {
    fn energy(&self, w: f64, field: f64) -> f64;

    /// `∂F/∂W`; `None` makes the root finder differentiate numerically.
    fn energy_derivative(&self, _w: f64, _field: f64) -> Option<f64> {
        None
    }

    /// Upper end of the admissible `W` range, if there is one.
    fn ceiling(&self) -> Option<f64> {
        None
    }
}

/// `K(W) + μ²V(field)` for one of the built-in kinetic laws.
#[derive(Debug, Clone)]
pub struct StaticDensity {
    pub params: ModelParams,
    pub potential: PotentialSpec,
}

impl EnergyDensity for StaticDensity {
    fn energy(&self, w: f64, field: f64) -> f64 {
        kinetic_energy(self.params.kinetic_law, self.params.beta, w)
            + self.params.mu * self.params.mu * self.potential.value(field)
    }

    fn energy_derivative(&self, w: f64, _field: f64) -> Option<f64> {
        Some(kinetic_derivative(self.params.kinetic_law, self.params.beta, w))
    }

    fn ceiling(&self) -> Option<f64> {
        match self.params.kinetic_law {
            KineticLaw::Dbi => Some(SQRT_2 * self.params.beta),
            _ => None,
        }
    }
}

/// Wraps a bare closure as an [`EnergyDensity`] without a derivative.
pub struct FnDensity<F> {
    pub f: F,
    pub ceiling: Option<f64>,
}

impl<F: Fn(f64, f64) -> f64> EnergyDensity for FnDensity<F> {
    fn energy(&self, w: f64, field: f64) -> f64 {
        (self.f)(w, field)
    }

    fn ceiling(&self) -> Option<f64> {
        self.ceiling
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NumericDensity {
    pub value: f64,
    /// Set when `∂F/∂W` was not supplied and a finite-difference stencil was
    /// used instead.
    pub finite_difference: bool,
}

fn stencil_derivative<D: EnergyDensity>(density: &D, w: f64, field: f64) -> f64 {
    let ceiling = density.ceiling().unwrap_or(f64::INFINITY);
    // stay well inside the distance to the ceiling, where F is singular
    let h = (2e-4 * w.abs().max(1e-2)).min(1e-2 * (ceiling - w).abs().max(1e-6));
    let f = |x: f64| density.energy(x, field);
    if w - 2.0 * h >= 0.0 && w + 2.0 * h <= ceiling {
        (f(w - 2.0 * h) - 8.0 * f(w - h) + 8.0 * f(w + h) - f(w + 2.0 * h)) / (12.0 * h)
    } else if w + 4.0 * h <= ceiling {
        (-25.0 * f(w) + 48.0 * f(w + h) - 36.0 * f(w + 2.0 * h) + 16.0 * f(w + 3.0 * h) - 3.0 * f(w + 4.0 * h))
            / (12.0 * h)
    } else {
        (25.0 * f(w) - 48.0 * f(w - h) + 36.0 * f(w - 2.0 * h) - 16.0 * f(w - 3.0 * h) + 3.0 * f(w - 4.0 * h))
            / (12.0 * h)
    }
}

/// Solves `W ∂F/∂W − F = 0` for `W ≥ 0` at one field value: bisection on a
/// bracket from zero to the density ceiling (or a doubling search when there
/// is none), polished by safeguarded Newton.
pub fn numeric_bps_density<D: EnergyDensity>(density: &D, field: f64) -> Result<NumericDensity> {
    let finite_difference = density.energy_derivative(0.0, field).is_none();
    let slope = |w: f64| match density.energy_derivative(w, field) {
        Some(d) => d,
        None => stencil_derivative(density, w, field),
    };
    let g = |w: f64| w * slope(w) - density.energy(w, field);

    let g0 = -density.energy(0.0, field);
    if g0 == 0.0 {
        return Ok(NumericDensity { value: 0.0, finite_difference });
    }
    if g0 > 0.0 {
        return Err(Error::NoSignChange { what: "W dF/dW - F", lo: 0.0, hi: 0.0 });
    }
    let hi = match density.ceiling() {
        // the stationarity function diverges at the ceiling; back off slightly
        Some(c) => {
            let mut hi = c * (1.0 - 1e-15);
            while !(g(hi) > 0.0) && hi > 0.5 * c {
                hi = c - 2.0 * (c - hi);
            }
            if !(g(hi) > 0.0) {
                return Err(Error::NoSignChange { what: "W dF/dW - F", lo: 0.0, hi: c });
            }
            hi
        }
        None => {
            let mut hi = 1.0;
            while !(g(hi) > 0.0) {
                hi *= 2.0;
                if hi > 1e150 {
                    return Err(Error::NoSignChange { what: "W dF/dW - F", lo: 0.0, hi });
                }
            }
            hi
        }
    };
    let rough = bisect(g, 0.0, hi, 1e-6 * hi)?;
    let lo = (rough - 2e-6 * hi).max(0.0);
    let top = (rough + 2e-6 * hi).min(hi);
    let value = if g(lo) < 0.0 && g(top) > 0.0 {
        // d/dW (W F' − F) = W F''
        let fdf = |w: f64| {
            let d = 1e-7 * w.abs().max(1e-3);
            (g(w), w * (slope(w + d) - slope(w - d)) / (2.0 * d))
        };
        safeguarded_newton(fdf, lo, top, 1e-15 * hi, 100)?
    } else {
        bisect(g, 0.0, hi, 0.0)?
    };
    Ok(NumericDensity { value, finite_difference })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BpsOrigin {
    ClosedFormDbi,
    ClosedFormPower,
    ClosedFormLimit,
    NumericRoot,
}

/// The BPS law of a model: density `B₀(field)` plus the slopes it fixes.
///
/// Profiles run from the anti-vacuum at the origin down to the vacuum, so the
/// negative branch is used throughout.
#[derive(Debug, Clone)]
pub struct BpsLaw {
    params: ModelParams,
    potential: PotentialSpec,
    origin: BpsOrigin,
}

impl BpsLaw {
    pub fn new(params: ModelParams, potential: PotentialSpec) -> Result<Self> {
        let params = validate_params(params)?;
        if !potential.matches_sector(params.sector) {
            return Err(Error::SectorMismatch(format!(
                "potential {} is not defined on the {} chart",
                potential.tag(),
                params.sector
            )));
        }
        let origin = match params.kinetic_law {
            KineticLaw::Dbi => BpsOrigin::ClosedFormDbi,
            KineticLaw::PowerFamily { .. } => BpsOrigin::ClosedFormPower,
            KineticLaw::BpsLimit => BpsOrigin::ClosedFormLimit,
        };
        Ok(Self { params, potential, origin })
    }

    /// Same law, but every density is obtained by root finding.
    pub fn numeric(params: ModelParams, potential: PotentialSpec) -> Result<Self> {
        let mut law = Self::new(params, potential)?;
        law.origin = BpsOrigin::NumericRoot;
        Ok(law)
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn potential(&self) -> &PotentialSpec {
        &self.potential
    }

    pub fn origin(&self) -> BpsOrigin {
        self.origin
    }

    pub fn sign(&self) -> i8 {
        -1
    }

    /// `B₀` at a field value.
    pub fn density(&self, field: f64) -> f64 {
        let v = self.potential.value(field).max(0.0);
        let p = &self.params;
        match self.origin {
            BpsOrigin::ClosedFormDbi => dbi_density_unchecked(v, p.beta, p.mu),
            BpsOrigin::ClosedFormPower => match p.kinetic_law {
                KineticLaw::PowerFamily { alpha } => (p.mu * p.mu * v / (2.0 * alpha - 1.0)).powf(0.5 / alpha),
                _ => unreachable!(),
            },
            BpsOrigin::ClosedFormLimit => limit_bps_density(v, p.mu),
            BpsOrigin::NumericRoot => {
                let density = StaticDensity { params: *p, potential: self.potential.clone() };
                numeric_bps_density(&density, field).map(|r| r.value).unwrap_or(f64::NAN)
            }
        }
    }

    pub fn kinetic(&self, b0: f64) -> f64 {
        kinetic_energy(self.params.kinetic_law, self.params.beta, b0)
    }

    pub fn kinetic_derivative(&self, b0: f64) -> f64 {
        kinetic_derivative(self.params.kinetic_law, self.params.beta, b0)
    }

    /// `K(B₀) + μ²V` along the law.
    pub fn static_density(&self, field: f64) -> f64 {
        self.kinetic(self.density(field)) + self.params.mu * self.params.mu * self.potential.value(field)
    }

    /// Derivative of the volume coordinate (`h` or `η`) along the profile
    /// coordinate.
    pub fn volume_slope(&self, field: f64) -> f64 {
        -self.density(field) / self.params.charge_scale()
    }

    /// Derivative of the chart field (`h` or `ξ`) along the profile
    /// coordinate. Infinite where the volume density vanishes off the vacuum.
    pub fn slope(&self, field: f64) -> f64 {
        let s = self.volume_slope(field);
        if s == 0.0 {
            return 0.0;
        }
        s / self.params.sector.volume_density(field)
    }

    /// Exponent `q` of the inverse-map integrand `d(coordinate)/d(field) ~
    /// distance^q` at the vacuum. The profile reaches the vacuum at finite
    /// coordinate iff `q > −1`.
    pub fn vacuum_integrand_exponent(&self) -> f64 {
        let a = self.potential.vacuum_exponent();
        let law_power = match self.params.kinetic_law {
            KineticLaw::PowerFamily { alpha } => 0.5 / alpha,
            _ => 0.5,
        };
        self.params.sector.volume_density_exponent() - a * law_power
    }
}

fn check_chart(field: f64, sector: Sector, potential: &PotentialSpec, params: &ModelParams) -> Result<()> {
    let (lo, hi) = sector.domain();
    if !(field >= lo && field <= hi) {
        return Err(Error::OutOfDomain { value: field, lo, hi });
    }
    if params.sector != sector || !potential.matches_sector(sector) {
        return Err(Error::SectorMismatch(format!("expected a {sector} model and potential")));
    }
    Ok(())
}

/// `h,ₓ = −(2π/|n|) B₀(h)` in the baby sector.
pub fn baby_bps_slope(h: f64, potential: &PotentialSpec, params: &ModelParams) -> Result<f64> {
    check_chart(h, Sector::Baby2D, potential, params)?;
    let law = BpsLaw::new(*params, potential.clone())?;
    Ok(-(2.0 * PI / params.abs_charge()) * law.density(h))
}

/// `sin²ξ · ξ,_z = η,_z = −B₀(ξ)/(√2 β)` in the Skyrme sector.
pub fn skyrme_bps_slope(xi: f64, potential: &PotentialSpec, params: &ModelParams) -> Result<f64> {
    check_chart(xi, Sector::Skyrme3D, potential, params)?;
    let law = BpsLaw::new(*params, potential.clone())?;
    Ok(law.volume_slope(xi))
}

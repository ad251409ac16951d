//! Radial soliton profiles: sampled representation, closed-form evaluators,
//! the inverse-map solver and localization diagnostics.

mod csv;
pub mod exact;
mod localization;
pub mod solver;

pub use self::csv::{read_profile_csv, write_profile_csv, PROFILE_CSV_HEADER};
pub use exact::{
    angular_bracket, angular_profile, baby_old_exact, baby_old_radius, coordinate_map, endpoint_asymptotics,
    exact_profile, skyrme_bps_eta, skyrme_bps_exact, skyrme_bps_radius, skyrme_standard_exact, skyrme_standard_lhs,
    skyrme_standard_radius,
};
pub use localization::{classify_localization, tail_fit, Localization, TailFit};
pub use solver::{forward_radius, solve_profile, InverseMap};

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::bps::BpsLaw;
use crate::error::{Error, Result};
use crate::model::{ModelParams, PotentialTag, Sector};

/// Continuous profile `coordinate ↦ field`.
pub trait ProfileCurve: Send + Sync {
    fn field(&self, coordinate: f64) -> f64;

    /// Derivative of the volume coordinate (`h,ₓ` or `η,_z = sin²ξ ξ,_z`),
    /// which stays finite where `ξ,_z` does not.
    fn volume_slope(&self, coordinate: f64) -> f64;

    /// Coordinate where the vacuum is reached, if finite.
    fn radius(&self) -> Option<f64>;

    /// Coordinate beyond which the field is negligible.
    fn extent(&self) -> f64 {
        self.radius().unwrap_or(f64::INFINITY)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileSample {
    pub coordinate: f64,
    pub field: f64,
    /// `dfield/dcoordinate`; `-inf` at the Skyrme core when `V(π) > 0`.
    pub derivative: f64,
    /// Energy per unit coordinate; integrates to the energy.
    pub energy_density: f64,
    /// Charge per unit coordinate; integrates to `|n|`.
    pub charge_density: f64,
}

/// How to lay out the uniform export grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub resolution: Resolution,
    /// Exact-vacuum samples appended beyond a compacton radius.
    pub padding: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Resolution {
    /// Number of samples from the origin to the radius (or extent).
    Samples(usize),
    /// Fixed spacing; the grid runs to the first sample at or past the
    /// radius.
    Spacing(f64),
}

impl Default for GridSpec {
    fn default() -> Self {
        Self { resolution: Resolution::Samples(1000), padding: 10 }
    }
}

impl GridSpec {
    pub fn samples(n: usize) -> Self {
        Self { resolution: Resolution::Samples(n), ..Self::default() }
    }

    pub fn spacing(delta: f64) -> Self {
        Self { resolution: Resolution::Spacing(delta), ..Self::default() }
    }

    pub fn with_padding(mut self, padding: usize) -> Self {
        self.padding = padding;
        self
    }

    /// Uniform coordinates covering `[0, end]`, plus padding when the end is
    /// a compacton radius.
    pub fn coordinates(&self, end: f64, compact: bool) -> Result<Vec<f64>> {
        if !(end > 0.0) || !end.is_finite() {
            return Err(Error::Grid(format!("profile extent must be positive and finite, got {end}")));
        }
        let (delta, count) = match self.resolution {
            Resolution::Samples(n) => {
                if n < 3 {
                    return Err(Error::Grid(format!("need at least 3 samples, got {n}")));
                }
                (end / (n - 1) as f64, n)
            }
            Resolution::Spacing(d) => {
                if !(d > 0.0) || !d.is_finite() {
                    return Err(Error::Grid(format!("grid spacing must be positive, got {d}")));
                }
                let steps = (end / d * (1.0 - 1e-12)).ceil() as usize;
                (d, steps.max(2) + 1)
            }
        };
        let extra = if compact { self.padding } else { 0 };
        Ok((0..count + extra).map(|i| i as f64 * delta).collect())
    }
}

#[derive(Clone)]
pub struct SolitonProfile {
    pub sector: Sector,
    pub params: ModelParams,
    pub potential: PotentialTag,
    pub samples: Vec<ProfileSample>,
    pub compacton_radius: Option<f64>,
    curve: Option<Arc<dyn ProfileCurve>>,
}

impl fmt::Debug for SolitonProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SolitonProfile")
            .field("sector", &self.sector)
            .field("params", &self.params)
            .field("potential", &self.potential)
            .field("samples", &self.samples.len())
            .field("compacton_radius", &self.compacton_radius)
            .field("continuous", &self.curve.is_some())
            .finish()
    }
}

impl SolitonProfile {
    /// Samples `curve` on `coordinates`; derivative and densities come from
    /// the BPS law at the sampled field values.
    pub fn from_curve(law: &BpsLaw, curve: Arc<dyn ProfileCurve>, coordinates: &[f64]) -> Self {
        let params = *law.params();
        let samples = coordinates
            .iter()
            .map(|&c| {
                let field = curve.field(c);
                sample_from_law(law, c, field)
            })
            .collect();
        Self {
            sector: params.sector,
            params,
            potential: law.potential().tag().clone(),
            samples,
            compacton_radius: curve.radius(),
            curve: Some(curve),
        }
    }

    /// A profile without a continuous representation, e.g. read from disk.
    pub fn from_samples(
        params: ModelParams,
        potential: PotentialTag,
        samples: Vec<ProfileSample>,
        compacton_radius: Option<f64>,
    ) -> Self {
        Self { sector: params.sector, params, potential, samples, compacton_radius, curve: None }
    }

    pub fn coordinate_name(&self) -> &'static str {
        self.sector.coordinate_name()
    }

    pub fn curve(&self) -> Option<&Arc<dyn ProfileCurve>> {
        self.curve.as_ref()
    }

    pub fn coordinates(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.coordinate).collect()
    }

    pub fn fields(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.field).collect()
    }

    /// Grid spacing if the coordinates are uniform to relative precision
    /// `1e-9`.
    pub fn uniform_spacing(&self) -> Result<f64> {
        if self.samples.len() < 2 {
            return Err(Error::Grid("profile has fewer than two samples".into()));
        }
        let n = self.samples.len();
        let delta = (self.samples[n - 1].coordinate - self.samples[0].coordinate) / (n - 1) as f64;
        if !(delta > 0.0) {
            return Err(Error::Grid("profile coordinates are not increasing".into()));
        }
        for w in self.samples.windows(2) {
            let d = w[1].coordinate - w[0].coordinate;
            if (d - delta).abs() > 1e-9 * delta + 1e-15 * w[1].coordinate.abs() {
                return Err(Error::Grid(format!("non-uniform grid: step {d} vs mean {delta}")));
            }
        }
        Ok(delta)
    }

    /// Adds `amplitude · exp(−((c − center)/width)²)` to the field values,
    /// leaving derivative and densities untouched.
    pub fn perturbed(&self, amplitude: f64, center: f64, width: f64) -> Self {
        let mut out = self.clone();
        out.curve = None;
        for s in &mut out.samples {
            s.field += amplitude * (-((s.coordinate - center) / width).powi(2)).exp();
        }
        out
    }

    /// Checks monotonicity, boundary values and charge-density sign.
    pub fn check_invariants(&self) -> Result<()> {
        let (vacuum, anti) = self.sector.domain();
        let first = self.samples.first().ok_or_else(|| Error::Grid("empty profile".into()))?;
        let last = self.samples.last().unwrap();
        if (first.field - anti).abs() > 1e-12 * anti.max(1.0) {
            return Err(Error::Grid(format!("profile starts at {} instead of {anti}", first.field)));
        }
        if last.field - vacuum > 1e-8 {
            return Err(Error::Grid(format!("profile ends at {} above the vacuum", last.field)));
        }
        for w in self.samples.windows(2) {
            if w[1].field > w[0].field {
                return Err(Error::Grid(format!("profile increases at {}", w[1].coordinate)));
            }
        }
        if let Some(s) = self.samples.iter().find(|s| !(s.charge_density >= 0.0)) {
            return Err(Error::Grid(format!("negative charge density at {}", s.coordinate)));
        }
        Ok(())
    }
}

pub(crate) fn sample_from_law(law: &BpsLaw, coordinate: f64, field: f64) -> ProfileSample {
    let params = law.params();
    let b0 = law.density(field);
    let volume_slope = -b0 / params.charge_scale();
    let derivative = if volume_slope == 0.0 { 0.0 } else { volume_slope / params.sector.volume_density(field) };
    ProfileSample {
        coordinate,
        field,
        derivative,
        energy_density: params.base_measure() * law.static_density(field),
        charge_density: params.abs_charge() * volume_slope.abs() / params.sector.target_volume(),
    }
}

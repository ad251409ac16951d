//! Potentials, model parameters and sector geometry shared by every other
//! module.
//!
//! Target charts are one-dimensional: the baby sector uses `h ∈ [0, 1]`, the
//! Skyrme sector the profile angle `ξ ∈ [0, π]`. In both the vacuum sits at
//! the lower end of the chart and the anti-vacuum (the soliton core) at the
//! upper end.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::Integrator;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sector {
    /// 2+1 dimensions, target S².
    Baby2D,
    /// 3+1 dimensions, target S³.
    Skyrme3D,
}

impl Sector {
    pub fn domain(self) -> (f64, f64) {
        match self {
            Sector::Baby2D => (0.0, 1.0),
            Sector::Skyrme3D => (0.0, PI),
        }
    }

    pub fn coordinate_name(self) -> &'static str {
        match self {
            Sector::Baby2D => "x",
            Sector::Skyrme3D => "z",
        }
    }

    /// Target volume density in the chart (unnormalized): `1` for `h`,
    /// `sin²ξ` for `ξ`.
    pub fn volume_density(self, field: f64) -> f64 {
        match self {
            Sector::Baby2D => 1.0,
            // exact zero at the core, where `sin π` rounds to 1.2e-16
            Sector::Skyrme3D if field >= PI => 0.0,
            Sector::Skyrme3D => field.sin().powi(2),
        }
    }

    /// Total target volume of the chart under [`Sector::volume_density`].
    pub fn target_volume(self) -> f64 {
        match self {
            Sector::Baby2D => 1.0,
            Sector::Skyrme3D => FRAC_PI_2,
        }
    }

    /// Volume coordinate: `h` itself, or `η(ξ) = (ξ − cos ξ sin ξ)/2`.
    pub fn volume_coordinate(self, field: f64) -> f64 {
        match self {
            Sector::Baby2D => field,
            Sector::Skyrme3D => eta(field),
        }
    }

    /// Inverse of [`Sector::volume_coordinate`].
    pub fn field_from_volume(self, volume: f64) -> f64 {
        match self {
            Sector::Baby2D => volume,
            Sector::Skyrme3D => xi_from_eta(volume),
        }
    }

    /// Near-vacuum exponent of `V` (in the chart coordinate) that separates
    /// compactons from exponentially localized solitons.
    pub fn localization_threshold(self) -> f64 {
        match self {
            Sector::Baby2D => 2.0,
            Sector::Skyrme3D => 6.0,
        }
    }

    /// Leading power of the volume density at the vacuum.
    pub(crate) fn volume_density_exponent(self) -> f64 {
        match self {
            Sector::Baby2D => 0.0,
            Sector::Skyrme3D => 2.0,
        }
    }
}

impl std::str::FromStr for Sector {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "baby" | "baby2d" => Ok(Sector::Baby2D),
            "skyrme" | "skyrme3d" => Ok(Sector::Skyrme3D),
            other => Err(Error::InvalidParameter(format!("unknown sector '{other}', expected baby or skyrme"))),
        }
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sector::Baby2D => "baby",
            Sector::Skyrme3D => "skyrme",
        })
    }
}

/// `η(ξ) = (ξ − cos ξ sin ξ)/2 = (2ξ − sin 2ξ)/4`, with a series near zero
/// where the difference cancels.
pub fn eta(xi: f64) -> f64 {
    let u = 2.0 * xi;
    if u.abs() < 0.25 {
        // u − sin u = u³/3! − u⁵/5! + u⁷/7! − …
        let u2 = u * u;
        let mut term = u * u2 / 6.0;
        let mut sum = term;
        let mut k = 5.0;
        while term.abs() > 1e-18 * sum.abs() && k < 40.0 {
            term *= -u2 / ((k - 1.0) * k);
            sum += term;
            k += 2.0;
        }
        sum / 4.0
    } else {
        (u - u.sin()) / 4.0
    }
}

/// Inverts [`eta`] on `[0, π]` by bisection to machine precision.
pub fn xi_from_eta(volume: f64) -> f64 {
    if volume <= 0.0 {
        return 0.0;
    }
    if volume >= FRAC_PI_2 {
        return PI;
    }
    crate::numerics::roots::bisect(|xi| eta(xi) - volume, 0.0, PI, 0.0).unwrap_or(0.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum KineticLaw {
    /// `β²(1 − √(1 − B₀²/(2β²)))`.
    Dbi,
    /// `(B₀²)^α`, requires `α > 1/2`.
    PowerFamily { alpha: f64 },
    /// `B₀²/4`, the `β → ∞` limit of the DBI law.
    BpsLimit,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub beta: f64,
    pub mu: f64,
    pub charge: i32,
    pub sector: Sector,
    pub kinetic_law: KineticLaw,
    /// The `f_π²` prefactor of the bound certifier.
    pub energy_scale: f64,
}

impl ModelParams {
    pub fn new(sector: Sector, beta: f64, mu: f64, charge: i32) -> Self {
        Self { beta, mu, charge, sector, kinetic_law: KineticLaw::Dbi, energy_scale: 1.0 }
    }

    pub fn with_kinetic_law(mut self, law: KineticLaw) -> Self {
        self.kinetic_law = law;
        self
    }

    pub fn with_charge(mut self, charge: i32) -> Self {
        self.charge = charge;
        self
    }

    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }

    pub fn with_mu(mut self, mu: f64) -> Self {
        self.mu = mu;
        self
    }

    /// `σ = β²/μ²`.
    pub fn sigma(&self) -> f64 {
        self.beta * self.beta / (self.mu * self.mu)
    }

    pub fn abs_charge(&self) -> f64 {
        f64::from(self.charge.unsigned_abs())
    }

    /// Prefactor turning the per-coordinate density into an energy:
    /// `2π` for `x = r²/2`, `√2|n|/(3πβ)` for `z ∝ r³`.
    pub fn base_measure(&self) -> f64 {
        match self.sector {
            Sector::Baby2D => 2.0 * PI,
            Sector::Skyrme3D => SQRT_2 * self.abs_charge() / (3.0 * PI * self.beta),
        }
    }

    /// `B₀ = charge_scale · |d(volume coordinate)/d(coordinate)|`.
    pub fn charge_scale(&self) -> f64 {
        match self.sector {
            Sector::Baby2D => self.abs_charge() / (2.0 * PI),
            Sector::Skyrme3D => SQRT_2 * self.beta,
        }
    }

    /// Ratio of `∫ base_measure · B₀` to `|n|`; the factor multiplying the
    /// target average in the energy-per-charge formula.
    pub fn charge_normalization(&self) -> f64 {
        self.base_measure() * self.charge_scale() * self.sector.target_volume() / self.abs_charge()
    }
}

/// Checks the parameter invariants and returns the input unchanged.
pub fn validate_params(params: ModelParams) -> Result<ModelParams> {
    if !(params.beta > 0.0) || !params.beta.is_finite() {
        return Err(Error::InvalidParameter(format!("beta must be positive, got {}", params.beta)));
    }
    if !(params.mu >= 0.0) || !params.mu.is_finite() {
        return Err(Error::InvalidParameter(format!("mu must be non-negative, got {}", params.mu)));
    }
    if params.charge == 0 {
        return Err(Error::InvalidParameter("topological charge n = 0 carries no topology".into()));
    }
    if !(params.energy_scale > 0.0) || !params.energy_scale.is_finite() {
        return Err(Error::InvalidParameter(format!("energy scale must be positive, got {}", params.energy_scale)));
    }
    if let KineticLaw::PowerFamily { alpha } = params.kinetic_law {
        if !(alpha > 0.5) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "power-family exponent alpha_K = {alpha} violates the restriction alpha_K > 1/2 \
                 required by the vacuum boundary conditions"
            )));
        }
    }
    Ok(params)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PotentialTag {
    /// `V = h^α` on the baby chart.
    OldBabyPower(f64),
    /// `V = 1 − cos ξ`.
    SkyrmeStandard,
    /// `V = η = (ξ − cos ξ sin ξ)/2`.
    BpsPotential,
    Custom(String),
}

impl fmt::Display for PotentialTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PotentialTag::OldBabyPower(a) => write!(f, "old:{a}"),
            PotentialTag::SkyrmeStandard => f.write_str("standard"),
            PotentialTag::BpsPotential => f.write_str("bps"),
            PotentialTag::Custom(name) => f.write_str(name),
        }
    }
}

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Shape {
    OldBaby(f64),
    Standard,
    Bps,
    Custom { value: ScalarFn, derivative: ScalarFn },
}

/// A potential on a one-dimensional target chart.
#[derive(Clone)]
pub struct PotentialSpec {
    tag: PotentialTag,
    shape: Shape,
    domain: (f64, f64),
    vacuum_exponent: f64,
}

impl fmt::Debug for PotentialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PotentialSpec")
            .field("tag", &self.tag)
            .field("domain", &self.domain)
            .field("vacuum_exponent", &self.vacuum_exponent)
            .finish()
    }
}

impl PotentialSpec {
    pub fn old_baby_power(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("potential exponent must be positive, got {alpha}")));
        }
        Ok(Self {
            tag: PotentialTag::OldBabyPower(alpha),
            shape: Shape::OldBaby(alpha),
            domain: Sector::Baby2D.domain(),
            vacuum_exponent: alpha,
        })
    }

    pub fn skyrme_standard() -> Self {
        Self {
            tag: PotentialTag::SkyrmeStandard,
            shape: Shape::Standard,
            domain: Sector::Skyrme3D.domain(),
            vacuum_exponent: 2.0,
        }
    }

    pub fn bps_potential() -> Self {
        Self {
            tag: PotentialTag::BpsPotential,
            shape: Shape::Bps,
            domain: Sector::Skyrme3D.domain(),
            vacuum_exponent: 3.0,
        }
    }

    /// `V = (2 sin(ξ/2))^α`, which behaves as `ξ^α` at the vacuum.
    pub fn skyrme_power(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0) || !alpha.is_finite() {
            return Err(Error::InvalidParameter(format!("potential exponent must be positive, got {alpha}")));
        }
        Self::custom(
            format!("power:{alpha}"),
            Sector::Skyrme3D.domain(),
            alpha,
            move |xi: f64| (2.0 * (0.5 * xi).sin()).max(0.0).powf(alpha),
            move |xi: f64| {
                let s = (2.0 * (0.5 * xi).sin()).max(0.0);
                alpha * s.powf(alpha - 1.0) * (0.5 * xi).cos()
            },
        )
    }

    /// A user-supplied potential. The vacuum is the lower end of `domain`;
    /// the declared exponent is cross-checked by a log-log fit.
    pub fn custom<F, D>(
        name: impl Into<String>,
        domain: (f64, f64),
        vacuum_exponent: f64,
        value: F,
        derivative: D,
    ) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
        D: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        if !(vacuum_exponent > 0.0) || !vacuum_exponent.is_finite() {
            return Err(Error::InvalidParameter(format!("vacuum exponent must be positive, got {vacuum_exponent}")));
        }
        if !(domain.1 > domain.0) {
            return Err(Error::InvalidParameter(format!("empty potential domain {domain:?}")));
        }
        let spec = Self {
            tag: PotentialTag::Custom(name.into()),
            shape: Shape::Custom { value: Arc::new(value), derivative: Arc::new(derivative) },
            domain,
            vacuum_exponent,
        };
        let v0 = spec.value(domain.0);
        if v0.abs() > 1e-14 {
            return Err(Error::InvalidParameter(format!("custom potential must vanish at the vacuum, V = {v0}")));
        }
        for i in 0..=1000 {
            let s = domain.0 + (domain.1 - domain.0) * f64::from(i) / 1000.0;
            let v = spec.value(s);
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "custom potential must be finite and non-negative, V({s}) = {v}"
                )));
            }
        }
        let fitted = spec.fit_vacuum_exponent();
        if (fitted - vacuum_exponent).abs() > 0.05 * vacuum_exponent.max(1.0) {
            return Err(Error::InvalidParameter(format!(
                "declared vacuum exponent {vacuum_exponent} disagrees with log-log fit {fitted}"
            )));
        }
        Ok(spec)
    }

    pub fn tag(&self) -> &PotentialTag {
        &self.tag
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn vacuum_coordinate(&self) -> f64 {
        self.domain.0
    }

    pub fn anti_vacuum_coordinate(&self) -> f64 {
        self.domain.1
    }

    pub fn vacuum_exponent(&self) -> f64 {
        self.vacuum_exponent
    }

    pub fn value(&self, s: f64) -> f64 {
        match &self.shape {
            Shape::OldBaby(a) => {
                if s <= 0.0 {
                    0.0
                } else {
                    s.powf(*a)
                }
            }
            // 1 − cos ξ without cancellation near the vacuum
            Shape::Standard => 2.0 * (0.5 * s).sin().powi(2),
            Shape::Bps => eta(s),
            Shape::Custom { value, .. } => value(s),
        }
    }

    pub fn derivative(&self, s: f64) -> f64 {
        match &self.shape {
            Shape::OldBaby(a) => {
                if s <= 0.0 {
                    if *a < 1.0 {
                        f64::INFINITY
                    } else if *a == 1.0 {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    a * s.powf(a - 1.0)
                }
            }
            Shape::Standard => s.sin(),
            Shape::Bps => s.sin().powi(2),
            Shape::Custom { derivative, .. } => derivative(s),
        }
    }

    pub fn contains(&self, s: f64) -> bool {
        s >= self.domain.0 && s <= self.domain.1
    }

    pub fn check_domain(&self, s: f64) -> Result<()> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(Error::OutOfDomain { value: s, lo: self.domain.0, hi: self.domain.1 })
        }
    }

    /// Whether this potential lives on the chart of `sector`.
    pub fn matches_sector(&self, sector: Sector) -> bool {
        self.domain == sector.domain()
    }

    /// Slope of `log V` against `log(distance to vacuum)` over distances
    /// `[1e-6, 1e-4]` times the chart width.
    pub fn fit_vacuum_exponent(&self) -> f64 {
        let width = self.domain.1 - self.domain.0;
        let pts: Vec<(f64, f64)> = (0..=20)
            .map(|i| {
                let d = width * 10f64.powf(-6.0 + 2.0 * f64::from(i) / 20.0);
                (d.ln(), self.value(self.domain.0 + d).ln())
            })
            .collect();
        least_squares_slope(&pts)
    }
}

pub(crate) fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

/// Builds a potential from its tag.
pub fn make_potential(tag: &PotentialTag) -> Result<PotentialSpec> {
    match tag {
        PotentialTag::OldBabyPower(a) => PotentialSpec::old_baby_power(*a),
        PotentialTag::SkyrmeStandard => Ok(PotentialSpec::skyrme_standard()),
        PotentialTag::BpsPotential => Ok(PotentialSpec::bps_potential()),
        PotentialTag::Custom(name) => {
            Err(Error::InvalidParameter(format!("custom potential '{name}' needs explicit value and derivative maps")))
        }
    }
}

/// Parses a potential descriptor: `old`, `old:<α>`, `standard`, `bps`, or
/// `power:<α>` (`h^α` on the baby chart, `(2 sin(ξ/2))^α` on the Skyrme
/// chart).
pub fn parse_potential(text: &str, sector: Sector) -> Result<PotentialSpec> {
    let text = text.trim();
    let (name, arg) = match text.split_once(':') {
        Some((n, a)) => (n.trim(), Some(a.trim())),
        None => (text, None),
    };
    let exponent = |arg: Option<&str>| -> Result<f64> {
        let a = arg.ok_or_else(|| Error::InvalidParameter(format!("potential '{name}' needs an exponent")))?;
        a.parse::<f64>().map_err(|_| Error::InvalidParameter(format!("bad potential exponent '{a}'")))
    };
    let spec = match (name, sector) {
        ("old", Sector::Baby2D) => {
            let a = if arg.is_some() { exponent(arg)? } else { 1.0 };
            PotentialSpec::old_baby_power(a)?
        }
        ("power", Sector::Baby2D) => PotentialSpec::old_baby_power(exponent(arg)?)?,
        ("power", Sector::Skyrme3D) => PotentialSpec::skyrme_power(exponent(arg)?)?,
        ("standard", Sector::Skyrme3D) if arg.is_none() => PotentialSpec::skyrme_standard(),
        ("bps", Sector::Skyrme3D) if arg.is_none() => PotentialSpec::bps_potential(),
        ("old" | "standard" | "bps", _) => {
            return Err(Error::InvalidParameter(format!("potential '{text}' is not defined on the {sector} chart")))
        }
        _ => return Err(Error::InvalidParameter(format!("unknown potential tag '{text}'"))),
    };
    Ok(spec)
}

/// Unit-mass weight on the target chart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetMeasure {
    sector: Sector,
}

impl TargetMeasure {
    pub fn for_sector(sector: Sector) -> Self {
        Self { sector }
    }

    pub fn sector(&self) -> Sector {
        self.sector
    }

    pub fn domain(&self) -> (f64, f64) {
        self.sector.domain()
    }

    pub fn weight(&self, s: f64) -> f64 {
        self.sector.volume_density(s) / self.sector.target_volume()
    }

    /// `⟨f⟩ = ∫ weight · f` over the chart.
    pub fn average<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let (a, b) = self.domain();
        Integrator::with_tolerances(1e-15, 1e-13).integrate(|s| self.weight(s) * f(s), a, b).value
    }

    pub fn mass(&self) -> f64 {
        self.average(|_| 1.0)
    }
}

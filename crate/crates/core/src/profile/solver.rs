//! Profiles for arbitrary potentials from the inverse map
//! `coordinate(field) = ∫ d(field) / |slope|`, integrated from the
//! anti-vacuum at the origin.
//!
//! The field is parametrized by `τ ∈ [0, 1]` so that the integrand stays
//! bounded at the vacuum: `field = vacuum + span·τ^k` with `k = 1/(q+1)` when
//! the integrand behaves as `distance^q` with `q > −1` (finite radius), and a
//! logarithmic map down to `1e-10·span` otherwise. A table of the integral at
//! panel knots is inverted by safeguarded Newton iteration inside a panel.

use std::sync::Arc;

use super::{GridSpec, ProfileCurve, SolitonProfile};
use crate::bps::BpsLaw;
use crate::error::{Error, Result};
use crate::model::{ModelParams, PotentialSpec};
use crate::numerics::roots::safeguarded_newton;
use crate::numerics::stepper::{self, StepperOptions};
use crate::numerics::Integrator;

const PANELS: usize = 64;
/// Decades covered by the logarithmic map of non-compact profiles.
const LOG_DECADES: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
enum FieldMap {
    Power(f64),
    Log,
}

/// Invertible map from coordinate to field for one BPS law.
#[derive(Debug, Clone)]
pub struct InverseMap {
    law: BpsLaw,
    vacuum: f64,
    span: f64,
    map: FieldMap,
    /// `X(τ_j)` at `τ_j = j/PANELS`; decreasing, zero at `τ = 1`.
    table: Vec<f64>,
    integrator: Integrator,
}

impl InverseMap {
    pub fn build(law: BpsLaw) -> Result<Self> {
        let params = *law.params();
        if params.mu == 0.0 {
            return Err(Error::NoSoliton(
                "mu = 0 reduces the BPS equation to a vanishing slope; this cannot yield a continuous solution".into(),
            ));
        }
        let (vacuum, anti) = law.potential().domain();
        if !(law.density(anti) > 0.0) {
            return Err(Error::NonIntegrable("the potential vanishes at the anti-vacuum".into()));
        }
        let q = law.vacuum_integrand_exponent();
        let map = if q > -1.0 { FieldMap::Power(1.0 / (q + 1.0)) } else { FieldMap::Log };
        let mut out = Self {
            law,
            vacuum,
            span: anti - vacuum,
            map,
            table: vec![0.0; PANELS + 1],
            // the Kronrod error floor is 50ε per panel, so 1e-13 is attainable
            integrator: Integrator::with_tolerances(1e-300, 1e-13),
        };
        for j in (0..PANELS).rev() {
            let a = j as f64 / PANELS as f64;
            let b = (j + 1) as f64 / PANELS as f64;
            let r = out.integrator.integrate(|t| out.integrand(t), a, b);
            if !r.value.is_finite() || !(r.abs_error <= 1e-8 * r.value.abs().max(1e-300)) {
                return Err(Error::NonIntegrable(format!(
                    "inverse-map integral over tau in [{a}, {b}] gave {} +- {}; the slope vanishes inside the domain",
                    r.value, r.abs_error
                )));
            }
            out.table[j] = out.table[j + 1] + r.value;
        }
        Ok(out)
    }

    pub fn law(&self) -> &BpsLaw {
        &self.law
    }

    pub fn is_compact(&self) -> bool {
        matches!(self.map, FieldMap::Power(_))
    }

    fn field_at(&self, tau: f64) -> f64 {
        match self.map {
            FieldMap::Power(k) => self.vacuum + self.span * tau.powf(k),
            FieldMap::Log => self.vacuum + self.span * 10f64.powf(-LOG_DECADES * (1.0 - tau)),
        }
    }

    fn integrand(&self, tau: f64) -> f64 {
        let field = self.field_at(tau);
        let dfield = match self.map {
            FieldMap::Power(k) => self.span * k * tau.powf(k - 1.0),
            FieldMap::Log => (field - self.vacuum) * LOG_DECADES * std::f64::consts::LN_10,
        };
        let params = self.law.params();
        dfield * params.sector.volume_density(field) * params.charge_scale() / self.law.density(field)
    }

    /// Coordinate at which the field equals `field_at(tau)`.
    fn coordinate_at(&self, tau: f64) -> f64 {
        let pos = tau * PANELS as f64;
        let j = (pos.floor() as usize).min(PANELS - 1);
        let b = (j + 1) as f64 / PANELS as f64;
        if tau >= b {
            return self.table[j + 1];
        }
        self.table[j + 1] + self.integrator.integrate(|t| self.integrand(t), tau, b).value
    }

    /// Coordinate where the field reaches the vacuum (or, for non-compact
    /// profiles, `1e-10` of the chart width above it).
    pub fn extent(&self) -> f64 {
        self.table[0]
    }

    /// Coordinate at which the profile takes the given field value.
    pub fn coordinate_of(&self, field: f64) -> f64 {
        let u = ((field - self.vacuum) / self.span).clamp(0.0, 1.0);
        let tau = match self.map {
            FieldMap::Power(k) => u.powf(1.0 / k),
            FieldMap::Log => (1.0 + u.log10() / LOG_DECADES).max(0.0),
        };
        self.coordinate_at(tau)
    }

    fn tau_of(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        if x >= self.table[0] {
            return 0.0;
        }
        // table is decreasing: find j with table[j+1] <= x <= table[j]
        let j = self.table.partition_point(|&t| t > x).saturating_sub(1).min(PANELS - 1);
        let a = j as f64 / PANELS as f64;
        let b = (j + 1) as f64 / PANELS as f64;
        let fdf = |t: f64| (self.coordinate_at(t) - x, -self.integrand(t));
        safeguarded_newton(fdf, a, b, 1e-16, 200).unwrap_or(0.5 * (a + b))
    }
}

impl ProfileCurve for InverseMap {
    fn field(&self, x: f64) -> f64 {
        if self.is_compact() && x >= self.table[0] {
            return self.vacuum;
        }
        self.field_at(self.tau_of(x))
    }

    fn volume_slope(&self, x: f64) -> f64 {
        self.law.volume_slope(self.field(x))
    }

    fn radius(&self) -> Option<f64> {
        self.is_compact().then(|| self.table[0])
    }

    fn extent(&self) -> f64 {
        self.table[0]
    }
}

/// Solves the BPS equation for `potential` and samples the result on a
/// uniform grid. Compactons get `grid.padding` exact-vacuum samples beyond
/// the radius.
pub fn solve_profile(params: &ModelParams, potential: &PotentialSpec, grid: &GridSpec) -> Result<SolitonProfile> {
    let law = BpsLaw::new(*params, potential.clone())?;
    solve_law(law, grid)
}

/// [`solve_profile`] for an already constructed law.
pub fn solve_law(law: BpsLaw, grid: &GridSpec) -> Result<SolitonProfile> {
    let map = InverseMap::build(law)?;
    let coords = grid.coordinates(map.extent(), map.is_compact())?;
    let law = map.law().clone();
    Ok(SolitonProfile::from_curve(&law, Arc::new(map), &coords))
}

/// Radius at which a forward adaptive integration of the BPS equation in the
/// volume coordinate first drops below `1e-10` of the chart width. Used to
/// cross-check the inverse map.
pub fn forward_radius(law: &BpsLaw, x_max: f64) -> Option<f64> {
    let params = *law.params();
    let sector = params.sector;
    let (vacuum, anti) = sector.domain();
    let top = sector.volume_coordinate(anti);
    let floor = 1e-10 * (anti - vacuum);
    let rhs = |psi: f64| {
        let field = sector.field_from_volume(psi.clamp(0.0, top));
        law.volume_slope(field)
    };
    let opts = StepperOptions { rel_tol: 1e-12, abs_tol: 1e-15, initial_step: 1e-6 * x_max, ..Default::default() };
    stepper::integrate(rhs, 0.0, top, x_max, &opts, |psi| sector.field_from_volume(psi.max(0.0)) < floor).event
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{KineticLaw, Sector};
    use crate::profile::exact::{baby_old_exact, baby_old_radius, skyrme_bps_exact, skyrme_standard_exact};
    use crate::profile::{skyrme_bps_radius, skyrme_standard_radius};

    #[test]
    fn baby_compacton_matches_closed_form() {
        let params = ModelParams::new(Sector::Baby2D, 1.0, 1.0, 1);
        let pot = PotentialSpec::old_baby_power(1.0).unwrap();
        let prof = solve_profile(&params, &pot, &GridSpec::default()).unwrap();
        let x0 = baby_old_radius(&params);
        assert!((prof.compacton_radius.unwrap() - x0).abs() < 1e-12);
        let worst =
            prof.samples.iter().map(|s| (s.field - baby_old_exact(s.coordinate, &params)).abs()).fold(0.0, f64::max);
        assert!(worst < 1e-12, "{worst}");
        assert_eq!(prof.samples.len(), 1010);
        prof.check_invariants().unwrap();
    }

    #[test]
    fn radius_scales_with_charge() {
        let pot = PotentialSpec::old_baby_power(1.0).unwrap();
        let p2 = ModelParams::new(Sector::Baby2D, 1.0, 1.0, 2);
        let map = InverseMap::build(BpsLaw::new(p2, pot).unwrap()).unwrap();
        assert!((map.radius().unwrap() - 0.389_848_4).abs() < 1e-6);
    }

    #[test]
    fn skyrme_compactons_match_closed_forms() {
        for sigma in [0.25_f64, 1.0, 4.0] {
            let params = ModelParams::new(Sector::Skyrme3D, sigma.sqrt(), 1.0, 1);
            let std = solve_profile(&params, &PotentialSpec::skyrme_standard(), &GridSpec::samples(300)).unwrap();
            assert!((std.compacton_radius.unwrap() - skyrme_standard_radius(sigma)).abs() < 1e-10);
            for s in &std.samples {
                assert!((s.field - skyrme_standard_exact(s.coordinate, sigma)).abs() < 1e-8);
            }
            let bps = solve_profile(&params, &PotentialSpec::bps_potential(), &GridSpec::samples(300)).unwrap();
            assert!((bps.compacton_radius.unwrap() - skyrme_bps_radius(sigma)).abs() < 1e-10);
            for s in &bps.samples {
                assert!((s.field - skyrme_bps_exact(s.coordinate, sigma)).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn zero_mu_has_no_soliton() {
        let params = ModelParams::new(Sector::Baby2D, 1.0, 0.0, 1);
        let err = solve_profile(&params, &PotentialSpec::old_baby_power(1.0).unwrap(), &GridSpec::default());
        match err {
            Err(Error::NoSoliton(msg)) => assert!(msg.contains("cannot yield a continuous solution")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn interior_zero_is_not_integrable() {
        let pot = PotentialSpec::custom(
            "double-well",
            (0.0, 1.0),
            1.0,
            |h: f64| h * (h - 0.5).powi(2) * 4.0,
            |h: f64| 4.0 * ((h - 0.5).powi(2) + 2.0 * h * (h - 0.5)),
        )
        .unwrap();
        let params = ModelParams::new(Sector::Baby2D, 1.0, 1.0, 1);
        assert!(matches!(solve_profile(&params, &pot, &GridSpec::default()), Err(Error::NonIntegrable(_))));
    }

    #[test]
    fn power_family_compacton() {
        // α_K = 1, V = h: h = (1 − πx/|n|)², radius |n|/π
        let params =
            ModelParams::new(Sector::Baby2D, 1.0, 1.0, 2).with_kinetic_law(KineticLaw::PowerFamily { alpha: 1.0 });
        let prof =
            solve_profile(&params, &PotentialSpec::old_baby_power(1.0).unwrap(), &GridSpec::samples(200)).unwrap();
        assert!((prof.compacton_radius.unwrap() - 2.0 / std::f64::consts::PI).abs() < 1e-12);
        for s in &prof.samples {
            let expected = (1.0 - std::f64::consts::PI * s.coordinate / 2.0).max(0.0).powi(2);
            assert!((s.field - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn forward_stepper_agrees_on_radius() {
        let params = ModelParams::new(Sector::Baby2D, 0.8, 1.3, 1);
        let law = BpsLaw::new(params, PotentialSpec::old_baby_power(1.0).unwrap()).unwrap();
        let map = InverseMap::build(law.clone()).unwrap();
        let r = forward_radius(&law, 1.0).unwrap();
        assert!((r - map.radius().unwrap()).abs() < 1e-4, "{r} vs {:?}", map.radius());

        let params = ModelParams::new(Sector::Skyrme3D, 1.0, 1.0, 1);
        let law = BpsLaw::new(params, PotentialSpec::bps_potential()).unwrap();
        let r = forward_radius(&law, 5.0).unwrap();
        assert!((r - skyrme_bps_radius(1.0)).abs() < 1e-4, "{r}");
    }

    #[test]
    fn non_compact_profile_reaches_small_field() {
        let params = ModelParams::new(Sector::Baby2D, 1.0, 1.0, 1);
        let prof = solve_profile(&params, &PotentialSpec::old_baby_power(2.0).unwrap(), &GridSpec::default()).unwrap();
        assert!(prof.compacton_radius.is_none());
        assert_eq!(prof.samples.len(), 1000);
        prof.check_invariants().unwrap();
    }

    #[test]
    fn coordinate_of_inverts_field() {
        let params = ModelParams::new(Sector::Baby2D, 1.0, 1.0, 1);
        let map = InverseMap::build(BpsLaw::new(params, PotentialSpec::old_baby_power(3.0).unwrap()).unwrap()).unwrap();
        for h in [0.9, 0.5, 0.1, 1e-3, 1e-6] {
            let x = map.coordinate_of(h);
            assert!((map.field(x) / h - 1.0).abs() < 1e-9, "{h}");
        }
    }
}

use serde::{Deserialize, Serialize};

use super::SolitonProfile;
use crate::error::{Error, Result};
use crate::model::Sector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Localization {
    Compacton,
    Exponential,
    PowerLaw,
    /// Both tail models fit equally well.
    Ambiguous,
}

/// Predicts how the DBI soliton approaches the vacuum from the leading
/// power of the potential there.
///
/// The BPS equation in the volume coordinate `ψ` (`h`, or `η ~ ξ³/3`) reads
/// `ψ' ∝ −√V`, so the vacuum is reached at finite radius iff `V` vanishes
/// more slowly than `ψ²`. In chart exponents that is `α < 2` for the baby
/// sector and `α < 6` (in `ξ`) for the Skyrme sector; equality gives
/// exponential decay and larger exponents power-law tails.
pub fn classify_localization(vacuum_exponent: f64, sector: Sector) -> Result<Localization> {
    if !(vacuum_exponent > 0.0) || !vacuum_exponent.is_finite() {
        return Err(Error::InvalidParameter(format!("vacuum exponent must be positive, got {vacuum_exponent}")));
    }
    let threshold = sector.localization_threshold();
    Ok(if (vacuum_exponent - threshold).abs() <= 1e-12 * threshold {
        Localization::Exponential
    } else if vacuum_exponent < threshold {
        Localization::Compacton
    } else {
        Localization::PowerLaw
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    pub class: Localization,
    /// Coefficient of determination of `log field` against the coordinate.
    pub r2_exponential: f64,
    /// Coefficient of determination of `log field` against `log coordinate`.
    pub r2_power: f64,
    pub samples: usize,
}

const TAIL_CEILING: f64 = 1e-3;
const MIN_TAIL_SAMPLES: usize = 10;

fn r_squared(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 || syy == 0.0 {
        return 0.0;
    }
    sxy * sxy / (sxx * syy)
}

/// Classifies a sampled profile empirically. A finite compacton radius wins
/// outright; otherwise samples with field below `1e-3` are fitted by an
/// exponential and a power law and the better fit is reported.
pub fn tail_fit(profile: &SolitonProfile) -> Result<TailFit> {
    if profile.compacton_radius.is_some() {
        return Ok(TailFit {
            class: Localization::Compacton,
            r2_exponential: f64::NAN,
            r2_power: f64::NAN,
            samples: 0,
        });
    }
    let vacuum = profile.sector.domain().0;
    let tail: Vec<(f64, f64)> = profile
        .samples
        .iter()
        .filter(|s| s.coordinate > 0.0)
        .map(|s| (s.coordinate, s.field - vacuum))
        .filter(|&(_, f)| f > 0.0 && f <= TAIL_CEILING)
        .collect();
    if tail.len() < MIN_TAIL_SAMPLES {
        return Err(Error::InsufficientData(format!(
            "only {} samples below {TAIL_CEILING} in the tail, need {MIN_TAIL_SAMPLES}",
            tail.len()
        )));
    }
    let exp_pts: Vec<(f64, f64)> = tail.iter().map(|&(x, f)| (x, f.ln())).collect();
    let pow_pts: Vec<(f64, f64)> = tail.iter().map(|&(x, f)| (x.ln(), f.ln())).collect();
    let r2_exponential = r_squared(&exp_pts);
    let r2_power = r_squared(&pow_pts);
    let class = if (r2_exponential - r2_power).abs() <= 1e-3 {
        Localization::Ambiguous
    } else if r2_exponential > r2_power {
        Localization::Exponential
    } else {
        Localization::PowerLaw
    };
    Ok(TailFit { class, r2_exponential, r2_power, samples: tail.len() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn baby_trichotomy() {
        assert_eq!(classify_localization(1.0, Sector::Baby2D).unwrap(), Localization::Compacton);
        assert_eq!(classify_localization(2.0, Sector::Baby2D).unwrap(), Localization::Exponential);
        assert_eq!(classify_localization(3.0, Sector::Baby2D).unwrap(), Localization::PowerLaw);
    }

    #[test]
    fn skyrme_trichotomy() {
        for a in [1.0, 1.5, 2.0, 3.0, 5.9] {
            assert_eq!(classify_localization(a, Sector::Skyrme3D).unwrap(), Localization::Compacton);
        }
        assert_eq!(classify_localization(6.0, Sector::Skyrme3D).unwrap(), Localization::Exponential);
        assert_eq!(classify_localization(8.0, Sector::Skyrme3D).unwrap(), Localization::PowerLaw);
    }

    #[test]
    fn rejects_bad_exponent() {
        assert!(classify_localization(0.0, Sector::Baby2D).is_err());
        assert!(classify_localization(f64::NAN, Sector::Skyrme3D).is_err());
    }

    #[test]
    fn r_squared_of_a_line_is_one() {
        let pts: Vec<(f64, f64)> = (0..10).map(|i| (f64::from(i), 3.0 - 2.0 * f64::from(i))).collect();
        assert!((r_squared(&pts) - 1.0).abs() < 1e-15);
    }
}

use std::fmt;
use std::path::Path;

use serde::Serialize;

use sdiff_dbi::bounds::{
    bound_energy, compare_reference, optimize_bound, sharpness, BoundCertificate, ReferenceComparison, Sharpness,
};
use sdiff_dbi::bps::{eom_residual, EomResidualReport};
use sdiff_dbi::config::{Command, RunConfig, SweepAxis};
use sdiff_dbi::format::{fmt_f64, to_json};
use sdiff_dbi::observables::{
    charge_quadrature, closed_form_energy, energy_quadrature, energy_report, large_beta_sweep, small_mu_sweep,
    EnergyReport,
};
use sdiff_dbi::profile::{
    classify_localization, exact_profile, solve_profile, tail_fit, write_profile_csv, GridSpec, Localization,
    SolitonProfile, TailFit,
};
use sdiff_dbi::{parse_potential, validate_params, Error, KineticLaw, ModelParams, PotentialSpec, Sector};

use crate::output::write_atomic;

#[derive(Debug)]
pub enum CliError {
    Model(Error),
    Config(String),
    Io(std::io::Error),
    Verify(Vec<String>),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Model(Error::NoSoliton(_) | Error::NonIntegrable(_)) => 2,
            CliError::Model(Error::Optimizer { .. }) => 4,
            CliError::Verify(_) => 3,
            CliError::Model(_) | CliError::Config(_) | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Model(e) => write!(f, "{e}"),
            CliError::Config(msg) => f.write_str(msg),
            CliError::Io(e) => write!(f, "i/o: {e}"),
            CliError::Verify(failed) => write!(f, "verification failed: {}", failed.join(", ")),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Model(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type Result<T> = std::result::Result<T, CliError>;

// Console lines are informational; a closed stdout must not abort a run whose
// files are already written.
macro_rules! say {
    ($($arg:tt)*) => {{
        use std::io::Write;
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

pub fn run(cfg: &RunConfig) -> Result<()> {
    match cfg.command {
        Command::Solve => solve(cfg),
        Command::Verify => verify(cfg),
        Command::Bound => bound(cfg),
        Command::Sweep => sweep(cfg),
        Command::Classify => classify(cfg),
    }
}

fn model(cfg: &RunConfig) -> Result<(ModelParams, PotentialSpec)> {
    let mut params = ModelParams::new(cfg.sector, cfg.beta, cfg.mu, cfg.n);
    if let Some(alpha) = cfg.alpha_k {
        params = params.with_kinetic_law(KineticLaw::PowerFamily { alpha });
    }
    let params = validate_params(params)?;
    let potential = parse_potential(cfg.potential_tag(), cfg.sector)?;
    Ok((params, potential))
}

fn write_json<T: Serialize>(dir: &Path, name: &str, value: &T) -> Result<()> {
    let json = to_json(value).map_err(|e| CliError::Config(format!("json: {e}")))?;
    write_atomic(&dir.join(name), json.as_bytes())?;
    Ok(())
}

#[derive(Serialize)]
struct RunInfo<'a> {
    seed: u64,
    sector: Sector,
    potential: &'a str,
    kinetic_law: KineticLaw,
    beta: f64,
    mu: f64,
    n: i32,
}

impl<'a> RunInfo<'a> {
    fn new(cfg: &'a RunConfig, params: &ModelParams) -> Self {
        Self {
            seed: cfg.seed,
            sector: cfg.sector,
            potential: cfg.potential_tag(),
            kinetic_law: params.kinetic_law,
            beta: params.beta,
            mu: params.mu,
            n: params.charge,
        }
    }
}

#[derive(Serialize)]
struct ResidualSummary {
    spacing: f64,
    max_abs_residual: f64,
    max_scaled_residual: f64,
}

impl From<&EomResidualReport> for ResidualSummary {
    fn from(r: &EomResidualReport) -> Self {
        Self { spacing: r.spacing, max_abs_residual: r.max_abs_residual, max_scaled_residual: r.max_scaled_residual }
    }
}

#[derive(Serialize)]
struct SolveSummary<'a> {
    #[serde(flatten)]
    run: RunInfo<'a>,
    grid: usize,
    compacton_radius: Option<f64>,
    energy: EnergyReport,
    eom_residual: Option<ResidualSummary>,
}

fn solve(cfg: &RunConfig) -> Result<()> {
    let (params, potential) = model(cfg)?;
    let profile = solve_profile(&params, &potential, &GridSpec::samples(cfg.grid))?;
    let energy = energy_report(&profile, &potential)?;
    let residual = eom_residual(&profile, &potential).ok();
    let summary = SolveSummary {
        run: RunInfo::new(cfg, &params),
        grid: profile.samples.len(),
        compacton_radius: profile.compacton_radius,
        energy,
        eom_residual: residual.as_ref().map(ResidualSummary::from),
    };
    let mut csv = Vec::new();
    write_profile_csv(&mut csv, &profile)?;
    let dir = Path::new(&cfg.out);
    write_atomic(&dir.join("profile.csv"), &csv)?;
    write_json(dir, "summary.json", &summary)?;
    say!("energy {}", fmt_f64(energy.energy_quadrature));
    say!("charge {}", fmt_f64(energy.charge));
    if let Some(r) = profile.compacton_radius {
        say!("compacton radius {}", fmt_f64(r));
    }
    Ok(())
}

#[derive(Serialize)]
struct Check {
    name: String,
    passed: bool,
    value: f64,
    threshold: f64,
}

impl Check {
    fn at_most(name: String, value: f64, threshold: f64) -> Self {
        Self { passed: value <= threshold, name, value, threshold }
    }
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    #[serde(flatten)]
    run: RunInfo<'a>,
    inject_perturbation: f64,
    checks: Vec<Check>,
    passed: bool,
}

const SKYRME_SIGMAS: [f64; 3] = [0.25, 1.0, 4.0];
const RICHARDSON_SPACINGS: (f64, f64) = (1e-3, 5e-4);

/// A profile on a uniform grid of spacing `delta`; closed forms where they
/// exist.
fn profile_at(params: &ModelParams, potential: &PotentialSpec, delta: f64) -> Result<SolitonProfile> {
    let grid = GridSpec::spacing(delta);
    Ok(match closed_form_energy(params, potential) {
        Some(_) => exact_profile(params, potential, &grid)?,
        None => solve_profile(params, potential, &grid)?,
    })
}

fn point_checks(params: &ModelParams, potential: &PotentialSpec, cfg: &RunConfig, label: &str) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let profile = solve_profile(params, potential, &GridSpec::samples(cfg.grid))?;
    checks.push(Check {
        name: format!("profile_invariants{label}"),
        passed: profile.check_invariants().is_ok(),
        value: f64::from(u8::from(profile.check_invariants().is_ok())),
        threshold: 1.0,
    });

    // Second-order convergence of the field-equation residual.
    let extent = profile.compacton_radius.unwrap_or_else(|| profile.samples.last().map_or(1.0, |s| s.coordinate));
    let scale = if extent > 10.0 { extent / 1000.0 / RICHARDSON_SPACINGS.0 } else { 1.0 };
    let mut coarse = profile_at(params, potential, scale * RICHARDSON_SPACINGS.0)?;
    let fine = profile_at(params, potential, scale * RICHARDSON_SPACINGS.1)?;
    if cfg.inject_perturbation != 0.0 {
        coarse = coarse.perturbed(cfg.inject_perturbation, 0.5 * extent, 0.05 * extent);
    }
    let ratio =
        eom_residual(&coarse, potential)?.max_scaled_residual / eom_residual(&fine, potential)?.max_scaled_residual;
    checks.push(Check::at_most(format!("eom_richardson_ratio{label}"), (ratio - 4.0).abs(), 0.5));

    let charge = charge_quadrature(&profile)?;
    checks.push(Check::at_most(format!("charge{label}"), (charge - f64::from(params.charge)).abs(), 1e-6));

    let report = energy_report(&profile, potential)?;
    if let Some(rel) = report.rel_discrepancy_closed {
        checks.push(Check::at_most(format!("closed_form{label}"), rel, cfg.tol));
    }
    if let Some(rel) = report.rel_discrepancy_avg {
        checks.push(Check::at_most(format!("average_formula{label}"), rel, 1e-8));
    }

    let per_charge: Vec<f64> = (1..=5)
        .map(|n| {
            let p = params.with_charge(n);
            let prof = solve_profile(&p, potential, &GridSpec::samples(16))?;
            Ok(energy_quadrature(&prof, potential)? / f64::from(n))
        })
        .collect::<Result<_>>()?;
    let spread = per_charge.iter().map(|e| (e - per_charge[0]).abs() / per_charge[0]).fold(0.0, f64::max);
    checks.push(Check::at_most(format!("linearity{label}"), spread, 1e-8));
    Ok(checks)
}

fn verify(cfg: &RunConfig) -> Result<()> {
    let (params, potential) = model(cfg)?;
    let checks = match params.sector {
        Sector::Baby2D => point_checks(&params, &potential, cfg, "")?,
        Sector::Skyrme3D => {
            let mut all = Vec::new();
            for sigma in SKYRME_SIGMAS {
                let p = params.with_beta(params.mu * sigma.sqrt());
                all.extend(point_checks(&p, &potential, cfg, &format!("@sigma={sigma}"))?);
            }
            all
        }
    };
    let failed: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| c.name.clone()).collect();
    let report = VerifyReport {
        run: RunInfo::new(cfg, &params),
        inject_perturbation: cfg.inject_perturbation,
        passed: failed.is_empty(),
        checks,
    };
    write_json(Path::new(&cfg.out), "verify.json", &report)?;
    for c in &report.checks {
        say!("{} {} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, fmt_f64(c.value));
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Verify(failed))
    }
}

/// The order-3 constant as the reference comparison is usually quoted.
const QUOTED_CONSTANT: f64 = 3.5;

#[derive(Serialize)]
struct BoundOutput {
    seed: u64,
    #[serde(flatten)]
    certificate: BoundCertificate,
    free_parameters: Vec<f64>,
    sharpness: Sharpness,
    bound_energy: f64,
    reference_comparison: Option<ReferenceComparison>,
    reference_comparison_c_3_5: Option<ReferenceComparison>,
}

fn bound(cfg: &RunConfig) -> Result<()> {
    if cfg.compare_pavlovskii && cfg.beta != 1.0 {
        return Err(CliError::Config("the reference comparison needs --beta 1".into()));
    }
    let certificate = optimize_bound(cfg.order, cfg.beta)?.verified(cfg.samples, cfg.seed);
    let reference_comparison = (cfg.beta == 1.0).then(|| compare_reference(&certificate)).transpose()?;
    let reference_comparison_c_3_5 = if cfg.compare_pavlovskii {
        Some(compare_reference(&certificate.clone().with_constant(QUOTED_CONSTANT))?)
    } else {
        None
    };
    let out = BoundOutput {
        seed: cfg.seed,
        free_parameters: certificate.free_parameters(),
        sharpness: sharpness(&certificate),
        bound_energy: bound_energy(&certificate, 1),
        certificate,
        reference_comparison,
        reference_comparison_c_3_5,
    };
    write_json(Path::new(&cfg.out), "certificate.json", &out)?;
    say!("constant {}", fmt_f64(out.certificate.constant));
    if let Some(alpha) = out.certificate.alpha {
        say!("alpha {}", fmt_f64(alpha));
    }
    say!("min slack {}", fmt_f64(out.certificate.min_slack.unwrap_or(f64::NAN)));
    for (label, cmp) in [("", &out.reference_comparison), (" (C = 3.5)", &out.reference_comparison_c_3_5)] {
        if let Some(c) = cmp {
            say!(
                "reference {} bound {} relative error {}{label}",
                fmt_f64(c.reference),
                fmt_f64(c.bound),
                fmt_f64(c.relative_error)
            );
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct SweepOutput<'a> {
    #[serde(flatten)]
    run: RunInfo<'a>,
    axis: SweepAxis,
    values: Vec<f64>,
    /// Slope of `E(μ)` or exponent of the distance in `β`.
    fit: f64,
    expected: f64,
}

fn sweep(cfg: &RunConfig) -> Result<()> {
    if cfg.values.len() < 3 {
        return Err(
            Error::InsufficientData(format!("a sweep needs at least 3 values, got {}", cfg.values.len())).into()
        );
    }
    let (params, potential) = model(cfg)?;
    let mut csv = String::from("parameter,energy,distance_to_limit\n");
    let (fit, expected) = match cfg.axis {
        SweepAxis::Mu => {
            let s = small_mu_sweep(&params, &cfg.values)?;
            for (mu, e) in s.mu.iter().zip(&s.energy) {
                let linear = s.expected_slope * mu;
                csv.push_str(&format!("{},{},{}\n", fmt_f64(*mu), fmt_f64(*e), fmt_f64((e - linear).abs() / linear)));
            }
            (s.slope, s.expected_slope)
        }
        SweepAxis::Beta => {
            let s = large_beta_sweep(&params, &potential, &cfg.values)?;
            for ((b, e), d) in s.beta.iter().zip(&s.energy).zip(&s.distance) {
                csv.push_str(&format!("{},{},{}\n", fmt_f64(*b), fmt_f64(*e), fmt_f64(*d)));
            }
            (s.exponent, -2.0)
        }
    };
    let out =
        SweepOutput { run: RunInfo::new(cfg, &params), axis: cfg.axis, values: cfg.values.clone(), fit, expected };
    let dir = Path::new(&cfg.out);
    write_atomic(&dir.join("sweep.csv"), csv.as_bytes())?;
    write_json(dir, "sweep.json", &out)?;
    say!("fit {} (expected {})", fmt_f64(fit), fmt_f64(expected));
    Ok(())
}

#[derive(Serialize)]
struct ClassifyOutput<'a> {
    #[serde(flatten)]
    run: RunInfo<'a>,
    vacuum_exponent: f64,
    predicted: Localization,
    empirical: TailFit,
    agree: bool,
}

fn classify(cfg: &RunConfig) -> Result<()> {
    let (params, potential) = model(cfg)?;
    let predicted = classify_localization(potential.vacuum_exponent(), params.sector)?;
    let profile = solve_profile(&params, &potential, &GridSpec::samples(cfg.grid))?;
    let empirical = tail_fit(&profile)?;
    let out = ClassifyOutput {
        run: RunInfo::new(cfg, &params),
        vacuum_exponent: potential.vacuum_exponent(),
        predicted,
        agree: empirical.class == predicted,
        empirical,
    };
    write_json(Path::new(&cfg.out), "classify.json", &out)?;
    say!("predicted {:?} empirical {:?}", out.predicted, out.empirical.class);
    Ok(())
}

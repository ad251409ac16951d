//! `sdiff-dbi`: solves, verifies and bounds BPS solitons of the DBI models.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sdiff_dbi::config::{Command, RunConfig};

#[derive(Parser)]
#[command(name = "sdiff-dbi", version, about, allow_negative_numbers = true)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve a profile; writes profile.csv and summary.json.
    Solve(Flags),
    /// Run the invariant checks; writes verify.json, exit 3 on failure.
    Verify(Flags),
    /// Optimize and certify a bound; writes certificate.json.
    Bound(Flags),
    /// Sweep mu or beta; writes sweep.csv and sweep.json.
    Sweep(Flags),
    /// Predict and measure the localization class; writes classify.json.
    Classify(Flags),
}

/// Every flag maps onto a config key; flags override `--config`, which
/// overrides the defaults.
#[derive(Args)]
struct Flags {
    /// key = value file with defaults for this run.
    #[arg(long)]
    config: Option<PathBuf>,
    /// baby or skyrme.
    #[arg(long)]
    sector: Option<String>,
    /// old[:a], power:a, standard or bps.
    #[arg(long)]
    potential: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    #[arg(long)]
    mu: Option<String>,
    /// Topological charge.
    #[arg(long)]
    n: Option<String>,
    /// Use the power-family kinetic law with this exponent.
    #[arg(long)]
    alpha_k: Option<String>,
    /// Number of profile samples.
    #[arg(long)]
    grid: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Relative tolerance of the closed-form checks.
    #[arg(long)]
    tol: Option<String>,
    /// Truncation order of the bound.
    #[arg(long)]
    order: Option<String>,
    /// Monte-Carlo triples for the bound.
    #[arg(long)]
    samples: Option<String>,
    /// mu or beta.
    #[arg(long)]
    axis: Option<String>,
    /// Comma-separated sweep values.
    #[arg(long)]
    values: Option<String>,
    /// Also report the reference comparison with C = 3.5.
    #[arg(long)]
    compare_pavlovskii: bool,
    /// Add a Gaussian bump of this amplitude before the residual check.
    #[arg(long, num_args = 0..=1, default_missing_value = "0.01")]
    inject_perturbation: Option<String>,
}

fn build_config(command: Command, flags: &Flags) -> Result<RunConfig, String> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &flags.config {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        cfg.merge_text(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    cfg.command = command;
    let pairs = [
        ("sector", &flags.sector),
        ("potential", &flags.potential),
        ("beta", &flags.beta),
        ("mu", &flags.mu),
        ("n", &flags.n),
        ("alpha_k", &flags.alpha_k),
        ("grid", &flags.grid),
        ("out", &flags.out),
        ("seed", &flags.seed),
        ("tol", &flags.tol),
        ("order", &flags.order),
        ("samples", &flags.samples),
        ("axis", &flags.axis),
        ("values", &flags.values),
        ("inject_perturbation", &flags.inject_perturbation),
    ];
    for (key, value) in pairs {
        if let Some(v) = value {
            cfg.set(key, v).map_err(|e| format!("--{}: {e}", key.replace('_', "-")))?;
        }
    }
    if flags.compare_pavlovskii {
        cfg.compare_pavlovskii = true;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let (command, flags) = match &cli.command {
        Cmd::Solve(f) => (Command::Solve, f),
        Cmd::Verify(f) => (Command::Verify, f),
        Cmd::Bound(f) => (Command::Bound, f),
        Cmd::Sweep(f) => (Command::Sweep, f),
        Cmd::Classify(f) => (Command::Classify, f),
    };
    let cfg = match build_config(command, flags) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    match commands::run(&cfg) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

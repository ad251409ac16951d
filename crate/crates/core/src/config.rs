//! Plain-text run configuration: one `key = value` per line, `#` comments.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::format::fmt_f64;
use crate::model::Sector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Solve,
    Verify,
    Bound,
    Sweep,
    Classify,
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Command::Solve => "solve",
            Command::Verify => "verify",
            Command::Bound => "bound",
            Command::Sweep => "sweep",
            Command::Classify => "classify",
        })
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "solve" => Command::Solve,
            "verify" => Command::Verify,
            "bound" => Command::Bound,
            "sweep" => Command::Sweep,
            "classify" => Command::Classify,
            _ => return Err(Error::InvalidParameter(format!("unknown command '{s}'"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepAxis {
    Mu,
    Beta,
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SweepAxis::Mu => "mu",
            SweepAxis::Beta => "beta",
        })
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "mu" => Ok(SweepAxis::Mu),
            "beta" => Ok(SweepAxis::Beta),
            _ => Err(Error::InvalidParameter(format!("unknown sweep axis '{s}', expected mu or beta"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    pub sector: Sector,
    /// Potential tag as accepted by [`crate::parse_potential`]; the sector
    /// default (`old:1` or `standard`) when absent.
    pub potential: Option<String>,
    pub beta: f64,
    pub mu: f64,
    pub n: i32,
    /// Power-family exponent; the DBI law when absent.
    pub alpha_k: Option<f64>,
    pub grid: usize,
    /// Output directory.
    pub out: String,
    pub seed: u64,
    /// Relative tolerance of the closed-form cross-checks in `verify`.
    pub tol: f64,
    pub order: usize,
    pub samples: usize,
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub compare_pavlovskii: bool,
    /// Amplitude of a Gaussian bump added to the profile before the residual
    /// check of `verify`; zero disables it.
    pub inject_perturbation: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: Command::Solve,
            sector: Sector::Baby2D,
            potential: None,
            beta: 1.0,
            mu: 1.0,
            n: 1,
            alpha_k: None,
            grid: 1000,
            out: "out".into(),
            seed: 0,
            tol: 1e-6,
            order: 3,
            samples: 1_000_000,
            axis: SweepAxis::Mu,
            values: Vec::new(),
            compare_pavlovskii: false,
            inject_perturbation: 0.0,
        }
    }
}

fn parse_f64(s: &str) -> Result<f64> {
    match s.parse::<f64>() {
        Ok(x) if x.is_finite() => Ok(x),
        _ => Err(Error::InvalidParameter(format!("expected a finite number, got '{s}'"))),
    }
}

fn parse_int<T: FromStr>(s: &str) -> Result<T> {
    s.parse::<T>().map_err(|_| Error::InvalidParameter(format!("expected an integer, got '{s}'")))
}

/// Parses a comma-separated list of finite numbers, e.g. `1e-2, 1e-3`.
pub fn parse_value_list(text: &str) -> Result<Vec<f64>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(|item| parse_f64(item.trim())).collect()
}

fn format_value_list(values: &[f64]) -> String {
    values.iter().map(|&v| fmt_f64(v)).collect::<Vec<_>>().join(",")
}

impl RunConfig {
    pub fn potential_tag(&self) -> &str {
        match (&self.potential, self.sector) {
            (Some(p), _) => p,
            (None, Sector::Baby2D) => "old:1",
            (None, Sector::Skyrme3D) => "standard",
        }
    }

    /// Sets one key from its text value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let value = value.trim();
        match key {
            "command" => self.command = value.parse()?,
            "sector" => self.sector = value.parse()?,
            "potential" => {
                if value.contains(['\n', '\r', '#']) {
                    return Err(Error::InvalidParameter(format!("bad potential tag '{value}'")));
                }
                self.potential = (!value.is_empty()).then(|| value.to_string());
            }
            "beta" => self.beta = parse_f64(value)?,
            "mu" => self.mu = parse_f64(value)?,
            "n" => self.n = parse_int(value)?,
            "alpha_k" => self.alpha_k = if value.is_empty() { None } else { Some(parse_f64(value)?) },
            "grid" => self.grid = parse_int(value)?,
            "out" => {
                if value.is_empty() || value.contains(['\n', '\r', '#']) {
                    return Err(Error::InvalidParameter(format!("bad output path '{value}'")));
                }
                self.out = value.to_string();
            }
            "seed" => self.seed = parse_int(value)?,
            "tol" => self.tol = parse_f64(value)?,
            "order" => self.order = parse_int(value)?,
            "samples" => self.samples = parse_int(value)?,
            "axis" => self.axis = value.parse()?,
            "values" => self.values = parse_value_list(value)?,
            "compare_pavlovskii" => {
                self.compare_pavlovskii = value
                    .parse()
                    .map_err(|_| Error::InvalidParameter(format!("expected true or false, got '{value}'")))?
            }
            "inject_perturbation" => self.inject_perturbation = parse_f64(value)?,
            _ => return Err(Error::InvalidParameter(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    /// Applies the entries of a config file on top of `self`. Keys may not
    /// repeat.
    pub fn merge_text(&mut self, text: &str) -> Result<()> {
        let mut seen = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split_once('#').map_or(raw, |(l, _)| l).trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                line: line_no,
                message: format!("expected key = value, got '{line}'"),
            })?;
            let key = key.trim();
            if seen.contains(&key) {
                return Err(Error::Parse { line: line_no, message: format!("duplicate key '{key}'") });
            }
            seen.push(key);
            self.set(key, value).map_err(|e| Error::Parse { line: line_no, message: e.to_string() })?;
        }
        Ok(())
    }

    /// Defaults overridden by the entries of `text`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        cfg.merge_text(text)?;
        Ok(cfg)
    }

    /// Serializes every key; [`RunConfig::parse`] reads it back unchanged.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            out.push_str(k);
            out.push_str(" = ");
            out.push_str(&v);
            out.push('\n');
        };
        put("command", self.command.to_string());
        put("sector", self.sector.to_string());
        put("potential", self.potential.clone().unwrap_or_default());
        put("beta", fmt_f64(self.beta));
        put("mu", fmt_f64(self.mu));
        put("n", self.n.to_string());
        put("alpha_k", self.alpha_k.map(fmt_f64).unwrap_or_default());
        put("grid", self.grid.to_string());
        put("out", self.out.clone());
        put("seed", self.seed.to_string());
        put("tol", fmt_f64(self.tol));
        put("order", self.order.to_string());
        put("samples", self.samples.to_string());
        put("axis", self.axis.to_string());
        put("values", format_value_list(&self.values));
        put("compare_pavlovskii", self.compare_pavlovskii.to_string());
        put("inject_perturbation", fmt_f64(self.inject_perturbation));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let cfg = RunConfig::default();
        assert_eq!(RunConfig::parse(&cfg.to_text()).unwrap(), cfg);
        assert_eq!(RunConfig::parse("").unwrap(), cfg);
    }

    #[test]
    fn file_overrides_defaults() {
        let cfg =
            RunConfig::parse("# sweep\ncommand = sweep\naxis=beta\nvalues = 10, 100,1000 # decades\nalpha_k = 0.75\n")
                .unwrap();
        assert_eq!(cfg.command, Command::Sweep);
        assert_eq!(cfg.axis, SweepAxis::Beta);
        assert_eq!(cfg.values, vec![10.0, 100.0, 1000.0]);
        assert_eq!(cfg.alpha_k, Some(0.75));
        assert_eq!(cfg.beta, 1.0);
    }

    #[test]
    fn errors_carry_line_numbers() {
        match RunConfig::parse("beta = 1\n\nmu = fast\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(RunConfig::parse("beta = 1\nbeta = 2"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(RunConfig::parse("colour = red"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(RunConfig::parse("just words"), Err(Error::Parse { line: 1, .. })));
        assert!(RunConfig::parse("beta = inf").is_err());
    }

    #[test]
    fn value_lists() {
        assert_eq!(parse_value_list("1e-2,1e-3, 1e-4").unwrap(), vec![1e-2, 1e-3, 1e-4]);
        assert!(parse_value_list("").unwrap().is_empty());
        assert!(parse_value_list("1,,2").is_err());
        assert!(parse_value_list("1,NaN").is_err());
    }
}

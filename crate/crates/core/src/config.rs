//! Flat `key = value` run configuration.
//!
//! The grammar is deliberately small: UTF-8 lines, `#` comments, one
//! assignment per line. Unknown keys are rejected with the offending key
//! named, angle values accept a `rad` or `deg` suffix (bare numbers are
//! rad), and every field has a documented default so an empty document is a
//! valid configuration. `render` and `parse` round-trip exactly.

use std::collections::HashSet;
use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::spin::SpinPairParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CliCommand {
    Spectrum,
    Cycle,
    Sweep,
    Power,
}

impl CliCommand {
    pub fn parse(s: &str) -> Option<CliCommand> {
        match s {
            "spectrum" => Some(CliCommand::Spectrum),
            "cycle" => Some(CliCommand::Cycle),
            "sweep" => Some(CliCommand::Sweep),
            "power" => Some(CliCommand::Power),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CliCommand::Spectrum => "spectrum",
            CliCommand::Cycle => "cycle",
            CliCommand::Sweep => "sweep",
            CliCommand::Power => "power",
        }
    }
}

/// Angle grid request: `count` points from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start_rad: f64,
    pub stop_rad: f64,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: CliCommand,
    pub params: SpinPairParams,
    pub kt_hot_pev: f64,
    pub kt_cold_pev: f64,
    pub theta1_rad: f64,
    pub theta2_rad: f64,
    /// Sweep or spectrum grid; None uses the per-command default
    /// (spectrum: 181 points on [0, pi]; sweep: 91 points on [0, pi/2]).
    pub grid: Option<GridSpec>,
    pub iterations: usize,
    pub tau_adiabatic_ns: f64,
    pub tau_isochoric_ns: f64,
    /// Dissipator base rate; None means calibrate from the protocol.
    pub gamma0_per_ns: Option<f64>,
    /// CSV destination; None writes to standard output.
    pub out: Option<String>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: CliCommand::Cycle,
            params: SpinPairParams::default(),
            kt_hot_pev: 100.0,
            kt_cold_pev: 50.0,
            theta1_rad: 0.0,
            theta2_rad: FRAC_PI_2,
            grid: None,
            iterations: 250,
            tau_adiabatic_ns: 1e5,
            tau_isochoric_ns: 1.0,
            gamma0_per_ns: None,
            out: None,
        }
    }
}

/// Keys the parser accepts, in render order.
const KEYS: &[&str] = &[
    "command",
    "gamma_i_mhz_per_t",
    "gamma_s_mhz_per_t",
    "b0_mt",
    "j_hz",
    "r_angstrom",
    "phi",
    "secular",
    "kt_hot_pev",
    "kt_cold_pev",
    "theta1",
    "theta2",
    "grid_start",
    "grid_stop",
    "grid_count",
    "iterations",
    "tau_adiabatic_ns",
    "tau_isochoric_ns",
    "gamma0_per_ns",
    "out",
];

/// Grid fields arrive one key at a time; they only become a GridSpec once
/// all three are present.
#[derive(Debug, Default, Clone, Copy)]
struct PartialGrid {
    start: Option<f64>,
    stop: Option<f64>,
    count: Option<usize>,
}

impl PartialGrid {
    fn from_config(grid: Option<GridSpec>) -> Self {
        match grid {
            Some(g) => PartialGrid {
                start: Some(g.start_rad),
                stop: Some(g.stop_rad),
                count: Some(g.count),
            },
            None => PartialGrid::default(),
        }
    }

    fn finish(self) -> Result<Option<GridSpec>> {
        match (self.start, self.stop, self.count) {
            (None, None, None) => Ok(None),
            (Some(start_rad), Some(stop_rad), Some(count)) => Ok(Some(GridSpec {
                start_rad,
                stop_rad,
                count,
            })),
            _ => Err(Error::validation(
                "grid_start, grid_stop and grid_count must be given together",
            )),
        }
    }
}

/// Parses a document into the defaults. The result is validated.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let mut config = RunConfig::default();
    let mut grid = PartialGrid::default();
    let pairs = parse_pairs(text)?;
    let mut seen = HashSet::new();
    for (line, key, value) in &pairs {
        if !seen.insert(key.clone()) {
            return Err(Error::ParseError {
                line: *line,
                message: format!("duplicate key \"{key}\""),
            });
        }
        apply_pair(&mut config, &mut grid, key, value, *line)?;
    }
    config.grid = grid.finish()?;
    validate(&config)?;
    Ok(config)
}

/// Applies `--set key=value` overrides on top of a parsed config and
/// re-validates. Later overrides win.
pub fn apply_overrides(config: &mut RunConfig, overrides: &[(String, String)]) -> Result<()> {
    let mut grid = PartialGrid::from_config(config.grid);
    for (key, value) in overrides {
        apply_pair(config, &mut grid, key, value, 0)?;
    }
    config.grid = grid.finish()?;
    validate(config)?;
    Ok(())
}

/// Splits a document into (line number, key, value) triples, checking
/// syntax only.
fn parse_pairs(text: &str) -> Result<Vec<(usize, String, String)>> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let content = content.trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(Error::ParseError {
                line,
                message: format!("expected key = value, got \"{content}\""),
            });
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if !KEYS.contains(&key.as_str()) {
            return Err(Error::ParseError {
                line,
                message: format!("unknown key \"{key}\""),
            });
        }
        if value.is_empty() {
            return Err(Error::ParseError {
                line,
                message: format!("key \"{key}\" has no value"),
            });
        }
        out.push((line, key, value));
    }
    Ok(out)
}

fn apply_pair(
    config: &mut RunConfig,
    grid: &mut PartialGrid,
    key: &str,
    value: &str,
    line: usize,
) -> Result<()> {
    match key {
        "command" => {
            config.command = CliCommand::parse(value).ok_or_else(|| Error::ParseError {
                line,
                message: format!(
                    "command must be one of spectrum, cycle, sweep, power; got \"{value}\""
                ),
            })?;
        }
        "gamma_i_mhz_per_t" => config.params.gamma_i_mhz_per_t = parse_number(key, value, line)?,
        "gamma_s_mhz_per_t" => config.params.gamma_s_mhz_per_t = parse_number(key, value, line)?,
        "b0_mt" => config.params.b0_mt = parse_number(key, value, line)?,
        "j_hz" => config.params.j_hz = parse_number(key, value, line)?,
        "r_angstrom" => config.params.r_angstrom = parse_number(key, value, line)?,
        "phi" => config.params.phi_rad = parse_angle(key, value, line)?,
        "secular" => config.params.secular = parse_bool(key, value, line)?,
        "kt_hot_pev" => config.kt_hot_pev = parse_number(key, value, line)?,
        "kt_cold_pev" => config.kt_cold_pev = parse_number(key, value, line)?,
        "theta1" => config.theta1_rad = parse_angle(key, value, line)?,
        "theta2" => config.theta2_rad = parse_angle(key, value, line)?,
        "grid_start" => grid.start = Some(parse_angle(key, value, line)?),
        "grid_stop" => grid.stop = Some(parse_angle(key, value, line)?),
        "grid_count" => grid.count = Some(parse_count(key, value, line)?),
        "iterations" => config.iterations = parse_count(key, value, line)?,
        "tau_adiabatic_ns" => config.tau_adiabatic_ns = parse_number(key, value, line)?,
        "tau_isochoric_ns" => config.tau_isochoric_ns = parse_number(key, value, line)?,
        "gamma0_per_ns" => config.gamma0_per_ns = Some(parse_number(key, value, line)?),
        "out" => config.out = Some(value.to_string()),
        _ => unreachable!("parse_pairs admits only known keys"),
    }
    Ok(())
}

fn parse_number(key: &str, value: &str, line: usize) -> Result<f64> {
    value.parse::<f64>().map_err(|_| Error::ParseError {
        line,
        message: format!("key \"{key}\" needs a number, got \"{value}\""),
    })
}

fn parse_count(key: &str, value: &str, line: usize) -> Result<usize> {
    value.parse::<usize>().map_err(|_| Error::ParseError {
        line,
        message: format!("key \"{key}\" needs a nonnegative integer, got \"{value}\""),
    })
}

fn parse_bool(key: &str, value: &str, line: usize) -> Result<bool> {
    match value {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(Error::ParseError {
            line,
            message: format!("key \"{key}\" needs true or false, got \"{value}\""),
        }),
    }
}

/// Bare numbers are rad; a trailing `rad` or `deg` (optionally separated by
/// whitespace) selects the unit explicitly.
fn parse_angle(key: &str, value: &str, line: usize) -> Result<f64> {
    let (number, to_rad) = if let Some(stripped) = value.strip_suffix("deg") {
        (stripped.trim_end(), std::f64::consts::PI / 180.0)
    } else if let Some(stripped) = value.strip_suffix("rad") {
        (stripped.trim_end(), 1.0)
    } else {
        (value, 1.0)
    };
    let parsed = number.parse::<f64>().map_err(|_| Error::ParseError {
        line,
        message: format!("key \"{key}\" needs an angle, got \"{value}\""),
    })?;
    Ok(parsed * to_rad)
}

fn validate(config: &RunConfig) -> Result<()> {
    config.params.validate().map_err(|e| match e {
        Error::DomainError(msg) => Error::ValidationError(msg),
        other => other,
    })?;
    for (name, v) in [
        ("kt_hot_pev", config.kt_hot_pev),
        ("kt_cold_pev", config.kt_cold_pev),
    ] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::validation(format!(
                "{name} must be positive and finite, got {v}"
            )));
        }
    }
    if config.kt_cold_pev > config.kt_hot_pev {
        return Err(Error::validation(format!(
            "kt_cold_pev ({}) must not exceed kt_hot_pev ({})",
            config.kt_cold_pev, config.kt_hot_pev
        )));
    }
    for (name, v) in [("theta1", config.theta1_rad), ("theta2", config.theta2_rad)] {
        if !v.is_finite() {
            return Err(Error::validation(format!("{name} must be finite, got {v}")));
        }
    }
    if let Some(grid) = &config.grid {
        if grid.count == 0 {
            return Err(Error::validation("grid_count must be at least 1"));
        }
        if !(grid.start_rad.is_finite() && grid.stop_rad.is_finite()) {
            return Err(Error::validation("grid bounds must be finite"));
        }
    }
    if config.iterations == 0 {
        return Err(Error::validation("iterations must be at least 1"));
    }
    for (name, v) in [
        ("tau_adiabatic_ns", config.tau_adiabatic_ns),
        ("tau_isochoric_ns", config.tau_isochoric_ns),
    ] {
        if !(v.is_finite() && v >= 0.0) {
            return Err(Error::validation(format!(
                "{name} must be nonnegative, got {v}"
            )));
        }
    }
    if let Some(g) = config.gamma0_per_ns {
        if !(g.is_finite() && g > 0.0) {
            return Err(Error::validation(format!(
                "gamma0_per_ns must be positive, got {g}"
            )));
        }
    }
    Ok(())
}

/// The effective configuration as a parseable document. `parse_config` on
/// the output reproduces the input config exactly (f64 values print in
/// shortest round-trip form).
pub fn render_config(config: &RunConfig) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "command = {}", config.command.name());
    let _ = writeln!(s, "gamma_i_mhz_per_t = {}", config.params.gamma_i_mhz_per_t);
    let _ = writeln!(s, "gamma_s_mhz_per_t = {}", config.params.gamma_s_mhz_per_t);
    let _ = writeln!(s, "b0_mt = {}", config.params.b0_mt);
    let _ = writeln!(s, "j_hz = {}", config.params.j_hz);
    let _ = writeln!(s, "r_angstrom = {}", config.params.r_angstrom);
    let _ = writeln!(s, "phi = {}", config.params.phi_rad);
    let _ = writeln!(s, "secular = {}", config.params.secular);
    let _ = writeln!(s, "kt_hot_pev = {}", config.kt_hot_pev);
    let _ = writeln!(s, "kt_cold_pev = {}", config.kt_cold_pev);
    let _ = writeln!(s, "theta1 = {}", config.theta1_rad);
    let _ = writeln!(s, "theta2 = {}", config.theta2_rad);
    if let Some(grid) = &config.grid {
        let _ = writeln!(s, "grid_start = {}", grid.start_rad);
        let _ = writeln!(s, "grid_stop = {}", grid.stop_rad);
        let _ = writeln!(s, "grid_count = {}", grid.count);
    }
    let _ = writeln!(s, "iterations = {}", config.iterations);
    let _ = writeln!(s, "tau_adiabatic_ns = {}", config.tau_adiabatic_ns);
    let _ = writeln!(s, "tau_isochoric_ns = {}", config.tau_isochoric_ns);
    if let Some(g) = config.gamma0_per_ns {
        let _ = writeln!(s, "gamma0_per_ns = {g}");
    }
    if let Some(out) = &config.out {
        let _ = writeln!(s, "out = {out}");
    }
    s
}

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use fracmap_core::cases::{CaseParams, Family, SERIES_TOLERANCE};
use fracmap_core::density::TruncationPolicy;
use fracmap_core::extensions::TwoBranchBase;
use fracmap_core::interval_map::{OrbitOptions, PiecewiseMoebiusMap};
use fracmap_core::scalar::parse_rational;
use serde::{Deserialize, Serialize};

use crate::output::strip_annotations;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Validate,
    Classify,
    Dual,
    Density,
    Invariance,
    Extend,
    Simulate,
    JumpRelation,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyBase {
    Ppp2,
    Pmm2,
    Mpp2,
}

/// Everything a run needs. Every field is optional in the JSON file.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub family: Option<Family>,
    pub lambda: Option<String>,
    pub mu: Option<String>,
    pub nu: Option<String>,
    /// Explicit map, same JSON shape as emitted by the tool.
    pub map: Option<serde_json::Value>,
    pub map_file: Option<PathBuf>,
    pub density: Option<serde_json::Value>,
    pub density_file: Option<PathBuf>,
    pub family_base: Option<FamilyBase>,
    pub steps: Option<u32>,
    pub grid: Option<usize>,
    pub truncation: TruncationConfig,
    pub tolerance: Option<f64>,
    pub simulation: SimulationConfig,
    pub output: OutputConfig,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TruncationConfig {
    pub max_terms: Option<usize>,
    pub tolerance: Option<f64>,
    pub averaging_depth: Option<usize>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulationConfig {
    pub iterations: Option<u64>,
    pub bins: Option<usize>,
    pub burn_in: Option<u64>,
    pub seed: Option<u64>,
    pub x0: Option<f64>,
    pub window: Option<f64>,
    pub tolerance: Option<f64>,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub report: Option<PathBuf>,
    pub table: Option<PathBuf>,
}

/// Flags shared by every command. Anything given here wins over the config file.
#[derive(Clone, Debug, Default, Args)]
pub struct Flags {
    /// JSON config file
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub family: Option<Family>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub mu: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub nu: Option<String>,
    /// Map JSON file (overrides --family)
    #[arg(long = "map", global = true)]
    pub map_file: Option<PathBuf>,
    /// Density JSON file
    #[arg(long = "density", global = true)]
    pub density_file: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub family_base: Option<FamilyBase>,
    #[arg(long, global = true)]
    pub steps: Option<u32>,
    /// Number of equally spaced grid points on [0, 1]
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    #[arg(long, global = true)]
    pub max_terms: Option<usize>,
    #[arg(long, global = true)]
    pub tail_tolerance: Option<f64>,
    #[arg(long, global = true)]
    pub averaging_depth: Option<usize>,
    /// Residual tolerance for series densities
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    #[arg(long, global = true)]
    pub iterations: Option<u64>,
    #[arg(long, global = true)]
    pub bins: Option<usize>,
    #[arg(long, global = true)]
    pub burn_in: Option<u64>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true)]
    pub x0: Option<f64>,
    /// Histogram bins closer than this to 0 or 1 are not compared
    #[arg(long, global = true)]
    pub window: Option<f64>,
    /// Largest relative bin error accepted by `simulate`
    #[arg(long, global = true)]
    pub histogram_tolerance: Option<f64>,
    /// Write the JSON report here instead of stdout
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
    /// Write the CSV table here
    #[arg(long, global = true)]
    pub table: Option<PathBuf>,
}

fn overlay<T: Clone>(slot: &mut Option<T>, flag: &Option<T>) {
    if flag.is_some() {
        slot.clone_from(flag);
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn resolve(flags: &Flags, command: Option<Command>) -> Result<Self, CliError> {
        let mut cfg = match &flags.config {
            Some(path) => Self::load(path)?,
            None => Self::default(),
        };
        overlay(&mut cfg.command, &command);
        overlay(&mut cfg.family, &flags.family);
        overlay(&mut cfg.lambda, &flags.lambda);
        overlay(&mut cfg.mu, &flags.mu);
        overlay(&mut cfg.nu, &flags.nu);
        if flags.map_file.is_some() {
            cfg.map = None;
            cfg.map_file.clone_from(&flags.map_file);
        }
        if flags.density_file.is_some() {
            cfg.density = None;
            cfg.density_file.clone_from(&flags.density_file);
        }
        overlay(&mut cfg.family_base, &flags.family_base);
        overlay(&mut cfg.steps, &flags.steps);
        overlay(&mut cfg.grid, &flags.grid);
        overlay(&mut cfg.truncation.max_terms, &flags.max_terms);
        overlay(&mut cfg.truncation.tolerance, &flags.tail_tolerance);
        overlay(&mut cfg.truncation.averaging_depth, &flags.averaging_depth);
        overlay(&mut cfg.tolerance, &flags.tolerance);
        let sim = &mut cfg.simulation;
        overlay(&mut sim.iterations, &flags.iterations);
        overlay(&mut sim.bins, &flags.bins);
        overlay(&mut sim.burn_in, &flags.burn_in);
        overlay(&mut sim.seed, &flags.seed);
        overlay(&mut sim.x0, &flags.x0);
        overlay(&mut sim.window, &flags.window);
        overlay(&mut sim.tolerance, &flags.histogram_tolerance);
        overlay(&mut cfg.output.report, &flags.report);
        overlay(&mut cfg.output.table, &flags.table);
        if cfg.grid.is_some_and(|n| n < 2) {
            return Err(CliError::Config("grid size must be at least 2".into()));
        }
        Ok(cfg)
    }

    pub fn grid_size(&self) -> usize {
        self.grid.unwrap_or(101)
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance.unwrap_or(SERIES_TOLERANCE)
    }

    pub fn truncation(&self) -> TruncationPolicy {
        let default = TruncationPolicy::default();
        TruncationPolicy {
            max_terms: self.truncation.max_terms.unwrap_or(default.max_terms),
            tail_tolerance: self.truncation.tolerance.unwrap_or(default.tail_tolerance),
            averaging_depth: self.truncation.averaging_depth.unwrap_or(default.averaging_depth),
        }
    }

    pub fn orbit_options(&self) -> OrbitOptions {
        let default = OrbitOptions::default();
        let sim = &self.simulation;
        OrbitOptions {
            iterations: sim.iterations.unwrap_or(default.iterations),
            bins: sim.bins.unwrap_or(default.bins),
            burn_in: sim.burn_in.unwrap_or(default.burn_in),
            seed: sim.seed.unwrap_or(default.seed),
            dither: default.dither,
        }
    }

    fn param(&self, name: &str, value: &Option<String>) -> Result<String, CliError> {
        value
            .clone()
            .ok_or_else(|| CliError::Config(format!("missing --{name}")))
    }

    pub fn params(&self) -> Result<CaseParams, CliError> {
        let family = self
            .family
            .ok_or_else(|| CliError::Config("missing --family (ppp, pmm or mpp)".into()))?;
        let lambda = self.param("lambda", &self.lambda)?;
        let mu = self.param("mu", &self.mu)?;
        let nu = self.param("nu", &self.nu)?;
        Ok(CaseParams::from_strs(family, &lambda, &mu, &nu)?)
    }

    pub fn has_explicit_map(&self) -> bool {
        self.map.is_some() || self.map_file.is_some()
    }

    pub fn explicit_map(&self) -> Result<Option<PiecewiseMoebiusMap>, CliError> {
        let value = match (&self.map, &self.map_file) {
            (Some(v), _) => v.clone(),
            (None, Some(path)) => read_json(path)?,
            (None, None) => return Ok(None),
        };
        let value = strip_annotations(map_field(value));
        serde_json::from_value(value)
            .map(Some)
            .map_err(|e| CliError::Config(format!("map: {e}")))
    }

    pub fn explicit_density(&self) -> Result<Option<fracmap_core::density::Density>, CliError> {
        let value = match (&self.density, &self.density_file) {
            (Some(v), _) => v.clone(),
            (None, Some(path)) => read_json(path)?,
            (None, None) => return Ok(None),
        };
        let value = strip_annotations(value);
        let value = match value.get("density") {
            Some(inner) if value.get("kind").is_none() => inner.clone(),
            _ => value,
        };
        serde_json::from_value(value)
            .map(Some)
            .map_err(|e| CliError::Config(format!("density: {e}")))
    }

    pub fn base(&self) -> Result<Option<TwoBranchBase>, CliError> {
        let Some(kind) = self.family_base else {
            return Ok(None);
        };
        let base = match kind {
            FamilyBase::Ppp2 => TwoBranchBase::ppp(&parse_rational(&self.param("lambda", &self.lambda)?)?)?,
            FamilyBase::Pmm2 => TwoBranchBase::pmm(&parse_rational(&self.param("nu", &self.nu)?)?)?,
            FamilyBase::Mpp2 => TwoBranchBase::mpp(&parse_rational(&self.param("nu", &self.nu)?)?)?,
        };
        Ok(Some(base))
    }
}

/// Accepts a bare map or any report that carries one under `"map"`.
fn map_field(value: serde_json::Value) -> serde_json::Value {
    if value.get("partition").is_some() {
        return value;
    }
    for key in ["map", "extension"] {
        if let Some(inner) = value.get(key) {
            return map_field(inner.clone());
        }
    }
    value
}

fn read_json(path: &Path) -> Result<serde_json::Value, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

//! `fracmap`: command-line front end for piecewise fractional-linear maps.
//!
//! Exit status: 0 when every check passes, 1 when a check fails (the failing
//! witness goes to stderr), 2 for configuration or input errors.

mod config;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fracmap_core::cases::{build_map, case_fixed_points, classify_with, dual_map, CaseParams};
use fracmap_core::density::{Density, TruncationPolicy};
use fracmap_core::extensions::{n_step_extension, verify_jump_relation, ExtensionResult};
use fracmap_core::interval_map::{default_grid, PiecewiseMoebiusMap, ResidualReport};
use serde_json::{json, Value};

use config::{Command, Flags, RunConfig};
use output::{emit, emit_json};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Check(String),
}

impl From<fracmap_core::error::Error> for CliError {
    fn from(e: fracmap_core::error::Error) -> Self {
        CliError::Config(e.to_string())
    }
}

#[derive(Parser)]
#[command(name = "fracmap", version, about = "Exact invariant densities of piecewise fractional-linear interval maps")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Subcommand)]
enum Sub {
    /// Check partition, monotonicity and endpoint matching of a map
    Validate,
    /// Check the dual-map conditions of a three-branch family and certify the density
    Classify,
    /// Print the dual branches and their fixed points
    Dual,
    /// Tabulate a density on the grid (CSV: x, g(x), tail bound)
    Density,
    /// Transfer-operator residual of a density on the grid
    Invariance,
    /// Build the n-step jump extension of a two-branch base
    Extend,
    /// Orbit histogram, compared with the density when one is known
    Simulate,
    /// Check h = g + P_J g between consecutive extension levels
    JumpRelation,
    /// Run the command named in the config file
    Run,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = match cli.command {
        Sub::Validate => Some(Command::Validate),
        Sub::Classify => Some(Command::Classify),
        Sub::Dual => Some(Command::Dual),
        Sub::Density => Some(Command::Density),
        Sub::Invariance => Some(Command::Invariance),
        Sub::Extend => Some(Command::Extend),
        Sub::Simulate => Some(Command::Simulate),
        Sub::JumpRelation => Some(Command::JumpRelation),
        Sub::Run => None,
    };
    let result = RunConfig::resolve(&cli.flags, command).and_then(|cfg| run(&cfg));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Check(witness)) => {
            eprintln!("check failed: {witness}");
            ExitCode::from(1)
        }
        Err(CliError::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn run(cfg: &RunConfig) -> Result<(), CliError> {
    let command = cfg
        .command
        .ok_or_else(|| CliError::Config("no command given on the command line or in the config".into()))?;
    match command {
        Command::Validate => validate(cfg),
        Command::Classify => classify(cfg),
        Command::Dual => dual(cfg),
        Command::Density => density(cfg),
        Command::Invariance => invariance(cfg),
        Command::Extend => extend(cfg),
        Command::Simulate => simulate(cfg),
        Command::JumpRelation => jump_relation(cfg),
    }
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn finish(cfg: &RunConfig, report: Value, passed: bool, witness: impl FnOnce() -> String) -> Result<(), CliError> {
    emit_json(cfg.output.report.as_deref(), &report)?;
    if passed {
        Ok(())
    } else {
        Err(CliError::Check(witness()))
    }
}

fn extension(cfg: &RunConfig) -> Result<Option<ExtensionResult>, CliError> {
    let Some(base) = cfg.base()? else {
        return Ok(None);
    };
    let mut ext = n_step_extension(&base, cfg.steps.unwrap_or(1))?;
    ext.density = ext.density.with_truncation(cfg.truncation());
    ext.parent_density = ext.parent_density.with_truncation(cfg.truncation());
    Ok(Some(ext))
}

/// Map from `--map`, then `--family-base`, then the three-branch family.
fn resolve_map(cfg: &RunConfig) -> Result<PiecewiseMoebiusMap, CliError> {
    if let Some(map) = cfg.explicit_map()? {
        return Ok(map);
    }
    if let Some(ext) = extension(cfg)? {
        return Ok(ext.map);
    }
    Ok(build_map(&cfg.params()?)?)
}

/// Density from `--density`, then `--family-base`, then classification.
fn resolve_density(cfg: &RunConfig) -> Result<Density, CliError> {
    if let Some(d) = cfg.explicit_density()? {
        return Ok(d.with_truncation(cfg.truncation()));
    }
    if let Some(ext) = extension(cfg)? {
        return Ok(ext.density);
    }
    if cfg.family.is_none() {
        return Err(CliError::Config("no density: give --density, --family-base or --family".into()));
    }
    let report = classify_with(&cfg.params()?, cfg.truncation(), &default_grid(2))?;
    report
        .density
        .ok_or_else(|| CliError::Check(format!("no density for {}: outcome {}", report.params, report.outcome.name())))
}

fn residual_passes(report: &ResidualReport, tolerance: f64) -> bool {
    if report.points.is_empty() {
        return false;
    }
    if report.exact {
        return report.exact_zero;
    }
    report.passes(tolerance)
}

fn residual_witness(report: &ResidualReport) -> String {
    match report
        .points
        .iter()
        .max_by(|a, b| a.residual.total_cmp(&b.residual))
    {
        Some(p) => format!(
            "largest residual {:e} at x = {} (density {}, transfer {}, tail bound {:e})",
            p.residual, p.x, p.density, p.transfer, p.tail_bound
        ),
        None => "no grid point could be evaluated".into(),
    }
}

fn validate(cfg: &RunConfig) -> Result<(), CliError> {
    let map = if cfg.has_explicit_map() {
        cfg.explicit_map()?.expect("checked")
    } else if let Some(ext) = extension(cfg)? {
        ext.map
    } else {
        let p = cfg.params()?;
        let [l, m, n] = fracmap_core::cases::branches(&p)?;
        let partition = build_partition(&p);
        PiecewiseMoebiusMap::new(partition, vec![l, m, n], vec!["lambda".into(), "mu".into(), "nu".into()])?
    };
    let report = map.validate();
    let valid = report.valid;
    let witness = report.clone().into_result().err().map(|e| e.to_string()).unwrap_or_default();
    let value = json!({
        "command": "validate",
        "map": to_value(&map),
        "type_signature": map.type_signature().to_string(),
        "validation": to_value(&report),
    });
    finish(cfg, value, valid, || witness)
}

fn build_partition(p: &CaseParams) -> Vec<fracmap_core::scalar::QuadExt> {
    use fracmap_core::cases::Family;
    use fracmap_core::scalar::QuadExt;
    let inner = match p.family {
        Family::Ppp => [QuadExt::from_ratio(1, 2), QuadExt::from_ratio(2, 3)],
        Family::Pmm | Family::Mpp => [QuadExt::from_ratio(1, 3), QuadExt::from_ratio(1, 2)],
    };
    vec![QuadExt::zero(), inner[0].clone(), inner[1].clone(), QuadExt::one()]
}

fn classify(cfg: &RunConfig) -> Result<(), CliError> {
    let p = cfg.params()?;
    let report = classify_with(&p, cfg.truncation(), &default_grid(cfg.grid_size()))?;
    let passed = report.passed();
    let witness = match &report.outcome {
        fracmap_core::cases::Outcome::NoConditionMet { witness } => format!("no condition met: {witness}"),
        _ => match &report.certificate {
            Some(c) => residual_witness(c),
            None => "no density to certify".into(),
        },
    };
    let mut value = to_value(&report);
    value["command"] = json!("classify");
    value["outcome_name"] = json!(report.outcome.name());
    if let Some(d) = &report.density {
        value["density_formula"] = json!(d.to_string());
    }
    finish(cfg, value, passed, || witness)
}

fn dual(cfg: &RunConfig) -> Result<(), CliError> {
    let p = cfg.params()?;
    let duals = dual_map(&p)?;
    let branches: Vec<Value> = ["lambda", "mu", "nu"]
        .iter()
        .zip(&duals)
        .map(|(label, b)| {
            json!({
                "label": label,
                "formula": format!("V*_{label}(y) = {}", b.to_string().replace('x', "y")),
                "matrix": to_value(b),
            })
        })
        .collect();
    let value = json!({
        "command": "dual",
        "params": to_value(&p),
        "branches": branches,
        "fixed_points": to_value(&case_fixed_points(&p)?),
    });
    finish(cfg, value, true, String::new)
}

fn density(cfg: &RunConfig) -> Result<(), CliError> {
    let g = resolve_density(cfg)?;
    let mut csv = String::from("x_exact,x,value_exact,value,tail_bound,bound_verified\n");
    let mut skipped = Vec::new();
    for x in default_grid(cfg.grid_size()) {
        match g.eval(&x) {
            Ok(v) => {
                let exact = v.as_exact().map(|e| format!("\"{e}\"")).unwrap_or_default();
                csv.push_str(&format!(
                    "\"{x}\",{},{exact},{},{},{}\n",
                    x.to_f64(),
                    v.to_f64(),
                    v.tail_bound(),
                    v.bound_verified()
                ));
            }
            Err(e) => skipped.push(json!({ "x": x.to_string(), "reason": e.to_string() })),
        }
    }
    let value = json!({
        "command": "density",
        "density": to_value(&g),
        "formula": g.to_string(),
        "truncation": to_value(&cfg.truncation()),
        "skipped": skipped,
    });
    match &cfg.output.table {
        Some(path) => {
            output::write_atomic(path, &csv)?;
            emit_json(cfg.output.report.as_deref(), &value)
        }
        None => {
            if let Some(path) = &cfg.output.report {
                emit_json(Some(path), &value)?;
            }
            emit(None, &csv)
        }
    }
}

fn invariance(cfg: &RunConfig) -> Result<(), CliError> {
    let map = resolve_map(cfg)?;
    let g = resolve_density(cfg)?;
    let report = map.invariance_residual(&g, &default_grid(cfg.grid_size()));
    if let Some(path) = &cfg.output.table {
        output::write_atomic(path, &report.to_csv())?;
    }
    let tolerance = cfg.tolerance();
    let passed = residual_passes(&report, tolerance);
    let witness = residual_witness(&report);
    let value = json!({
        "command": "invariance",
        "density": g.to_string(),
        "truncation": to_value(&cfg.truncation()),
        "tolerance": tolerance,
        "passed": passed,
        "max_residual": report.max_residual,
        "residual": to_value(&report),
    });
    finish(cfg, value, passed, || witness)
}

/// Exact zero, or every point within its own tail bound.
fn within_tail_bounds(report: &ResidualReport) -> bool {
    if report.points.is_empty() {
        return false;
    }
    if report.exact {
        return report.exact_zero;
    }
    report.points.iter().all(|p| p.residual <= p.tail_bound + 1e-12)
}

fn extend(cfg: &RunConfig) -> Result<(), CliError> {
    let ext = extension(cfg)?.ok_or_else(|| CliError::Config("extend needs --family-base".into()))?;
    let report = ext.map.invariance_residual(&ext.density, &default_grid(cfg.grid_size()));
    let passed = within_tail_bounds(&report);
    let witness = residual_witness(&report);
    let value = json!({
        "command": "extend",
        "branches": ext.map.len(),
        "type_signature": ext.map.type_signature().to_string(),
        "density_formula": ext.density.to_string(),
        "truncation": to_value(&cfg.truncation()),
        "passed": passed,
        "extension": to_value(&ext),
        "residual": to_value(&report),
    });
    finish(cfg, value, passed, || witness)
}

fn simulate(cfg: &RunConfig) -> Result<(), CliError> {
    let map = resolve_map(cfg)?;
    let options = cfg.orbit_options();
    let x0 = cfg.simulation.x0.unwrap_or(0.123_456_789);
    let hist = map.orbit_histogram(x0, &options)?;
    let has_density = cfg.density.is_some() || cfg.density_file.is_some() || cfg.family_base.is_some() || cfg.family.is_some();
    let density = if has_density { resolve_density(cfg).ok() } else { None };
    let window = cfg.simulation.window.unwrap_or(0.05);
    let tolerance = cfg.simulation.tolerance.unwrap_or(0.05);
    let comparison = match &density {
        Some(g) => Some(hist.compare(g, window)?),
        None => None,
    };
    let csv = match &comparison {
        Some(c) => c.to_csv(),
        None => hist.to_csv(),
    };
    let passed = comparison.as_ref().is_none_or(|c| c.max_relative_error <= tolerance);
    let witness = comparison
        .as_ref()
        .map(|c| format!("max relative bin error {:.4} exceeds {tolerance}", c.max_relative_error))
        .unwrap_or_default();
    let value = json!({
        "command": "simulate",
        "x0": x0,
        "options": to_value(&options),
        "density": density.as_ref().map(|g| g.to_string()),
        "tolerance": tolerance,
        "passed": passed,
        "histogram": to_value(&hist),
        "comparison": comparison.as_ref().map(to_value),
    });
    match &cfg.output.table {
        Some(path) => {
            output::write_atomic(path, &csv)?;
            finish(cfg, value, passed, || witness)
        }
        None => {
            if let Some(path) = &cfg.output.report {
                emit_json(Some(path), &value)?;
            }
            emit(None, &csv)?;
            if passed {
                Ok(())
            } else {
                Err(CliError::Check(witness))
            }
        }
    }
}

fn jump_relation(cfg: &RunConfig) -> Result<(), CliError> {
    let ext = extension(cfg)?.ok_or_else(|| CliError::Config("jump-relation needs --family-base".into()))?;
    let report = verify_jump_relation(&ext, &default_grid(cfg.grid_size()));
    if let Some(path) = &cfg.output.table {
        output::write_atomic(path, &report.to_csv())?;
    }
    let tolerance = cfg.tolerance();
    let passed = residual_passes(&report, tolerance);
    let witness = residual_witness(&report);
    let value = json!({
        "command": "jump-relation",
        "steps": ext.provenance.steps,
        "parent_density": ext.parent_density.to_string(),
        "density": ext.density.to_string(),
        "truncation": to_value(&ext.density_truncation()),
        "tolerance": tolerance,
        "passed": passed,
        "max_residual": report.max_residual,
        "residual": to_value(&report),
    });
    finish(cfg, value, passed, || witness)
}

trait DensityTruncation {
    fn density_truncation(&self) -> Option<TruncationPolicy>;
}

impl DensityTruncation for ExtensionResult {
    fn density_truncation(&self) -> Option<TruncationPolicy> {
        match &self.density {
            Density::Series(s) => Some(s.truncation),
            _ => None,
        }
    }
}

//! Command-line front end.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use toml::Table;

use crate::config::{build_spec, read_config_file, resolve_section, resolve_thresholds, CommandSpec};
use crate::error::{CliError, CliResult};
use crate::run::{default_out_dir, run_into, Manifest, RunSummary};

#[derive(Debug, Parser)]
#[command(name = "pradial", version, about = "Sampling, rate functions and checks for weighted p-radial distributions")]
pub struct Cli {
    /// TOML file merged over the built-in defaults.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Run directory (default: $PRADIAL_OUT/<command>-<hash>).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Threshold override KEY=VALUE; recorded in the manifest.
    #[arg(long = "override-thresholds", global = true, value_name = "KEY=VALUE")]
    pub override_thresholds: Vec<String>,
    /// Replays the command recorded in a manifest.
    #[arg(long, value_name = "MANIFEST")]
    pub from_manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw samples from a target law.
    Sample(SampleArgs),
    /// Test the norm-split statistic against its exact beta-mixture law.
    TestNormLaw(SampleArgs),
    /// Evaluate a rate function.
    Rate(RateArgs),
    /// Compare event decay rates with rate-function infima.
    LdpVerify(LdpArgs),
    /// Laplace and Breitung ratio table.
    Asymptotics(AsymptoticsArgs),
    /// Monte Carlo estimate of a weighted normalizing constant.
    NormConst(NormConstArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct SampleArgs {
    /// cone, uniform, pnpw, weighted-pnpw, eigen-PH or singular-PM
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<i64>,
    /// Mass of W at 0.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    /// Gamma shape of the continuous part of W.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub count: Option<i64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<i64>,
    /// delta or nabla (weighted-pnpw)
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chains: Option<i64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<i64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub thin: Option<i64>,
}

#[derive(Debug, Args, Serialize)]
pub struct RateArgs {
    /// cone-euclid, beta-H, emp-M, ...
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<i64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// critical or greater
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ktheta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    /// CSV with header `x`, `x,weight` or `knot,density`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measure_file: Option<String>,
    /// scaled-gen-gaussian, beta, arcsine or uniform
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lo: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hi: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_lo: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_hi: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_count: Option<i64>,
}

#[derive(Debug, Args, Serialize)]
pub struct LdpArgs {
    /// beta-le, moment-ge or trivial
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub event: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<f64>,
    /// Comma-separated n values.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ladder: Option<Vec<i64>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<i64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha_scale: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<i64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub moment_order: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct AsymptoticsArgs {
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ladder: Option<Vec<f64>>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adapted_c: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct NormConstArgs {
    /// delta or nabla
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<i64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<i64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<i64>,
}

fn flag_table<T: Serialize>(args: &T) -> CliResult<Table> {
    match toml::Value::try_from(args) {
        Ok(toml::Value::Table(t)) => Ok(t),
        Ok(_) => Err(CliError::Internal("flags did not form a table".into())),
        Err(e) => Err(CliError::Internal(format!("flags: {e}"))),
    }
}

/// Resolves the parsed command line into a command spec.
pub fn resolve(cli: &Cli) -> CliResult<CommandSpec> {
    let (name, flags) = match cli.command.as_ref().ok_or_else(|| CliError::usage("a subcommand or --from-manifest is required"))? {
        Command::Sample(a) => ("sample", flag_table(a)?),
        Command::TestNormLaw(a) => ("test-norm-law", flag_table(a)?),
        Command::Rate(a) => ("rate", flag_table(a)?),
        Command::LdpVerify(a) => ("ldp-verify", flag_table(a)?),
        Command::Asymptotics(a) => ("asymptotics", flag_table(a)?),
        Command::NormConst(a) => ("norm-const", flag_table(a)?),
    };
    let file = cli.config.as_deref().map(read_config_file).transpose()?;
    if let Some(out) = file.as_ref().and_then(|f| f.get("out")) {
        if !out.is_str() {
            return Err(CliError::usage("`out` in a config file must be a string"));
        }
    }
    let section = resolve_section(name, file.as_ref(), flags)?;
    build_spec(name, section)
}

fn config_out(cli: &Cli) -> CliResult<Option<PathBuf>> {
    let Some(path) = cli.config.as_deref() else { return Ok(None) };
    let file = read_config_file(path)?;
    Ok(file.get("out").and_then(|v| v.as_str()).map(PathBuf::from))
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> CliResult<RunSummary> {
    if let Some(m) = &cli.from_manifest {
        if cli.command.is_some() || cli.config.is_some() || !cli.override_thresholds.is_empty() {
            return Err(CliError::usage("--from-manifest replays a manifest and takes only --out"));
        }
        let man = Manifest::read(m)?;
        let dir = match &cli.out {
            Some(d) => d.clone(),
            None => default_out_dir(&man.command)?,
        };
        return run_into(&man.command, &man.thresholds, &man.threshold_overrides, &dir);
    }
    let spec = resolve(cli)?;
    let (th, overrides) = resolve_thresholds(&cli.override_thresholds)?;
    let dir = match (&cli.out, config_out(cli)?) {
        (Some(d), _) => d.clone(),
        (None, Some(d)) => d,
        (None, None) => default_out_dir(&spec)?,
    };
    run_into(&spec, &th, &overrides, &dir)
}

/// Entry point of the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(&cli) {
        Ok(s) => {
            println!("{}", s.dir.display());
            if let Some(f) = &s.manifest.failure {
                eprintln!("check failed: {f}");
            }
            s.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

//! Typed parameters, the embedded defaults file and the merge
//! defaults < config file < flags.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use toml::{Table, Value};

use crate::error::{CliError, CliResult};

pub const DEFAULTS_TOML: &str = include_str!("../defaults.toml");

/// The embedded defaults as a table.
pub fn defaults() -> Table {
    DEFAULTS_TOML.parse().expect("embedded defaults parse")
}

pub fn defaults_version() -> i64 {
    defaults()["defaults_version"].as_integer().expect("defaults_version")
}

/// Recursive merge: tables merge key by key, anything else is replaced.
pub fn merge(base: &mut Table, over: Table) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(Value::Table(b)), Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

/// Reads a user config file. Thresholds may only change through
/// `--override-thresholds`, so the file may not carry them.
pub fn read_config_file(path: &Path) -> CliResult<Table> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
    let t: Table = text.parse().map_err(|e| CliError::usage(format!("config {}: {e}", path.display())))?;
    for key in ["thresholds", "defaults_version", "acceptance"] {
        if t.contains_key(key) {
            return Err(CliError::usage(format!("config files may not set `{key}`; use --override-thresholds for thresholds")));
        }
    }
    Ok(t)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Thresholds {
    pub norm_law_min_pvalue: f64,
    pub norm_law_min_pvalue_matrix: f64,
    pub atom_interval_level: f64,
    pub mcmc_min_ess_fraction: f64,
    pub ldp_max_final_gap: f64,
    pub asymptotic_tol: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Value::Table(defaults()["thresholds"].as_table().unwrap().clone()).try_into().expect("default thresholds")
    }
}

/// Applies `KEY=VALUE` overrides to the default thresholds and returns the
/// accepted overrides for the manifest.
pub fn resolve_thresholds(overrides: &[String]) -> CliResult<(Thresholds, BTreeMap<String, f64>)> {
    let mut t = defaults()["thresholds"].as_table().unwrap().clone();
    let mut applied = BTreeMap::new();
    for o in overrides {
        let (k, v) = o.split_once('=').ok_or_else(|| CliError::usage(format!("override `{o}` is not KEY=VALUE")))?;
        let k = k.trim();
        if !t.contains_key(k) {
            return Err(CliError::usage(format!("unknown threshold `{k}`")));
        }
        let v: f64 = v.trim().parse().map_err(|_| CliError::usage(format!("threshold `{k}` needs a number")))?;
        t.insert(k.to_string(), Value::Float(v));
        applied.insert(k.to_string(), v);
    }
    let th = Value::Table(t).try_into().map_err(|e| CliError::usage(format!("thresholds: {e}")))?;
    Ok((th, applied))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SampleTarget {
    #[serde(rename = "cone")]
    Cone,
    #[serde(rename = "uniform")]
    Uniform,
    #[serde(rename = "pnpw")]
    Pnpw,
    #[serde(rename = "weighted-pnpw")]
    WeightedPnpw,
    #[serde(rename = "eigen-PH")]
    EigenPh,
    #[serde(rename = "singular-PM")]
    SingularPm,
}

impl SampleTarget {
    pub fn is_mcmc(self) -> bool {
        matches!(self, SampleTarget::WeightedPnpw | SampleTarget::EigenPh | SampleTarget::SingularPm)
    }

    pub fn is_matrix(self) -> bool {
        matches!(self, SampleTarget::EigenPh | SampleTarget::SingularPm)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WeightChoice {
    Delta,
    Nabla,
}

/// Parameters of `sample` and `test-norm-law`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleParams {
    pub target: SampleTarget,
    pub n: usize,
    pub p: f64,
    pub beta: u8,
    /// W = θ δ₀ + (1 - θ) Gamma(α, 1).
    pub theta: f64,
    pub alpha: f64,
    pub count: usize,
    pub seed: u64,
    /// Weight of `weighted-pnpw`.
    pub weight: WeightChoice,
    pub chains: usize,
    pub burn_in: usize,
    pub thin: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KThetaChoice {
    Critical,
    Greater,
}

/// A measure read from a CSV file, stored verbatim in the manifest.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "form", rename_all = "lowercase")]
pub enum MeasureInput {
    Atoms { points: Vec<f64>, weights: Vec<f64> },
    Grid { knots: Vec<f64>, values: Vec<f64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateParams {
    pub target: String,
    pub p: f64,
    pub beta: u8,
    pub alpha: f64,
    pub ktheta: KThetaChoice,
    pub c: f64,
    /// Replaced by `measure` during resolution.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure_file: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub measure: Option<MeasureInput>,
    /// scaled-gen-gaussian, beta, arcsine or uniform.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub z: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lo: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<f64>,
    /// Point evaluation of a beta rate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<f64>,
    /// Scan of a beta rate over an even grid.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_lo: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_hi: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x_count: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EventKind {
    /// {B ≤ level}
    BetaLe,
    /// {m_r(μ_n) ≥ level}
    MomentGe,
    Trivial,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LdpParams {
    pub event: EventKind,
    pub level: f64,
    pub ladder: Vec<usize>,
    pub budget: usize,
    pub p: f64,
    pub theta: f64,
    /// α_n = alpha_scale · n.
    pub alpha_scale: f64,
    pub seed: u64,
    /// Moment order r of the moment event; defaults to p.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub moment_order: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AsymptoticsParams {
    pub ladder: Vec<f64>,
    /// s²_n = e^{c n} in the adapted identities.
    pub adapted_c: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormConstParams {
    pub weight: WeightChoice,
    pub beta: u8,
    pub n: usize,
    pub p: f64,
    pub budget: u64,
    pub seed: u64,
}

/// A fully resolved command; the manifest stores it and reruns replay it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", content = "params", rename_all = "kebab-case")]
pub enum CommandSpec {
    Sample(SampleParams),
    TestNormLaw(SampleParams),
    Rate(RateParams),
    LdpVerify(LdpParams),
    Asymptotics(AsymptoticsParams),
    NormConst(NormConstParams),
}

impl CommandSpec {
    pub fn name(&self) -> &'static str {
        match self {
            CommandSpec::Sample(_) => "sample",
            CommandSpec::TestNormLaw(_) => "test-norm-law",
            CommandSpec::Rate(_) => "rate",
            CommandSpec::LdpVerify(_) => "ldp-verify",
            CommandSpec::Asymptotics(_) => "asymptotics",
            CommandSpec::NormConst(_) => "norm-const",
        }
    }
}

/// Section name of a command in the defaults and config files.
pub fn section_of(command: &str) -> String {
    command.replace('-', "_")
}

/// Resolves one command section: defaults, then the optional config file,
/// then the flags (already converted to a table).
pub fn resolve_section(command: &str, file: Option<&Table>, flags: Table) -> CliResult<Value> {
    let key = section_of(command);
    let mut all = defaults();
    if let Some(f) = file {
        merge(&mut all, f.clone());
    }
    let mut section = match all.remove(&key) {
        Some(Value::Table(t)) => t,
        _ => return Err(CliError::Internal(format!("no defaults for {command}"))),
    };
    merge(&mut section, flags);
    Ok(Value::Table(section))
}

pub fn build_spec(command: &str, section: Value) -> CliResult<CommandSpec> {
    fn typed<T: serde::de::DeserializeOwned>(command: &str, v: Value) -> CliResult<T> {
        v.try_into().map_err(|e| CliError::usage(format!("{command}: {e}")))
    }
    Ok(match command {
        "sample" => CommandSpec::Sample(typed(command, section)?),
        "test-norm-law" => CommandSpec::TestNormLaw(typed(command, section)?),
        "rate" => {
            let mut r: RateParams = typed(command, section)?;
            if let Some(path) = r.measure_file.take() {
                r.measure = Some(crate::io::read_measure_csv(Path::new(&path))?);
            }
            CommandSpec::Rate(r)
        }
        "ldp-verify" => CommandSpec::LdpVerify(typed(command, section)?),
        "asymptotics" => CommandSpec::Asymptotics(typed(command, section)?),
        "norm-const" => CommandSpec::NormConst(typed(command, section)?),
        other => return Err(CliError::usage(format!("unknown command {other}"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_resolve_for_every_command() {
        for c in ["sample", "test-norm-law", "rate", "ldp-verify", "asymptotics", "norm-const"] {
            let v = resolve_section(c, None, Table::new()).unwrap();
            let spec = build_spec(c, v).unwrap();
            assert_eq!(spec.name(), c);
        }
        assert_eq!(Thresholds::default().norm_law_min_pvalue, 0.01);
    }

    #[test]
    fn merge_order() {
        let file: Table = "[sample]\nn = 5\np = 3.0\n".parse().unwrap();
        let flags: Table = "n = 8\n".parse().unwrap();
        let v = resolve_section("sample", Some(&file), flags).unwrap();
        let CommandSpec::Sample(s) = build_spec("sample", v).unwrap() else { panic!() };
        assert_eq!((s.n, s.p, s.seed), (8, 3.0, 7));
    }

    #[test]
    fn threshold_overrides() {
        let (t, o) = resolve_thresholds(&["norm_law_min_pvalue=0.05".into()]).unwrap();
        assert_eq!(t.norm_law_min_pvalue, 0.05);
        assert_eq!(o["norm_law_min_pvalue"], 0.05);
        assert!(resolve_thresholds(&["nope=1".into()]).is_err());
        assert!(resolve_thresholds(&["asymptotic_tol".into()]).is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let flags: Table = "bogus = 1\n".parse().unwrap();
        let v = resolve_section("sample", None, flags).unwrap();
        assert!(matches!(build_spec("sample", v), Err(CliError::Usage(_))));
    }

    #[test]
    fn spec_roundtrips_through_json() {
        let v = resolve_section("rate", None, Table::new()).unwrap();
        let spec = build_spec("rate", v).unwrap();
        let s = serde_json::to_string(&spec).unwrap();
        assert_eq!(serde_json::from_str::<CommandSpec>(&s).unwrap(), spec);
    }
}

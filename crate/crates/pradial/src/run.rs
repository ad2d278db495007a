//! Rendering of experiment results to files, manifests and run directories.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::config::{defaults_version, CommandSpec, Thresholds};
use crate::error::{CliError, CliResult};
use crate::experiments::{self, Draws};
use crate::io::{fmt_f64, json_bytes, num, sha256_hex, Table};

/// Environment variable naming the default output root.
pub const OUT_ENV: &str = "PRADIAL_OUT";
pub const MANIFEST: &str = "manifest.json";

/// Files produced by one command, in write order, plus the verdict.
#[derive(Clone, Debug)]
pub struct Outcome {
    pub files: Vec<(String, Vec<u8>)>,
    /// Set when a statistical or diagnostic check failed.
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputEntry {
    pub file: String,
    pub sha256: String,
    pub bytes: u64,
}

/// Everything needed to regenerate a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub defaults_version: i64,
    #[serde(flatten)]
    pub command: CommandSpec,
    pub thresholds: Thresholds,
    pub threshold_overrides: BTreeMap<String, f64>,
    pub outputs: Vec<OutputEntry>,
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

impl Manifest {
    pub fn read(path: &Path) -> CliResult<Manifest> {
        let text = fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read manifest {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::usage(format!("manifest {}: {e}", path.display())))
    }
}

fn draws_table(d: &Draws) -> Table {
    let n = d.rows.first().map_or(0, Vec::len);
    let mut header = vec!["draw".to_string()];
    header.extend((1..=n).map(|i| format!("{}_{i}", d.label)));
    header.push("norm_split".into());
    let mut t = Table::new(&header);
    for (i, (row, b)) in d.rows.iter().zip(&d.norm_split).enumerate() {
        let mut r = vec![i.to_string()];
        r.extend(row.iter().map(|v| fmt_f64(*v)));
        r.push(fmt_f64(*b));
        t.push(r);
    }
    t
}

fn diagnostics_json(d: &pradial_core::mcmc::ChainDiagnostics, floor: f64) -> Value {
    json!({
        "draws": d.draws,
        "acceptance": d.acceptance.iter().map(|v| num(*v)).collect::<Vec<_>>(),
        "ess": d.ess.iter().map(|v| num(*v)).collect::<Vec<_>>(),
        "min-ess": num(d.min_ess),
        "ess-floor": num(floor),
        "steps": d.steps.iter().map(|s| s.iter().map(|v| num(*v)).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "failed": d.failed,
    })
}

fn opt(x: Option<f64>) -> Value {
    x.map_or(Value::Null, num)
}

/// Runs a resolved command and renders its outputs.
pub fn execute(spec: &CommandSpec, th: &Thresholds) -> CliResult<Outcome> {
    let mut files = Vec::new();
    let mut failure = None;
    match spec {
        CommandSpec::Sample(s) => {
            let floor = th.mcmc_min_ess_fraction * s.count as f64;
            let d = experiments::draw(s, floor)?;
            files.push(("samples.csv".into(), draws_table(&d).to_csv()?));
            if let Some(diag) = &d.diagnostics {
                files.push(("diagnostics.json".into(), json_bytes(&diagnostics_json(diag, floor))?));
                if diag.failed {
                    failure = Some(format!("minimum ESS {:.1} below the floor {floor}", diag.min_ess));
                }
            }
        }
        CommandSpec::TestNormLaw(s) => {
            let r = experiments::test_norm_law(s, th)?;
            let mut t = Table::new(&["draw", "b"]);
            for (i, b) in r.draws.norm_split.iter().enumerate() {
                t.push(vec![i.to_string(), fmt_f64(*b)]);
            }
            files.push(("norm_split.csv".into(), t.to_csv()?));
            let report = json!({
                "target": s.target,
                "draws": r.draws.norm_split.len(),
                "beta-shape": [num(r.draws.beta_a), num(r.draws.beta_b)],
                "ks-statistic": opt(r.ks.map(|k| k.statistic)),
                "p-value": opt(r.ks.map(|k| k.p_value)),
                "min-p-value": num(r.min_p_value),
                "continuous-count": r.continuous_count,
                "atom-count": r.atom_count,
                "atom-fraction": num(r.atom_fraction()),
                "expected-atom-fraction": num(r.draws.theta),
                "atom-interval": [r.atom_interval.0, r.atom_interval.1],
                "atom-interval-level": num(th.atom_interval_level),
                "atom-p-value": num(r.atom_p_value),
                "flag": r.flag,
                "pass": r.pass,
            });
            files.push(("report.json".into(), json_bytes(&report)?));
            if let Some(diag) = &r.draws.diagnostics {
                files.push(("diagnostics.json".into(), json_bytes(&diagnostics_json(diag, 0.0))?));
            }
            if !r.pass {
                failure = Some(r.flag.unwrap_or_else(|| "norm-split law rejected".into()));
            }
        }
        CommandSpec::Rate(p) => {
            let r = experiments::rate(p)?;
            let mut t = Table::new(&["term", "value"]);
            t.push(vec!["value".into(), fmt_f64(r.value)]);
            for (k, v) in &r.terms {
                t.push(vec![k.clone(), fmt_f64(*v)]);
            }
            files.push(("rate.csv".into(), t.to_csv()?));
            if let Some(scan) = &r.scan {
                let mut s = Table::new(&["x", "rate"]);
                for (x, v) in scan {
                    s.push(vec![fmt_f64(*x), fmt_f64(*v)]);
                }
                files.push(("rate_scan.csv".into(), s.to_csv()?));
            }
            let terms: serde_json::Map<String, Value> = r.terms.iter().map(|(k, v)| (k.clone(), num(*v))).collect();
            let report = json!({
                "target": r.target.name(),
                "value": num(r.value),
                "branch": r.branch,
                "terms": terms,
                "grid-minimizer": opt(r.grid_minimizer),
                "analytic-minimizer": opt(r.analytic_minimizer),
                "grid-step": opt(r.grid_step),
            });
            files.push(("rate.json".into(), json_bytes(&report)?));
        }
        CommandSpec::LdpVerify(l) => {
            let r = experiments::ldp_verify(l, th)?;
            let mut t = Table::new(&[
                "n",
                "budget",
                "hits",
                "frequency",
                "censored",
                "decay",
                "exact_probability",
                "exact_decay",
                "rate_infimum",
                "gap",
            ]);
            let o = |x: Option<f64>| x.map_or(String::new(), fmt_f64);
            for row in &r.rows {
                t.push(vec![
                    row.n.to_string(),
                    row.budget.to_string(),
                    row.hits.to_string(),
                    fmt_f64(row.frequency),
                    row.censored.to_string(),
                    fmt_f64(row.decay),
                    o(row.exact_probability),
                    o(row.exact_decay),
                    fmt_f64(row.infimum),
                    fmt_f64(row.gap),
                ]);
            }
            files.push(("decay.csv".into(), t.to_csv()?));
            let report = json!({
                "event": l.event,
                "level": num(l.level),
                "speed": "n",
                "rate-infimum": num(r.rows[0].infimum),
                "infimum-method": r.infimum_method,
                "gaps": r.rows.iter().map(|x| num(x.gap)).collect::<Vec<_>>(),
                "trend": r.trend,
                "final-gap": num(r.final_gap),
                "max-final-gap": num(th.ldp_max_final_gap),
                "censored": r.rows.iter().any(|x| x.censored),
                "pass": r.pass,
            });
            files.push(("report.json".into(), json_bytes(&report)?));
            if r.pass == Some(false) {
                failure = Some(format!("decay gap {} with trend {}", fmt_f64(r.final_gap), r.trend));
            }
        }
        CommandSpec::Asymptotics(a) => {
            let rows = experiments::asymptotics(a, th)?;
            let mut t = Table::new(&["case", "n", "value", "reference", "deviation", "within_tolerance"]);
            for r in &rows {
                t.push(vec![r.case.into(), fmt_f64(r.n), fmt_f64(r.value), fmt_f64(r.reference), fmt_f64(r.deviation), r.within.to_string()]);
            }
            files.push(("asymptotics.csv".into(), t.to_csv()?));
        }
        CommandSpec::NormConst(c) => {
            let e = experiments::norm_const(c)?;
            let cols = ["n", "p", "weight", "beta", "budget", "ln_inv_const", "ln_std_err", "constant", "constant_std_err"];
            let mut t = Table::new(&cols);
            let weight = serde_json::to_value(c.weight)?.as_str().unwrap_or_default().to_string();
            t.push(vec![
                c.n.to_string(),
                fmt_f64(c.p),
                weight,
                c.beta.to_string(),
                c.budget.to_string(),
                fmt_f64(e.ln_inv_const),
                fmt_f64(e.ln_std_err),
                fmt_f64(e.constant),
                fmt_f64(e.constant_std_err),
            ]);
            files.push(("norm_const.csv".into(), t.to_csv()?));
        }
    }
    Ok(Outcome { files, failure })
}

/// Default run directory: `<root>/<command>-<first 12 hex digits of the spec hash>`,
/// with the root from `PRADIAL_OUT` or `pradial-out`.
pub fn default_out_dir(spec: &CommandSpec) -> CliResult<PathBuf> {
    let root = std::env::var_os(OUT_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from("pradial-out"));
    let h = sha256_hex(&serde_json::to_vec(spec)?);
    Ok(root.join(format!("{}-{}", spec.name(), &h[..12])))
}

/// Holds the run directory's lock file for the lifetime of a run.
struct DirLock(PathBuf);

impl DirLock {
    fn acquire(dir: &Path) -> CliResult<DirLock> {
        let path = dir.join(".lock");
        match fs::OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(_) => Ok(DirLock(path)),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                Err(CliError::Internal(format!("run directory {} is in use (remove {} if stale)", dir.display(), path.display())))
            }
            Err(e) => Err(e.into()),
        }
    }
}

impl Drop for DirLock {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

/// Result of a completed run.
#[derive(Clone, Debug)]
pub struct RunSummary {
    pub dir: PathBuf,
    pub manifest: Manifest,
}

impl RunSummary {
    pub fn exit_code(&self) -> i32 {
        if self.manifest.failure.is_some() {
            3
        } else {
            0
        }
    }
}

/// Executes `spec` and writes its outputs and manifest into `dir`.
pub fn run_into(spec: &CommandSpec, th: &Thresholds, overrides: &BTreeMap<String, f64>, dir: &Path) -> CliResult<RunSummary> {
    let outcome = execute(spec, th)?;
    fs::create_dir_all(dir)?;
    let _lock = DirLock::acquire(dir)?;
    let mut outputs = Vec::new();
    for (name, bytes) in &outcome.files {
        fs::write(dir.join(name), bytes)?;
        outputs.push(OutputEntry { file: name.clone(), sha256: sha256_hex(bytes), bytes: bytes.len() as u64 });
    }
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        defaults_version: defaults_version(),
        command: spec.clone(),
        thresholds: th.clone(),
        threshold_overrides: overrides.clone(),
        outputs,
        status: if outcome.failure.is_some() { "failed".into() } else { "ok".into() },
        failure: outcome.failure,
    };
    fs::write(dir.join(MANIFEST), json_bytes(&serde_json::to_value(&manifest)?)?)?;
    Ok(RunSummary { dir: dir.to_path_buf(), manifest })
}

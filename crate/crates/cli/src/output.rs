use std::path::{Path, PathBuf};
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::CliError;

pub fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_artifact(path: &Path, body: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    std::fs::write(path, body)?;
    Ok(())
}

pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".meta.json");
    PathBuf::from(s)
}

/// Run metadata next to the data file; the data file itself stays
/// byte-identical across runs.
pub fn write_sidecar(
    out: &Path,
    run: &RunConfig,
    elapsed: Duration,
    extra: Value,
) -> Result<(), CliError> {
    let created = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    let meta = json!({
        "command": run.command.name(),
        "version": env!("CARGO_PKG_VERSION"),
        "argv": run.argv,
        "config": run.config.as_ref().map(|p| p.display().to_string()),
        "output": out.display().to_string(),
        "created_unix": created,
        "elapsed_seconds": elapsed.as_secs_f64(),
        "details": extra,
    });
    write_artifact(
        &sidecar_path(out),
        &serde_json::to_string_pretty(&meta).expect("json"),
    )
}

/// One line of an audit.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn bound(name: &str, value: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            pass: value < tol,
            detail: format!("{value:.3e} (< {tol:.0e})"),
        }
    }

    pub fn flag(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

/// Prints every check, optionally writes a JSON report, and turns failures
/// into the exit-1 error.
pub fn finish(checks: Vec<Check>, report: Option<&Path>) -> Result<(), CliError> {
    for c in &checks {
        println!(
            "{} {:<44} {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    if let Some(path) = report {
        let rows: Vec<Value> = checks
            .iter()
            .map(|c| json!({"name": c.name, "pass": c.pass, "detail": c.detail}))
            .collect();
        write_artifact(
            path,
            &serde_json::to_string_pretty(&json!({"checks": rows})).expect("json"),
        )?;
    }
    let failed: Vec<String> = checks
        .into_iter()
        .filter(|c| !c.pass)
        .map(|c| format!("{}: {}", c.name, c.detail))
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Checks(failed))
    }
}

//! Report envelopes, CSV writers and exit codes.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;

use crate::config::RunConfig;
use hodgelab_core::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECKS_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RICCATI: i32 = 3;
pub const EXIT_ILL_CONDITIONED: i32 = 4;
pub const EXIT_WALL: i32 = 5;

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    pub fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Caustic { .. } | Error::Singular(_) => EXIT_RICCATI,
            Error::IllConditioned { .. } => EXIT_ILL_CONDITIONED,
            Error::IrregularWeight { .. } => EXIT_WALL,
            _ => EXIT_USAGE,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Self {
            code: EXIT_USAGE,
            message: format!("i/o: {e}"),
        }
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Self {
            code: EXIT_USAGE,
            message: format!("csv: {e}"),
        }
    }
}

pub type CmdResult<T> = std::result::Result<T, Failure>;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: Option<f64>,
    pub passed: bool,
}

impl Check {
    /// Passes when `value ≤ tol`.
    pub fn at_most(name: &str, value: f64, tol: f64) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance: Some(tol),
            passed: value <= tol,
        }
    }

    pub fn flag(name: &str, value: f64, passed: bool) -> Self {
        Self {
            name: name.into(),
            value,
            tolerance: None,
            passed,
        }
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    core_version: &'static str,
    command: &'a str,
    seed: u64,
    tolerances: &'a BTreeMap<String, f64>,
    config: &'a RunConfig,
    timestamp: u64,
    passed: bool,
    checks: &'a [Check],
    result: &'a T,
}

pub struct Outcome {
    pub command: &'static str,
    pub checks: Vec<Check>,
    pub files: Vec<PathBuf>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn print(&self) {
        println!("== {} ==", self.command);
        for c in &self.checks {
            let tol = c.tolerance.map(|t| format!(" (tol {t:e})")).unwrap_or_default();
            println!("  [{}] {}: {:e}{tol}", if c.passed { "pass" } else { "FAIL" }, c.name, c.value);
        }
        for f in &self.files {
            println!("  wrote {}", f.display());
        }
    }
}

pub fn write_json<T: Serialize>(cfg: &RunConfig, command: &'static str, checks: &[Check], result: &T) -> CmdResult<PathBuf> {
    fs::create_dir_all(&cfg.out)?;
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let env = Envelope {
        tool: "hodgelab",
        version: env!("CARGO_PKG_VERSION"),
        core_version: hodgelab_core::VERSION,
        command,
        seed: cfg.seed,
        tolerances: &cfg.tolerances,
        config: cfg,
        timestamp,
        passed: checks.iter().all(|c| c.passed),
        checks,
        result,
    };
    let path = cfg.out.join(format!("{command}.json"));
    let text = serde_json::to_string_pretty(&env).map_err(|e| Failure::usage(format!("json: {e}")))?;
    fs::write(&path, text + "\n")?;
    Ok(path)
}

pub fn write_csv<I, R>(dir: &Path, name: &str, header: &[String], rows: I) -> CmdResult<PathBuf>
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    let mut w = csv::Writer::from_path(&path)?;
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    w.flush()?;
    Ok(path)
}

//! Machine-readable output: CSV rows, residual reports and run manifests.
//!
//! All floating-point output carries 17 significant digits so golden files
//! are exact, and nothing time- or host-dependent is ever written; output
//! bytes depend only on (command, args, seed).

use std::collections::BTreeMap;

use serde::Serialize;

/// Full-precision float formatting (17 significant digits).
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Minimal CSV assembly; fields here never need quoting.
pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// One residual/spectral check result.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub check_name: String,
    pub points_tested: usize,
    pub max_residual: f64,
    pub convergence_order: f64,
    pub passed: bool,
}

/// The full verification report.
#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub checks: Vec<ResidualReport>,
    pub passed: bool,
}

/// Manifest echoing the resolved configuration of a run.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub args: BTreeMap<String, String>,
    pub seed: u64,
    pub threads: Option<usize>,
}

impl RunManifest {
    pub fn new(command: &str, seed: u64, threads: Option<usize>) -> Self {
        RunManifest {
            command: command.to_string(),
            args: BTreeMap::new(),
            seed,
            threads,
        }
    }

    pub fn arg(mut self, key: &str, value: impl ToString) -> Self {
        self.args.insert(key.to_string(), value.to_string());
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }
}

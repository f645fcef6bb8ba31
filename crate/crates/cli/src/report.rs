//! Machine-readable run report (schema_version 1) and output-file writing.
//!
//! Reports are byte-identical across runs with the same config and seed,
//! except for the trailing timings block. Files are written atomically
//! (temp file + rename in the destination directory).

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64 as C64;
use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    /// Residual at or below tolerance for an asserted check.
    Pass,
    /// Residual above tolerance for an asserted check.
    Fail,
    /// Reported without assertion (no backing guarantee for this spec).
    Measured,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub params: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convention: Option<String>,
    pub residual: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    pub status: CheckStatus,
}

impl CheckEntry {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            params: BTreeMap::new(),
            convention: None,
            residual: 0.0,
            tolerance: None,
            status: CheckStatus::Measured,
        }
    }

    pub fn param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.into(), value.into());
        self
    }

    pub fn complex_param(self, key: &str, z: C64) -> Self {
        let text = crate::config::format_complex(z);
        self.param(key, text)
    }

    pub fn convention(mut self, tag: &str) -> Self {
        self.convention = Some(tag.into());
        self
    }

    /// Record the residual and judge it against a tolerance.
    pub fn asserted(mut self, residual: f64, tolerance: f64) -> Self {
        self.residual = residual;
        self.tolerance = Some(tolerance);
        self.status = if residual <= tolerance {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        self
    }

    /// Record the residual without asserting anything.
    pub fn measured(mut self, residual: f64) -> Self {
        self.residual = residual;
        self.status = CheckStatus::Measured;
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct HamiltonianSummary {
    pub u0: String,
    pub hermitian: bool,
    pub closed_form_present: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closed_form: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub discrepancy_residual: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct Timings {
    pub total_ms: f64,
    pub checks_ms: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: u32,
    pub config: Value,
    pub seed: u64,
    pub checks: Vec<CheckEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hamiltonian: Option<HamiltonianSummary>,
    pub timings: Timings,
}

impl Report {
    pub fn new(config: Value, seed: u64) -> Self {
        Self {
            schema_version: 1,
            config,
            seed,
            checks: Vec::new(),
            classification: None,
            hamiltonian: None,
            timings: Timings::default(),
        }
    }

    pub fn any_failed(&self) -> bool {
        self.checks.iter().any(|c| c.status == CheckStatus::Fail)
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("report serializes");
        out.push('\n');
        out
    }
}

/// Write bytes atomically: temp file in the same directory, then rename.
pub fn write_atomic(path: &Path, content: &str) -> std::io::Result<()> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    std::fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".{}.tmp{}",
        path.file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| "out".into()),
        std::process::id()
    ));
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(content.as_bytes())?;
        f.sync_all()?;
    }
    std::fs::rename(&tmp, path)
}

/// CSV with header `index,re,im` in the eigensolver's sorted order.
pub fn spectrum_csv(eigenvalues: &[C64]) -> String {
    let mut out = String::from("index,re,im\n");
    for (idx, z) in eigenvalues.iter().enumerate() {
        out.push_str(&format!("{},{},{}\n", idx, z.re, z.im));
    }
    out
}

//! Machine-readable reports. JSON field order is fixed by struct order and
//! map keys are sorted, so identical configs and seeds produce identical
//! bytes; wall-clock time is included only on request.

use serde::Serialize;
use std::path::Path;

use crate::config::{Format, RunConfig};
use crate::Failure;

pub const TOOL: &str = "cylmag";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize)]
pub struct ParamEntry {
    pub key: String,
    pub value: f64,
}

#[derive(Serialize)]
pub struct CheckReport {
    pub name: &'static str,
    pub status: &'static str,
    pub threshold: f64,
    pub details: serde_json::Value,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

#[derive(Serialize)]
pub struct VerificationReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub system: &'static str,
    pub parameters: Vec<ParamEntry>,
    pub hbar: f64,
    pub hbar_correction: bool,
    pub seed: u64,
    pub samples: usize,
    pub status: &'static str,
    pub checks: Vec<CheckReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u64>,
}

impl VerificationReport {
    pub fn render_text(&self) -> String {
        let mut out = format!(
            "{} {} — {} (seed {}, ħ = {}, correction {})\n",
            self.tool,
            self.version,
            self.system,
            self.seed,
            self.hbar,
            if self.hbar_correction { "on" } else { "off" },
        );
        for check in &self.checks {
            out.push_str(&format!(
                "  {:<13} {:<4} (threshold {:e})\n",
                check.name,
                check.status.to_uppercase(),
                check.threshold
            ));
        }
        out.push_str(&format!("overall: {}\n", self.status.to_uppercase()));
        out
    }
}

/// Parameter echo for reports, in catalog order.
pub fn param_entries(cfg: &RunConfig) -> Result<Vec<ParamEntry>, Failure> {
    Ok(cfg
        .system()?
        .params_list()
        .into_iter()
        .map(|(key, value)| ParamEntry {
            key: key.to_string(),
            value,
        })
        .collect())
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serialization is total");
    text.push('\n');
    text
}

/// Print to stdout, or write to `path` when given.
pub fn emit(text: &str, path: Option<&Path>) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Failure::Run(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Output routing shared by the data-producing commands (`simulate`,
/// `solve-beta`): with `--out` the CSV goes to the file and the summary to
/// stdout (json unless text is requested); without it, `--format` selects
/// which of the two artifacts stdout carries, defaulting to the CSV.
pub fn emit_data(cfg: &RunConfig, csv: &str, json: &str, text: &str) -> Result<(), Failure> {
    match &cfg.out {
        Some(path) => {
            emit(csv, Some(path))?;
            match cfg.format_or(Format::Json) {
                Format::Text => emit(text, None),
                _ => emit(json, None),
            }
        }
        None => match cfg.format_or(Format::Csv) {
            Format::Csv => emit(csv, None),
            Format::Json => emit(json, None),
            Format::Text => emit(text, None),
        },
    }
}

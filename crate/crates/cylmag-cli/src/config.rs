//! Run configuration: built-in defaults, overridden by a flat key=value
//! config file, overridden by command-line flags.
//!
//! Recognized file keys mirror the flags (`system`, `hbar`,
//! `hbar_correction`, `samples`, `seed`, `tol`, `out`, `format`, `timings`)
//! plus `param.<name>` for system parameters and the extended keys consumed
//! by individual commands: `checks`, `hbars`, `scaling`, `probes`, `points`,
//! `t_end`, `rows`, `state`, `mode`, `periods`, `f1`, `beta1`, `beta2`,
//! `phi0`, `y0`. Unknown keys are rejected.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;

use clap::ValueEnum;
use cylmag::fields::catalog::{catalog_system, CatalogSystem, SystemKind};
use cylmag::sampling::DEFAULT_SEED;

use crate::Failure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Flags shared by every command; any of them may also come from the config
/// file, with the flag winning on conflict.
#[derive(clap::Args, Clone, Debug)]
pub struct CommonArgs {
    /// Key=value config file; flags override file entries.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Catalog system: SYSTEM_I, SYSTEM_II or SYSTEM_III (aliases I/II/III).
    #[arg(long)]
    pub system: Option<String>,

    /// System parameter override, repeatable: --param rho1=2.0
    #[arg(long = "param", value_name = "K=V")]
    pub params: Vec<String>,

    /// Planck constant used by quantum operators and corrected potentials.
    #[arg(long)]
    pub hbar: Option<f64>,

    /// Strip the ħ²-proportional scalar corrections (diagnostic mode).
    #[arg(long)]
    pub no_hbar_correction: bool,

    /// Sample count for randomized batteries.
    #[arg(long)]
    pub samples: Option<usize>,

    /// RNG seed; echoed into every report.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Pass/fail threshold override applied to every selected check.
    #[arg(long)]
    pub tol: Option<f64>,

    /// Output file (trajectory/profile CSV, or the report itself).
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Output format; defaults to json for reports and csv for data.
    #[arg(long, value_enum)]
    pub format: Option<Format>,

    /// Include wall-clock timings in reports (breaks byte-stability).
    #[arg(long)]
    pub timings: bool,
}

const FILE_KEYS: &[&str] = &[
    "system",
    "hbar",
    "hbar_correction",
    "samples",
    "seed",
    "tol",
    "out",
    "format",
    "timings",
];

const EXTRA_KEYS: &[&str] = &[
    "checks", "hbars", "scaling", "probes", "points", "t_end", "rows", "state", "mode",
    "periods", "f1", "beta1", "beta2", "phi0", "y0",
];

/// Fully resolved configuration for one command invocation.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub system_kind: SystemKind,
    pub params: Vec<(String, f64)>,
    pub hbar: f64,
    pub hbar_correction: bool,
    pub samples: usize,
    pub seed: u64,
    pub tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub timings: bool,
    extra: BTreeMap<String, String>,
}

fn parse_file(path: &PathBuf) -> Result<BTreeMap<String, String>, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            Failure::Usage(format!(
                "{}:{}: expected key = value, got '{line}'",
                path.display(),
                lineno + 1
            ))
        })?;
        let key = key.trim().to_string();
        let known = FILE_KEYS.contains(&key.as_str())
            || EXTRA_KEYS.contains(&key.as_str())
            || key.starts_with("param.");
        if !known {
            return Err(Failure::Usage(format!(
                "{}:{}: unknown config key '{key}'",
                path.display(),
                lineno + 1
            )));
        }
        if map.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(Failure::Usage(format!(
                "{}:{}: duplicate config key '{key}'",
                path.display(),
                lineno + 1
            )));
        }
    }
    Ok(map)
}

fn parse_param(spec: &str) -> Result<(String, f64), Failure> {
    let (k, v) = spec
        .split_once('=')
        .ok_or_else(|| Failure::Usage(format!("--param expects K=V, got '{spec}'")))?;
    let value: f64 = v
        .trim()
        .parse()
        .map_err(|_| Failure::Usage(format!("parameter {k}: '{v}' is not a number")))?;
    Ok((k.trim().to_string(), value))
}

fn parse_key<T: std::str::FromStr>(key: &str, value: &str) -> Result<T, Failure> {
    value
        .parse()
        .map_err(|_| Failure::Usage(format!("config key {key}: cannot parse '{value}'")))
}

impl RunConfig {
    pub fn resolve(args: &CommonArgs) -> Result<Self, Failure> {
        let mut file = match &args.config {
            Some(path) => parse_file(path)?,
            None => BTreeMap::new(),
        };

        let system_name = args
            .system
            .clone()
            .or_else(|| file.remove("system"))
            .unwrap_or_else(|| "SYSTEM_I".to_string());
        let system_kind =
            SystemKind::parse(&system_name).map_err(|e| Failure::Usage(e.to_string()))?;

        // Flag-supplied parameters win; file entries for the same key are
        // shadowed, duplicate flags are ambiguous and rejected.
        let mut params: Vec<(String, f64)> = Vec::new();
        for spec in &args.params {
            let (key, value) = parse_param(spec)?;
            if params.iter().any(|(k, _)| *k == key) {
                return Err(Failure::Usage(format!("--param {key} given twice")));
            }
            params.push((key, value));
        }
        let file_params: Vec<(String, String)> = file
            .iter()
            .filter(|(k, _)| k.starts_with("param."))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        for (key, value) in file_params {
            file.remove(&key);
            let name = key.trim_start_matches("param.").to_string();
            if !params.iter().any(|(k, _)| *k == name) {
                params.push((name, parse_key(&key, &value)?));
            }
        }

        let hbar = match (args.hbar, file.remove("hbar")) {
            (Some(v), _) => v,
            (None, Some(v)) => parse_key("hbar", &v)?,
            (None, None) => 1.0,
        };
        let hbar_correction = if args.no_hbar_correction {
            false
        } else {
            match file.remove("hbar_correction") {
                Some(v) => parse_key("hbar_correction", &v)?,
                None => true,
            }
        };
        let samples = match (args.samples, file.remove("samples")) {
            (Some(v), _) => v,
            (None, Some(v)) => parse_key("samples", &v)?,
            (None, None) => 1000,
        };
        let seed = match (args.seed, file.remove("seed")) {
            (Some(v), _) => v,
            (None, Some(v)) => parse_key("seed", &v)?,
            (None, None) => DEFAULT_SEED,
        };
        let tol = match (args.tol, file.remove("tol")) {
            (Some(v), _) => Some(v),
            (None, Some(v)) => Some(parse_key("tol", &v)?),
            (None, None) => None,
        };
        let out = args
            .out
            .clone()
            .or_else(|| file.remove("out").map(PathBuf::from));
        let format = match (args.format, file.remove("format")) {
            (Some(v), _) => Some(v),
            (None, Some(v)) => Some(
                Format::from_str(&v, true)
                    .map_err(|e| Failure::Usage(format!("config key format: {e}")))?,
            ),
            (None, None) => None,
        };
        let timings = args.timings
            || match file.remove("timings") {
                Some(v) => parse_key("timings", &v)?,
                None => false,
            };

        Ok(RunConfig {
            system_kind,
            params,
            hbar,
            hbar_correction,
            samples,
            seed,
            tol,
            out,
            format,
            timings,
            extra: file,
        })
    }

    /// The configured catalog system with the correction flag applied.
    pub fn system(&self) -> Result<CatalogSystem, Failure> {
        catalog_system(self.system_kind, &self.params, self.hbar)
            .map(|s| s.with_quantum_correction(self.hbar_correction))
            .map_err(|e| Failure::Usage(e.to_string()))
    }

    pub fn format_or(&self, default: Format) -> Format {
        self.format.unwrap_or(default)
    }

    pub fn extra_str(&self, key: &str) -> Option<&str> {
        self.extra.get(key).map(|s| s.as_str())
    }

    pub fn extra_f64(&self, key: &str, default: f64) -> Result<f64, Failure> {
        match self.extra.get(key) {
            Some(v) => parse_key(key, v),
            None => Ok(default),
        }
    }

    pub fn extra_usize(&self, key: &str, default: usize) -> Result<usize, Failure> {
        match self.extra.get(key) {
            Some(v) => parse_key(key, v),
            None => Ok(default),
        }
    }

    pub fn extra_bool(&self, key: &str, default: bool) -> Result<bool, Failure> {
        match self.extra.get(key) {
            Some(v) => parse_key(key, v),
            None => Ok(default),
        }
    }

    /// Comma-separated float list, e.g. `hbars = 0.5, 1.0`.
    pub fn extra_f64_list(&self, key: &str, default: &[f64]) -> Result<Vec<f64>, Failure> {
        match self.extra.get(key) {
            Some(v) => v
                .split(',')
                .map(|s| {
                    s.trim().parse::<f64>().map_err(|_| {
                        Failure::Usage(format!("config key {key}: cannot parse '{s}'"))
                    })
                })
                .collect(),
            None => Ok(default.to_vec()),
        }
    }
}

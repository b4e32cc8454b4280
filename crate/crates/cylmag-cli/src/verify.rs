//! `cylmag verify` — run selected verification suites against one catalog
//! system and emit a pass/fail report. Suites run on worker threads; all
//! result ordering is fixed, so reports are byte-stable for a given config.

use std::time::Instant;

use crate::checks::{self, CheckName};
use crate::config::{CommonArgs, Format, RunConfig};
use crate::report::{emit, param_entries, to_json, VerificationReport, TOOL, VERSION};
use crate::Failure;

fn parse_checks(specs: &[String]) -> Result<Vec<CheckName>, Failure> {
    if specs.is_empty() || specs.iter().any(|s| s == "all") {
        if let Some(bad) = specs.iter().find(|s| *s != "all") {
            // Mixing `all` with an explicit name is almost certainly a typo.
            return Err(Failure::Usage(format!(
                "--check all cannot be combined with --check {bad}"
            )));
        }
        return Ok(CheckName::ALL.to_vec());
    }
    let mut requested = Vec::new();
    for spec in specs {
        let name = CheckName::parse(spec)?;
        if !requested.contains(&name) {
            requested.push(name);
        }
    }
    // Canonical report order regardless of flag order.
    Ok(CheckName::ALL
        .into_iter()
        .filter(|c| requested.contains(c))
        .collect())
}

pub fn run(args: &CommonArgs, check_specs: &[String]) -> Result<i32, Failure> {
    let started = Instant::now();
    let cfg = RunConfig::resolve(args)?;
    let sys = cfg.system()?;
    let settings = checks::settings(&cfg)?;
    // --check flags win; otherwise a comma-separated `checks` file key.
    let file_checks: Vec<String> = match cfg.extra_str("checks") {
        Some(s) if check_specs.is_empty() => {
            s.split(',').map(|t| t.trim().to_string()).collect()
        }
        _ => Vec::new(),
    };
    let selected = parse_checks(if check_specs.is_empty() {
        &file_checks
    } else {
        check_specs
    })?;

    let reports: Vec<_> = std::thread::scope(|scope| {
        let handles: Vec<_> = selected
            .iter()
            .map(|&name| {
                let settings = &settings;
                scope.spawn(move || checks::run(name, sys, settings))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("check worker panicked"))
            .collect()
    });

    let all_pass = reports.iter().all(|r| r.passed());
    let report = VerificationReport {
        tool: TOOL,
        version: VERSION,
        system: sys.name(),
        parameters: param_entries(&cfg)?,
        hbar: cfg.hbar,
        hbar_correction: cfg.hbar_correction,
        seed: cfg.seed,
        samples: cfg.samples,
        status: if all_pass { "pass" } else { "fail" },
        checks: reports,
        wall_ms: cfg
            .timings
            .then(|| started.elapsed().as_millis() as u64),
    };

    let text = match cfg.format_or(Format::Json) {
        Format::Json => to_json(&report),
        Format::Text => report.render_text(),
        Format::Csv => {
            return Err(Failure::Usage(
                "verify does not support csv output (use json or text)".into(),
            ))
        }
    };
    emit(&text, cfg.out.as_deref())?;
    Ok(if all_pass { 0 } else { 1 })
}

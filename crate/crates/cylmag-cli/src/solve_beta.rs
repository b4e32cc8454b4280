//! `cylmag solve-beta` — evaluate the closed-form angular profile or
//! integrate the profile equation numerically, emitting per-φ residuals of
//! the third-order equation and its first-order reduction together with the
//! drift of both first integrals.
//!
//! Parameters come from `--param` (or `param.*`/bare config keys): `f1`,
//! `beta1`, `beta2`, `phi0`. The closed-form branch exists only for β₂ = 0;
//! numeric mode either seeds its initial state from that branch (gaining a
//! `delta_closed` comparison column) or takes an explicit `y0 = β,β′,β″`.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::time::Instant;

use cylmag::beta::{
    first_integrals, jet_from_state, residual1, residual3, solve_ivp, ClosedFormBeta,
    VANISHING_THRESHOLD,
};
use cylmag::fields::scalar1d::Scalar1D;
use serde::Serialize;

use crate::config::{CommonArgs, RunConfig};
use crate::report::{emit_data, to_json, TOOL, VERSION};
use crate::simulate::ode_options;
use crate::Failure;

const CSV_HEADER: &str = "phi,beta,dbeta,ddbeta,res_ode,res_invariant,beta1_drift,beta2_drift";
const PARAM_KEYS: [&str; 4] = ["f1", "beta1", "beta2", "phi0"];

struct Row {
    phi: f64,
    beta: f64,
    dbeta: f64,
    ddbeta: f64,
    res_ode: f64,
    res_invariant: f64,
    beta1_drift: f64,
    beta2_drift: f64,
    delta_closed: Option<f64>,
}

#[derive(Serialize)]
struct Summary {
    tool: &'static str,
    version: &'static str,
    mode: &'static str,
    f1: f64,
    beta1: f64,
    beta2: f64,
    phi0: f64,
    periods: f64,
    rows: usize,
    max_res_ode: f64,
    max_res_invariant: f64,
    max_beta1_drift: f64,
    max_beta2_drift: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    max_delta_closed: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_ms: Option<u64>,
}

impl Summary {
    fn render_text(&self) -> String {
        let mut out = format!(
            "{} {} — solve-beta {} (f1 {}, beta1 {}, beta2 {}, phi0 {})\n  {} rows over {} half-turns\n  max residuals: ode {:e}, invariant {:e}\n  max drifts: beta1 {:e}, beta2 {:e}\n",
            self.tool,
            self.version,
            self.mode,
            self.f1,
            self.beta1,
            self.beta2,
            self.phi0,
            self.rows + 1,
            self.periods,
            self.max_res_ode,
            self.max_res_invariant,
            self.max_beta1_drift,
            self.max_beta2_drift,
        );
        if let Some(d) = self.max_delta_closed {
            out.push_str(&format!("  max |numeric − closed|: {:e}\n", d));
        }
        out
    }
}

/// Profile parameter: `--param`/`param.*` entries win over bare config keys.
fn param_or(cfg: &RunConfig, key: &str, default: f64) -> Result<f64, Failure> {
    if let Some((_, v)) = cfg.params.iter().find(|(k, _)| k == key) {
        return Ok(*v);
    }
    cfg.extra_f64(key, default)
}

fn param_given(cfg: &RunConfig, key: &str) -> bool {
    cfg.params.iter().any(|(k, _)| k == key) || cfg.extra_str(key).is_some()
}

fn parse_y0(spec: &str) -> Result<[f64; 3], Failure> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(Failure::Usage(format!(
            "y0 expects beta,dbeta,ddbeta (3 numbers), got {} fields",
            parts.len()
        )));
    }
    let mut out = [0.0; 3];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part
            .parse()
            .map_err(|_| Failure::Usage(format!("y0: '{part}' is not a number")))?;
    }
    Ok(out)
}

fn closed_profile(f1: f64, beta1: f64, phi0: f64) -> Result<ClosedFormBeta, Failure> {
    ClosedFormBeta::new(f1, beta1, phi0).map_err(|e| Failure::Usage(e.to_string()))
}

fn closed_rows(profile: &ClosedFormBeta, phis: &[f64]) -> Vec<Row> {
    let (f1, beta1) = (profile.f1, profile.beta1);
    phis.iter()
        .map(|&phi| {
            let j = profile.jet(phi);
            let (b, db, ddb, dddb) = (
                j.value(),
                j.derivative(1),
                j.derivative(2),
                j.derivative(3),
            );
            let (b1, b2) = first_integrals(b, db, ddb, f1);
            Row {
                phi,
                beta: b,
                dbeta: db,
                ddbeta: ddb,
                res_ode: residual3(b, db, ddb, dddb, f1),
                res_invariant: residual1(b, db, beta1, 0.0, f1),
                beta1_drift: b1 - beta1,
                beta2_drift: b2,
                delta_closed: None,
            }
        })
        .collect()
}

fn numeric_rows(
    cfg: &RunConfig,
    f1: f64,
    phi0: f64,
    phis: &[f64],
) -> Result<(Vec<Row>, f64, f64), Failure> {
    // Explicit y0 fixes both first integrals; otherwise seed from the
    // closed form (the β₂ = 0 branch) so the run carries a comparison column.
    let (y0, targets, closed) = match cfg.extra_str("y0") {
        Some(spec) => {
            for key in ["beta1", "beta2"] {
                if param_given(cfg, key) {
                    return Err(Failure::Usage(format!(
                        "{key} is derived from y0 and cannot be set alongside it"
                    )));
                }
            }
            let y0 = parse_y0(spec)?;
            let targets = first_integrals(y0[0], y0[1], y0[2], f1);
            (y0, targets, None)
        }
        None => {
            let beta1 = param_or(cfg, "beta1", -0.5)?;
            let beta2 = param_or(cfg, "beta2", 0.0)?;
            if beta2 != 0.0 {
                return Err(Failure::Usage(format!(
                    "numeric mode seeds from the closed-form branch, which needs beta2 = 0 \
                     (got {beta2}); supply y0 = beta,dbeta,ddbeta instead"
                )));
            }
            let profile = closed_profile(f1, beta1, phi0)?;
            let j = profile.jet(phi0);
            let y0 = [j.value(), j.derivative(1), j.derivative(2)];
            (y0, (beta1, 0.0), Some(profile))
        }
    };

    let path = solve_ivp(f1, phi0, y0, phis, VANISHING_THRESHOLD, &ode_options(cfg.tol))
        .map_err(|e| Failure::Run(e.to_string()))?;
    let mut rows = Vec::with_capacity(path.len());
    for s in path {
        let j = jet_from_state(s.beta, s.dbeta, s.ddbeta, f1)
            .map_err(|e| Failure::Run(e.to_string()))?;
        let (b1, b2) = first_integrals(s.beta, s.dbeta, s.ddbeta, f1);
        rows.push(Row {
            phi: s.phi,
            beta: s.beta,
            dbeta: s.dbeta,
            ddbeta: s.ddbeta,
            res_ode: residual3(s.beta, s.dbeta, s.ddbeta, j.derivative(3), f1),
            res_invariant: residual1(s.beta, s.dbeta, targets.0, targets.1, f1),
            beta1_drift: b1 - targets.0,
            beta2_drift: b2 - targets.1,
            delta_closed: closed.as_ref().map(|p| s.beta - p.value(s.phi)),
        });
    }
    Ok((rows, targets.0, targets.1))
}

pub fn run(args: &CommonArgs, mode_flag: Option<&str>) -> Result<i32, Failure> {
    let started = Instant::now();
    let cfg = RunConfig::resolve(args)?;
    for (key, _) in &cfg.params {
        if !PARAM_KEYS.contains(&key.as_str()) {
            return Err(Failure::Usage(format!(
                "unknown parameter '{key}' for solve-beta (expected f1, beta1, beta2 or phi0)"
            )));
        }
    }

    let mode = match mode_flag.or_else(|| cfg.extra_str("mode")).unwrap_or("closed") {
        "closed" => "closed",
        "numeric" => "numeric",
        other => {
            return Err(Failure::Usage(format!(
                "mode must be closed or numeric, got '{other}'"
            )))
        }
    };
    let f1 = param_or(&cfg, "f1", -8.0)?;
    let phi0 = param_or(&cfg, "phi0", 0.0)?;
    let periods = cfg.extra_f64("periods", 2.0)?;
    let rows_n = cfg.extra_usize("rows", 400)?;
    if !(periods > 0.0) || rows_n == 0 {
        return Err(Failure::Usage(format!(
            "need periods > 0 and rows > 0, got periods = {periods}, rows = {rows_n}"
        )));
    }
    // The closed form is π-periodic, so one period is a half-turn in φ.
    let phis: Vec<f64> = (0..=rows_n)
        .map(|i| phi0 + periods * PI * i as f64 / rows_n as f64)
        .collect();

    let (rows, beta1, beta2) = match mode {
        "closed" => {
            let beta1 = param_or(&cfg, "beta1", -0.5)?;
            let beta2 = param_or(&cfg, "beta2", 0.0)?;
            if beta2 != 0.0 {
                return Err(Failure::Usage(format!(
                    "the closed form covers only beta2 = 0 (got {beta2}); use --mode numeric"
                )));
            }
            let profile = closed_profile(f1, beta1, phi0)?;
            (closed_rows(&profile, &phis), beta1, beta2)
        }
        _ => numeric_rows(&cfg, f1, phi0, &phis)?,
    };

    let with_delta = rows.iter().any(|r| r.delta_closed.is_some());
    let mut csv = String::from(CSV_HEADER);
    if with_delta {
        csv.push_str(",delta_closed");
    }
    csv.push('\n');
    let mut max = [0.0f64; 5];
    for r in &rows {
        write!(
            csv,
            "{:e},{:e},{:e},{:e},{:e},{:e},{:e},{:e}",
            r.phi,
            r.beta,
            r.dbeta,
            r.ddbeta,
            r.res_ode,
            r.res_invariant,
            r.beta1_drift,
            r.beta2_drift,
        )
        .expect("write to string");
        if let Some(d) = r.delta_closed {
            write!(csv, ",{:e}", d).expect("write to string");
        }
        csv.push('\n');
        max[0] = max[0].max(r.res_ode.abs());
        max[1] = max[1].max(r.res_invariant.abs());
        max[2] = max[2].max(r.beta1_drift.abs());
        max[3] = max[3].max(r.beta2_drift.abs());
        max[4] = max[4].max(r.delta_closed.unwrap_or(0.0).abs());
    }

    let summary = Summary {
        tool: TOOL,
        version: VERSION,
        mode,
        f1,
        beta1,
        beta2,
        phi0,
        periods,
        rows: rows_n,
        max_res_ode: max[0],
        max_res_invariant: max[1],
        max_beta1_drift: max[2],
        max_beta2_drift: max[3],
        max_delta_closed: with_delta.then_some(max[4]),
        wall_ms: cfg.timings.then(|| started.elapsed().as_millis() as u64),
    };
    emit_data(&cfg, &csv, &to_json(&summary), &summary.render_text())?;
    Ok(0)
}

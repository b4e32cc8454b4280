//! The five verification suites behind `cylmag verify`. Each suite returns a
//! [`CheckReport`]; library errors during a run are embedded as a failed
//! check rather than aborting the whole report.

use serde_json::json;

use cylmag::classical::{
    bracket_scale, hamiltonian_observable, integral_observable, integrate_trajectory,
    poisson_bracket, IntegralKind, PhaseState,
};
use cylmag::detequations;
use cylmag::fields::catalog::CatalogSystem;
use cylmag::geometry::{
    cart_to_cyl, cyl_to_cart, covector_cyl_to_cart, pairing_cart, pairing_cyl, vector_cyl_to_cart,
    CartPoint, CylCovector, CylPoint, CylVector,
};
use cylmag::ode::OdeOptions;
use cylmag::quantum::{commutator_residual, hbar_scaling_fit, OperatorPair, TestFunction};
use cylmag::sampling::{self, SampleBox};
use cylmag::Error;

use crate::config::RunConfig;
use crate::report::CheckReport;
use crate::Failure;

/// ħ battery of the correction-necessity scaling fit.
pub const SCALING_HBARS: [f64; 4] = [0.25, 0.5, 1.0, 2.0];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckName {
    Poisson,
    Conservation,
    Determining,
    Quantum,
    Gauge,
}

impl CheckName {
    pub const ALL: [CheckName; 5] = [
        CheckName::Poisson,
        CheckName::Conservation,
        CheckName::Determining,
        CheckName::Quantum,
        CheckName::Gauge,
    ];

    pub fn label(self) -> &'static str {
        match self {
            CheckName::Poisson => "poisson",
            CheckName::Conservation => "conservation",
            CheckName::Determining => "determining",
            CheckName::Quantum => "quantum",
            CheckName::Gauge => "gauge",
        }
    }

    pub fn parse(s: &str) -> Result<Self, Failure> {
        CheckName::ALL
            .into_iter()
            .find(|c| c.label() == s)
            .ok_or_else(|| {
                Failure::Usage(format!(
                    "unknown check '{s}' (expected all, poisson, conservation, determining, \
                     quantum or gauge)"
                ))
            })
    }

    fn default_threshold(self) -> f64 {
        match self {
            CheckName::Determining => 1e-9,
            _ => 1e-8,
        }
    }
}

/// Plain-data settings for the check suites, pre-parsed so the suites can
/// run on worker threads without touching the config again.
#[derive(Clone, Debug)]
pub struct Settings {
    pub tol: Option<f64>,
    pub samples: usize,
    pub seed: u64,
    pub hbar: f64,
    pub t_end: f64,
    pub rows: usize,
    pub initial: Option<[f64; 6]>,
    pub probes: usize,
    pub points: usize,
    pub hbars: Vec<f64>,
    pub scaling: bool,
}

pub fn settings(cfg: &RunConfig) -> Result<Settings, Failure> {
    let initial = match cfg.extra_str("state") {
        Some(spec) => Some(parse_state(spec)?),
        None => None,
    };
    let hbars = cfg.extra_f64_list("hbars", &[0.5, 1.0])?;
    if hbars.is_empty() {
        return Err(Failure::Usage("hbars must not be empty".into()));
    }
    Ok(Settings {
        tol: cfg.tol,
        samples: cfg.samples,
        seed: cfg.seed,
        hbar: cfg.hbar,
        t_end: cfg.extra_f64("t_end", 10.0)?,
        rows: cfg.extra_usize("rows", 200)?,
        initial,
        probes: cfg.extra_usize("probes", 20)?,
        points: cfg.extra_usize("points", 100)?,
        hbars,
        scaling: cfg.extra_bool("scaling", !cfg.hbar_correction)?,
    })
}

pub fn parse_state(spec: &str) -> Result<[f64; 6], Failure> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    if parts.len() != 6 {
        return Err(Failure::Usage(format!(
            "state expects x,y,z,px,py,pz (6 numbers), got {} fields",
            parts.len()
        )));
    }
    let mut out = [0.0; 6];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part
            .parse()
            .map_err(|_| Failure::Usage(format!("state: '{part}' is not a number")))?;
    }
    Ok(out)
}

/// Default trajectory start: a seeded state away from the axis with bounded
/// momenta, unless the config pins one.
pub fn initial_state(st: &Settings) -> PhaseState {
    match st.initial {
        Some(v) => PhaseState::new(CartPoint::new(v[0], v[1], v[2]), [v[3], v[4], v[5]]),
        None => {
            let bx = SampleBox {
                r: (1.0, 2.0),
                p: (-1.0, 1.0),
                ..SampleBox::default()
            };
            sampling::states(1, st.seed, &bx)[0]
        }
    }
}

pub fn state_json(s: &PhaseState) -> serde_json::Value {
    json!({
        "x": s.position.x, "y": s.position.y, "z": s.position.z,
        "px": s.momentum[0], "py": s.momentum[1], "pz": s.momentum[2],
    })
}

fn status(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

fn report(
    name: CheckName,
    threshold: f64,
    body: Result<(bool, serde_json::Value), Error>,
) -> CheckReport {
    match body {
        Ok((ok, details)) => CheckReport {
            name: name.label(),
            status: status(ok),
            threshold,
            details,
        },
        Err(e) => CheckReport {
            name: name.label(),
            status: "fail",
            threshold,
            details: json!({ "error": e.to_string() }),
        },
    }
}

pub fn run(name: CheckName, sys: CatalogSystem, st: &Settings) -> CheckReport {
    let threshold = st.tol.unwrap_or_else(|| name.default_threshold());
    let body = match name {
        CheckName::Poisson => poisson(sys, st, threshold),
        CheckName::Conservation => conservation(sys, st, threshold),
        CheckName::Determining => determining(sys, st, threshold),
        CheckName::Quantum => quantum(sys, st, threshold),
        CheckName::Gauge => gauge(sys, st, threshold),
    };
    report(name, threshold, body)
}

fn poisson(
    sys: CatalogSystem,
    st: &Settings,
    tol: f64,
) -> Result<(bool, serde_json::Value), Error> {
    let states = sampling::states(st.samples, st.seed, &SampleBox::default());
    let h = hamiltonian_observable(&sys);
    let x1 = integral_observable(&sys, IntegralKind::X1);
    let x2 = integral_observable(&sys, IntegralKind::X2);
    let mut entries = Vec::new();
    let mut worst = 0.0f64;
    for (label, f, g) in [
        ("{H,X1}", &h, &x1),
        ("{H,X2}", &h, &x2),
        ("{X1,X2}", &x1, &x2),
    ] {
        let mut max = 0.0f64;
        let mut sum = 0.0;
        for s in &states {
            let rel = poisson_bracket(f, g, s)?.abs() / bracket_scale(f, g, s)?;
            max = max.max(rel);
            sum += rel;
        }
        entries.push(json!({
            "pair": label,
            "max_relative": max,
            "mean_relative": sum / states.len() as f64,
        }));
        worst = worst.max(max);
    }
    Ok((
        worst < tol,
        json!({ "pairs": entries, "states": st.samples, "max_relative": worst }),
    ))
}

fn conservation(
    sys: CatalogSystem,
    st: &Settings,
    tol: f64,
) -> Result<(bool, serde_json::Value), Error> {
    let initial = initial_state(st);
    let traj = integrate_trajectory(&sys, &initial, st.t_end, st.rows, &OdeOptions::default())?;
    let [dh, dx1, dx2] = traj.max_drifts();
    let worst = dh.max(dx1).max(dx2);
    Ok((
        worst < tol,
        json!({
            "t_end": st.t_end,
            "rows": st.rows,
            "initial": state_json(&initial),
            "drift_h": dh,
            "drift_x1": dx1,
            "drift_x2": dx2,
        }),
    ))
}

fn determining(
    sys: CatalogSystem,
    st: &Settings,
    tol: f64,
) -> Result<(bool, serde_json::Value), Error> {
    const NAMES: [&str; 8] = [
        "aux_compat_1",
        "aux_compat_2",
        "w_cross_rphi",
        "w_cross_phiz",
        "w_cross_rz",
        "w_grad_r",
        "w_grad_phi",
        "w_grad_z",
    ];
    let points = sampling::cyl_points(st.samples, st.seed, &SampleBox::default());
    let aux = sys.aux();
    let w = |at: &CylPoint| sys.jets(at).map(|j| j.w);
    let mut max = [0.0f64; 8];
    let mut sum = [0.0f64; 8];
    let mut ranks = std::collections::BTreeMap::<String, usize>::new();
    for at in &points {
        let rr = detequations::reduced_residuals(&aux, &w, st.hbar, at)?;
        let rel = [
            rr.res_a1.abs() / (1.0 + rr.scale_a),
            rr.res_a2.abs() / (1.0 + rr.scale_a),
            rr.res_b[0].abs() / (1.0 + rr.scale_b),
            rr.res_b[1].abs() / (1.0 + rr.scale_b),
            rr.res_b[2].abs() / (1.0 + rr.scale_b),
            rr.res_m[0].abs() / (1.0 + rr.scale_m),
            rr.res_m[1].abs() / (1.0 + rr.scale_m),
            rr.res_m[2].abs() / (1.0 + rr.scale_m),
        ];
        for k in 0..8 {
            max[k] = max[k].max(rel[k]);
            sum[k] += rel[k];
        }
        *ranks.entry(rr.rank_m.to_string()).or_default() += 1;
    }
    let equations: Vec<_> = NAMES
        .iter()
        .enumerate()
        .map(|(k, name)| {
            json!({
                "name": name,
                "max_relative": max[k],
                "mean_relative": sum[k] / points.len() as f64,
            })
        })
        .collect();
    let worst = max.iter().fold(0.0f64, |a, b| a.max(*b));
    let expected = sys.expected_rank();
    let ranks_ok = ranks.len() == 1 && ranks.contains_key(&expected.to_string());
    Ok((
        worst < tol && ranks_ok,
        json!({
            "equations": equations,
            "rank_histogram": ranks,
            "expected_rank": expected,
            "points": st.samples,
            "max_relative": worst,
        }),
    ))
}

fn quantum(
    sys: CatalogSystem,
    st: &Settings,
    tol: f64,
) -> Result<(bool, serde_json::Value), Error> {
    let bx = SampleBox::default();
    let mut rng = sampling::rng(st.seed);
    let probes: Vec<TestFunction> = (0..st.probes)
        .map(|_| TestFunction::random(&mut rng, &bx))
        .collect();
    let points: Vec<CartPoint> = sampling::cyl_points(st.points, st.seed.wrapping_add(1), &bx)
        .iter()
        .map(cyl_to_cart)
        .collect();

    let mut entries = Vec::new();
    let mut worst = 0.0f64;
    for &hbar in &st.hbars {
        for pair in OperatorPair::ALL {
            let rep = commutator_residual(&sys, pair, hbar, &probes, &points)?;
            entries.push(json!({
                "pair": rep.pair,
                "hbar": hbar,
                "max_relative": rep.max_relative,
                "mean_relative": rep.mean_relative,
                "scale": rep.scale,
            }));
            worst = worst.max(rep.max_relative);
        }
    }

    let toggle_hbar = if st.hbars.contains(&1.0) {
        1.0
    } else {
        *st.hbars.last().expect("validated non-empty")
    };
    let on = commutator_residual(
        &sys.with_quantum_correction(true),
        OperatorPair::HX1,
        toggle_hbar,
        &probes,
        &points,
    )?;
    let off = commutator_residual(
        &sys.with_quantum_correction(false),
        OperatorPair::HX1,
        toggle_hbar,
        &probes,
        &points,
    )?;

    let mut details = json!({
        "pairs": entries,
        "probes": st.probes,
        "points": st.points,
        "max_relative": worst,
        "correction_toggle": {
            "hbar": toggle_hbar,
            "on_max_relative": on.max_relative,
            "off_max_relative": off.max_relative,
        },
    });
    if st.scaling {
        let fit = hbar_scaling_fit(
            &sys.with_quantum_correction(false),
            OperatorPair::HX1,
            &SCALING_HBARS,
            &points,
        );
        details["scaling"] = match fit {
            Ok(exponent) => json!({ "hbar_values": SCALING_HBARS, "exponent": exponent }),
            Err(Error::DegenerateFit { detail }) => json!({ "degenerate": detail }),
            Err(e) => return Err(e),
        };
    }
    Ok((worst < tol, details))
}

/// Chart-level tolerance: round-trips and pairing invariance are pure
/// floating-point algebra, so they must hold far below the field threshold.
pub const CHART_TOL: f64 = 1e-13;

fn gauge(
    sys: CatalogSystem,
    st: &Settings,
    tol: f64,
) -> Result<(bool, serde_json::Value), Error> {
    use rand::Rng;
    let bx = SampleBox::default();
    let points = sampling::cyl_points(st.samples, st.seed, &bx);

    let mut curl_max = 0.0f64;
    for at in &points {
        let jets = sys.jets(at)?;
        let from_gauge = [
            jets.a[2].shift([0, 1, 0]).sub(&jets.a[1].shift([0, 0, 1])),
            jets.a[0].shift([0, 0, 1]).sub(&jets.a[2].shift([1, 0, 0])),
            jets.a[1].shift([1, 0, 0]).sub(&jets.a[0].shift([0, 1, 0])),
        ];
        for i in 0..3 {
            let b = jets.b[i].value();
            curl_max = curl_max.max((from_gauge[i].value() - b).abs() / (1.0 + b.abs()));
        }
    }

    let mut rng = sampling::rng(st.seed.wrapping_add(2));
    let mut roundtrip_max = 0.0f64;
    let mut pairing_max = 0.0f64;
    let tau = std::f64::consts::TAU;
    for _ in 0..st.samples {
        let cyl = sampling::sample_cyl(&mut rng, &bx);
        let back = cart_to_cyl(&cyl_to_cart(&cyl))?;
        let dphi = (back.phi - cyl.phi).abs();
        roundtrip_max = roundtrip_max
            .max((back.r - cyl.r).abs())
            .max(dphi.min(tau - dphi))
            .max((back.z - cyl.z).abs());

        let a = CylCovector {
            r: rng.gen_range(-1.0..1.0),
            phi: rng.gen_range(-1.0..1.0),
            z: rng.gen_range(-1.0..1.0),
        };
        let v = CylVector {
            r: rng.gen_range(-1.0..1.0),
            phi: rng.gen_range(-1.0..1.0),
            z: rng.gen_range(-1.0..1.0),
        };
        let direct = pairing_cyl(&a, &v);
        let mapped = pairing_cart(
            &covector_cyl_to_cart(&a, &cyl),
            &vector_cyl_to_cart(&v, &cyl),
        );
        pairing_max = pairing_max.max((direct - mapped).abs() / (1.0 + direct.abs()));
    }

    Ok((
        curl_max < tol && roundtrip_max < CHART_TOL && pairing_max < CHART_TOL,
        json!({
            "curl_max_relative": curl_max,
            "roundtrip_max": roundtrip_max,
            "pairing_max_relative": pairing_max,
            "chart_threshold": CHART_TOL,
            "samples": st.samples,
        }),
    ))
}

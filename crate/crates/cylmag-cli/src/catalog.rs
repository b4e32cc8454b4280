//! `cylmag catalog` — machine-readable listing of the integrable systems,
//! their parameters with defaults, and the shape of their axial integral.

use serde::Serialize;

use cylmag::fields::catalog::{catalog_system, w3_library, SystemKind, X2Form};

use crate::config::{CommonArgs, Format, RunConfig};
use crate::report::{emit, to_json, TOOL, VERSION};
use crate::Failure;

#[derive(Serialize)]
struct ParamSchema {
    key: &'static str,
    default: f64,
    description: &'static str,
}

#[derive(Serialize)]
struct AxialEntry {
    form: &'static str,
    description: &'static str,
}

#[derive(Serialize)]
struct SystemEntry {
    name: &'static str,
    rank: usize,
    x2_form: &'static str,
    description: &'static str,
    parameters: Vec<ParamSchema>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    axial_potentials: Vec<AxialEntry>,
}

#[derive(Serialize)]
struct Listing {
    tool: &'static str,
    version: &'static str,
    systems: Vec<SystemEntry>,
}

fn describe(kind: SystemKind, key: &str) -> &'static str {
    match (kind, key) {
        (SystemKind::I, "rho1") => "quadratic radial-profile coefficient (uniform field part)",
        (SystemKind::I, "rho2") => "quartic radial-profile coefficient (cubic field part)",
        (SystemKind::I, "psi1") => "cos φ amplitude of the angular profile",
        (SystemKind::I, "psi2") => "sin φ amplitude of the angular profile",
        (SystemKind::I, "w0") => "constant radial-profile offset",
        (_, "f1") => "forcing constant of the angular profile equation (< 0)",
        (_, "beta1") => "profile first integral; valid window is -f1²/64 < beta1 < 0",
        (_, "tau0") => "constant twist offset",
        (_, "tau1") => "twist amplitude coupling the angular and axial directions",
        (_, "w0") => "scalar potential strength",
        (_, "rho0") => "additive angular-profile offset",
        (_, "phi0") => "angular phase of the profile",
        (_, "omega") => "harmonic axial potential frequency",
        (_, "slope") => "linear axial potential slope",
        (_, "core") => "planar core selector: 1 (polynomial) or 2 (trigonometric, twist-free)",
        _ => "",
    }
}

fn x2_label(form: X2Form) -> &'static str {
    match form {
        X2Form::ReducedPz => "-iħ ∂_z (reduces to first order in the catalog gauge)",
        X2Form::AxialQuadratic(_) => "(p_z + A_z)² + 2·W3(z) (stays second order)",
    }
}

fn entry(kind: SystemKind, description: &'static str) -> SystemEntry {
    let sys = catalog_system(kind, &[], 1.0).expect("catalog defaults are valid");
    let mut parameters: Vec<ParamSchema> = sys
        .params_list()
        .into_iter()
        .map(|(key, default)| ParamSchema {
            key,
            default,
            description: describe(kind, key),
        })
        .collect();
    let mut axial = Vec::new();
    if kind == SystemKind::III {
        parameters.insert(
            0,
            ParamSchema {
                key: "core",
                default: 2.0,
                description: describe(kind, "core"),
            },
        );
        parameters.push(ParamSchema {
            key: "slope",
            default: 0.0,
            description: describe(kind, "slope"),
        });
        axial = w3_library()
            .into_iter()
            .map(|(form, description)| AxialEntry { form, description })
            .collect();
    }
    SystemEntry {
        name: sys.name(),
        rank: sys.expected_rank(),
        x2_form: x2_label(sys.x2_form()),
        description,
        parameters,
        axial_potentials: axial,
    }
}

fn listing() -> Listing {
    Listing {
        tool: TOOL,
        version: VERSION,
        systems: vec![
            entry(
                SystemKind::I,
                "Polynomial family: axial field rho1·r − 6·rho2·r³ with a unit-frequency \
                 trigonometric angular profile; no quantum potential correction.",
            ),
            entry(
                SystemKind::II,
                "Trigonometric-profile family with twist; the scalar potential needs an \
                 ħ²-proportional correction for the quantum integrals to survive.",
            ),
            entry(
                SystemKind::III,
                "Rank-1 axial extension: a twist-free planar core plus an arbitrary axial \
                 potential W3(z); the axial integral keeps its second-order form.",
            ),
        ],
    }
}

fn render_text(listing: &Listing) -> String {
    let mut out = format!("{} {} catalog\n", listing.tool, listing.version);
    for sys in &listing.systems {
        out.push_str(&format!(
            "\n{} (rank {})\n  {}\n  X2: {}\n  parameters:\n",
            sys.name, sys.rank, sys.description, sys.x2_form
        ));
        for p in &sys.parameters {
            out.push_str(&format!(
                "    {:<6} = {:<8} {}\n",
                p.key,
                format!("{}", p.default),
                p.description
            ));
        }
        if !sys.axial_potentials.is_empty() {
            out.push_str("  axial potentials:\n");
            for a in &sys.axial_potentials {
                out.push_str(&format!("    {:<16} {}\n", a.form, a.description));
            }
        }
    }
    out
}

pub fn run(args: &CommonArgs) -> Result<i32, Failure> {
    let cfg = RunConfig::resolve(args)?;
    let listing = listing();
    let text = match cfg.format_or(Format::Json) {
        Format::Json => to_json(&listing),
        Format::Text => render_text(&listing),
        Format::Csv => {
            return Err(Failure::Usage(
                "catalog does not support csv output (use json or text)".into(),
            ))
        }
    };
    emit(&text, cfg.out.as_deref())?;
    Ok(0)
}

//! The acceptance gate: eight end-to-end criteria, one test per criterion so
//! the harness emits exactly one pass/fail line for each. Every test also
//! prints a `criterion N (...): pass/fail — ...` line with the measured
//! extremes (visible under `--nocapture`, and automatically whenever a
//! criterion fails).
//!
//! The gate runs against three pinned configurations, one per catalog family:
//!
//! * polynomial family at (ρ₁, ρ₂, ψ₁, ψ₂, W₀) = (1, 0.1, 0.5, 0.5, 1);
//! * twisted family at (f₁, β₁, τ₀, τ₁, W₀, ρ₀) = (−8, −0.5, 0, 0.3, 1, 0),
//!   inside the closed-form profile's validity window −f₁²/64 < β₁ < 0;
//! * axial family on the twist-free twisted core with the harmonic axial
//!   potential at ω = 1.

use std::f64::consts::PI;

use nalgebra::Vector3;
use num_complex::Complex64;

use cylmag::beta::{
    first_integrals, residual1, residual3, solve_ivp, ClosedFormBeta, VANISHING_THRESHOLD,
};
use cylmag::classical::{
    bracket_scale, hamiltonian_observable, integral_observable, integrate_trajectory,
    poisson_bracket, IntegralKind,
};
use cylmag::detequations::{self, ReducedResiduals};
use cylmag::fields::catalog::{CatalogSystem, PlanarCore, SystemIIParams, SystemIParams, W3};
use cylmag::fields::scalar1d::Scalar1D;
use cylmag::geometry::{
    cart_to_cyl, covector_cyl_to_cart, cyl_to_cart, pairing_cart, pairing_cyl, vector_cyl_to_cart,
    CartPoint, CylCovector, CylPoint, CylVector,
};
use cylmag::ode::OdeOptions;
use cylmag::quantum::{
    build_integral, commutator_residual, hbar_scaling_fit, OperatorPair, TestFunction,
};
use cylmag::sampling::{self, SampleBox, DEFAULT_SEED};
use rand::Rng;

const HBAR: f64 = 1.0;

fn system_i() -> CatalogSystem {
    CatalogSystem::system_i(
        SystemIParams {
            rho1: 1.0,
            rho2: 0.1,
            psi1: 0.5,
            psi2: 0.5,
            w0: 1.0,
        },
        HBAR,
    )
    .expect("pinned polynomial-family config is valid")
}

fn system_ii_params() -> SystemIIParams {
    SystemIIParams {
        f1: -8.0,
        beta1: -0.5,
        tau0: 0.0,
        tau1: 0.3,
        w0: 1.0,
        rho0: 0.0,
        phi0: 0.0,
    }
}

fn system_ii() -> CatalogSystem {
    CatalogSystem::system_ii(system_ii_params(), HBAR)
        .expect("pinned twisted-family config is valid")
}

fn system_iii() -> CatalogSystem {
    CatalogSystem::system_iii(
        PlanarCore::II(SystemIIParams {
            tau0: 0.0,
            tau1: 0.0,
            ..system_ii_params()
        }),
        W3::Harmonic { omega: 1.0 },
        HBAR,
    )
    .expect("pinned axial-family config is valid")
}

fn acceptance_systems() -> [CatalogSystem; 3] {
    [system_i(), system_ii(), system_iii()]
}

/// Print the per-criterion verdict line and hand the flag back for the
/// assertion, so failing runs still show the measured numbers.
fn verdict(criterion: usize, label: &str, ok: bool, detail: &str) -> bool {
    println!(
        "criterion {criterion} ({label}): {} — {detail}",
        if ok { "pass" } else { "fail" }
    );
    ok
}

/// The probe battery shared by the quantum criteria: 20 random
/// polynomial×Gaussian test functions and 100 off-axis points.
fn quantum_battery() -> (Vec<TestFunction>, Vec<CartPoint>) {
    let bx = SampleBox::default();
    let mut rng = sampling::rng(DEFAULT_SEED);
    let probes = (0..20).map(|_| TestFunction::random(&mut rng, &bx)).collect();
    let points = sampling::cyl_points(100, DEFAULT_SEED.wrapping_add(1), &bx)
        .iter()
        .map(cyl_to_cart)
        .collect();
    (probes, points)
}

#[test]
fn criterion_1_classical_brackets_vanish_on_seeded_states() {
    let states = sampling::states(1000, DEFAULT_SEED, &SampleBox::default());
    let mut worst = 0.0f64;
    for sys in acceptance_systems() {
        let h = hamiltonian_observable(&sys);
        let x1 = integral_observable(&sys, IntegralKind::X1);
        let x2 = integral_observable(&sys, IntegralKind::X2);
        for (f, g) in [(&h, &x1), (&h, &x2), (&x1, &x2)] {
            for s in &states {
                let rel = poisson_bracket(f, g, s).unwrap().abs()
                    / bracket_scale(f, g, s).unwrap();
                worst = worst.max(rel);
            }
        }
    }
    let ok = worst < 1e-8;
    assert!(verdict(
        1,
        "classical involution",
        ok,
        &format!("max relative bracket {worst:.3e} over 3 systems × 3 pairs × 1000 states"),
    ));
}

#[test]
fn criterion_2_trajectories_conserve_all_three_integrals() {
    let bx = SampleBox {
        r: (1.0, 2.0),
        p: (-1.0, 1.0),
        ..SampleBox::default()
    };
    let initial = sampling::states(1, DEFAULT_SEED, &bx)[0];
    let opts = |tol: f64| OdeOptions {
        rel_tol: tol,
        abs_tol: tol * 1e-2,
        ..OdeOptions::default()
    };

    let mut worst_default = 0.0f64;
    let mut halving = Vec::new();
    let mut halving_ok = true;
    for sys in acceptance_systems() {
        let traj = integrate_trajectory(&sys, &initial, 10.0, 200, &OdeOptions::default())
            .unwrap();
        let drifts = traj.max_drifts();
        worst_default = worst_default.max(drifts[0]).max(drifts[1]).max(drifts[2]);

        // Halve the tolerance from a level where the step size is
        // error-controlled (not capped) and well above the roundoff floor.
        let drift_of = |tol: f64| -> f64 {
            integrate_trajectory(&sys, &initial, 10.0, 200, &opts(tol))
                .unwrap()
                .max_drifts()
                .into_iter()
                .fold(0.0f64, f64::max)
        };
        let (loose, halved) = (drift_of(1e-9), drift_of(0.5e-9));
        halving_ok &= halved < loose;
        halving.push(format!("{} {loose:.2e}→{halved:.2e}", sys.name()));
    }

    let ok = worst_default < 1e-8 && halving_ok;
    assert!(verdict(
        2,
        "conservation along trajectories",
        ok,
        &format!(
            "max drift {worst_default:.3e} over t ∈ [0, 10] at default tolerances; \
             halving 1e-9 → 5e-10 gave {}",
            halving.join(", ")
        ),
    ));
}

#[test]
fn criterion_3_quantum_commutators_vanish_with_correction_on() {
    let (probes, points) = quantum_battery();
    let mut worst = 0.0f64;
    for sys in acceptance_systems() {
        for hbar in [0.5, 1.0] {
            for pair in OperatorPair::ALL {
                let rep = commutator_residual(&sys, pair, hbar, &probes, &points).unwrap();
                worst = worst.max(rep.max_relative);
            }
        }
    }
    let ok = worst < 1e-8;
    assert!(verdict(
        3,
        "quantum involution",
        ok,
        &format!(
            "max relative commutator {worst:.3e} over 3 systems × ħ ∈ {{0.5, 1}} × 3 pairs \
             (20 probes × 100 points)"
        ),
    ));
}

#[test]
fn criterion_4_hbar_squared_correction_is_necessary_and_sufficient() {
    let sys = system_ii();
    let stripped = sys.with_quantum_correction(false);
    let (probes, points) = quantum_battery();

    let off = commutator_residual(&stripped, OperatorPair::HX1, 1.0, &probes, &points).unwrap();
    let on = commutator_residual(&sys, OperatorPair::HX1, 1.0, &probes, &points).unwrap();
    let exponent =
        hbar_scaling_fit(&stripped, OperatorPair::HX1, &[0.25, 0.5, 1.0, 2.0], &points).unwrap();

    let ok = off.max_relative > 1e-3
        && (exponent - 2.0).abs() < 0.05
        && on.max_relative < 1e-8;
    assert!(verdict(
        4,
        "ħ² correction necessity",
        ok,
        &format!(
            "stripped [H,X1] residual {:.3e} (> 1e-3), anomaly exponent {exponent:.4} \
             (2 ± 0.05 over ħ ∈ {{0.25, 0.5, 1, 2}}), restored residual {:.3e} (< 1e-8)",
            off.max_relative, on.max_relative
        ),
    ));
}

#[test]
fn criterion_5_profile_ode_closed_form_and_numeric_agree() {
    let (f1, beta1, phi0) = (-8.0, -0.5, 0.0);
    let profile = ClosedFormBeta::new(f1, beta1, phi0).unwrap();
    // Two periods of the π-periodic profile on a 400-interval grid.
    let rows = 400;
    let phis: Vec<f64> = (0..=rows)
        .map(|i| phi0 + 2.0 * PI * i as f64 / rows as f64)
        .collect();

    let mut worst_closed = 0.0f64;
    for &phi in &phis {
        let j = profile.jet(phi);
        let (b, db, ddb, dddb) =
            (j.value(), j.derivative(1), j.derivative(2), j.derivative(3));
        worst_closed = worst_closed
            .max(residual3(b, db, ddb, dddb, f1).abs())
            .max(residual1(b, db, beta1, 0.0, f1).abs());
    }

    let j0 = profile.jet(phi0);
    let y0 = [j0.value(), j0.derivative(1), j0.derivative(2)];
    let (t1, t2) = first_integrals(y0[0], y0[1], y0[2], f1);
    let samples = solve_ivp(
        f1,
        phi0,
        y0,
        &phis,
        VANISHING_THRESHOLD,
        &OdeOptions::default(),
    )
    .unwrap();
    let mut worst_match = 0.0f64;
    let mut worst_drift = 0.0f64;
    for s in &samples {
        worst_match = worst_match.max((s.beta - profile.jet(s.phi).value()).abs());
        let (b1, b2) = first_integrals(s.beta, s.dbeta, s.ddbeta, f1);
        worst_drift = worst_drift.max((b1 - t1).abs()).max((b2 - t2).abs());
    }

    let ok = worst_closed < 1e-10 && worst_match < 1e-8 && worst_drift < 1e-8;
    assert!(verdict(
        5,
        "angular profile ODE",
        ok,
        &format!(
            "closed-form residuals {worst_closed:.3e} (< 1e-10) over two periods, \
             numeric−closed gap {worst_match:.3e} (< 1e-8), \
             first-integral drift {worst_drift:.3e} (< 1e-8)"
        ),
    ));
}

fn relative_residuals(rr: &ReducedResiduals) -> [f64; 8] {
    [
        rr.res_a1.abs() / (1.0 + rr.scale_a),
        rr.res_a2.abs() / (1.0 + rr.scale_a),
        rr.res_b[0].abs() / (1.0 + rr.scale_b),
        rr.res_b[1].abs() / (1.0 + rr.scale_b),
        rr.res_b[2].abs() / (1.0 + rr.scale_b),
        rr.res_m[0].abs() / (1.0 + rr.scale_m),
        rr.res_m[1].abs() / (1.0 + rr.scale_m),
        rr.res_m[2].abs() / (1.0 + rr.scale_m),
    ]
}

#[test]
fn criterion_6_reduced_determining_equations_hold_with_expected_ranks() {
    let points = sampling::cyl_points(100, DEFAULT_SEED, &SampleBox::default());
    let mut worst = 0.0f64;
    let mut ranks_ok = true;
    let mut classical_limit_exact = true;
    for sys in acceptance_systems() {
        let aux = sys.aux();
        let w = |at: &CylPoint| sys.jets(at).map(|j| j.w);
        for at in &points {
            let rr = detequations::reduced_residuals(&aux, &w, sys.hbar, at).unwrap();
            for rel in relative_residuals(&rr) {
                worst = worst.max(rel);
            }
            ranks_ok &= rr.rank_m == sys.expected_rank();
        }

        // At ħ = 0 the gradient system's right-hand side must be identically
        // zero: the residual has to agree bit-for-bit with the hand-assembled
        // classical system M·∇W.
        let classical = sys.with_hbar(0.0);
        let w0 = |at: &CylPoint| classical.jets(at).map(|j| j.w);
        for at in &points {
            let (res, _) =
                detequations::matrix_equation_residual(&aux, &w0, 0.0, at).unwrap();
            let grad = Vector3::from(w0(at).unwrap().grad());
            let zero_rhs = detequations::matrix_m(&aux, at) * grad;
            classical_limit_exact &= res == [zero_rhs[0], zero_rhs[1], zero_rhs[2]];
        }
    }

    let ok = worst < 1e-9 && ranks_ok && classical_limit_exact;
    assert!(verdict(
        6,
        "reduced determining equations",
        ok,
        &format!(
            "max relative residual {worst:.3e} (< 1e-9) at 100 points, \
             ranks 2/2/1 everywhere: {ranks_ok}, \
             ħ = 0 matches the zero-RHS system exactly: {classical_limit_exact}"
        ),
    ));
}

#[test]
fn criterion_7_gauge_matches_field_and_charts_are_exact() {
    let bx = SampleBox::default();
    let points = sampling::cyl_points(1000, DEFAULT_SEED, &bx);

    let mut curl_max = 0.0f64;
    for sys in acceptance_systems() {
        for at in &points {
            let jets = sys.jets(at).unwrap();
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
    }

    let mut rng = sampling::rng(DEFAULT_SEED.wrapping_add(2));
    let mut roundtrip_max = 0.0f64;
    let mut pairing_max = 0.0f64;
    let tau = std::f64::consts::TAU;
    for _ in 0..1000 {
        let cyl = sampling::sample_cyl(&mut rng, &bx);
        let back = cart_to_cyl(&cyl_to_cart(&cyl)).unwrap();
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

    let ok = curl_max < 1e-8 && roundtrip_max < 1e-13 && pairing_max < 1e-13;
    assert!(verdict(
        7,
        "gauge and geometry",
        ok,
        &format!(
            "curl-vs-field gap {curl_max:.3e} (< 1e-8) for every catalog gauge, \
             chart round-trip {roundtrip_max:.3e} and pairing invariance {pairing_max:.3e} \
             (< 1e-13) on 1000 samples"
        ),
    ));
}

#[test]
fn criterion_8_axial_integral_reduces_only_for_rank_two_families() {
    let points: Vec<CartPoint> = sampling::cyl_points(10, DEFAULT_SEED, &SampleBox::default())
        .iter()
        .map(cyl_to_cart)
        .collect();

    // Rank-2 families: the axial integral collapses to the single term −iħ∂_z.
    let mut reduced_exact = true;
    for sys in [system_i(), system_ii()] {
        for hbar in [0.5, 1.0] {
            let x2 = build_integral(&sys, IntegralKind::X2, hbar);
            for at in &points {
                let t = x2.coeffs(at).unwrap();
                reduced_exact &= t.terms().len() == 1
                    && t.value([0, 0, 1]) == Complex64::new(0.0, -hbar);
            }
        }
    }

    // The axial family keeps the full second-order form −ħ²∂_zz + ω²z²
    // (harmonic W₃ at ω = 1, A_z = 0 in the catalog gauge) and nothing else.
    let omega = 1.0;
    let x2 = build_integral(&system_iii(), IntegralKind::X2, HBAR);
    let mut axial_ok = true;
    for at in &points {
        let t = x2.coeffs(at).unwrap();
        axial_ok &= (t.value([0, 0, 2]).re + HBAR * HBAR).abs() < 1e-15;
        for (idx, jet) in t.terms() {
            let v = jet.value();
            match *idx {
                [0, 0, 2] => axial_ok &= (v.re + HBAR * HBAR).abs() < 1e-15 && v.im == 0.0,
                [0, 0, 0] => {
                    let want = 2.0 * W3::Harmonic { omega }.value(at.z);
                    axial_ok &= (v.re - want).abs() < 1e-13 * (1.0 + want.abs())
                        && v.im.abs() < 1e-15;
                }
                _ => axial_ok &= v.norm() < 1e-15,
            }
        }
    }

    let ok = reduced_exact && axial_ok;
    assert!(verdict(
        8,
        "axial-integral reduction",
        ok,
        &format!(
            "rank-2 families reduce to the single term −iħ∂_z at ħ ∈ {{0.5, 1}}: \
             {reduced_exact}; axial family keeps −ħ²∂_zz + 2W₃(z) with no first-order \
             remnant: {axial_ok}"
        ),
    ));
}

//! Commutator verification on probe batteries and the ħ-scaling diagnostic
//! that isolates the quantum potential correction.
//!
//! A residual is |([a,b]ψ)(x)| with the commutator evaluated at coefficient
//! level, normalized by the largest raw application |(a∘b)ψ| or |(b∘a)ψ|
//! seen across the whole battery. The scaling fit measures the zeroth-order
//! commutator coefficient divided by one power of ħ (the power every Moyal
//! bracket carries), so a surviving ħ² defect shows up as a log-log slope
//! of two.

use crate::classical::IntegralKind;
use crate::error::{Error, Result};
use crate::fields::catalog::CatalogSystem;
use crate::geometry::CartPoint;

use super::operator::{build_hamiltonian, build_integral, commutator, compose, DiffOperator};
use super::probe::TestFunction;

/// Scaled residuals below this are machine noise: fitting an exponent to
/// them would measure rounding, not physics.
pub const RESIDUAL_FLOOR: f64 = 1e-10;

/// The three commuting pairs every catalog system must satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OperatorPair {
    HX1,
    HX2,
    X1X2,
}

impl OperatorPair {
    pub const ALL: [OperatorPair; 3] = [OperatorPair::HX1, OperatorPair::HX2, OperatorPair::X1X2];

    pub fn label(&self) -> &'static str {
        match self {
            OperatorPair::HX1 => "[H,X1]",
            OperatorPair::HX2 => "[H,X2]",
            OperatorPair::X1X2 => "[X1,X2]",
        }
    }
}

/// The two operators of a pair, built at the given ħ.
pub fn operator_pair(
    system: &CatalogSystem,
    pair: OperatorPair,
    hbar: f64,
) -> (DiffOperator, DiffOperator) {
    match pair {
        OperatorPair::HX1 => (
            build_hamiltonian(system, hbar),
            build_integral(system, IntegralKind::X1, hbar),
        ),
        OperatorPair::HX2 => (
            build_hamiltonian(system, hbar),
            build_integral(system, IntegralKind::X2, hbar),
        ),
        OperatorPair::X1X2 => (
            build_integral(system, IntegralKind::X1, hbar),
            build_integral(system, IntegralKind::X2, hbar),
        ),
    }
}

/// Residual battery for one pair: raw residuals per (point, probe) plus the
/// global normalization.
#[derive(Clone, Debug)]
pub struct CommutatorReport {
    pub pair: &'static str,
    pub hbar: f64,
    /// |([a,b]ψ)(x)|, points outermost, probes innermost.
    pub residuals: Vec<f64>,
    /// max over the battery of max(|(a∘b)ψ|, |(b∘a)ψ|).
    pub scale: f64,
    pub max_relative: f64,
    pub mean_relative: f64,
}

/// Evaluate [a, b]ψ over a probe battery. Coefficient tables are assembled
/// once per point and reused across probes.
pub fn commutator_residual(
    system: &CatalogSystem,
    pair: OperatorPair,
    hbar: f64,
    probes: &[TestFunction],
    points: &[CartPoint],
) -> Result<CommutatorReport> {
    if probes.is_empty() || points.is_empty() {
        return Err(Error::InvalidParams(
            "commutator battery needs at least one probe and one point".into(),
        ));
    }
    let (a, b) = operator_pair(system, pair, hbar);
    let ab = compose(&a, &b)?;
    let ba = compose(&b, &a)?;
    let mut residuals = Vec::with_capacity(probes.len() * points.len());
    let mut scale: f64 = 0.0;
    for at in points {
        let tab = ab.coeffs(at)?;
        let tba = ba.coeffs(at)?;
        let tcom = tab.sub(&tba);
        for probe in probes {
            let pj = probe.jet(at);
            scale = scale.max(tab.apply(&pj).norm()).max(tba.apply(&pj).norm());
            residuals.push(tcom.apply(&pj).norm());
        }
    }
    if !(scale > 0.0) {
        return Err(Error::DegenerateFit {
            detail: "every operator application vanished on the probe battery".into(),
        });
    }
    let max_relative = residuals.iter().fold(0.0f64, |m, r| m.max(*r)) / scale;
    let mean_relative =
        residuals.iter().sum::<f64>() / (residuals.len() as f64 * scale);
    Ok(CommutatorReport {
        pair: pair.label(),
        hbar,
        residuals,
        scale,
        max_relative,
        mean_relative,
    })
}

/// Log-log least-squares slope of residual(ħ) samples. Rejects batteries
/// with fewer than two samples, non-positive entries, or no spread in ħ.
pub fn scaling_exponent(samples: &[(f64, f64)]) -> Result<f64> {
    if samples.len() < 2 {
        return Err(Error::InvalidParams(
            "scaling fit needs at least two samples".into(),
        ));
    }
    if samples.iter().any(|&(h, r)| !(h > 0.0) || !(r > 0.0)) {
        return Err(Error::DegenerateFit {
            detail: "non-positive sample in scaling fit".into(),
        });
    }
    let logs: Vec<(f64, f64)> = samples.iter().map(|&(h, r)| (h.ln(), r.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|(x, _)| x).sum::<f64>() / n;
    let my = logs.iter().map(|(_, y)| y).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
    if sxx < 1e-12 {
        return Err(Error::DegenerateFit {
            detail: "ħ samples have no spread".into(),
        });
    }
    let sxy: f64 = logs.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}

/// Fit the power of ħ in the zeroth-order coefficient of [a, b] over a point
/// battery, after dividing out the single power of ħ that any commutator of
/// self-adjoint operators carries. A clean system (residuals at machine
/// noise) reports [`Error::DegenerateFit`] rather than a meaningless slope.
///
/// Requires at least four distinct ħ values spanning a factor of eight
/// (three octaves), so the slope is conditioned well enough to certify an
/// integer exponent.
pub fn hbar_scaling_fit(
    system: &CatalogSystem,
    pair: OperatorPair,
    hbar_values: &[f64],
    points: &[CartPoint],
) -> Result<f64> {
    let mut sorted: Vec<f64> = hbar_values.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    sorted.dedup();
    if sorted.len() < 4 || points.is_empty() {
        return Err(Error::InvalidParams(
            "scaling fit needs ≥ 4 distinct ħ values and ≥ 1 point".into(),
        ));
    }
    if !(sorted[0] > 0.0) || sorted[sorted.len() - 1] / sorted[0] < 8.0 {
        return Err(Error::InvalidParams(
            "ħ values must be positive and span at least a factor of eight".into(),
        ));
    }
    let mut samples = Vec::with_capacity(sorted.len());
    let mut peak: f64 = 0.0;
    for &h in &sorted {
        let (a, b) = operator_pair(system, pair, h);
        let com = commutator(&a, &b)?;
        let mut worst: f64 = 0.0;
        for at in points {
            worst = worst.max(com.coeffs(at)?.value([0, 0, 0]).norm());
        }
        let scaled = worst / h;
        peak = peak.max(scaled);
        samples.push((h, scaled));
    }
    if peak < RESIDUAL_FLOOR {
        return Err(Error::DegenerateFit {
            detail: format!(
                "peak scaled residual {peak:.3e} is below {RESIDUAL_FLOOR:.0e}; \
                 the commutator vanishes to machine precision"
            ),
        });
    }
    scaling_exponent(&samples)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::catalog::{PlanarCore, SystemIIParams, SystemIParams, W3};
    use crate::geometry::cyl_to_cart;
    use crate::jet::degree;
    use crate::quantum::operator::{momentum_operator, scalar_operator};
    use crate::sampling::{self, SampleBox};
    use crate::jet::{CJet3, Jet3};
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn catalog_defaults() -> [CatalogSystem; 3] {
        [
            CatalogSystem::system_i(SystemIParams::default(), 1.0).unwrap(),
            CatalogSystem::system_ii(SystemIIParams::default(), 1.0).unwrap(),
            CatalogSystem::system_iii(
                PlanarCore::II(SystemIIParams {
                    tau0: 0.0,
                    tau1: 0.0,
                    ..SystemIIParams::default()
                }),
                W3::Harmonic { omega: 1.0 },
                1.0,
            )
            .unwrap(),
        ]
    }

    fn battery(
        n_probes: usize,
        n_points: usize,
        seed: u64,
    ) -> (Vec<TestFunction>, Vec<CartPoint>) {
        let bx = SampleBox::default();
        let mut rng = sampling::rng(seed);
        let probes = (0..n_probes)
            .map(|_| TestFunction::random(&mut rng, &bx))
            .collect();
        let points = sampling::cyl_points(n_points, seed.wrapping_add(1), &bx)
            .iter()
            .map(cyl_to_cart)
            .collect();
        (probes, points)
    }

    #[test]
    fn free_family_commutators_vanish() {
        let free = CatalogSystem::system_i(
            SystemIParams {
                rho1: 0.0,
                rho2: 0.0,
                psi1: 0.0,
                psi2: 0.0,
                w0: 0.0,
            },
            1.0,
        )
        .unwrap();
        let (probes, points) = battery(5, 20, 3);
        for pair in OperatorPair::ALL {
            let report = commutator_residual(&free, pair, 0.7, &probes, &points).unwrap();
            assert!(
                report.max_relative < 1e-10,
                "{}: {}",
                report.pair,
                report.max_relative
            );
        }
    }

    #[test]
    fn catalog_pairs_commute_with_correction_on() {
        let (probes, points) = battery(20, 100, 11);
        for sys in catalog_defaults() {
            for hbar in [0.5, 1.0] {
                for pair in OperatorPair::ALL {
                    let report =
                        commutator_residual(&sys, pair, hbar, &probes, &points).unwrap();
                    assert!(
                        report.max_relative < 1e-8,
                        "{} {} ħ={}: max {:.3e} mean {:.3e}",
                        sys.name(),
                        report.pair,
                        hbar,
                        report.max_relative,
                        report.mean_relative
                    );
                    assert!(report.mean_relative <= report.max_relative);
                    assert_eq!(report.residuals.len(), probes.len() * points.len());
                }
            }
        }
    }

    #[test]
    fn stripping_the_correction_breaks_commutation() {
        let sys = CatalogSystem::system_ii(SystemIIParams::default(), 1.0).unwrap();
        let (probes, points) = battery(10, 40, 17);
        let on = commutator_residual(&sys, OperatorPair::HX1, 1.0, &probes, &points).unwrap();
        let off = commutator_residual(
            &sys.with_quantum_correction(false),
            OperatorPair::HX1,
            1.0,
            &probes,
            &points,
        )
        .unwrap();
        assert!(on.max_relative < 1e-8, "corrected: {}", on.max_relative);
        assert!(off.max_relative > 1e-3, "stripped: {}", off.max_relative);
    }

    #[test]
    fn stripped_anomaly_scales_as_hbar_squared() {
        let sys = CatalogSystem::system_ii(SystemIIParams::default(), 1.0)
            .unwrap()
            .with_quantum_correction(false);
        let points: Vec<CartPoint> =
            sampling::cyl_points(30, 23, &SampleBox::default())
                .iter()
                .map(cyl_to_cart)
                .collect();
        let slope =
            hbar_scaling_fit(&sys, OperatorPair::HX1, &[0.25, 0.5, 1.0, 2.0], &points).unwrap();
        assert!(
            (slope - 2.0).abs() < 0.05,
            "anomaly exponent {slope} should be 2"
        );
    }

    #[test]
    fn polynomial_family_has_no_anomaly_to_fit() {
        // The unit-frequency trigonometric profile annihilates the quantum
        // source term, so even the stripped system commutes and the fit
        // refuses to report an exponent.
        let sys = CatalogSystem::system_i(SystemIParams::default(), 1.0)
            .unwrap()
            .with_quantum_correction(false);
        let points: Vec<CartPoint> =
            sampling::cyl_points(10, 29, &SampleBox::default())
                .iter()
                .map(cyl_to_cart)
                .collect();
        let got = hbar_scaling_fit(&sys, OperatorPair::HX1, &[0.25, 0.5, 1.0, 2.0], &points);
        assert!(matches!(got, Err(Error::DegenerateFit { .. })), "{got:?}");
    }

    #[test]
    fn planted_cubic_defect_is_recovered_by_the_fit() {
        // [−iħ∂_z, ħ³z·id] = −iħ⁴·id, so the per-ħ scaled residual is ħ³.
        let mut samples = Vec::new();
        for h in [0.2, 0.5, 1.0, 2.0] {
            let defect = scalar_operator("defect", move |at: &CartPoint| {
                Ok(CJet3::from_real(Jet3::var(2, at.z).scale(h * h * h)))
            });
            let com = commutator(&momentum_operator(2, h), &defect).unwrap();
            let c0 = com
                .coeffs(&CartPoint { x: 0.3, y: -1.0, z: 0.8 })
                .unwrap()
                .value([0, 0, 0]);
            assert_relative_eq!(c0.im, -h * h * h * h, epsilon = 1e-14);
            samples.push((h, c0.norm() / h));
        }
        let slope = scaling_exponent(&samples).unwrap();
        assert!((slope - 3.0).abs() < 0.05, "planted exponent {slope}");
    }

    #[test]
    fn correction_difference_enters_only_through_lower_orders() {
        // With ΔW and Δm the ħ²-correction jets, the zeroth commutator
        // coefficient shifts by Σ_{|α|≥1} H_α ∂^α Δm − Σ_{|α|≥1} X_α ∂^α ΔW
        // when the correction toggles — multiplication operators commute, so
        // only derivative coefficients see the difference.
        let on = CatalogSystem::system_ii(SystemIIParams::default(), 1.0).unwrap();
        let off = on.with_quantum_correction(false);
        let (a_on, b_on) = operator_pair(&on, OperatorPair::HX1, 1.0);
        let (a_off, b_off) = operator_pair(&off, OperatorPair::HX1, 1.0);
        let com_on = commutator(&a_on, &b_on).unwrap();
        let com_off = commutator(&a_off, &b_off).unwrap();
        for pt in sampling::cyl_points(10, 31, &SampleBox::default()) {
            let at = cyl_to_cart(&pt);
            let jets_on = on.cart_jets(&at).unwrap();
            let jets_off = off.cart_jets(&at).unwrap();
            let dm = jets_on.m1.sub(&jets_off.m1);
            let dw = jets_on.w.sub(&jets_off.w);
            let mut hand = Complex64::ZERO;
            for (idx, jet) in a_on.coeffs(&at).unwrap().terms() {
                if degree(*idx) >= 1 {
                    hand += jet.value() * dm.partial(*idx);
                }
            }
            for (idx, jet) in b_on.coeffs(&at).unwrap().terms() {
                if degree(*idx) >= 1 {
                    hand -= jet.value() * dw.partial(*idx);
                }
            }
            let delta = com_on.coeffs(&at).unwrap().value([0, 0, 0])
                - com_off.coeffs(&at).unwrap().value([0, 0, 0]);
            assert!(
                (delta - hand).norm() < 1e-9 * (1.0 + hand.norm()),
                "{delta} vs {hand}"
            );
        }
    }

    #[test]
    fn fit_preconditions_are_enforced() {
        let sys = CatalogSystem::system_ii(SystemIIParams::default(), 1.0).unwrap();
        let points: Vec<CartPoint> = sampling::cyl_points(3, 37, &SampleBox::default())
            .iter()
            .map(cyl_to_cart)
            .collect();
        // Too few distinct values.
        assert!(matches!(
            hbar_scaling_fit(&sys, OperatorPair::HX1, &[0.5, 0.5, 1.0, 5.0], &points),
            Err(Error::InvalidParams(_))
        ));
        // Not enough span.
        assert!(matches!(
            hbar_scaling_fit(&sys, OperatorPair::HX1, &[0.5, 1.0, 2.0, 3.0], &points),
            Err(Error::InvalidParams(_))
        ));
        // Empty probe battery.
        assert!(matches!(
            commutator_residual(&sys, OperatorPair::HX1, 1.0, &[], &points),
            Err(Error::InvalidParams(_))
        ));
        // Degenerate scaling input.
        assert!(matches!(
            scaling_exponent(&[(1.0, 0.0), (2.0, 1.0)]),
            Err(Error::DegenerateFit { .. })
        ));
        assert!(matches!(
            scaling_exponent(&[(1.0, 1.0)]),
            Err(Error::InvalidParams(_))
        ));
    }
}

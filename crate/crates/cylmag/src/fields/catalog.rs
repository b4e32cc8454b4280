//! The closed-form catalog of quadratically integrable cylindrical-type
//! magnetic systems.
//!
//! Three families are encoded, all admitting the commuting pair of integrals
//! built on (p_φ, p_Z):
//!
//! * `SYSTEM_I` — axially symmetric polynomial field B^z = ρ₁ − 6ρ₂r², with a
//!   linear-in-(x, y) potential term. Classical and quantum coefficients
//!   coincide (no ħ² correction).
//! * `SYSTEM_II` — twisted field built on an angular profile β(φ) (the β₂ = 0
//!   closed-form branch). The scalar potential W and the integral scalar m₁
//!   carry genuine ħ²-proportional corrections.
//! * `SYSTEM_III` — a planar core (either of the two families above with its
//!   axial twist parameters zeroed) plus a free axial potential W₃(z). The
//!   axial integral stays second order: X₂ = (p_z^A)² + 2W₃(z).
//!
//! Everything is exposed as exact cylindrical Taylor jets plus Cartesian
//! adapters, so downstream modules never take a finite difference.

use crate::beta::{ClosedFormBeta, VANISHING_THRESHOLD};
use crate::error::{Error, Result};
use crate::fields::aux::AuxFunctions;
use crate::fields::scalar1d::{Const1, FnJet1, Poly1, PowSum1, Scalar1D, Trig1};
use crate::geometry::{
    cart_to_cyl, covector_jets_cyl_to_cart, scalar_cyl_jet_to_cart, two_form_cyl_to_cart,
    vector_jets_cyl_to_cart, CartPoint, CartTwoForm, CylPoint, CylTwoForm,
};
use crate::jet::{Jet1, Jet3};

/// Catalog family identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemKind {
    I,
    II,
    III,
}

impl SystemKind {
    pub fn name(&self) -> &'static str {
        match self {
            SystemKind::I => "SYSTEM_I",
            SystemKind::II => "SYSTEM_II",
            SystemKind::III => "SYSTEM_III",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "SYSTEM_I" | "I" | "1" => Ok(SystemKind::I),
            "SYSTEM_II" | "II" | "2" => Ok(SystemKind::II),
            "SYSTEM_III" | "III" | "3" => Ok(SystemKind::III),
            _ => Err(Error::InvalidParams(format!(
                "unknown system '{s}' (expected SYSTEM_I, SYSTEM_II or SYSTEM_III)"
            ))),
        }
    }
}

/// Axial potential library for the third family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum W3 {
    Zero,
    /// ½ ω² z².
    Harmonic { omega: f64 },
    /// g·z.
    Linear { slope: f64 },
}

impl W3 {
    pub fn jet1(&self, z: f64) -> Jet1 {
        match self {
            W3::Zero => Jet1::constant(0.0),
            W3::Harmonic { omega } => Jet1::var(z).powi(2).scale(0.5 * omega * omega),
            W3::Linear { slope } => Jet1::var(z).scale(*slope),
        }
    }

    pub fn value(&self, z: f64) -> f64 {
        self.jet1(z).value()
    }

    pub fn label(&self) -> String {
        match self {
            W3::Zero => "ZERO".to_string(),
            W3::Harmonic { omega } => format!("HARMONIC({omega})"),
            W3::Linear { slope } => format!("LINEAR({slope})"),
        }
    }
}

/// The axial integral in the form it actually takes for a given system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum X2Form {
    /// p_z — the gauge-reduced first-order axial integral.
    ReducedPz,
    /// (p_z^A)² + 2W₃(z) with vanishing axial gauge component.
    AxialQuadratic(W3),
}

/// Parameters of the polynomial family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemIParams {
    pub rho1: f64,
    pub rho2: f64,
    pub psi1: f64,
    pub psi2: f64,
    pub w0: f64,
}

impl Default for SystemIParams {
    fn default() -> Self {
        SystemIParams {
            rho1: 1.0,
            rho2: 0.1,
            psi1: 0.5,
            psi2: 0.5,
            w0: 1.0,
        }
    }
}

/// Parameters of the twisted family (closed-form profile branch, β₂ = 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemIIParams {
    pub f1: f64,
    pub beta1: f64,
    pub tau0: f64,
    pub tau1: f64,
    pub w0: f64,
    pub rho0: f64,
    pub phi0: f64,
}

impl Default for SystemIIParams {
    fn default() -> Self {
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
}

/// Planar core selector for the third family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlanarCore {
    I(SystemIParams),
    /// Twist parameters τ₀, τ₁ must vanish.
    II(SystemIIParams),
}

#[derive(Debug, Clone, Copy)]
enum Params {
    I {
        p: SystemIParams,
        /// Constant s₂^Z; any nonzero value works for the rank-2 family and
        /// it must vanish in the rank-1 family. Pure bookkeeping: it affects
        /// neither the field nor the potential.
        sigma0: f64,
    },
    II {
        p: SystemIIParams,
        beta: ClosedFormBeta,
    },
}

/// All per-point data of a catalog system, as cylindrical jets at one point:
/// field components, gauge covector, scalar potential and the coefficients
/// of the angular integral.
pub struct SystemJets {
    /// (B^r, B^φ, B^Z) coordinate components.
    pub b: [Jet3; 3],
    /// Gauge covector (A_r, A_φ, A_Z); always A_r = 0, dA = B.
    pub a: [Jet3; 3],
    /// Scalar potential, including the ħ² part when the correction is active.
    pub w: Jet3,
    /// Vector coefficient (s₁^r, s₁^φ, s₁^Z) of the angular integral.
    pub s1: [Jet3; 3],
    /// Scalar coefficient m₁, including the ħ² part when active.
    pub m1: Jet3,
}

/// Cartesian counterpart of [`SystemJets`] (gauge as (A_x, A_y, A_z), s₁ as
/// a Cartesian vector).
pub struct CartSystemJets {
    pub a: [Jet3; 3],
    pub w: Jet3,
    pub s1: [Jet3; 3],
    pub m1: Jet3,
}

/// One configured catalog system: family, parameters, ħ, and whether the
/// ħ²-proportional corrections to (W, m₁) are included.
#[derive(Debug, Clone, Copy)]
pub struct CatalogSystem {
    kind: SystemKind,
    params: Params,
    w3: W3,
    pub hbar: f64,
    /// Include the ħ² corrections. Turning this off on the twisted families
    /// deliberately produces a system that fails the quantum commutation
    /// checks (while leaving all classical ones intact).
    pub quantum_correction: bool,
}

impl CatalogSystem {
    pub fn system_i(p: SystemIParams, hbar: f64) -> Result<Self> {
        check_finite(&[p.rho1, p.rho2, p.psi1, p.psi2, p.w0, hbar])?;
        Ok(CatalogSystem {
            kind: SystemKind::I,
            params: Params::I { p, sigma0: 1.0 },
            w3: W3::Zero,
            hbar,
            quantum_correction: true,
        })
    }

    pub fn system_ii(p: SystemIIParams, hbar: f64) -> Result<Self> {
        check_finite(&[p.f1, p.beta1, p.tau0, p.tau1, p.w0, p.rho0, p.phi0, hbar])?;
        let beta = ClosedFormBeta::new(p.f1, p.beta1, p.phi0)?;
        Ok(CatalogSystem {
            kind: SystemKind::II,
            params: Params::II { p, beta },
            w3: W3::Zero,
            hbar,
            quantum_correction: true,
        })
    }

    pub fn system_iii(core: PlanarCore, w3: W3, hbar: f64) -> Result<Self> {
        let params = match core {
            PlanarCore::I(p) => {
                check_finite(&[p.rho1, p.rho2, p.psi1, p.psi2, p.w0, hbar])?;
                Params::I { p, sigma0: 0.0 }
            }
            PlanarCore::II(p) => {
                if p.tau0 != 0.0 || p.tau1 != 0.0 {
                    return Err(Error::InvalidParams(format!(
                        "the rank-1 family requires tau0 = tau1 = 0, got ({}, {})",
                        p.tau0, p.tau1
                    )));
                }
                check_finite(&[p.f1, p.beta1, p.w0, p.rho0, p.phi0, hbar])?;
                let beta = ClosedFormBeta::new(p.f1, p.beta1, p.phi0)?;
                Params::II { p, beta }
            }
        };
        Ok(CatalogSystem {
            kind: SystemKind::III,
            params,
            w3,
            hbar,
            quantum_correction: true,
        })
    }

    pub fn with_quantum_correction(mut self, on: bool) -> Self {
        self.quantum_correction = on;
        self
    }

    pub fn with_hbar(mut self, hbar: f64) -> Self {
        self.hbar = hbar;
        self
    }

    /// Copy with ħ = 0: the classical system (corrections drop out).
    pub fn classical_limit(&self) -> Self {
        self.with_hbar(0.0)
    }

    pub fn kind(&self) -> SystemKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        self.kind.name()
    }

    /// Rank of the coefficient matrix of the gradient system for W.
    pub fn expected_rank(&self) -> usize {
        match self.kind {
            SystemKind::I | SystemKind::II => 2,
            SystemKind::III => 1,
        }
    }

    pub fn x2_form(&self) -> X2Form {
        match self.kind {
            SystemKind::I | SystemKind::II => X2Form::ReducedPz,
            SystemKind::III => X2Form::AxialQuadratic(self.w3),
        }
    }

    /// Whether the family carries a nonvanishing ħ² correction at all.
    pub fn has_quantum_correction(&self) -> bool {
        matches!(self.params, Params::II { .. })
    }

    /// The polynomial-family parameters when this system is built on them
    /// (directly or as a separable planar core).
    pub fn polynomial_params(&self) -> Option<SystemIParams> {
        match &self.params {
            Params::I { p, .. } => Some(*p),
            Params::II { .. } => None,
        }
    }

    /// Parameter list for reports, in a fixed order.
    pub fn params_list(&self) -> Vec<(&'static str, f64)> {
        let mut out = match &self.params {
            Params::I { p, .. } => vec![
                ("rho1", p.rho1),
                ("rho2", p.rho2),
                ("psi1", p.psi1),
                ("psi2", p.psi2),
                ("w0", p.w0),
            ],
            Params::II { p, .. } => vec![
                ("f1", p.f1),
                ("beta1", p.beta1),
                ("tau0", p.tau0),
                ("tau1", p.tau1),
                ("w0", p.w0),
                ("rho0", p.rho0),
                ("phi0", p.phi0),
            ],
        };
        if let W3::Harmonic { omega } = self.w3 {
            out.push(("omega", omega));
        }
        if let W3::Linear { slope } = self.w3 {
            out.push(("slope", slope));
        }
        out
    }

    /// Auxiliary profiles generating this system, for the
    /// determining-equation checks.
    pub fn aux(&self) -> AuxFunctions {
        match self.params {
            Params::I { p, sigma0 } => AuxFunctions {
                psi: Box::new(Trig1 {
                    cos_amp: -p.psi1,
                    sin_amp: -p.psi2,
                    freq: 1.0,
                }),
                tau: Box::new(Const1(0.0)),
                rho: Box::new(Poly1::new([p.w0, 0.0, -p.rho1, 0.0, 3.0 * p.rho2])),
                sigma: Box::new(Const1(sigma0)),
                mu: Box::new(Const1(0.0)),
            },
            Params::II { p, beta } => AuxFunctions {
                psi: Box::new(FnJet1(move |phi: f64| beta.jet(phi).add_scalar(p.rho0))),
                tau: Box::new(FnJet1(move |phi: f64| {
                    beta.sq_jet(phi).recip().scale(p.tau1).add_scalar(p.tau0)
                })),
                rho: Box::new(PowSum1::new([(p.rho0, -1)])),
                sigma: Box::new(PowSum1::new([(p.tau0, -2)])),
                mu: Box::new(Const1(0.0)),
            },
        }
    }

    /// All cylindrical jets of the system at one point.
    pub fn jets(&self, at: &CylPoint) -> Result<SystemJets> {
        let mut jets = match &self.params {
            Params::I { p, .. } => jets_i(p, at),
            Params::II { p, beta } => jets_ii(p, beta, at, self.hbar, self.quantum_correction)?,
        };
        if !matches!(self.w3, W3::Zero) {
            jets.w = jets.w.add(&Jet3::from_jet1(&self.w3.jet1(at.z), 2));
        }
        Ok(jets)
    }

    /// Cartesian jets (gauge, potential, integral coefficients) at `at`.
    pub fn cart_jets(&self, at: &CartPoint) -> Result<CartSystemJets> {
        let cyl = cart_to_cyl(at)?;
        let jets = self.jets(&cyl)?;
        Ok(CartSystemJets {
            a: covector_jets_cyl_to_cart(&jets.a, at),
            w: scalar_cyl_jet_to_cart(&jets.w, at),
            s1: vector_jets_cyl_to_cart(&jets.s1, at),
            m1: scalar_cyl_jet_to_cart(&jets.m1, at),
        })
    }

    /// Field point values in cylindrical components.
    pub fn field_cyl(&self, at: &CylPoint) -> Result<CylTwoForm> {
        let jets = self.jets(at)?;
        Ok(CylTwoForm {
            r: jets.b[0].value(),
            phi: jets.b[1].value(),
            z: jets.b[2].value(),
        })
    }

    /// Field point values in Cartesian components.
    pub fn field_cart(&self, at: &CartPoint) -> Result<CartTwoForm> {
        let cyl = cart_to_cyl(at)?;
        Ok(two_form_cyl_to_cart(&self.field_cyl(&cyl)?, &cyl))
    }
}

fn check_finite(vals: &[f64]) -> Result<()> {
    for v in vals {
        if !v.is_finite() {
            return Err(Error::InvalidParams(format!(
                "non-finite parameter value {v}"
            )));
        }
    }
    Ok(())
}

/// Construct a catalog system from its name and numeric parameter overrides
/// (the CLI entry point). For the rank-1 family the override `core` (1 or 2)
/// selects the planar core, `omega` selects a harmonic axial potential and
/// `slope` a linear one (harmonic with ω = 1 by default).
pub fn catalog_system(
    kind: SystemKind,
    overrides: &[(String, f64)],
    hbar: f64,
) -> Result<CatalogSystem> {
    let mut remaining: Vec<&(String, f64)> = overrides.iter().collect();
    let mut take = |key: &str| -> Option<f64> {
        let idx = remaining.iter().position(|(k, _)| k == key)?;
        Some(remaining.remove(idx).1)
    };

    let apply_i = |take: &mut dyn FnMut(&str) -> Option<f64>| {
        let mut p = SystemIParams::default();
        if let Some(v) = take("rho1") {
            p.rho1 = v;
        }
        if let Some(v) = take("rho2") {
            p.rho2 = v;
        }
        if let Some(v) = take("psi1") {
            p.psi1 = v;
        }
        if let Some(v) = take("psi2") {
            p.psi2 = v;
        }
        if let Some(v) = take("w0") {
            p.w0 = v;
        }
        p
    };
    let apply_ii = |take: &mut dyn FnMut(&str) -> Option<f64>, zero_twist: bool| {
        let mut p = SystemIIParams::default();
        if zero_twist {
            p.tau0 = 0.0;
            p.tau1 = 0.0;
        }
        if let Some(v) = take("f1") {
            p.f1 = v;
        }
        if let Some(v) = take("beta1") {
            p.beta1 = v;
        }
        if let Some(v) = take("tau0") {
            p.tau0 = v;
        }
        if let Some(v) = take("tau1") {
            p.tau1 = v;
        }
        if let Some(v) = take("w0") {
            p.w0 = v;
        }
        if let Some(v) = take("rho0") {
            p.rho0 = v;
        }
        if let Some(v) = take("phi0") {
            p.phi0 = v;
        }
        p
    };

    let sys = match kind {
        SystemKind::I => CatalogSystem::system_i(apply_i(&mut take), hbar)?,
        SystemKind::II => CatalogSystem::system_ii(apply_ii(&mut take, false), hbar)?,
        SystemKind::III => {
            let core_sel = take("core").unwrap_or(2.0);
            let w3 = if let Some(slope) = take("slope") {
                W3::Linear { slope }
            } else {
                W3::Harmonic {
                    omega: take("omega").unwrap_or(1.0),
                }
            };
            let core = match core_sel as i64 {
                1 => PlanarCore::I(apply_i(&mut take)),
                2 => PlanarCore::II(apply_ii(&mut take, true)),
                other => {
                    return Err(Error::InvalidParams(format!(
                        "core must be 1 or 2, got {other}"
                    )))
                }
            };
            CatalogSystem::system_iii(core, w3, hbar)?
        }
    };

    if let Some((key, _)) = remaining.first() {
        return Err(Error::InvalidParams(format!(
            "unknown parameter '{key}' for {}",
            kind.name()
        )));
    }
    Ok(sys)
}

/// One-line descriptions of the available axial potentials.
pub fn w3_library() -> Vec<(&'static str, &'static str)> {
    vec![
        ("ZERO", "no axial potential (free axial motion)"),
        ("HARMONIC(omega)", "W3(z) = omega^2 z^2 / 2"),
        ("LINEAR(slope)", "W3(z) = slope * z"),
    ]
}

// ---------------------------------------------------------------------------
// Closed-form jets per family
// ---------------------------------------------------------------------------

fn jets_i(p: &SystemIParams, at: &CylPoint) -> SystemJets {
    let one = Jet1::constant(1.0);
    let r = Jet1::var(at.r);
    let psi = Trig1 {
        cos_amp: -p.psi1,
        sin_amp: -p.psi2,
        freq: 1.0,
    }
    .jet(at.phi);
    let dpsi = Trig1 {
        cos_amp: -p.psi2,
        sin_amp: p.psi1,
        freq: 1.0,
    }
    .jet(at.phi);

    // B = (0, 0, ρ₁r − 6ρ₂r³) in coordinate components (B^z = ρ₁ − 6ρ₂r²).
    let b = [
        Jet3::zero(),
        Jet3::zero(),
        Jet3::from_jet1(&Poly1::new([0.0, p.rho1, 0.0, -6.0 * p.rho2]).jet(at.r), 0),
    ];

    // A = (0, ρ₁r²/2 − 3ρ₂r⁴/2, 0).
    let a = [
        Jet3::zero(),
        Jet3::from_jet1(
            &Poly1::new([0.0, 0.0, 0.5 * p.rho1, 0.0, -1.5 * p.rho2]).jet(at.r),
            0,
        ),
        Jet3::zero(),
    ];

    // W = 2ρ₂ r ψ(φ) − ρ₂²r⁶ + ρ₂ρ₁r⁴/2 − ρ₂W₀r².
    let w = Jet3::separable(&r.scale(2.0 * p.rho2), &psi, &one).add(&Jet3::from_jet1(
        &Poly1::new([
            0.0,
            0.0,
            -p.rho2 * p.w0,
            0.0,
            0.5 * p.rho2 * p.rho1,
            0.0,
            -p.rho2 * p.rho2,
        ])
        .jet(at.r),
        0,
    ));

    // s₁ = (ψ′, −ψ/r + ρ(r), 0) with ρ(r) = 3ρ₂r⁴ − ρ₁r² + W₀.
    let s1 = [
        Jet3::from_jet1(&dpsi, 1),
        Jet3::separable(&r.recip().neg(), &psi, &one).add(&Jet3::from_jet1(
            &Poly1::new([p.w0, 0.0, -p.rho1, 0.0, 3.0 * p.rho2]).jet(at.r),
            0,
        )),
        Jet3::zero(),
    ];

    // m₁ = (ρ₁r − 2ρ₂r³)ψ(φ) + ¼(3ρ₂r⁴ − ρ₁r² + 2W₀)(3ρ₂r² − ρ₁)r².
    let m_rad = Poly1::new([2.0 * p.w0, 0.0, -p.rho1, 0.0, 3.0 * p.rho2])
        .jet(at.r)
        .mul(&Poly1::new([-p.rho1, 0.0, 3.0 * p.rho2]).jet(at.r))
        .mul(&r.powi(2))
        .scale(0.25);
    let m1 = Jet3::separable(
        &Poly1::new([0.0, p.rho1, 0.0, -2.0 * p.rho2]).jet(at.r),
        &psi,
        &one,
    )
    .add(&Jet3::from_jet1(&m_rad, 0));

    SystemJets { b, a, w, s1, m1 }
}

fn jets_ii(
    p: &SystemIIParams,
    beta: &ClosedFormBeta,
    at: &CylPoint,
    hbar: f64,
    correction: bool,
) -> Result<SystemJets> {
    let one = Jet1::constant(1.0);
    let r = Jet1::var(at.r);
    let b = beta.jet(at.phi);
    if b.value().abs() < VANISHING_THRESHOLD {
        return Err(Error::BetaVanishing {
            phi: at.phi,
            threshold: VANISHING_THRESHOLD,
        });
    }
    let bsq = beta.sq_jet(at.phi);
    let db = beta.djet(at.phi);
    // The closed-form branch has β₂ = 0; kept symbolic below for clarity.
    let beta2 = 0.0;
    let beta1 = p.beta1;

    let b3 = bsq.mul(&b);
    let b5 = bsq.mul(&b3);
    // 2β₁β² + β₂ — the numerator shared by B^Z and A_φ.
    let axial_num = bsq.scale(2.0 * beta1).add_scalar(beta2);
    // f₁β⁴ − 12β₁β² − 5β₂ — the numerator shared by both ħ² corrections.
    let qnum = bsq
        .powi(2)
        .scale(p.f1)
        .sub(&bsq.scale(12.0 * beta1))
        .add_scalar(-5.0 * beta2);

    let field = [
        Jet3::separable(&r.powi(-2), &db.div(&b3).scale(-p.tau1), &one),
        Jet3::separable(&r.powi(-3).scale(p.tau1), &bsq.recip(), &one),
        Jet3::separable(&r.powi(-2).scale(0.25), &axial_num.div(&b5), &one),
    ];

    let a = [
        Jet3::zero(),
        Jet3::separable(&r.recip().scale(-0.25), &axial_num.div(&b5), &one),
        Jet3::separable(&r.powi(-2).scale(0.5 * p.tau1), &bsq.recip(), &one),
    ];

    let mut w = Jet3::separable(&r.powi(-2).scale(p.w0), &bsq.recip(), &one).sub(
        &Jet3::separable(
            &r.powi(-4)
                .scale((4.0 * p.tau1 * p.tau1 + beta2) / 32.0),
            &bsq.powi(2).recip(),
            &one,
        ),
    );
    if correction && hbar != 0.0 {
        w = w.add(&Jet3::separable(
            &r.powi(-2).scale(hbar * hbar / 32.0),
            &qnum.div(&bsq.powi(3)),
            &one,
        ));
    }

    let s1 = [
        Jet3::from_jet1(&db, 1),
        Jet3::separable(&r.recip().neg(), &b, &one),
        Jet3::from_jet1(&bsq.recip().scale(p.tau1).add_scalar(p.tau0), 1),
    ];

    // m₁ = 2W₀/β² − [β²(4τ₀τ₁ + 2β₁) + 4τ₁² + β₂] / (8β⁴r²) + ħ²·qnum/(16β⁶).
    // The ħ² term is r-independent: that is exactly what makes the quantum
    // commutator close (cf. the commutator verification tests).
    let mnum = bsq
        .scale(4.0 * p.tau0 * p.tau1 + 2.0 * beta1)
        .add_scalar(4.0 * p.tau1 * p.tau1 + beta2);
    let mut m1 = Jet3::from_jet1(&bsq.recip().scale(2.0 * p.w0), 1).sub(&Jet3::separable(
        &r.powi(-2).scale(0.125),
        &mnum.div(&bsq.powi(2)),
        &one,
    ));
    if correction && hbar != 0.0 {
        m1 = m1.add(&Jet3::from_jet1(
            &qnum.div(&bsq.powi(3)).scale(hbar * hbar / 16.0),
            1,
        ));
    }

    Ok(SystemJets {
        b: field,
        a,
        w,
        s1,
        m1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::aux;
    use approx::assert_relative_eq;

    fn sample_points() -> Vec<CylPoint> {
        [(0.8, 0.4, -0.7), (1.2, 0.7, 0.3), (2.1, 2.9, 1.1), (2.8, 5.3, -1.6)]
            .iter()
            .map(|&(r, phi, z)| CylPoint::new(r, phi, z).unwrap())
            .collect()
    }

    fn all_systems() -> Vec<CatalogSystem> {
        vec![
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
            CatalogSystem::system_iii(
                PlanarCore::I(SystemIParams::default()),
                W3::Linear { slope: 0.4 },
                1.0,
            )
            .unwrap(),
        ]
    }

    #[test]
    fn closed_forms_match_aux_parametrization() {
        // The catalog B and s₁ must agree with what the auxiliary profiles
        // generate — values and first partials.
        for sys in all_systems() {
            let aux = sys.aux();
            for at in sample_points() {
                let jets = sys.jets(&at).unwrap();
                let b_aux = aux::field_jets(&aux, &at);
                let (s1_aux, _) = aux::s_jets(&aux, &at);
                for i in 0..3 {
                    assert_relative_eq!(
                        jets.b[i].value(),
                        b_aux[i].value(),
                        epsilon = 1e-11,
                        max_relative = 1e-11
                    );
                    assert_relative_eq!(
                        jets.s1[i].value(),
                        s1_aux[i].value(),
                        epsilon = 1e-11,
                        max_relative = 1e-11
                    );
                    for axis in 0..3 {
                        let mut m = [0u8; 3];
                        m[axis] = 1;
                        assert_relative_eq!(
                            jets.b[i].partial(m),
                            b_aux[i].partial(m),
                            epsilon = 1e-10,
                            max_relative = 1e-9
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn gauge_reproduces_field() {
        // B^r = ∂_φ A_Z − ∂_Z A_φ, B^φ = ∂_Z A_r − ∂_r A_Z,
        // B^Z = ∂_r A_φ − ∂_φ A_r, as jets.
        for sys in all_systems() {
            for at in sample_points() {
                let jets = sys.jets(&at).unwrap();
                let from_gauge = [
                    jets.a[2].shift([0, 1, 0]).sub(&jets.a[1].shift([0, 0, 1])),
                    jets.a[0].shift([0, 0, 1]).sub(&jets.a[2].shift([1, 0, 0])),
                    jets.a[1].shift([1, 0, 0]).sub(&jets.a[0].shift([0, 1, 0])),
                ];
                for i in 0..3 {
                    for n in 0..crate::jet::NCOEF {
                        if crate::jet::degree(crate::jet::MIDX[n]) > 3 {
                            continue;
                        }
                        assert_relative_eq!(
                            from_gauge[i].c[n],
                            jets.b[i].c[n],
                            epsilon = 1e-11,
                            max_relative = 1e-9
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn polynomial_family_frozen_values() {
        // Hand-computed reference values at r = 1, φ = 0 for the default
        // parameters (ρ₁ = 1, ρ₂ = 0.1, ψ₁ = ψ₂ = 0.5, W₀ = 1).
        let sys = CatalogSystem::system_i(SystemIParams::default(), 1.0).unwrap();
        let at = CylPoint::new(1.0, 0.0, 0.0).unwrap();
        let jets = sys.jets(&at).unwrap();
        assert_relative_eq!(jets.b[2].value(), 0.4, epsilon = 1e-15);
        assert_relative_eq!(jets.a[1].value(), 0.35, epsilon = 1e-15);
        assert_relative_eq!(jets.w.value(), -0.16, epsilon = 1e-15);
        assert_relative_eq!(jets.m1.value(), -0.6275, epsilon = 1e-15);
        assert_relative_eq!(jets.s1[0].value(), -0.5, epsilon = 1e-15);
        assert_relative_eq!(jets.s1[1].value(), 0.8, epsilon = 1e-15);
        assert_eq!(jets.s1[2].value(), 0.0);
    }

    #[test]
    fn twisted_family_frozen_values() {
        // Reference values at r = 1.2, φ = 0.7, z = 0.3 for the default
        // parameters, frozen from an independent implementation.
        let sys = CatalogSystem::system_ii(SystemIIParams::default(), 1.0).unwrap();
        let at = CylPoint::new(1.2, 0.7, 0.3).unwrap();
        let jets = sys.jets(&at).unwrap();

        assert_relative_eq!(jets.b[0].value(), -0.0086963721840251848, epsilon = 1e-15);
        assert_relative_eq!(jets.b[1].value(), 0.10231568265995, epsilon = 1e-14);
        assert_relative_eq!(jets.b[2].value(), -0.078546086422233707, epsilon = 1e-14);
        assert_relative_eq!(jets.a[1].value(), 0.094255303706680449, epsilon = 1e-14);
        assert_relative_eq!(jets.a[2].value(), 0.061389409595969995, epsilon = 1e-14);
        assert_relative_eq!(jets.w.value(), 0.3502866335010803, epsilon = 1e-14);
        assert_relative_eq!(jets.m1.value(), 1.0545564759739061, epsilon = 1e-13);
        assert_relative_eq!(jets.s1[0].value(), 0.09226400894201163, epsilon = 1e-14);
        assert_relative_eq!(
            jets.s1[1].value(),
            -1.3026197398294301 / 1.2,
            epsilon = 1e-14
        );
        assert_relative_eq!(
            jets.s1[2].value(),
            0.3 / (1.3026197398294301f64 * 1.3026197398294301),
            epsilon = 1e-14
        );

        // Correction off: frozen classical values.
        let sys_off = sys.with_quantum_correction(false);
        let jets_off = sys_off.jets(&at).unwrap();
        assert_relative_eq!(jets_off.w.value(), 0.40737840083452903, epsilon = 1e-14);
        assert_relative_eq!(jets_off.m1.value(), 1.2189807658942384, epsilon = 1e-13);
        // ħ = 0 must agree with correction-off.
        let jets_h0 = sys.classical_limit().jets(&at).unwrap();
        assert_relative_eq!(jets_h0.w.value(), jets_off.w.value(), epsilon = 1e-15);
        assert_relative_eq!(jets_h0.m1.value(), jets_off.m1.value(), epsilon = 1e-15);
    }

    #[test]
    fn cartesian_adapters_frozen_values() {
        // Same reference point, Cartesian image; values frozen from an
        // independent implementation working natively in Cartesian charts.
        let sys = CatalogSystem::system_ii(SystemIIParams::default(), 1.0).unwrap();
        let at = CartPoint::new(0.91781062474138619, 0.7730612246852292, 0.3);
        let jets = sys.cart_jets(&at).unwrap();

        assert_relative_eq!(jets.a[0].value(), -0.050600778136503204, epsilon = 1e-13);
        assert_relative_eq!(jets.a[1].value(), 0.060075360541817696, epsilon = 1e-13);
        assert_relative_eq!(jets.a[2].value(), 0.061389409595969981, epsilon = 1e-13);
        assert_relative_eq!(jets.w.value(), 0.3502866335010803, epsilon = 1e-13);
        assert_relative_eq!(jets.s1[0].value(), 0.90973808254992206, epsilon = 1e-13);
        assert_relative_eq!(jets.s1[1].value(), -0.93686042455519225, epsilon = 1e-13);
        assert_relative_eq!(jets.s1[2].value(), 0.17680149963639358, epsilon = 1e-13);
        assert_relative_eq!(jets.m1.value(), 1.0545564759739061, epsilon = 1e-13);

        // Frozen gradient of W (z-independent for this family).
        assert_relative_eq!(
            jets.w.partial([1, 0, 0]),
            -0.41418624377328828,
            epsilon = 1e-12
        );
        assert_relative_eq!(
            jets.w.partial([0, 1, 0]),
            -0.40961836155177084,
            epsilon = 1e-12
        );
        assert!(jets.w.partial([0, 0, 1]).abs() < 1e-13);
    }

    #[test]
    fn axial_potential_adds_to_core() {
        let core = SystemIIParams {
            tau0: 0.0,
            tau1: 0.0,
            ..SystemIIParams::default()
        };
        let planar = CatalogSystem::system_ii(core, 1.0).unwrap();
        let full = CatalogSystem::system_iii(
            PlanarCore::II(core),
            W3::Harmonic { omega: 2.0 },
            1.0,
        )
        .unwrap();
        let at = CylPoint::new(1.4, 1.1, 0.6).unwrap();
        let wp = planar.jets(&at).unwrap().w;
        let wf = full.jets(&at).unwrap().w;
        assert_relative_eq!(
            wf.value(),
            wp.value() + 0.5 * 4.0 * 0.36,
            epsilon = 1e-13
        );
        assert_relative_eq!(wf.partial([0, 0, 1]), 4.0 * 0.6, epsilon = 1e-13);
        assert_relative_eq!(wf.partial([0, 0, 2]), 4.0, epsilon = 1e-13);
        // Field and angular-integral data are untouched.
        let bp = planar.jets(&at).unwrap();
        let bf = full.jets(&at).unwrap();
        for i in 0..3 {
            assert_eq!(bp.b[i].value(), bf.b[i].value());
            assert_eq!(bp.s1[i].value(), bf.s1[i].value());
        }
        assert_eq!(bp.m1.value(), bf.m1.value());
        assert_eq!(
            full.x2_form(),
            X2Form::AxialQuadratic(W3::Harmonic { omega: 2.0 })
        );
        assert_eq!(planar.x2_form(), X2Form::ReducedPz);
    }

    #[test]
    fn twist_parameters_rejected_in_rank1_family() {
        let err = CatalogSystem::system_iii(
            PlanarCore::II(SystemIIParams::default()),
            W3::Zero,
            1.0,
        );
        assert!(err.is_err());
    }

    #[test]
    fn factory_applies_overrides_and_rejects_unknown_keys() {
        let sys = catalog_system(
            SystemKind::I,
            &[("rho1".to_string(), 2.0), ("w0".to_string(), 0.5)],
            1.0,
        )
        .unwrap();
        let listed = sys.params_list();
        assert!(listed.contains(&("rho1", 2.0)));
        assert!(listed.contains(&("w0", 0.5)));
        assert!(listed.contains(&("rho2", 0.1)));

        assert!(catalog_system(SystemKind::I, &[("f1".to_string(), 1.0)], 1.0).is_err());

        let sys3 = catalog_system(SystemKind::III, &[("omega".to_string(), 2.0)], 1.0).unwrap();
        assert_eq!(
            sys3.x2_form(),
            X2Form::AxialQuadratic(W3::Harmonic { omega: 2.0 })
        );
        let sys3l = catalog_system(
            SystemKind::III,
            &[("slope".to_string(), 0.7), ("core".to_string(), 1.0)],
            1.0,
        )
        .unwrap();
        assert_eq!(
            sys3l.x2_form(),
            X2Form::AxialQuadratic(W3::Linear { slope: 0.7 })
        );
    }

    #[test]
    fn kind_parsing() {
        assert_eq!(SystemKind::parse("SYSTEM_II").unwrap(), SystemKind::II);
        assert_eq!(SystemKind::parse("system_iii").unwrap(), SystemKind::III);
        assert_eq!(SystemKind::parse("1").unwrap(), SystemKind::I);
        assert!(SystemKind::parse("SYSTEM_IV").is_err());
    }
}

//! The five-auxiliary-function parametrization of the second-order part of
//! the integrability conditions: every compatible pair of integral
//! coefficients (s₁, s₂) and every admissible magnetic field derive from
//! ψ(φ), τ(φ), ρ(r), σ(r), μ(Z) via
//!
//!   s₁ = (ψ′, −ψ/r − r²μ + ρ, τ),    s₂ = (0, μ, −τ/r² + σ),
//!   B^r = −(r²/2)μ′ + τ′/(2r²),      B^φ = τ/r³ + σ′/2,
//!   B^Z = −ψ/(2r²) + rμ − ρ′/2 − ψ″/(2r²),
//!
//! all in cylindrical coordinate components. The coordinate divergence
//! ∂_r B^r + ∂_φ B^φ + ∂_Z B^Z vanishes identically for any choice of the
//! five functions.

use crate::geometry::{CylPoint, CylTwoForm, CylVector};
use crate::jet::{Jet1, Jet3};

use super::scalar1d::Scalar1D;

/// The five auxiliary profiles: ψ, τ of φ; ρ, σ of r; μ of Z.
pub struct AuxFunctions {
    pub psi: Box<dyn Scalar1D>,
    pub tau: Box<dyn Scalar1D>,
    pub rho: Box<dyn Scalar1D>,
    pub sigma: Box<dyn Scalar1D>,
    pub mu: Box<dyn Scalar1D>,
}

/// Cylindrical jets of the six s-components at `at`, ordered
/// (s₁^r, s₁^φ, s₁^Z), (s₂^r, s₂^φ, s₂^Z).
pub fn s_jets(aux: &AuxFunctions, at: &CylPoint) -> ([Jet3; 3], [Jet3; 3]) {
    let one = Jet1::constant(1.0);
    let psi = aux.psi.jet(at.phi);
    let tau = aux.tau.jet(at.phi);
    let rho = aux.rho.jet(at.r);
    let mu = aux.mu.jet(at.z);
    let r = Jet1::var(at.r);

    let mut s1r = Jet3::separable(&one, &psi.d(), &one);
    s1r.valid = 3;
    let s1p = Jet3::separable(&r.recip(), &psi, &one)
        .neg()
        .sub(&Jet3::separable(&r.powi(2), &one, &mu))
        .add(&Jet3::from_jet1(&rho, 0));
    let s1z = Jet3::from_jet1(&tau, 1);

    let s2r = Jet3::zero();
    let s2p = Jet3::from_jet1(&mu, 2);
    let s2z = Jet3::separable(&r.powi(-2), &tau, &one)
        .neg()
        .add(&Jet3::from_jet1(&aux.sigma.jet(at.r), 0));

    ([s1r, s1p, s1z], [s2r, s2p, s2z])
}

/// Cylindrical jets of the field components (B^r, B^φ, B^Z) at `at`.
pub fn field_jets(aux: &AuxFunctions, at: &CylPoint) -> [Jet3; 3] {
    let one = Jet1::constant(1.0);
    let psi = aux.psi.jet(at.phi);
    let tau = aux.tau.jet(at.phi);
    let rho = aux.rho.jet(at.r);
    let sigma = aux.sigma.jet(at.r);
    let mu = aux.mu.jet(at.z);
    let r = Jet1::var(at.r);

    let mut br = Jet3::separable(&r.powi(2).scale(-0.5), &one, &mu.d())
        .add(&Jet3::separable(&r.powi(-2).scale(0.5), &tau.d(), &one));
    br.valid = 3;

    let mut bp = Jet3::separable(&r.powi(-3), &tau, &one)
        .add(&Jet3::from_jet1(&sigma.d().scale(0.5), 0));
    bp.valid = 3;

    let mut bz = Jet3::separable(&r.powi(-2).scale(-0.5), &psi, &one)
        .add(&Jet3::separable(&r, &one, &mu))
        .sub(&Jet3::from_jet1(&rho.d().scale(0.5), 0))
        .sub(&Jet3::separable(&r.powi(-2).scale(0.5), &psi.d().d(), &one));
    bz.valid = 2;

    [br, bp, bz]
}

/// Point values of the integral coefficient vectors (s₁, s₂) at `at`.
pub fn s_from_aux(aux: &AuxFunctions, at: &CylPoint) -> (CylVector, CylVector) {
    let (s1, s2) = s_jets(aux, at);
    (
        CylVector {
            r: s1[0].value(),
            phi: s1[1].value(),
            z: s1[2].value(),
        },
        CylVector {
            r: s2[0].value(),
            phi: s2[1].value(),
            z: s2[2].value(),
        },
    )
}

/// Point values of the field components at `at`.
pub fn field_from_aux(aux: &AuxFunctions, at: &CylPoint) -> CylTwoForm {
    let b = field_jets(aux, at);
    CylTwoForm {
        r: b[0].value(),
        phi: b[1].value(),
        z: b[2].value(),
    }
}

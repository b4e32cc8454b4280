//! Residual evaluators for the reduced determining equations of the
//! cylindrical integrable pair: the two algebraic auxiliary-function
//! conditions, the three second-order compatibility conditions on the scalar
//! potential W, and the 3×3 gradient system M·∇W = RHS whose right-hand side
//! is the ħ²-proportional quantum source −ħ²(ψ‴ + ψ′)/(4r³).
//!
//! The rank of M drives the classification: rank 2 forces ∂_Z W = 0 and the
//! axial integral collapses to first order; rank 1 leaves a free axial
//! potential W₃(Z).

use nalgebra::Matrix3;

use crate::error::Result;
use crate::fields::aux::AuxFunctions;
use crate::geometry::CylPoint;
use crate::jet::{pos, Jet3};

/// Relative singular-value threshold for rank decisions. M entries span many
/// orders of magnitude (r⁷ terms), so only a relative cut is safe.
pub const RANK_THRESHOLD: f64 = 1e-10;

/// Oracle supplying the scalar potential as a cylindrical jet (partials to
/// order ≥ 2) at a point.
pub type WOracle<'a> = &'a dyn Fn(&CylPoint) -> Result<Jet3>;

/// All reduced-equation residuals at one point, unnormalized, with the scale
/// of the largest participating term per block so callers can form relative
/// residuals.
#[derive(Debug, Clone, Copy)]
pub struct ReducedResiduals {
    /// ψ′(r³σ′ + 2τ) − τ′(rρ − ψ).
    pub res_a1: f64,
    /// μψ′ + r³σμ′.
    pub res_a2: f64,
    /// The three W-compatibility residuals (rφ, φZ, rZ lines), LHS − RHS.
    pub res_b: [f64; 3],
    /// M·∇W − (0, −ħ²(ψ‴ + ψ′)/(4r³), 0).
    pub res_m: [f64; 3],
    pub rank_m: usize,
    pub scale_a: f64,
    pub scale_b: f64,
    pub scale_m: f64,
}

struct AuxValues {
    psi: f64,
    dpsi: f64,
    ddpsi: f64,
    dddpsi: f64,
    tau: f64,
    dtau: f64,
    ddtau: f64,
    rho: f64,
    drho: f64,
    ddrho: f64,
    sigma: f64,
    dsigma: f64,
    mu: f64,
    dmu: f64,
    ddmu: f64,
}

fn aux_values(aux: &AuxFunctions, at: &CylPoint) -> AuxValues {
    let psi = aux.psi.jet(at.phi);
    let tau = aux.tau.jet(at.phi);
    let rho = aux.rho.jet(at.r);
    let sigma = aux.sigma.jet(at.r);
    let mu = aux.mu.jet(at.z);
    AuxValues {
        psi: psi.value(),
        dpsi: psi.derivative(1),
        ddpsi: psi.derivative(2),
        dddpsi: psi.derivative(3),
        tau: tau.value(),
        dtau: tau.derivative(1),
        ddtau: tau.derivative(2),
        rho: rho.value(),
        drho: rho.derivative(1),
        ddrho: rho.derivative(2),
        sigma: sigma.value(),
        dsigma: sigma.derivative(1),
        mu: mu.value(),
        dmu: mu.derivative(1),
        ddmu: mu.derivative(2),
    }
}

/// Residuals of the two algebraic auxiliary-function conditions.
pub fn reduced_a_residuals(aux: &AuxFunctions, at: &CylPoint) -> (f64, f64) {
    let v = aux_values(aux, at);
    let r = at.r;
    let r3 = r * r * r;
    (
        v.dpsi * (r3 * v.dsigma + 2.0 * v.tau) - v.dtau * (r * v.rho - v.psi),
        v.mu * v.dpsi + r3 * v.sigma * v.dmu,
    )
}

/// Residuals (LHS − RHS) of the three W-compatibility conditions; `w` must
/// supply partials to order 2.
pub fn reduced_b_residuals(
    aux: &AuxFunctions,
    w: WOracle,
    at: &CylPoint,
) -> Result<[f64; 3]> {
    let v = aux_values(aux, at);
    let wj = w(at)?;
    let r = at.r;
    let (r2, r3) = (r * r, r * r * r);
    let r4 = r2 * r2;
    let r5 = r4 * r;

    let w_phi = wj.partial([0, 1, 0]);
    let w_rphi = wj.partial([1, 1, 0]);
    let w_phiz = wj.partial([0, 1, 1]);
    let w_rz = wj.partial([1, 0, 1]);

    let src1 = (v.dpsi
        * (r3 * (v.ddrho - v.mu) - r2 * v.drho + r * v.rho - 3.0 * v.ddpsi - 4.0 * v.psi)
        + v.dtau * (r3 * v.dsigma + 2.0 * v.tau)
        - 2.0 * r4 * v.tau * v.dmu
        - v.dddpsi * (v.psi - r * v.rho))
        / (4.0 * r5);
    let src2 = -(r2 * v.ddmu * (v.tau - r2 * v.sigma) + v.ddtau * v.mu) / (4.0 * r2);
    let src3 = (r * v.dmu * (r2 * v.drho + v.psi - 2.0 * r3 * v.mu) + 2.0 * v.mu * v.dtau)
        / (4.0 * r3);

    Ok([
        w_rphi + 2.0 / r * w_phi - src1,
        w_phiz - src2,
        w_rz - src3,
    ])
}

/// The matrix M of the gradient system for W.
pub fn matrix_m(aux: &AuxFunctions, at: &CylPoint) -> Matrix3<f64> {
    let v = aux_values(aux, at);
    let r = at.r;
    let r2 = r * r;
    let r5 = r2 * r2 * r;
    let r7 = r5 * r2;
    Matrix3::new(
        0.0,
        r2 * v.mu,
        r2 * v.sigma - v.tau,
        v.dpsi,
        v.rho - r2 * v.mu - v.psi / r,
        v.tau,
        0.0,
        4.0 * r7 * v.mu,
        -4.0 * r5 * v.tau,
    )
}

/// Rank of M under the relative singular-value threshold.
pub fn rank_m(aux: &AuxFunctions, at: &CylPoint) -> usize {
    let m = matrix_m(aux, at);
    let svd = m.svd(false, false);
    let smax = svd.singular_values.max();
    if smax <= 0.0 {
        return 0;
    }
    svd.singular_values
        .iter()
        .filter(|&&s| s > RANK_THRESHOLD * smax)
        .count()
}

/// Residual of the gradient system, M·∇W − (0, −ħ²(ψ‴ + ψ′)/(4r³), 0),
/// together with rank(M). With ħ = 0 this is exactly the classical system.
pub fn matrix_equation_residual(
    aux: &AuxFunctions,
    w: WOracle,
    hbar: f64,
    at: &CylPoint,
) -> Result<([f64; 3], usize)> {
    let v = aux_values(aux, at);
    let m = matrix_m(aux, at);
    let wj = w(at)?;
    let grad = nalgebra::Vector3::from(wj.grad());
    let rhs = nalgebra::Vector3::new(
        0.0,
        -hbar * hbar * (v.dddpsi + v.dpsi) / (4.0 * at.r.powi(3)),
        0.0,
    );
    let res = m * grad - rhs;
    Ok(([res[0], res[1], res[2]], rank_m(aux, at)))
}

/// Evaluate every reduced-equation residual at one point.
pub fn reduced_residuals(
    aux: &AuxFunctions,
    w: WOracle,
    hbar: f64,
    at: &CylPoint,
) -> Result<ReducedResiduals> {
    let v = aux_values(aux, at);
    let r = at.r;
    let r3 = r * r * r;

    let (res_a1, res_a2) = reduced_a_residuals(aux, at);
    let scale_a = [
        v.dpsi * (r3 * v.dsigma + 2.0 * v.tau),
        v.dtau * (r * v.rho - v.psi),
        v.mu * v.dpsi,
        r3 * v.sigma * v.dmu,
    ]
    .iter()
    .fold(0.0f64, |a, t| a.max(t.abs()));

    let wj = w(at)?;
    let res_b = reduced_b_residuals(aux, w, at)?;
    let scale_b = [
        wj.partial([1, 1, 0]),
        2.0 / r * wj.partial([0, 1, 0]),
        wj.partial([0, 1, 1]),
        wj.partial([1, 0, 1]),
    ]
    .iter()
    .fold(0.0f64, |a, t| a.max(t.abs()));

    let (res_m, rank) = matrix_equation_residual(aux, w, hbar, at)?;
    let m = matrix_m(aux, at);
    let grad = wj.grad();
    let mut scale_m = (hbar * hbar * (v.dddpsi + v.dpsi) / (4.0 * r3)).abs();
    for i in 0..3 {
        for j in 0..3 {
            scale_m = scale_m.max((m[(i, j)] * grad[j]).abs());
        }
    }

    Ok(ReducedResiduals {
        res_a1,
        res_a2,
        res_b,
        res_m,
        rank_m: rank,
        scale_a,
        scale_b,
        scale_m,
    })
}

/// Build an order-2 W jet from point values by 4th-order (first/pure-second)
/// and 2nd-order (mixed) central differences — the fallback oracle for
/// user-supplied potentials without analytic partials. Expect ~1e−6 accuracy
/// rather than the analytic oracles' 1e−12.
pub fn w_jet_from_values(
    f: &dyn Fn(&CylPoint) -> Result<f64>,
    at: &CylPoint,
    h: f64,
) -> Result<Jet3> {
    let probe = |dr: f64, dphi: f64, dz: f64| -> Result<f64> {
        f(&CylPoint {
            r: at.r + dr,
            phi: at.phi + dphi,
            z: at.z + dz,
        })
    };
    let steps = [
        h * at.r.abs().max(1.0),
        h * at.phi.abs().max(1.0),
        h * at.z.abs().max(1.0),
    ];

    let mut jet = Jet3::zero();
    jet.c[0] = probe(0.0, 0.0, 0.0)?;
    jet.valid = 2;

    let offset = |axis: usize, k: f64| -> (f64, f64, f64) {
        let mut d = [0.0; 3];
        d[axis] = k;
        (d[0], d[1], d[2])
    };

    for axis in 0..3 {
        let hx = steps[axis];
        let sample = |k: f64| -> Result<f64> {
            let (a, b, c) = offset(axis, k * hx);
            probe(a, b, c)
        };
        let (fm2, fm1, f0, fp1, fp2) = (
            sample(-2.0)?,
            sample(-1.0)?,
            jet.c[0],
            sample(1.0)?,
            sample(2.0)?,
        );
        let first = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * hx);
        let second = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * hx * hx);
        let mut m = [0u8; 3];
        m[axis] = 1;
        jet.c[pos(m)] = first;
        m[axis] = 2;
        jet.c[pos(m)] = second / 2.0;
    }

    // Mixed partials as the tensor product of two 4th-order first-derivative
    // stencils.
    const OFFS: [(f64, f64); 4] = [(-2.0, 1.0), (-1.0, -8.0), (1.0, 8.0), (2.0, -1.0)];
    for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
        let (hi, hj) = (steps[i], steps[j]);
        let mut mixed = 0.0;
        for (oi, ci) in OFFS {
            for (oj, cj) in OFFS {
                let mut d = [0.0; 3];
                d[i] = oi * hi;
                d[j] = oj * hj;
                mixed += ci * cj * probe(d[0], d[1], d[2])?;
            }
        }
        let mut m = [0u8; 3];
        m[i] = 1;
        m[j] = 1;
        jet.c[pos(m)] = mixed / (144.0 * hi * hj);
    }
    Ok(jet)
}

//! The angular profile β(φ) underlying the twisted catalog family: the
//! third-order nonlinear ODE it satisfies, its two first integrals (β₁, β₂),
//! the closed-form branch available when β₂ = 0, and a checked initial-value
//! solver for the general case.
//!
//! Conventions: primes are φ-derivatives. The third-order equation is
//!   β′(7ββ″ + 4β′² + 12β² + f₁) + β²β‴ = 0,
//! and its reduction to first order reads
//!   4β⁴β′² + 4β⁶ − 4β₁β² + f₁β⁴ = β₂,
//! with β₁ = (4β²β′² + 2β³β″ + 6β⁴ + f₁β²)/2 the intermediate integral.

use crate::error::{Error, Result};
use crate::fields::scalar1d::Scalar1D;
use crate::jet::Jet1;
use crate::ode::{self, OdeOptions};

/// Profiles closer to zero than this are rejected: the catalog fields carry
/// 1/β² … 1/β⁶ factors and the ODE itself divides by β².
pub const VANISHING_THRESHOLD: f64 = 1e-4;

/// Residual of the third-order profile equation at one φ, given the values
/// (β, β′, β″, β‴).
pub fn residual3(b: f64, db: f64, ddb: f64, dddb: f64, f1: f64) -> f64 {
    db * (7.0 * b * ddb + 4.0 * db * db + 12.0 * b * b + f1) + b * b * dddb
}

/// Residual of the first-order reduction at one φ:
/// 4β⁴β′² + 4β⁶ − 4β₁β² + f₁β⁴ − β₂.
pub fn residual1(b: f64, db: f64, beta1: f64, beta2: f64, f1: f64) -> f64 {
    let b2 = b * b;
    let b4 = b2 * b2;
    4.0 * b4 * db * db + 4.0 * b4 * b2 - 4.0 * beta1 * b2 + f1 * b4 - beta2
}

/// The two first integrals (β₁, β₂) evaluated from the local state
/// (β, β′, β″). Constant along any solution of the third-order equation.
pub fn first_integrals(b: f64, db: f64, ddb: f64, f1: f64) -> (f64, f64) {
    let b2 = b * b;
    let beta1 = (4.0 * b2 * db * db + 2.0 * b2 * b * ddb + 6.0 * b2 * b2 + f1 * b2) / 2.0;
    let beta2 = residual1(b, db, beta1, 0.0, f1);
    (beta1, beta2)
}

/// Exact degree-4 jet of β at one φ from the state (β, β′, β″), using the
/// profile equation for β‴ and its φ-derivative for β⁗.
pub fn jet_from_state(b: f64, db: f64, ddb: f64, f1: f64) -> Result<Jet1> {
    if b.abs() < VANISHING_THRESHOLD {
        return Err(Error::BetaVanishing {
            phi: f64::NAN,
            threshold: VANISHING_THRESHOLD,
        });
    }
    let b2 = b * b;
    let n = 7.0 * b * ddb + 4.0 * db * db + 12.0 * b2 + f1;
    let dddb = -db * n / b2;
    // d/dφ of β‴ = −β′ n / β²:
    let dn = 7.0 * db * ddb + 7.0 * b * dddb + 8.0 * db * ddb + 24.0 * b * db;
    let ddddb = -(ddb * n + db * dn) / b2 + 2.0 * db * db * n / (b2 * b);
    Ok(Jet1 {
        c: [b, db, ddb / 2.0, dddb / 6.0, ddddb / 24.0],
    })
}

/// Closed-form profile β(φ) = √((k·sin(2(φ − φ₀)) − f₁)/8) with
/// k = √(64β₁ + f₁²), the β₂ = 0 branch. Exists and stays positive exactly
/// when f₁ < 0 and −f₁²/64 < β₁ < 0; π-periodic.
#[derive(Debug, Clone, Copy)]
pub struct ClosedFormBeta {
    pub f1: f64,
    pub beta1: f64,
    pub phi0: f64,
    k: f64,
}

impl ClosedFormBeta {
    pub fn new(f1: f64, beta1: f64, phi0: f64) -> Result<Self> {
        if !(f1 < 0.0) {
            return Err(Error::InvalidParams(format!(
                "closed-form profile needs f1 < 0, got f1 = {f1}"
            )));
        }
        let lo = -f1 * f1 / 64.0;
        if !(beta1 > lo && beta1 < 0.0) {
            return Err(Error::InvalidParams(format!(
                "closed-form profile needs {lo} < beta1 < 0, got beta1 = {beta1}"
            )));
        }
        let k = (64.0 * beta1 + f1 * f1).sqrt();
        Ok(ClosedFormBeta { f1, beta1, phi0, k })
    }

    /// Exact jet of β² (the profile enters the field formulas mostly through
    /// even powers).
    pub fn sq_jet(&self, phi: f64) -> Jet1 {
        Jet1::var(phi)
            .add_scalar(-self.phi0)
            .scale(2.0)
            .sin()
            .scale(self.k)
            .add_scalar(-self.f1)
            .scale(0.125)
    }

    /// Exact jet of β′ = (β²)′/(2β).
    pub fn djet(&self, phi: f64) -> Jet1 {
        let dsq = Jet1::var(phi)
            .add_scalar(-self.phi0)
            .scale(2.0)
            .cos()
            .scale(self.k * 0.25);
        dsq.div(&self.jet(phi).scale(2.0))
    }
}

impl Scalar1D for ClosedFormBeta {
    fn jet(&self, phi: f64) -> Jet1 {
        self.sq_jet(phi).sqrt()
    }
}

/// One recorded sample of a numerically integrated profile.
#[derive(Debug, Clone, Copy)]
pub struct BetaSample {
    pub phi: f64,
    pub beta: f64,
    pub dbeta: f64,
    pub ddbeta: f64,
}

/// Integrate the third-order profile equation as an initial-value problem
/// from `phi0` with state (β, β′, β″) = `y0`, recording the state at each
/// requested φ (strictly monotone, starting at `phi0`).
///
/// Fails with [`Error::BetaVanishing`] if |β| drops below `threshold` along
/// the way.
pub fn solve_ivp(
    f1: f64,
    phi0: f64,
    y0: [f64; 3],
    phis: &[f64],
    threshold: f64,
    opts: &OdeOptions,
) -> Result<Vec<BetaSample>> {
    if let Some(&first) = phis.first() {
        if (first - phi0).abs() > 1e-14 {
            return Err(Error::InvalidParams(format!(
                "sample grid must start at phi0 = {phi0}, got {first}"
            )));
        }
    }
    if y0[0].abs() < threshold {
        return Err(Error::BetaVanishing {
            phi: phi0,
            threshold,
        });
    }

    let mut vanished_at: Option<f64> = None;
    let mut rhs = |phi: f64, y: &[f64; 3]| -> Result<[f64; 3]> {
        let (b, db, ddb) = (y[0], y[1], y[2]);
        if b.abs() < threshold {
            vanished_at = Some(phi);
            return Err(Error::BetaVanishing { phi, threshold });
        }
        let dddb = -db * (7.0 * b * ddb + 4.0 * db * db + 12.0 * b * b + f1) / (b * b);
        Ok([db, ddb, dddb])
    };

    match ode::sample_path(&mut rhs, y0, phis, opts) {
        Ok(states) => Ok(phis
            .iter()
            .zip(states)
            .map(|(&phi, y)| BetaSample {
                phi,
                beta: y[0],
                dbeta: y[1],
                ddbeta: y[2],
            })
            .collect()),
        Err(e) => match vanished_at {
            Some(phi) => Err(Error::BetaVanishing { phi, threshold }),
            None => Err(e),
        },
    }
}

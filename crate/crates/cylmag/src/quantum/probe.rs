//! Probe functions for operator verification: polynomials times anisotropic
//! Gaussians. All partial derivatives through order 4 come from exact jet
//! arithmetic, so operator residuals are never polluted by stencil error.

use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{cyl_to_cart, CartPoint};
use crate::jet::{degree, Jet3};
use crate::sampling::{sample_cyl, SampleBox};

/// Largest total degree allowed for the polynomial factor.
pub const MAX_POLY_DEGREE: usize = 6;

/// ψ(x) = P(x) · exp(−Σ_k α_k (x_k − c_k)²) with P a real polynomial of
/// total degree ≤ 6 and all α_k > 0, so every probe is Schwartz-class.
#[derive(Clone, Debug)]
pub struct TestFunction {
    poly: Vec<([u8; 3], f64)>,
    center: [f64; 3],
    alpha: [f64; 3],
}

impl TestFunction {
    /// Monomial list (multi-index, coefficient), Gaussian center, and decay
    /// rates. Rejects empty polynomials, degrees above
    /// [`MAX_POLY_DEGREE`], non-positive decay rates, and non-finite input.
    pub fn new(poly: Vec<([u8; 3], f64)>, center: [f64; 3], alpha: [f64; 3]) -> Result<Self> {
        if poly.is_empty() {
            return Err(Error::InvalidParams(
                "probe polynomial must have at least one term".into(),
            ));
        }
        for (idx, c) in &poly {
            if degree(*idx) > MAX_POLY_DEGREE {
                return Err(Error::InvalidParams(format!(
                    "probe monomial degree {} exceeds {MAX_POLY_DEGREE}",
                    degree(*idx)
                )));
            }
            if !c.is_finite() {
                return Err(Error::InvalidParams("non-finite probe coefficient".into()));
            }
        }
        for v in center.iter().chain(alpha.iter()) {
            if !v.is_finite() {
                return Err(Error::InvalidParams("non-finite probe parameter".into()));
            }
        }
        if alpha.iter().any(|&a| a <= 0.0) {
            return Err(Error::InvalidParams(
                "probe decay rates must be positive".into(),
            ));
        }
        Ok(TestFunction {
            poly,
            center,
            alpha,
        })
    }

    /// Pure Gaussian exp(−Σ α_k (x_k − c_k)²). Requires every α_k > 0.
    pub fn gaussian(center: [f64; 3], alpha: [f64; 3]) -> Self {
        Self::new(vec![([0, 0, 0], 1.0)], center, alpha)
            .expect("a Gaussian with positive decay rates is always valid")
    }

    /// Degree-4 Taylor jet of ψ about `at`, exact to that order.
    pub fn jet(&self, at: &CartPoint) -> Jet3 {
        let x = [at.x, at.y, at.z];
        let mut q = Jet3::zero();
        for k in 0..3 {
            let u = Jet3::var(k, x[k] - self.center[k]);
            q = q.sub(&u.mul(&u).scale(self.alpha[k]));
        }
        let gauss = q.exp();
        let mut p = Jet3::zero();
        for (idx, c) in &self.poly {
            let mut term = Jet3::constant(*c);
            for k in 0..3 {
                if idx[k] > 0 {
                    term = term.mul(&Jet3::var(k, x[k]).powi(idx[k] as i32));
                }
            }
            p = p.add(&term);
        }
        p.mul(&gauss)
    }

    pub fn value(&self, at: &CartPoint) -> f64 {
        self.jet(at).value()
    }

    /// ∂^m ψ(at) for |m| ≤ 4.
    pub fn partial(&self, m: [u8; 3], at: &CartPoint) -> f64 {
        self.jet(at).partial(m)
    }

    /// Random probe centered inside the sampling box: low-degree polynomial
    /// with a non-vanishing constant term times a moderately decaying
    /// Gaussian.
    pub fn random(rng: &mut impl Rng, bx: &SampleBox) -> Self {
        let c = cyl_to_cart(&sample_cyl(rng, bx));
        let center = [c.x, c.y, c.z];
        let alpha = [(); 3].map(|_| rng.gen_range(0.4..1.2));
        let mut poly = vec![([0u8, 0, 0], rng.gen_range(0.5..1.5))];
        for _ in 0..3 {
            let idx = [(); 3].map(|_| rng.gen_range(0..=2u8));
            poly.push((idx, rng.gen_range(-1.0..1.0)));
        }
        Self::new(poly, center, alpha).expect("generated parameters are in range")
    }
}

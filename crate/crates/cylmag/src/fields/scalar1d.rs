//! One-dimensional smooth profiles (the auxiliary functions ψ, μ, τ of φ and
//! ρ, σ of r, axial potentials W₃(z), radial profiles) queried as exact
//! degree-4 Taylor jets, so every consumer gets analytic derivatives.

use crate::jet::Jet1;

/// A smooth function of one variable exposing its degree-4 Taylor jet.
///
/// Implementations must return *exact* jets: all five Taylor coefficients
/// correct to rounding, never finite differences.
pub trait Scalar1D {
    fn jet(&self, x: f64) -> Jet1;

    fn value(&self, x: f64) -> f64 {
        self.jet(x).value()
    }

    /// k-th derivative, k ≤ 4.
    fn derivative(&self, x: f64, k: usize) -> f64 {
        self.jet(x).derivative(k)
    }
}

impl<T: Scalar1D + ?Sized> Scalar1D for &T {
    fn jet(&self, x: f64) -> Jet1 {
        (**self).jet(x)
    }
}

impl<T: Scalar1D + ?Sized> Scalar1D for Box<T> {
    fn jet(&self, x: f64) -> Jet1 {
        (**self).jet(x)
    }
}

/// Constant function.
#[derive(Debug, Clone, Copy)]
pub struct Const1(pub f64);

impl Scalar1D for Const1 {
    fn jet(&self, _x: f64) -> Jet1 {
        Jet1::constant(self.0)
    }
}

/// Polynomial Σ c_k x^k with ascending coefficients.
#[derive(Debug, Clone)]
pub struct Poly1 {
    pub coeffs: Vec<f64>,
}

impl Poly1 {
    pub fn new(coeffs: impl Into<Vec<f64>>) -> Self {
        Poly1 {
            coeffs: coeffs.into(),
        }
    }
}

impl Scalar1D for Poly1 {
    fn jet(&self, x: f64) -> Jet1 {
        let v = Jet1::var(x);
        let mut acc = Jet1::constant(0.0);
        for &c in self.coeffs.iter().rev() {
            acc = acc.mul(&v).add_scalar(c);
        }
        acc
    }
}

/// Sum of signed integer powers Σ c_i x^{e_i} (e.g. ρ₀/r, τ₀/r²).
#[derive(Debug, Clone)]
pub struct PowSum1 {
    pub terms: Vec<(f64, i32)>,
}

impl PowSum1 {
    pub fn new(terms: impl Into<Vec<(f64, i32)>>) -> Self {
        PowSum1 {
            terms: terms.into(),
        }
    }
}

impl Scalar1D for PowSum1 {
    fn jet(&self, x: f64) -> Jet1 {
        let v = Jet1::var(x);
        let mut acc = Jet1::constant(0.0);
        for &(c, e) in &self.terms {
            acc = acc.add(&v.powi(e).scale(c));
        }
        acc
    }
}

/// a·cos(ωx) + b·sin(ωx).
#[derive(Debug, Clone, Copy)]
pub struct Trig1 {
    pub cos_amp: f64,
    pub sin_amp: f64,
    pub freq: f64,
}

impl Scalar1D for Trig1 {
    fn jet(&self, x: f64) -> Jet1 {
        let arg = Jet1::var(x).scale(self.freq);
        arg.cos()
            .scale(self.cos_amp)
            .add(&arg.sin().scale(self.sin_amp))
    }
}

/// Adapter for ad-hoc jet-valued closures (composite profiles).
pub struct FnJet1<F: Fn(f64) -> Jet1>(pub F);

impl<F: Fn(f64) -> Jet1> Scalar1D for FnJet1<F> {
    fn jet(&self, x: f64) -> Jet1 {
        (self.0)(x)
    }
}

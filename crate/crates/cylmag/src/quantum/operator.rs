//! Second-order linear differential operators with coefficient jets, exact
//! Leibniz-rule composition, and the catalog builders for H, X₁, X₂.
//!
//! An operator is a sparse table α ↦ c_α(x) of complex coefficient jets for
//! the monomials ∂^α. Composition is performed exactly at a point:
//! (a∘b)_γ = Σ binom(α, δ) a_α ∂^δ b_β over α − δ + β = γ, with every ∂^δ b_β
//! read off the coefficient jets — no numerical differentiation anywhere.

use std::rc::Rc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fields::catalog::{CatalogSystem, X2Form};
use crate::geometry::CartPoint;
use crate::jet::{degree, CJet3, Jet3, ORDER};

use super::probe::TestFunction;
use crate::classical::IntegralKind;

/// Sparse coefficient table of an operator at one point: (multi-index,
/// coefficient jet) pairs, one entry per index.
#[derive(Clone, Default)]
pub struct OpCoeffs {
    terms: Vec<([u8; 3], CJet3)>,
}

fn binom(n: u8, k: u8) -> f64 {
    let mut out = 1.0;
    for i in 0..k as u64 {
        out *= (n as u64 - i) as f64 / (i + 1) as f64;
    }
    out
}

fn multi_binom(a: [u8; 3], d: [u8; 3]) -> f64 {
    binom(a[0], d[0]) * binom(a[1], d[1]) * binom(a[2], d[2])
}

impl OpCoeffs {
    pub fn new() -> Self {
        OpCoeffs { terms: Vec::new() }
    }

    /// Add `jet` into the coefficient of ∂^idx (merging with any existing
    /// entry).
    pub fn add_term(&mut self, idx: [u8; 3], jet: CJet3) {
        if let Some((_, existing)) = self.terms.iter_mut().find(|(i, _)| *i == idx) {
            *existing = existing.add(&jet);
        } else {
            self.terms.push((idx, jet));
        }
    }

    pub fn terms(&self) -> &[([u8; 3], CJet3)] {
        &self.terms
    }

    pub fn get(&self, idx: [u8; 3]) -> Option<&CJet3> {
        self.terms.iter().find(|(i, _)| *i == idx).map(|(_, j)| j)
    }

    /// Coefficient value of ∂^idx (zero when absent).
    pub fn value(&self, idx: [u8; 3]) -> Complex64 {
        self.get(idx).map_or(Complex64::ZERO, |j| j.value())
    }

    /// Coefficient-level difference self − other.
    pub fn sub(&self, other: &OpCoeffs) -> OpCoeffs {
        let mut out = self.clone();
        for (idx, jet) in &other.terms {
            out.add_term(*idx, jet.neg());
        }
        out
    }

    /// Apply to a probe whose jet at the same point is given:
    /// Σ_α c_α · (∂^α ψ).
    pub fn apply(&self, probe_jet: &Jet3) -> Complex64 {
        let mut out = Complex64::ZERO;
        for (idx, jet) in &self.terms {
            out += jet.value() * probe_jet.partial(*idx);
        }
        out
    }

    /// Largest coefficient magnitude among terms of the given total order.
    pub fn max_abs_at_order(&self, k: usize) -> f64 {
        self.terms
            .iter()
            .filter(|(i, _)| degree(*i) == k)
            .fold(0.0, |m, (_, j)| m.max(j.value().norm()))
    }
}

/// A linear differential operator of order ≤ 4 with lazily evaluated
/// coefficient jets.
#[derive(Clone)]
pub struct DiffOperator {
    name: String,
    order: usize,
    table: Rc<dyn Fn(&CartPoint) -> Result<OpCoeffs>>,
}

impl DiffOperator {
    pub fn new(
        name: impl Into<String>,
        order: usize,
        table: impl Fn(&CartPoint) -> Result<OpCoeffs> + 'static,
    ) -> Self {
        DiffOperator {
            name: name.into(),
            order,
            table: Rc::new(table),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    /// The coefficient table at a point.
    pub fn coeffs(&self, at: &CartPoint) -> Result<OpCoeffs> {
        (self.table)(at)
    }

    /// (Op ψ)(at) for an exact-derivative probe.
    pub fn apply(&self, probe: &TestFunction, at: &CartPoint) -> Result<Complex64> {
        Ok(self.coeffs(at)?.apply(&probe.jet(at)))
    }

    /// Operator sum.
    pub fn add(&self, other: &DiffOperator) -> DiffOperator {
        let (ta, tb) = (self.table.clone(), other.table.clone());
        DiffOperator {
            name: format!("{}+{}", self.name, other.name),
            order: self.order.max(other.order),
            table: Rc::new(move |at: &CartPoint| {
                let mut t = ta(at)?;
                for (idx, jet) in tb(at)?.terms {
                    t.add_term(idx, jet);
                }
                Ok(t)
            }),
        }
    }

    /// Scalar multiple.
    pub fn scale(&self, s: Complex64) -> DiffOperator {
        let ta = self.table.clone();
        DiffOperator {
            name: format!("{}·{}", s, self.name),
            order: self.order,
            table: Rc::new(move |at: &CartPoint| {
                let mut t = ta(at)?;
                for (_, jet) in t.terms.iter_mut() {
                    *jet = jet.scale(s);
                }
                Ok(t)
            }),
        }
    }
}

/// Multiplication operator f(x)·id from a coefficient-jet oracle.
pub fn scalar_operator(
    name: impl Into<String>,
    f: impl Fn(&CartPoint) -> Result<CJet3> + 'static,
) -> DiffOperator {
    DiffOperator::new(name, 0, move |at: &CartPoint| {
        let mut t = OpCoeffs::new();
        t.add_term([0, 0, 0], f(at)?);
        Ok(t)
    })
}

/// Constant-coefficient first derivative c·∂_axis.
pub fn derivative_operator(name: impl Into<String>, axis: usize, c: Complex64) -> DiffOperator {
    let mut idx = [0u8; 3];
    idx[axis] = 1;
    DiffOperator::new(name, 1, move |_: &CartPoint| {
        let mut t = OpCoeffs::new();
        t.add_term(idx, CJet3::constant(c));
        Ok(t)
    })
}

/// Canonical momentum component −iħ∂_axis.
pub fn momentum_operator(axis: usize, hbar: f64) -> DiffOperator {
    derivative_operator(format!("p{}", ["x", "y", "z"][axis]), axis, Complex64::new(0.0, -hbar))
}

fn sub_indices(a: [u8; 3]) -> impl Iterator<Item = [u8; 3]> {
    (0..=a[0]).flat_map(move |i| {
        (0..=a[1]).flat_map(move |j| (0..=a[2]).map(move |k| [i, j, k]))
    })
}

/// Exact Leibniz-rule composition a∘b: (a∘b)ψ = a(bψ).
pub fn compose(a: &DiffOperator, b: &DiffOperator) -> Result<DiffOperator> {
    let order = a.order + b.order;
    if order > ORDER {
        return Err(Error::OrderOverflow {
            requested: order,
            max: ORDER,
        });
    }
    let (ta, tb) = (a.table.clone(), b.table.clone());
    Ok(DiffOperator {
        name: format!("{}∘{}", a.name, b.name),
        order,
        table: Rc::new(move |at: &CartPoint| {
            let ca = ta(at)?;
            let cb = tb(at)?;
            let mut out = OpCoeffs::new();
            for (alpha, ajet) in ca.terms() {
                for delta in sub_indices(*alpha) {
                    let w = multi_binom(*alpha, delta);
                    let rem = [alpha[0] - delta[0], alpha[1] - delta[1], alpha[2] - delta[2]];
                    for (beta, bjet) in cb.terms() {
                        let gamma = [rem[0] + beta[0], rem[1] + beta[1], rem[2] + beta[2]];
                        if degree(gamma) > ORDER {
                            continue;
                        }
                        let mut term = ajet.mul(&bjet.shift(delta));
                        if w != 1.0 {
                            term = term.scale(Complex64::new(w, 0.0));
                        }
                        out.add_term(gamma, term);
                    }
                }
            }
            Ok(out)
        }),
    })
}

/// [a, b] = a∘b − b∘a, as an exact coefficient-level operator. Both inputs
/// must have order ≤ 2 so the compositions stay within the supported order.
pub fn commutator(a: &DiffOperator, b: &DiffOperator) -> Result<DiffOperator> {
    if a.order > 2 || b.order > 2 {
        return Err(Error::OrderOverflow {
            requested: a.order + b.order,
            max: ORDER,
        });
    }
    let ab = compose(a, b)?;
    let ba = compose(b, a)?;
    let (tab, tba) = (ab.table.clone(), ba.table.clone());
    Ok(DiffOperator {
        name: format!("[{}, {}]", a.name, b.name),
        order: ab.order,
        table: Rc::new(move |at: &CartPoint| Ok(tab(at)?.sub(&tba(at)?))),
    })
}

/// H = −(ħ²/2)Δ − iħ A·∇ − (iħ/2)(div A) + ½|A|² + W. The ħ² part of W is
/// included iff the system's correction flag is on.
pub fn build_hamiltonian(system: &CatalogSystem, hbar: f64) -> DiffOperator {
    let sys = system.with_hbar(hbar);
    DiffOperator::new("H", 2, move |at: &CartPoint| {
        let jets = sys.cart_jets(at)?;
        let mut t = OpCoeffs::new();
        let lap = Complex64::new(-0.5 * hbar * hbar, 0.0);
        t.add_term([2, 0, 0], CJet3::constant(lap));
        t.add_term([0, 2, 0], CJet3::constant(lap));
        t.add_term([0, 0, 2], CJet3::constant(lap));
        let mih = Complex64::new(0.0, -hbar);
        for (j, a) in jets.a.iter().enumerate() {
            let mut e = [0u8; 3];
            e[j] = 1;
            t.add_term(e, CJet3::from_real(*a).scale(mih));
        }
        let div_a = jets.a[0]
            .shift([1, 0, 0])
            .add(&jets.a[1].shift([0, 1, 0]))
            .add(&jets.a[2].shift([0, 0, 1]));
        t.add_term(
            [0, 0, 0],
            CJet3 {
                re: Jet3::dot(&jets.a, &jets.a).scale(0.5).add(&jets.w),
                im: div_a.scale(-0.5 * hbar),
            },
        );
        Ok(t)
    })
}

/// The angular covariant momentum L_z^A = −iħ(x∂_y − y∂_x) + (xA_y − yA_x)
/// as a first-order operator.
fn angular_operator(sys: CatalogSystem, hbar: f64) -> DiffOperator {
    DiffOperator::new("L", 1, move |at: &CartPoint| {
        let jets = sys.cart_jets(at)?;
        let xj = Jet3::var(0, at.x);
        let yj = Jet3::var(1, at.y);
        let mut t = OpCoeffs::new();
        t.add_term(
            [0, 1, 0],
            CJet3::from_real(xj).scale(Complex64::new(0.0, -hbar)),
        );
        t.add_term(
            [1, 0, 0],
            CJet3::from_real(yj).scale(Complex64::new(0.0, hbar)),
        );
        t.add_term(
            [0, 0, 0],
            CJet3::from_real(xj.mul(&jets.a[1]).sub(&yj.mul(&jets.a[0]))),
        );
        Ok(t)
    })
}

/// The axial covariant momentum p_z^A = −iħ∂_z + A_z.
fn axial_operator(sys: CatalogSystem, hbar: f64) -> DiffOperator {
    DiffOperator::new("pzA", 1, move |at: &CartPoint| {
        let jets = sys.cart_jets(at)?;
        let mut t = OpCoeffs::new();
        t.add_term([0, 0, 1], CJet3::constant(Complex64::new(0.0, -hbar)));
        t.add_term([0, 0, 0], CJet3::from_real(jets.a[2]));
        Ok(t)
    })
}

/// Build X₁ or X₂ as an operator: leading squared covariant momentum plus
/// the symmetrized first-order part −iħ s·∇ − (iħ/2)(div s) + s·A and the
/// scalar m (ħ² part gated by the correction flag). For the rank-2 families
/// X₂ is exactly −iħ∂_z.
pub fn build_integral(system: &CatalogSystem, which: IntegralKind, hbar: f64) -> DiffOperator {
    let sys = system.with_hbar(hbar);
    match which {
        IntegralKind::X1 => {
            let l = angular_operator(sys, hbar);
            let lead = compose(&l, &l).expect("first-order square stays within order 4");
            let lower = DiffOperator::new("X1low", 1, move |at: &CartPoint| {
                let jets = sys.cart_jets(at)?;
                let mut t = OpCoeffs::new();
                let mih = Complex64::new(0.0, -hbar);
                for (j, s) in jets.s1.iter().enumerate() {
                    let mut e = [0u8; 3];
                    e[j] = 1;
                    t.add_term(e, CJet3::from_real(*s).scale(mih));
                }
                let div_s = jets.s1[0]
                    .shift([1, 0, 0])
                    .add(&jets.s1[1].shift([0, 1, 0]))
                    .add(&jets.s1[2].shift([0, 0, 1]));
                t.add_term(
                    [0, 0, 0],
                    CJet3 {
                        re: Jet3::dot(&jets.s1, &jets.a).add(&jets.m1),
                        im: div_s.scale(-0.5 * hbar),
                    },
                );
                Ok(t)
            });
            lead.add(&lower).with_name("X1")
        }
        IntegralKind::X2 => match sys.x2_form() {
            X2Form::ReducedPz => momentum_operator(2, hbar).with_name("X2"),
            X2Form::AxialQuadratic(w3) => {
                let pza = axial_operator(sys, hbar);
                let lead = compose(&pza, &pza).expect("first-order square stays within order 4");
                let axial = scalar_operator("2W3", move |at: &CartPoint| {
                    Ok(CJet3::from_real(
                        Jet3::from_jet1(&w3.jet1(at.z), 2).scale(2.0),
                    ))
                });
                lead.add(&axial).with_name("X2")
            }
        },
    }
}

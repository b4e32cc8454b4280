//! Classical-mechanics verification layer: phase-space observables (H, X₁,
//! X₂) with analytic gradients, canonical Hamiltonian flow in the catalog
//! fields, trajectory conservation records, and Poisson brackets.
//!
//! Everything here is the ħ → 0 reading: the ħ²-proportional parts of W and
//! m₁ are switched off when observables and equations of motion are built,
//! because those corrections repair operator-ordering terms that have no
//! classical counterpart (and would otherwise *break* classical conservation
//! at O(ħ²) — see the tests).

use std::cell::Cell;
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::fields::catalog::{CatalogSystem, CartSystemJets, SystemIParams, X2Form};
use crate::geometry::CartPoint;
use crate::jet::Jet3;
use crate::ode::{self, OdeOptions};

/// Cartesian position + canonical momentum.
#[derive(Debug, Clone, Copy)]
pub struct PhaseState {
    pub position: CartPoint,
    pub momentum: [f64; 3],
}

impl PhaseState {
    pub fn new(position: CartPoint, momentum: [f64; 3]) -> Self {
        PhaseState { position, momentum }
    }
}

/// Phase-space gradient of a scalar observable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseGradient {
    /// (∂/∂x, ∂/∂y, ∂/∂z).
    pub x: [f64; 3],
    /// (∂/∂p_x, ∂/∂p_y, ∂/∂p_z).
    pub p: [f64; 3],
}

/// A scalar phase-space function with a gradient oracle — analytic where the
/// catalog supplies one, 4th-order central differences otherwise.
pub struct Observable {
    name: String,
    eval: Rc<dyn Fn(&PhaseState) -> Result<f64>>,
    grad: Option<Box<dyn Fn(&PhaseState) -> Result<PhaseGradient>>>,
}

impl Observable {
    pub fn new(
        name: impl Into<String>,
        eval: impl Fn(&PhaseState) -> Result<f64> + 'static,
        grad: impl Fn(&PhaseState) -> Result<PhaseGradient> + 'static,
    ) -> Self {
        Observable {
            name: name.into(),
            eval: Rc::new(eval),
            grad: Some(Box::new(grad)),
        }
    }

    /// Observable with only an evaluation oracle; gradients fall back to
    /// central differences.
    pub fn without_gradient(
        name: impl Into<String>,
        eval: impl Fn(&PhaseState) -> Result<f64> + 'static,
    ) -> Self {
        Observable {
            name: name.into(),
            eval: Rc::new(eval),
            grad: None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn value(&self, at: &PhaseState) -> Result<f64> {
        (self.eval)(at)
    }

    pub fn gradient(&self, at: &PhaseState) -> Result<PhaseGradient> {
        match &self.grad {
            Some(g) => g(at),
            None => self.fd_gradient(at),
        }
    }

    /// Central-difference gradient (always available, used to cross-check the
    /// analytic oracles).
    pub fn fd_gradient(&self, at: &PhaseState) -> Result<PhaseGradient> {
        fd_gradient_of(self.eval.as_ref(), at)
    }
}

/// 4th-order central differences with step 1e−5·max(1, |coordinate|).
fn fd_gradient_of(
    eval: &dyn Fn(&PhaseState) -> Result<f64>,
    at: &PhaseState,
) -> Result<PhaseGradient> {
    let coords = [at.position.x, at.position.y, at.position.z];
    let mut out = PhaseGradient {
        x: [0.0; 3],
        p: [0.0; 3],
    };
    let stencil = |f: &dyn Fn(f64) -> Result<f64>, h: f64| -> Result<f64> {
        Ok((f(-2.0 * h)? - 8.0 * f(-h)? + 8.0 * f(h)? - f(2.0 * h)?) / (12.0 * h))
    };
    for j in 0..3 {
        let h = 1e-5 * coords[j].abs().max(1.0);
        let f = |s: f64| -> Result<f64> {
            let mut st = *at;
            match j {
                0 => st.position.x += s,
                1 => st.position.y += s,
                _ => st.position.z += s,
            }
            eval(&st)
        };
        out.x[j] = stencil(&f, h)?;

        let h = 1e-5 * at.momentum[j].abs().max(1.0);
        let f = |s: f64| -> Result<f64> {
            let mut st = *at;
            st.momentum[j] += s;
            eval(&st)
        };
        out.p[j] = stencil(&f, h)?;
    }
    Ok(out)
}

/// Covariant momentum p + A(x) from the gauge jets.
fn covariant_momentum(a: &[Jet3; 3], p: &[f64; 3]) -> [f64; 3] {
    [
        p[0] + a[0].value(),
        p[1] + a[1].value(),
        p[2] + a[2].value(),
    ]
}

fn hamiltonian_parts(jets: &CartSystemJets, p: &[f64; 3]) -> (f64, PhaseGradient) {
    let pa = covariant_momentum(&jets.a, p);
    let ga = [jets.a[0].grad(), jets.a[1].grad(), jets.a[2].grad()];
    let gw = jets.w.grad();
    let value = 0.5 * (pa[0] * pa[0] + pa[1] * pa[1] + pa[2] * pa[2]) + jets.w.value();
    let mut gx = [0.0; 3];
    for j in 0..3 {
        gx[j] = gw[j];
        for k in 0..3 {
            gx[j] += pa[k] * ga[k][j];
        }
    }
    (value, PhaseGradient { x: gx, p: pa })
}

/// Angular covariant momentum L_z^A = x p_y^A − y p_x^A and its phase-space
/// gradient.
fn angular_momentum_parts(
    jets: &CartSystemJets,
    at: &PhaseState,
) -> (f64, PhaseGradient) {
    let (x, y) = (at.position.x, at.position.y);
    let pa = covariant_momentum(&jets.a, &at.momentum);
    let ga = [jets.a[0].grad(), jets.a[1].grad()];
    let value = x * pa[1] - y * pa[0];
    let mut gx = [0.0; 3];
    for j in 0..3 {
        gx[j] = x * ga[1][j] - y * ga[0][j];
    }
    gx[0] += pa[1];
    gx[1] -= pa[0];
    (
        value,
        PhaseGradient {
            x: gx,
            p: [-y, x, 0.0],
        },
    )
}

/// X₁ assembled from the coefficient jets: (L_z^A)² + s₁·p^A + m₁.
fn x1_assembled(jets: &CartSystemJets, at: &PhaseState) -> (f64, PhaseGradient) {
    let (l, gl) = angular_momentum_parts(jets, at);
    let pa = covariant_momentum(&jets.a, &at.momentum);
    let ga = [jets.a[0].grad(), jets.a[1].grad(), jets.a[2].grad()];
    let s = [jets.s1[0].value(), jets.s1[1].value(), jets.s1[2].value()];
    let gs = [jets.s1[0].grad(), jets.s1[1].grad(), jets.s1[2].grad()];
    let gm = jets.m1.grad();

    let value = l * l + s[0] * pa[0] + s[1] * pa[1] + s[2] * pa[2] + jets.m1.value();
    let mut gx = [0.0; 3];
    let mut gp = [0.0; 3];
    for j in 0..3 {
        gx[j] = 2.0 * l * gl.x[j] + gm[j];
        for k in 0..3 {
            gx[j] += gs[k][j] * pa[k] + s[k] * ga[k][j];
        }
        gp[j] = 2.0 * l * gl.p[j] + s[j];
    }
    (value, PhaseGradient { x: gx, p: gp })
}

/// The polynomial family's X₁ in closed Cartesian form (no jets): used as the
/// evaluation path for that family and as the dual-construction cross-check
/// against [`x1_assembled`].
fn x1_polynomial_direct(p: &SystemIParams, at: &PhaseState) -> (f64, PhaseGradient) {
    let (rho1, rho2, psi1, psi2, w0) = (p.rho1, p.rho2, p.psi1, p.psi2, p.w0);
    let (x, y) = (at.position.x, at.position.y);
    let (px, py) = (at.momentum[0], at.momentum[1]);
    let r2 = x * x + y * y;
    let c = 0.5 * rho1 - 1.5 * rho2 * r2;
    let bz = rho1 - 6.0 * rho2 * r2;
    let pax = px - c * y;
    let pay = py + c * x;
    let l = x * py - y * px + c * r2;
    let rho = 3.0 * rho2 * r2 * r2 - rho1 * r2 + w0;
    let u = 3.0 * rho2 * r2 * r2 - rho1 * r2 + 2.0 * w0;
    let v = 3.0 * rho2 * r2 - rho1;

    let value = l * l
        + rho * l
        + (psi1 * pay - psi2 * pax)
        + (2.0 * rho2 * r2 - rho1) * (psi1 * x + psi2 * y)
        + 0.25 * u * v * r2;

    // ∂/∂(x,y) of each factor; everything is z-independent.
    let dl = [py + x * bz, -px + y * bz, 0.0];
    let drho_dr2 = 6.0 * rho2 * r2 - rho1;
    let du_dr2 = drho_dr2;
    let dpax = [3.0 * rho2 * x * y, -c + 3.0 * rho2 * y * y, 0.0];
    let dpay = [c - 3.0 * rho2 * x * x, -3.0 * rho2 * x * y, 0.0];
    let mut gx = [0.0; 3];
    for (j, &xy) in [x, y].iter().enumerate() {
        let dr2 = 2.0 * xy;
        gx[j] = 2.0 * l * dl[j]
            + drho_dr2 * dr2 * l
            + rho * dl[j]
            + psi1 * dpay[j]
            - psi2 * dpax[j]
            + 2.0 * rho2 * dr2 * (psi1 * x + psi2 * y)
            + 0.25 * (du_dr2 * dr2 * v * r2 + u * 3.0 * rho2 * dr2 * r2 + u * v * dr2);
    }
    gx[0] += (2.0 * rho2 * r2 - rho1) * psi1;
    gx[1] += (2.0 * rho2 * r2 - rho1) * psi2;
    let gp = [
        (2.0 * l + rho) * (-y) - psi2,
        (2.0 * l + rho) * x + psi1,
        0.0,
    ];
    (value, PhaseGradient { x: gx, p: gp })
}

/// Which integral of the pair to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegralKind {
    X1,
    X2,
}

fn hamiltonian_of(sys: CatalogSystem) -> Observable {
    let eval_sys = sys;
    Observable::new(
        "H",
        move |s: &PhaseState| {
            let jets = eval_sys.cart_jets(&s.position)?;
            Ok(hamiltonian_parts(&jets, &s.momentum).0)
        },
        move |s: &PhaseState| {
            let jets = sys.cart_jets(&s.position)?;
            Ok(hamiltonian_parts(&jets, &s.momentum).1)
        },
    )
}

fn integral_of(sys: CatalogSystem, which: IntegralKind) -> Observable {
    match which {
        IntegralKind::X1 => {
            if let Some(p) = sys.polynomial_params() {
                return Observable::new(
                    "X1",
                    move |s: &PhaseState| Ok(x1_polynomial_direct(&p, s).0),
                    move |s: &PhaseState| Ok(x1_polynomial_direct(&p, s).1),
                );
            }
            Observable::new(
                "X1",
                move |s: &PhaseState| {
                    let jets = sys.cart_jets(&s.position)?;
                    Ok(x1_assembled(&jets, s).0)
                },
                move |s: &PhaseState| {
                    let jets = sys.cart_jets(&s.position)?;
                    Ok(x1_assembled(&jets, s).1)
                },
            )
        }
        IntegralKind::X2 => match sys.x2_form() {
            X2Form::ReducedPz => Observable::new(
                "X2",
                |s: &PhaseState| Ok(s.momentum[2]),
                |_s: &PhaseState| {
                    Ok(PhaseGradient {
                        x: [0.0; 3],
                        p: [0.0, 0.0, 1.0],
                    })
                },
            ),
            X2Form::AxialQuadratic(w3) => Observable::new(
                "X2",
                move |s: &PhaseState| {
                    let jets = sys.cart_jets(&s.position)?;
                    let paz = s.momentum[2] + jets.a[2].value();
                    Ok(paz * paz + 2.0 * w3.value(s.position.z))
                },
                move |s: &PhaseState| {
                    let jets = sys.cart_jets(&s.position)?;
                    let paz = s.momentum[2] + jets.a[2].value();
                    let ga = jets.a[2].grad();
                    let mut gx = [0.0; 3];
                    for j in 0..3 {
                        gx[j] = 2.0 * paz * ga[j];
                    }
                    gx[2] += 2.0 * w3.jet1(s.position.z).derivative(1);
                    Ok(PhaseGradient {
                        x: gx,
                        p: [0.0, 0.0, 2.0 * paz],
                    })
                },
            ),
        },
    }
}

/// H(x, p) = ½|p + A|² + W as an observable with analytic gradients. The
/// ħ² correction to W is switched off: this is the classical Hamiltonian.
pub fn hamiltonian_observable(system: &CatalogSystem) -> Observable {
    hamiltonian_of(system.with_quantum_correction(false))
}

/// The requested integral of motion as an observable with analytic
/// gradients, classical (correction-free) lower-order terms.
pub fn integral_observable(system: &CatalogSystem, which: IntegralKind) -> Observable {
    integral_of(system.with_quantum_correction(false), which)
}

/// Canonical right-hand side: ẋ_j = p_j + A_j, ṗ_j = −Σ_k p^A_k ∂_j A_k − ∂_j W.
fn canonical_rhs(a: &[Jet3; 3], w: &Jet3, p: &[f64; 3]) -> ([f64; 3], [f64; 3]) {
    let pa = covariant_momentum(a, p);
    let ga = [a[0].grad(), a[1].grad(), a[2].grad()];
    let gw = w.grad();
    let mut pdot = [0.0; 3];
    for j in 0..3 {
        pdot[j] = -gw[j];
        for k in 0..3 {
            pdot[j] -= pa[k] * ga[k][j];
        }
    }
    (pa, pdot)
}

/// Hamilton's equations for a catalog system (classical potential) as a
/// phase-space vector field returning (ẋ, ṗ).
pub fn equations_of_motion(
    system: &CatalogSystem,
) -> impl Fn(&PhaseState) -> Result<([f64; 3], [f64; 3])> {
    let sys = system.with_quantum_correction(false);
    move |s: &PhaseState| {
        let jets = sys.cart_jets(&s.position)?;
        Ok(canonical_rhs(&jets.a, &jets.w, &s.momentum))
    }
}

/// Oracle producing Cartesian gauge jets and the potential jet at a point
/// (first partials required).
pub type FieldProvider<'a> = &'a dyn Fn(&CartPoint) -> Result<([Jet3; 3], Jet3)>;

/// Integrate the canonical equations for arbitrary (A, W) jets, recording the
/// state at each requested time. Persistent axis-exclusion failures surface
/// as [`Error::AxisApproach`].
pub fn integrate_states(
    fields: FieldProvider,
    initial: &PhaseState,
    ts: &[f64],
    opts: &OdeOptions,
) -> Result<Vec<PhaseState>> {
    let axis_r: Cell<Option<f64>> = Cell::new(None);
    let mut rhs = |_t: f64, y: &[f64; 6]| -> Result<[f64; 6]> {
        let pos = CartPoint {
            x: y[0],
            y: y[1],
            z: y[2],
        };
        let (a, w) = fields(&pos).inspect_err(|e| {
            if let Error::AxisPoint { r, .. } = e {
                axis_r.set(Some(*r));
            }
        })?;
        let (xdot, pdot) = canonical_rhs(&a, &w, &[y[3], y[4], y[5]]);
        Ok([xdot[0], xdot[1], xdot[2], pdot[0], pdot[1], pdot[2]])
    };
    let y0 = [
        initial.position.x,
        initial.position.y,
        initial.position.z,
        initial.momentum[0],
        initial.momentum[1],
        initial.momentum[2],
    ];
    match ode::sample_path(&mut rhs, y0, ts, opts) {
        Ok(rows) => Ok(rows
            .into_iter()
            .map(|y| PhaseState {
                position: CartPoint {
                    x: y[0],
                    y: y[1],
                    z: y[2],
                },
                momentum: [y[3], y[4], y[5]],
            })
            .collect()),
        Err(Error::StepFailure { t, .. }) if axis_r.get().is_some() => Err(Error::AxisApproach {
            t,
            r: axis_r.get().unwrap(),
        }),
        Err(e) => Err(e),
    }
}

/// A sampled trajectory with the three conserved quantities along it.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub t: Vec<f64>,
    pub states: Vec<PhaseState>,
    pub h: Vec<f64>,
    pub x1: Vec<f64>,
    pub x2: Vec<f64>,
}

fn rel_drift(track: &[f64], i: usize) -> f64 {
    (track[i] - track[0]).abs() / track[0].abs().max(1.0)
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// Relative drifts (|v_i − v_0| / max(1, |v_0|)) of (H, X₁, X₂) at row i.
    pub fn drift_at(&self, i: usize) -> [f64; 3] {
        [
            rel_drift(&self.h, i),
            rel_drift(&self.x1, i),
            rel_drift(&self.x2, i),
        ]
    }

    /// Worst relative drift of each conserved quantity over the whole record.
    pub fn max_drifts(&self) -> [f64; 3] {
        let mut out = [0.0f64; 3];
        for i in 0..self.len() {
            let d = self.drift_at(i);
            for k in 0..3 {
                out[k] = out[k].max(d[k]);
            }
        }
        out
    }
}

/// Integrate a catalog system from `initial` to `t_end`, recording
/// (t, state, H, X₁, X₂) at `samples` uniformly spaced times.
pub fn integrate_trajectory(
    system: &CatalogSystem,
    initial: &PhaseState,
    t_end: f64,
    samples: usize,
    opts: &OdeOptions,
) -> Result<Trajectory> {
    let sys = system.with_quantum_correction(false);
    let provider = move |p: &CartPoint| sys.cart_jets(p).map(|j| (j.a, j.w));
    let n = samples.max(2);
    let ts: Vec<f64> = (0..n)
        .map(|i| t_end * i as f64 / (n - 1) as f64)
        .collect();
    let states = integrate_states(&provider, initial, &ts, opts)?;

    let h_obs = hamiltonian_of(sys);
    let x1_obs = integral_of(sys, IntegralKind::X1);
    let x2_obs = integral_of(sys, IntegralKind::X2);
    let mut h = Vec::with_capacity(n);
    let mut x1 = Vec::with_capacity(n);
    let mut x2 = Vec::with_capacity(n);
    for s in &states {
        h.push(h_obs.value(s)?);
        x1.push(x1_obs.value(s)?);
        x2.push(x2_obs.value(s)?);
    }
    Ok(Trajectory {
        t: ts,
        states,
        h,
        x1,
        x2,
    })
}

/// {f, g} = Σ_j (∂f/∂x_j ∂g/∂p_j − ∂f/∂p_j ∂g/∂x_j).
pub fn poisson_bracket(f: &Observable, g: &Observable, at: &PhaseState) -> Result<f64> {
    let gf = f.gradient(at)?;
    let gg = g.gradient(at)?;
    let mut sum = 0.0;
    for j in 0..3 {
        sum += gf.x[j] * gg.p[j] - gf.p[j] * gg.x[j];
    }
    Ok(sum)
}

/// Size of a bracket's natural scale: 1 + ‖∇f‖·‖∇g‖, for relative residuals.
pub fn bracket_scale(f: &Observable, g: &Observable, at: &PhaseState) -> Result<f64> {
    let norm = |gr: &PhaseGradient| -> f64 {
        gr.x.iter()
            .chain(gr.p.iter())
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt()
    };
    Ok(1.0 + norm(&f.gradient(at)?) * norm(&g.gradient(at)?))
}

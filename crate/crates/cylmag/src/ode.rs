//! Adaptive explicit Runge–Kutta integration (Dormand–Prince 5(4) with FSAL)
//! shared by the radial-profile initial-value solver and the classical
//! trajectory integrator.
//!
//! The right-hand side is fallible so integrators can abort cleanly when a
//! trajectory runs into the coordinate axis or a profile zero.

use crate::error::{Error, Result};

/// Tolerances and step-size limits for [`integrate`].
#[derive(Debug, Clone, Copy)]
pub struct OdeOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub h_init: f64,
    pub h_min: f64,
    pub h_max: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            h_init: 1e-3,
            h_min: 1e-12,
            h_max: 0.1,
            max_steps: 10_000_000,
        }
    }
}

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// 4th-order embedded weights (the 5th-order weights are row 7 of `A`).
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Integrate y′ = f(t, y) from `t0` to `t_end` (either direction), invoking
/// `observer` after every accepted step (including the initial state).
/// Returns the final state.
pub fn integrate<const N: usize>(
    f: &mut dyn FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    opts: &OdeOptions,
    observer: &mut dyn FnMut(f64, &[f64; N]),
) -> Result<[f64; N]> {
    let dir = if t_end >= t0 { 1.0 } else { -1.0 };
    let mut t = t0;
    let mut y = y0;
    let mut h = opts.h_init.min(opts.h_max).max(opts.h_min) * dir;
    let mut k1 = f(t, &y)?;
    observer(t, &y);

    let mut steps = 0usize;
    while (t_end - t) * dir > 0.0 {
        steps += 1;
        if steps > opts.max_steps {
            return Err(Error::StepFailure { t, h });
        }
        if h.abs() > (t_end - t).abs() {
            h = t_end - t;
        }

        // Stage 7 (index 6) is evaluated at the 5th-order solution itself
        // (FSAL), so `ys` of the final stage is the step result.
        let mut k = [[0.0; N]; 7];
        k[0] = k1;
        let mut y5 = y;
        let mut failed_rhs = false;
        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s][j];
                if a != 0.0 {
                    for i in 0..N {
                        ys[i] += h * a * kj[i];
                    }
                }
            }
            match f(t + C[s] * h, &ys) {
                Ok(v) => {
                    k[s] = v;
                    if s == 6 {
                        y5 = ys;
                    }
                }
                Err(_) => {
                    // Stage left the admissible region: retry with a
                    // smaller step before giving up.
                    failed_rhs = true;
                    break;
                }
            }
        }

        if failed_rhs {
            h *= 0.25;
            if h.abs() < opts.h_min {
                return Err(Error::StepFailure { t, h });
            }
            continue;
        }

        // Embedded 4th-order error estimate.
        let mut err4 = [0.0; N];
        for s in 0..7 {
            let d = if s == 6 { 0.0 } else { A[6][s] } - B4[s];
            if d != 0.0 {
                for i in 0..N {
                    err4[i] += h * d * k[s][i];
                }
            }
        }

        let mut err = 0.0;
        for i in 0..N {
            let sc = opts.abs_tol + opts.rel_tol * y[i].abs().max(y5[i].abs());
            let e = err4[i] / sc;
            err += e * e;
        }
        err = (err / N as f64).sqrt();

        if err <= 1.0 {
            t += h;
            y = y5;
            k1 = k[6];
            observer(t, &y);
        }

        let fac = if err > 0.0 {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h = (h * fac).clamp(-opts.h_max, opts.h_max);
        if h.abs() < opts.h_min {
            if (t_end - t) * dir <= 0.0 {
                break;
            }
            return Err(Error::StepFailure { t, h });
        }
    }
    Ok(y)
}

/// Integrate and record the state at each requested time (strictly monotone
/// `ts`, first entry = t0). Steps are clipped to land exactly on samples.
pub fn sample_path<const N: usize>(
    f: &mut dyn FnMut(f64, &[f64; N]) -> Result<[f64; N]>,
    y0: [f64; N],
    ts: &[f64],
    opts: &OdeOptions,
) -> Result<Vec<[f64; N]>> {
    let mut out = Vec::with_capacity(ts.len());
    if ts.is_empty() {
        return Ok(out);
    }
    out.push(y0);
    let mut y = y0;
    for w in ts.windows(2) {
        y = integrate(f, w[0], y, w[1], opts, &mut |_, _| {})?;
        out.push(y);
    }
    Ok(out)
}

//! Generic gauge construction: given any Z-independent magnetic field
//! (as cylindrical jets), build a vector potential A with A_r = 0 by radial
//! and angular line integrals,
//!
//!   A_φ(r, φ) = ∫_{r₀}^{r} B^Z(ρ, φ) dρ,
//!   A_Z(r, φ) = ∫_{φ₀}^{φ} B^r(r₀, φ′) dφ′ − ∫_{r₀}^{r} B^φ(ρ, φ) dρ,
//!
//! which satisfies dA = B exactly whenever the coordinate divergence
//! ∂_r B^r + ∂_φ B^φ + ∂_Z B^Z vanishes. The result is returned as jets:
//! r-derivatives come from the fundamental theorem of calculus (no
//! quadrature error), pure φ-derivatives from quadratures of the field
//! jets' φ-partials.
//!
//! The catalog systems ship closed-form gauges; this construction exists to
//! cross-validate them and to handle fields specified only through the
//! auxiliary profiles.

use crate::error::{Error, Result};
use crate::geometry::CylPoint;
use crate::jet::{pos, Jet3, ORDER};

/// Absolute tolerance for the adaptive quadratures.
pub const DEFAULT_QUAD_TOL: f64 = 1e-11;

/// Adaptive Simpson over a vector integrand with max-norm error control.
fn simpson_vec<const K: usize>(
    f: &dyn Fn(f64) -> Result<[f64; K]>,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<[f64; K]> {
    fn add<const K: usize>(x: [f64; K], y: [f64; K], wx: f64, wy: f64) -> [f64; K] {
        let mut out = [0.0; K];
        for i in 0..K {
            out[i] = wx * x[i] + wy * y[i];
        }
        out
    }

    #[allow(clippy::too_many_arguments)]
    fn recurse<const K: usize>(
        f: &dyn Fn(f64) -> Result<[f64; K]>,
        a: f64,
        fa: [f64; K],
        b: f64,
        fb: [f64; K],
        fm: [f64; K],
        whole: [f64; K],
        tol: f64,
        depth: u32,
    ) -> Result<[f64; K]> {
        let m = 0.5 * (a + b);
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm)?;
        let frm = f(rm)?;
        let h6 = (b - a) / 12.0;
        let mut left = [0.0; K];
        let mut right = [0.0; K];
        for i in 0..K {
            left[i] = h6 * (fa[i] + 4.0 * flm[i] + fm[i]);
            right[i] = h6 * (fm[i] + 4.0 * frm[i] + fb[i]);
        }
        let mut err = 0.0f64;
        for i in 0..K {
            err = err.max((left[i] + right[i] - whole[i]).abs());
        }
        if err < 15.0 * tol || depth >= 30 {
            let mut out = [0.0; K];
            for i in 0..K {
                out[i] = left[i] + right[i] + (left[i] + right[i] - whole[i]) / 15.0;
            }
            return Ok(out);
        }
        let l = recurse(f, a, fa, m, fm, flm, left, 0.5 * tol, depth + 1)?;
        let r = recurse(f, m, fm, b, fb, frm, right, 0.5 * tol, depth + 1)?;
        Ok(add(l, r, 1.0, 1.0))
    }

    if a == b {
        return Ok([0.0; K]);
    }
    let fa = f(a)?;
    let fb = f(b)?;
    let fm = f(0.5 * (a + b))?;
    let h6 = (b - a) / 6.0;
    let mut whole = [0.0; K];
    for i in 0..K {
        whole[i] = h6 * (fa[i] + 4.0 * fm[i] + fb[i]);
    }
    recurse(f, a, fa, b, fb, fm, whole, tol, 0)
}

/// Build gauge jets (A_r, A_φ, A_Z) = (0, ·, ·) at `at` for the
/// Z-independent field provided by `field` (cylindrical jets at arbitrary
/// points, Z-coordinate ignored). `r_ref`/`phi_ref` fix the integration
/// base lines.
pub fn gauge_for_field(
    field: &dyn Fn(&CylPoint) -> Result<[Jet3; 3]>,
    at: &CylPoint,
    r_ref: f64,
    phi_ref: f64,
    quad_tol: f64,
) -> Result<[Jet3; 3]> {
    if r_ref <= 0.0 {
        return Err(Error::InvalidParams(format!(
            "gauge base radius must be positive, got {r_ref}"
        )));
    }
    let here = field(at)?;
    // Z-independence guard: any z-coefficient in the field jets breaks the
    // construction.
    for (i, b) in here.iter().enumerate() {
        for n in 0..crate::jet::NCOEF {
            if crate::jet::MIDX[n][2] > 0 && b.c[n].abs() > 1e-10 {
                return Err(Error::GaugeInconsistency(format!(
                    "field component {i} depends on Z (coefficient {})",
                    b.c[n]
                )));
            }
        }
    }

    let zslice = |r: f64| CylPoint {
        r,
        phi: at.phi,
        z: at.z,
    };

    // Radial quadratures: ∂_φ^j B^Z and ∂_φ^j B^φ along ρ ∈ [r_ref, r].
    let radial = |rho: f64| -> Result<[f64; 2 * (ORDER + 1)]> {
        let b = field(&zslice(rho))?;
        let mut out = [0.0; 2 * (ORDER + 1)];
        for j in 0..=ORDER {
            out[j] = b[2].partial([0, j as u8, 0]);
            out[ORDER + 1 + j] = b[1].partial([0, j as u8, 0]);
        }
        Ok(out)
    };
    let rad = simpson_vec(&radial, r_ref, at.r, quad_tol)?;

    // Angular quadrature: B^r along the base circle r = r_ref.
    let angular = |phi: f64| -> Result<[f64; 1]> {
        let b = field(&CylPoint {
            r: r_ref,
            phi,
            z: at.z,
        })?;
        Ok([b[0].value()])
    };
    let ang = simpson_vec(&angular, phi_ref, at.phi, quad_tol)?;
    let b_ref = field(&CylPoint {
        r: r_ref,
        phi: at.phi,
        z: at.z,
    })?;

    let min_valid = here
        .iter()
        .chain(b_ref.iter())
        .map(|b| b.valid)
        .min()
        .unwrap();

    // Assemble A_φ: ∂_r^i ∂_φ^j A_φ = ∂_r^{i−1} ∂_φ^j B^Z for i ≥ 1, and the
    // quadrature values for i = 0.
    let mut a_phi = Jet3::zero();
    let mut a_z = Jet3::zero();
    for i in 0..=ORDER as u8 {
        for j in 0..=(ORDER as u8 - i) {
            let fact = crate::jet::mi_factorial([i, j, 0]);
            let (vphi, vz) = if i == 0 {
                let vphi = rad[j as usize];
                let vz = if j == 0 {
                    ang[0] - rad[ORDER + 1]
                } else {
                    b_ref[0].partial([0, j - 1, 0]) - rad[ORDER + 1 + j as usize]
                };
                (vphi, vz)
            } else {
                (
                    here[2].partial([i - 1, j, 0]),
                    -here[1].partial([i - 1, j, 0]),
                )
            };
            a_phi.c[pos([i, j, 0])] = vphi / fact;
            a_z.c[pos([i, j, 0])] = vz / fact;
        }
    }
    a_phi.valid = (min_valid + 1).min(ORDER as u8);
    a_z.valid = a_phi.valid;
    Ok([Jet3::zero(), a_phi, a_z])
}

//! Charts and component transformations between Cartesian (x, y, z) and
//! cylindrical (r, φ, Z) coordinates: points, covectors (momenta, the gauge
//! 1-form), vectors (the s-coefficients of the integrals), and magnetic-field
//! 2-form components.
//!
//! Conventions: x = r cos φ, y = r sin φ, z = Z. Covector components pair
//! with vector components chart-independently, Σ a_i v^i; the 2-form
//! components transform so that B^z = B^Z / r (coordinate, not orthonormal,
//! components throughout).

use crate::error::{Error, Result};
use crate::jet::{phi_jet, r_jet, Jet3, MIDX, ORDER};

/// Default axis-exclusion radius. Catalog fields carry 1/r² … 1/r⁵ factors,
/// so nothing is evaluated closer to the axis than this.
pub const DEFAULT_R_MIN: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl CartPoint {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        CartPoint { x, y, z }
    }

    pub fn r(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

/// Cylindrical point with φ normalized to [0, 2π) and r > 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylPoint {
    pub r: f64,
    pub phi: f64,
    /// Axial coordinate Z (equal to Cartesian z).
    pub z: f64,
}

impl CylPoint {
    /// Construct with φ normalized into [0, 2π).
    pub fn new(r: f64, phi: f64, z: f64) -> Result<Self> {
        if !(r > 0.0) {
            return Err(Error::AxisPoint { r, r_min: 0.0 });
        }
        let tau = 2.0 * std::f64::consts::PI;
        let mut p = phi % tau;
        if p < 0.0 {
            p += tau;
        }
        Ok(CylPoint { r, phi: p, z })
    }
}

/// Covector components in the cylindrical chart (a_r, a_φ, a_Z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylCovector {
    pub r: f64,
    pub phi: f64,
    pub z: f64,
}

/// Covector components in the Cartesian chart (a_x, a_y, a_z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartCovector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Vector components in the cylindrical chart (v^r, v^φ, v^Z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylVector {
    pub r: f64,
    pub phi: f64,
    pub z: f64,
}

/// Vector components in the Cartesian chart (v^x, v^y, v^z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Magnetic 2-form components in the cylindrical chart (B^r, B^φ, B^Z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylTwoForm {
    pub r: f64,
    pub phi: f64,
    pub z: f64,
}

/// Magnetic 2-form components in the Cartesian chart (B^x, B^y, B^z).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CartTwoForm {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Cartesian → cylindrical chart map with the default axis exclusion.
pub fn cart_to_cyl(p: &CartPoint) -> Result<CylPoint> {
    cart_to_cyl_with(p, DEFAULT_R_MIN)
}

/// Cartesian → cylindrical chart map with a caller-chosen axis exclusion.
pub fn cart_to_cyl_with(p: &CartPoint, r_min: f64) -> Result<CylPoint> {
    let r = p.x.hypot(p.y);
    if r < r_min {
        return Err(Error::AxisPoint { r, r_min });
    }
    let mut phi = p.y.atan2(p.x);
    if phi < 0.0 {
        phi += 2.0 * std::f64::consts::PI;
    }
    Ok(CylPoint { r, phi, z: p.z })
}

/// Cylindrical → Cartesian chart map.
pub fn cyl_to_cart(p: &CylPoint) -> CartPoint {
    CartPoint {
        x: p.r * p.phi.cos(),
        y: p.r * p.phi.sin(),
        z: p.z,
    }
}

/// Covector (momentum / 1-form) components, cylindrical → Cartesian:
/// a_x = cos φ · a_r − (sin φ / r) a_φ, a_y = sin φ · a_r + (cos φ / r) a_φ,
/// a_z = a_Z.
pub fn covector_cyl_to_cart(a: &CylCovector, at: &CylPoint) -> CartCovector {
    let (s, c) = at.phi.sin_cos();
    CartCovector {
        x: c * a.r - s / at.r * a.phi,
        y: s * a.r + c / at.r * a.phi,
        z: a.z,
    }
}

/// Vector components, cylindrical → Cartesian (contravariant counterpart of
/// `covector_cyl_to_cart`, fixed by chart-invariance of the pairing Σ a_i v^i):
/// v^x = cos φ · v^r − r sin φ · v^φ, v^y = sin φ · v^r + r cos φ · v^φ,
/// v^z = v^Z.
pub fn vector_cyl_to_cart(v: &CylVector, at: &CylPoint) -> CartVector {
    let (s, c) = at.phi.sin_cos();
    CartVector {
        x: c * v.r - at.r * s * v.phi,
        y: s * v.r + at.r * c * v.phi,
        z: v.z,
    }
}

/// Magnetic 2-form components, cylindrical → Cartesian:
/// B^x = (cos φ / r) B^r − sin φ · B^φ, B^y = (sin φ / r) B^r + cos φ · B^φ,
/// B^z = B^Z / r.
pub fn two_form_cyl_to_cart(b: &CylTwoForm, at: &CylPoint) -> CartTwoForm {
    let (s, c) = at.phi.sin_cos();
    CartTwoForm {
        x: c / at.r * b.r - s * b.phi,
        y: s / at.r * b.r + c * b.phi,
        z: b.z / at.r,
    }
}

/// Pairing Σ a_i v^i in the cylindrical chart.
pub fn pairing_cyl(a: &CylCovector, v: &CylVector) -> f64 {
    a.r * v.r + a.phi * v.phi + a.z * v.z
}

/// Pairing Σ a_i v^i in the Cartesian chart.
pub fn pairing_cart(a: &CartCovector, v: &CartVector) -> f64 {
    a.x * v.x + a.y * v.y + a.z * v.z
}

/// Jets of the cylindrical coordinates (r, φ, Z) as functions of the
/// Cartesian coordinates, at a Cartesian base point.
pub fn cyl_coordinate_jets(p: &CartPoint) -> (Jet3, Jet3, Jet3) {
    (r_jet(p.x, p.y), phi_jet(p.x, p.y), Jet3::var(2, p.z))
}

/// Recenter a scalar jet expressed in cylindrical variables (Taylor in
/// (r, φ, Z)) into a Cartesian jet at the matching Cartesian point, by
/// composing with the jets of r(x, y), φ(x, y), Z(z).
///
/// `w` must be based at exactly the cylindrical image of `at` (same
/// normalized φ).
pub fn scalar_cyl_jet_to_cart(w: &Jet3, at: &CartPoint) -> Jet3 {
    let (rj, pj, zj) = cyl_coordinate_jets(at);
    let mut dr = rj;
    dr.c[0] = 0.0;
    let mut dp = pj;
    dp.c[0] = 0.0;
    let mut dz = zj;
    dz.c[0] = 0.0;

    // Cached powers of the centered inner jets.
    let one = Jet3::constant(1.0);
    let mut rp = [one; ORDER + 1];
    let mut pp = [one; ORDER + 1];
    let mut zp = [one; ORDER + 1];
    for k in 1..=ORDER {
        rp[k] = rp[k - 1].mul(&dr);
        pp[k] = pp[k - 1].mul(&dp);
        zp[k] = zp[k - 1].mul(&dz);
    }

    let mut out = Jet3::zero();
    for (n, m) in MIDX.iter().enumerate() {
        if w.c[n] == 0.0 {
            continue;
        }
        let term = rp[m[0] as usize]
            .mul(&pp[m[1] as usize])
            .mul(&zp[m[2] as usize]);
        out = out.add(&term.scale(w.c[n]));
    }
    out.valid = out.valid.min(w.valid);
    out
}

/// Cartesian jets of covector components, given cylindrical jets of
/// (a_r, a_φ, a_Z) based at the cylindrical image of `at`.
pub fn covector_jets_cyl_to_cart(a_cyl: &[Jet3; 3], at: &CartPoint) -> [Jet3; 3] {
    let ar = scalar_cyl_jet_to_cart(&a_cyl[0], at);
    let ap = scalar_cyl_jet_to_cart(&a_cyl[1], at);
    let az = scalar_cyl_jet_to_cart(&a_cyl[2], at);
    let pj = phi_jet(at.x, at.y);
    let (c, s) = (pj.cos(), pj.sin());
    let ri = r_jet(at.x, at.y).recip();
    [
        c.mul(&ar).sub(&s.mul(&ri).mul(&ap)),
        s.mul(&ar).add(&c.mul(&ri).mul(&ap)),
        az,
    ]
}

/// Cartesian jets of vector components, given cylindrical jets of
/// (v^r, v^φ, v^Z) based at the cylindrical image of `at`.
pub fn vector_jets_cyl_to_cart(v_cyl: &[Jet3; 3], at: &CartPoint) -> [Jet3; 3] {
    let vr = scalar_cyl_jet_to_cart(&v_cyl[0], at);
    let vp = scalar_cyl_jet_to_cart(&v_cyl[1], at);
    let vz = scalar_cyl_jet_to_cart(&v_cyl[2], at);
    let pj = phi_jet(at.x, at.y);
    let (c, s) = (pj.cos(), pj.sin());
    let rj = r_jet(at.x, at.y);
    [
        c.mul(&vr).sub(&rj.mul(&s).mul(&vp)),
        s.mul(&vr).add(&rj.mul(&c).mul(&vp)),
        vz,
    ]
}

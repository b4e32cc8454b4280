//! Truncated Taylor jets: exact mixed partial derivatives through total
//! degree 4, in one and three variables, plus a complex pair for operator
//! coefficients.
//!
//! A `Jet3` stores the Taylor coefficients c_m = (∂^m f)(x₀)/m! of a smooth
//! function at a base point, for all multi-indices m with |m| ≤ 4. Arithmetic
//! on jets (sum, product, composition with univariate functions) propagates
//! derivatives exactly, so every coefficient oracle in this crate is analytic
//! — no finite differences appear anywhere on the main verification paths.
//!
//! Each jet carries a validity order: the largest total degree whose
//! coefficients are trustworthy. Differentiating a jet (`shift`) lowers it;
//! products and sums take the minimum of their operands'.

use num_complex::Complex64;

/// Maximum total degree carried by a jet.
pub const ORDER: usize = 4;
/// Number of trivariate multi-indices with |m| <= ORDER.
pub const NCOEF: usize = 35;

/// Graded list of multi-indices (degree-major, then reverse-lex within a
/// degree). Index 0 is (0,0,0); indices 1..=3 are the first partials.
pub const MIDX: [[u8; 3]; NCOEF] = build_midx();

const fn build_midx() -> [[u8; 3]; NCOEF] {
    let mut out = [[0u8; 3]; NCOEF];
    let mut n = 0;
    let mut d = 0usize;
    while d <= ORDER {
        let mut i = d as i32;
        while i >= 0 {
            let mut j = (d as i32) - i;
            while j >= 0 {
                let k = (d as i32) - i - j;
                out[n] = [i as u8, j as u8, k as u8];
                n += 1;
                j -= 1;
            }
            i -= 1;
        }
        d += 1;
    }
    out
}

/// Lookup from multi-index (i,j,k) to its position in `MIDX`.
const POS: [[[u8; 5]; 5]; 5] = build_pos();

const fn build_pos() -> [[[u8; 5]; 5]; 5] {
    let mut out = [[[u8::MAX; 5]; 5]; 5];
    let mut n = 0;
    while n < NCOEF {
        let m = MIDX[n];
        out[m[0] as usize][m[1] as usize][m[2] as usize] = n as u8;
        n += 1;
    }
    out
}

/// Position of multi-index `m` in the coefficient array.
#[inline]
pub fn pos(m: [u8; 3]) -> usize {
    POS[m[0] as usize][m[1] as usize][m[2] as usize] as usize
}

/// Total degree of a multi-index.
#[inline]
pub fn degree(m: [u8; 3]) -> usize {
    (m[0] + m[1] + m[2]) as usize
}

const FACT: [f64; 5] = [1.0, 1.0, 2.0, 6.0, 24.0];

/// m! = m₁! m₂! m₃!
#[inline]
pub fn mi_factorial(m: [u8; 3]) -> f64 {
    FACT[m[0] as usize] * FACT[m[1] as usize] * FACT[m[2] as usize]
}

/// Number of (a, b) multi-index pairs with |a| + |b| <= ORDER.
const NPROD: usize = count_products();

const fn count_products() -> usize {
    let mut n = 0;
    let mut a = 0;
    while a < NCOEF {
        let mut b = 0;
        while b < NCOEF {
            if degree_c(MIDX[a]) + degree_c(MIDX[b]) <= ORDER {
                n += 1;
            }
            b += 1;
        }
        a += 1;
    }
    n
}

const fn degree_c(m: [u8; 3]) -> usize {
    (m[0] + m[1] + m[2]) as usize
}

/// Precomputed truncated-product table: (index of a, index of b, index of a+b).
const PRODUCTS: [(u8, u8, u8); NPROD] = build_products();

const fn build_products() -> [(u8, u8, u8); NPROD] {
    let mut out = [(0u8, 0u8, 0u8); NPROD];
    let mut n = 0;
    let mut a = 0;
    while a < NCOEF {
        let ma = MIDX[a];
        let mut b = 0;
        while b < NCOEF {
            let mb = MIDX[b];
            if degree_c(ma) + degree_c(mb) <= ORDER {
                let ms = [ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]];
                out[n] = (
                    a as u8,
                    b as u8,
                    POS[ms[0] as usize][ms[1] as usize][ms[2] as usize],
                );
                n += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
}

// ---------------------------------------------------------------------------
// Univariate jets
// ---------------------------------------------------------------------------

/// Univariate Taylor jet: coefficients t_k = f^{(k)}(x₀)/k!, k = 0..=4.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Jet1 {
    pub c: [f64; ORDER + 1],
}

impl Jet1 {
    pub fn constant(v: f64) -> Self {
        let mut c = [0.0; ORDER + 1];
        c[0] = v;
        Jet1 { c }
    }

    /// The identity function at base point `x`.
    pub fn var(x: f64) -> Self {
        let mut c = [0.0; ORDER + 1];
        c[0] = x;
        c[1] = 1.0;
        Jet1 { c }
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// k-th derivative value, k <= 4.
    #[inline]
    pub fn derivative(&self, k: usize) -> f64 {
        self.c[k] * FACT[k]
    }

    /// Jet of the derivative f′. One order shorter than `self`: the top
    /// coefficient is unavailable and set to zero, so consumers tracking
    /// validity must decrement it per application.
    pub fn d(&self) -> Jet1 {
        let mut c = [0.0; ORDER + 1];
        for k in 0..ORDER {
            c[k] = self.c[k + 1] * (k + 1) as f64;
        }
        Jet1 { c }
    }

    pub fn add(&self, o: &Jet1) -> Jet1 {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(o.c) {
            *a += b;
        }
        Jet1 { c }
    }

    pub fn sub(&self, o: &Jet1) -> Jet1 {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(o.c) {
            *a -= b;
        }
        Jet1 { c }
    }

    pub fn neg(&self) -> Jet1 {
        let mut c = self.c;
        for a in c.iter_mut() {
            *a = -*a;
        }
        Jet1 { c }
    }

    pub fn scale(&self, s: f64) -> Jet1 {
        let mut c = self.c;
        for a in c.iter_mut() {
            *a *= s;
        }
        Jet1 { c }
    }

    pub fn add_scalar(&self, s: f64) -> Jet1 {
        let mut c = self.c;
        c[0] += s;
        Jet1 { c }
    }

    pub fn mul(&self, o: &Jet1) -> Jet1 {
        let mut c = [0.0; ORDER + 1];
        for i in 0..=ORDER {
            for j in 0..=(ORDER - i) {
                c[i + j] += self.c[i] * o.c[j];
            }
        }
        Jet1 { c }
    }

    /// Compose with a univariate function given by its Taylor coefficients at
    /// `self.value()`.
    pub fn compose(&self, t: &[f64; ORDER + 1]) -> Jet1 {
        let mut u = *self;
        u.c[0] = 0.0;
        let mut out = Jet1::constant(t[0]);
        let mut p = Jet1::constant(1.0);
        for &tk in t.iter().skip(1) {
            p = p.mul(&u);
            out = out.add(&p.scale(tk));
        }
        out
    }

    pub fn recip(&self) -> Jet1 {
        let u = self.c[0];
        self.compose(&[
            1.0 / u,
            -1.0 / (u * u),
            1.0 / (u * u * u),
            -1.0 / (u * u * u * u),
            1.0 / (u * u * u * u * u),
        ])
    }

    pub fn div(&self, o: &Jet1) -> Jet1 {
        self.mul(&o.recip())
    }

    pub fn sqrt(&self) -> Jet1 {
        let u = self.c[0];
        let s = u.sqrt();
        self.compose(&[
            s,
            0.5 * s / u,
            -s / (8.0 * u * u),
            s / (16.0 * u * u * u),
            -5.0 * s / (128.0 * u * u * u * u),
        ])
    }

    pub fn sin(&self) -> Jet1 {
        let (s, c) = self.c[0].sin_cos();
        self.compose(&[s, c, -s / 2.0, -c / 6.0, s / 24.0])
    }

    pub fn cos(&self) -> Jet1 {
        let (s, c) = self.c[0].sin_cos();
        self.compose(&[c, -s, -c / 2.0, s / 6.0, c / 24.0])
    }

    pub fn exp(&self) -> Jet1 {
        let e = self.c[0].exp();
        self.compose(&[e, e, e / 2.0, e / 6.0, e / 24.0])
    }

    pub fn powi(&self, n: i32) -> Jet1 {
        if n < 0 {
            return self.recip().powi(-n);
        }
        let mut out = Jet1::constant(1.0);
        let mut base = *self;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Trivariate jets
// ---------------------------------------------------------------------------

/// Trivariate Taylor jet at a base point, with validity tracking.
#[derive(Debug, Clone, Copy)]
pub struct Jet3 {
    pub c: [f64; NCOEF],
    /// Coefficients of total degree <= valid are exact.
    pub valid: u8,
}

impl Jet3 {
    pub fn zero() -> Self {
        Jet3 {
            c: [0.0; NCOEF],
            valid: ORDER as u8,
        }
    }

    pub fn constant(v: f64) -> Self {
        let mut j = Jet3::zero();
        j.c[0] = v;
        j
    }

    /// Coordinate function for `axis` (0, 1, 2) with value `x` at the base point.
    pub fn var(axis: usize, x: f64) -> Self {
        let mut j = Jet3::zero();
        j.c[0] = x;
        let mut m = [0u8; 3];
        m[axis] = 1;
        j.c[pos(m)] = 1.0;
        j
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// Mixed partial ∂^m f at the base point. Requires |m| within validity.
    #[inline]
    pub fn partial(&self, m: [u8; 3]) -> f64 {
        debug_assert!(
            degree(m) <= self.valid as usize,
            "partial of degree {} requested from jet valid to {}",
            degree(m),
            self.valid
        );
        self.c[pos(m)] * mi_factorial(m)
    }

    /// Gradient (first partials).
    pub fn grad(&self) -> [f64; 3] {
        [
            self.partial([1, 0, 0]),
            self.partial([0, 1, 0]),
            self.partial([0, 0, 1]),
        ]
    }

    pub fn add(&self, o: &Jet3) -> Jet3 {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(o.c) {
            *a += b;
        }
        Jet3 {
            c,
            valid: self.valid.min(o.valid),
        }
    }

    pub fn sub(&self, o: &Jet3) -> Jet3 {
        let mut c = self.c;
        for (a, b) in c.iter_mut().zip(o.c) {
            *a -= b;
        }
        Jet3 {
            c,
            valid: self.valid.min(o.valid),
        }
    }

    pub fn neg(&self) -> Jet3 {
        let mut c = self.c;
        for a in c.iter_mut() {
            *a = -*a;
        }
        Jet3 {
            c,
            valid: self.valid,
        }
    }

    pub fn scale(&self, s: f64) -> Jet3 {
        let mut c = self.c;
        for a in c.iter_mut() {
            *a *= s;
        }
        Jet3 {
            c,
            valid: self.valid,
        }
    }

    pub fn add_scalar(&self, s: f64) -> Jet3 {
        let mut j = *self;
        j.c[0] += s;
        j
    }

    pub fn mul(&self, o: &Jet3) -> Jet3 {
        let mut c = [0.0; NCOEF];
        for &(a, b, out) in PRODUCTS.iter() {
            c[out as usize] += self.c[a as usize] * o.c[b as usize];
        }
        Jet3 {
            c,
            valid: self.valid.min(o.valid),
        }
    }

    /// Compose with a univariate function whose Taylor coefficients at
    /// `self.value()` are given by `outer` (e.g. a `Jet1` evaluated there).
    pub fn compose1(&self, outer: &Jet1) -> Jet3 {
        let mut u = *self;
        u.c[0] = 0.0;
        let mut out = Jet3::constant(outer.c[0]);
        out.valid = self.valid;
        let mut p = Jet3::constant(1.0);
        p.valid = self.valid;
        for &tk in outer.c.iter().skip(1) {
            p = p.mul(&u);
            out = out.add(&p.scale(tk));
        }
        out
    }

    pub fn recip(&self) -> Jet3 {
        let u = self.c[0];
        self.compose1(&Jet1 {
            c: [
                1.0 / u,
                -1.0 / (u * u),
                1.0 / (u * u * u),
                -1.0 / (u * u * u * u),
                1.0 / (u * u * u * u * u),
            ],
        })
    }

    pub fn div(&self, o: &Jet3) -> Jet3 {
        self.mul(&o.recip())
    }

    pub fn sqrt(&self) -> Jet3 {
        let u = self.c[0];
        let s = u.sqrt();
        self.compose1(&Jet1 {
            c: [
                s,
                0.5 * s / u,
                -s / (8.0 * u * u),
                s / (16.0 * u * u * u),
                -5.0 * s / (128.0 * u * u * u * u),
            ],
        })
    }

    pub fn sin(&self) -> Jet3 {
        let (s, c) = self.c[0].sin_cos();
        self.compose1(&Jet1 {
            c: [s, c, -s / 2.0, -c / 6.0, s / 24.0],
        })
    }

    pub fn cos(&self) -> Jet3 {
        let (s, c) = self.c[0].sin_cos();
        self.compose1(&Jet1 {
            c: [c, -s, -c / 2.0, s / 6.0, c / 24.0],
        })
    }

    pub fn exp(&self) -> Jet3 {
        let e = self.c[0].exp();
        self.compose1(&Jet1 {
            c: [e, e, e / 2.0, e / 6.0, e / 24.0],
        })
    }

    pub fn powi(&self, n: i32) -> Jet3 {
        if n < 0 {
            return self.recip().powi(-n);
        }
        let mut out = Jet3::constant(1.0);
        let mut base = *self;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        out
    }

    /// Jet of the derivative ∂^d f, valid to `self.valid - |d|`.
    pub fn shift(&self, d: [u8; 3]) -> Jet3 {
        let dd = degree(d);
        debug_assert!(dd <= self.valid as usize);
        let mut out = Jet3::zero();
        for (n, m) in MIDX.iter().enumerate() {
            let mm = [m[0] + d[0], m[1] + d[1], m[2] + d[2]];
            if degree(mm) <= ORDER {
                out.c[n] = self.c[pos(mm)] * mi_factorial(mm) / mi_factorial(*m);
            }
        }
        out.valid = self.valid - dd as u8;
        out
    }

    /// Σ f_i g_i for component triples.
    pub fn dot(a: &[Jet3; 3], b: &[Jet3; 3]) -> Jet3 {
        a[0].mul(&b[0]).add(&a[1].mul(&b[1])).add(&a[2].mul(&b[2]))
    }

    /// Outer product of three univariate jets f(u₁)g(u₂)h(u₃) as a trivariate
    /// jet in (u₁, u₂, u₃).
    pub fn separable(f: &Jet1, g: &Jet1, h: &Jet1) -> Jet3 {
        let mut out = Jet3::zero();
        for (n, m) in MIDX.iter().enumerate() {
            out.c[n] = f.c[m[0] as usize] * g.c[m[1] as usize] * h.c[m[2] as usize];
        }
        out
    }

    /// Embed a univariate jet along one axis of a trivariate jet.
    pub fn from_jet1(f: &Jet1, axis: usize) -> Jet3 {
        let mut out = Jet3::zero();
        for (n, m) in MIDX.iter().enumerate() {
            let others = match axis {
                0 => (m[1], m[2]),
                1 => (m[0], m[2]),
                _ => (m[0], m[1]),
            };
            if others == (0, 0) {
                out.c[n] = f.c[m[axis] as usize];
            }
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Complex jets
// ---------------------------------------------------------------------------

/// Complex-valued trivariate jet (a real pair).
#[derive(Debug, Clone, Copy)]
pub struct CJet3 {
    pub re: Jet3,
    pub im: Jet3,
}

impl CJet3 {
    pub fn zero() -> Self {
        CJet3 {
            re: Jet3::zero(),
            im: Jet3::zero(),
        }
    }

    pub fn from_real(re: Jet3) -> Self {
        CJet3 {
            re,
            im: Jet3::zero(),
        }
    }

    pub fn constant(v: Complex64) -> Self {
        CJet3 {
            re: Jet3::constant(v.re),
            im: Jet3::constant(v.im),
        }
    }

    #[inline]
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.value(), self.im.value())
    }

    pub fn partial(&self, m: [u8; 3]) -> Complex64 {
        Complex64::new(self.re.partial(m), self.im.partial(m))
    }

    #[inline]
    pub fn valid(&self) -> u8 {
        self.re.valid.min(self.im.valid)
    }

    pub fn add(&self, o: &CJet3) -> CJet3 {
        CJet3 {
            re: self.re.add(&o.re),
            im: self.im.add(&o.im),
        }
    }

    pub fn sub(&self, o: &CJet3) -> CJet3 {
        CJet3 {
            re: self.re.sub(&o.re),
            im: self.im.sub(&o.im),
        }
    }

    pub fn neg(&self) -> CJet3 {
        CJet3 {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn mul(&self, o: &CJet3) -> CJet3 {
        CJet3 {
            re: self.re.mul(&o.re).sub(&self.im.mul(&o.im)),
            im: self.re.mul(&o.im).add(&self.im.mul(&o.re)),
        }
    }

    pub fn scale(&self, s: Complex64) -> CJet3 {
        CJet3 {
            re: self.re.scale(s.re).sub(&self.im.scale(s.im)),
            im: self.re.scale(s.im).add(&self.im.scale(s.re)),
        }
    }

    pub fn shift(&self, d: [u8; 3]) -> CJet3 {
        CJet3 {
            re: self.re.shift(d),
            im: self.im.shift(d),
        }
    }
}

/// Jet of the polar angle φ(x, y) at a point off the axis, through the
/// imaginary part of log(x + iy). The constant term is normalized to [0, 2π);
/// derivatives are unaffected by the normalization shift.
pub fn phi_jet(x: f64, y: f64) -> Jet3 {
    let zx = Jet3::var(0, x);
    let zy = Jet3::var(1, y);
    // w = log(x + iy): Taylor coefficients 1/z₀, -1/(2z₀²), 1/(3z₀³), -1/(4z₀⁴).
    let z0 = Complex64::new(x, y);
    let mut u = CJet3 { re: zx, im: zy };
    u.re.c[0] = 0.0;
    u.im.c[0] = 0.0;
    let mut out = CJet3::zero();
    let mut p = CJet3::constant(Complex64::new(1.0, 0.0));
    let mut zk = Complex64::new(1.0, 0.0);
    for k in 1..=ORDER {
        p = p.mul(&u);
        zk *= z0;
        let t = if k % 2 == 1 { 1.0 } else { -1.0 } / (k as f64 * zk);
        out = out.add(&p.scale(t));
    }
    let mut phi = out.im;
    let mut v = y.atan2(x);
    if v < 0.0 {
        v += 2.0 * std::f64::consts::PI;
    }
    phi.c[0] = v;
    phi
}

/// Jet of r(x, y) = √(x² + y²).
pub fn r_jet(x: f64, y: f64) -> Jet3 {
    let zx = Jet3::var(0, x);
    let zy = Jet3::var(1, y);
    zx.mul(&zx).add(&zy.mul(&zy)).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn tables_are_consistent() {
        assert_eq!(MIDX[0], [0, 0, 0]);
        assert_eq!(NCOEF, 35);
        for (n, m) in MIDX.iter().enumerate() {
            assert_eq!(pos(*m), n);
        }
    }

    #[test]
    fn product_matches_polynomial_expansion() {
        // f = x + 2y², g = 3 + xz; coefficients of fg at (1, -1, 2).
        let (x0, y0, z0) = (1.0, -1.0, 2.0);
        let x = Jet3::var(0, x0);
        let y = Jet3::var(1, y0);
        let z = Jet3::var(2, z0);
        let f = x.add(&y.mul(&y).scale(2.0));
        let g = x.mul(&z).add_scalar(3.0);
        let fg = f.mul(&g);
        // ∂³(fg)/∂y²∂z = ∂²/∂y² [x·(x + 2y²)]... direct: fg = (x+2y²)(3+xz).
        // ∂y²: 4(3+xz); ∂z of that: 4x = 4.
        assert_relative_eq!(fg.partial([0, 2, 1]), 4.0 * x0);
        // value
        assert_relative_eq!(fg.value(), (x0 + 2.0 * y0 * y0) * (3.0 + x0 * z0));
        // ∂x(fg) = (1)(3+xz) + (x+2y²)z
        assert_relative_eq!(
            fg.partial([1, 0, 0]),
            3.0 + x0 * z0 + (x0 + 2.0 * y0 * y0) * z0
        );
    }

    #[test]
    fn elementary_functions_match_hand_derivatives() {
        let x = Jet3::var(0, 0.7);
        let s = x.sin();
        assert_relative_eq!(s.partial([1, 0, 0]), 0.7f64.cos(), epsilon = 1e-14);
        assert_relative_eq!(s.partial([2, 0, 0]), -0.7f64.sin(), epsilon = 1e-14);
        assert_relative_eq!(s.partial([3, 0, 0]), -0.7f64.cos(), epsilon = 1e-14);
        assert_relative_eq!(s.partial([4, 0, 0]), 0.7f64.sin(), epsilon = 1e-14);

        let r = x.recip();
        assert_relative_eq!(r.partial([2, 0, 0]), 2.0 / 0.7f64.powi(3), epsilon = 1e-12);

        let q = x.sqrt();
        assert_relative_eq!(
            q.partial([2, 0, 0]),
            -0.25 * 0.7f64.powf(-1.5),
            epsilon = 1e-13
        );
    }

    #[test]
    fn shift_is_derivative_jet() {
        let x = Jet3::var(0, 0.3);
        let y = Jet3::var(1, -0.2);
        let f = x.mul(&y).sin(); // sin(xy)
        let fx = f.shift([1, 0, 0]); // ∂x sin(xy) = y cos(xy)
        let expect = y.mul(&x.mul(&y).cos());
        assert_eq!(fx.valid, 3);
        for (n, m) in MIDX.iter().enumerate() {
            if degree(*m) <= 3 {
                assert_relative_eq!(fx.c[n], expect.c[n], epsilon = 1e-13);
            }
        }
    }

    #[test]
    fn phi_and_r_jets_match_closed_forms() {
        let (x, y) = (0.8, -1.1);
        let r2 = x * x + y * y;
        let p = phi_jet(x, y);
        let mut v = f64::atan2(y, x);
        if v < 0.0 {
            v += 2.0 * std::f64::consts::PI;
        }
        assert_relative_eq!(p.value(), v);
        // ∇φ = (-y/r², x/r²)
        assert_relative_eq!(p.partial([1, 0, 0]), -y / r2, epsilon = 1e-13);
        assert_relative_eq!(p.partial([0, 1, 0]), x / r2, epsilon = 1e-13);
        // φ_xx = 2xy/r⁴
        assert_relative_eq!(p.partial([2, 0, 0]), 2.0 * x * y / (r2 * r2), epsilon = 1e-12);

        let r = r_jet(x, y);
        assert_relative_eq!(r.value(), r2.sqrt());
        assert_relative_eq!(r.partial([1, 0, 0]), x / r2.sqrt(), epsilon = 1e-13);
        // r_xy = -xy/r³
        assert_relative_eq!(
            r.partial([1, 1, 0]),
            -x * y / r2.powf(1.5),
            epsilon = 1e-12
        );
    }

    #[test]
    fn compose1_chains_univariate_functions() {
        // h(x,y) = exp(sin(x) * y) via compose1 against direct jet arithmetic.
        let (x0, y0) = (0.4, 1.3);
        let x = Jet3::var(0, x0);
        let y = Jet3::var(1, y0);
        let inner = x.sin().mul(&y);
        let direct = inner.exp();
        let e = inner.value().exp();
        let outer = Jet1 {
            c: [e, e, e / 2.0, e / 6.0, e / 24.0],
        };
        let composed = inner.compose1(&outer);
        for n in 0..NCOEF {
            assert_relative_eq!(direct.c[n], composed.c[n], epsilon = 1e-13);
        }
    }

    #[test]
    fn jet1_arithmetic_and_derivatives() {
        let t = Jet1::var(0.9);
        let f = t.sin().div(&t); // sin(t)/t
        let g = |t: f64| t.sin() / t;
        // central 5-point stencil for the first derivative as a sanity anchor
        let h = 1e-4;
        let fd = (-g(0.9 + 2.0 * h) + 8.0 * g(0.9 + h) - 8.0 * g(0.9 - h) + g(0.9 - 2.0 * h))
            / (12.0 * h);
        assert_relative_eq!(f.derivative(1), fd, epsilon = 1e-10);
        assert_relative_eq!(f.value(), g(0.9));

        let p = t.powi(-3);
        assert_relative_eq!(p.value(), 0.9f64.powi(-3), epsilon = 1e-13);
        assert_relative_eq!(
            p.derivative(1),
            -3.0 * 0.9f64.powi(-4),
            epsilon = 1e-11
        );
    }

    #[test]
    fn separable_outer_product() {
        // f(r) g(φ) h(Z) = r² · sin φ · Z at (2, π/3, -1)
        let fr = Jet1::var(2.0).powi(2);
        let gp = Jet1::var(std::f64::consts::FRAC_PI_3).sin();
        let hz = Jet1::var(-1.0);
        let j = Jet3::separable(&fr, &gp, &hz);
        assert_relative_eq!(
            j.value(),
            4.0 * std::f64::consts::FRAC_PI_3.sin() * -1.0,
            epsilon = 1e-14
        );
        // ∂r∂φ = 2r cos φ · Z
        assert_relative_eq!(
            j.partial([1, 1, 0]),
            2.0 * 2.0 * std::f64::consts::FRAC_PI_3.cos() * -1.0,
            epsilon = 1e-13
        );
    }

    #[test]
    fn repeated_axis_shift_carries_no_divided_power() {
        // f = x⁴: ∂_xx f = 12x², including the x² Taylor slot itself.
        let f = Jet3::var(0, 0.7).powi(4);
        let fxx = f.shift([2, 0, 0]);
        let expect = Jet3::var(0, 0.7).powi(2).scale(12.0);
        assert_relative_eq!(fxx.value(), expect.value(), epsilon = 1e-13);
        for d in 1..=2 {
            assert_relative_eq!(
                fxx.partial([d, 0, 0]),
                expect.partial([d, 0, 0]),
                epsilon = 1e-13
            );
        }
        // Mixed second derivative of sin(xy): ∂_xy = cos(xy) − xy·sin(xy).
        let (x, y) = (Jet3::var(0, 0.4), Jet3::var(1, -1.1));
        let g = x.mul(&y).sin().shift([1, 1, 0]);
        let xy = x.mul(&y);
        let hand = xy.cos().sub(&xy.mul(&xy.sin()));
        assert_relative_eq!(g.value(), hand.value(), epsilon = 1e-13);
        assert_relative_eq!(g.partial([1, 0, 0]), hand.partial([1, 0, 0]), epsilon = 1e-13);
    }

    #[test]
    fn validity_tracking_through_shift_and_product() {
        let x = Jet3::var(0, 1.0);
        let f = x.sin();
        assert_eq!(f.valid, 4);
        let fx = f.shift([1, 0, 0]);
        assert_eq!(fx.valid, 3);
        let g = fx.mul(&f);
        assert_eq!(g.valid, 3);
        let gxx = g.shift([2, 0, 0]);
        assert_eq!(gxx.valid, 1);
    }
}

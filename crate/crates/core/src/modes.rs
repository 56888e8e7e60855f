//! Scalar paraxial modes: fundamental Gaussian, Hermite-Gauss and rect spots.
//!
//! All Gaussian-family modes have their waist at `z = 0`. A mode with waist
//! `w0` (in reference-waist units) has Rayleigh range `w0²` in the crate's
//! `z` units, so `ζ = z / w0²` is the normalized propagation distance.
//!
//! Hermite-Gauss factors follow the propagation convention of the
//! fundamental beam `(1/(z - iL)) exp(ik|ρ|²/(2(z - iL)))`:
//!
//! ```text
//! u_n(x, z) = 2^{1/4} w⁻¹ᐟ² ψ_n(√2 x / w) exp(i ζ x² / (w0² (1 + ζ²))) exp(-i (n + ½) atan ζ)
//! ```
//!
//! with `w = w0 √(1 + ζ²)` and `ψ_n` the normalized Hermite function. The
//! family is orthonormal at every `z`, real at the waist, and
//! `u_0(x, z) u_0(y, z) = -i U(ρ, z)` for the fundamental Gaussian `U`
//! ([`GaussianFundamental`]).

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{FieldGrid, SampledScalarField};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn check_waist(w0: f64) -> Result<()> {
    if w0 > 0.0 && w0.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("waist must be positive, got {w0}")))
    }
}

/// Normalized Hermite function `H_n(t) e^{-t²/2} / √(2ⁿ n! √π)`.
///
/// Uses the three-term recurrence on the normalized functions, which stays
/// finite for large orders and arguments.
pub fn hermite_function(n: u32, t: f64) -> f64 {
    let mut prev = PI.powf(-0.25) * (-0.5 * t * t).exp();
    if n == 0 {
        return prev;
    }
    let mut cur = SQRT_2 * t * prev;
    for k in 1..n {
        let k = k as f64;
        let next = (2.0 / (k + 1.0)).sqrt() * t * cur - (k / (k + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// The normalized fundamental Gaussian beam.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianFundamental {
    w0: f64,
}

impl GaussianFundamental {
    pub fn new(w0: f64) -> Result<Self> {
        check_waist(w0)?;
        Ok(GaussianFundamental { w0 })
    }

    pub fn w0(&self) -> f64 {
        self.w0
    }

    /// Rayleigh range `k w0² / 2` in units of the reference Rayleigh range.
    pub fn rayleigh_range(&self) -> f64 {
        self.w0 * self.w0
    }

    /// `√(kL/π) (z - iL)⁻¹ exp(ik|ρ|² / (2(z - iL)))`.
    pub fn eval(&self, x: f64, y: f64, z: f64) -> Complex64 {
        // With L = k w0²/2: √(kL/π)/(z - iL) = √(2/π)/(w0 (ζ - i)) and
        // ik/(2(z - iL)) = i/(w0² (ζ - i)).
        let zeta = z / self.rayleigh_range();
        let q = Complex64::new(zeta, -1.0);
        let rho2 = x * x + y * y;
        (2.0 / PI).sqrt() / (self.w0 * q) * (I * rho2 / (self.w0 * self.w0 * q)).exp()
    }
}

/// One-dimensional Hermite-Gauss factor `u_n(x, z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermiteGauss1D {
    n: u32,
    w0: f64,
}

impl HermiteGauss1D {
    pub fn new(n: u32, w0: f64) -> Result<Self> {
        check_waist(w0)?;
        Ok(HermiteGauss1D { n, w0 })
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn w0(&self) -> f64 {
        self.w0
    }

    pub fn eval(&self, x: f64, z: f64) -> Complex64 {
        hg_factor(self.n, self.w0, x, z)
    }
}

fn hg_factor(n: u32, w0: f64, x: f64, z: f64) -> Complex64 {
    let zeta = z / (w0 * w0);
    let spread = 1.0 + zeta * zeta;
    let w = w0 * spread.sqrt();
    let amplitude = 2f64.powf(0.25) / w.sqrt() * hermite_function(n, SQRT_2 * x / w);
    let phase = zeta * x * x / (w0 * w0 * spread) - (n as f64 + 0.5) * zeta.atan();
    amplitude * Complex64::from_polar(1.0, phase)
}

/// Two-dimensional Hermite-Gauss mode `U_nm(ρ, z) = u_n(x, z) u_m(y, z)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermiteGauss2D {
    n: u32,
    m: u32,
    w0: f64,
}

impl HermiteGauss2D {
    pub fn new(n: u32, m: u32, w0: f64) -> Result<Self> {
        check_waist(w0)?;
        Ok(HermiteGauss2D { n, m, w0 })
    }

    pub fn orders(&self) -> (u32, u32) {
        (self.n, self.m)
    }

    pub fn w0(&self) -> f64 {
        self.w0
    }

    pub fn x_factor(&self) -> HermiteGauss1D {
        HermiteGauss1D { n: self.n, w0: self.w0 }
    }

    pub fn y_factor(&self) -> HermiteGauss1D {
        HermiteGauss1D { n: self.m, w0: self.w0 }
    }

    pub fn eval(&self, x: f64, y: f64, z: f64) -> Complex64 {
        hg_factor(self.n, self.w0, x, z) * hg_factor(self.m, self.w0, y, z)
    }
}

/// `rect(ξ)`: 1 inside `|ξ| < ½`, ½ exactly on the edge, 0 outside.
pub fn rect(xi: f64) -> f64 {
    let r = xi.abs();
    if r < 0.5 {
        1.0
    } else if r == 0.5 {
        0.5
    } else {
        0.0
    }
}

/// A square spot of side `b` in one quadrant of the fourfold array.
///
/// Profile `rect((y - (-1)^i a)/b) rect((x + (-1)^j a)/b)`: `i` selects up
/// (0) or down (1), `j` selects left (0) or right (1). It is defined in the
/// `z = 0` plane and evaluated there regardless of `z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RectMode {
    i: u8,
    j: u8,
    a: f64,
    b: f64,
}

impl RectMode {
    /// Rejects `b >= 2a`, for which neighbouring spots overlap.
    pub fn new(i: u8, j: u8, a: f64, b: f64) -> Result<Self> {
        let r = RectMode::overlapping(i, j, a, b)?;
        if b >= 2.0 * a {
            return Err(Error::InvalidGeometry(format!("spots overlap unless b < 2a (a={a}, b={b})")));
        }
        Ok(r)
    }

    /// Like [`RectMode::new`] but accepts overlapping spots.
    pub fn overlapping(i: u8, j: u8, a: f64, b: f64) -> Result<Self> {
        if i > 1 || j > 1 {
            return Err(Error::InvalidParameter(format!("quadrant indices must be 0 or 1, got ({i}, {j})")));
        }
        if !(b > 0.0 && b.is_finite()) || !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "spot width and separation must be positive, got a={a}, b={b}"
            )));
        }
        Ok(RectMode { i, j, a, b })
    }

    pub fn quadrant(&self) -> (u8, u8) {
        (self.i, self.j)
    }

    pub fn half_separation(&self) -> f64 {
        self.a
    }

    pub fn width(&self) -> f64 {
        self.b
    }

    /// Spot centre `(x, y)`.
    pub fn center(&self) -> (f64, f64) {
        let sy = if self.i == 0 { 1.0 } else { -1.0 };
        let sx = if self.j == 0 { 1.0 } else { -1.0 };
        (-sx * self.a, sy * self.a)
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let (cx, cy) = self.center();
        rect((y - cy) / self.b) * rect((x - cx) / self.b)
    }
}

/// A mode translated by `(dx, dy)`: `shifted(x, y) = base(x - dx, y - dy)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftedMode {
    pub base: Box<ScalarMode>,
    pub dx: f64,
    pub dy: f64,
}

/// Any scalar mode of the catalog.
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarMode {
    Gaussian(GaussianFundamental),
    HermiteGauss(HermiteGauss2D),
    Rect(RectMode),
    Shifted(ShiftedMode),
}

impl From<GaussianFundamental> for ScalarMode {
    fn from(g: GaussianFundamental) -> Self {
        ScalarMode::Gaussian(g)
    }
}

impl From<HermiteGauss2D> for ScalarMode {
    fn from(h: HermiteGauss2D) -> Self {
        ScalarMode::HermiteGauss(h)
    }
}

impl From<RectMode> for ScalarMode {
    fn from(r: RectMode) -> Self {
        ScalarMode::Rect(r)
    }
}

/// Shape of a mode with its accumulated translation peeled off.
#[derive(Debug, Clone, Copy)]
enum Canonical {
    /// `phase × U_nm`; the fundamental Gaussian is `i U_00`.
    Hg { n: u32, m: u32, w0: f64, phase: Complex64 },
    /// Unit-height square of side `b` centred at the origin.
    Square { b: f64 },
}

impl ScalarMode {
    pub fn gaussian(w0: f64) -> Result<Self> {
        Ok(GaussianFundamental::new(w0)?.into())
    }

    pub fn hermite_gauss(n: u32, m: u32, w0: f64) -> Result<Self> {
        Ok(HermiteGauss2D::new(n, m, w0)?.into())
    }

    /// Translate by `(dx, dy)`; nested shifts collapse into one.
    pub fn shifted(self, dx: f64, dy: f64) -> Self {
        match self {
            ScalarMode::Shifted(s) => ScalarMode::Shifted(ShiftedMode { base: s.base, dx: s.dx + dx, dy: s.dy + dy }),
            other => ScalarMode::Shifted(ShiftedMode { base: Box::new(other), dx, dy }),
        }
    }

    pub fn eval(&self, x: f64, y: f64, z: f64) -> Complex64 {
        match self {
            ScalarMode::Gaussian(g) => g.eval(x, y, z),
            ScalarMode::HermiteGauss(h) => h.eval(x, y, z),
            ScalarMode::Rect(r) => Complex64::new(r.eval(x, y), 0.0),
            ScalarMode::Shifted(s) => s.base.eval(x - s.dx, y - s.dy, z),
        }
    }

    /// Largest length scale of the mode: waist-like width plus distance of
    /// its centre from the origin.
    pub fn length_scale(&self, z: f64) -> f64 {
        match self {
            ScalarMode::Gaussian(g) => beam_radius(g.w0, z),
            ScalarMode::HermiteGauss(h) => beam_radius(h.w0, z),
            ScalarMode::Rect(r) => {
                let (cx, cy) = r.center();
                cx.abs().max(cy.abs()) + 0.5 * r.b
            }
            ScalarMode::Shifted(s) => s.base.length_scale(z) + s.dx.hypot(s.dy),
        }
    }

    fn canonical(&self) -> (Canonical, f64, f64) {
        match self {
            ScalarMode::Gaussian(g) => (Canonical::Hg { n: 0, m: 0, w0: g.w0, phase: I }, 0.0, 0.0),
            ScalarMode::HermiteGauss(h) => {
                (Canonical::Hg { n: h.n, m: h.m, w0: h.w0, phase: Complex64::new(1.0, 0.0) }, 0.0, 0.0)
            }
            ScalarMode::Rect(r) => {
                let (cx, cy) = r.center();
                (Canonical::Square { b: r.b }, cx, cy)
            }
            ScalarMode::Shifted(s) => {
                let (c, x, y) = s.base.canonical();
                (c, x + s.dx, y + s.dy)
            }
        }
    }
}

/// Beam radius `w0 √(1 + (z/w0²)²)`.
pub fn beam_radius(w0: f64, z: f64) -> f64 {
    let zeta = z / (w0 * w0);
    w0 * (1.0 + zeta * zeta).sqrt()
}

/// Closed-form overlap `exp(-a² / (w0²/2))` of two Gaussians displaced by
/// `±a`.
pub fn overlap_gaussian_analytic(a: f64, w0: f64) -> Result<f64> {
    check_waist(w0)?;
    if !(a >= 0.0) {
        return Err(Error::InvalidParameter(format!("separation must be non-negative, got {a}")));
    }
    Ok((-a * a / (0.5 * w0 * w0)).exp())
}

/// Exact spatial scalar product `(a, b)_S` where the catalog provides one.
///
/// Covered: Hermite-Gauss modes (and the Gaussian) of equal waist sharing a
/// centre, translated fundamental Gaussians of equal waist, and rect spots.
/// Gaussian-family products are independent of `z` (translation commutes
/// with paraxial propagation, which is unitary); rect spots live in the
/// `z = 0` plane. Returns `None` when no closed form applies.
pub fn analytic_inner_product(a: &ScalarMode, b: &ScalarMode) -> Option<Complex64> {
    let (ca, ax, ay) = a.canonical();
    let (cb, bx, by) = b.canonical();
    match (ca, cb) {
        (Canonical::Hg { n: n1, m: m1, w0: w1, phase: p1 }, Canonical::Hg { n: n2, m: m2, w0: w2, phase: p2 }) => {
            if w1 != w2 {
                return None;
            }
            let phase = p1.conj() * p2;
            if ax == bx && ay == by {
                let delta = if n1 == n2 && m1 == m2 { 1.0 } else { 0.0 };
                Some(phase * delta)
            } else if n1 == 0 && m1 == 0 && n2 == 0 && m2 == 0 {
                let d2 = (ax - bx).powi(2) + (ay - by).powi(2);
                Some(phase * (-d2 / (2.0 * w1 * w1)).exp())
            } else {
                None
            }
        }
        (Canonical::Square { b: b1 }, Canonical::Square { b: b2 }) => {
            let overlap = |c1: f64, c2: f64| {
                let lo = (c1 - 0.5 * b1).max(c2 - 0.5 * b2);
                let hi = (c1 + 0.5 * b1).min(c2 + 0.5 * b2);
                (hi - lo).max(0.0)
            };
            Some(Complex64::new(overlap(ax, bx) * overlap(ay, by), 0.0))
        }
        _ => None,
    }
}

/// Evaluate a mode at every node of `grid` (at `grid.z()`).
pub fn sample_mode(mode: &ScalarMode, grid: &FieldGrid) -> SampledScalarField {
    let nx = grid.nx();
    let z = grid.z();
    let mut values = vec![Complex64::new(0.0, 0.0); grid.len()];
    values.par_chunks_mut(nx).enumerate().for_each(|(j, row)| {
        let y = grid.y(j);
        for (i, v) in row.iter_mut().enumerate() {
            *v = mode.eval(grid.x(i), y, z);
        }
    });
    SampledScalarField::new(*grid, values).expect("catalog modes are finite")
}

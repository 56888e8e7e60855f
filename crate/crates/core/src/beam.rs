//! Jones vectors and vector beams built as sums of polarized scalar modes.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{FieldGrid, SampledVectorField};
use crate::modes::{GaussianFundamental, HermiteGauss2D, RectMode, ScalarMode};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Transverse polarization state in the `{ê_H, ê_V}` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JonesVector {
    pub h: Complex64,
    pub v: Complex64,
}

impl JonesVector {
    pub const H: JonesVector = JonesVector { h: ONE, v: ZERO };
    pub const V: JonesVector = JonesVector { h: ZERO, v: ONE };

    pub fn new(h: Complex64, v: Complex64) -> Self {
        JonesVector { h, v }
    }

    pub fn from_array(c: [Complex64; 2]) -> Self {
        JonesVector { h: c[0], v: c[1] }
    }

    pub fn to_array(self) -> [Complex64; 2] {
        [self.h, self.v]
    }

    /// `(self, other)_P = conj(self) · other`.
    pub fn inner(&self, other: &JonesVector) -> Complex64 {
        self.h.conj() * other.h + self.v.conj() * other.v
    }

    pub fn norm(&self) -> f64 {
        (self.h.norm_sqr() + self.v.norm_sqr()).sqrt()
    }
}

/// One `coeff × pol × mode` term of a beam.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamTerm {
    pub coeff: Complex64,
    pub pol: JonesVector,
    pub mode: ScalarMode,
}

impl BeamTerm {
    pub fn new(coeff: Complex64, pol: JonesVector, mode: ScalarMode) -> Self {
        BeamTerm { coeff, pol, mode }
    }
}

/// Which constructor produced a beam.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BeamFamily {
    /// Polarization-position: `ê_H U(x, y-a) + ê_V U(x, y+a)`.
    Pp,
    /// Position-position: four rect spots with a common polarization.
    Fourfold,
    /// Polarization-spatial: `ê_H`/`ê_V` times first-order HG modes.
    Ps,
    /// The radially polarized `ê_H U_10 + ê_V U_01`.
    Radial,
    Ghz,
    W,
    Noon,
    Custom,
}

impl fmt::Display for BeamFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BeamFamily::Pp => "pp",
            BeamFamily::Fourfold => "fourfold",
            BeamFamily::Ps => "ps",
            BeamFamily::Radial => "radial",
            BeamFamily::Ghz => "ghz",
            BeamFamily::W => "w",
            BeamFamily::Noon => "noon",
            BeamFamily::Custom => "custom",
        };
        f.write_str(s)
    }
}

/// Constructor parameters kept alongside the terms.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct BeamParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub w0: Option<f64>,
    #[serde(rename = "N", skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    /// `A_ij` as `[[re, im]; 4]` in the order `A00, A01, A10, A11`.
    #[serde(rename = "A", skip_serializing_if = "Option::is_none", serialize_with = "ser_coeffs")]
    pub coeffs: Option<[[Complex64; 2]; 2]>,
}

fn ser_coeffs<S: serde::Serializer>(c: &Option<[[Complex64; 2]; 2]>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let flat: Option<Vec<[f64; 2]>> = c.map(|c| c.iter().flatten().map(|z| [z.re, z.im]).collect());
    flat.serialize(s)
}

/// The analytic signal `U(ρ, z) = Σ coeff · pol · mode(ρ, z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorBeam {
    terms: Vec<BeamTerm>,
    family: BeamFamily,
    params: BeamParams,
}

impl VectorBeam {
    pub fn new(terms: Vec<BeamTerm>, family: BeamFamily, params: BeamParams) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::DegenerateBeam("a beam needs at least one term".into()));
        }
        let finite = terms.iter().all(|t| t.coeff.is_finite() && t.pol.h.is_finite() && t.pol.v.is_finite());
        if !finite {
            return Err(Error::InvalidParameter("beam coefficients must be finite".into()));
        }
        Ok(VectorBeam { terms, family, params })
    }

    /// A beam outside the named families.
    pub fn custom(terms: Vec<BeamTerm>) -> Result<Self> {
        VectorBeam::new(terms, BeamFamily::Custom, BeamParams::default())
    }

    pub fn terms(&self) -> &[BeamTerm] {
        &self.terms
    }

    pub fn family(&self) -> BeamFamily {
        self.family
    }

    pub fn params(&self) -> &BeamParams {
        &self.params
    }

    /// Largest length scale over all terms at distance `z`.
    pub fn length_scale(&self, z: f64) -> f64 {
        self.terms.iter().map(|t| t.mode.length_scale(z)).fold(0.0, f64::max)
    }
}

fn check_nonneg(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be non-negative, got {v}")))
    }
}

/// Polarization-position beam `ê_H U(x, y-a, z) + ê_V U(x, y+a, z)`.
pub fn make_pp_beam(a: f64, w0: f64) -> Result<VectorBeam> {
    check_nonneg("separation", a)?;
    let g = ScalarMode::from(GaussianFundamental::new(w0)?);
    let terms = vec![
        BeamTerm::new(ONE, JonesVector::H, g.clone().shifted(0.0, a)),
        BeamTerm::new(ONE, JonesVector::V, g.shifted(0.0, -a)),
    ];
    let params = BeamParams { a: Some(a), w0: Some(w0), ..Default::default() };
    VectorBeam::new(terms, BeamFamily::Pp, params)
}

/// Fourfold position-position beam `Σ A_ij rect-spot_ij`, uniformly
/// H-polarized.
///
/// With `allow_overlap = false`, `b >= 2a` is an invalid-geometry error.
pub fn make_fourfold_beam(coeffs: [[Complex64; 2]; 2], a: f64, b: f64, allow_overlap: bool) -> Result<VectorBeam> {
    let mut terms = Vec::with_capacity(4);
    for (i, row) in coeffs.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            let (i, j) = (i as u8, j as u8);
            let spot = if allow_overlap { RectMode::overlapping(i, j, a, b)? } else { RectMode::new(i, j, a, b)? };
            terms.push(BeamTerm::new(c, JonesVector::H, spot.into()));
        }
    }
    let params = BeamParams { a: Some(a), b: Some(b), coeffs: Some(coeffs), ..Default::default() };
    VectorBeam::new(terms, BeamFamily::Fourfold, params)
}

/// `A00 ê_H U10 + A01 ê_H U01 + A10 ê_V U10 + A11 ê_V U01`.
pub fn make_ps_beam(coeffs: [[Complex64; 2]; 2], w0: f64) -> Result<VectorBeam> {
    let u10 = ScalarMode::from(HermiteGauss2D::new(1, 0, w0)?);
    let u01 = ScalarMode::from(HermiteGauss2D::new(0, 1, w0)?);
    let terms = vec![
        BeamTerm::new(coeffs[0][0], JonesVector::H, u10.clone()),
        BeamTerm::new(coeffs[0][1], JonesVector::H, u01.clone()),
        BeamTerm::new(coeffs[1][0], JonesVector::V, u10),
        BeamTerm::new(coeffs[1][1], JonesVector::V, u01),
    ];
    let params = BeamParams { w0: Some(w0), coeffs: Some(coeffs), ..Default::default() };
    VectorBeam::new(terms, BeamFamily::Ps, params)
}

/// Radially polarized beam `ê_H U10 + ê_V U01`.
pub fn make_radial_beam(w0: f64) -> Result<VectorBeam> {
    let terms = vec![
        BeamTerm::new(ONE, JonesVector::H, HermiteGauss2D::new(1, 0, w0)?.into()),
        BeamTerm::new(ONE, JonesVector::V, HermiteGauss2D::new(0, 1, w0)?.into()),
    ];
    let params = BeamParams { w0: Some(w0), ..Default::default() };
    VectorBeam::new(terms, BeamFamily::Radial, params)
}

/// `(ê_H U00 + ê_V U11) / √2`.
pub fn make_ghz_beam(w0: f64) -> Result<VectorBeam> {
    let c = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let terms = vec![
        BeamTerm::new(c, JonesVector::H, HermiteGauss2D::new(0, 0, w0)?.into()),
        BeamTerm::new(c, JonesVector::V, HermiteGauss2D::new(1, 1, w0)?.into()),
    ];
    let params = BeamParams { w0: Some(w0), ..Default::default() };
    VectorBeam::new(terms, BeamFamily::Ghz, params)
}

/// `(ê_H U01 + ê_H U10 + ê_V U00) / √3`.
pub fn make_w_beam(w0: f64) -> Result<VectorBeam> {
    let c = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
    let terms = vec![
        BeamTerm::new(c, JonesVector::H, HermiteGauss2D::new(0, 1, w0)?.into()),
        BeamTerm::new(c, JonesVector::H, HermiteGauss2D::new(1, 0, w0)?.into()),
        BeamTerm::new(c, JonesVector::V, HermiteGauss2D::new(0, 0, w0)?.into()),
    ];
    let params = BeamParams { w0: Some(w0), ..Default::default() };
    VectorBeam::new(terms, BeamFamily::W, params)
}

/// Scalar NOON beam `(U_N0 + e^{iNθ} U_0N) / √2`, carried on `ê_H`.
pub fn make_noon_beam(n: u32, theta: f64, w0: f64) -> Result<VectorBeam> {
    if n == 0 {
        return Err(Error::InvalidParameter("NOON order N must be at least 1".into()));
    }
    if !theta.is_finite() {
        return Err(Error::InvalidParameter(format!("theta must be finite, got {theta}")));
    }
    let c = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let phase = Complex64::from_polar(1.0, n as f64 * theta);
    let terms = vec![
        BeamTerm::new(c, JonesVector::H, HermiteGauss2D::new(n, 0, w0)?.into()),
        BeamTerm::new(c * phase, JonesVector::H, HermiteGauss2D::new(0, n, w0)?.into()),
    ];
    let params = BeamParams { w0: Some(w0), n: Some(n), theta: Some(theta), ..Default::default() };
    VectorBeam::new(terms, BeamFamily::Noon, params)
}

/// `(E_H, E_V)` at `(x, y, z)`.
pub fn eval_beam(beam: &VectorBeam, x: f64, y: f64, z: f64) -> (Complex64, Complex64) {
    beam.terms.iter().fold((ZERO, ZERO), |(h, v), t| {
        let s = t.coeff * t.mode.eval(x, y, z);
        (h + s * t.pol.h, v + s * t.pol.v)
    })
}

/// Evaluate a beam on every node of `grid`.
pub fn sample_beam(beam: &VectorBeam, grid: &FieldGrid) -> SampledVectorField {
    let nx = grid.nx();
    let z = grid.z();
    let mut ex = vec![ZERO; grid.len()];
    let mut ey = vec![ZERO; grid.len()];
    ex.par_chunks_mut(nx).zip(ey.par_chunks_mut(nx)).enumerate().for_each(|(j, (rh, rv))| {
        let y = grid.y(j);
        for i in 0..nx {
            let (h, v) = eval_beam(beam, grid.x(i), y, z);
            rh[i] = h;
            rv[i] = v;
        }
    });
    SampledVectorField::new(*grid, ex, ey).expect("catalog beams are finite")
}

/// Quadrature of `|E_H|² + |E_V|²` over the grid.
pub fn total_intensity(beam: &VectorBeam, grid: &FieldGrid) -> f64 {
    sample_beam(beam, grid).total_intensity()
}

/// Multiply every coefficient by `c`.
pub fn scale_beam(beam: &VectorBeam, c: Complex64) -> Result<VectorBeam> {
    if c == ZERO {
        return Err(Error::DegenerateBeam("scaling by zero erases the beam".into()));
    }
    if !c.is_finite() {
        return Err(Error::InvalidParameter(format!("scale factor must be finite, got {c}")));
    }
    let mut out = beam.clone();
    for t in &mut out.terms {
        t.coeff *= c;
    }
    Ok(out)
}

/// Three-qubit coefficients over (polarization, x order, y order).
///
/// The beam is `Σ c[p][nx][ny] ê_p u_nx(x, z) u_ny(y, z)` with a common
/// waist `w0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripartiteTensor {
    pub c: [[[Complex64; 2]; 2]; 2],
    pub w0: f64,
}

impl TripartiteTensor {
    pub fn get(&self, p: usize, nx: usize, ny: usize) -> Complex64 {
        self.c[p][nx][ny]
    }

    /// `(E_H, E_V)` of the represented beam.
    pub fn eval(&self, x: f64, y: f64, z: f64) -> (Complex64, Complex64) {
        let ux = [0u32, 1].map(|n| crate::modes::HermiteGauss1D::new(n, self.w0).unwrap().eval(x, z));
        let uy = [0u32, 1].map(|n| crate::modes::HermiteGauss1D::new(n, self.w0).unwrap().eval(y, z));
        let mut out = [ZERO; 2];
        for (p, o) in out.iter_mut().enumerate() {
            for a in 0..2 {
                for b in 0..2 {
                    *o += self.c[p][a][b] * ux[a] * uy[b];
                }
            }
        }
        (out[0], out[1])
    }

    /// `Σ |c|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.c.iter().flatten().flatten().map(|z| z.norm_sqr()).sum()
    }
}

/// Express a beam in the two-level tensor basis `{u_0, u_1}_x ⊗ {u_0, u_1}_y`.
///
/// Every term must be an unshifted Hermite-Gauss mode (or the fundamental
/// Gaussian) with orders at most 1 and a waist shared by all terms.
pub fn factorize_tripartite(beam: &VectorBeam) -> Result<TripartiteTensor> {
    let mut c = [[[ZERO; 2]; 2]; 2];
    let mut waist: Option<f64> = None;
    for t in &beam.terms {
        let (n, m, w0, phase) = split_hg(&t.mode)
            .ok_or_else(|| Error::NotRepresentable(format!("{:?} is not a centred Hermite-Gauss mode", t.mode)))?;
        if n > 1 || m > 1 {
            return Err(Error::NotRepresentable(format!("mode U_{n}{m} lies outside the two-level truncation")));
        }
        match waist {
            None => waist = Some(w0),
            Some(w) if w != w0 => {
                return Err(Error::NotRepresentable(format!("mixed waists {w} and {w0}")));
            }
            _ => {}
        }
        let amp = t.coeff * phase;
        c[0][n as usize][m as usize] += amp * t.pol.h;
        c[1][n as usize][m as usize] += amp * t.pol.v;
    }
    Ok(TripartiteTensor { c, w0: waist.expect("beams are non-empty") })
}

/// `(n, m, w0, phase)` with `mode = phase × U_nm`.
fn split_hg(mode: &ScalarMode) -> Option<(u32, u32, f64, Complex64)> {
    match mode {
        ScalarMode::HermiteGauss(h) => {
            let (n, m) = h.orders();
            Some((n, m, h.w0(), ONE))
        }
        // GaussianFundamental = i U_00.
        ScalarMode::Gaussian(g) => Some((0, 0, g.w0(), Complex64::new(0.0, 1.0))),
        ScalarMode::Shifted(s) if s.dx == 0.0 && s.dy == 0.0 => split_hg(&s.base),
        _ => None,
    }
}

//! Polarization/space Schmidt decomposition of vector beams.
//!
//! A beam `U = Σ_t P_t f_t` (Jones coefficient column `P_t`, scalar mode
//! `f_t`) is rewritten as `√λ₁ û₁ v₁ + √λ₂ û₂ v₂`. The spatial modes are
//! first orthonormalised through a Hermitian factorisation of their Gram
//! matrix `G = V diag(μ) V†`, giving `U = Σ_k C_k e_k` with
//! `e_k = Σ_t f_t V_tk / √μ_k` and `C_pk = Σ_t P_pt √μ_k conj(V_tk)`.
//! The Schmidt weights are then the eigenvalues of the 2×2 matrix `C C†`,
//! i.e. the squared singular values of `C`.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

use crate::beam::{sample_beam, JonesVector, VectorBeam};
use crate::error::{Error, Result};
use crate::grid::{inner_product_sampled, FieldGrid, SampledScalarField};
use crate::linalg::Mat2;
use crate::modes::{analytic_inner_product, overlap_gaussian_analytic, sample_mode};

/// Gram eigenvalues below this fraction of the trace are discarded.
pub const GRAM_TRUNCATION: f64 = 1e-12;
/// Gram eigenvalues below minus this fraction of the trace are a failure.
pub const GRAM_NEGATIVITY: f64 = 1e-10;
/// Schmidt weights below this fraction of `λ₁ + λ₂` get no spatial mode.
pub const WEIGHT_CUTOFF: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Outcome of [`schmidt_decompose`].
#[derive(Debug, Clone)]
pub struct SchmidtResult {
    pub lambda1: f64,
    pub lambda2: f64,
    /// Schmidt number `(λ₁ + λ₂)² / (λ₁² + λ₂²)`.
    pub k: f64,
    /// Orthonormal polarization modes `û₁, û₂`.
    pub pol_modes: [JonesVector; 2],
    /// Orthonormal spatial modes paired with the non-zero weights; a single
    /// entry when `λ₂` vanishes.
    pub spatial_modes: Vec<SampledScalarField>,
    /// Relative L² error of `Σ √λᵢ ûᵢ vᵢ` against the sampled beam.
    pub residual: f64,
    /// Polarization-reduced matrix `C C†` whose spectrum is `(λ₁, λ₂)`.
    pub reduced: Mat2,
    /// Number of independent spatial directions kept from the Gram matrix.
    pub gram_rank: usize,
}

/// Pairwise spatial scalar products `(f_s, f_t)_S` of the beam's terms.
///
/// Closed forms are used where the catalog has them (translated Gaussians,
/// Hermite-Gauss orthonormality, rect spot overlaps); other pairs fall back
/// to quadrature on `grid`.
pub fn spatial_gram(beam: &VectorBeam, grid: &FieldGrid) -> DMatrix<Complex64> {
    let terms = beam.terms();
    let n = terms.len();
    let mut samples: Vec<Option<SampledScalarField>> = vec![None; n];
    let mut g = DMatrix::from_element(n, n, ZERO);
    for s in 0..n {
        for t in s..n {
            let value = match analytic_inner_product(&terms[s].mode, &terms[t].mode) {
                Some(v) => v,
                None => {
                    for k in [s, t] {
                        if samples[k].is_none() {
                            samples[k] = Some(sample_mode(&terms[k].mode, grid));
                        }
                    }
                    let (a, b) = (samples[s].as_ref().unwrap(), samples[t].as_ref().unwrap());
                    inner_product_sampled(a, b).expect("same grid")
                }
            };
            g[(s, t)] = value;
            g[(t, s)] = value.conj();
        }
        g[(s, s)].im = 0.0;
    }
    g
}

/// Gram matrix of already-sampled modes, Hermitian by construction.
pub fn sampled_gram(modes: &[SampledScalarField]) -> Result<DMatrix<Complex64>> {
    let n = modes.len();
    let mut g = DMatrix::from_element(n, n, ZERO);
    for s in 0..n {
        for t in s..n {
            let v = inner_product_sampled(&modes[s], &modes[t])?;
            g[(s, t)] = v;
            g[(t, s)] = v.conj();
        }
        g[(s, s)].im = 0.0;
    }
    Ok(g)
}

/// Schmidt decomposition between polarization and the transverse field.
///
/// The Gram matrix is the quadrature Gram of the modes sampled on `grid`,
/// so the weights, the spatial modes and the residual all refer to the
/// same discrete field that [`crate::coherence`] integrates.
pub fn schmidt_decompose(beam: &VectorBeam, grid: &FieldGrid) -> Result<SchmidtResult> {
    let terms = beam.terms();
    let modes: Vec<SampledScalarField> = terms.iter().map(|t| sample_mode(&t.mode, grid)).collect();
    let gram = sampled_gram(&modes)?;
    let trace: f64 = (0..gram.nrows()).map(|k| gram[(k, k)].re).sum();
    if !(trace > 0.0) {
        return Err(Error::DegenerateBeam("every spatial mode vanishes on the grid".into()));
    }

    let eigen = SymmetricEigen::new(gram);
    let min_mu = eigen.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if min_mu < -GRAM_NEGATIVITY * trace {
        return Err(Error::NumericalFailure(format!(
            "spatial Gram matrix has eigenvalue {min_mu:e} (trace {trace:e})"
        )));
    }
    let mut kept: Vec<usize> =
        (0..eigen.eigenvalues.len()).filter(|&k| eigen.eigenvalues[k] > GRAM_TRUNCATION * trace).collect();
    kept.sort_by(|&p, &q| eigen.eigenvalues[q].total_cmp(&eigen.eigenvalues[p]));

    let pol: Vec<[Complex64; 2]> = terms.iter().map(|t| [t.coeff * t.pol.h, t.coeff * t.pol.v]).collect();

    // Coefficients of the beam in the orthonormal spatial basis e_k.
    let coeffs: Vec<[Complex64; 2]> = kept
        .iter()
        .map(|&k| {
            let root = eigen.eigenvalues[k].sqrt();
            let mut col = [ZERO; 2];
            for (t, p) in pol.iter().enumerate() {
                let v = eigen.eigenvectors[(t, k)].conj() * root;
                col[0] += p[0] * v;
                col[1] += p[1] * v;
            }
            col
        })
        .collect();

    let reduced = coeffs.iter().fold(Mat2::ZERO, |acc, col| acc + Mat2::outer(*col, *col));
    let total = reduced.trace().re;
    if !(total > 0.0) {
        return Err(Error::DegenerateBeam("beam has zero intensity".into()));
    }
    let spectrum = reduced.hermitian_eigen();
    let lambda1 = spectrum.values[0].max(0.0);
    let lambda2 = spectrum.values[1].max(0.0);
    let pol_modes = spectrum.vectors.map(JonesVector::from_array);

    let mut spatial_modes = Vec::with_capacity(2);
    for (idx, &lambda) in [lambda1, lambda2].iter().enumerate() {
        if lambda <= WEIGHT_CUTOFF * total {
            continue;
        }
        let u = spectrum.vectors[idx];
        // v = Σ_k (û† C)_k e_k / √λ, expanded back onto the sampled modes.
        let mut on_terms = vec![ZERO; terms.len()];
        for (col, &k) in coeffs.iter().zip(&kept) {
            let wk = (u[0].conj() * col[0] + u[1].conj() * col[1]) / lambda.sqrt();
            let scale = wk / eigen.eigenvalues[k].sqrt();
            for (t, slot) in on_terms.iter_mut().enumerate() {
                *slot += eigen.eigenvectors[(t, k)] * scale;
            }
        }
        spatial_modes.push(combine(grid, &modes, &on_terms));
    }

    let residual = reconstruction_residual(beam, grid, lambda1, lambda2, &pol_modes, &spatial_modes)?;
    Ok(SchmidtResult {
        lambda1,
        lambda2,
        k: schmidt_number(lambda1, lambda2)?,
        pol_modes,
        spatial_modes,
        residual,
        reduced,
        gram_rank: kept.len(),
    })
}

fn combine(grid: &FieldGrid, modes: &[SampledScalarField], weights: &[Complex64]) -> SampledScalarField {
    let mut values = vec![ZERO; grid.len()];
    for (m, &w) in modes.iter().zip(weights) {
        if w == ZERO {
            continue;
        }
        for (v, s) in values.iter_mut().zip(m.values()) {
            *v += w * s;
        }
    }
    SampledScalarField::new(*grid, values).expect("finite combination")
}

fn reconstruction_residual(
    beam: &VectorBeam,
    grid: &FieldGrid,
    lambda1: f64,
    lambda2: f64,
    pol: &[JonesVector; 2],
    spatial: &[SampledScalarField],
) -> Result<f64> {
    let target = sample_beam(beam, grid);
    let mut ex = vec![ZERO; grid.len()];
    let mut ey = vec![ZERO; grid.len()];
    for (k, v) in spatial.iter().enumerate() {
        let amp = [lambda1, lambda2][k].sqrt();
        let (ph, pv) = (pol[k].h * amp, pol[k].v * amp);
        for (n, s) in v.values().iter().enumerate() {
            ex[n] += ph * s;
            ey[n] += pv * s;
        }
    }
    let rebuilt = crate::grid::SampledVectorField::new(*grid, ex, ey)?;
    let norm = target.total_intensity().sqrt();
    if !(norm > 0.0) {
        return Err(Error::DegenerateBeam("beam has zero intensity on the grid".into()));
    }
    Ok(rebuilt.distance(&target)? / norm)
}

/// `K = (λ₁ + λ₂)² / (λ₁² + λ₂²)`.
pub fn schmidt_number(lambda1: f64, lambda2: f64) -> Result<f64> {
    if !(lambda1 >= 0.0 && lambda2 >= 0.0) {
        return Err(Error::InvalidParameter(format!("Schmidt weights must be non-negative, got {lambda1}, {lambda2}")));
    }
    let sq = lambda1 * lambda1 + lambda2 * lambda2;
    if sq == 0.0 {
        return Err(Error::DegenerateBeam("both Schmidt weights are zero".into()));
    }
    Ok((lambda1 + lambda2).powi(2) / sq)
}

/// Closed-form Schmidt number of the polarization-position beam,
/// `2 / (1 + I(a)²)`.
pub fn k_of_separation(a: f64, w0: f64) -> Result<f64> {
    let overlap = overlap_gaussian_analytic(a, w0)?;
    Ok(2.0 / (1.0 + overlap * overlap))
}

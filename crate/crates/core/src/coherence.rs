//! Polarization coherence: pointwise density, integrated covariance matrix,
//! degree of polarization, and party-reduced matrices of three-qubit tensors.
//!
//! Densities are written in the fixed H/V basis, `𝒥[p][q] = E_p conj(E_q)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::beam::{sample_beam, BeamFamily, TripartiteTensor, VectorBeam};
use crate::error::{Error, Result};
use crate::grid::{FieldGrid, SampledVectorField};
use crate::linalg::Mat2;
use crate::modes::ScalarMode;

/// Per-node 2×2 coherence matrices in grid order.
#[derive(Debug, Clone)]
pub struct CoherenceDensity {
    grid: FieldGrid,
    entries: Vec<Mat2>,
}

impl CoherenceDensity {
    pub fn grid(&self) -> &FieldGrid {
        &self.grid
    }

    pub fn entries(&self) -> &[Mat2] {
        &self.entries
    }

    pub fn at(&self, i: usize, j: usize) -> &Mat2 {
        &self.entries[self.grid.index(i, j)]
    }

    /// Fraction `∫|𝒥_HV| / ∫ tr 𝒥` of off-diagonal mass before integration.
    ///
    /// Zero for beams whose orthogonally polarized parts never overlap,
    /// non-zero for coherent superpositions sharing one support.
    pub fn offdiagonal_fraction(&self) -> f64 {
        let off: Vec<f64> = self.entries.iter().map(|m| m.get(0, 1).norm()).collect();
        let tr: Vec<f64> = self.entries.iter().map(|m| m.trace().re).collect();
        let denom = self.grid.integrate_real(&tr);
        if denom > 0.0 {
            self.grid.integrate_real(&off) / denom
        } else {
            0.0
        }
    }
}

/// Integrated polarization covariance `J = ∫ 𝒥 d²ρ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(transparent)]
pub struct CovarianceMatrix {
    pub j: Mat2,
}

impl CovarianceMatrix {
    pub fn trace(&self) -> f64 {
        self.j.trace().re
    }

    /// Eigenvalues, descending.
    pub fn eigenvalues(&self) -> [f64; 2] {
        self.j.hermitian_eigen().values
    }

    /// `J / tr J`.
    pub fn normalized(&self) -> Result<Mat2> {
        let t = self.trace();
        if !(t > 0.0) {
            return Err(Error::DegenerateBeam("covariance matrix has zero trace".into()));
        }
        Ok(self.j.scale(1.0 / t))
    }
}

/// Which party of a three-qubit tensor to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Party {
    Polarization,
    X,
    Y,
}

pub fn coherence_density(beam: &VectorBeam, grid: &FieldGrid) -> CoherenceDensity {
    coherence_density_of(&sample_beam(beam, grid))
}

/// Pointwise `E E†` of a sampled field.
pub fn coherence_density_of(field: &SampledVectorField) -> CoherenceDensity {
    let entries = field.ex().iter().zip(field.ey()).map(|(&h, &v)| Mat2::outer([h, v], [h, v])).collect();
    CoherenceDensity { grid: *field.grid(), entries }
}

/// Entrywise trapezoidal integral of the density.
pub fn covariance_matrix(density: &CoherenceDensity) -> CovarianceMatrix {
    let mut j = Mat2::ZERO;
    let mut buf = vec![Complex64::new(0.0, 0.0); density.entries.len()];
    for r in 0..2 {
        for c in 0..2 {
            for (b, m) in buf.iter_mut().zip(&density.entries) {
                *b = m.get(r, c);
            }
            j.0[r][c] = density.grid.integrate_complex(&buf);
        }
    }
    CovarianceMatrix { j }
}

/// `√(1 - 4 det J / (tr J)²)`, clamped to `[0, 1]`.
pub fn degree_of_polarization(j: &CovarianceMatrix) -> Result<f64> {
    let t = j.trace();
    if !(t > 0.0) {
        return Err(Error::DegenerateBeam("covariance matrix has zero trace".into()));
    }
    let det = j.j.det().re;
    Ok((1.0 - 4.0 * det / (t * t)).clamp(0.0, 1.0).sqrt())
}

/// Reduced matrix of one party: contract `c ⊗ c*` over the other two.
pub fn reduced_party_matrix(t: &TripartiteTensor, party: Party) -> Mat2 {
    let mut m = Mat2::ZERO;
    for a in 0..2 {
        for b in 0..2 {
            for o1 in 0..2 {
                for o2 in 0..2 {
                    let (ia, ib) = match party {
                        Party::Polarization => ((a, o1, o2), (b, o1, o2)),
                        Party::X => ((o1, a, o2), (o1, b, o2)),
                        Party::Y => ((o1, o2, a), (o1, o2, b)),
                    };
                    m.0[a][b] += t.c[ia.0][ia.1][ia.2] * t.c[ib.0][ib.1][ib.2].conj();
                }
            }
        }
    }
    m
}

/// Reduced matrix of the vertical (up/down) position qubit of a fourfold
/// beam, tracing out the horizontal (left/right) qubit.
///
/// With disjoint spots of side `b` the spot profiles are orthogonal with
/// norm `b`, so the result is `b² A A†` for the coefficient matrix `A`
/// (rows: up/down, columns: left/right).
pub fn position_covariance(beam: &VectorBeam) -> Result<CovarianceMatrix> {
    if beam.family() != BeamFamily::Fourfold {
        return Err(Error::NotRepresentable(format!(
            "position qubits are defined for fourfold beams, not {}",
            beam.family()
        )));
    }
    let mut a = [[Complex64::new(0.0, 0.0); 2]; 2];
    let mut width = None;
    for t in beam.terms() {
        let ScalarMode::Rect(r) = &t.mode else {
            return Err(Error::NotRepresentable("fourfold beam with a non-rect term".into()));
        };
        if r.width() >= 2.0 * r.half_separation() {
            return Err(Error::InvalidGeometry("position qubits need disjoint spots (b < 2a)".into()));
        }
        // The common polarization only contributes its norm.
        let (i, j) = r.quadrant();
        a[i as usize][j as usize] += t.coeff * t.pol.norm();
        width = Some(r.width());
    }
    let b = width.expect("fourfold beams have four terms");
    let am = Mat2(a);
    Ok(CovarianceMatrix { j: (am * am.adjoint()).scale(b * b) })
}

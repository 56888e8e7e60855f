//! Synthesis and analysis of classically entangled paraxial beams.
//!
//! A beam is a finite sum of `coefficient × Jones vector × scalar mode`
//! terms ([`VectorBeam`]). Scalar modes come from a small analytic catalog
//! (fundamental Gaussian, Hermite-Gauss, rect spots and their shifts), and
//! the analysis side samples beams on a uniform [`FieldGrid`] to compute the
//! polarization/space Schmidt decomposition, the Schmidt number and the
//! polarization coherence matrix.
//!
//! Units: transverse lengths are measured in units of a reference waist and
//! `z` in Rayleigh ranges of a beam with that reference waist. A mode of
//! waist `w0` therefore has Rayleigh range `w0²` in these units.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod beam;
pub mod coherence;
pub mod config;
pub mod error;
pub mod grid;
pub mod linalg;
pub mod modes;
pub mod output;
pub mod schmidt;

pub use beam::{
    eval_beam, factorize_tripartite, make_fourfold_beam, make_ghz_beam, make_noon_beam, make_pp_beam, make_ps_beam,
    make_radial_beam, make_w_beam, sample_beam, scale_beam, total_intensity, BeamFamily, BeamParams, BeamTerm,
    JonesVector, TripartiteTensor, VectorBeam,
};
pub use coherence::{
    coherence_density, covariance_matrix, degree_of_polarization, position_covariance, reduced_party_matrix,
    CoherenceDensity, CovarianceMatrix, Party,
};
pub use config::{BeamConfig, Family};
pub use error::{Error, Result};
pub use grid::{inner_product_sampled, integrate, make_grid, FieldGrid, SampledScalarField, SampledVectorField};
pub use linalg::Mat2;
pub use modes::{
    overlap_gaussian_analytic, sample_mode, GaussianFundamental, HermiteGauss1D, HermiteGauss2D, RectMode, ScalarMode,
    ShiftedMode,
};
pub use output::AnalysisReport;
pub use schmidt::{k_of_separation, schmidt_decompose, schmidt_number, spatial_gram, SchmidtResult};

pub use num_complex::Complex64;

//! Small dense helpers: 2×2 complex matrices and their Hermitian spectra.

use std::ops::{Add, AddAssign, Mul};

use num_complex::Complex64;
use serde::{Serialize, Serializer};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// A 2×2 complex matrix, `m[row][col]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

/// Eigen-decomposition of a 2×2 Hermitian matrix, eigenvalues descending.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianEigen2 {
    pub values: [f64; 2],
    /// Orthonormal eigenvectors, `vectors[k]` pairs with `values[k]`.
    pub vectors: [[Complex64; 2]; 2],
    /// The two eigenvalues were treated as equal.
    pub degenerate: bool,
}

impl Mat2 {
    pub const ZERO: Mat2 = Mat2([[ZERO; 2]; 2]);

    pub fn identity() -> Self {
        Mat2::diag(1.0, 1.0)
    }

    pub fn diag(a: f64, d: f64) -> Self {
        Mat2([[Complex64::new(a, 0.0), ZERO], [ZERO, Complex64::new(d, 0.0)]])
    }

    /// `u v†`.
    pub fn outer(u: [Complex64; 2], v: [Complex64; 2]) -> Self {
        Mat2([[u[0] * v[0].conj(), u[0] * v[1].conj()], [u[1] * v[0].conj(), u[1] * v[1].conj()]])
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.0[r][c]
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn scale(&self, s: f64) -> Self {
        let m = &self.0;
        Mat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                worst = worst.max((self.0[r][c] - other.0[r][c]).norm());
            }
        }
        worst
    }

    /// Largest entrywise modulus of `self - self†`.
    pub fn hermiticity_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// Row-major `[re00, im00, re01, im01, re10, im10, re11, im11]`.
    pub fn to_reals(&self) -> [f64; 8] {
        let m = &self.0;
        [m[0][0].re, m[0][0].im, m[0][1].re, m[0][1].im, m[1][0].re, m[1][0].im, m[1][1].re, m[1][1].im]
    }

    /// Spectrum of the Hermitian part of the matrix.
    ///
    /// Eigenvalues closer than `1e-10 × (|λ₁| + |λ₂|)` count as degenerate,
    /// in which case the eigenbasis is the standard basis. Otherwise the
    /// leading eigenvector is well defined up to phase. Each eigenvector has
    /// its first component above `1e-12` made real and non-negative.
    pub fn hermitian_eigen(&self) -> HermitianEigen2 {
        let a = self.0[0][0].re;
        let d = self.0[1][1].re;
        let b = 0.5 * (self.0[0][1] + self.0[1][0].conj());
        let mean = 0.5 * (a + d);
        let half_gap = 0.5 * (a - d);
        let radius = half_gap.hypot(b.norm());
        let l1 = mean + radius;
        let det = a * d - b.norm_sqr();
        let l2 = if l1.abs() > 0.0 && mean > 0.0 { det / l1 } else { mean - radius };

        let scale = l1.abs() + l2.abs();
        if radius <= 1e-10 * scale || radius == 0.0 {
            let one = Complex64::new(1.0, 0.0);
            return HermitianEigen2 { values: [l1, l2], vectors: [[one, ZERO], [ZERO, one]], degenerate: true };
        }

        // Two algebraically equivalent candidates; keep the larger one.
        let c1 = [b, Complex64::new(l1 - a, 0.0)];
        let c2 = [Complex64::new(l1 - d, 0.0), b.conj()];
        let n1 = (c1[0].norm_sqr() + c1[1].norm_sqr()).sqrt();
        let n2 = (c2[0].norm_sqr() + c2[1].norm_sqr()).sqrt();
        let (v, n) = if n1 >= n2 { (c1, n1) } else { (c2, n2) };
        let v1 = fix_phase([v[0] / n, v[1] / n]);
        let v2 = fix_phase([-v1[1].conj(), v1[0].conj()]);
        HermitianEigen2 { values: [l1, l2], vectors: [v1, v2], degenerate: false }
    }
}

/// Rotates a 2-vector so that its first component with modulus above
/// `1e-12` is real and positive.
pub fn fix_phase(v: [Complex64; 2]) -> [Complex64; 2] {
    let lead = v.iter().copied().find(|c| c.norm() > 1e-12);
    match lead {
        Some(c) => {
            let p = c.conj() / c.norm();
            [v[0] * p, v[1] * p]
        }
        None => v,
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(mut self, rhs: Mat2) -> Mat2 {
        self += rhs;
        self
    }
}

impl AddAssign for Mat2 {
    fn add_assign(&mut self, rhs: Mat2) {
        for r in 0..2 {
            for c in 0..2 {
                self.0[r][c] += rhs.0[r][c];
            }
        }
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut out = [[ZERO; 2]; 2];
        for (r, row) in out.iter_mut().enumerate() {
            for (c, cell) in row.iter_mut().enumerate() {
                *cell = a[r][0] * b[0][c] + a[r][1] * b[1][c];
            }
        }
        Mat2(out)
    }
}

impl Serialize for Mat2 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_reals().serialize(s)
    }
}

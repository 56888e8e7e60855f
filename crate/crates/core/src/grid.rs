//! Uniform transverse grids, sampled fields and trapezoidal quadrature.
//!
//! Samples are stored row-major with `y` as the outer index, so node
//! `(i, j)` (column `i` along x, row `j` along y) lives at `j * nx + i`.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A uniform Cartesian sampling of the transverse plane at fixed `z`.
///
/// Both endpoints of each axis are sample nodes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldGrid {
    nx: usize,
    ny: usize,
    x_min: f64,
    x_max: f64,
    y_min: f64,
    y_max: f64,
    z: f64,
}

impl FieldGrid {
    pub fn new(nx: usize, ny: usize, x: (f64, f64), y: (f64, f64), z: f64) -> Result<Self> {
        if nx < 2 || ny < 2 {
            return Err(Error::InvalidParameter(format!("grid needs at least 2 samples per axis, got {nx}x{ny}")));
        }
        let finite = [x.0, x.1, y.0, y.1, z].iter().all(|v| v.is_finite());
        if !finite || x.1 <= x.0 || y.1 <= y.0 {
            return Err(Error::InvalidParameter(format!(
                "grid bounds must be finite and increasing, got x={x:?} y={y:?} z={z}"
            )));
        }
        Ok(FieldGrid { nx, ny, x_min: x.0, x_max: x.1, y_min: y.0, y_max: y.1, z })
    }

    pub fn nx(&self) -> usize {
        self.nx
    }

    pub fn ny(&self) -> usize {
        self.ny
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn x_bounds(&self) -> (f64, f64) {
        (self.x_min, self.x_max)
    }

    pub fn y_bounds(&self) -> (f64, f64) {
        (self.y_min, self.y_max)
    }

    pub fn z(&self) -> f64 {
        self.z
    }

    /// Same sampling, different propagation distance.
    pub fn at_z(&self, z: f64) -> Result<Self> {
        FieldGrid::new(self.nx, self.ny, self.x_bounds(), self.y_bounds(), z)
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.nx - 1) as f64
    }

    pub fn dy(&self) -> f64 {
        (self.y_max - self.y_min) / (self.ny - 1) as f64
    }

    /// x coordinate of column `i`.
    ///
    /// Computed from the axis midpoint so that a symmetric grid is exactly
    /// antisymmetric under `i -> nx - 1 - i`.
    pub fn x(&self, i: usize) -> f64 {
        axis_node(self.x_min, self.x_max, self.nx, i)
    }

    /// y coordinate of row `j`.
    pub fn y(&self, j: usize) -> f64 {
        axis_node(self.y_min, self.y_max, self.ny, j)
    }

    pub fn index(&self, i: usize, j: usize) -> usize {
        j * self.nx + i
    }

    /// Node coordinates in storage order.
    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.ny).flat_map(move |j| (0..self.nx).map(move |i| (self.x(i), self.y(j))))
    }

    fn weights(n: usize, h: f64) -> Vec<f64> {
        let mut w = vec![h; n];
        w[0] = 0.5 * h;
        w[n - 1] = 0.5 * h;
        w
    }

    /// Trapezoidal quadrature of real samples stored in grid order.
    pub fn integrate_real(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.len());
        let wx = Self::weights(self.nx, self.dx());
        let wy = Self::weights(self.ny, self.dy());
        let mut total = 0.0;
        for (row, wj) in values.chunks_exact(self.nx).zip(&wy) {
            let row_sum: f64 = row.iter().zip(&wx).map(|(v, w)| v * w).sum();
            total += wj * row_sum;
        }
        total
    }

    /// Trapezoidal quadrature of complex samples stored in grid order.
    pub fn integrate_complex(&self, values: &[Complex64]) -> Complex64 {
        debug_assert_eq!(values.len(), self.len());
        let wx = Self::weights(self.nx, self.dx());
        let wy = Self::weights(self.ny, self.dy());
        let mut total = Complex64::new(0.0, 0.0);
        for (row, wj) in values.chunks_exact(self.nx).zip(&wy) {
            let row_sum: Complex64 = row.iter().zip(&wx).map(|(v, w)| v * w).sum();
            total += row_sum * wj;
        }
        total
    }

    /// Quadrature of `conj(a) * b` without materialising the product.
    pub fn integrate_conj_product(&self, a: &[Complex64], b: &[Complex64]) -> Complex64 {
        debug_assert_eq!(a.len(), self.len());
        debug_assert_eq!(b.len(), self.len());
        let wx = Self::weights(self.nx, self.dx());
        let wy = Self::weights(self.ny, self.dy());
        let mut total = Complex64::new(0.0, 0.0);
        for ((ra, rb), wj) in a.chunks_exact(self.nx).zip(b.chunks_exact(self.nx)).zip(&wy) {
            let row_sum: Complex64 = ra.iter().zip(rb).zip(&wx).map(|((p, q), w)| p.conj() * q * w).sum();
            total += row_sum * wj;
        }
        total
    }
}

fn axis_node(lo: f64, hi: f64, n: usize, k: usize) -> f64 {
    let mid = 0.5 * (lo + hi);
    let half_step = (hi - lo) / (2 * (n - 1)) as f64;
    mid + (2 * k as i64 - (n as i64 - 1)) as f64 * half_step
}

/// The symmetric square grid `[-extent, extent]²` at distance `z`.
pub fn make_grid(nx: usize, ny: usize, extent: f64, z: f64) -> Result<FieldGrid> {
    if !(extent > 0.0) {
        return Err(Error::InvalidParameter(format!("extent must be positive, got {extent}")));
    }
    FieldGrid::new(nx, ny, (-extent, extent), (-extent, extent), z)
}

/// Complex scalar samples on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledScalarField {
    grid: FieldGrid,
    values: Vec<Complex64>,
}

impl SampledScalarField {
    pub fn new(grid: FieldGrid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidParameter(format!("expected {} samples, got {}", grid.len(), values.len())));
        }
        if !values.iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParameter("field samples must be finite".into()));
        }
        Ok(SampledScalarField { grid, values })
    }

    /// Samples `f(x, y)` at every node.
    pub fn from_fn(grid: FieldGrid, f: impl Fn(f64, f64) -> Complex64) -> Result<Self> {
        let values = grid.nodes().map(|(x, y)| f(x, y)).collect();
        SampledScalarField::new(grid, values)
    }

    pub fn zeros(grid: FieldGrid) -> Self {
        SampledScalarField { grid, values: vec![Complex64::new(0.0, 0.0); grid.len()] }
    }

    pub fn grid(&self) -> &FieldGrid {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[self.grid.index(i, j)]
    }

    /// Quadrature L² norm.
    pub fn norm(&self) -> f64 {
        self.grid.integrate_conj_product(&self.values, &self.values).re.max(0.0).sqrt()
    }
}

/// Jones-vector samples (H and V components) on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledVectorField {
    grid: FieldGrid,
    ex: Vec<Complex64>,
    ey: Vec<Complex64>,
}

impl SampledVectorField {
    pub fn new(grid: FieldGrid, ex: Vec<Complex64>, ey: Vec<Complex64>) -> Result<Self> {
        if ex.len() != grid.len() || ey.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "expected {} samples per component, got {} and {}",
                grid.len(),
                ex.len(),
                ey.len()
            )));
        }
        if !ex.iter().chain(&ey).all(|v| v.is_finite()) {
            return Err(Error::InvalidParameter("field samples must be finite".into()));
        }
        Ok(SampledVectorField { grid, ex, ey })
    }

    pub fn grid(&self) -> &FieldGrid {
        &self.grid
    }

    /// Horizontal (H) component.
    pub fn ex(&self) -> &[Complex64] {
        &self.ex
    }

    /// Vertical (V) component.
    pub fn ey(&self) -> &[Complex64] {
        &self.ey
    }

    /// Pointwise intensity `|E_H|² + |E_V|²`.
    pub fn intensity(&self) -> Vec<f64> {
        self.ex.iter().zip(&self.ey).map(|(h, v)| h.norm_sqr() + v.norm_sqr()).collect()
    }

    /// Quadrature of the intensity.
    pub fn total_intensity(&self) -> f64 {
        self.grid.integrate_real(&self.intensity())
    }

    /// Quadrature L² distance to another field on the same grid.
    pub fn distance(&self, other: &SampledVectorField) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::IncompatibleGrid);
        }
        let diff: Vec<f64> = self
            .ex
            .iter()
            .zip(&self.ey)
            .zip(other.ex.iter().zip(&other.ey))
            .map(|((a, b), (c, d))| (a - c).norm_sqr() + (b - d).norm_sqr())
            .collect();
        Ok(self.grid.integrate_real(&diff).max(0.0).sqrt())
    }
}

/// Trapezoidal quadrature of a sampled field over its grid rectangle.
pub fn integrate(field: &SampledScalarField) -> Complex64 {
    field.grid.integrate_complex(&field.values)
}

/// Spatial scalar product `∫ conj(a) b d²ρ`.
pub fn inner_product_sampled(a: &SampledScalarField, b: &SampledScalarField) -> Result<Complex64> {
    if a.grid != b.grid {
        return Err(Error::IncompatibleGrid);
    }
    Ok(a.grid.integrate_conj_product(&a.values, &b.values))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn make_grid_spacing() {
        let g = make_grid(256, 256, 4.0, 0.0).unwrap();
        assert!((g.dx() - 8.0 / 255.0).abs() < 1e-15);
        assert!((g.dx() - 0.031373).abs() < 1e-6);
        assert_eq!(g.z(), 0.0);

        let g = make_grid(2, 2, 1.0, 0.0).unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(g.dx(), 2.0);
        assert_eq!(g.dy(), 2.0);
        assert_eq!(g.x(0), -1.0);
        assert_eq!(g.x(1), 1.0);
    }

    #[test]
    fn make_grid_rejects_bad_input() {
        assert!(matches!(make_grid(256, 256, -1.0, 0.0), Err(Error::InvalidParameter(_))));
        assert!(matches!(make_grid(256, 256, 0.0, 0.0), Err(Error::InvalidParameter(_))));
        assert!(matches!(make_grid(1, 256, 1.0, 0.0), Err(Error::InvalidParameter(_))));
        assert!(make_grid(4, 4, f64::NAN, 0.0).is_err());
    }

    #[test]
    fn symmetric_nodes_are_mirror_exact() {
        let g = make_grid(511, 512, 8.0, 0.0).unwrap();
        for i in 0..g.nx() {
            assert_eq!(g.x(i), -g.x(g.nx() - 1 - i));
        }
        for j in 0..g.ny() {
            assert_eq!(g.y(j), -g.y(g.ny() - 1 - j));
        }
        assert_eq!(g.x(255), 0.0);
        assert!((g.x(g.nx() - 1) - 8.0).abs() < 1e-14);
    }

    #[test]
    fn constant_field_integrates_to_area() {
        let g = make_grid(33, 17, 1.0, 0.0).unwrap();
        let f = SampledScalarField::from_fn(g, |_, _| c(1.0)).unwrap();
        assert!((integrate(&f) - c(4.0)).norm() < 1e-13);
    }

    #[test]
    fn odd_field_integrates_to_zero() {
        let g = make_grid(64, 64, 3.0, 0.0).unwrap();
        let f = SampledScalarField::from_fn(g, |x, _| c(x)).unwrap();
        assert!(integrate(&f).norm() < 1e-12);
    }

    #[test]
    fn inner_product_requires_matching_grids() {
        let g1 = make_grid(8, 8, 1.0, 0.0).unwrap();
        let g2 = make_grid(8, 8, 2.0, 0.0).unwrap();
        let a = SampledScalarField::zeros(g1);
        let b = SampledScalarField::zeros(g2);
        assert!(matches!(inner_product_sampled(&a, &b), Err(Error::IncompatibleGrid)));
    }

    #[test]
    fn sampled_field_validates_shape_and_finiteness() {
        let g = make_grid(4, 4, 1.0, 0.0).unwrap();
        assert!(SampledScalarField::new(g, vec![c(0.0); 15]).is_err());
        let mut v = vec![c(0.0); 16];
        v[3] = c(f64::INFINITY);
        assert!(SampledScalarField::new(g, v).is_err());
        assert!(SampledVectorField::new(g, vec![c(0.0); 16], vec![c(0.0); 4]).is_err());
    }

    #[test]
    fn storage_order_is_row_major_y_outer() {
        let g = make_grid(3, 2, 1.0, 0.0).unwrap();
        let nodes: Vec<_> = g.nodes().collect();
        assert_eq!(nodes[0], (-1.0, -1.0));
        assert_eq!(nodes[1], (0.0, -1.0));
        assert_eq!(nodes[3], (-1.0, 1.0));
        assert_eq!(g.index(2, 1), 5);
    }
}

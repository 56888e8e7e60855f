//! Fixtures shared by the criterion benches.

use cebeam_core::{make_grid, FieldGrid, VectorBeam};

/// Catalog beams benchmarked by default, with their labels.
pub fn catalog() -> Vec<(&'static str, VectorBeam)> {
    vec![
        ("radial", cebeam_core::make_radial_beam(1.0).unwrap()),
        ("pp", cebeam_core::make_pp_beam(1.0, 1.0).unwrap()),
        ("w", cebeam_core::make_w_beam(1.0).unwrap()),
        ("noon4", cebeam_core::make_noon_beam(4, std::f64::consts::FRAC_PI_3, 1.0).unwrap()),
    ]
}

/// Square grid of `n × n` nodes over the default window.
pub fn square(n: usize) -> FieldGrid {
    make_grid(n, n, 8.0, 0.0).unwrap()
}

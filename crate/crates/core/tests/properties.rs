mod common;

use cebeam_core::coherence::coherence_density_of;
use cebeam_core::modes::analytic_inner_product;
use cebeam_core::output::stokes;
use cebeam_core::*;
use proptest::prelude::*;

use common::{eig2_bisection, gram_rows, hg_closed_form};

fn c64() -> impl Strategy<Value = Complex64> {
    (-1.0..1.0f64, -1.0..1.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn jones() -> impl Strategy<Value = JonesVector> {
    (c64(), c64())
        .prop_filter("non-zero polarization", |(h, v)| h.norm() + v.norm() > 0.1)
        .prop_map(|(h, v)| JonesVector::new(h, v))
}

fn hg_mode() -> impl Strategy<Value = ScalarMode> {
    (0u32..=3, 0u32..=3).prop_map(|(n, m)| ScalarMode::hermite_gauss(n, m, 1.0).unwrap())
}

fn catalog_mode() -> impl Strategy<Value = ScalarMode> {
    prop_oneof![
        hg_mode(),
        (0.7..1.4f64, -1.5..1.5f64, -1.5..1.5f64)
            .prop_map(|(w0, dx, dy)| ScalarMode::gaussian(w0).unwrap().shifted(dx, dy)),
        (0u8..2, 0u8..2, 0.8..1.5f64, 0.3..1.5f64).prop_map(|(i, j, a, b)| RectMode::new(i, j, a, b).unwrap().into()),
    ]
}

fn beam_from(terms: Vec<(Complex64, JonesVector, ScalarMode)>) -> Option<VectorBeam> {
    let terms: Vec<BeamTerm> =
        terms.into_iter().filter(|t| t.0.norm() > 0.05).map(|(c, p, m)| BeamTerm::new(c, p, m)).collect();
    VectorBeam::custom(terms).ok()
}

fn random_beam() -> impl Strategy<Value = VectorBeam> {
    prop::collection::vec((c64(), jones(), catalog_mode()), 1..5).prop_filter_map("empty beam", beam_from)
}

fn hg_beam() -> impl Strategy<Value = VectorBeam> {
    prop::collection::vec((c64(), jones(), hg_mode()), 1..5).prop_filter_map("empty beam", beam_from)
}

fn small_grid() -> FieldGrid {
    make_grid(96, 96, 6.0, 0.0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn inner_product_is_hermitian_and_sesquilinear(
        f in catalog_mode(), g in catalog_mode(), h in catalog_mode(), alpha in c64(), beta in c64()
    ) {
        let grid = make_grid(48, 48, 4.0, 0.3).unwrap();
        let (sf, sg, sh) = (sample_mode(&f, &grid), sample_mode(&g, &grid), sample_mode(&h, &grid));
        let fg = inner_product_sampled(&sf, &sg).unwrap();
        let gf = inner_product_sampled(&sg, &sf).unwrap();
        prop_assert!((fg - gf.conj()).norm() < 1e-13);

        let combo: Vec<Complex64> =
            sg.values().iter().zip(sh.values()).map(|(a, b)| alpha * a + beta * b).collect();
        let combo = SampledScalarField::new(grid, combo).unwrap();
        let lhs = inner_product_sampled(&sf, &combo).unwrap();
        let rhs = alpha * fg + beta * inner_product_sampled(&sf, &sh).unwrap();
        prop_assert!((lhs - rhs).norm() < 1e-12);
        let ff = inner_product_sampled(&sf, &sf).unwrap();
        prop_assert!(ff.re >= 0.0 && ff.im.abs() < 1e-15);
    }

    #[test]
    fn hermite_gauss_parity(n in 0u32..6, m in 0u32..6, x in -3.0..3.0f64, y in -3.0..3.0f64, z in -2.0..2.0f64) {
        let u = HermiteGauss2D::new(n, m, 1.0).unwrap();
        let sx = if n % 2 == 0 { 1.0 } else { -1.0 };
        let sy = if m % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert!((u.eval(-x, y, z) - sx * u.eval(x, y, z)).norm() < 1e-15);
        prop_assert!((u.eval(x, -y, z) - sy * u.eval(x, y, z)).norm() < 1e-15);
    }

    #[test]
    fn hermite_gauss_matches_closed_form(
        n in 0u32..5, m in 0u32..5, w0 in 0.5..2.0f64, x in -3.0..3.0f64, y in -3.0..3.0f64, z in -3.0..3.0f64
    ) {
        let u = HermiteGauss2D::new(n, m, w0).unwrap();
        let expected = hg_closed_form(n, m, w0, x, y, z);
        prop_assert!((u.eval(x, y, z) - expected).norm() < 1e-12 * (1.0 + expected.norm()));
        let product = u.x_factor().eval(x, z) * u.y_factor().eval(y, z);
        prop_assert!((u.eval(x, y, z) - product).norm() < 1e-15);
    }

    #[test]
    fn shifted_modes_translate(mode in catalog_mode(), dx in -2.0..2.0f64, dy in -2.0..2.0f64,
                               x in -3.0..3.0f64, y in -3.0..3.0f64, z in 0.0..2.0f64) {
        let shifted = mode.clone().shifted(dx, dy);
        let direct = mode.eval(x - dx, y - dy, z);
        prop_assert!((shifted.eval(x, y, z) - direct).norm() <= 1e-13 * (1.0 + direct.norm()));
        let twice = shifted.shifted(-dx, -dy);
        prop_assert!((twice.eval(x, y, z) - mode.eval(x, y, z)).norm() < 1e-12);
    }

    #[test]
    fn analytic_gram_entries_agree_with_quadrature(f in catalog_mode(), g in catalog_mode()) {
        let grid = make_grid(401, 401, 8.0, 0.0).unwrap();
        if let Some(exact) = analytic_inner_product(&f, &g) {
            let q = inner_product_sampled(&sample_mode(&f, &grid), &sample_mode(&g, &grid)).unwrap();
            // Rect edges limit trapezoid accuracy to O(dx).
            let is_rect = |m: &ScalarMode| matches!(m, ScalarMode::Rect(_));
            let tol = if is_rect(&f) || is_rect(&g) { 6.0 * grid.dx() } else { 1e-10 };
            prop_assert!((q - exact).norm() < tol, "{q} vs {exact}");
        }
    }

    #[test]
    fn gaussian_overlap_formula(a in 0.0..2.5f64, w0 in 0.6..1.5f64) {
        let grid = make_grid(256, 256, a + 8.0 * w0, 0.0).unwrap();
        let g = ScalarMode::gaussian(w0).unwrap();
        let q = inner_product_sampled(
            &sample_mode(&g.clone().shifted(0.0, a), &grid),
            &sample_mode(&g.shifted(0.0, -a), &grid),
        ).unwrap();
        prop_assert!((q.re - (-2.0 * a * a / (w0 * w0)).exp()).abs() < 1e-9);
        prop_assert!(q.im.abs() < 1e-12);
    }

    #[test]
    fn schmidt_bounds_and_reconstruction(beam in random_beam()) {
        let grid = small_grid();
        let r = schmidt_decompose(&beam, &grid).unwrap();
        let total = total_intensity(&beam, &grid);
        prop_assert!(r.lambda1 >= r.lambda2 && r.lambda2 >= 0.0);
        prop_assert!((r.lambda1 + r.lambda2 - total).abs() < 1e-10 * total);
        prop_assert!((1.0..=2.0 + 1e-12).contains(&r.k), "K = {}", r.k);
        prop_assert!(r.residual < 1e-9, "residual {}", r.residual);
        prop_assert!(r.pol_modes[0].inner(&r.pol_modes[1]).norm() < 1e-12);
        for v in &r.spatial_modes {
            prop_assert!((v.norm() - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn schmidt_number_is_scale_invariant(beam in random_beam(), r in 0.05..20.0f64, phi in -3.2..3.2f64) {
        let grid = small_grid();
        let c = Complex64::from_polar(r, phi);
        let k0 = schmidt_decompose(&beam, &grid).unwrap().k;
        let k1 = schmidt_decompose(&scale_beam(&beam, c).unwrap(), &grid).unwrap().k;
        prop_assert!((k0 - k1).abs() < 1e-12, "{k0} vs {k1}");
    }

    #[test]
    fn hg_schmidt_number_is_propagation_invariant(beam in hg_beam(), z in 0.5..2.5f64) {
        let extent = 8.0 * (1.0 + z * z).sqrt();
        let k0 = schmidt_decompose(&beam, &make_grid(192, 192, 8.0, 0.0).unwrap()).unwrap().k;
        let kz = schmidt_decompose(&beam, &make_grid(192, 192, extent, z).unwrap()).unwrap().k;
        prop_assert!((k0 - kz).abs() < 1e-9, "{k0} vs {kz}");
    }

    #[test]
    fn covariance_matches_schmidt_weights(beam in random_beam()) {
        let grid = small_grid();
        let field = sample_beam(&beam, &grid);
        let density = coherence_density_of(&field);
        let j = covariance_matrix(&density);
        let total = field.total_intensity();
        prop_assert!((j.trace() - total).abs() < 1e-10 * total);
        prop_assert!(j.j.hermiticity_defect() < 1e-12 * total);
        let r = schmidt_decompose(&beam, &grid).unwrap();
        let [e1, e2] = j.eigenvalues();
        prop_assert!((e1 - r.lambda1).abs() < 1e-10 * total && (e2 - r.lambda2).abs() < 1e-10 * total);
        for m in density.entries() {
            let scale = m.trace().re.max(1e-300);
            prop_assert!(m.hermiticity_defect() <= 1e-12 * scale);
            prop_assert!(m.det().re >= -1e-12 * scale * scale);
        }
    }

    #[test]
    fn stokes_vectors_are_pure(beam in random_beam()) {
        let field = sample_beam(&beam, &make_grid(32, 32, 3.0, 0.7).unwrap());
        for [s0, s1, s2, s3] in stokes(&field) {
            prop_assert!((s0 * s0 - s1 * s1 - s2 * s2 - s3 * s3).abs() <= 1e-12 * s0 * s0 + 1e-300);
        }
    }

    #[test]
    fn tripartite_tensor_reconstructs_beam(
        coeffs in prop::collection::vec(c64(), 8), x in -3.0..3.0f64, y in -3.0..3.0f64, z in -2.0..2.0f64
    ) {
        let mut terms = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            let (p, n, m) = (k / 4, (k / 2) % 2, k % 2);
            let pol = if p == 0 { JonesVector::H } else { JonesVector::V };
            terms.push(BeamTerm::new(*c, pol, ScalarMode::hermite_gauss(n as u32, m as u32, 1.3).unwrap()));
        }
        let beam = VectorBeam::custom(terms).unwrap();
        let t = factorize_tripartite(&beam).unwrap();
        for (k, c) in coeffs.iter().enumerate() {
            prop_assert_eq!(t.get(k / 4, (k / 2) % 2, k % 2), *c);
        }
        let (h, v) = eval_beam(&beam, x, y, z);
        let (th, tv) = t.eval(x, y, z);
        prop_assert!((h - th).norm() < 1e-10 && (v - tv).norm() < 1e-10);
        let rho = reduced_party_matrix(&t, Party::X);
        prop_assert!(rho.hermiticity_defect() < 1e-14);
        prop_assert!((rho.trace().re - t.norm_sqr()).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn weights_match_brute_force_eigen_solve(coeffs in prop::collection::vec(c64(), 8)) {
        let modes = [(0, 0), (1, 0), (0, 1), (1, 1)];
        let mut terms = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            let pol = if k < 4 { JonesVector::H } else { JonesVector::V };
            let (n, m) = modes[k % 4];
            terms.push(BeamTerm::new(*c, pol, ScalarMode::hermite_gauss(n, m, 1.0).unwrap()));
        }
        let beam = VectorBeam::custom(terms).unwrap();
        let r = schmidt_decompose(&beam, &small_grid()).unwrap();
        let rows = [coeffs[..4].to_vec(), coeffs[4..].to_vec()];
        let [o1, o2] = eig2_bisection(gram_rows(&rows));
        prop_assert!((r.lambda1 - o1).abs() < 1e-10 && (r.lambda2 - o2.max(0.0)).abs() < 1e-10,
            "({}, {}) vs ({o1}, {o2})", r.lambda1, r.lambda2);
    }
}

fn rotate_quarter(values: &[f64], n: usize) -> Vec<f64> {
    // (x, y) -> (-y, x) on a square symmetric grid.
    let mut out = vec![0.0; values.len()];
    for j in 0..n {
        for i in 0..n {
            out[i * n + (n - 1 - j)] = values[j * n + i];
        }
    }
    out
}

#[test]
fn ghz_is_rotation_symmetric_and_w_is_not() {
    let grid = make_grid(128, 128, 5.0, 0.0).unwrap();
    for (beam, symmetric) in [(make_ghz_beam(1.0).unwrap(), true), (make_w_beam(1.0).unwrap(), false)] {
        let img = sample_beam(&beam, &grid).intensity();
        let peak = img.iter().cloned().fold(0.0, f64::max);
        let dev = img.iter().zip(rotate_quarter(&img, 128)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        if symmetric {
            assert!(dev < 1e-12 * peak, "{dev}");
        } else {
            assert!(dev > 0.1 * peak, "{dev}");
        }
    }
}

#[test]
fn noon_intensity_is_swap_symmetric_at_waist() {
    let grid = make_grid(64, 64, 5.0, 0.0).unwrap();
    for n in 1..=4 {
        let img = sample_beam(&make_noon_beam(n, 1.1, 1.0).unwrap(), &grid).intensity();
        let peak = img.iter().cloned().fold(0.0, f64::max);
        for j in 0..64 {
            for i in 0..64 {
                assert!((img[j * 64 + i] - img[i * 64 + j]).abs() < 1e-13 * peak);
            }
        }
        let k = schmidt_decompose(&make_noon_beam(n, 1.1, 1.0).unwrap(), &grid).unwrap().k;
        assert!((k - 1.0).abs() < 1e-12);
    }
}

#[test]
fn pp_schmidt_number_converges_under_refinement() {
    let exact = k_of_separation(0.5, 1.0).unwrap();
    let errors: Vec<f64> = [8, 16, 32, 64]
        .into_iter()
        .map(|n| {
            (schmidt_decompose(&make_pp_beam(0.5, 1.0).unwrap(), &make_grid(n, n, 6.0, 0.0).unwrap()).unwrap().k
                - exact)
                .abs()
        })
        .collect();
    assert!(errors[0] > errors[1] && errors[1] > errors[2], "{errors:?}");
    assert!(errors[3] < 1e-12, "{errors:?}");
}

#[test]
fn fourfold_quadrature_converges_to_rect_overlaps() {
    let beam = make_fourfold_beam([[Complex64::new(1.0, 0.0); 2]; 2], 1.0, 0.5, false).unwrap();
    for n in [51, 101, 201, 401, 801] {
        let grid = make_grid(n, n, 2.0, 0.0).unwrap();
        let err = (total_intensity(&beam, &grid) - 1.0).abs();
        // Edge nodes carry rect = ½, so the error is first order in dx.
        assert!(err <= 4.0 * grid.dx(), "n={n}: {err}");
    }
}

proptest! {
    #[test]
    fn disjoint_rect_spots_never_overlap(
        a in 0.2..2.0f64, frac in 0.01..0.999f64, x in -4.0..4.0f64, y in -4.0..4.0f64
    ) {
        let b = 2.0 * a * frac;
        let spots: Vec<RectMode> =
            [(0, 0), (0, 1), (1, 0), (1, 1)].iter().map(|&(i, j)| RectMode::new(i, j, a, b).unwrap()).collect();
        for p in 0..4 {
            for q in p + 1..4 {
                prop_assert_eq!(spots[p].eval(x, y) * spots[q].eval(x, y), 0.0);
            }
        }
    }
}

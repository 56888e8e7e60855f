//! Independent reference computations shared by the integration tests.
#![allow(dead_code)]

use cebeam_core::Complex64;

/// Physicists' Hermite polynomial from the explicit sum.
pub fn hermite_poly(n: u32, t: f64) -> f64 {
    let fact = |k: u32| (1..=k).map(f64::from).product::<f64>();
    (0..=n / 2)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * fact(n) / (fact(k) * fact(n - 2 * k)) * (2.0 * t).powi((n - 2 * k) as i32)
        })
        .sum()
}

/// Closed-form `U_nm` written out in full, without factor functions.
pub fn hg_closed_form(n: u32, m: u32, w0: f64, x: f64, y: f64, z: f64) -> Complex64 {
    let fact = |k: u32| (1..=k).map(f64::from).product::<f64>();
    let zeta = z / (w0 * w0);
    let w = w0 * (1.0 + zeta * zeta).sqrt();
    let norm = (2.0 / (std::f64::consts::PI * 2f64.powi((n + m) as i32) * fact(n) * fact(m))).sqrt() / w;
    let r2 = x * x + y * y;
    let amp =
        norm * hermite_poly(n, 2f64.sqrt() * x / w) * hermite_poly(m, 2f64.sqrt() * y / w) * (-r2 / (w * w)).exp();
    let phase = zeta * r2 / (w0 * w0 * (1.0 + zeta * zeta)) - f64::from(n + m + 1) * zeta.atan();
    Complex64::from_polar(amp, phase)
}

/// Eigenvalues (descending) of a Hermitian 2×2 matrix by bisection on the
/// characteristic polynomial `λ² - tλ + d`.
pub fn eig2_bisection(m: [[Complex64; 2]; 2]) -> [f64; 2] {
    let t = m[0][0].re + m[1][1].re;
    let d = (m[0][0] * m[1][1] - m[0][1] * m[1][0]).re;
    let p = |l: f64| l * l - t * l + d;
    let bound = m.iter().flatten().map(|c| c.norm()).sum::<f64>() + 1.0;
    let vertex = 0.5 * t;
    let root = |mut lo: f64, mut hi: f64| {
        // p(lo) and p(hi) have opposite signs (or p(vertex) = 0).
        let rising = p(hi) > p(lo);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (p(mid) > 0.0) == rising {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    };
    if p(vertex) >= 0.0 {
        return [vertex, vertex];
    }
    [root(vertex, vertex + bound), root(vertex - bound, vertex)]
}

/// `M M†` for a 2×k coefficient matrix.
pub fn gram_rows(rows: &[Vec<Complex64>; 2]) -> [[Complex64; 2]; 2] {
    let mut g = [[Complex64::new(0.0, 0.0); 2]; 2];
    for p in 0..2 {
        for q in 0..2 {
            g[p][q] = rows[p].iter().zip(&rows[q]).map(|(a, b)| a * b.conj()).sum();
        }
    }
    g
}

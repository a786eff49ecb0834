use std::f64::consts::PI;
use weylnagy::special::{
    elliptic_k, hurwitz_zeta, hurwitz_zeta_integral, hurwitz_zeta_scaled, log_gamma, ZetaArgs,
};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

/// Direct summation of `terms` terms, then the midpoint-rule tail
/// `int_{a+N-1/2}^inf x^{-s} dx`, whose error is below `s(s+1)/24 (a+N)^{-s-2}`.
fn slow_zeta(s: f64, a: f64, terms: u64) -> f64 {
    let mut sum = 0.0;
    for k in (0..terms).rev() {
        sum += (a + k as f64).powf(-s);
    }
    sum + (a + terms as f64 - 0.5).powf(1.0 - s) / (s - 1.0)
}

fn zeta(s: f64, a: f64) -> f64 {
    hurwitz_zeta(ZetaArgs::new(s, a).unwrap()).unwrap()
}

#[test]
fn slow_summation_agrees_on_a_grid() {
    for s in [1.05, 1.5, 2.0, 3.7, 8.0, 40.0] {
        for a in [1.0, 2.5, 11.0, 300.0] {
            let slow = slow_zeta(s, a, 200_000);
            assert!(rel(zeta(s, a), slow) < 1e-11, "s={s} a={a}");
        }
    }
}

#[test]
fn three_methods_agree_pairwise() {
    for s in [1.3, 2.0, 2.5, 4.0, 7.5, 12.0, 25.0] {
        for a in [1.0, 3.0, 9.0, 50.0] {
            let em = zeta(s, a);
            let quad = hurwitz_zeta_integral(ZetaArgs::new(s, a).unwrap(), 1e-12).unwrap();
            let slow = slow_zeta(s, a, 100_000);
            assert!(rel(em, quad) <= 1e-9, "s={s} a={a}");
            assert!(rel(em, slow) <= 1e-9, "s={s} a={a}");
            assert!(rel(quad, slow) <= 1e-9, "s={s} a={a}");
        }
    }
}

#[test]
fn shift_identity() {
    for (s, a) in [(1.2, 0.3), (2.7, 4.5), (9.0, 1.0), (60.0, 2.0), (3.3, 1e5)] {
        let (z0, z1) = (zeta(s, a), zeta(s, a + 1.0));
        // the subtraction amplifies rounding by z0 / a^{-s}
        let conditioning = 4.0 * f64::EPSILON * z0 / a.powf(-s);
        assert!(rel(z0 - z1, a.powf(-s)) < 1e-12 + conditioning, "s={s} a={a}");
    }
}

#[test]
fn scaled_bracket_and_exact_values() {
    for r in [1.1, 2.05, 3.0, 7.0, 100.0] {
        for n in [1_u64, 5, 10, 1000] {
            let s = hurwitz_zeta_scaled(r, n).unwrap();
            let base = n as f64 / (r - 1.0);
            assert!(base < s && s < 1.0 + base, "r={r} n={n}");
        }
    }
    assert!(rel(hurwitz_zeta_scaled(3.0, 1).unwrap(), 1.202056903159594) < 1e-14);
    let direct: f64 = (5..2_000_000_u64).rev().map(|k| (5.0 / k as f64).powi(3)).sum::<f64>()
        + 125.0 / (2.0 * (2_000_000.0_f64 - 0.5).powi(2));
    assert!(rel(hurwitz_zeta_scaled(3.0, 5).unwrap(), direct) < 1e-12);
}

/// The integrand of `K(q)` is even and pi-periodic, so the trapezoidal rule over a
/// full period converges geometrically.
fn elliptic_by_trapezoid(q: f64, points: usize) -> f64 {
    let h = PI / points as f64;
    let sum: f64 = (0..points)
        .map(|j| {
            let s = (j as f64 * h).sin();
            1.0 / (1.0 - q * q * s * s).sqrt()
        })
        .sum();
    0.5 * h * sum
}

#[test]
fn elliptic_matches_trapezoid_and_is_monotone() {
    assert_eq!(elliptic_k(0.0).unwrap(), PI / 2.0);
    let mut prev = 0.0;
    for j in 0..=111 {
        let q = if j < 100 { j as f64 / 100.0 } else { 0.99 + (j - 99) as f64 * 0.00075 };
        let q = q.min(0.999);
        let k = elliptic_k(q).unwrap();
        assert!(k >= prev, "q={q}");
        prev = k;
        assert!(rel(k, elliptic_by_trapezoid(q, 20_000)) < 1e-12, "q={q}");
    }
    assert!(elliptic_k(1.0).is_err() && elliptic_k(-0.1).is_err());
}

#[test]
fn log_gamma_against_products() {
    let mut ln = 0.5 * PI.ln();
    let mut x: f64 = 0.5;
    while x < 20.5 {
        ln += x.ln();
        x += 1.0;
    }
    assert!(rel(log_gamma(20.5).unwrap(), ln) < 1e-12);
    for x in [0.01, 0.7, 3.2, 17.9, 240.0] {
        let step = log_gamma(x + 1.0).unwrap() - log_gamma(x).unwrap();
        assert!((step - x.ln()).abs() < 1e-12 * x.ln().abs().max(1.0), "x={x}");
    }
}

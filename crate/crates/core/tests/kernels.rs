use std::f64::consts::PI;
use weylnagy::kernels::{
    eval_poisson_kernel, truncation_index, weyl_nagy_kernel_value, ClassParams, Metric, TailSeries,
};
use weylnagy::special::hurwitz_zeta_scaled;

fn cp(r: f64, beta: f64, n: u64) -> ClassParams {
    ClassParams::new(r, beta, n, Metric::L1).unwrap()
}

fn points() -> Vec<(f64, f64, u64, f64)> {
    let mut out = Vec::new();
    for &(r, n) in &[(3.0, 3_u64), (2.5, 1), (4.0, 10), (9.0, 40)] {
        for &beta in &[0.0, 0.7, 1.0, 2.9] {
            for &t in &[0.0, 0.013, 1.0, 2.5, -3.0] {
                out.push((r, beta, n, t));
            }
        }
    }
    out
}

#[test]
fn period_and_phase_shift() {
    for (r, beta, n, t) in points() {
        let k = truncation_index(cp(r, beta, n), 1e-4).unwrap();
        let k4 = truncation_index(cp(r, beta + 4.0, n), 1e-4).unwrap();
        let k2 = truncation_index(cp(r, beta + 2.0, n), 1e-4).unwrap();
        let g = k.eval_scaled_tail(t);
        assert!((g - k4.eval_scaled_tail(t)).abs() <= 2.0 * k.eps_m());
        assert!((g + k2.eval_scaled_tail(t)).abs() <= 2.0 * k.eps_m());
    }
}

#[test]
fn truncation_certificate_and_bound() {
    for (r, beta, n, t) in points() {
        let k = truncation_index(cp(r, beta, n), 1e-3).unwrap();
        let g_m = k.eval_scaled_tail(t);
        let full = TailSeries::new(cp(r, beta, n)).unwrap().eval(t).unwrap();
        assert!((g_m - full.value).abs() <= k.eps_m() + full.error, "r={r} beta={beta} n={n} t={t}");
        let s = hurwitz_zeta_scaled(r, n).unwrap();
        assert!(g_m.abs() <= s + k.eps_m());
    }
}

#[test]
fn derivative_is_second_order_consistent() {
    let k = truncation_index(cp(5.0, 1.0, 3), 1e-13).unwrap();
    let t = 0.7;
    let d = k.eval_scaled_tail_deriv(t, 1).unwrap();
    let err = |h: f64| ((k.eval_scaled_tail(t + h) - k.eval_scaled_tail(t - h)) / (2.0 * h) - d).abs();
    let (e4, e5) = (err(1e-4), err(1e-5));
    assert!(e4 < 1e-6);
    // second order: a tenfold smaller step cuts the error about a hundredfold,
    // until rounding takes over
    assert!(e5 < e4 / 50.0 || e5 < 1e-9, "{e4} {e5}");
}

#[test]
fn alternating_example_matches_eta() {
    // sum_{k>=2} (2/k)^4 (-1)^k = 16 (1 - eta(4)), eta(4) = 7 pi^4 / 720
    let expected = 16.0 * (1.0 - 7.0 * PI.powi(4) / 720.0);
    let full = TailSeries::new(cp(4.0, 0.0, 2)).unwrap().eval(PI).unwrap();
    assert!((full.value - expected).abs() < 1e-13);
    let k = truncation_index(cp(4.0, 0.0, 2), 1e-12).unwrap();
    assert!((k.eval_scaled_tail(PI) - expected).abs() <= k.eps_m() + 1e-14);
}

#[test]
fn poisson_against_direct_sum() {
    for &(q, beta, t) in &[(0.9_f64, 0.3, 1.1), (0.5, 0.0, 0.0), (0.2, 3.7, -2.0)] {
        let direct: f64 = (1..=500)
            .map(|k| q.powi(k) * (k as f64 * t - beta * PI / 2.0).cos())
            .sum();
        assert!((eval_poisson_kernel(q, beta, t).unwrap() - direct).abs() < 1e-12);
    }
}

#[test]
fn weyl_nagy_alternating_sine_series() {
    // sum k^{-3} sin(k pi/2) = beta(3) = pi^3/32
    let v = weyl_nagy_kernel_value(cp(3.0, 1.0, 1), PI / 2.0).unwrap();
    assert!((v - PI.powi(3) / 32.0).abs() < 1e-9);
}

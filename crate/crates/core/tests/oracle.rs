use std::f64::consts::PI;
use weylnagy::dense::DenseGrid;
use weylnagy::kernels::{ClassParams, Metric, TailSeries};
use weylnagy::oracle::{exact_deviation, global_max_abs, l1_norm, OracleMethod};
use weylnagy::special::hurwitz_zeta_scaled;

fn cp(r: f64, beta: f64, n: u64, p: Metric) -> ClassParams {
    ClassParams::new(r, beta, n, p).unwrap()
}

/// Oracle and a dense-grid reference agree within their combined error bounds.
fn agrees_with_grid(params: ClassParams, points: usize) {
    let oracle = exact_deviation(params, 1e-9).unwrap();
    let grid = DenseGrid::new(params, points).unwrap().normalized_deviation().unwrap();
    let gap = (oracle.value - grid.value).abs();
    assert!(
        gap <= oracle.half_width + grid.error,
        "{params:?}: oracle {} grid {} gap {gap:e} certs {:e} {:e}",
        oracle.value,
        grid.value,
        oracle.half_width,
        grid.error
    );
}

#[test]
fn saturation_at_beta_zero_and_two() {
    let s = hurwitz_zeta_scaled(5.0, 7).unwrap() / PI;
    for beta in [0.0, 2.0, 4.0] {
        let d = exact_deviation(cp(5.0, beta, 7, Metric::L1), 1e-9).unwrap();
        assert!((d.value - s).abs() <= d.half_width + 1e-15 * s, "beta={beta}");
        assert_eq!(d.method, OracleMethod::SupnormOracle);
    }
    let m = global_max_abs(&TailSeries::new(cp(5.0, 0.0, 7, Metric::L1)).unwrap(), 1e-9).unwrap();
    assert_eq!(m.t_star, 0.0);
}

#[test]
fn phase_one_is_strictly_below_saturation() {
    let params = cp(4.0, 1.0, 3, Metric::L1);
    let d = exact_deviation(params, 1e-9).unwrap();
    assert!(d.value + d.half_width < hurwitz_zeta_scaled(4.0, 3).unwrap() / PI);
    agrees_with_grid(params, 1 << 18);
}

#[test]
fn sup_norm_matches_grid() {
    for (r, beta, n) in [(6.0, 1.3, 4), (2.5, 0.5, 10), (8.0, 3.3, 1), (1.2, 1.0, 2)] {
        agrees_with_grid(cp(r, beta, n, Metric::L1), 1 << 18);
    }
}

#[test]
fn l1_norm_matches_grid() {
    for (r, beta, n) in [(3.0, 0.0, 2), (4.0, 1.0, 3), (7.0, 1.7, 10), (1.5, 0.5, 5)] {
        agrees_with_grid(cp(r, beta, n, Metric::Linf), 1 << 18);
    }
}

#[test]
fn l1_of_cosine_tail_is_positive_with_zero_mean() {
    let series = TailSeries::new(cp(4.0, 0.0, 1, Metric::Linf)).unwrap();
    let l1 = l1_norm(&series, 1e-9).unwrap();
    assert!(l1.value > 0.1);
    let d = exact_deviation(cp(4.0, 0.0, 1, Metric::Linf), 1e-9).unwrap();
    assert_eq!(d.method, OracleMethod::L1Oracle);
    assert!((d.value - l1.value / PI).abs() <= 1e-15 * d.value);
}

#[test]
fn dual_norm_inequality_and_beta_sweep() {
    for (r, n) in [(3.0, 2_u64), (5.0, 5), (10.0, 1)] {
        let top = exact_deviation(cp(r, 0.0, n, Metric::L1), 1e-9).unwrap();
        for beta in [0.0, 0.5, 1.0, 1.5, 3.3] {
            let sup = exact_deviation(cp(r, beta, n, Metric::L1), 1e-9).unwrap();
            let l1 = exact_deviation(cp(r, beta, n, Metric::Linf), 1e-9).unwrap();
            assert!(sup.value > 0.0 && l1.value > 0.0);
            // (1/pi) int |g| <= 2 max |g|, i.e. l1 <= 2 pi * sup in normalized units
            assert!(sup.value + sup.half_width >= l1.value / (2.0 * PI) - l1.half_width);
            assert!(sup.value <= top.value + sup.half_width + top.half_width);
        }
    }
}

#[test]
fn stechkin_scale_at_r_ten() {
    let d = exact_deviation(cp(10.0, 1.0, 10, Metric::Linf), 1e-9).unwrap();
    let k = weylnagy::special::elliptic_k((-1.0_f64).exp()).unwrap();
    let principal = 8.0 / (PI * PI) * k;
    assert!((d.value - principal).abs() * 10.0 < 1.0);
}

#[test]
fn log_absolute_is_consistent() {
    let d = exact_deviation(cp(60.0, 0.5, 200, Metric::L1), 1e-9).unwrap();
    assert_eq!(d.log_absolute, d.value.ln() - 60.0 * 200f64.ln());
}

#[test]
fn rejects_bad_input() {
    assert!(exact_deviation(cp(1.0, 0.0, 10, Metric::L1), 1e-9).is_err());
    assert!(exact_deviation(cp(3.0, 0.0, 10, Metric::L1), 1e-13).is_err());
    assert!(exact_deviation(cp(3.0, 0.0, 10, Metric::L1), 0.1).is_err());
}

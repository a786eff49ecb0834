use weylnagy::kernels::Metric;
use weylnagy::verify::*;

#[test]
fn inequality_suite_seed_42() {
    let report = run_inequality_suite(42, 1000).unwrap();
    assert!(report.all_passed());
    assert!(report.summary.total >= 3000);
    assert_eq!(report.to_json(), run_inequality_suite(42, 1000).unwrap().to_json());
    assert_ne!(report.to_json(), run_inequality_suite(43, 1000).unwrap().to_json());
    for name in ["scaled_zeta_bracket", "exp_power_sandwich", "reciprocal_expm1_gap"] {
        assert_eq!(report.checks.iter().filter(|c| c.name == name).count(), 1000, "{name}");
    }
}

#[test]
fn bracket_examples() {
    let grid = SweepGrid::new(vec![5.0], vec![50], vec![0.0], Metric::L1).unwrap();
    let report = bracket_conformance(&grid, 1e-9).unwrap();
    assert_eq!(report.summary.total, 3);
    assert!(report.all_passed());
    assert_eq!(report.summary.vacuous, 0);

    let grid = SweepGrid::new(vec![3.0], vec![200], vec![1.0], Metric::L1).unwrap();
    let report = bracket_conformance(&grid, 1e-9).unwrap();
    assert!(report.checks.iter().any(|c| c.name == "zeta_bracket" && c.pass));
}

#[test]
fn grids_are_validated() {
    assert!(SweepGrid::new(vec![], vec![1], vec![0.0], Metric::L1).is_err());
    assert!(SweepGrid::new(vec![3.0], vec![0], vec![0.0], Metric::L1).is_err());
    let low = SweepGrid::new(vec![2.0], vec![1], vec![0.0], Metric::L1).unwrap();
    assert!(bracket_conformance(&low, 1e-9).is_err());
    let linf = SweepGrid::new(vec![3.0], vec![1], vec![0.0], Metric::Linf).unwrap();
    assert!(bracket_conformance(&linf, 1e-9).is_err());
    assert!(empirical_uniform_constant(&linf, ConstantKind::Thm3P1, 1e-9).is_err());
}

#[test]
fn thm3_constant_on_moderate_grid() {
    let grid = SweepGrid::new(
        vec![2.5, 3.0, 4.0, 6.0, 10.0],
        vec![5, 10, 50, 200],
        vec![0.0, 0.5, 1.0, 1.5],
        Metric::L1,
    )
    .unwrap();
    let k = empirical_uniform_constant(&grid, ConstantKind::Thm3P1, 1e-9).unwrap();
    assert!(k.is_finite() && k > 0.0 && k < 1.0, "{k}");
}

#[test]
fn stechkin_constant_is_finite() {
    let grid = SweepGrid::new(vec![1.0, 2.0, 5.0, 10.0], vec![1, 5, 20], vec![0.0], Metric::Linf).unwrap();
    let k = empirical_uniform_constant(&grid, ConstantKind::StechkinPinf, 1e-9).unwrap();
    assert!(k.is_finite() && k > 0.0, "{k}");
}

#[test]
fn thm2_constant_needs_its_subgrid() {
    let grid = SweepGrid::new(vec![30.0], vec![5], vec![0.0], Metric::L1).unwrap();
    assert!(empirical_uniform_constant(&grid, ConstantKind::Thm2P1, 1e-9).is_err());
}

#[test]
fn missing_baseline_entry_fails_the_report() {
    let empty = Baseline::parse(r#"{"constants":{}}"#).unwrap();
    let report = run_constants_suite(GridPreset::Smoke, 1e-9, &empty).unwrap();
    assert!(!report.all_passed());
    let frozen = run_constants_suite(GridPreset::Smoke, 1e-9, &Baseline::default_checked_in()).unwrap();
    assert!(frozen.all_passed());
    assert_eq!(frozen.summary.max_empirical_constant.len(), 3);
}

#[test]
fn report_json_round_trips() {
    let report = run_inequality_suite(5, 50).unwrap();
    let back: VerificationReport = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(back.to_json(), report.to_json());
    assert!(report.to_json().contains("\"meta\""));
}

//! One line per acceptance criterion; exits non-zero if any fails.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::process::Command;
use std::time::{Duration, Instant};
use weylnagy::dense::DenseGrid;
use weylnagy::estimators::{remainder_scaled_shifted, remainder_scaled_unshifted};
use weylnagy::kernels::{ClassParams, Metric};
use weylnagy::oracle::exact_deviation;
use weylnagy::special::{elliptic_k, hurwitz_zeta, hurwitz_zeta_integral, hurwitz_zeta_scaled, ZetaArgs};
use weylnagy::verify::{
    bracket_conformance, run_constants_suite, run_inequality_suite, Baseline, ConstantKind, GridPreset,
    SweepGrid, BASELINE_HEADROOM,
};

const REL_TOL: f64 = 1e-9;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn secs(d: Duration) -> f64 {
    d.as_secs_f64()
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    let mut errors = 0;
    for r in [2.5, 3.0, 5.0, 10.0, 30.0] {
        for n in [1_u64, 2, 5, 10, 50, 200] {
            let params = ClassParams::new(r, 0.0, n, Metric::L1).unwrap();
            match exact_deviation(params, REL_TOL) {
                Ok(d) => worst = worst.max(rel(d.value, hurwitz_zeta_scaled(r, n).unwrap() / PI)),
                Err(_) => errors += 1,
            }
        }
    }
    let t = start.elapsed();
    outcome(
        errors == 0 && worst <= 1e-9 && t < Duration::from_secs(30),
        format!("30 points, max relative error {worst:.2e}, {errors} errors, {:.1} s", secs(t)),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let report = bracket_conformance(&SweepGrid::preset(GridPreset::Smoke), REL_TOL).unwrap();
    let zeta: Vec<_> = report.checks.iter().filter(|c| c.name == "zeta_bracket").collect();
    let failures = zeta.iter().filter(|c| !c.pass).count();
    let t = start.elapsed();
    outcome(
        failures == 0 && zeta.len() == 180 && t < Duration::from_secs(300),
        format!("{} grid points, {failures} failures, {:.1} s", zeta.len(), secs(t)),
    )
}

fn criterion_3() -> Outcome {
    let grid = SweepGrid::preset(GridPreset::Smoke);
    let (mut checked, mut failures) = (0, 0);
    let mut worst_use = 0.0_f64;
    for c in grid.points().unwrap() {
        let ratio = c.r / c.n as f64;
        if ratio > 0.1 || c.r < 2.5 {
            continue;
        }
        checked += 1;
        let d = exact_deviation(c, REL_TOL).unwrap();
        let lhs = (d.value * ratio - 1.0 / PI).abs();
        let rhs = 2.0 / PI * (1.0 / (c.r - 2.0) + ratio);
        let slack = d.half_width * ratio;
        worst_use = worst_use.max(lhs / rhs);
        if lhs > rhs + slack {
            failures += 1;
        }
    }
    outcome(
        failures == 0 && checked > 0,
        format!("{checked} sub-grid points, {failures} failures, largest |theta| fraction {worst_use:.3}"),
    )
}

fn constants_check(kind: ConstantKind) -> (f64, f64, bool, usize) {
    let baseline = Baseline::default_checked_in();
    let report = run_constants_suite(GridPreset::Smoke, REL_TOL, &baseline).unwrap();
    let value = report.summary.max_empirical_constant[kind.name()];
    let frozen = baseline.get(GridPreset::Smoke, kind).expect("baseline entry");
    let trend_failures = report
        .checks
        .iter()
        .filter(|c| c.name == "stechkin_ratio_trend" && !c.pass)
        .count();
    (value, frozen, value.is_finite() && value <= frozen * (1.0 + BASELINE_HEADROOM), trend_failures)
}

fn criterion_4() -> Outcome {
    let (value, frozen, within, _) = constants_check(ConstantKind::Thm3P1);
    outcome(within, format!("thm3_p1 = {value:.6e}, frozen {frozen:.6e}, headroom 10%"))
}

fn criterion_5() -> Outcome {
    let (value, frozen, within, trend_failures) = constants_check(ConstantKind::StechkinPinf);
    outcome(
        within && trend_failures == 0,
        format!("stechkin_pinf = {value:.6e}, frozen {frozen:.6e}, {trend_failures} trend failures"),
    )
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0_f64;
    let mut errors = 0;
    for _ in 0..1000 {
        let r = rng.gen_range(2.05..60.0);
        let n = (rng.gen_range(0.0..(1e4_f64).ln()).exp().round() as u64).max(1);
        match (remainder_scaled_shifted(r, n), remainder_scaled_unshifted(r, n)) {
            (Ok(a), Ok(b)) => worst = worst.max(rel(a, b)),
            _ => errors += 1,
        }
    }
    outcome(
        errors == 0 && worst <= 1e-11,
        format!("1000 draws, max relative gap {worst:.2e}, {errors} errors"),
    )
}

/// Direct summation plus the midpoint-rule tail integral.
fn slow_zeta(s: f64, a: f64) -> f64 {
    let terms = 200_000_u64;
    let mut sum = 0.0;
    for k in (0..terms).rev() {
        sum += (a + k as f64).powf(-s);
    }
    sum + (a + terms as f64 - 0.5).powf(1.0 - s) / (s - 1.0)
}

fn criterion_7() -> Outcome {
    let mut worst = 0.0_f64;
    let mut points = 0;
    for s in [1.1, 1.5, 2.0, 3.0, 5.0, 8.0, 13.0, 21.0, 34.0, 55.0] {
        for a in [1.0, 2.5, 7.0, 30.0, 200.0] {
            let args = ZetaArgs::new(s, a).unwrap();
            let em = hurwitz_zeta(args).unwrap();
            let quad = hurwitz_zeta_integral(args, 1e-12).unwrap();
            let slow = slow_zeta(s, a);
            worst = worst.max(rel(em, quad)).max(rel(em, slow)).max(rel(quad, slow));
            points += 1;
        }
    }
    let z2 = rel(hurwitz_zeta(ZetaArgs::new(2.0, 1.0).unwrap()).unwrap(), PI * PI / 6.0);
    let z4 = rel(hurwitz_zeta(ZetaArgs::new(4.0, 1.0).unwrap()).unwrap(), PI.powi(4) / 90.0);
    outcome(
        points == 50 && worst <= 1e-9 && z2 <= 1e-12 && z4 <= 1e-12,
        format!("{points} points, max pairwise gap {worst:.2e}; zeta(2) err {z2:.1e}, zeta(4) err {z4:.1e}"),
    )
}

/// The integrand is even and pi-periodic, so the trapezoidal rule over a period
/// converges geometrically.
fn elliptic_by_trapezoid(q: f64) -> f64 {
    let points = 40_000;
    let h = PI / points as f64;
    let sum: f64 = (0..points)
        .map(|j| {
            let s = (j as f64 * h).sin();
            1.0 / (1.0 - q * q * s * s).sqrt()
        })
        .sum();
    0.5 * h * sum
}

fn criterion_8() -> Outcome {
    let k0 = elliptic_k(0.0).unwrap();
    let mut worst = 0.0_f64;
    for q in [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 0.99, 0.999] {
        worst = worst.max(rel(elliptic_k(q).unwrap(), elliptic_by_trapezoid(q)));
    }
    outcome(
        k0 == PI / 2.0 && worst <= 1e-12,
        format!("K(0) - pi/2 = {:.1e}, max AGM vs quadrature gap {worst:.2e}", k0 - PI / 2.0),
    )
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let report = run_inequality_suite(42, 1000).unwrap();
    let t = start.elapsed();
    outcome(
        report.all_passed() && t < Duration::from_secs(5),
        format!("{} checks, {} failures, {:.2} s", report.summary.total, report.summary.failed, secs(t)),
    )
}

fn criterion_10() -> Outcome {
    let mut points = 0;
    let mut failures = Vec::new();
    let mut worst = 0.0_f64;
    for r in [1.5, 2.5, 4.0, 8.0] {
        for n in [1_u64, 3, 10] {
            for beta in [0.5, 1.3] {
                for p in [Metric::L1, Metric::Linf] {
                    let c = ClassParams::new(r, beta, n, p).unwrap();
                    let oracle = exact_deviation(c, REL_TOL).unwrap();
                    let grid = DenseGrid::new(c, 1 << 20).unwrap().normalized_deviation().unwrap();
                    let gap = (oracle.value - grid.value).abs();
                    let allowed = oracle.half_width + grid.error;
                    worst = worst.max(gap / allowed.max(f64::MIN_POSITIVE));
                    if gap > allowed {
                        failures.push(format!("({r},{beta},{n},{p})"));
                    }
                    points += 1;
                }
            }
        }
    }
    outcome(
        failures.is_empty(),
        format!(
            "{points} points against 2^20-point grids, largest gap/certificate {worst:.3}, failures {failures:?}"
        ),
    )
}

fn criterion_11() -> Outcome {
    let exe = env!("CARGO_BIN_EXE_weylnagy");
    let mut reports = Vec::new();
    let mut slowest = Duration::ZERO;
    let mut codes = Vec::new();
    for _ in 0..2 {
        let start = Instant::now();
        let out = Command::new(exe)
            .args(["verify", "--suite", "all", "--seed", "42", "--grid-preset", "full"])
            .env_remove("WN_TOL")
            .output()
            .unwrap();
        slowest = slowest.max(start.elapsed());
        codes.push(out.status.code());
        reports.push(out.stdout);
    }
    let identical = reports[0] == reports[1] && !reports[0].is_empty();
    outcome(
        identical && codes.iter().all(|c| *c == Some(0)) && slowest < Duration::from_secs(600),
        format!(
            "identical reports: {identical} ({} bytes), exit codes {codes:?}, slowest run {:.1} s",
            reports[0].len(),
            secs(slowest)
        ),
    )
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 11] = [
        ("beta = 0 closed form", criterion_1),
        ("zeta-form bracket on the smoke grid", criterion_2),
        ("first-theorem bracket on r/n <= 0.1", criterion_3),
        ("uniform constant within baseline", criterion_4),
        ("p = inf constant and trend", criterion_5),
        ("remainder representation identity", criterion_6),
        ("Hurwitz zeta three-way agreement", criterion_7),
        ("elliptic integral", criterion_8),
        ("inequality suite", criterion_9),
        ("oracles against dense grids", criterion_10),
        ("deterministic verify reports", criterion_11),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {name}: {}",
            i + 1,
            if o.pass { "PASS" } else { "FAIL" },
            o.detail
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}

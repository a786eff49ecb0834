//! Hurwitz zeta (Euler-Maclaurin and Laplace-integral routes), the complete
//! elliptic integral of the first kind, and log-gamma.
//!
//! Only real arguments are supported. The Hurwitz routines come in scaled
//! forms `sum_k (c / (a + k))^s` so that `n^r * zeta(r, n)` can be formed for
//! large `r` without overflowing.

use crate::error::{Error, Result};
use crate::quad::{integrate, QuadConfig};
use crate::sum::NeumaierSum;
use std::f64::consts::PI;

/// `B_{2j} / (2j)!` for `j = 1..=12`.
const BERNOULLI_OVER_FACTORIAL: [f64; 12] = [
    0.083_333_333_333_333_33,
    -0.001_388_888_888_888_889,
    3.306_878_306_878_307e-5,
    -8.267_195_767_195_768e-7,
    2.087_675_698_786_81e-8,
    -5.284_190_138_687_493e-10,
    1.338_253_653_068_467_9e-11,
    -3.389_680_296_322_582_7e-13,
    8.586_062_056_277_845e-15,
    -2.174_868_698_558_062e-16,
    5.509_002_828_360_229_5e-18,
    -1.395_446_468_581_252_2e-19,
];

/// `B_{2j} / (2j (2j - 1))` for the Stirling series, `j = 1..=8`.
const STIRLING: [f64; 8] = [
    0.083_333_333_333_333_33,
    -0.002_777_777_777_777_778,
    0.000_793_650_793_650_793_7,
    -0.000_595_238_095_238_095_3,
    0.000_841_750_841_750_841_7,
    -0.001_917_526_917_526_917_6,
    0.006_410_256_410_256_41,
    -0.029_550_653_594_771_242,
];

/// Euler-Maclaurin correction order.
const EM_ORDER: usize = 8;

/// Arguments of the Hurwitz zeta function `zeta(s, a) = sum_{k>=0} (a+k)^{-s}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZetaArgs {
    s: f64,
    a: f64,
}

impl ZetaArgs {
    pub fn new(s: f64, a: f64) -> Result<Self> {
        if !(s.is_finite() && s > 1.0) {
            return Err(Error::domain(format!(
                "Hurwitz zeta needs s > 1 (got s = {s})"
            )));
        }
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::domain(format!(
                "Hurwitz zeta needs a > 0 (got a = {a})"
            )));
        }
        Ok(Self { s, a })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn a(&self) -> f64 {
        self.a
    }
}

/// Euler-Maclaurin evaluation of `sum_{k>=0} sum_i coef_i (scale / (a+k))^{s_i}`.
///
/// Terms are combined before summation, so differences of nearly equal zeta
/// values keep their relative accuracy.
fn zeta_combination(parts: &[(f64, f64)], a: f64, scale: f64) -> f64 {
    let s_max = parts.iter().map(|p| p.1).fold(0.0, f64::max);
    let threshold = 15.0_f64.max(2.0 * s_max);
    let head = if a >= threshold {
        0
    } else {
        (threshold - a).ceil() as u64
    };
    let mut acc = NeumaierSum::new();
    for k in 0..head {
        let ratio = scale / (a + k as f64);
        for &(coef, s) in parts {
            acc.add(coef * ratio.powf(s));
        }
    }
    let x = a + head as f64;
    let ratio = scale / x;
    for &(coef, s) in parts {
        let base = coef * ratio.powf(s);
        acc.add(base * x / (s - 1.0));
        acc.add(0.5 * base);
        // (s)_{2j-1} / x^{2j-1}
        let mut rising = s / x;
        for (j, b) in BERNOULLI_OVER_FACTORIAL.iter().take(EM_ORDER).enumerate() {
            acc.add(b * rising * base);
            let m = 2.0 * j as f64 + 1.0;
            rising *= (s + m) * (s + m + 1.0) / (x * x);
        }
    }
    acc.value()
}

/// Hurwitz zeta `zeta(s, a)` by direct summation of the leading terms plus an
/// Euler-Maclaurin tail of order 8.
pub fn hurwitz_zeta(args: ZetaArgs) -> Result<f64> {
    Ok(zeta_combination(&[(1.0, args.s)], args.a, 1.0))
}

/// `S(r, n) = n^r zeta(r, n) = sum_{k>=n} (n/k)^r`, computed without forming `n^r`.
pub fn hurwitz_zeta_scaled(r: f64, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    let args = ZetaArgs::new(r, n as f64)?;
    Ok(zeta_combination(&[(1.0, args.s)], args.a, args.a))
}

/// `scale^s zeta(s, a) = sum_{k>=0} (scale/(a+k))^s` for an arbitrary scale.
pub fn hurwitz_zeta_rescaled(s: f64, a: f64, scale: f64) -> Result<f64> {
    let args = ZetaArgs::new(s, a)?;
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::domain("scale must be positive"));
    }
    Ok(zeta_combination(&[(1.0, args.s)], args.a, scale))
}

/// `sum_{k>=0} [(scale/(a+k))^{s1} - (scale/(a+k))^{s2}]`, i.e.
/// `scale^{s1} zeta(s1, a) - scale^{s2} zeta(s2, a)` without cancellation
/// between the two series.
pub fn hurwitz_zeta_difference_rescaled(s1: f64, s2: f64, a: f64, scale: f64) -> Result<f64> {
    ZetaArgs::new(s1, a)?;
    ZetaArgs::new(s2, a)?;
    if !(scale.is_finite() && scale > 0.0) {
        return Err(Error::domain("scale must be positive"));
    }
    Ok(zeta_combination(&[(1.0, s1), (-1.0, s2)], a, scale))
}

/// Regularised lower incomplete gamma piece `x^alpha e^{-x} / Gamma(norm) *
/// sum_k x^k / (alpha)_{k+1}`, i.e. `gamma(alpha, x) / Gamma(norm)`.
fn lower_gamma_over(alpha: f64, x: f64, ln_gamma_norm: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let mut term = 1.0 / alpha;
    let mut sum = term;
    for k in 1..500 {
        term *= x / (alpha + k as f64);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    (alpha * x.ln() - x - ln_gamma_norm).exp() * sum
}

/// `a^s zeta(s, a)` from the Laplace-transform representation
/// `(1/Gamma(s)) int_0^inf u^{s-1} e^{-u} / (1 - e^{-u/a}) du`.
///
/// Returns `(value, error_estimate)`. The piece near `u = 0` is integrated
/// termwise using `1/(1-e^{-y}) = 1/y + 1/2 + sum_j B_{2j} y^{2j-1}/(2j)!`.
pub fn hurwitz_zeta_integral_scaled(s: f64, a: f64, tol: f64) -> Result<(f64, f64)> {
    let args = ZetaArgs::new(s, a)?;
    let (s, a) = (args.s, args.a);
    let lg = log_gamma(s)?;
    let u0 = a.min(1.0);

    let mut head = NeumaierSum::new();
    head.add(a * lower_gamma_over(s - 1.0, u0, lg));
    head.add(0.5 * lower_gamma_over(s, u0, lg));
    for (j, b) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        let p = 2 * j as i32 + 1;
        head.add(b * a.powi(-p) * lower_gamma_over(s + p as f64, u0, lg));
    }

    let mode = s - 1.0;
    let end = mode.max(u0) + 12.0 * s.sqrt() + 45.0;
    let mut points = vec![u0];
    for p in [a, mode] {
        if p > u0 && p < end {
            points.push(p);
        }
    }
    points.push(end);
    points.sort_by(f64::total_cmp);
    points.dedup();
    let integrand = |u: f64| ((s - 1.0) * u.ln() - u - lg).exp() / -(-u / a).exp_m1();
    let rel = (0.01 * tol).clamp(1e-14, 1e-10);
    let res = integrate(
        integrand,
        &points,
        QuadConfig {
            abs_tol: 0.0,
            rel_tol: rel,
            max_intervals: 4000,
        },
    );
    let value = head.value() + res.value;
    if !res.converged && res.error > tol * value.abs() {
        return Err(Error::Accuracy {
            message: format!("zeta integral quadrature for s = {s}, a = {a}"),
            estimate: value,
            error: res.error,
        });
    }
    Ok((value, res.error + 1e-15 * value.abs()))
}

/// `zeta(s, a)` via the integral representation; agrees with [`hurwitz_zeta`]
/// to `max(tol, 1e-9)` relative.
pub fn hurwitz_zeta_integral(args: ZetaArgs, tol: f64) -> Result<f64> {
    let (scaled, _) = hurwitz_zeta_integral_scaled(args.s, args.a, tol)?;
    Ok((scaled.ln() - args.s * args.a.ln()).exp())
}

/// Complete elliptic integral of the first kind with modulus `q`,
/// `K(q) = int_0^{pi/2} dt / sqrt(1 - q^2 sin^2 t)`, by the AGM.
pub fn elliptic_k(q: f64) -> Result<f64> {
    if !(q.is_finite() && (0.0..1.0).contains(&q)) {
        return Err(Error::domain(format!(
            "elliptic_k needs 0 <= q < 1 (got q = {q})"
        )));
    }
    let mut a = 1.0_f64;
    let mut b = ((1.0 - q) * (1.0 + q)).sqrt();
    for _ in 0..64 {
        if (a - b).abs() <= 1e-16 * a {
            break;
        }
        let next = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = next;
    }
    Ok(PI / (a + b))
}

/// `ln Gamma(x)` for `x > 0` by the Stirling series after raising the argument
/// to at least 15.
pub fn log_gamma(x: f64) -> Result<f64> {
    if !(x.is_finite() && x > 0.0) {
        return Err(Error::domain(format!("log_gamma needs x > 0 (got {x})")));
    }
    let mut y = x;
    let mut product = 1.0;
    while y < 15.0 {
        product *= y;
        y += 1.0;
    }
    let inv = 1.0 / y;
    let inv2 = inv * inv;
    let mut series = 0.0;
    let mut p = inv;
    for c in STIRLING {
        series += c * p;
        p *= inv2;
    }
    let stirling = (y - 0.5) * y.ln() - y + 0.5 * (2.0 * PI).ln() + series;
    Ok(stirling - product.ln())
}

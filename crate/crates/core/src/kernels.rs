//! Weyl-Nagy kernels, their Fourier remainders, and the Poisson kernel.
//!
//! The remainder of `B_{r,beta}(t) = sum_{k>=1} k^{-r} cos(kt - beta pi/2)`
//! after the partial sum of order `n - 1` is handled in the scaled form
//!
//! ```text
//! g(t) = n^r * sum_{k>=n} k^{-r} cos(kt - beta pi/2) = sum_{k>=n} (n/k)^r cos(kt - beta pi/2)
//! ```
//!
//! which stays of order `n/r` for every `r`, where `n^r` alone would overflow.

use crate::error::{Error, Result};
use crate::quad::{integrate, QuadConfig};
use crate::special::{hurwitz_zeta_scaled, log_gamma};
use crate::sum::NeumaierSum;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};
use std::fmt;

/// Smallest smoothness exponent accepted by the certified truncation and the
/// sup-norm oracle.
pub const R_MIN_ORACLE: f64 = 1.05;

/// Smallest smoothness exponent accepted by the full-series evaluator
/// (the series converges conditionally away from `t = 0` for `r > 0`; the
/// evaluator is only validated from `r = 1`).
pub const R_MIN_SERIES: f64 = 1.0;

/// Largest truncation index [`truncation_index`] will return.
pub const M_CAP: u64 = 1 << 31;

/// The norm of the class: `W^r_{beta,1}` or `W^r_{beta,inf}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Metric {
    #[serde(rename = "1")]
    L1,
    #[serde(rename = "inf")]
    Linf,
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::L1 => write!(f, "1"),
            Metric::Linf => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "1" | "l1" => Ok(Metric::L1),
            "inf" | "linf" | "infinity" => Ok(Metric::Linf),
            other => Err(Error::domain(format!("unknown metric '{other}' (use 1 or inf)"))),
        }
    }
}

/// Parameters of a class `W^r_{beta,p}` together with the partial-sum order `n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassParams {
    pub r: f64,
    /// Phase as given by the caller.
    pub beta: f64,
    pub n: u64,
    pub p: Metric,
    #[serde(skip)]
    beta_reduced: f64,
}

impl ClassParams {
    pub fn new(r: f64, beta: f64, n: u64, p: Metric) -> Result<Self> {
        if !(r.is_finite() && r > 0.0) {
            return Err(Error::domain(format!("r must be positive and finite (got {r})")));
        }
        if !beta.is_finite() {
            return Err(Error::domain("beta must be finite"));
        }
        if n == 0 {
            return Err(Error::domain("n must be at least 1"));
        }
        Ok(Self {
            r,
            beta,
            n,
            p,
            beta_reduced: beta.rem_euclid(4.0),
        })
    }

    /// `beta mod 4`, in `[0, 4)`.
    pub fn beta_reduced(&self) -> f64 {
        // deserialised values carry no reduced copy
        if self.beta_reduced == 0.0 && self.beta != 0.0 {
            self.beta.rem_euclid(4.0)
        } else {
            self.beta_reduced
        }
    }

    /// `(cos(beta pi/2), sin(beta pi/2))`, exact when `beta` is an integer.
    pub fn phase(&self) -> (f64, f64) {
        phase_of(self.beta_reduced())
    }

    pub fn with_metric(mut self, p: Metric) -> Self {
        self.p = p;
        self
    }

    pub(crate) fn require_r_at_least(&self, r_min: f64, what: &str) -> Result<()> {
        if self.r < r_min {
            Err(Error::domain(format!(
                "{what} requires r >= {r_min} (got r = {})",
                self.r
            )))
        } else {
            Ok(())
        }
    }
}

pub(crate) fn phase_of(beta_reduced: f64) -> (f64, f64) {
    if beta_reduced == beta_reduced.trunc() {
        match beta_reduced as i64 {
            0 => return (1.0, 0.0),
            1 => return (0.0, 1.0),
            2 => return (-1.0, 0.0),
            3 => return (0.0, -1.0),
            _ => {}
        }
    }
    let (s, c) = (beta_reduced * PI / 2.0).sin_cos();
    (c, s)
}

/// `t` reduced to `(-pi, pi]`.
pub(crate) fn reduce_angle(t: f64) -> f64 {
    if t > -PI && t <= PI {
        return t;
    }
    let mut x = t.rem_euclid(TAU);
    if x > PI {
        x -= TAU;
    }
    x
}

/// Integral-comparison bound `sum_{k>m} (n/k)^s <= (n/(s-1)) (n/m)^(s-1)`.
pub fn tail_bound(s: f64, n: u64, m: u64) -> f64 {
    let ratio = n as f64 / m as f64;
    n as f64 / (s - 1.0) * ratio.powf(s - 1.0)
}

/// `sum_{k=from}^{to} (n/k)^s cos(k t - phi)` with compensated summation,
/// where `(cos phi, sin phi) = phase`.
fn direct_cosine_sum(s: f64, n: u64, from: u64, to: u64, t: f64, phase: (f64, f64)) -> f64 {
    let t = reduce_angle(t);
    let nf = n as f64;
    let (sin_t, cos_t) = t.sin_cos();
    let mut acc = NeumaierSum::new();
    let (mut c, mut sn) = (0.0, 0.0);
    for (i, k) in (from..=to).enumerate() {
        if i % 64 == 0 {
            let (a, b) = (k as f64 * t).sin_cos();
            sn = a;
            c = b;
        } else {
            let next_c = c * cos_t - sn * sin_t;
            sn = sn * cos_t + c * sin_t;
            c = next_c;
        }
        let w = (nf / k as f64).powf(s);
        acc.add(w * (c * phase.0 + sn * phase.1));
    }
    acc.value()
}

/// Certified truncation of the scaled remainder kernel at index `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct TailKernel {
    params: ClassParams,
    m: u64,
    eps_m: f64,
}

/// Smallest `m = n 2^j` whose integral-comparison tail bound is below `tol`.
pub fn truncation_index(params: ClassParams, tol: f64) -> Result<TailKernel> {
    params.require_r_at_least(R_MIN_ORACLE, "certified truncation")?;
    if !(tol > 0.0) {
        return Err(Error::domain("truncation tolerance must be positive"));
    }
    let mut m = params.n;
    loop {
        let bound = tail_bound(params.r, params.n, m);
        if bound < tol {
            return Ok(TailKernel {
                params,
                m,
                eps_m: bound,
            });
        }
        if m.saturating_mul(2) > M_CAP {
            return Err(Error::Resource {
                message: format!(
                    "truncation below {tol:e} needs more than {M_CAP} terms for r = {}, n = {}",
                    params.r, params.n
                ),
                achievable: tail_bound(params.r, params.n, m),
            });
        }
        m *= 2;
    }
}

impl TailKernel {
    pub fn params(&self) -> &ClassParams {
        &self.params
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn eps_m(&self) -> f64 {
        self.eps_m
    }

    /// `g_M(t) = sum_{k=n}^{M} (n/k)^r cos(kt - beta pi/2)`; within `eps_m` of `g(t)`.
    pub fn eval_scaled_tail(&self, t: f64) -> f64 {
        let p = &self.params;
        direct_cosine_sum(p.r, p.n, p.n, self.m, t, p.phase())
    }

    /// Termwise derivative of `g_M` of order 1 or 2.
    pub fn eval_scaled_tail_deriv(&self, t: f64, order: u32) -> Result<f64> {
        let p = &self.params;
        self.check_deriv_order(order)?;
        // d/dt cos(x) = cos(x + pi/2); the j-th derivative shifts phi by -j pi/2
        let shifted = phase_of((p.beta_reduced() - order as f64).rem_euclid(4.0));
        let s = p.r - order as f64;
        let nf = p.n as f64;
        Ok(nf.powi(order as i32) * direct_cosine_sum(s, p.n, p.n, self.m, t, shifted))
    }

    /// Bound on `|g^(order)(t) - g_M^(order)(t)|` for the truncation index of this kernel.
    pub fn deriv_error_bound(&self, order: u32) -> Result<f64> {
        self.check_deriv_order(order)?;
        let p = &self.params;
        Ok((p.n as f64).powi(order as i32) * tail_bound(p.r - order as f64, p.n, self.m))
    }

    fn check_deriv_order(&self, order: u32) -> Result<()> {
        if !(1..=2).contains(&order) {
            return Err(Error::domain("derivative order must be 1 or 2"));
        }
        if self.params.r - (order as f64) < R_MIN_ORACLE {
            return Err(Error::domain(format!(
                "derivative of order {order} needs r - {order} >= {R_MIN_ORACLE} (got r = {})",
                self.params.r
            )));
        }
        Ok(())
    }
}

/// A value with an error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub value: f64,
    pub error: f64,
}

const DIRECT_LIMIT: u64 = 4096;
const HEAD_TERMS: u64 = 32;

/// Evaluator of the full (untruncated) scaled remainder `g(t)`.
///
/// The first terms are summed directly; the rest of the series is the Lerch-type
/// integral
///
/// ```text
/// sum_{k>=K} (n/k)^r z^k = (n/K)^r z^K / Gamma(r) * int_0^inf v^{r-1} e^{-v} / (1 - e^{-v/K} z) dv
/// ```
///
/// with `z = e^{it}`, evaluated by adaptive Gauss-Kronrod quadrature. When the
/// series decays fast enough it is summed directly to round-off level instead.
#[derive(Debug, Clone)]
pub struct TailSeries {
    params: ClassParams,
    coeffs: Vec<f64>,
    head_error: f64,
    tail: Option<LerchTail>,
    coeff_sum: Option<f64>,
}

#[derive(Debug, Clone)]
struct LerchTail {
    start: u64,
    prefactor: f64,
    log_gamma_r: f64,
}

impl TailSeries {
    pub fn new(params: ClassParams) -> Result<Self> {
        params.require_r_at_least(R_MIN_SERIES, "the remainder series")?;
        let (r, n) = (params.r, params.n);
        let coeff_sum = if r > 1.0 {
            Some(hurwitz_zeta_scaled(r, n)?)
        } else {
            None
        };
        let nf = n as f64;
        if let Some(total) = coeff_sum {
            let mut m = n;
            while m - n < DIRECT_LIMIT {
                if tail_bound(r, n, m) < 1e-17 * total {
                    let coeffs = (n..=m).map(|k| (nf / k as f64).powf(r)).collect();
                    return Ok(Self {
                        params,
                        coeffs,
                        head_error: tail_bound(r, n, m) + 4.0 * f64::EPSILON * total,
                        tail: None,
                        coeff_sum,
                    });
                }
                m *= 2;
            }
        }
        let start = n + HEAD_TERMS;
        let coeffs: Vec<f64> = (n..start).map(|k| (nf / k as f64).powf(r)).collect();
        let head_error = 4.0 * f64::EPSILON * coeffs.iter().sum::<f64>();
        Ok(Self {
            params,
            coeffs,
            head_error,
            tail: Some(LerchTail {
                start,
                prefactor: (nf / start as f64).powf(r),
                log_gamma_r: log_gamma(r)?,
            }),
            coeff_sum,
        })
    }

    pub fn params(&self) -> &ClassParams {
        &self.params
    }

    /// `S(r, n) = sum_{k>=n} (n/k)^r`, the sup of `|g|` over all phases, when finite.
    pub fn coeff_sum(&self) -> Option<f64> {
        self.coeff_sum
    }

    /// Complex remainder `G(t) = sum_{k>=n} (n/k)^r e^{ikt}` with error estimate.
    pub fn eval_complex(&self, t: f64) -> Result<(Complex64, f64)> {
        let t = reduce_angle(t);
        if t == 0.0 {
            return match self.coeff_sum {
                Some(s) => Ok((Complex64::new(s, 0.0), 4.0 * f64::EPSILON * s)),
                None => Err(Error::domain(
                    "the remainder series diverges at t = 0 for r <= 1",
                )),
            };
        }
        let n = self.params.n;
        let mut re = NeumaierSum::new();
        let mut im = NeumaierSum::new();
        let (sin_t, cos_t) = t.sin_cos();
        let (mut s, mut c) = (n as f64 * t).sin_cos();
        for (i, w) in self.coeffs.iter().enumerate() {
            if i > 0 {
                if i % 64 == 0 {
                    let sc = ((n + i as u64) as f64 * t).sin_cos();
                    s = sc.0;
                    c = sc.1;
                } else {
                    let next_c = c * cos_t - s * sin_t;
                    s = s * cos_t + c * sin_t;
                    c = next_c;
                }
            }
            re.add(w * c);
            im.add(w * s);
        }
        let mut value = Complex64::new(re.value(), im.value());
        let mut error = self.head_error;
        if let Some(tail) = &self.tail {
            let (integral, err) = self.lerch_integral(tail, t);
            let rot = Complex64::from_polar(tail.prefactor, tail.start as f64 * t);
            value += rot * integral;
            error += tail.prefactor * err + 8.0 * f64::EPSILON * (rot * integral).norm();
        }
        Ok((value, error))
    }

    /// `g(t)` with an error estimate.
    pub fn eval(&self, t: f64) -> Result<Evaluation> {
        let (g, error) = self.eval_complex(t)?;
        let (c, s) = self.params.phase();
        Ok(Evaluation {
            value: c * g.re + s * g.im,
            error,
        })
    }

    fn lerch_integral(&self, tail: &LerchTail, t: f64) -> (Complex64, f64) {
        let r = self.params.r;
        let k = tail.start as f64;
        let lg = tail.log_gamma_r;
        let (sin_t, cos_t) = t.sin_cos();
        let half_sin_sq = 2.0 * (0.5 * t).sin().powi(2);
        let integrand = |v: f64| -> Complex64 {
            let x = -v / k;
            let em1 = x.exp_m1();
            let ex = em1 + 1.0;
            // 1 - e^{x + it}
            let den = Complex64::new(-(em1 * cos_t - half_sin_sq), -ex * sin_t);
            let weight = ((r - 1.0) * v.ln() - v - lg).exp();
            // scaled reciprocal: |den|^2 underflows for |t| below ~1e-154
            let m = den.re.abs().max(den.im.abs());
            let unit = den / m;
            unit.conj() * (weight / (unit.norm_sqr() * m))
        };
        let end = (r - 1.0).max(0.0) + 12.0 * r.max(1.0).sqrt() + 45.0;
        let mut points = vec![0.0, end];
        let tau = k * t.abs();
        for p in [0.25 * tau, tau, 4.0 * tau, r - 1.0] {
            if p > 0.0 && p < end {
                points.push(p);
            }
        }
        // the integrand behaves like v^{r-2} between tau and 1
        let mut p = 32.0 * tau;
        while p > 0.0 && p < 1.0 {
            points.push(p);
            p *= 8.0;
        }
        points.sort_by(f64::total_cmp);
        points.dedup();
        let max_intervals = 400 + points.len();
        let res = integrate(
            integrand,
            &points,
            QuadConfig {
                abs_tol: 0.0,
                rel_tol: 1e-14,
                max_intervals,
            },
        );
        (res.value, res.error)
    }
}

/// `P_{q,beta}(t) = sum_{k>=1} q^k cos(kt - beta pi/2)` in closed form.
pub fn eval_poisson_kernel(q: f64, beta: f64, t: f64) -> Result<f64> {
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::domain(format!("Poisson kernel needs 0 < q < 1 (got {q})")));
    }
    if !beta.is_finite() || !t.is_finite() {
        return Err(Error::domain("beta and t must be finite"));
    }
    let (c, s) = phase_of(beta.rem_euclid(4.0));
    let (sin_t, cos_t) = t.sin_cos();
    // q e^{it} / (1 - q e^{it}) = (q e^{it} - q^2) / |1 - q e^{it}|^2
    let den = 1.0 - 2.0 * q * cos_t + q * q;
    let re = q * cos_t - q * q;
    let im = q * sin_t;
    Ok((c * re + s * im) / den)
}

/// `B_{r,beta}(t) = sum_{k>=1} k^{-r} cos(kt - beta pi/2)`; ignores `params.n`.
pub fn weyl_nagy_kernel_value(params: ClassParams, t: f64) -> Result<f64> {
    params.require_r_at_least(R_MIN_ORACLE, "the Weyl-Nagy kernel")?;
    let unit = ClassParams::new(params.r, params.beta, 1, params.p)?;
    Ok(TailSeries::new(unit)?.eval(t)?.value)
}

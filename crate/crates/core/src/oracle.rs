//! Exact deviation constants by duality.
//!
//! For `p = 1` the normalized deviation `n^r E_n` is `(1/pi) max_t |g(t)|`; for
//! `p = inf` it is `(1/pi) int_{-pi}^{pi} |g(t)| dt`, where `g` is the scaled
//! remainder kernel of [`crate::kernels`].
//!
//! Both norms are enclosed using a modulus-of-continuity bound on `g`,
//!
//! ```text
//! |g(x) - g(y)|   <= sum_k (n/k)^r min(2, k h)      (|x - y| <= h)
//! |g'(x) - g'(y)| <= sum_k k (n/k)^r min(2, k h)
//! ```
//!
//! so that the maximum over a cell of width `h` exceeds the larger endpoint
//! value by at most `min(w0(h/2), w1(h) h/2)`.

use crate::error::{Error, Result};
use crate::kernels::{ClassParams, Evaluation, Metric, TailSeries, R_MIN_ORACLE, R_MIN_SERIES};
use crate::quad::{integrate, QuadConfig};
use crate::special::{hurwitz_zeta_rescaled, log_gamma};
use crate::sum::NeumaierSum;
use serde::{Deserialize, Serialize};
use std::cell::{Cell, RefCell};
use std::collections::HashMap;
use std::collections::BinaryHeap;
use std::f64::consts::{PI, TAU};

pub const DEFAULT_REL_TOL: f64 = 1e-9;
const MAX_EVALUATIONS: usize = 200_000;
const ZERO_TOL: f64 = 1e-13;

/// Which dual norm produced a [`NormalizedDeviation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMethod {
    SupnormOracle,
    L1Oracle,
}

/// `n^r E_n(W^r_{beta,p})` with a certified half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalizedDeviation {
    pub value: f64,
    pub half_width: f64,
    /// `ln E_n = ln(value) - r ln n`.
    pub log_absolute: f64,
    pub method: OracleMethod,
}

/// Maximum of `|g|` over the period.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxAbs {
    pub t_star: f64,
    pub value: f64,
    pub certificate: f64,
}

/// `int_{-pi}^{pi} |g(t)| dt`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L1Norm {
    pub value: f64,
    pub certificate: f64,
    /// Number of sign changes located.
    pub zeros: usize,
}

/// Upper bound on `sum_{from <= k < to} (n/k)^s` for `s > -1`, integer `from`.
fn power_sum_upper(s: f64, n: f64, from: u64, to: f64) -> f64 {
    const EXACT: u64 = 20_000;
    let from_f = from as f64;
    if to <= from_f {
        return 0.0;
    }
    let split = to.min((from + EXACT) as f64).ceil();
    let mut acc = NeumaierSum::new();
    let mut k = from;
    while (k as f64) < split {
        acc.add((n / k as f64).powf(s));
        k += 1;
    }
    let mut total = acc.value();
    if split < to {
        // monotone terms: the sum over [split, to) is at most the integral over
        // [split - 1, to) for s >= 0 and over [split, to] for s < 0
        let (x, y) = if s >= 0.0 { (split - 1.0, to) } else { (split, to + 1.0) };
        total += if (s - 1.0).abs() < 1e-12 {
            n * (y / x).ln()
        } else {
            // int_x^y (n/u)^s du = n^s (y^{1-s} - x^{1-s}) / (1 - s)
            n.powf(s) * (y.powf(1.0 - s) - x.powf(1.0 - s)) / (1.0 - s)
        };
    }
    total * (1.0 + 1e-12)
}

/// `sum_{k>=from} (n/k)^s` for `s > 1`, any real `from >= 1`.
fn power_tail(s: f64, n: f64, from: f64) -> Result<f64> {
    Ok(hurwitz_zeta_rescaled(s, from, n)? * (1.0 + 1e-12))
}

/// Moduli of continuity of `g` and `g'` for the class parameters.
#[derive(Debug, Clone)]
pub struct ContinuityModulus {
    r: f64,
    n: u64,
}

impl ContinuityModulus {
    pub fn new(params: &ClassParams) -> Self {
        Self {
            r: params.r,
            n: params.n,
        }
    }

    /// `sum_k k^j (n/k)^r min(2, k h)` for `j = 0` or `1`.
    fn weighted(&self, j: i32, h: f64) -> Result<f64> {
        let nf = self.n as f64;
        let cut = (2.0 / h).ceil().max(nf);
        let near = h * nf.powi(j + 1) * power_sum_upper(self.r - j as f64 - 1.0, nf, self.n, cut);
        let far = 2.0 * nf.powi(j) * power_tail(self.r - j as f64, nf, cut)?;
        Ok(near + far)
    }

    /// Bound on `|g(x) - g(y)|` for `|x - y| <= h`; needs `r > 1`.
    pub fn omega0(&self, h: f64) -> Result<f64> {
        if self.r <= 1.0 {
            return Ok(f64::INFINITY);
        }
        self.weighted(0, h)
    }

    /// Bound on `|g'(x) - g'(y)|` for `|x - y| <= h`; infinite unless `r > 2`.
    pub fn omega1(&self, h: f64) -> Result<f64> {
        if self.r <= 2.0 {
            return Ok(f64::INFINITY);
        }
        self.weighted(1, h)
    }

    /// Excess of `max_{cell} |g|` over the larger endpoint value, cell width `h`.
    pub fn cell_excess(&self, h: f64) -> Result<f64> {
        let first = self.omega0(0.5 * h)?;
        let second = self.omega1(h)? * 0.5 * h;
        Ok(first.min(second))
    }
}

/// Bound on `h^2 |g''(t)| / 8`, the chord deviation over a cell of width `h`,
/// valid wherever `|sin(t/2)| >= s`.
///
/// Differentiating the integral representation
/// `sum_{k>=n} (n/k)^r e^{ikt} = e^{int}/Gamma(r) int_0^inf u^{r-1} e^{-u} / (1 - w) du`
/// with `w = e^{-u/n + it}` twice gives
/// `|g''| <= 1/Gamma(r) int u^{r-1} e^{-u} (n^2/D + (2n+1) rho/D^2 + 2 rho^2/D^3) du`
/// where `rho = |w|` and `D = |1 - w| >= sqrt((1 - rho)^2 + 4 rho s^2)`.
pub fn chord_deviation_bound(r: f64, n: u64, s: f64, h: f64, log_gamma_r: f64) -> f64 {
    if !(s > 0.0) {
        return f64::INFINITY;
    }
    let nf = n as f64;
    let integrand = |u: f64| -> f64 {
        let x = -u / nf;
        let one_minus_rho = -x.exp_m1();
        let rho = 1.0 - one_minus_rho;
        let d = one_minus_rho.hypot(2.0 * rho.sqrt() * s);
        let q = h / d;
        let weight = ((r - 1.0) * u.ln() - u - log_gamma_r).exp();
        weight * (nf * nf * h * q + (2.0 * nf + 1.0) * rho * q * q + 2.0 * rho * rho * q * q / d)
            / 8.0
    };
    let end = (r - 1.0) + 12.0 * r.sqrt() + 45.0;
    let knee = 2.0 * nf * s;
    let mut points = vec![0.0, end];
    for p in [0.25 * knee, knee, 4.0 * knee, r - 1.0] {
        if p > 0.0 && p < end {
            points.push(p);
        }
    }
    let mut p = 32.0 * knee;
    while p < 1.0 {
        points.push(p);
        p *= 8.0;
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    let max_intervals = 200 + points.len();
    let res = integrate(
        integrand,
        &points,
        QuadConfig {
            abs_tol: 0.0,
            rel_tol: 1e-6,
            max_intervals,
        },
    );
    let bound = (res.value + 2.0 * res.error) * (1.0 + 1e-6);
    if bound.is_finite() {
        bound
    } else {
        f64::INFINITY
    }
}

/// Bounds `|g - L|` on a cell, `L` the chord through the endpoint values.
pub(crate) struct CellBounds {
    modulus: ContinuityModulus,
    r: f64,
    n: u64,
    log_gamma_r: f64,
    by_width: RefCell<HashMap<u64, f64>>,
}

impl CellBounds {
    pub(crate) fn new(params: &ClassParams) -> Result<Self> {
        Ok(Self {
            modulus: ContinuityModulus::new(params),
            r: params.r,
            n: params.n,
            log_gamma_r: log_gamma(params.r)?,
            by_width: RefCell::new(HashMap::new()),
        })
    }

    pub(crate) fn excess(&self, a: f64, b: f64) -> Result<f64> {
        let s = (0.5 * a).sin().abs().min((0.5 * b).sin().abs());
        let s = if a < 0.0 && b > 0.0 { 0.0 } else { s };
        self.excess_at(b - a, s)
    }

    /// As [`Self::excess`] for a cell of width `h` on which `|sin(t/2)| >= s`.
    pub(crate) fn excess_at(&self, h: f64, s: f64) -> Result<f64> {
        let cached = self.by_width.borrow().get(&h.to_bits()).copied();
        let uniform = match cached {
            Some(v) => v,
            None => {
                let v = self.modulus.cell_excess(h)?;
                self.by_width.borrow_mut().insert(h.to_bits(), v);
                v
            }
        };
        if uniform <= f64::EPSILON * h || s == 0.0 {
            return Ok(uniform);
        }
        let local = chord_deviation_bound(self.r, self.n, s, h, self.log_gamma_r);
        Ok(uniform.min(local))
    }
}

struct Node {
    bound: f64,
    a: f64,
    b: f64,
    fa: f64,
    fb: f64,
}

impl PartialEq for Node {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other).is_eq()
    }
}
impl Eq for Node {}
impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Node {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.bound
            .total_cmp(&other.bound)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

/// Representative of `t` in `[0, 2 pi)`.
fn canonical(t: f64) -> f64 {
    if t < 0.0 {
        t + TAU
    } else {
        t
    }
}

fn initial_cells(n: u64) -> usize {
    (4 * n as usize).max(256).next_power_of_two()
}

/// Certified maximum of `|g|` over the period by branch and bound.
///
/// A uniform grid is evaluated first; cells whose bound (larger endpoint value
/// plus the chord deviation bound) can still beat the incumbent by more than
/// `rel_tol / 2` are bisected until none remain. The coefficient sum `S(r, n)`
/// caps every bound, which settles `beta = 0 (mod 2)` at `t = 0`. Ties go to
/// the smallest `t` in `[0, 2 pi)`.
pub fn global_max_abs(series: &TailSeries, rel_tol: f64) -> Result<MaxAbs> {
    let params = series.params();
    params.require_r_at_least(R_MIN_ORACLE, "the sup-norm oracle")?;
    let bounds = CellBounds::new(params)?;
    let cap = series.coeff_sum().unwrap_or(f64::INFINITY);

    let evals = Cell::new(0usize);
    let max_err = Cell::new(0.0_f64);
    let eval = |t: f64| -> Result<f64> {
        let Evaluation { value, error } = series.eval(t)?;
        evals.set(evals.get() + 1);
        max_err.set(max_err.get().max(error));
        Ok(value.abs())
    };

    // [-pi, pi] keeps the nonsmooth point t = 0 where floats are dense
    let cells = initial_cells(params.n);
    let half = cells / 2;
    let h0 = PI / half as f64;
    let grid: Vec<f64> = (0..=cells)
        .map(|i| if i == half { 0.0 } else { -PI + h0 * i as f64 })
        .collect();
    let mut values = Vec::with_capacity(cells + 1);
    for &t in &grid[..cells] {
        values.push(eval(t)?);
    }
    values.push(values[0]);
    let budget = evals.get() + MAX_EVALUATIONS;

    let (mut best_t, mut best) = (0.0, values[half]);
    for (i, &v) in values[..cells].iter().enumerate() {
        if v > best || (v == best && canonical(grid[i]) < canonical(best_t)) {
            best = v;
            best_t = grid[i];
        }
    }

    let slack = |best: f64| 0.5 * rel_tol * best;
    let mut heap = BinaryHeap::new();
    // largest bound among discarded cells
    let mut pruned = best;
    for i in 0..cells {
        let (a, b) = (grid[i], grid[i + 1]);
        let bound = (values[i].max(values[i + 1]) + bounds.excess(a, b)?).min(cap);
        if bound > best + slack(best) {
            heap.push(Node {
                bound,
                a,
                b,
                fa: values[i],
                fb: values[i + 1],
            });
        } else {
            pruned = pruned.max(bound);
        }
    }

    while let Some(top) = heap.peek().map(|c| c.bound) {
        if top <= best + slack(best) {
            break;
        }
        if evals.get() > budget {
            return Err(Error::Accuracy {
                message: format!(
                    "sup-norm search budget exhausted for r = {}, beta = {}, n = {}",
                    params.r, params.beta, params.n
                ),
                estimate: best,
                error: top - best,
            });
        }
        let cell = heap.pop().expect("peeked");
        let mid = 0.5 * (cell.a + cell.b);
        if !(mid > cell.a && mid < cell.b) {
            // resolution exhausted; keep the bound for the certificate
            heap.push(cell);
            break;
        }
        let fm = eval(mid)?;
        if fm > best || (fm == best && canonical(mid) < canonical(best_t)) {
            best = fm;
            best_t = mid;
        }
        for (a, b, fa, fb) in [(cell.a, mid, cell.fa, fm), (mid, cell.b, fm, cell.fb)] {
            let bound = (fa.max(fb) + bounds.excess(a, b)?).min(cap);
            if bound > best + slack(best) {
                heap.push(Node { bound, a, b, fa, fb });
            } else {
                pruned = pruned.max(bound);
            }
        }
    }
    let upper = heap.peek().map_or(best, |c| c.bound).max(pruned);
    Ok(MaxAbs {
        t_star: canonical(best_t),
        value: best,
        certificate: (upper - best) + max_err.get(),
    })
}

/// Certified `int_{-pi}^{pi} |g(t)| dt`.
///
/// Sign changes are located on a uniform grid; cells where a pair of zeros
/// cannot be excluded by the chord bound are bisected, and each zero is
/// bisected to `ZERO_TOL`. Between consecutive zeros the integral is the
/// increment of the antiderivative, itself a remainder series with parameters
/// `(r + 1, beta + 1)` scaled by `1/n`.
pub fn l1_norm(series: &TailSeries, rel_tol: f64) -> Result<L1Norm> {
    let params = *series.params();
    params.require_r_at_least(R_MIN_SERIES, "the L1 oracle")?;
    let bounds = CellBounds::new(&params)?;
    let singular_origin = params.r <= 1.0;
    let antiderivative = TailSeries::new(ClassParams::new(
        params.r + 1.0,
        params.beta + 1.0,
        params.n,
        params.p,
    )?)?;
    let nf = params.n as f64;

    let max_err = Cell::new(0.0_f64);
    let eval = |t: f64| -> Result<f64> {
        let e = series.eval(t)?;
        max_err.set(max_err.get().max(e.error));
        Ok(e.value)
    };

    let per_half = initial_cells(params.n) / 2;
    let h = PI / per_half as f64;
    let mut grid: Vec<(f64, Option<f64>)> = Vec::with_capacity(2 * per_half + 1);
    for i in 0..=2 * per_half {
        let t = if i == per_half { 0.0 } else { -PI + h * i as f64 };
        let v = if i == per_half && singular_origin {
            None
        } else if i == 2 * per_half {
            grid[0].1
        } else {
            Some(eval(t)?)
        };
        grid.push((t, v));
    }
    let peak = grid
        .iter()
        .filter_map(|g| g.1)
        .fold(0.0_f64, |m, v| m.max(v.abs()));
    let rough: f64 = grid.iter().filter_map(|g| g.1).map(f64::abs).sum::<f64>() * h;

    let mut scan = ZeroScan {
        eval: &eval,
        bounds: &bounds,
        zeros: Vec::new(),
        zero_err: 0.0,
        slack: 0.0,
        budget: MAX_EVALUATIONS,
        slack_limit: 0.1 * rel_tol * rough,
    };
    let mut breaks = vec![-PI, PI];
    for w in grid.windows(2) {
        let ((a, fa), (b, fb)) = (w[0], w[1]);
        match (fa, fb) {
            (Some(fa), Some(fb)) => scan.cell((a, fa), (b, fb))?,
            _ => {
                // r = 1: no sign change within eps of the origin
                let eps = origin_clearance(&params).min(0.5 * h);
                breaks.push(0.0);
                if let Some(fa) = fa {
                    scan.cell((a, fa), (-eps, eval(-eps)?))?;
                } else if let Some(fb) = fb {
                    scan.cell((eps, eval(eps)?), (b, fb))?;
                }
            }
        }
    }
    let ZeroScan {
        mut zeros,
        zero_err,
        slack,
        ..
    } = scan;

    breaks.append(&mut zeros);
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();

    let mut anti_err = 0.0_f64;
    let mut anti = Vec::with_capacity(breaks.len());
    for &t in &breaks {
        let e = antiderivative.eval(t)?;
        anti_err = anti_err.max(e.error);
        anti.push(e.value / nf);
    }
    let mut total = NeumaierSum::new();
    for w in anti.windows(2) {
        total.add((w[1] - w[0]).abs());
    }
    let value = total.value();
    let certificate = zero_err
        + slack
        + 2.0 * (breaks.len() - 1) as f64 * (anti_err / nf + 4.0 * f64::EPSILON * peak);
    let _ = max_err;
    Ok(L1Norm {
        value,
        certificate,
        zeros: breaks.len() - 2,
    })
}

/// For `r = 1`, a radius around `t = 0` free of sign changes.
///
/// With `c, s` the phase and `H = H_{n-1}` the harmonic number,
/// `g(t) = c (-ln|2 sin(t/2)| - sum_{k<n} cos(kt)/k) + s ((pi - t)/2 - sum_{k<n} sin(kt)/k)`
/// on `(0, 2 pi)`, so the logarithm dominates once `-ln|2 sin(t/2)| > H + |s/c| (pi/2 + H)`;
/// for `c = 0` the sine part stays near `s pi / 2` while `(n - 1) |t| < pi/2 - |t|/2`.
fn origin_clearance(params: &ClassParams) -> f64 {
    let (c, s) = params.phase();
    let harmonic: f64 = (1..params.n).map(|k| 1.0 / k as f64).sum();
    if c.abs() < 1e-300 {
        return PI / (2.0 * params.n as f64 + 1.0);
    }
    let level = harmonic + (s / c).abs() * (0.5 * PI + harmonic);
    0.5 * 2.0 * (0.5 * (-level).exp()).asin()
}

struct ZeroScan<'a, F> {
    eval: &'a F,
    bounds: &'a CellBounds,
    zeros: Vec<f64>,
    /// Bound on the effect of zero location error.
    zero_err: f64,
    /// Area whose sign could not be certified.
    slack: f64,
    budget: usize,
    slack_limit: f64,
}

impl<F: Fn(f64) -> Result<f64>> ZeroScan<'_, F> {
    fn cell(&mut self, (a, fa): (f64, f64), (b, fb): (f64, f64)) -> Result<()> {
        if fa == 0.0 {
            self.zeros.push(a);
            return Ok(());
        }
        if fb != 0.0 && fa.signum() != fb.signum() {
            return self.bisect((a, fa), (b, fb));
        }
        let margin = fa.abs().min(fb.abs());
        let excess = self.bounds.excess(a, b)?;
        if margin > excess {
            return Ok(());
        }
        let mid = 0.5 * (a + b);
        let potential = 2.0 * (b - a) * (excess - margin);
        if self.budget == 0 || !(mid > a && mid < b) || potential < 1e-3 * self.slack_limit {
            // a missed pair of zeros flips the sign of at most this much area
            self.slack += potential;
            return Ok(());
        }
        self.budget -= 1;
        let fm = (self.eval)(mid)?;
        self.cell((a, fa), (mid, fm))?;
        self.cell((mid, fm), (b, fb))
    }

    /// Illinois regula falsi with a bisection step whenever the bracket fails
    /// to halve.
    fn bisect(&mut self, (mut a, mut fa): (f64, f64), (mut b, mut fb): (f64, f64)) -> Result<()> {
        let mut side = 0i8;
        let mut width = b - a;
        let mut iter = 0;
        while b - a > ZERO_TOL && iter < 200 {
            iter += 1;
            let secant = (a * fb - b * fa) / (fb - fa);
            let m = if iter % 3 == 0 && b - a > 0.5 * width {
                0.5 * (a + b)
            } else if secant > a && secant < b {
                secant
            } else {
                0.5 * (a + b)
            };
            if iter % 3 == 0 {
                width = b - a;
            }
            if !(m > a && m < b) {
                break;
            }
            let fm = (self.eval)(m)?;
            if fm == 0.0 {
                self.zeros.push(m);
                return Ok(());
            }
            if fm.signum() == fa.signum() {
                (a, fa) = (m, fm);
                if side == -1 {
                    fb *= 0.5;
                }
                side = -1;
            } else {
                (b, fb) = (m, fm);
                if side == 1 {
                    fa *= 0.5;
                }
                side = 1;
            }
        }
        // Illinois halves stored values; re-evaluating is not needed for the bound
        let sup = (self.eval)(a)?.abs().max((self.eval)(b)?.abs()) + self.bounds.excess(a, b)?;
        self.zero_err += (b - a) * sup;
        self.zeros.push(0.5 * (a + b));
        Ok(())
    }
}

/// `n^r E_n(W^r_{beta,p})` for `p` in `{1, inf}`.
pub fn exact_deviation(params: ClassParams, rel_tol: f64) -> Result<NormalizedDeviation> {
    if !(1e-12..=1e-2).contains(&rel_tol) {
        return Err(Error::domain(format!(
            "rel_tol must lie in [1e-12, 1e-2] (got {rel_tol:e})"
        )));
    }
    let series = TailSeries::new(params)?;
    let (value, half_width, method) = match params.p {
        Metric::L1 => {
            let m = global_max_abs(&series, rel_tol)?;
            (m.value / PI, m.certificate / PI, OracleMethod::SupnormOracle)
        }
        Metric::Linf => {
            let l = l1_norm(&series, rel_tol)?;
            (l.value / PI, l.certificate / PI, OracleMethod::L1Oracle)
        }
    };
    if !(value > 0.0) {
        return Err(Error::Consistency(format!("oracle produced non-positive value {value}")));
    }
    if half_width > rel_tol * value {
        return Err(Error::Accuracy {
            message: format!(
                "enclosure wider than requested for r = {}, beta = {}, n = {}, p = {}",
                params.r, params.beta, params.n, params.p
            ),
            estimate: value,
            error: half_width,
        });
    }
    Ok(NormalizedDeviation {
        value,
        half_width,
        log_absolute: value.ln() - params.r * (params.n as f64).ln(),
        method,
    })
}

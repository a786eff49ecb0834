//! Dense-grid reference values of the remainder kernel.
//!
//! On the grid `t_j = 2 pi j / N` the series folds exactly onto `N` aliased
//! coefficients
//!
//! ```text
//! C_m = sum_{k >= n, k = m (mod N)} (n/k)^r = (n/k0)^r + (n/N)^r zeta(r, 1 + k0/N)
//! ```
//!
//! with `k0` the least such `k`, so a single inverse FFT yields `g(t_j)` for
//! every `j` up to round-off. This is independent of the evaluators used by
//! the oracle and serves as a brute-force cross-check.

use crate::error::{Error, Result};
use crate::kernels::{ClassParams, R_MIN_ORACLE};
use crate::oracle::CellBounds;
use crate::special::hurwitz_zeta_rescaled;
use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use std::f64::consts::{PI, TAU};

/// Kernel values on a uniform grid over `[0, 2 pi)`.
#[derive(Debug, Clone)]
pub struct DenseGrid {
    params: ClassParams,
    values: Vec<f64>,
    /// Absolute error bound on every grid value.
    pub value_error: f64,
}

/// A reference value with a bound on its distance from the true quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reference {
    pub value: f64,
    pub error: f64,
}

/// Cells per block sharing one chord-deviation bound.
const BLOCK: usize = 1024;

impl DenseGrid {
    /// Evaluates `g` at `points` equispaced nodes; `points` must be a power of two.
    pub fn new(params: ClassParams, points: usize) -> Result<Self> {
        params.require_r_at_least(R_MIN_ORACLE, "the dense-grid reference")?;
        if !points.is_power_of_two() || points < 2 * BLOCK {
            return Err(Error::domain(format!(
                "grid size must be a power of two of at least {} (got {points})",
                2 * BLOCK
            )));
        }
        let (r, n) = (params.r, params.n);
        let big = points as u64;
        let nf = n as f64;
        let coeffs: Vec<Result<f64>> = (0..big)
            .into_par_iter()
            .map(|m| {
                let k0 = if m >= n % big { n - n % big + m } else { n - n % big + big + m };
                let lead = (nf / k0 as f64).powf(r);
                let rest = hurwitz_zeta_rescaled(r, 1.0 + k0 as f64 / big as f64, nf / big as f64)?;
                Ok(lead + rest)
            })
            .collect();
        let mut buffer = Vec::with_capacity(points);
        let mut total = 0.0;
        for c in coeffs {
            let c = c?;
            total += c;
            buffer.push(Complex64::new(c, 0.0));
        }
        FftPlanner::new().plan_fft_inverse(points).process(&mut buffer);
        let (c, s) = params.phase();
        let values = buffer.iter().map(|z| c * z.re + s * z.im).collect();
        let value_error = 8.0 * f64::EPSILON * (points as f64).log2() * total;
        Ok(Self {
            params,
            values,
            value_error,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn step(&self) -> f64 {
        TAU / self.values.len() as f64
    }

    /// Per-block bound on `|g - chord|` for the cells of each block.
    fn block_excess(&self) -> Result<Vec<f64>> {
        let h = self.step();
        let blocks = self.values.len() / BLOCK;
        let bounds = CellBounds::new(&self.params)?;
        (0..blocks)
            .map(|b| {
                let (a, e) = (b as f64 * BLOCK as f64 * h, (b + 1) as f64 * BLOCK as f64 * h);
                let s = if b == 0 || b + 1 == blocks {
                    0.0
                } else {
                    (0.5 * a).sin().min((0.5 * e).sin())
                };
                bounds.excess_at(h, s)
            })
            .collect()
    }

    /// `max_j |g(t_j)|` and the certified gap to `max_t |g(t)|`.
    pub fn max_abs(&self) -> Result<Reference> {
        let excess = self.block_excess()?;
        let value = self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let len = self.values.len();
        let mut gap = 0.0_f64;
        for j in 0..len {
            let e = excess[j / BLOCK];
            let hi = self.values[j].abs().max(self.values[(j + 1) % len].abs()) + e;
            gap = gap.max(hi - value);
        }
        Ok(Reference {
            value,
            error: gap + self.value_error,
        })
    }

    /// `int_{-pi}^{pi} |g|` by integrating the piecewise-linear interpolant's
    /// absolute value exactly.
    pub fn l1_norm(&self) -> Result<Reference> {
        let excess = self.block_excess()?;
        let h = self.step();
        let len = self.values.len();
        let mut acc = crate::sum::NeumaierSum::new();
        let mut err = 0.0;
        for j in 0..len {
            let (a, b) = (self.values[j], self.values[(j + 1) % len]);
            let cell = if a.signum() == b.signum() || a == 0.0 || b == 0.0 {
                0.5 * h * (a.abs() + b.abs())
            } else {
                0.5 * h * (a * a + b * b) / (a.abs() + b.abs())
            };
            acc.add(cell);
            err += h * excess[j / BLOCK];
        }
        Ok(Reference {
            value: acc.value(),
            error: err + TAU * self.value_error,
        })
    }

    /// Normalized deviation `n^r E_n` from the grid, with its error bound.
    pub fn normalized_deviation(&self) -> Result<Reference> {
        let raw = match self.params.p {
            crate::kernels::Metric::L1 => self.max_abs()?,
            crate::kernels::Metric::Linf => self.l1_norm()?,
        };
        Ok(Reference {
            value: raw.value / PI,
            error: raw.error / PI,
        })
    }
}

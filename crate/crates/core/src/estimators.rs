//! Closed-form estimates of the normalized deviation `n^r E_n`.
//!
//! Every value here is normalized by `n^r`, like the oracle output.

use crate::error::{Error, Result};
use crate::kernels::ClassParams;
use crate::special::{
    elliptic_k, hurwitz_zeta_difference_rescaled, hurwitz_zeta_integral_scaled,
    hurwitz_zeta_rescaled, hurwitz_zeta_scaled,
};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;

/// Relative tolerance for agreement of the two remainder representations.
pub const R_AGREEMENT_TOL: f64 = 1e-11;

/// Which formula produced an [`EstimateBreakdown`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    Thm1,
    Thm1Sharp,
    Thm3,
    ZetaForm,
    IntegralForm,
    StechkinPinf,
    TelyakovskiiPinf,
    KolmogorovPinf,
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Theorem::Thm1 => "thm1",
            Theorem::Thm1Sharp => "thm1_sharp",
            Theorem::Thm3 => "thm3",
            Theorem::ZetaForm => "zeta_form",
            Theorem::IntegralForm => "integral_form",
            Theorem::StechkinPinf => "stechkin_pinf",
            Theorem::TelyakovskiiPinf => "telyakovskii_pinf",
            Theorem::KolmogorovPinf => "kolmogorov_pinf",
        };
        f.write_str(s)
    }
}

/// Remainder-scale regime for `r > 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Regime {
    /// `n = 1`, whatever `r`.
    N1,
    /// `2 < r <= n + 1`.
    SmallR,
    /// `n + 1 < r <= n^2`.
    MidR,
    /// `r > n^2`.
    LargeR,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Regime::N1 => "N1",
            Regime::SmallR => "SmallR",
            Regime::MidR => "MidR",
            Regime::LargeR => "LargeR",
        };
        f.write_str(s)
    }
}

/// A principal term with its remainder scale and, when available, a bracket.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimateBreakdown {
    pub principal: f64,
    pub delta: f64,
    pub regime: Option<Regime>,
    pub bracket_lo: Option<f64>,
    pub bracket_hi: Option<f64>,
    pub theorem: Theorem,
}

impl EstimateBreakdown {
    fn point(theorem: Theorem, principal: f64, delta: f64) -> Self {
        Self {
            principal,
            delta,
            regime: None,
            bracket_lo: None,
            bracket_hi: None,
            theorem,
        }
    }
}

fn require_r_above_two(r: f64) -> Result<()> {
    if r > 2.0 {
        Ok(())
    } else {
        Err(Error::domain(format!(
            "the asymptotic estimates need r > 2 (got r = {r})"
        )))
    }
}

/// `(n/r)/pi` with the bracket half-width `(n/r)(2/pi)(1/(r-2) + r/n)`.
pub fn estimate_thm1(params: ClassParams) -> Result<EstimateBreakdown> {
    let (r, n) = (params.r, params.n as f64);
    require_r_above_two(r)?;
    let ratio = n / r;
    let principal = ratio / PI;
    let spread = ratio * (1.0 / (r - 2.0) + r / n);
    let half = 2.0 / PI * spread;
    Ok(EstimateBreakdown {
        bracket_lo: Some(principal - half),
        bracket_hi: Some(principal + half),
        ..EstimateBreakdown::point(Theorem::Thm1, principal, spread)
    })
}

/// `((n/r)(1 + t4/(r-2)) + t3)/pi` with `t3` in `[-1, 2]` and `t4` in `(-2, 1)`.
pub fn estimate_thm1_sharp(params: ClassParams) -> Result<EstimateBreakdown> {
    let (r, n) = (params.r, params.n as f64);
    require_r_above_two(r)?;
    let ratio = n / r;
    let lo = (ratio * (1.0 - 2.0 / (r - 2.0)) - 1.0) / PI;
    let hi = (ratio * (1.0 + 1.0 / (r - 2.0)) + 2.0) / PI;
    Ok(EstimateBreakdown {
        bracket_lo: Some(lo),
        bracket_hi: Some(hi),
        ..EstimateBreakdown::point(Theorem::Thm1Sharp, ratio / PI, 0.5 * (hi - lo))
    })
}

/// Regime of `(r, n)`; the boundaries `r = n + 1` and `r = n^2` belong to the
/// lower regime, and `n = 1` takes precedence.
pub fn classify_regime(r: f64, n: u64) -> Result<Regime> {
    require_r_above_two(r)?;
    if n == 0 {
        return Err(Error::domain("n must be at least 1"));
    }
    let nf = n as f64;
    Ok(if n == 1 {
        Regime::N1
    } else if r <= nf + 1.0 {
        Regime::SmallR
    } else if r <= nf * nf {
        Regime::MidR
    } else {
        Regime::LargeR
    })
}

/// Remainder scale of the uniform estimate in a given regime.
pub fn regime_delta(regime: Regime, r: f64, n: u64) -> f64 {
    let nf = n as f64;
    match regime {
        Regime::N1 => (-r).exp(),
        Regime::SmallR => nf / (r * (r - 2.0)),
        Regime::MidR => r / (nf * nf) * (-r / nf).exp(),
        Regime::LargeR => (-r * (1.0 / nf).ln_1p()).exp(),
    }
}

/// Principal term `1/(pi (1 - e^{-r/n}))`, uniform over all regimes.
pub fn thm3_principal(r: f64, n: u64) -> f64 {
    1.0 / (PI * -(-r / n as f64).exp_m1())
}

/// Uniform estimate `1/(pi (1 - e^{-r/n})) + O(delta_{r,n})`.
pub fn estimate_thm3(params: ClassParams) -> Result<EstimateBreakdown> {
    let (r, n) = (params.r, params.n);
    let regime = classify_regime(r, n)?;
    Ok(EstimateBreakdown {
        regime: Some(regime),
        ..EstimateBreakdown::point(Theorem::Thm3, thm3_principal(r, n), regime_delta(regime, r, n))
    })
}

/// `n^r R_{r,n}` with `R_{r,n} = (1/n) zeta(r-1, n+1) - zeta(r, n+1)`, computed
/// from the shifted sums.
pub fn remainder_scaled_shifted(r: f64, n: u64) -> Result<f64> {
    require_r_above_two(r)?;
    let nf = n as f64;
    Ok(hurwitz_zeta_rescaled(r - 1.0, nf + 1.0, nf)? - hurwitz_zeta_rescaled(r, nf + 1.0, nf)?)
}

/// `n^r R_{r,n}` from the unshifted form `(1/n) zeta(r-1, n) - zeta(r, n)`,
/// summed termwise so the vanishing `k = n` term causes no cancellation.
pub fn remainder_scaled_unshifted(r: f64, n: u64) -> Result<f64> {
    require_r_above_two(r)?;
    let nf = n as f64;
    hurwitz_zeta_difference_rescaled(r - 1.0, r, nf, nf)
}

/// `[(S - n^r R)/pi, S/pi]` with `S = n^r zeta(r, n)`, plus `n^r R` itself.
///
/// `n^r R` is computed from both representations; they must agree to
/// [`R_AGREEMENT_TOL`].
pub fn zeta_form_bracket(params: ClassParams) -> Result<(f64, f64, f64)> {
    let (r, n) = (params.r, params.n);
    let shifted = remainder_scaled_shifted(r, n)?;
    let unshifted = remainder_scaled_unshifted(r, n)?;
    let scale = shifted.abs().max(unshifted.abs());
    if (shifted - unshifted).abs() > R_AGREEMENT_TOL * scale {
        return Err(Error::Consistency(format!(
            "remainder representations disagree for r = {r}, n = {n}: {shifted:e} vs {unshifted:e}"
        )));
    }
    let s = hurwitz_zeta_scaled(r, n)?;
    Ok(((s - unshifted) / PI, s / PI, unshifted))
}

/// `n^r / (pi Gamma(r)) int_0^inf t^{r-1} e^{-nt} / (1 - e^{-t}) dt`, the upper
/// end of [`zeta_form_bracket`] by quadrature.
pub fn integral_form_value(params: ClassParams, tol: f64) -> Result<f64> {
    require_r_above_two(params.r)?;
    if !(tol > 0.0) {
        return Err(Error::domain("tol must be positive"));
    }
    let (value, _) = hurwitz_zeta_integral_scaled(params.r, params.n as f64, tol)?;
    Ok(value / PI)
}

/// `(8/pi^2) K(e^{-r/n})` with remainder scale `1/r`.
pub fn estimate_stechkin_pinf(params: ClassParams) -> Result<EstimateBreakdown> {
    let r = params.r;
    if !(r >= 1.0) {
        return Err(Error::domain(format!("this estimate needs r >= 1 (got r = {r})")));
    }
    let q = (-r / params.n as f64).exp();
    let principal = 8.0 / (PI * PI) * elliptic_k(q)?;
    Ok(EstimateBreakdown::point(Theorem::StechkinPinf, principal, 1.0 / r))
}

/// `(4/pi^2) ln(n / min(n, r+1)) + (2/(pi r)) |sin(beta pi/2)|` with unit remainder scale.
pub fn estimate_telyakovskii_pinf(params: ClassParams) -> Result<EstimateBreakdown> {
    let (r, n) = (params.r, params.n as f64);
    if !(r > 0.0) {
        return Err(Error::domain(format!("this estimate needs r > 0 (got r = {r})")));
    }
    let log_part = 4.0 / (PI * PI) * (n / n.min(r + 1.0)).ln();
    let (_, sin_part) = params.phase();
    let principal = log_part + 2.0 / (PI * r) * sin_part.abs();
    Ok(EstimateBreakdown::point(Theorem::TelyakovskiiPinf, principal, 1.0))
}

/// `(4/pi^2) ln n` with unit remainder scale; needs `n >= 2`.
pub fn estimate_kolmogorov_pinf(params: ClassParams) -> Result<EstimateBreakdown> {
    if !(params.r > 0.0) {
        return Err(Error::domain(format!(
            "this estimate needs r > 0 (got r = {})",
            params.r
        )));
    }
    if params.n < 2 {
        return Err(Error::domain("this estimate needs n >= 2 (ln 1 = 0 is degenerate)"));
    }
    let principal = 4.0 / (PI * PI) * (params.n as f64).ln();
    Ok(EstimateBreakdown::point(Theorem::KolmogorovPinf, principal, 1.0))
}

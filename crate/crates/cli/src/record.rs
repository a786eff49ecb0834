use crate::error::CliError;
use serde::Serialize;
use weylnagy::estimators::{estimate_thm3, zeta_form_bracket, Regime};
use weylnagy::kernels::{ClassParams, Metric};
use weylnagy::oracle::{exact_deviation, OracleMethod};

pub const CSV_HEADER: &str = "r,beta,n,p,normalized_exact,exact_halfwidth,principal_thm3,delta_thm3,regime,bracket6g_lo,bracket6g_hi,ratio_to_principal";

/// One computed grid point.
#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    pub r: f64,
    pub beta: f64,
    pub n: u64,
    pub p: Metric,
    pub normalized_exact: f64,
    pub exact_halfwidth: f64,
    pub principal_thm3: Option<f64>,
    pub delta_thm3: Option<f64>,
    pub regime: Option<Regime>,
    pub bracket6g_lo: Option<f64>,
    pub bracket6g_hi: Option<f64>,
    pub ratio_to_principal: Option<f64>,
    pub method: OracleMethod,
}

/// Smallest r for which the estimate columns exist.
const ESTIMATE_R_MIN: f64 = 2.0;

pub fn compute(params: ClassParams, tol: f64, exact_only: bool) -> Result<OutputRecord, CliError> {
    if !exact_only && params.r <= ESTIMATE_R_MIN {
        return Err(CliError::Usage(format!(
            "r > 2 is required for the estimate and bracket fields (got r = {}); \
             pass --exact-only to compute the exact value alone, which needs r >= 1.05",
            params.r
        )));
    }
    let exact = exact_deviation(params, tol)?;
    let mut rec = OutputRecord {
        r: params.r,
        beta: params.beta,
        n: params.n,
        p: params.p,
        normalized_exact: exact.value,
        exact_halfwidth: exact.half_width,
        principal_thm3: None,
        delta_thm3: None,
        regime: None,
        bracket6g_lo: None,
        bracket6g_hi: None,
        ratio_to_principal: None,
        method: exact.method,
    };
    if exact_only {
        return Ok(rec);
    }
    let thm3 = estimate_thm3(params)?;
    rec.regime = thm3.regime;
    // the uniform estimate and the zeta bracket describe p = 1 only
    if params.p == Metric::L1 {
        let (lo, hi, _) = zeta_form_bracket(params)?;
        rec.principal_thm3 = Some(thm3.principal);
        rec.delta_thm3 = Some(thm3.delta);
        rec.bracket6g_lo = Some(lo);
        rec.bracket6g_hi = Some(hi);
        rec.ratio_to_principal = Some(exact.value / thm3.principal);
    }
    Ok(rec)
}

/// 17 significant digits, which round-trips every `f64`.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

impl OutputRecord {
    pub fn csv_row(&self) -> String {
        [
            num(self.r),
            num(self.beta),
            self.n.to_string(),
            self.p.to_string(),
            num(self.normalized_exact),
            num(self.exact_halfwidth),
            opt(self.principal_thm3),
            opt(self.delta_thm3),
            self.regime.map(|g| g.to_string()).unwrap_or_default(),
            opt(self.bracket6g_lo),
            opt(self.bracket6g_hi),
            opt(self.ratio_to_principal),
        ]
        .join(",")
    }
}

mod error;
mod grid;
mod record;

use clap::{Args, Parser, Subcommand, ValueEnum};
use error::CliError;
use rayon::prelude::*;
use record::{OutputRecord, CSV_HEADER};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use weylnagy::estimators::{
    estimate_kolmogorov_pinf, estimate_stechkin_pinf, estimate_telyakovskii_pinf, estimate_thm1,
    estimate_thm1_sharp, estimate_thm3, integral_form_value, zeta_form_bracket, EstimateBreakdown,
    Theorem,
};
use weylnagy::kernels::{ClassParams, Metric};
use weylnagy::oracle::DEFAULT_REL_TOL;
use weylnagy::verify::{run_suites, Baseline, GridPreset, SuiteSelection, VerificationReport};

#[derive(Parser, Debug)]
#[command(name = "weylnagy", version, about = "Sharp Fourier-sum deviation constants on Weyl-Nagy classes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact normalized deviation at one point, with the uniform estimate beside it.
    Exact(ExactArgs),
    /// Evaluate one closed-form estimate.
    Estimate(EstimateArgs),
    /// Exact values over a grid, written as CSV.
    Sweep(SweepArgs),
    /// Run the verification suites and write a JSON report.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct PointArgs {
    #[arg(long)]
    r: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    beta: f64,
    #[arg(long)]
    n: u64,
    #[arg(long, default_value = "1", value_parser = parse_metric)]
    p: Metric,
}

#[derive(Args, Debug)]
struct ExactArgs {
    #[command(flatten)]
    point: PointArgs,
    /// Relative tolerance of the exact value.
    #[arg(long, env = "WN_TOL", default_value_t = DEFAULT_REL_TOL)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Skip the estimate columns, allowing 1.05 <= r <= 2.
    #[arg(long)]
    exact_only: bool,
}

#[derive(Args, Debug)]
struct EstimateArgs {
    #[arg(long, value_enum)]
    theorem: TheoremArg,
    #[command(flatten)]
    point: PointArgs,
    /// Quadrature tolerance for the integral form.
    #[arg(long, env = "WN_TOL", default_value_t = DEFAULT_REL_TOL)]
    tol: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Comma list or lo:hi:count.
    #[arg(long)]
    r_set: String,
    #[arg(long)]
    n_set: String,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    beta_set: String,
    #[arg(long, default_value = "1", value_parser = parse_metric)]
    p: Metric,
    #[arg(long)]
    out: PathBuf,
    #[arg(long, env = "WN_TOL", default_value_t = DEFAULT_REL_TOL)]
    tol: f64,
    #[arg(long)]
    exact_only: bool,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = SuiteArg::All)]
    suite: SuiteArg,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Random draws for the inequality suite.
    #[arg(long, default_value_t = 1000)]
    count: usize,
    #[arg(long, value_enum, default_value_t = PresetArg::Smoke)]
    grid_preset: PresetArg,
    /// Baseline constants file; the checked-in baseline when absent.
    #[arg(long)]
    baseline: Option<PathBuf>,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, env = "WN_TOL", default_value_t = DEFAULT_REL_TOL)]
    tol: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TheoremArg {
    #[value(name = "1")]
    One,
    #[value(name = "1sharp")]
    OneSharp,
    #[value(name = "3")]
    Three,
    Zeta,
    Integral,
    Stechkin,
    Telyakovskii,
    Kolmogorov,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SuiteArg {
    Inequalities,
    Brackets,
    Constants,
    All,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PresetArg {
    Smoke,
    Full,
}

fn parse_metric(s: &str) -> Result<Metric, String> {
    s.parse().map_err(|e: weylnagy::Error| e.to_string())
}

fn check_tol(tol: f64) -> Result<(), CliError> {
    if tol.is_finite() && tol > 0.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("tolerance must be positive (got {tol})")))
    }
}

impl PointArgs {
    fn params(&self) -> Result<ClassParams, CliError> {
        Ok(ClassParams::new(self.r, self.beta, self.n, self.p)?)
    }
}

fn cmd_exact(args: &ExactArgs) -> Result<(), CliError> {
    check_tol(args.tol)?;
    let rec = record::compute(args.point.params()?, args.tol, args.exact_only)?;
    let text = match args.format {
        Format::Csv => format!("{CSV_HEADER}\n{}\n", rec.csv_row()),
        Format::Json => to_json(&rec),
    };
    print!("{text}");
    Ok(())
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("output serializes") + "\n"
}

fn estimate(theorem: TheoremArg, params: ClassParams, tol: f64) -> Result<EstimateBreakdown, CliError> {
    Ok(match theorem {
        TheoremArg::One => estimate_thm1(params)?,
        TheoremArg::OneSharp => estimate_thm1_sharp(params)?,
        TheoremArg::Three => estimate_thm3(params)?,
        TheoremArg::Zeta => {
            let (lo, hi, rem) = zeta_form_bracket(params)?;
            EstimateBreakdown {
                principal: hi,
                delta: rem / std::f64::consts::PI,
                regime: None,
                bracket_lo: Some(lo),
                bracket_hi: Some(hi),
                theorem: Theorem::ZetaForm,
            }
        }
        TheoremArg::Integral => {
            let value = integral_form_value(params, tol)?;
            let (_, _, rem) = zeta_form_bracket(params)?;
            let width = rem / std::f64::consts::PI;
            EstimateBreakdown {
                principal: value,
                delta: width,
                regime: None,
                bracket_lo: Some(value - width),
                bracket_hi: Some(value),
                theorem: Theorem::IntegralForm,
            }
        }
        TheoremArg::Stechkin => estimate_stechkin_pinf(params)?,
        TheoremArg::Telyakovskii => estimate_telyakovskii_pinf(params)?,
        TheoremArg::Kolmogorov => estimate_kolmogorov_pinf(params)?,
    })
}

fn cmd_estimate(args: &EstimateArgs) -> Result<(), CliError> {
    check_tol(args.tol)?;
    let params = args.point.params()?;
    let e = estimate(args.theorem, params, args.tol)?;
    let text = match args.format {
        Format::Json => to_json(&e),
        Format::Csv => {
            let opt = |x: Option<f64>| x.map(record::num).unwrap_or_default();
            format!(
                "theorem,r,beta,n,principal,delta,regime,bracket_lo,bracket_hi\n{},{},{},{},{},{},{},{},{}\n",
                e.theorem,
                record::num(params.r),
                record::num(params.beta),
                params.n,
                record::num(e.principal),
                record::num(e.delta),
                e.regime.map(|g| g.to_string()).unwrap_or_default(),
                opt(e.bracket_lo),
                opt(e.bracket_hi),
            )
        }
    };
    print!("{text}");
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), CliError> {
    check_tol(args.tol)?;
    let rs = grid::parse_reals("--r-set", &args.r_set)?;
    let ns = grid::parse_orders("--n-set", &args.n_set)?;
    let betas = grid::parse_reals("--beta-set", &args.beta_set)?;
    let mut points = Vec::with_capacity(rs.len() * ns.len() * betas.len());
    for &r in &rs {
        for &n in &ns {
            for &beta in &betas {
                points.push(ClassParams::new(r, beta, n, args.p)?);
            }
        }
    }
    let mut rows: Vec<OutputRecord> = points
        .par_iter()
        .map(|&c| record::compute(c, args.tol, args.exact_only))
        .collect::<Result<_, _>>()?;
    rows.sort_by(|a, b| {
        a.r.total_cmp(&b.r)
            .then(a.n.cmp(&b.n))
            .then(a.beta.total_cmp(&b.beta))
    });
    let mut text = String::from(CSV_HEADER);
    text.push('\n');
    for row in &rows {
        text.push_str(&row.csv_row());
        text.push('\n');
    }
    write_atomically(&args.out, &text)
}

/// Writes through a sibling temporary file so a failed run leaves nothing behind.
fn write_atomically(path: &Path, text: &str) -> Result<(), CliError> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = PathBuf::from(tmp);
    let shown = path.display().to_string();
    let result = std::fs::File::create(&tmp)
        .and_then(|mut f| {
            f.write_all(text.as_bytes())?;
            f.sync_all()
        })
        .and_then(|_| std::fs::rename(&tmp, path));
    if let Err(e) = result {
        let _ = std::fs::remove_file(&tmp);
        return Err(CliError::io(shown, e));
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    check_tol(args.tol)?;
    let baseline = match &args.baseline {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path.display().to_string(), e))?;
            Baseline::parse(&text)?
        }
        None => Baseline::default_checked_in(),
    };
    let selection = match args.suite {
        SuiteArg::Inequalities => SuiteSelection { inequalities: true, brackets: false, constants: false },
        SuiteArg::Brackets => SuiteSelection { inequalities: false, brackets: true, constants: false },
        SuiteArg::Constants => SuiteSelection { inequalities: false, brackets: false, constants: true },
        SuiteArg::All => SuiteSelection::ALL,
    };
    let preset = match args.grid_preset {
        PresetArg::Smoke => GridPreset::Smoke,
        PresetArg::Full => GridPreset::Full,
    };
    let report: VerificationReport = run_suites(selection, args.seed, args.count, preset, args.tol, &baseline)?;
    let text = report.to_json();
    match &args.out {
        Some(path) => write_atomically(path, &text)?,
        None => print!("{text}"),
    }
    eprintln!(
        "{} checks, {} passed, {} vacuous, {} errored",
        report.summary.total, report.summary.passed, report.summary.vacuous, report.summary.errored
    );
    if report.all_passed() {
        Ok(())
    } else {
        Err(CliError::ChecksFailed {
            failed: report.summary.failed,
            total: report.summary.total,
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Exact(a) => cmd_exact(a),
        Command::Estimate(a) => cmd_estimate(a),
        Command::Sweep(a) => cmd_sweep(a),
        Command::Verify(a) => cmd_verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

//! Command-line front end: runs the library's experiments and emits
//! machine-readable tables. Every run is deterministic — identical flags
//! produce byte-identical output, floats printed as shortest round-trip
//! decimals. Exit codes: 0 all passed (or nothing to check), 1 an acceptance
//! check failed or the computation errored, 2 usage error.

use std::io::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use longmem::analytic::{AnalyticContext, DEFAULT_RESOLUTION};
use longmem::asympt::{solve_ab, unit_zero_parity_table, ParityRow};
use longmem::checks;
use longmem::inteq::{constants_report, solve_stieltjes, KernelSystem, SolveMethod};
use longmem::predictor::{levinson_trace, Precision, PredictorTrace};
use longmem::process::{arima_covariance, fgn_covariance, ProcessSpec};
use longmem::spectral::{density_csv, szego_constants};
use longmem::{hilbert_verify, Error};

#[derive(Parser)]
#[command(name = "longmem", version, about = "Prediction laws for long-memory sequences")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Levinson trace: α(n), σ²(n) and their scaled deviations up to n-max.
    Predict(SpecArgs),
    /// Spectral densities (csv) or the innovation variances (json).
    Spectral(SpecArgs),
    /// Boundary-phase context summary: s₀, σ₀², ψ(0).
    Analytic(SpecArgs),
    /// Kernel moments λ₀, μ₀ vs their closed forms (json) or the solved
    /// Stieltjes table (csv).
    Inteq(SpecArgs),
    /// Exact prediction vs the recombined parity systems over an order grid.
    Asympt(SpecArgs),
    /// Boundary-problem diagnostic report for the tail generating functions.
    Verify(SpecArgs),
    /// Parity-split convergence table for θ(z) = 1 + z with negative memory.
    #[command(name = "appendix_e")]
    AppendixE(SpecArgs),
    /// The full acceptance suite in dependency order, one summary artifact.
    All(OutArgs),
}

#[derive(Args)]
struct OutArgs {
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct SpecArgs {
    /// Memory parameter d = H - 1/2, in (-1/2, 1/2) and nonzero.
    #[arg(long, allow_hyphen_values = true)]
    d: f64,
    /// Moving-average coefficients, constant term first (θ(z) = θ₀ + θ₁z + …).
    #[arg(long, value_delimiter = ',', default_value = "1", allow_hyphen_values = true)]
    theta: Vec<f64>,
    /// Autoregressive coefficients, constant term first.
    #[arg(long, value_delimiter = ',', default_value = "1", allow_hyphen_values = true)]
    phi: Vec<f64>,
    /// Largest prediction order (defaults per command).
    #[arg(long)]
    n_max: Option<usize>,
    /// Explicit orders to report (strictly increasing); defaults per command.
    #[arg(long, value_delimiter = ',')]
    n_grid: Option<Vec<usize>>,
    /// Levinson arithmetic.
    #[arg(long, value_enum, default_value_t = PrecisionArg::Double)]
    precision: PrecisionArg,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<std::path::PathBuf>,
    /// Output format; each command has a natural default.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, ValueEnum)]
enum PrecisionArg {
    Double,
    Dd,
}

impl PrecisionArg {
    fn to_lib(self) -> Precision {
        match self {
            PrecisionArg::Double => Precision::Double,
            PrecisionArg::Dd => Precision::DoubleDouble,
        }
    }
}

/// A usage problem (exit 2) as opposed to a computation failure (exit 1).
struct UsageError(String);

enum RunError {
    Usage(String),
    Failed(String),
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        RunError::Failed(e.to_string())
    }
}

impl From<UsageError> for RunError {
    fn from(e: UsageError) -> Self {
        RunError::Usage(e.0)
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Failed(format!("io: {e}"))
    }
}

impl From<serde_json::Error> for RunError {
    fn from(e: serde_json::Error) -> Self {
        RunError::Failed(format!("json: {e}"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Predict(a) => run_predict(a),
        Command::Spectral(a) => run_spectral(a),
        Command::Analytic(a) => run_analytic(a),
        Command::Inteq(a) => run_inteq(a),
        Command::Asympt(a) => run_asympt(a),
        Command::Verify(a) => run_verify(a),
        Command::AppendixE(a) => run_appendix_e(a),
        Command::All(a) => run_all(a),
    };
    match outcome {
        Ok(all_pass) => {
            if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(RunError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(2)
        }
        Err(RunError::Failed(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

impl SpecArgs {
    fn spec(&self) -> Result<ProcessSpec, RunError> {
        ProcessSpec::new(self.d, self.theta.clone(), self.phi.clone())
            .map_err(|e| RunError::Usage(e.to_string()))
    }

    fn format(&self, natural: Format) -> Format {
        self.format.unwrap_or(natural)
    }

    fn n_max_or(&self, natural: usize) -> Result<usize, RunError> {
        let n = self.n_max.unwrap_or(natural);
        if n == 0 {
            return Err(UsageError("n-max must be positive".into()).into());
        }
        Ok(n)
    }

    /// The validated order list: explicit grid, or `default` capped by n-max.
    fn orders(&self, default: &[usize]) -> Result<Vec<usize>, RunError> {
        let grid = match &self.n_grid {
            Some(g) => g.clone(),
            None => {
                let cap = self.n_max.unwrap_or(usize::MAX);
                default.iter().copied().filter(|&n| n <= cap).collect()
            }
        };
        if grid.is_empty() {
            return Err(UsageError("order grid is empty".into()).into());
        }
        if grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(UsageError("order grid must be strictly increasing".into()).into());
        }
        if grid[0] == 0 {
            return Err(UsageError("orders must be positive".into()).into());
        }
        Ok(grid)
    }

    fn emit(&self, text: String) -> Result<(), RunError> {
        emit(&self.out, text)
    }
}

fn emit(out: &Option<std::path::PathBuf>, text: String) -> Result<(), RunError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn covariance(spec: &ProcessSpec, n_max: usize) -> Result<longmem::CovarianceTable, Error> {
    if spec.is_pure_fgn() {
        fgn_covariance(spec.d(), n_max + 1)
    } else {
        arima_covariance(spec, n_max + 1, 1e-14)
    }
}

fn trace_for(args: &SpecArgs, spec: &ProcessSpec, n_max: usize) -> Result<PredictorTrace, RunError> {
    let cov = covariance(spec, n_max)?;
    Ok(levinson_trace(&cov, n_max, args.precision.to_lib())?)
}

fn run_predict(args: &SpecArgs) -> Result<bool, RunError> {
    let spec = args.spec()?;
    let n_max = args.n_max_or(256)?;
    let trace = trace_for(args, &spec, n_max)?;
    let sz = szego_constants(&spec)?;
    match args.format(Format::Csv) {
        Format::Csv => {
            let text = match &args.n_grid {
                None => trace.to_csv(sz.sigma2, sz.sigma0_sq),
                Some(_) => {
                    let grid = args.orders(&[])?;
                    let mut out = String::from("n,alpha,sigma2,n_alpha,n_delta_over_sigma2\n");
                    for &n in &grid {
                        if n > n_max {
                            return Err(UsageError(format!(
                                "order {n} exceeds n-max {n_max}"
                            ))
                            .into());
                        }
                        let nf = n as f64;
                        out.push_str(&format!(
                            "{n},{},{},{},{}\n",
                            trace.alpha(n),
                            trace.sigma2(n),
                            nf * trace.alpha(n),
                            nf * (trace.sigma2(n) - sz.sigma2) / sz.sigma0_sq
                        ));
                    }
                    out
                }
            };
            args.emit(text)?;
        }
        Format::Json => {
            #[derive(serde::Serialize)]
            struct Row {
                n: usize,
                alpha: f64,
                sigma2: f64,
                n_alpha: f64,
                n_delta_over_sigma2: f64,
            }
            let grid: Vec<usize> = match &args.n_grid {
                None => (1..=n_max).collect(),
                Some(_) => args.orders(&[])?,
            };
            if grid.last().copied().unwrap_or(0) > n_max {
                return Err(UsageError(format!("order grid exceeds n-max {n_max}")).into());
            }
            let rows: Vec<Row> = grid
                .iter()
                .map(|&n| {
                    let nf = n as f64;
                    Row {
                        n,
                        alpha: trace.alpha(n),
                        sigma2: trace.sigma2(n),
                        n_alpha: nf * trace.alpha(n),
                        n_delta_over_sigma2: nf * (trace.sigma2(n) - sz.sigma2) / sz.sigma0_sq,
                    }
                })
                .collect();
            args.emit(serde_json::to_string_pretty(&rows)? + "\n")?;
        }
    }
    Ok(true)
}

fn run_spectral(args: &SpecArgs) -> Result<bool, RunError> {
    let spec = args.spec()?;
    match args.format(Format::Csv) {
        Format::Csv => args.emit(density_csv(&spec, args.n_max_or(256)?))?,
        Format::Json => {
            let sz = szego_constants(&spec)?;
            args.emit(serde_json::to_string_pretty(&sz)? + "\n")?;
        }
    }
    Ok(true)
}

fn run_analytic(args: &SpecArgs) -> Result<bool, RunError> {
    let spec = args.spec()?;
    if !spec.is_pure_fgn() {
        return Err(UsageError(
            "the boundary-phase context depends only on d; drop --theta/--phi".into(),
        )
        .into());
    }
    let ctx = AnalyticContext::load_or_build(args.d, DEFAULT_RESOLUTION)?;
    let psi0 = ctx.psi(num_complex::Complex64::new(0.0, 0.0))?;
    #[derive(serde::Serialize)]
    struct ContextSummary {
        d: f64,
        resolution: usize,
        s0: Option<f64>,
        sigma0_sq: f64,
        psi0: f64,
    }
    let summary = ContextSummary {
        d: ctx.d(),
        resolution: ctx.resolution(),
        s0: ctx.s0(),
        sigma0_sq: ctx.sigma0_sq(),
        psi0: psi0.re,
    };
    match args.format(Format::Json) {
        Format::Json => args.emit(serde_json::to_string_pretty(&summary)? + "\n")?,
        Format::Csv => {
            let s0 = summary.s0.map(|v| v.to_string()).unwrap_or_default();
            args.emit(format!(
                "d,resolution,s0,sigma0_sq,psi0\n{},{},{s0},{},{}\n",
                summary.d, summary.resolution, summary.sigma0_sq, summary.psi0
            ))?;
        }
    }
    Ok(true)
}

fn run_inteq(args: &SpecArgs) -> Result<bool, RunError> {
    match args.format(Format::Json) {
        Format::Json => {
            let report = constants_report(args.d)?;
            args.emit(serde_json::to_string_pretty(&report)? + "\n")?;
        }
        Format::Csv => {
            let solution = solve_stieltjes(args.d, true, 1, SolveMethod::DenseLu)?;
            args.emit(solution.to_csv())?;
        }
    }
    Ok(true)
}

#[derive(serde::Serialize)]
struct AsymptRow {
    n: usize,
    a_last: f64,
    b_last: f64,
    sigma2_exact: f64,
    sigma2_recombined: f64,
    alpha_exact: f64,
    alpha_recombined: f64,
    alpha_predicted: f64,
}

fn run_asympt(args: &SpecArgs) -> Result<bool, RunError> {
    let spec = args.spec()?;
    let grid = args.orders(&[64, 128, 256])?;
    let n_top = *grid.last().unwrap();
    let cov = covariance(&spec, n_top)?;
    let trace = levinson_trace(&cov, n_top, args.precision.to_lib())?;
    let ctx = AnalyticContext::load_or_build(spec.d(), 1024)?;
    let d = spec.d();
    let rows: Vec<AsymptRow> = grid
        .par_iter()
        .map(|&n| -> Result<AsymptRow, Error> {
            let sys = KernelSystem::solve(&ctx, &spec, n)?;
            let sol = solve_ab(&ctx, &spec, &sys)?;
            Ok(AsymptRow {
                n,
                a_last: sol.a_last,
                b_last: sol.b_last,
                sigma2_exact: trace.sigma2(n),
                sigma2_recombined: sol.sigma2,
                alpha_exact: trace.alpha(n),
                alpha_recombined: sol.alpha,
                alpha_predicted: d / n as f64,
            })
        })
        .collect::<Result<_, _>>()?;
    match args.format(Format::Json) {
        Format::Json => args.emit(serde_json::to_string_pretty(&rows)? + "\n")?,
        Format::Csv => {
            let mut out = String::from(
                "n,a_last,b_last,sigma2_exact,sigma2_recombined,alpha_exact,alpha_recombined,alpha_predicted\n",
            );
            for r in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    r.n,
                    r.a_last,
                    r.b_last,
                    r.sigma2_exact,
                    r.sigma2_recombined,
                    r.alpha_exact,
                    r.alpha_recombined,
                    r.alpha_predicted
                ));
            }
            args.emit(out)?;
        }
    }
    Ok(true)
}

fn run_verify(args: &SpecArgs) -> Result<bool, RunError> {
    let spec = args.spec()?;
    let report = hilbert_verify::hilbert_report(&spec, args.n_max_or(32)?)?;
    let pass = report.pass;
    match args.format(Format::Json) {
        Format::Json => args.emit(serde_json::to_string_pretty(&report)? + "\n")?,
        Format::Csv => {
            let mut out = String::from("condition,residual,pass\n");
            out.push_str(&format!(
                "circle_continuity,{},{}\n",
                report.circle_continuity, report.continuity_pass
            ));
            for (t, r) in &report.boundary_residuals {
                out.push_str(&format!("boundary_t={t},{r},{}\n", report.boundary_pass));
            }
            out.push_str(&format!(
                "scaling,{},{}\n",
                report.scaling_rel_err, report.scaling_pass
            ));
            for (i, r) in report.algebraic_residuals.iter().enumerate() {
                out.push_str(&format!("algebraic_{i},{r},{}\n", report.algebraic_pass));
            }
            for (lam, r) in &report.fourier_residuals {
                out.push_str(&format!("fourier_lambda={lam},{r},{}\n", report.fourier_pass));
            }
            for (t, r) in &report.removability_residuals {
                out.push_str(&format!(
                    "removability_t={t},{r},{}\n",
                    report.removability_pass
                ));
            }
            args.emit(out)?;
        }
    }
    Ok(pass)
}

fn run_appendix_e(args: &SpecArgs) -> Result<bool, RunError> {
    if args.theta != [1.0] && args.theta != [1.0, 1.0] {
        return Err(UsageError("this table fixes θ(z) = 1 + z".into()).into());
    }
    if args.phi != [1.0] {
        return Err(UsageError("this table does not take an AR part".into()).into());
    }
    let grid: Vec<usize> = match &args.n_grid {
        Some(_) => args.orders(&[])?,
        None => (1..=args.n_max_or(1024)?).collect(),
    };
    let rows: Vec<ParityRow> =
        unit_zero_parity_table(args.d, &grid).map_err(|e| match e {
            Error::Domain(msg) => RunError::Usage(msg),
            other => RunError::Failed(other.to_string()),
        })?;
    match args.format(Format::Csv) {
        Format::Csv => {
            let mut out = String::from(
                "n,alpha,sigma2,n_alpha,alpha_predicted,n_delta_over_sigma0,delta_scale_predicted\n",
            );
            for r in &rows {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{}\n",
                    r.n,
                    r.alpha,
                    r.sigma2,
                    r.n_alpha,
                    r.alpha_predicted,
                    r.n_delta_over_sigma0,
                    r.delta_scale_predicted
                ));
            }
            args.emit(out)?;
        }
        Format::Json => args.emit(serde_json::to_string_pretty(&rows)? + "\n")?,
    }
    Ok(true)
}

#[derive(serde::Serialize)]
struct Summary {
    passed: usize,
    failed: usize,
    pass: bool,
    results: Vec<checks::CheckResult>,
}

fn run_all(args: &OutArgs) -> Result<bool, RunError> {
    let results = checks::run_all();
    let passed = results.iter().filter(|r| r.pass).count();
    let failed = results.len() - passed;
    let summary = Summary {
        passed,
        failed,
        pass: failed == 0,
        results,
    };
    match args.format {
        Format::Json => emit(&args.out, serde_json::to_string_pretty(&summary)? + "\n")?,
        Format::Csv => {
            let mut out = String::from("id,name,pass,seconds,detail\n");
            for r in &summary.results {
                out.push_str(&format!(
                    "{},{},{},{},\"{}\"\n",
                    r.id,
                    r.name,
                    r.pass,
                    r.seconds,
                    r.detail.replace('"', "\"\"")
                ));
            }
            emit(&args.out, out)?;
        }
    }
    Ok(summary.pass)
}
